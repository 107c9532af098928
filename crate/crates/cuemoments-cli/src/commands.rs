use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use cuemoments::algebra::rational::{is_integer, parse_rational, rat, to_f64, to_pq, Rational};
use cuemoments::algebra::{Poly, RationalFunction, SymPoly};
use cuemoments::cauchy::{
    finite_joint_moment, keating_snaith_constant, keating_snaith_constant_exact, limiting_moment, limiting_v_moment,
    MomentSpec, Size, Variant,
};
use cuemoments::hankel::{
    alternating_identity_residual, first_relation_residual, initial_condition_residuals, lemma_t1_residual,
    second_relation_residual, vector_recursion_residual, weighted_identity_residual, Partition, Perturbation,
    ThetaFamily, WEIGHTED_IDENTITY_OFFSET,
};
use cuemoments::mc::{
    asymptotics_table, estimate_joint_moment_blocks, quadrature_expectation, sample_hp, ChainConfig, Engine, Integrand,
    MomentIntegrand, QuadratureOptions,
};
use cuemoments::painleve::{painleve5_residual, sigma_p3_residual, tau_finite_n, tau_limit, TauRepr};

use crate::output::{CliError, Outcome, EXIT_DIAGNOSTICS, EXIT_IDENTITY};
use crate::{ChainArgs, SpecArgs, VariantArg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum PainleveMode {
    #[value(name = "p5-finite")]
    P5Finite,
    #[value(name = "p3-limit")]
    P3Limit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum EngineArg {
    Exact,
    Mc,
}

type CmdResult = Result<Outcome, CliError>;

fn variant(v: VariantArg) -> Variant {
    match v {
        VariantArg::V => Variant::V,
        VariantArg::Z => Variant::Z,
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| CliError::invalid(format!("bad {what} entry {p:?} in {text:?}"))))
        .collect()
}

/// Builds a spec from `--orders` / `--exponents`; `_` stands for an order-0 exponent.
fn parse_spec(orders: &str, exponents: &str, v: VariantArg, size: Size) -> Result<MomentSpec, CliError> {
    let orders: Vec<usize> = parse_list(orders, "order")?;
    let raw: Vec<&str> = exponents.split(',').map(str::trim).collect();
    if raw.len() != orders.len() {
        return Err(CliError::invalid(format!("{} orders but {} exponents", orders.len(), raw.len())));
    }
    let mut exps = Vec::with_capacity(raw.len());
    for (&n, e) in orders.iter().zip(&raw) {
        if *e == "_" {
            if n != 0 {
                return Err(CliError::invalid(format!("placeholder `_` is only allowed for order 0, not order {n}")));
            }
            exps.push(0.0);
        } else {
            let r = parse_rational(e).map_err(CliError::from)?;
            exps.push(to_f64(&r));
        }
    }
    Ok(MomentSpec::new(orders, exps, variant(v), size)?)
}

fn spec_from(args: &SpecArgs, size: Size) -> Result<MomentSpec, CliError> {
    parse_spec(&args.orders, &args.exponents, args.variant, size)
}

fn two_power(weight: f64) -> Result<Rational, CliError> {
    if weight.fract() != 0.0 || weight > 4096.0 {
        return Err(CliError::invalid(format!("derivative weight {weight} is not a small integer")));
    }
    Ok(rat(1) / rat(2).pow(weight as i32))
}

fn exact_json(f: &RationalFunction) -> Value {
    json!({ "function": f, "display": f.display_in("s") })
}

/// Exact value at `s` plus its float rendering.
fn evaluate(f: &RationalFunction, s_text: &str) -> Result<(Rational, Value), CliError> {
    let s = parse_rational(s_text)?;
    let v = f.eval(&s)?;
    let out = json!({ "s": to_pq(&s), "value": to_pq(&v), "value_f64": to_f64(&v) });
    Ok((v, out))
}

pub fn leading_coeff(args: &SpecArgs, eval_s: Option<&str>, with_constant: bool) -> CmdResult {
    let spec = spec_from(args, Size::Limit)?;
    let pairs = spec.even_pairs()?;
    if pairs.is_empty() {
        return Err(CliError::invalid("at least one positive derivative order is needed"));
    }
    let orders: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let exps: Vec<u32> = pairs.iter().map(|p| p.1).collect();
    let f = match spec.variant {
        Variant::Z => limiting_moment(&orders, &exps)?,
        Variant::V => limiting_v_moment(&orders, &exps)?,
    };
    let mut result = json!({ "spec": spec, "limit": exact_json(&f) });
    let mut summary = format!("limit = {}", f.display_in("s"));
    if let Some(st) = eval_s {
        let (v, mut at) = evaluate(&f, st)?;
        summary = format!("{summary}; at s = {st}: {}", to_pq(&v));
        if with_constant {
            let weight = spec.derivative_weight();
            let s = parse_rational(st)?;
            if s <= rat(0) {
                return Err(CliError::invalid("the constant needs s > 0"));
            }
            let pow2 = two_power(weight)?;
            if is_integer(&s) {
                let k = s.to_integer().try_into().map_err(|_| CliError::invalid("s too large"))?;
                let c = keating_snaith_constant_exact(k) * pow2;
                let full = &c * &v;
                at["constant"] = json!(to_pq(&c));
                at["with_constant"] = json!(to_pq(&full));
                at["with_constant_f64"] = json!(to_f64(&full));
            } else {
                let c = keating_snaith_constant(to_f64(&s)) * to_f64(&pow2);
                at["constant_f64"] = json!(c);
                at["with_constant_f64"] = json!(c * to_f64(&v));
            }
        }
        result["evaluation"] = at;
    } else if with_constant {
        return Err(CliError::invalid("--with-constant needs --eval-s"));
    }
    Ok(Outcome::ok(result, summary))
}

pub fn finite_moment(big_n: usize, args: &SpecArgs, eval_s: Option<&str>) -> CmdResult {
    let spec = spec_from(args, Size::Finite(big_n))?;
    let f = finite_joint_moment(&spec)?;
    let mut result = json!({ "spec": spec, "N": big_n, "moment": exact_json(&f) });
    let mut summary = format!("N = {big_n}: {}", f.display_in("s"));
    if let Some(st) = eval_s {
        let (v, at) = evaluate(&f, st)?;
        summary = format!("{summary}; at s = {st}: {}", to_pq(&v));
        result["evaluation"] = at;
    }
    Ok(Outcome::ok(result, summary))
}

fn chain_config(big_n: usize, s: f64, c: &ChainArgs) -> ChainConfig {
    ChainConfig {
        chains: c.chains,
        samples: c.samples,
        burn_in: c.burn_in,
        thin: c.thin,
        ..ChainConfig::new(big_n, s, c.seed)
    }
}

pub fn mc_estimate(big_n: usize, s: f64, args: &SpecArgs, chain: &ChainArgs, blocks: usize) -> CmdResult {
    let spec = spec_from(args, Size::Finite(big_n))?;
    let cfg = chain_config(big_n, s, chain);
    let batch = sample_hp(&cfg)?;
    let est = estimate_joint_moment_blocks(&batch, &spec, blocks)?;
    let result = json!({
        "spec": spec,
        "N": big_n,
        "s": s,
        "estimate": est.estimate,
        "stderr": est.stderr,
        "ess": est.ess,
        "blocks": est.blocks,
        "draws": batch.len(),
        "acceptance_rate": batch.acceptance_rate,
        "chains": batch.chains,
        "flagged": batch.flagged,
    });
    let summary = format!(
        "estimate {:.8} ± {:.2e} (ESS {:.0}, acceptance {:.3})",
        est.estimate, est.stderr, est.ess, batch.acceptance_rate
    );
    if batch.flagged {
        return Ok(Outcome {
            result,
            summary: format!("{summary}; a chain left the healthy acceptance window"),
            exit: EXIT_DIAGNOSTICS,
            table: None,
        });
    }
    Ok(Outcome::ok(result, summary))
}

#[allow(clippy::too_many_arguments)]
pub fn quadrature(
    big_n: usize,
    s: f64,
    poly: Option<&str>,
    orders: Option<&str>,
    exponents: Option<&str>,
    v: VariantArg,
    nodes: usize,
    rel_tol: f64,
) -> CmdResult {
    if nodes == 0 || rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(CliError::invalid("--nodes and --rel-tol must be positive"));
    }
    let opts = QuadratureOptions { nodes_per_dim: nodes, rel_tol, ..QuadratureOptions::default() };
    let (value, integrand) = match (poly, orders, exponents) {
        (Some(text), _, _) => {
            let p = SymPoly::parse(text, big_n)?;
            (quadrature_expectation(big_n, s, &Integrand::Poly(&p), &opts)?, json!({ "poly": text }))
        }
        (None, Some(o), Some(e)) => {
            let spec = parse_spec(o, e, v, Size::Finite(big_n))?;
            let f = MomentIntegrand::new(&spec, big_n)?;
            let g = |x: &[f64]| f.eval(x);
            (quadrature_expectation(big_n, s, &Integrand::Real(&g), &opts)?, json!({ "spec": spec }))
        }
        _ => return Err(CliError::invalid("give --poly or both --orders and --exponents")),
    };
    let result = json!({
        "N": big_n,
        "s": s,
        "integrand": integrand,
        "value": value.re,
        "imag": value.im,
        "error_estimate": value.error_estimate,
        "nodes_per_dim": value.nodes_per_dim,
    });
    Ok(Outcome::ok(
        result,
        format!(
            "expectation {:.12} (error ≤ {:.1e}, {} nodes per axis)",
            value.re, value.error_estimate, value.nodes_per_dim
        ),
    ))
}

fn positive_integer_s(text: &str) -> Result<usize, CliError> {
    let s = parse_rational(text)?;
    if !is_integer(&s) || s <= rat(0) {
        return Err(CliError {
            code: crate::output::EXIT_INVALID,
            kind: "unsupported_parameter",
            message: format!("s = {text} is not a positive integer; tau functions are exact only for integer s"),
        });
    }
    s.to_integer().try_into().map_err(|_| CliError::invalid("s too large"))
}

pub fn painleve(mode: PainleveMode, big_n: usize, s_text: &str, order: usize) -> CmdResult {
    let s = positive_integer_s(s_text)?;
    match mode {
        PainleveMode::P5Finite => {
            let tau = tau_finite_n(big_n, s)?;
            let TauRepr::Exact(f) = &tau.repr else { unreachable!("finite-N tau is exact") };
            let residual = painleve5_residual(f, big_n, s);
            let zero = residual.is_zero();
            let result = json!({
                "mode": "p5-finite",
                "N": big_n,
                "s": s,
                "residual_zero": zero,
                "tau": f.display_in("t"),
                "tau_exact": f,
                "residual": residual,
            });
            let summary = format!(
                "Painlevé V residual at N = {big_n}, s = {s}: {}",
                if zero { "identically zero" } else { "NONZERO" }
            );
            Ok(Outcome { result, summary, exit: if zero { 0 } else { EXIT_IDENTITY }, table: None })
        }
        PainleveMode::P3Limit => {
            if order < 3 {
                return Err(CliError::invalid("--series-order must be at least 3"));
            }
            let tau = tau_limit(s, order)?;
            let TauRepr::Series(series) = &tau.repr else { unreachable!("limiting tau is a series") };
            let residual = sigma_p3_residual(&tau)?;
            let checked = order - 2;
            let coeffs: Vec<String> = residual.coeffs().iter().take(checked + 1).map(to_pq).collect();
            // number of leading coefficients that vanish
            let vanishing = residual.coeffs().iter().take(checked + 1).take_while(|c| **c == rat(0)).count();
            let zero = vanishing == checked + 1;
            let result = json!({
                "mode": "p3-limit",
                "s": s,
                "series_order": order,
                "checked_through": checked,
                "residual_zero": zero,
                "vanishing_order": vanishing,
                "residual": coeffs,
                "tau": series.coeffs().iter().map(to_pq).collect::<Vec<_>>(),
                "c2": to_pq(&series.coeff(2)),
            });
            let summary = format!(
                "σ-Painlevé III′ residual at s = {s}: {} through t^{checked}",
                if zero { "zero" } else { "NONZERO" }
            );
            Ok(Outcome { result, summary, exit: if zero { 0 } else { EXIT_IDENTITY }, table: None })
        }
    }
}

struct Check {
    name: String,
    residuals: Vec<Poly>,
}

impl Check {
    fn new(name: impl Into<String>, residuals: Vec<Poly>) -> Self {
        Check { name: name.into(), residuals }
    }

    fn pass(&self) -> bool {
        self.residuals.iter().all(Poly::is_zero)
    }

    fn to_json(&self, t: &Rational) -> Value {
        let at_t: Vec<String> = self.residuals.iter().map(|p| to_pq(&p.eval(t))).collect();
        let nonzero_terms =
            self.residuals.iter().map(|p| p.coeffs().iter().filter(|c| **c != rat(0)).count()).sum::<usize>();
        json!({ "identity": self.name, "pass": self.pass(), "residual_at_t": at_t, "nonzero_terms": nonzero_terms })
    }
}

pub fn hankel_verify(l: usize, k: usize, big_n: usize, s: usize, t_text: &str, perturb: bool) -> CmdResult {
    if big_n == 0 || s == 0 {
        return Err(CliError::invalid("N and s must be at least 1"));
    }
    if l < 3 {
        return Err(CliError::invalid("the vector recursion needs l ≥ 3"));
    }
    if k < 2 {
        return Err(CliError::invalid("the vector recursion needs k ≥ 2"));
    }
    let t = parse_rational(t_text)?;
    let fam = ThetaFamily::new(big_n, s, 24)?;
    let mut checks = vec![
        Check::new("theta_derivative", (0..=20).map(|m| fam.derivative_residual(m)).collect()),
        Check::new("theta_three_term", (0..=20).map(|g| fam.three_term_residual(g)).collect()),
    ];
    for j in 1..=l {
        checks.push(Check::new(format!("alternating_sum_l{j}"), vec![alternating_identity_residual(big_n, s, j)?]));
        checks.push(Check::new(
            format!("weighted_alternating_sum_l{j}"),
            vec![weighted_identity_residual(big_n, s, j, WEIGHTED_IDENTITY_OFFSET)?],
        ));
    }
    checks.push(Check::new("initial_conditions", initial_condition_residuals(big_n, s)?.to_vec()));
    let mut lemma = vec![lemma_t1_residual(big_n, s, &Partition::empty())?];
    for q in 1..=l {
        lemma.push(lemma_t1_residual(big_n, s, &Partition::hook(l, q)?)?);
    }
    checks.push(Check::new("lemma_t1", lemma));
    let p = if perturb { Perturbation::Q2Entry } else { Perturbation::None };
    checks.push(Check::new("vector_recursion", vector_recursion_residual(l, k, big_n, s, p)?));
    checks.push(Check::new("relation_1", vec![first_relation_residual(big_n, s)?]));
    let (re, im) = second_relation_residual(big_n, s)?;
    checks.push(Check::new("relation_2", vec![re, im]));

    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass()).map(|c| c.name.as_str()).collect();
    let result = json!({
        "l": l, "k": k, "N": big_n, "s": s, "t": to_pq(&t), "perturb": perturb,
        "identities": checks.iter().map(|c| c.to_json(&t)).collect::<Vec<_>>(),
        "all_pass": failed.is_empty(),
        "failed": failed,
    });
    if failed.is_empty() {
        return Ok(Outcome::ok(result, format!("{} identities hold exactly", checks.len())));
    }
    let summary = format!("failed identities: {}", failed.join(", "));
    Ok(Outcome { result, summary, exit: EXIT_IDENTITY, table: None })
}

pub fn asymptotics(args: &SpecArgs, s_text: &str, sizes: &str, engine: EngineArg, chain: &ChainArgs) -> CmdResult {
    let spec = spec_from(args, Size::Limit)?;
    let s = to_f64(&parse_rational(s_text)?);
    let sizes: Vec<usize> = parse_list(sizes, "size")?;
    let engine = match engine {
        EngineArg::Exact => Engine::Exact,
        EngineArg::Mc => Engine::MonteCarlo(chain_config(1, s, chain)),
    };
    let table = asymptotics_table(&spec, s, &sizes, &engine)?;
    let header = ["N", "value", "stderr", "exact"].map(String::from).to_vec();
    let row = |n: String, r: &cuemoments::mc::AsymptoticsRow| {
        vec![
            n,
            format!("{:.12e}", r.value),
            r.stderr.map(|e| format!("{e:.3e}")).unwrap_or_default(),
            r.exact.as_ref().map(|f| f.display_in("s")).unwrap_or_default(),
        ]
    };
    let mut rows: Vec<Vec<String>> = table.rows.iter().map(|r| row(r.big_n.unwrap_or(0).to_string(), r)).collect();
    if let Some(lim) = &table.limit {
        rows.push(row("inf".into(), lim));
    }
    let summary = match &table.limit {
        Some(l) => format!("{} sizes; limit {:.10}", table.rows.len(), l.value),
        None => format!("{} sizes; no closed-form limit for these exponents", table.rows.len()),
    };
    let result = serde_json::to_value(&table)?;
    Ok(Outcome { result, summary, exit: 0, table: Some((header, rows)) })
}
