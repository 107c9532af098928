//! `cuemoments`: exact, quadrature and Monte Carlo joint moments from the command line.
//!
//! Results go to stdout as JSON (or CSV for tables), a one-line summary to
//! stderr. Exit codes: 0 success, 2 invalid input, 3 Monte Carlo diagnostics
//! failure, 4 failed identity or failed replay, 1 anything else.

mod commands;
mod manifest;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use manifest::{digest, RunManifest};
use output::{csv_line, CliError, Outcome, EXIT_IDENTITY};

#[derive(Parser, Debug)]
#[command(name = "cuemoments", version, about = "Joint moments of derivatives of CUE characteristic polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; `csv` applies to table commands.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Also write the run manifest to this file.
    #[arg(long, global = true)]
    manifest_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum VariantArg {
    #[value(name = "V", alias = "v")]
    V,
    #[value(name = "Z", alias = "z")]
    Z,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpecArgs {
    /// Derivative orders, strictly decreasing, e.g. `2,0`.
    #[arg(long)]
    pub orders: String,
    /// Exponents `2h_j`; `_` for a placeholder on order 0.
    #[arg(long)]
    pub exponents: String,
    #[arg(long, value_enum, default_value_t = VariantArg::Z)]
    pub variant: VariantArg,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ChainArgs {
    #[arg(long, env = "CUEMOMENTS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub chains: usize,
    /// Recorded draws per chain.
    #[arg(long, default_value_t = 50_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 2_000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Limiting coefficient as a rational function of s.
    ///
    /// Z-variant values are E[∏ Y_n^{2h}]. V-variant values are
    /// E[∏ |Σ_m C(n,m)(-i)^m Y_{n-m}|^{2h}]; for one derivative with exponent 2
    /// this is 2^{2n}(2s-1)/(2s-1+2n) ∏_l ((l+s-1)/(l+2s-2))², e.g. 16/15 at n=1, s=2.
    /// `--with-constant` multiplies by G(s+1)²/G(2s+1)·2^{-Σ2h_j n_j}.
    #[command(name = "leading-coeff", visible_alias = "leading_coeff")]
    LeadingCoeff {
        #[command(flatten)]
        spec: SpecArgs,
        /// Evaluate at this s (integer, fraction or decimal).
        #[arg(long)]
        eval_s: Option<String>,
        #[arg(long)]
        with_constant: bool,
    },
    /// Exact finite-N ratio 2^{-Σ2h_j n_j} E_N[integrand].
    #[command(name = "finite-moment", visible_alias = "finite_moment")]
    FiniteMoment {
        #[arg(long = "N")]
        big_n: usize,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        eval_s: Option<String>,
    },
    /// Monte Carlo estimate of the finite-N ratio; exponents may be any positive reals.
    #[command(name = "mc-estimate", visible_alias = "mc_estimate")]
    McEstimate {
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        chain: ChainArgs,
        /// Batch-means blocks, 20 to 50.
        #[arg(long, default_value_t = 40)]
        blocks: usize,
    },
    /// Tensor Gauss–Legendre expectation for N ≤ 3.
    Quadrature {
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long)]
        s: f64,
        /// Polynomial integrand such as `x1^2 - x1*x2`.
        #[arg(long, conflicts_with_all = ["orders", "exponents"])]
        poly: Option<String>,
        #[arg(long, requires = "exponents")]
        orders: Option<String>,
        #[arg(long, requires = "orders")]
        exponents: Option<String>,
        #[arg(long, value_enum, default_value_t = VariantArg::Z)]
        variant: VariantArg,
        #[arg(long, default_value_t = 16)]
        nodes: usize,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
    },
    /// Painlevé residuals of the finite-N and limiting tau functions.
    Painleve {
        #[arg(long, value_enum)]
        mode: commands::PainleveMode,
        #[arg(long = "N", default_value_t = 1)]
        big_n: usize,
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 12)]
        series_order: usize,
    },
    /// Exact checks of the Hankel-determinant identities.
    #[command(name = "hankel-verify", visible_alias = "hankel_verify")]
    HankelVerify {
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long = "N", default_value_t = 2)]
        big_n: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value = "1")]
        t: String,
        /// Negative control: add one to the top-left entry of Q_2.
        #[arg(long)]
        perturb: bool,
    },
    /// Normalized finite-N values next to the limit.
    Asymptotics {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        s: String,
        /// Comma-separated matrix sizes.
        #[arg(long, default_value = "1,2,3,4")]
        sizes: String,
        #[arg(long, value_enum, default_value_t = commands::EngineArg::Exact)]
        engine: commands::EngineArg,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Rerun a manifest and compare output digests.
    Replay { manifest: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::LeadingCoeff { .. } => "leading_coeff",
            Command::FiniteMoment { .. } => "finite_moment",
            Command::McEstimate { .. } => "mc_estimate",
            Command::Quadrature { .. } => "quadrature",
            Command::Painleve { .. } => "painleve",
            Command::HankelVerify { .. } => "hankel_verify",
            Command::Asymptotics { .. } => "asymptotics",
            Command::Replay { .. } => "replay",
        }
    }

    fn seeds(&self) -> Vec<u64> {
        match self {
            Command::McEstimate { chain, .. } => vec![chain.seed],
            Command::Asymptotics { chain, engine: commands::EngineArg::Mc, .. } => vec![chain.seed],
            _ => Vec::new(),
        }
    }
}

fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command.clone() {
        Command::LeadingCoeff { spec, eval_s, with_constant } => {
            commands::leading_coeff(&spec, eval_s.as_deref(), with_constant)
        }
        Command::FiniteMoment { big_n, spec, eval_s } => commands::finite_moment(big_n, &spec, eval_s.as_deref()),
        Command::McEstimate { big_n, s, spec, chain, blocks } => commands::mc_estimate(big_n, s, &spec, &chain, blocks),
        Command::Quadrature { big_n, s, poly, orders, exponents, variant, nodes, rel_tol } => commands::quadrature(
            big_n,
            s,
            poly.as_deref(),
            orders.as_deref(),
            exponents.as_deref(),
            variant,
            nodes,
            rel_tol,
        ),
        Command::Painleve { mode, big_n, s, series_order } => commands::painleve(mode, big_n, &s, series_order),
        Command::HankelVerify { l, k, big_n, s, t, perturb } => commands::hankel_verify(l, k, big_n, s, &t, perturb),
        Command::Asymptotics { spec, s, sizes, engine, chain } => {
            commands::asymptotics(&spec, &s, &sizes, engine, &chain)
        }
        Command::Replay { manifest } => replay(&manifest),
    }
}

/// Runs `argv` (without program name) and returns the outcome with its manifest.
fn run(argv: &[String]) -> Result<(Outcome, RunManifest, Format, Option<PathBuf>), CliError> {
    let cli = Cli::try_parse_from(std::iter::once("cuemoments".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| CliError::invalid(e.to_string().trim_start_matches("error: ").trim_end().to_string()))?;
    let start = Instant::now();
    let outcome = execute(&cli.command)?;
    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        argv: argv.to_vec(),
        parameters: serde_json::to_value(&cli.command)?,
        seeds: cli.command.seeds(),
        library_version: cuemoments::VERSION.to_string(),
        wall_time_s: start.elapsed().as_secs_f64(),
        output_digest: digest(&outcome.result),
    };
    Ok((outcome, manifest, cli.format, cli.manifest_out))
}

fn replay(path: &PathBuf) -> Result<Outcome, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("not JSON: {e}")))?;
    // accept either a bare manifest or a full command output
    let m = value.get("manifest").cloned().unwrap_or(value);
    let expected: RunManifest =
        serde_json::from_value(m).map_err(|e| CliError::invalid(format!("not a run manifest: {e}")))?;
    if expected.command == "replay" {
        return Err(CliError::invalid("cannot replay a replay"));
    }
    let (outcome, actual, _, _) = run(&expected.argv)?;
    let reproduced = actual.output_digest == expected.output_digest;
    let result = json!({
        "replayed_command": expected.command,
        "expected_digest": expected.output_digest,
        "actual_digest": actual.output_digest,
        "reproduced": reproduced,
        "replayed_result": outcome.result,
    });
    let summary =
        format!("replay of {}: digest {}", expected.command, if reproduced { "reproduced" } else { "MISMATCH" });
    Ok(Outcome { result, summary, exit: if reproduced { 0 } else { EXIT_IDENTITY }, table: None })
}

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    // help and version go through clap's own printing and exit codes
    if let Err(e) = Cli::try_parse_from(std::env::args()) {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            e.exit();
        }
    }
    let code = match run(&argv) {
        Ok((outcome, manifest, format, manifest_out)) => {
            let mut stdout = std::io::stdout().lock();
            let manifest_json = serde_json::to_value(&manifest).expect("manifest serializes");
            match (format, &outcome.table) {
                (Format::Csv, Some((header, rows))) => {
                    let _ = writeln!(stdout, "{}", csv_line(header));
                    for r in rows {
                        let _ = writeln!(stdout, "{}", csv_line(r));
                    }
                    eprintln!("{}", serde_json::to_string(&json!({ "manifest": manifest_json })).unwrap());
                }
                _ => {
                    let body =
                        json!({ "command": manifest.command, "result": outcome.result, "manifest": manifest_json });
                    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&body).unwrap());
                }
            }
            if let Some(path) = manifest_out {
                if let Err(e) = std::fs::write(&path, serde_json::to_string_pretty(&manifest_json).unwrap()) {
                    eprintln!("cannot write manifest to {}: {e}", path.display());
                }
            }
            eprintln!("{}", outcome.summary);
            outcome.exit
        }
        Err(e) => {
            println!("{}", serde_json::to_string_pretty(&e.to_json()).unwrap());
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}
