use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Everything needed to rerun a command and check its output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    pub parameters: Value,
    pub seeds: Vec<u64>,
    pub library_version: String,
    pub wall_time_s: f64,
    /// SHA-256 of the compact JSON of the result.
    pub output_digest: String,
}

pub fn digest(result: &Value) -> String {
    let text = serde_json::to_string(result).expect("JSON values serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}
