use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1.0";
const SIGNIFICANT: usize = 12;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: Value,
    pub timing: Timing,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

/// SHA-256 over the input files and the canonical parameter string, hex
/// encoded. Paths are left out so the digest only depends on content.
pub fn inputs_digest(files: &[&[u8]], params: &str) -> String {
    let mut h = Sha256::new();
    for f in files {
        h.update((f.len() as u64).to_le_bytes());
        h.update(f);
    }
    h.update(params.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Rounds every float in `value` to 12 significant digits.
pub fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap(), SIGNIFICANT);
            *value = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Four significant digits for human-readable summaries.
pub fn human(x: f64) -> String {
    format!("{}", round_sig(x, 4))
}
