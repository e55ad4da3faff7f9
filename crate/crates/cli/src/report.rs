use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{FieldInfo, RunConfig};
use crate::outcome::Failure;

pub const SCHEMA_VERSION: u32 = 1;

/// Every JSON report is wrapped in this envelope.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub kind: String,
    pub version: String,
    pub config: RunConfig,
    pub field: FieldInfo,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(kind: &str, config: &RunConfig, result: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: config.clone(),
            field: FieldInfo::new(config.prime),
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Writes the JSON to `--out` (and returns true) or prints it.
pub fn emit<T: Serialize>(env: &Envelope<T>) -> Result<bool, Failure> {
    let json = env.to_json();
    match &env.config.output {
        Some(path) => {
            std::fs::write(path, json)?;
            Ok(true)
        }
        None => {
            print!("{json}");
            Ok(false)
        }
    }
}

pub fn parse(text: &str) -> Result<Envelope<Value>, Failure> {
    let env: Envelope<Value> =
        serde_json::from_str(text).map_err(|e| Failure::Invalid(format!("not a report: {e}")))?;
    if env.schema_version != SCHEMA_VERSION {
        return Err(Failure::Invalid(format!(
            "unsupported schema version {}",
            env.schema_version
        )));
    }
    Ok(env)
}

/// Human-readable rendering of any report kind.
pub fn render(env: &Envelope<Value>) -> String {
    let mut out = format!(
        "{} report (beilinson {}, schema {})\nfield F_{}",
        env.kind, env.version, env.schema_version, env.field.prime
    );
    if let Some(ext) = &env.field.quadratic_extension {
        let _ = write!(out, ", F_{}^2 = {ext}", env.field.prime);
    }
    let _ = writeln!(out, "; seed {}, workers {}", env.config.seed, env.config.workers);
    let r = &env.result;
    match env.kind.as_str() {
        "search" => render_search(&mut out, r),
        "verify" => render_verify(&mut out, r),
        "adjunction" => {
            let _ = writeln!(out, "{}", r["table"].as_str().unwrap_or(""));
        }
        "phi" => {
            let _ = writeln!(out, "phi (10x3):\n{}", r["phi"].as_str().unwrap_or(""));
            let _ = writeln!(out, "equivalent to reference phi: {}", r["equivalent"]);
        }
        _ => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(r).unwrap_or_default());
        }
    }
    out
}

fn render_search(out: &mut String, r: &Value) {
    let _ = writeln!(
        out,
        "trials {}/{}{}",
        r["trialsCompleted"],
        r["trials"],
        if r["truncated"].as_bool() == Some(true) { " (truncated)" } else { "" }
    );
    let _ = writeln!(out, "corank histogram {}", r["corankHistogram"]);
    let _ = writeln!(
        out,
        "corank-2 hits {}: type1 {}, type2 {}, other {}",
        r["rankHits"], r["fingerprint1Hits"], r["fingerprint2Hits"], r["otherFingerprintHits"]
    );
}

fn render_verify(out: &mut String, r: &Value) {
    let _ = writeln!(out, "{:<14} {:<13} {:>8}  detail", "stage", "status", "secs");
    for s in r["stages"].as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "{:<14} {:<13} {:>8.3}  {}",
            s["name"].as_str().unwrap_or("?"),
            s["status"].as_str().unwrap_or("?"),
            s["elapsedSecs"].as_f64().unwrap_or(0.0),
            s["detail"].as_str().unwrap_or("")
        );
    }
    if let Some(fit) = r.get("hilbertFit").filter(|v| !v.is_null()) {
        let _ = writeln!(
            out,
            "hilbert fit: d = {}, genus = {}, chi = {}",
            fit["degree"], fit["sectionalGenus"], fit["chi"]
        );
    }
    let _ = writeln!(out, "outcome: {}", r["outcome"].as_str().unwrap_or("?"));
}
