use std::path::PathBuf;
use std::time::Duration;

use beilinson::gf::check_prime;
use beilinson::poly::points::ExtensionField;
use serde::{Deserialize, Serialize};

use crate::outcome::Failure;

/// Flags shared by every subcommand, echoed into each report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub prime: u32,
    pub seed: u64,
    pub trials: u64,
    pub workers: usize,
    pub budget_seconds: Option<f64>,
    pub output: Option<PathBuf>,
    pub verbosity: u8,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        check_prime(self.prime).map_err(|e| Failure::Invalid(e.to_string()))?;
        if self.workers == 0 {
            return Err(Failure::Invalid("--workers must be at least 1".into()));
        }
        if let Some(b) = self.budget_seconds {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(Failure::Invalid(format!("--budget-secs must be a finite number ≥ 0, got {b}")));
            }
        }
        Ok(())
    }

    pub fn budget(&self) -> Option<Duration> {
        self.budget_seconds.map(Duration::from_secs_f64)
    }
}

/// The field choices needed to reproduce a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FieldInfo {
    pub prime: u32,
    /// Model of the quadratic extension used by point scans.
    pub quadratic_extension: Option<String>,
}

impl FieldInfo {
    pub fn new(prime: u32) -> Self {
        Self {
            prime,
            quadratic_extension: ExtensionField::new(prime, 2)
                .ok()
                .map(|f| f.modulus_description()),
        }
    }
}
