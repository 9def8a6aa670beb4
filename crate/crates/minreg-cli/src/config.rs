//! Run configuration: JSON with fixed key names, validated on load.

use std::path::{Path, PathBuf};

use minreg_core::geometry::MEMBERSHIP_EPS;
use minreg_core::{ConvexBody, ProblemConfig};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// Gradient bound imposed at the candidate minimizer.
    P1,
    /// Gradient bound imposed throughout a convex constraint set.
    P2,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: PathBuf,
    pub format: String,
}

/// Tolerance used by the containment-verification slack check when the
/// config does not override it.
pub const VERIFY_EPS: f64 = 1e-7;

fn default_resolution() -> usize {
    512
}

fn default_samples() -> usize {
    10_000
}

fn default_kappa() -> f64 {
    10.0
}

fn default_quartic_fraction() -> f64 {
    0.25
}

/// On-disk run configuration. Coordinates are in the caller's frame; the
/// commands canonicalize internally.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub x1_star: Vec<f64>,
    pub x2_star: Vec<f64>,
    pub sigma1: f64,
    pub sigma2: f64,
    pub grad_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<ConvexBody>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_quartic_fraction")]
    pub quartic_fraction: f64,
    /// Membership tolerance override (member/trace default 1e-9, verify 1e-7).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<OutputSpec>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| format!("malformed config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        match (self.problem, &self.body) {
            (ProblemKind::P2, None) => return Err("problem p2 requires a body".into()),
            (ProblemKind::P1, Some(_)) => {
                return Err("problem p1 takes no body; use p2 for constrained runs".into())
            }
            _ => {}
        }
        if self.resolution < 2 {
            return Err("resolution must be at least 2".into());
        }
        if !(self.kappa.is_finite() && self.kappa >= 1.0) {
            return Err("kappa must be finite and >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.quartic_fraction) {
            return Err("quartic_fraction must lie in [0, 1]".into());
        }
        if let Some(t) = self.tolerance {
            if !t.is_finite() {
                return Err("tolerance must be finite".into());
            }
        }
        // The core constructor checks moduli, bound, and minimizer geometry.
        self.problem_config().map(|_| ())
    }

    pub fn problem_config(&self) -> Result<ProblemConfig, String> {
        ProblemConfig::new(
            DVector::from_vec(self.x1_star.clone()),
            DVector::from_vec(self.x2_star.clone()),
            self.sigma1,
            self.sigma2,
            self.grad_bound,
        )
        .map_err(|e| e.to_string())
    }

    /// Membership tolerance for member/trace paths.
    pub fn membership_eps(&self) -> f64 {
        self.tolerance.unwrap_or(MEMBERSHIP_EPS)
    }

    /// Slack tolerance for verification runs.
    pub fn verify_eps(&self) -> f64 {
        self.tolerance.unwrap_or(VERIFY_EPS)
    }

    /// Canonical serialized form (stable key order, defaults materialized).
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
