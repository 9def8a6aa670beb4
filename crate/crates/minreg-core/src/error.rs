//! Crate-wide error type.

use crate::region_p2::Theorem2Report;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    /// The two minimizers coincide (or nearly so); no canonical frame exists.
    #[error("degenerate configuration: minimizers are closer than {0:.3e}")]
    DegenerateConfig(f64),

    /// Invalid problem data (non-positive modulus, dimension mismatch, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Angle quantities are undefined at the minimizers themselves.
    #[error("operation undefined at a minimizer (distance {dist:.3e} below threshold)")]
    UndefinedAtMinimizer { dist: f64 },

    /// The point lies outside the gradient-bound ball of one function, so the
    /// admissible-angle construction has no solution there.
    #[error("point outside the bound ball: sigma*d/bound = {arg} exceeds 1")]
    OutOfBall { arg: f64 },

    /// The point is not on the named ball boundary within tolerance.
    #[error("point not on the requested ball boundary: |d - bound/sigma| = {dev:.3e}")]
    NotOnBallBoundary { dev: f64 },

    /// Query point lies outside the convex body.
    #[error("point lies outside the convex body")]
    OutsideBody,

    /// The shrunk gradient bound is non-positive at the query point, so no
    /// admissible function family exists there.
    #[error("shrunk gradient bound is non-positive ({value:.3e}) at the query point")]
    NonpositiveBound { value: f64 },

    /// The half-distance between minimizers exceeds the bound under which the
    /// traced curve characterizes the region boundary; only membership
    /// queries are meaningful.
    #[error(
        "boundary characterization requires r <= (L/2)*min(1/sigma1, 1/sigma2); \
         got r = {r}, limit = {limit}. Use membership queries instead."
    )]
    Theorem1NotApplicable { r: f64, limit: f64 },

    /// The constrained-region boundary hypotheses could not be verified.
    #[error("constrained boundary hypotheses not verified (verdict {:?})", report.verdict)]
    Theorem2NotApplicable { report: Box<Theorem2Report> },

    /// The tracing grid found too few boundary cells to assemble a curve.
    #[error("resolution too coarse: only {cells} boundary cells found (need >= 16)")]
    ResolutionTooCoarse { cells: usize },

    /// Iterative minimization failed to converge; indicates a bug, not a
    /// mathematical outcome (the objective is strongly convex).
    #[error("iterative minimizer did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
