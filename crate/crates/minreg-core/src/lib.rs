//! Estimation of the region that must contain the minimizer of a sum of two
//! strongly convex functions, given only their minimizers, strong-convexity
//! moduli, and gradient bounds.
//!
//! Two settings are covered:
//! - `p1`: the gradient bound `L` holds at the candidate minimizer itself;
//!   membership lives in [`region_p1`].
//! - `p2`: the bound holds everywhere on a compact convex set containing
//!   both minimizers, which shrinks the usable budget to
//!   `L - min(sigma1, sigma2) * d(x, boundary)`; see [`region_p2`].
//!
//! [`trace`] extracts the region boundaries as polylines, and [`oracle`]
//! cross-checks the predicted regions against directly minimized random
//! witness function pairs.

pub mod convex;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod region_p1;
pub mod region_p2;
pub mod trace;

pub use convex::{ConvexBody, ShrunkBound};
pub use error::{Error, Result};
pub use geometry::{CanonicalFrame, CanonicalProblem, ProblemConfig, ReducedPoint};
pub use oracle::{ContainmentStats, OracleParams, QuadraticFn, QuarticFn, WitnessFn};
pub use region_p1::{DerivedParams, P1Membership};
pub use region_p2::{ConstrainedRegion, P2Membership, Theorem2Report, Verdict};
pub use trace::{BoundaryPolyline, EmitFormat};
