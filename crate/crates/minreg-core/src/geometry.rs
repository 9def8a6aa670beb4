//! Problem data, canonical coordinates, and the shared angle primitives.
//!
//! Every region predicate in this crate works in a canonical frame where the
//! two minimizers sit at `(-r, 0, ..., 0)` and `(r, 0, ..., 0)`. A rigid
//! motion (rotation + translation) maps arbitrary minimizers onto the axis,
//! and a point then reduces to the pair `(z1, u)`: its axial coordinate and
//! the norm of the remaining coordinates. All distances and angles that the
//! region math consumes depend only on `(z1, u)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distances below this are treated as coincident points.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// Default tolerance on closed membership inequalities.
pub const MEMBERSHIP_EPS: f64 = 1e-9;

/// Problem data: minimizers, strong-convexity moduli, gradient bound.
///
/// Coordinates are in the caller's (original) frame. Inputs are assumed to be
/// of order one after canonicalization; the degeneracy threshold is absolute,
/// so rescaling badly scaled problems is the caller's responsibility.
#[derive(Clone, Debug)]
pub struct ProblemConfig {
    pub x1_star: DVector<f64>,
    pub x2_star: DVector<f64>,
    pub sigma1: f64,
    pub sigma2: f64,
    pub grad_bound: f64,
}

impl ProblemConfig {
    pub fn new(
        x1_star: DVector<f64>,
        x2_star: DVector<f64>,
        sigma1: f64,
        sigma2: f64,
        grad_bound: f64,
    ) -> Result<Self> {
        if x1_star.len() != x2_star.len() {
            return Err(Error::InvalidConfig(format!(
                "minimizer dimensions differ: {} vs {}",
                x1_star.len(),
                x2_star.len()
            )));
        }
        if x1_star.len() < 2 {
            return Err(Error::InvalidConfig(
                "ambient dimension must be at least 2".into(),
            ));
        }
        for (name, v) in [
            ("sigma1", sigma1),
            ("sigma2", sigma2),
            ("grad_bound", grad_bound),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and positive"
                )));
            }
        }
        if !x1_star.iter().chain(x2_star.iter()).all(|c| c.is_finite()) {
            return Err(Error::InvalidConfig(
                "minimizer coordinates must be finite".into(),
            ));
        }
        if (&x2_star - &x1_star).norm() < DEGENERACY_EPS {
            return Err(Error::DegenerateConfig(DEGENERACY_EPS));
        }
        Ok(Self {
            x1_star,
            x2_star,
            sigma1,
            sigma2,
            grad_bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.x1_star.len()
    }

    /// Half the distance between the minimizers.
    pub fn half_distance(&self) -> f64 {
        0.5 * (&self.x2_star - &self.x1_star).norm()
    }

    /// Rigid motion taking the minimizers to `(-r, 0, ...)` and `(r, 0, ...)`.
    pub fn canonical_frame(&self) -> Result<CanonicalFrame> {
        CanonicalFrame::for_minimizers(&self.x1_star, &self.x2_star)
    }

    /// Canonical parameters plus the frame that produced them.
    pub fn canonicalize(&self) -> Result<(CanonicalProblem, CanonicalFrame)> {
        let frame = self.canonical_frame()?;
        let problem = CanonicalProblem {
            r: frame.half_distance,
            sigma1: self.sigma1,
            sigma2: self.sigma2,
            grad_bound: self.grad_bound,
            eps: MEMBERSHIP_EPS,
            ambient_dim: self.dim(),
        };
        Ok((problem, frame))
    }
}

/// Rigid motion `x -> R (x + t)` mapping the minimizers onto the first axis.
///
/// `R` is a proper rotation (determinant +1) and `t` is the translation
/// applied before it (the negated midpoint of the minimizers). In dimensions
/// above two, rotations about the minimizer axis are a free choice; region
/// predicates are unaffected because they only see `(z1, u)`.
#[derive(Clone, Debug)]
pub struct CanonicalFrame {
    pub rotation: DMatrix<f64>,
    pub translation: DVector<f64>,
    pub half_distance: f64,
}

impl CanonicalFrame {
    fn for_minimizers(x1: &DVector<f64>, x2: &DVector<f64>) -> Result<Self> {
        let n = x1.len();
        let diff = x2 - x1;
        let dist = diff.norm();
        if dist < DEGENERACY_EPS {
            return Err(Error::DegenerateConfig(DEGENERACY_EPS));
        }
        let v = diff / dist;
        let rotation = rotation_to_e1(&v, n);
        let midpoint = (x1 + x2) * 0.5;
        Ok(Self {
            rotation,
            translation: -midpoint,
            half_distance: 0.5 * dist,
        })
    }

    /// Original frame -> canonical frame.
    pub fn forward(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.rotation * (x + &self.translation)
    }

    /// Canonical frame -> original frame.
    pub fn inverse(&self, y: &DVector<f64>) -> DVector<f64> {
        self.rotation.transpose() * y - &self.translation
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }
}

/// Proper rotation mapping unit vector `v` to `e1`, built from Householder
/// reflections composed to determinant +1.
fn rotation_to_e1(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    let mut e1 = DVector::zeros(n);
    e1[0] = 1.0;

    // Reflect v onto +/- e1, picking the numerically safe target, then patch
    // up sign and determinant with reflections that fix e1 or flip a pair.
    let (target_sign, w) = if v[0] < 0.9 {
        (1.0, v - &e1)
    } else {
        (-1.0, v + &e1)
    };
    let h1 = householder(&w, n);

    let mut rot = h1;
    if target_sign < 0.0 {
        // h1 sent v to -e1; flip the (e1, e2) plane to land on +e1.
        let mut flip = DMatrix::identity(n, n);
        flip[(0, 0)] = -1.0;
        flip[(1, 1)] = -1.0;
        rot = flip * rot;
    }
    if rot.determinant() < 0.0 {
        // Restore det +1 with a reflection that fixes e1.
        let mut fix = DMatrix::identity(n, n);
        fix[(1, 1)] = -1.0;
        rot = fix * rot;
    }
    rot
}

fn householder(w: &DVector<f64>, n: usize) -> DMatrix<f64> {
    let nw = w.norm();
    if nw < DEGENERACY_EPS {
        return DMatrix::identity(n, n);
    }
    let u = w / nw;
    DMatrix::identity(n, n) - 2.0 * &u * u.transpose()
}

/// A point in the reduced half-plane: axial coordinate and transverse radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub z1: f64,
    pub u: f64,
}

impl ReducedPoint {
    /// `u` is a norm and must be nonnegative.
    pub fn new(z1: f64, u: f64) -> Self {
        assert!(u >= 0.0, "transverse radius must be nonnegative, got {u}");
        Self { z1, u }
    }

    /// Distance to the first minimizer `(-r, 0)`.
    pub fn d1(&self, r: f64) -> f64 {
        (self.z1 + r).hypot(self.u)
    }

    /// Distance to the second minimizer `(r, 0)`.
    pub fn d2(&self, r: f64) -> f64 {
        (self.z1 - r).hypot(self.u)
    }

    /// Reflection across the perpendicular bisector (swaps the two minimizers).
    pub fn mirrored(&self) -> Self {
        Self {
            z1: -self.z1,
            u: self.u,
        }
    }
}

/// Map a point into reduced coordinates through the canonical frame.
pub fn reduce(x: &DVector<f64>, frame: &CanonicalFrame) -> ReducedPoint {
    let y = frame.forward(x);
    let u = y.rows(1, y.len() - 1).norm();
    ReducedPoint::new(y[0], u)
}

/// Canonical problem parameters: everything the region math needs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CanonicalProblem {
    /// Half the distance between the minimizers.
    pub r: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub grad_bound: f64,
    /// Tolerance applied to closed membership inequalities.
    pub eps: f64,
    pub ambient_dim: usize,
}

impl CanonicalProblem {
    pub fn new(r: f64, sigma1: f64, sigma2: f64, grad_bound: f64) -> Result<Self> {
        for (name, v) in [
            ("r", r),
            ("sigma1", sigma1),
            ("sigma2", sigma2),
            ("grad_bound", grad_bound),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and positive"
                )));
            }
        }
        Ok(Self {
            r,
            sigma1,
            sigma2,
            grad_bound,
            eps: MEMBERSHIP_EPS,
            ambient_dim: 2,
        })
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_ambient_dim(mut self, dim: usize) -> Self {
        self.ambient_dim = dim;
        self
    }

    /// Radius of the gradient-bound ball around the first minimizer.
    pub fn ball_radius1(&self) -> f64 {
        self.grad_bound / self.sigma1
    }

    /// Radius of the gradient-bound ball around the second minimizer.
    pub fn ball_radius2(&self) -> f64 {
        self.grad_bound / self.sigma2
    }

    /// The same problem with the two functions relabeled.
    pub fn swapped(&self) -> Self {
        Self {
            sigma1: self.sigma2,
            sigma2: self.sigma1,
            ..*self
        }
    }

    /// Canonical positions of the two minimizers in the ambient dimension.
    pub fn minimizer1(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.ambient_dim);
        v[0] = -self.r;
        v
    }

    pub fn minimizer2(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.ambient_dim);
        v[0] = self.r;
        v
    }
}

/// arccos with a floating-point guard: arguments are clamped to [-1, 1];
/// overshoot beyond `tol` returns None.
pub(crate) fn clamped_acos(v: f64, tol: f64) -> Option<f64> {
    if v.abs() > 1.0 + tol {
        return None;
    }
    Some(v.clamp(-1.0, 1.0).acos())
}

/// Angles between the rays from each minimizer to `p` and the minimizer axis.
///
/// `cos a1 = (z1 + r) / d1`, `cos a2 = (z1 - r) / d2`, each in `[0, pi]`,
/// with `a2 >= a1` for every point in the half-plane. Undefined at the
/// minimizers themselves.
pub fn alpha_angles(p: &ReducedPoint, r: f64) -> Result<(f64, f64)> {
    let d1 = p.d1(r);
    let d2 = p.d2(r);
    if d1 < DEGENERACY_EPS {
        return Err(Error::UndefinedAtMinimizer { dist: d1 });
    }
    if d2 < DEGENERACY_EPS {
        return Err(Error::UndefinedAtMinimizer { dist: d2 });
    }
    // |z1 +/- r| <= d by construction; clamp absorbs the last-ulp overshoot.
    let a1 = ((p.z1 + r) / d1).clamp(-1.0, 1.0).acos();
    let a2 = ((p.z1 - r) / d2).clamp(-1.0, 1.0).acos();
    Ok((a1, a2))
}

/// The angle gap `pi - (a2 - a1)` the two gradient cones must jointly cover.
pub fn psi(alpha1: f64, alpha2: f64) -> f64 {
    debug_assert!(
        alpha2 >= alpha1 - 1e-9,
        "psi requires alpha2 >= alpha1, got {alpha1} > {alpha2}"
    );
    (std::f64::consts::PI - (alpha2 - alpha1)).clamp(0.0, std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn vec2(a: f64, b: f64) -> DVector<f64> {
        DVector::from_vec(vec![a, b])
    }

    #[test]
    fn frame_axis_aligned_shifted() {
        let cfg = ProblemConfig::new(vec2(0.0, 0.0), vec2(2.0, 0.0), 1.0, 1.0, 1.0).unwrap();
        let frame = cfg.canonical_frame().unwrap();
        assert_relative_eq!(frame.half_distance, 1.0);
        assert_relative_eq!(
            frame.rotation.clone(),
            DMatrix::identity(2, 2),
            epsilon = 1e-14
        );
        assert_relative_eq!(frame.translation.clone(), vec2(-1.0, 0.0), epsilon = 1e-14);
    }

    #[test]
    fn frame_identity_for_already_canonical() {
        let cfg = ProblemConfig::new(vec2(-4.0, 0.0), vec2(4.0, 0.0), 1.0, 1.0, 10.0).unwrap();
        let frame = cfg.canonical_frame().unwrap();
        assert_relative_eq!(frame.half_distance, 4.0);
        assert_relative_eq!(
            frame.forward(&vec2(-4.0, 0.0)),
            vec2(-4.0, 0.0),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            frame.forward(&vec2(4.0, 0.0)),
            vec2(4.0, 0.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn frame_rotates_vertical_pair() {
        let cfg = ProblemConfig::new(vec2(0.0, 0.0), vec2(0.0, 2.0), 1.0, 1.0, 1.0).unwrap();
        let frame = cfg.canonical_frame().unwrap();
        assert_relative_eq!(frame.half_distance, 1.0);
        assert_relative_eq!(
            frame.forward(&cfg.x1_star),
            vec2(-1.0, 0.0),
            epsilon = 1e-12
        );
        assert_relative_eq!(frame.forward(&cfg.x2_star), vec2(1.0, 0.0), epsilon = 1e-12);
        assert_relative_eq!(frame.rotation.determinant(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn frame_rejects_coincident_minimizers() {
        let err = ProblemConfig::new(vec2(1.0, 1.0), vec2(1.0, 1.0), 1.0, 1.0, 1.0);
        assert!(matches!(err, Err(Error::DegenerateConfig(_))));
    }

    #[test]
    fn reduce_minimizer_and_midpoint() {
        let cfg = ProblemConfig::new(vec2(0.0, 0.0), vec2(2.0, 0.0), 1.0, 1.0, 1.0).unwrap();
        let frame = cfg.canonical_frame().unwrap();
        let p = reduce(&cfg.x1_star, &frame);
        assert_relative_eq!(p.z1, -1.0, epsilon = 1e-12);
        assert_relative_eq!(p.u, 0.0, epsilon = 1e-12);
        let mid = reduce(&vec2(1.0, 0.0), &frame);
        assert_relative_eq!(mid.z1, 0.0, epsilon = 1e-12);
        assert_relative_eq!(mid.u, 0.0, epsilon = 1e-12);
        let above = reduce(&vec2(1.0, 1.0), &frame);
        assert_relative_eq!(above.z1, 0.0, epsilon = 1e-12);
        assert_relative_eq!(above.u, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn alpha_on_segment_and_beyond() {
        let r = 1.0;
        let (a1, a2) = alpha_angles(&ReducedPoint::new(0.0, 0.0), r).unwrap();
        assert_relative_eq!(a1, 0.0, epsilon = 1e-12);
        assert_relative_eq!(a2, PI, epsilon = 1e-12);
        let (b1, b2) = alpha_angles(&ReducedPoint::new(r + 1.0, 0.0), r).unwrap();
        assert_relative_eq!(b1, 0.0, epsilon = 1e-12);
        assert_relative_eq!(b2, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn alpha_above_midpoint() {
        let (a1, a2) = alpha_angles(&ReducedPoint::new(0.0, 1.0), 1.0).unwrap();
        assert_relative_eq!(a1, FRAC_PI_4, epsilon = 1e-12);
        assert_relative_eq!(a2, 3.0 * FRAC_PI_4, epsilon = 1e-12);
    }

    #[test]
    fn alpha_undefined_at_minimizers() {
        let err = alpha_angles(&ReducedPoint::new(-1.0, 0.0), 1.0);
        assert!(matches!(err, Err(Error::UndefinedAtMinimizer { .. })));
    }

    #[test]
    fn psi_values() {
        assert_relative_eq!(psi(0.0, PI), 0.0, epsilon = 1e-12);
        assert_relative_eq!(psi(FRAC_PI_4, 3.0 * FRAC_PI_4), FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(psi(PI, PI), PI, epsilon = 1e-12);
    }
}
