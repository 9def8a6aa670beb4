//! Region math for a gradient bound imposed at the candidate point.
//!
//! A point can minimize the sum only if it lies in both gradient-bound balls
//! (`d_i <= L / sigma_i`) and the admissible gradient cones overlap
//! (`phi1 + phi2 >= psi`). The zero set of [`tn_residual`] is the locus where
//! the cone condition holds with equality; together with the two minimizers
//! it forms the region boundary whenever [`theorem1_applicable`] holds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    alpha_angles, clamped_acos, psi, CanonicalProblem, ReducedPoint, DEGENERACY_EPS,
};

/// Tolerated overshoot of the cosine argument before declaring out-of-ball.
const COS_OVERSHOOT: f64 = 1e-9;

/// Membership record for the point-bound region.
///
/// `in_m_hat = in_h && angle_ok` always holds. The angle fields are absent
/// exactly when the point is outside the ball intersection or is one of the
/// minimizers (where the angles are undefined and membership follows the
/// endpoint rule: a minimizer belongs to the region iff it lies in the other
/// function's bound ball).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct P1Membership {
    pub in_h: bool,
    pub angle_ok: bool,
    pub in_m_hat: bool,
    pub phi1: Option<f64>,
    pub phi2: Option<f64>,
    pub psi: Option<f64>,
    /// Signed angle slack `phi1 + phi2 - psi`; absent with the angle fields.
    pub slack: Option<f64>,
}

/// Quantities derived from the canonical parameters: `gamma_i = (L/sigma_i)^2`,
/// `beta = sigma2/sigma1`, the axial thresholds `lambda1`/`lambda2` separating
/// angle-feasible from infeasible points on the ball boundaries, and
/// `chi1 = L/(sigma1 r)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DerivedParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub beta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub chi1: f64,
}

/// Maximum admissible angle between a function's gradient at distance `dist`
/// from its minimizer and the outward ray, `arccos(sigma * dist / bound)`.
///
/// Equals `pi/2` at the minimizer and `0` on the bound ball's boundary.
pub fn phi_tilde(dist: f64, sigma: f64, bound: f64) -> Result<f64> {
    let arg = sigma * dist / bound;
    clamped_acos(arg, COS_OVERSHOOT).ok_or(Error::OutOfBall { arg })
}

/// Closed-ball intersection test: `d_i <= L/sigma_i + eps` for both functions.
pub fn in_h(p: &ReducedPoint, problem: &CanonicalProblem) -> bool {
    p.d1(problem.r) <= problem.ball_radius1() + problem.eps
        && p.d2(problem.r) <= problem.ball_radius2() + problem.eps
}

/// Full membership evaluation for the point-bound region.
pub fn in_m_hat(p: &ReducedPoint, problem: &CanonicalProblem) -> P1Membership {
    let r = problem.r;
    let eps = problem.eps;
    let d1 = p.d1(r);
    let d2 = p.d2(r);
    let in_h = in_h(p, problem);

    let absent = |in_h: bool, angle_ok: bool| P1Membership {
        in_h,
        angle_ok,
        in_m_hat: in_h && angle_ok,
        phi1: None,
        phi2: None,
        psi: None,
        slack: None,
    };

    // Angles are undefined at the minimizers; membership there follows the
    // endpoint rule (the minimizer is a region point iff the *other*
    // function's ball reaches it).
    if d1 < DEGENERACY_EPS {
        return absent(in_h, r <= 0.5 * problem.ball_radius2() + eps);
    }
    if d2 < DEGENERACY_EPS {
        return absent(in_h, r <= 0.5 * problem.ball_radius1() + eps);
    }
    if !in_h {
        return absent(false, false);
    }

    // in_h passed, so the cosine arguments exceed 1 by at most eps*sigma/L;
    // clamp rather than re-guard.
    let phi1 = (problem.sigma1 * d1 / problem.grad_bound).min(1.0).acos();
    let phi2 = (problem.sigma2 * d2 / problem.grad_bound).min(1.0).acos();
    let (a1, a2) = alpha_angles(p, r).expect("non-degenerate point");
    let gap = psi(a1, a2);
    let slack = phi1 + phi2 - gap;
    let angle_ok = slack >= -eps;
    P1Membership {
        in_h: true,
        angle_ok,
        in_m_hat: angle_ok,
        phi1: Some(phi1),
        phi2: Some(phi2),
        psi: Some(gap),
        slack: Some(slack),
    }
}

/// Signed residual of the angle-equality locus, evaluated with gradient
/// bound `bound`.
///
/// Negative on the angle-feasible side (the region interior), positive
/// outside, zero exactly on the locus. Undefined at the minimizers and
/// outside the bound balls.
pub fn tn_residual(p: &ReducedPoint, problem: &CanonicalProblem, bound: f64) -> Result<f64> {
    let r = problem.r;
    let d1 = p.d1(r);
    let d2 = p.d2(r);
    if d1 < DEGENERACY_EPS || d2 < DEGENERACY_EPS {
        return Err(Error::UndefinedAtMinimizer { dist: d1.min(d2) });
    }
    let arg1 = problem.sigma1 * d1 / bound;
    let arg2 = problem.sigma2 * d2 / bound;
    if arg1 > 1.0 + COS_OVERSHOOT {
        return Err(Error::OutOfBall { arg: arg1 });
    }
    if arg2 > 1.0 + COS_OVERSHOOT {
        return Err(Error::OutOfBall { arg: arg2 });
    }
    let d1sq = d1 * d1;
    let d2sq = d2 * d2;
    let s1 = (1.0 / d1sq - (problem.sigma1 / bound).powi(2)).max(0.0);
    let s2 = (1.0 / d2sq - (problem.sigma2 / bound).powi(2)).max(0.0);
    Ok((p.z1 * p.z1 + p.u * p.u - r * r) / (d1sq * d2sq)
        + problem.sigma1 * problem.sigma2 / (bound * bound)
        - (s1 * s2).sqrt())
}

/// Derived parameters for the canonical problem.
pub fn derived_params(problem: &CanonicalProblem) -> DerivedParams {
    let r = problem.r;
    let gamma1 = (problem.grad_bound / problem.sigma1).powi(2);
    let gamma2 = (problem.grad_bound / problem.sigma2).powi(2);
    let beta = problem.sigma2 / problem.sigma1;
    let lambda1 = (1.0 + beta) / (1.0 + 2.0 * beta) * gamma1 / (2.0 * r) - r / (1.0 + 2.0 * beta);
    let lambda2 = -(1.0 + beta) / (2.0 + beta) * gamma2 / (2.0 * r) + beta * r / (2.0 + beta);
    let chi1 = problem.grad_bound / (problem.sigma1 * r);
    DerivedParams {
        gamma1,
        gamma2,
        beta,
        lambda1,
        lambda2,
        chi1,
    }
}

/// Which ball boundary a point is being tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallBoundary {
    /// Boundary of the ball of radius `L/sigma1` around the first minimizer.
    H1,
    /// Boundary of the ball of radius `L/sigma2` around the second minimizer.
    H2,
}

/// Whether the angle condition fails (`phi1 + phi2 < psi`) at a point on the
/// named ball boundary. Equals `z1 < lambda1` on the first boundary and
/// `z1 > lambda2` on the second; used as a self-test predicate.
///
/// Evaluated in the cosine domain so points beyond the other ball (where the
/// angle itself is undefined) are handled coherently: the condition cannot
/// hold there and the predicate returns true. A minimizer lying exactly on
/// the boundary is the threshold equality point and returns false.
pub fn boundary_ball_angle_violation(
    p: &ReducedPoint,
    problem: &CanonicalProblem,
    ball: BallBoundary,
) -> Result<bool> {
    let r = problem.r;
    let d1 = p.d1(r);
    let d2 = p.d2(r);
    let (d_on, d_other, sigma_other) = match ball {
        BallBoundary::H1 => (d1, d2, problem.sigma2),
        BallBoundary::H2 => (d2, d1, problem.sigma1),
    };
    let radius = match ball {
        BallBoundary::H1 => problem.ball_radius1(),
        BallBoundary::H2 => problem.ball_radius2(),
    };
    let dev = (d_on - radius).abs();
    if dev >= 1e-9 {
        return Err(Error::NotOnBallBoundary { dev });
    }
    if d_other < DEGENERACY_EPS {
        // The other minimizer sits exactly on this boundary: the lambda
        // threshold is met with equality, so no violation.
        return Ok(false);
    }
    // On the boundary the own angle is zero, so the condition reduces to
    // cos(phi_other) > cos(psi), i.e.
    // (sigma_other/L) d_other > -(z1^2 + u^2 - r^2)/(d1 d2).
    let lhs = sigma_other * d_other / problem.grad_bound;
    let rhs = -(p.z1 * p.z1 + p.u * p.u - r * r) / (d1 * d2);
    Ok(lhs > rhs)
}

/// Whether the angle-equality locus together with the minimizers is the
/// complete region boundary: `r <= (L/2) * min(1/sigma1, 1/sigma2)`.
pub fn theorem1_applicable(problem: &CanonicalProblem) -> bool {
    problem.r <= theorem1_limit(problem) + 1e-12
}

/// The half-distance limit below which the boundary characterization holds.
pub fn theorem1_limit(problem: &CanonicalProblem) -> f64 {
    0.5 * problem.grad_bound * (1.0 / problem.sigma1).min(1.0 / problem.sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn fig5() -> CanonicalProblem {
        CanonicalProblem::new(4.0, 1.0, 1.0, 10.0).unwrap()
    }

    #[test]
    fn phi_tilde_limits() {
        assert_relative_eq!(phi_tilde(0.0, 1.0, 10.0).unwrap(), FRAC_PI_2);
        assert_relative_eq!(phi_tilde(10.0, 1.0, 10.0).unwrap(), 0.0);
        assert_relative_eq!(
            phi_tilde(5.0, 1.0, 10.0).unwrap(),
            FRAC_PI_3,
            epsilon = 1e-12
        );
        assert!(matches!(
            phi_tilde(10.1, 1.0, 10.0),
            Err(Error::OutOfBall { .. })
        ));
    }

    #[test]
    fn in_h_examples() {
        let problem = fig5();
        assert!(in_h(&ReducedPoint::new(0.0, 0.0), &problem));
        assert!(!in_h(&ReducedPoint::new(0.0, 20.0), &problem));
        // Closed ball: a point at distance exactly L/sigma1 is included.
        let boundary = ReducedPoint::new(-4.0 + 10.0, 0.0);
        assert_relative_eq!(boundary.d1(4.0), 10.0);
        assert!(in_h(&boundary, &problem));
    }

    #[test]
    fn membership_midpoint_and_outside() {
        let problem = fig5();
        let mid = in_m_hat(&ReducedPoint::new(0.0, 0.0), &problem);
        assert!(mid.in_m_hat && mid.in_h && mid.angle_ok);
        assert!(mid.slack.unwrap() > 0.0);

        let left = in_m_hat(&ReducedPoint::new(-4.1, 0.0), &problem);
        assert!(!left.in_m_hat);
        assert!(
            left.in_h,
            "point just left of the minimizer is still in the ball lens"
        );
        assert!(!left.angle_ok);
    }

    #[test]
    fn membership_intro_counterexample_point() {
        // Canonical image of the point (1,1) for minimizers (0,0), (2,0) with
        // sigma = (3 - sqrt 5)/2 and L = 1: the true sum minimizer, so the
        // necessary conditions must hold.
        let sigma = (3.0 - 5.0_f64.sqrt()) / 2.0;
        let problem = CanonicalProblem::new(1.0, sigma, sigma, 1.0).unwrap();
        let m = in_m_hat(&ReducedPoint::new(0.0, 1.0), &problem);
        assert!(
            m.in_m_hat,
            "true minimizer must satisfy the necessary conditions: {m:?}"
        );
    }

    #[test]
    fn membership_invariant_shape() {
        let problem = fig5();
        for &(z, u) in &[(0.0, 0.0), (-4.0, 0.0), (4.0, 0.0), (0.0, 20.0), (5.0, 1.0)] {
            let m = in_m_hat(&ReducedPoint::new(z, u), &problem);
            assert_eq!(m.in_m_hat, m.in_h && m.angle_ok);
            let angles_absent = m.phi1.is_none();
            assert_eq!(m.phi2.is_none(), angles_absent);
            assert_eq!(m.psi.is_none(), angles_absent);
            assert_eq!(m.slack.is_none(), angles_absent);
        }
    }

    #[test]
    fn residual_midpoint_value() {
        let problem = fig5();
        let res = tn_residual(&ReducedPoint::new(0.0, 0.0), &problem, 10.0).unwrap();
        assert_relative_eq!(res, -0.105, epsilon = 1e-12);
        assert!(res < 0.0, "midpoint fixes the orientation: negative inside");
    }

    #[test]
    fn residual_errors() {
        let problem = fig5();
        assert!(matches!(
            tn_residual(&ReducedPoint::new(-4.0, 0.0), &problem, 10.0),
            Err(Error::UndefinedAtMinimizer { .. })
        ));
        assert!(matches!(
            tn_residual(&ReducedPoint::new(6.1, 0.0), &problem, 10.0),
            Err(Error::OutOfBall { .. })
        ));
    }

    #[test]
    fn derived_params_fig5() {
        let d = derived_params(&fig5());
        assert_relative_eq!(d.lambda1, 7.0, epsilon = 1e-12);
        assert_relative_eq!(d.lambda2, -7.0, epsilon = 1e-12);
        assert_relative_eq!(d.gamma1, 100.0);
        assert_relative_eq!(d.beta, 1.0);
        assert_relative_eq!(d.chi1, 2.5);
    }

    #[test]
    fn derived_params_equality_case() {
        // beta = 1 and r = L/(2 sigma1): lambda1 = r = L/sigma1 - r.
        let problem = CanonicalProblem::new(5.0, 1.0, 1.0, 10.0).unwrap();
        let d = derived_params(&problem);
        assert_relative_eq!(d.lambda1, 5.0, epsilon = 1e-12);
        assert_relative_eq!(
            d.lambda1,
            problem.ball_radius1() - problem.r,
            epsilon = 1e-12
        );
    }

    #[test]
    fn boundary_violation_matches_lambda_threshold() {
        // r = 6 puts lambda1 inside the boundary's z1 range so both sides
        // are exercised.
        let problem = CanonicalProblem::new(6.0, 1.0, 1.0, 10.0).unwrap();
        let d = derived_params(&problem);
        for dz in [-0.1, 0.1] {
            let z1 = d.lambda1 + dz;
            let u = ((problem.ball_radius1().powi(2)) - (z1 + problem.r).powi(2)).sqrt();
            let p = ReducedPoint::new(z1, u);
            let violated = boundary_ball_angle_violation(&p, &problem, BallBoundary::H1).unwrap();
            assert_eq!(
                violated,
                z1 < d.lambda1,
                "z1 = {z1}, lambda1 = {}",
                d.lambda1
            );
        }
    }

    #[test]
    fn boundary_violation_minimizer_equality_point() {
        // r = L/(2 sigma1): the second minimizer lies exactly on the first
        // boundary and is the lambda1 equality point.
        let problem = CanonicalProblem::new(5.0, 1.0, 1.0, 10.0).unwrap();
        let p = ReducedPoint::new(5.0, 0.0);
        assert_relative_eq!(p.d1(problem.r), problem.ball_radius1());
        let violated = boundary_ball_angle_violation(&p, &problem, BallBoundary::H1).unwrap();
        assert!(!violated);
    }

    #[test]
    fn boundary_violation_requires_boundary_point() {
        let problem = fig5();
        let err =
            boundary_ball_angle_violation(&ReducedPoint::new(0.0, 0.0), &problem, BallBoundary::H1);
        assert!(matches!(err, Err(Error::NotOnBallBoundary { .. })));
    }

    #[test]
    fn theorem1_applicability() {
        assert!(theorem1_applicable(&fig5()));
        assert!(!theorem1_applicable(
            &CanonicalProblem::new(6.0, 1.0, 1.0, 10.0).unwrap()
        ));
        // Boundary of the condition with asymmetric moduli.
        assert!(theorem1_applicable(
            &CanonicalProblem::new(2.5, 2.0, 1.0, 10.0).unwrap()
        ));
    }
}
