//! Property tests for the point-bound region: the residual/angle
//! equivalence, the lambda thresholds on the ball boundaries, the endpoint
//! rule, and the symmetry laws.

use minreg_core::geometry::{CanonicalProblem, ReducedPoint};
use minreg_core::region_p1::{
    boundary_ball_angle_violation, derived_params, in_m_hat, tn_residual, BallBoundary,
};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fig5() -> CanonicalProblem {
    CanonicalProblem::new(4.0, 1.0, 1.0, 10.0).unwrap()
}

#[test]
fn angle_ok_iff_nonnegative_slack() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let problem = fig5();
    for _ in 0..5000 {
        let p = ReducedPoint::new(rng.gen_range(-7.0..7.0), rng.gen_range(0.0..10.0));
        let m = in_m_hat(&p, &problem);
        if let Some(slack) = m.slack {
            assert_eq!(m.angle_ok, slack >= -problem.eps, "at {p:?}: {m:?}");
        }
    }
}

/// Residual sign and angle-condition sign agree away from the zero locus.
#[test]
fn residual_sign_matches_angle_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let problem = fig5();
    let mut checked = 0;
    while checked < 10_000 {
        let p = ReducedPoint::new(rng.gen_range(-6.0..6.0), rng.gen_range(0.0..9.2));
        let m = in_m_hat(&p, &problem);
        let (Some(slack), Ok(res)) = (m.slack, tn_residual(&p, &problem, 10.0)) else {
            continue;
        };
        if res.abs() < 1e-12 || slack.abs() < 1e-12 {
            continue;
        }
        assert_eq!(
            res <= 0.0,
            slack >= 0.0,
            "sign mismatch at {p:?}: res={res}, slack={slack}"
        );
        checked += 1;
    }
}

/// The zero of the residual and the zero of the angle slack coincide along
/// rays from the midpoint.
#[test]
fn residual_and_slack_roots_coincide_on_rays() {
    let problem = fig5();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let slack_at = |t: f64, dir: (f64, f64)| -> f64 {
        let p = ReducedPoint::new(t * dir.0, (t * dir.1).abs());
        in_m_hat(&p, &problem).slack.unwrap_or(-1.0)
    };
    let residual_at = |t: f64, dir: (f64, f64)| -> f64 {
        let p = ReducedPoint::new(t * dir.0, (t * dir.1).abs());
        tn_residual(&p, &problem, 10.0).unwrap_or(1.0)
    };
    for _ in 0..200 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let dir = (theta.cos(), theta.sin());
        // March outward for a sign bracket of the membership transition.
        let mut t_out = 0.1;
        while slack_at(t_out, dir) >= 0.0 && t_out < 20.0 {
            t_out += 0.1;
        }
        if t_out >= 20.0 {
            continue;
        }
        let bisect = |f: &dyn Fn(f64) -> f64, inside_sign: f64| -> f64 {
            let (mut a, mut b) = (t_out - 0.1, t_out);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if f(mid) * inside_sign >= 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        };
        let t_slack = bisect(&|t| slack_at(t, dir), 1.0);
        let t_res = bisect(&|t| residual_at(t, dir), -1.0);
        assert!(
            (t_slack - t_res).abs() < 1e-8,
            "roots differ on ray {theta}: {t_slack} vs {t_res}"
        );
        // The residual vanishes where the angle slack does.
        assert!(
            residual_at(t_slack, dir).abs() < 1e-8,
            "residual at the slack root: {}",
            residual_at(t_slack, dir)
        );
    }
}

/// Whenever the half-distance is at most half the first ball radius
/// (chi1 >= 2), the first threshold clears the boundary's axial maximum,
/// with equality exactly at chi1 = 2.
#[test]
fn lambda1_clears_boundary_extent() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..2000 {
        let sigma1 = rng.gen_range(0.2..4.0);
        let sigma2 = rng.gen_range(0.2..4.0);
        let grad_bound = rng.gen_range(1.0..20.0);
        let r_max = grad_bound / (2.0 * sigma1);
        let r = rng.gen_range(0.01..1.0) * r_max;
        let problem = CanonicalProblem::new(r, sigma1, sigma2, grad_bound).unwrap();
        let d = derived_params(&problem);
        assert!(d.chi1 >= 2.0);
        let extent = problem.ball_radius1() - r;
        assert!(
            d.lambda1 >= extent - 1e-12 * extent.abs().max(1.0),
            "lambda1 {} below boundary extent {extent} (chi1 = {})",
            d.lambda1,
            d.chi1
        );
    }
    // Equality case pinned at chi1 = 2.
    let problem = CanonicalProblem::new(2.5, 2.0, 0.7, 10.0).unwrap();
    let d = derived_params(&problem);
    assert!((d.chi1 - 2.0).abs() < 1e-15);
    assert!((d.lambda1 - (problem.ball_radius1() - problem.r)).abs() < 1e-12);
}

/// On each ball boundary the angle violation is exactly the lambda
/// threshold predicate.
#[test]
fn lambda_threshold_equivalence() {
    let configs = [
        CanonicalProblem::new(6.0, 1.0, 1.0, 10.0).unwrap(),
        CanonicalProblem::new(3.0, 2.0, 1.0, 10.0).unwrap(),
        CanonicalProblem::new(4.0, 1.0, 3.0, 10.0).unwrap(),
        fig5(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for problem in &configs {
        let d = derived_params(problem);
        // First ball boundary.
        let r1 = problem.ball_radius1();
        for _ in 0..1000 {
            let z = rng.gen_range((-problem.r - r1 + 1e-6)..(-problem.r + r1 - 1e-6));
            let u = (r1 * r1 - (z + problem.r).powi(2)).max(0.0).sqrt();
            let p = ReducedPoint::new(z, u);
            if p.d2(problem.r) < 1e-9 {
                continue;
            }
            let violated = boundary_ball_angle_violation(&p, problem, BallBoundary::H1).unwrap();
            assert_eq!(
                violated,
                z < d.lambda1,
                "H1 mismatch at z={z}, lambda1={}",
                d.lambda1
            );
        }
        // Second ball boundary.
        let r2 = problem.ball_radius2();
        for _ in 0..1000 {
            let z = rng.gen_range((problem.r - r2 + 1e-6)..(problem.r + r2 - 1e-6));
            let u = (r2 * r2 - (z - problem.r).powi(2)).max(0.0).sqrt();
            let p = ReducedPoint::new(z, u);
            if p.d1(problem.r) < 1e-9 {
                continue;
            }
            let violated = boundary_ball_angle_violation(&p, problem, BallBoundary::H2).unwrap();
            assert_eq!(
                violated,
                z > d.lambda2,
                "H2 mismatch at z={z}, lambda2={}",
                d.lambda2
            );
        }
    }
}

/// Axial probes around the first minimizer: a member/non-member split when
/// the endpoint belongs to the region, a plain non-member otherwise.
#[test]
fn endpoint_probe_split() {
    let sigma2_grid = [0.5, 1.0, 1.6, 2.5, 4.0];
    let r_grid = [0.8, 1.5, 2.8, 4.5, 7.0];
    let grad_bound = 10.0;
    for &sigma2 in &sigma2_grid {
        for &r in &r_grid {
            let problem = CanonicalProblem::new(r, 1.0, sigma2, grad_bound).unwrap();
            let threshold = grad_bound / (2.0 * sigma2);
            let at_min = in_m_hat(&ReducedPoint::new(-r, 0.0), &problem).in_m_hat;
            if r <= threshold {
                assert!(
                    at_min,
                    "minimizer must be a member for r={r}, sigma2={sigma2}"
                );
                for eps in [1e-3, 1e-4] {
                    let inside = in_m_hat(&ReducedPoint::new(-r + eps, 0.0), &problem);
                    let outside = in_m_hat(&ReducedPoint::new(-r - eps, 0.0), &problem);
                    assert!(
                        inside.in_m_hat,
                        "inside probe fails: r={r}, sigma2={sigma2}, eps={eps}"
                    );
                    assert!(
                        !outside.in_m_hat,
                        "outside probe fails: r={r}, sigma2={sigma2}, eps={eps}"
                    );
                }
            } else {
                assert!(
                    !at_min,
                    "minimizer must not be a member for r={r}, sigma2={sigma2}"
                );
            }
        }
    }
}

proptest! {
    /// Relabeling the two functions mirrors the region across the bisector.
    #[test]
    fn swap_symmetry(
        z1 in -12.0..12.0f64,
        u in 0.0..12.0f64,
        s1 in 0.3..3.0f64,
        s2 in 0.3..3.0f64,
        r in 0.5..5.0f64,
    ) {
        let a = CanonicalProblem::new(r, s1, s2, 10.0).unwrap();
        let b = a.swapped();
        let p = ReducedPoint::new(z1, u);
        let ma = in_m_hat(&p, &a);
        let mb = in_m_hat(&p.mirrored(), &b);
        prop_assert_eq!(ma.in_m_hat, mb.in_m_hat);
        prop_assert_eq!(ma.in_h, mb.in_h);
    }

    /// Scaling minimizers and bound together rescales the region.
    #[test]
    fn scale_covariance(
        z1 in -6.0..6.0f64,
        u in 0.0..9.0f64,
        t in 0.1..10.0f64,
    ) {
        let base = fig5();
        let scaled = CanonicalProblem::new(base.r * t, base.sigma1, base.sigma2, base.grad_bound * t).unwrap();
        let p = ReducedPoint::new(z1, u);
        let q = ReducedPoint::new(z1 * t, u * t);
        prop_assert_eq!(in_m_hat(&p, &base).in_m_hat, in_m_hat(&q, &scaled).in_m_hat);
    }
}

/// Beyond the tracing limit the membership predicates keep working: on the
/// first ball boundary, points past the lambda threshold are genuine region
/// members (the ball arc carries part of the region boundary there).
#[test]
fn membership_only_regime_ball_arc() {
    // r in (L/(2 sigma1), L/(2 sigma2)): tracing refuses, membership works.
    let problem = CanonicalProblem::new(3.0, 2.0, 1.0, 10.0).unwrap();
    assert!(!minreg_core::region_p1::theorem1_applicable(&problem));
    let d = derived_params(&problem);
    let r1 = problem.ball_radius1();
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let mut arc_members = 0;
    for _ in 0..2000 {
        let z = rng.gen_range((-problem.r - r1 + 1e-6)..(-problem.r + r1 - 1e-6));
        let u = (r1 * r1 - (z + problem.r).powi(2)).max(0.0).sqrt();
        // Pull epsilon inside the ball so the closed-inequality tolerance
        // does not decide membership.
        let scale = 1.0 - 1e-12;
        let p = ReducedPoint::new(-problem.r + (z + problem.r) * scale, u * scale);
        let m = in_m_hat(&p, &problem);
        if z > d.lambda1 + 1e-6 {
            assert!(m.in_m_hat, "arc point past lambda1 must be a member: z={z}");
            arc_members += 1;
        } else if z < d.lambda1 - 1e-6 {
            assert!(
                !m.in_m_hat,
                "arc point before lambda1 must not be a member: z={z}"
            );
        }
    }
    assert!(
        arc_members > 50,
        "sampling missed the member arc: {arc_members}"
    );
}
