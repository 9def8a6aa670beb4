//! Independent empirical ground truth: sample strongly convex function
//! pairs with prescribed minimizers and moduli, minimize their sum exactly
//! or iteratively, filter to instances satisfying the gradient bounds, and
//! check that every resulting minimizer lands inside the predicted regions.
//!
//! Sampling is counter-based: each sample draws from its own RNG stream
//! derived from `(seed, index)`, so results are reproducible regardless of
//! how work is scheduled across threads.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{convex_hull_2d, polygon_area, ConvexBody};
use crate::error::{Error, Result};
use crate::geometry::{reduce, CanonicalFrame, CanonicalProblem, ProblemConfig, ReducedPoint};
use crate::region_p1::{in_m_hat, P1Membership};
use crate::region_p2::{ConstrainedRegion, P2Membership};

/// Quadratic witness `f(x) = 0.5 (x - m)^T A (x - m)` with `lambda_min(A) >= sigma`.
#[derive(Clone, Debug)]
pub struct QuadraticFn {
    pub matrix: DMatrix<f64>,
    pub minimizer: DVector<f64>,
    pub sigma: f64,
}

impl QuadraticFn {
    pub fn value(&self, x: &DVector<f64>) -> f64 {
        let d = x - &self.minimizer;
        0.5 * d.dot(&(&self.matrix * &d))
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * (x - &self.minimizer)
    }

    pub fn hessian(&self, _x: &DVector<f64>) -> DMatrix<f64> {
        self.matrix.clone()
    }
}

/// Quadratic plus a convex quartic bump: same minimizer, same modulus,
/// non-quadratic gradients. Keeps the witness class honest beyond the
/// closed-form case.
#[derive(Clone, Debug)]
pub struct QuarticFn {
    pub base: QuadraticFn,
    pub quartic_coeff: f64,
}

impl QuarticFn {
    pub fn value(&self, x: &DVector<f64>) -> f64 {
        let d = x - &self.base.minimizer;
        self.base.value(x) + self.quartic_coeff * d.norm_squared().powi(2)
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let d = x - &self.base.minimizer;
        self.base.gradient(x) + 4.0 * self.quartic_coeff * d.norm_squared() * d
    }

    pub fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let d = x - &self.base.minimizer;
        let n = d.len();
        self.base.matrix.clone()
            + 4.0
                * self.quartic_coeff
                * (DMatrix::identity(n, n) * d.norm_squared() + 2.0 * &d * d.transpose())
    }
}

/// A sampled witness function.
#[derive(Clone, Debug)]
pub enum WitnessFn {
    Quadratic(QuadraticFn),
    Quartic(QuarticFn),
}

impl WitnessFn {
    pub fn value(&self, x: &DVector<f64>) -> f64 {
        match self {
            Self::Quadratic(f) => f.value(x),
            Self::Quartic(f) => f.value(x),
        }
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Self::Quadratic(f) => f.gradient(x),
            Self::Quartic(f) => f.gradient(x),
        }
    }

    pub fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        match self {
            Self::Quadratic(f) => f.hessian(x),
            Self::Quartic(f) => f.hessian(x),
        }
    }

    pub fn base(&self) -> &QuadraticFn {
        match self {
            Self::Quadratic(f) => f,
            Self::Quartic(f) => &f.base,
        }
    }

    pub fn quartic_coeff(&self) -> f64 {
        match self {
            Self::Quadratic(_) => 0.0,
            Self::Quartic(f) => f.quartic_coeff,
        }
    }
}

/// Random symmetric positive-definite matrix with spectrum in
/// `[sigma, kappa * sigma]`: `A = Q D Q^T` with `Q` Haar-orthogonal from the
/// QR of a Gaussian matrix and `D` uniform on the interval.
pub fn sample_spd(sigma: f64, kappa: f64, n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    assert!(kappa >= 1.0, "condition cap must be >= 1");
    let mut g: DMatrix<f64> = DMatrix::zeros(n, n);
    for v in g.iter_mut() {
        *v = StandardNormal.sample(rng);
    }
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..n {
        if r[(c, c)] < 0.0 {
            for row in 0..n {
                q[(row, c)] = -q[(row, c)];
            }
        }
    }
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let t: f64 = rng.gen();
        d[(i, i)] = sigma * (1.0 + (kappa - 1.0) * t);
    }
    let a = &q * d * q.transpose();
    // Symmetrize away the last-ulp asymmetry from the triple product.
    (&a + a.transpose()) * 0.5
}

/// Closed-form minimizer of the sum of two quadratics:
/// `(A1 + A2)^{-1} (A1 m1 + A2 m2)`.
pub fn sum_minimizer_quadratic(f1: &QuadraticFn, f2: &QuadraticFn) -> DVector<f64> {
    let h = &f1.matrix + &f2.matrix;
    let rhs = &f1.matrix * &f1.minimizer + &f2.matrix * &f2.minimizer;
    h.clone()
        .cholesky()
        .map(|ch| ch.solve(&rhs))
        .unwrap_or_else(|| h.lu().solve(&rhs).expect("SPD sum is invertible"))
}

/// Damped Newton on the sum, warm-started from the quadratic closed form.
/// Terminates when the sum gradient norm drops below `tol`.
pub fn minimize_sum_iterative(f1: &WitnessFn, f2: &WitnessFn, tol: f64) -> Result<DVector<f64>> {
    const MAX_ITERS: usize = 10_000;
    let mut x = sum_minimizer_quadratic(f1.base(), f2.base());
    for _ in 0..MAX_ITERS {
        let g = f1.gradient(&x) + f2.gradient(&x);
        if g.norm() < tol {
            return Ok(x);
        }
        let h = f1.hessian(&x) + f2.hessian(&x);
        let step = h
            .clone()
            .cholesky()
            .map(|ch| ch.solve(&(-&g)))
            .unwrap_or_else(|| h.lu().solve(&(-&g)).expect("strongly convex Hessian"));
        let slope = g.dot(&step);
        let f0 = f1.value(&x) + f2.value(&x);
        // The noise allowance keeps the Armijo test from stalling once the
        // decrease drops below value-rounding granularity.
        let noise = 1e-12 * (1.0 + f0.abs());
        let mut t = 1.0;
        for _ in 0..60 {
            let cand = &x + t * &step;
            if f1.value(&cand) + f2.value(&cand) <= f0 + 1e-4 * t * slope + noise {
                break;
            }
            t *= 0.5;
        }
        x += t * step;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERS,
    })
}

/// Sampling parameters for the containment checks.
#[derive(Clone, Copy, Debug)]
pub struct OracleParams {
    pub n_samples: usize,
    /// Condition cap: sampled spectra lie in `[sigma, kappa * sigma]`.
    pub kappa: f64,
    /// Fraction of samples drawn as quartic pairs (Problem-1 runs only).
    pub quartic_fraction: f64,
    pub seed: u64,
    /// Slack tolerance for the containment assertion.
    pub tolerance: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self {
            n_samples: 1000,
            kappa: 10.0,
            quartic_fraction: 0.25,
            seed: 0,
            tolerance: 1e-7,
        }
    }
}

/// Serialized witness for violation triage.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FnRecord {
    pub matrix: Vec<Vec<f64>>,
    pub minimizer: Vec<f64>,
    pub sigma: f64,
    pub quartic_coeff: f64,
}

impl FnRecord {
    fn from_witness(f: &WitnessFn) -> Self {
        let base = f.base();
        let n = base.matrix.nrows();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| base.matrix[(i, j)]).collect())
            .collect();
        Self {
            matrix,
            minimizer: base.minimizer.iter().copied().collect(),
            sigma: base.sigma,
            quartic_coeff: f.quartic_coeff(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "lowercase")]
pub enum MembershipDetail {
    P1 {
        membership: P1Membership,
    },
    P2 {
        membership: P2Membership,
        in_m_hat: bool,
    },
}

/// A valid sample whose sum minimizer escaped the predicted region.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub sample_index: usize,
    pub f1: FnRecord,
    pub f2: FnRecord,
    pub minimizer: Vec<f64>,
    pub detail: MembershipDetail,
}

/// Aggregate of a containment run. `contained == valid` whenever the
/// necessary conditions hold; `violations` lists the exceptions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContainmentStats {
    pub samples: usize,
    pub valid: usize,
    pub contained: usize,
    pub violations: Vec<ViolationRecord>,
}

struct SampleOutcome {
    valid: bool,
    contained: bool,
    violation: Option<ViolationRecord>,
}

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

fn draw_pair(
    config: &ProblemConfig,
    params: &OracleParams,
    rng: &mut ChaCha8Rng,
    allow_quartic: bool,
) -> (WitnessFn, WitnessFn) {
    let n = config.dim();
    let a1 = sample_spd(config.sigma1, params.kappa, n, rng);
    let a2 = sample_spd(config.sigma2, params.kappa, n, rng);
    let q1 = QuadraticFn {
        matrix: a1,
        minimizer: config.x1_star.clone(),
        sigma: config.sigma1,
    };
    let q2 = QuadraticFn {
        matrix: a2,
        minimizer: config.x2_star.clone(),
        sigma: config.sigma2,
    };
    let quartic = allow_quartic && rng.gen::<f64>() < params.quartic_fraction;
    if quartic {
        let cap = 0.5 / config.grad_bound.powi(2);
        let c1 = rng.gen::<f64>() * cap * config.sigma1.powi(3);
        let c2 = rng.gen::<f64>() * cap * config.sigma2.powi(3);
        (
            WitnessFn::Quartic(QuarticFn {
                base: q1,
                quartic_coeff: c1,
            }),
            WitnessFn::Quartic(QuarticFn {
                base: q2,
                quartic_coeff: c2,
            }),
        )
    } else {
        (WitnessFn::Quadratic(q1), WitnessFn::Quadratic(q2))
    }
}

fn sum_minimizer(f1: &WitnessFn, f2: &WitnessFn) -> Result<DVector<f64>> {
    match (f1, f2) {
        (WitnessFn::Quadratic(a), WitnessFn::Quadratic(b)) => Ok(sum_minimizer_quadratic(a, b)),
        _ => minimize_sum_iterative(f1, f2, 1e-10),
    }
}

fn canonical_point_2d(x: &DVector<f64>, frame: &CanonicalFrame) -> Option<[f64; 2]> {
    if x.len() != 2 {
        return None;
    }
    let y = frame.forward(x);
    Some([y[0], y[1]])
}

/// Sample witness pairs, filter to instances whose gradients obey the bound
/// at the sum minimizer, and assert every valid minimizer is a region member.
pub fn verify_containment_p1(
    config: &ProblemConfig,
    params: &OracleParams,
) -> Result<ContainmentStats> {
    let (problem, frame) = config.canonicalize()?;
    let problem = problem.with_eps(params.tolerance);
    let outcomes: Vec<SampleOutcome> = (0..params.n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(params.seed, i);
            let (f1, f2) = draw_pair(config, params, &mut rng, true);
            let x_hat = sum_minimizer(&f1, &f2).expect("strongly convex sum must converge");
            // At the sum minimizer the two gradients oppose each other, so
            // one norm check covers both functions.
            let valid = f1.gradient(&x_hat).norm() <= config.grad_bound;
            if !valid {
                return SampleOutcome {
                    valid: false,
                    contained: false,
                    violation: None,
                };
            }
            let p = reduce(&x_hat, &frame);
            let membership = in_m_hat(&p, &problem);
            let contained = membership.in_m_hat;
            let violation = (!contained).then(|| ViolationRecord {
                sample_index: i,
                f1: FnRecord::from_witness(&f1),
                f2: FnRecord::from_witness(&f2),
                minimizer: x_hat.iter().copied().collect(),
                detail: MembershipDetail::P1 { membership },
            });
            SampleOutcome {
                valid: true,
                contained,
                violation,
            }
        })
        .collect();
    Ok(aggregate(outcomes))
}

/// As [`verify_containment_p1`], with the constrained-problem validity
/// filter: the gradient bound must hold everywhere on the body (checked
/// exactly for the quadratic witness class) and the sum minimizer must be
/// interior to the body, since stationarity of the sum only transfers to the
/// constrained problem there.
pub fn verify_containment_p2(
    config: &ProblemConfig,
    body: &ConvexBody,
    params: &OracleParams,
) -> Result<ContainmentStats> {
    let (problem, frame) = config.canonicalize()?;
    let canon_body = body.transformed(&frame);
    let region = ConstrainedRegion::new(problem.with_eps(params.tolerance), canon_body)?;
    let m_problem = problem.with_eps(params.tolerance);
    let outcomes: Vec<SampleOutcome> = (0..params.n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(params.seed, i);
            let (f1, f2) = draw_pair(config, params, &mut rng, false);
            let x_hat = sum_minimizer(&f1, &f2).expect("strongly convex sum must converge");

            let invalid = SampleOutcome {
                valid: false,
                contained: false,
                violation: None,
            };
            let cap1 = max_gradient_norm_on_body(&f1.base().matrix, &f1.base().minimizer, body);
            if cap1 > config.grad_bound {
                return invalid;
            }
            let cap2 = max_gradient_norm_on_body(&f2.base().matrix, &f2.base().minimizer, body);
            if cap2 > config.grad_bound {
                return invalid;
            }
            // Interior stationarity margin.
            match body.distance_to_boundary(&x_hat) {
                Ok(d) if d > 1e-6 => {}
                _ => return invalid,
            }

            let x_canon = frame.forward(&x_hat);
            let membership = region.membership(&x_canon);
            let p = reduce(&x_hat, &frame);
            let m1 = in_m_hat(&p, &m_problem).in_m_hat;
            let contained = membership.in_n_hat && m1;
            let violation = (!contained).then(|| ViolationRecord {
                sample_index: i,
                f1: FnRecord::from_witness(&f1),
                f2: FnRecord::from_witness(&f2),
                minimizer: x_hat.iter().copied().collect(),
                detail: MembershipDetail::P2 {
                    membership,
                    in_m_hat: m1,
                },
            });
            SampleOutcome {
                valid: true,
                contained,
                violation,
            }
        })
        .collect();
    Ok(aggregate(outcomes))
}

fn aggregate(outcomes: Vec<SampleOutcome>) -> ContainmentStats {
    let mut stats = ContainmentStats {
        samples: outcomes.len(),
        valid: 0,
        contained: 0,
        violations: Vec::new(),
    };
    for o in outcomes {
        stats.valid += o.valid as usize;
        stats.contained += o.contained as usize;
        if let Some(v) = o.violation {
            stats.violations.push(v);
        }
    }
    stats
}

/// Exact maximum of `||A (x - xstar)||` over a body: attained at the
/// vertices for polytopes and boxes; for balls, solved through the secular
/// equation of the constrained quadratic maximization.
pub fn max_gradient_norm_on_body(a: &DMatrix<f64>, xstar: &DVector<f64>, body: &ConvexBody) -> f64 {
    if let Some(verts) = body.vertices() {
        return verts
            .iter()
            .map(|v| (a * (v - xstar)).norm())
            .fold(0.0, f64::max);
    }
    match body {
        ConvexBody::Ball { center, radius } => max_norm_on_ball(a, &(center - xstar), *radius),
        _ => unreachable!("vertex-free bodies other than balls are not constructible"),
    }
}

/// Maximize `||A (b + w)||` over `||w|| <= rho`.
fn max_norm_on_ball(a: &DMatrix<f64>, b: &DVector<f64>, rho: f64) -> f64 {
    let m = a.transpose() * a;
    let eig = m.symmetric_eigen();
    let lambda = &eig.eigenvalues;
    let q = &eig.eigenvectors;
    let b_tilde = q.transpose() * b;
    let n = lambda.len();
    let lambda_max = lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let top_tol = 1e-9 * lambda_max.max(1.0);
    let is_top: Vec<bool> = (0..n).map(|i| lambda[i] >= lambda_max - top_tol).collect();

    let value_at = |w_tilde: &DVector<f64>| -> f64 {
        let y = &b_tilde + w_tilde;
        let mut acc = 0.0;
        for i in 0..n {
            acc += lambda[i] * y[i] * y[i];
        }
        acc.max(0.0).sqrt()
    };

    let top_mass: f64 = (0..n)
        .filter(|&i| is_top[i])
        .map(|i| (lambda[i] * b_tilde[i]).powi(2))
        .sum();
    let scale = b.norm().max(rho).max(1.0);
    if top_mass.sqrt() < 1e-12 * scale * lambda_max.max(1.0) {
        // No load on the top eigenspace. If the stationary point at the top
        // eigenvalue leaves radius to spare, fill it along the top direction
        // (hard case); otherwise the secular equation below is regular even
        // with zero top components and handles it.
        let mut w = DVector::zeros(n);
        let mut used = 0.0;
        for i in 0..n {
            if !is_top[i] {
                w[i] = lambda[i] * b_tilde[i] / (lambda_max - lambda[i]).max(top_tol);
                used += w[i] * w[i];
            }
        }
        if used < rho * rho {
            let t = (rho * rho - used).sqrt();
            if let Some(i_top) = (0..n).find(|&i| is_top[i]) {
                w[i_top] = t;
            }
            return value_at(&w);
        }
    }

    // Easy case: phi(mu) = sum (lambda_i b_i / (mu - lambda_i))^2 is
    // decreasing on (lambda_max, inf); bisect for phi = rho^2.
    let phi_w = |mu: f64| -> DVector<f64> {
        DVector::from_fn(n, |i, _| lambda[i] * b_tilde[i] / (mu - lambda[i]))
    };
    let lam_b_norm = (0..n)
        .map(|i| (lambda[i] * b_tilde[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    let mut hi = lambda_max + lam_b_norm / rho + 1.0;
    let mut lo = lambda_max;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lambda_max {
            break;
        }
        if phi_w(mid).norm() > rho {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    value_at(&phi_w(hi))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConservatismReport {
    pub region_area: f64,
    pub hull_area: f64,
    /// `hull_area / region_area`, in (0, 1] when both areas are positive.
    pub ratio: f64,
    pub samples: usize,
    pub valid: usize,
}

/// Compare the traced region's area against the convex hull of empirically
/// observed sum minimizers (2-D only). The ratio is a diagnostic of how
/// conservative the over-approximation is for the sampled witness class.
pub fn conservatism_report(
    config: &ProblemConfig,
    body: Option<&ConvexBody>,
    n_samples: usize,
    grid_resolution: usize,
    kappa: f64,
    seed: u64,
) -> Result<ConservatismReport> {
    if config.dim() != 2 {
        return Err(Error::InvalidConfig(
            "conservatism report requires dimension 2".into(),
        ));
    }
    let params = OracleParams {
        n_samples,
        kappa,
        seed,
        ..OracleParams::default()
    };
    let (problem, frame) = config.canonicalize()?;

    let (stats, points, region_area) = match body {
        None => {
            let stats = verify_containment_p1(config, &params)?;
            let points = collect_valid_points_p1(config, &params, &frame);
            let area = grid_area(&problem, None, grid_resolution, |p| {
                in_m_hat(p, &problem).in_m_hat
            });
            (stats, points, area)
        }
        Some(b) => {
            let stats = verify_containment_p2(config, b, &params)?;
            let points = collect_valid_points_p2(config, b, &params, &frame);
            let canon_body = b.transformed(&frame);
            let region = ConstrainedRegion::new(problem, canon_body.clone())?;
            let area = grid_area(&problem, Some(&canon_body), grid_resolution, |p| {
                let x = DVector::from_vec(vec![p.z1, p.u]);
                region.membership(&x).in_n_hat
            });
            (stats, points, area)
        }
    };

    let hull = convex_hull_2d(&points);
    let hull_area = polygon_area(&hull);
    let ratio = if region_area > 0.0 {
        hull_area / region_area
    } else {
        0.0
    };
    Ok(ConservatismReport {
        region_area,
        hull_area,
        ratio,
        samples: stats.samples,
        valid: stats.valid,
    })
}

fn collect_valid_points_p1(
    config: &ProblemConfig,
    params: &OracleParams,
    frame: &CanonicalFrame,
) -> Vec<[f64; 2]> {
    (0..params.n_samples)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = sample_rng(params.seed, i);
            let (f1, f2) = draw_pair(config, params, &mut rng, true);
            let x_hat = sum_minimizer(&f1, &f2).ok()?;
            (f1.gradient(&x_hat).norm() <= config.grad_bound)
                .then(|| canonical_point_2d(&x_hat, frame))
                .flatten()
        })
        .collect()
}

fn collect_valid_points_p2(
    config: &ProblemConfig,
    body: &ConvexBody,
    params: &OracleParams,
    frame: &CanonicalFrame,
) -> Vec<[f64; 2]> {
    (0..params.n_samples)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = sample_rng(params.seed, i);
            let (f1, f2) = draw_pair(config, params, &mut rng, false);
            let x_hat = sum_minimizer(&f1, &f2).ok()?;
            let ok1 = max_gradient_norm_on_body(&f1.base().matrix, &f1.base().minimizer, body)
                <= config.grad_bound;
            let ok2 = max_gradient_norm_on_body(&f2.base().matrix, &f2.base().minimizer, body)
                <= config.grad_bound;
            let interior = matches!(body.distance_to_boundary(&x_hat), Ok(d) if d > 1e-6);
            (ok1 && ok2 && interior)
                .then(|| canonical_point_2d(&x_hat, frame))
                .flatten()
        })
        .collect()
}

/// Grid-cell area of the region over the canonical bounding box (signed u).
fn grid_area(
    problem: &CanonicalProblem,
    body: Option<&ConvexBody>,
    resolution: usize,
    member: impl Fn(&ReducedPoint) -> bool + Sync,
) -> f64 {
    let r = problem.r;
    let mut z_lo = r - problem.ball_radius2();
    let mut z_hi = problem.ball_radius1() - r;
    let u_max = problem.ball_radius1().min(problem.ball_radius2());
    let mut u_lo = -u_max;
    let mut u_hi = u_max;
    if let Some(b) = body {
        let (lo, hi) = b.bounding_box();
        z_lo = z_lo.max(lo[0]);
        z_hi = z_hi.min(hi[0]);
        u_lo = u_lo.max(lo[1]);
        u_hi = u_hi.min(hi[1]);
    }
    if z_hi <= z_lo || u_hi <= u_lo {
        return 0.0;
    }
    let n = resolution.max(2);
    let dz = (z_hi - z_lo) / n as f64;
    let du = (u_hi - u_lo) / n as f64;
    let count: usize = (0..n)
        .into_par_iter()
        .map(|j| {
            let u = u_lo + (j as f64 + 0.5) * du;
            (0..n)
                .filter(|&i| {
                    let z = z_lo + (i as f64 + 0.5) * dz;
                    member(&ReducedPoint { z1: z, u })
                })
                .count()
        })
        .sum();
    count as f64 * dz * du
}
