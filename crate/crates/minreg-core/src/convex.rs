//! Compact convex bodies with interior distance-to-boundary, and the
//! position-dependent gradient bound used by the constrained-region math.
//!
//! Three variants cover the constraint sets of interest: balls in any
//! dimension, rotated 2-D boxes, and bounded half-space intersections.
//! Distance-to-boundary is exact for interior points of each variant.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CanonicalFrame;

/// Tolerance for closed-set containment tests.
const CONTAINS_EPS: f64 = 1e-9;

/// A compact convex set. Construct through [`ConvexBody::ball`],
/// [`ConvexBody::box2d`], or [`ConvexBody::polytope`], which validate the
/// variant invariants (positive radii, boundedness, nonempty interior).
///
/// Serializes as `{"type": "ball" | "box2d" | "polytope", ...}` with plain
/// numeric arrays; deserialization runs the validating constructors.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "BodySpec", try_from = "BodySpec")]
pub enum ConvexBody {
    Ball {
        center: DVector<f64>,
        radius: f64,
    },
    /// Rotated rectangle in the plane: `|xi_i| <= half_widths[i]` after
    /// rotating by `-angle` about `center`.
    Box2D {
        center: DVector<f64>,
        half_widths: [f64; 2],
        angle: f64,
    },
    /// Intersection of half-spaces `normals[i] . x <= offsets[i]`.
    Polytope {
        normals: Vec<DVector<f64>>,
        offsets: Vec<f64>,
    },
}

impl ConvexBody {
    pub fn ball(center: DVector<f64>, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidConfig("ball radius must be positive".into()));
        }
        if center.is_empty() || !center.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidConfig(
                "ball center must be finite and non-empty".into(),
            ));
        }
        Ok(Self::Ball { center, radius })
    }

    pub fn box2d(center: DVector<f64>, half_widths: [f64; 2], angle: f64) -> Result<Self> {
        if center.len() != 2 {
            return Err(Error::InvalidConfig("box2d requires a 2-D center".into()));
        }
        if !half_widths.iter().all(|s| s.is_finite() && *s > 0.0) {
            return Err(Error::InvalidConfig(
                "box2d half-widths must be positive".into(),
            ));
        }
        if !(0.0..=std::f64::consts::FRAC_PI_4 + 1e-12).contains(&angle) {
            return Err(Error::InvalidConfig(
                "box2d angle must lie in [0, pi/4]; swap the half-widths to renormalize".into(),
            ));
        }
        Ok(Self::Box2D {
            center,
            half_widths,
            angle,
        })
    }

    /// Bounded half-space intersection with nonempty interior. Validation
    /// enumerates the vertices (every choice of `dim` active constraints),
    /// requires enough of them to pin down an interior point, and probes the
    /// coordinate directions for recession rays; in 2-D an exact
    /// positive-span test on the normals backs the probes up.
    pub fn polytope(normals: Vec<DVector<f64>>, offsets: Vec<f64>) -> Result<Self> {
        if normals.len() != offsets.len() {
            return Err(Error::InvalidConfig(
                "normals/offsets length mismatch".into(),
            ));
        }
        if normals.is_empty() {
            return Err(Error::InvalidConfig(
                "polytope needs at least one half-space".into(),
            ));
        }
        let dim = normals[0].len();
        if dim < 1 || !normals.iter().all(|a| a.len() == dim) {
            return Err(Error::InvalidConfig(
                "inconsistent normal dimensions".into(),
            ));
        }
        if normals.iter().any(|a| a.norm() < 1e-12) {
            return Err(Error::InvalidConfig("zero-length polytope normal".into()));
        }
        if normals.len() < dim + 1 {
            return Err(Error::InvalidConfig(
                "a bounded polytope needs at least dim + 1 half-spaces".into(),
            ));
        }

        let body = Self::Polytope { normals, offsets };
        let verts = body.polytope_vertices()?;
        if verts.len() < dim + 1 {
            return Err(Error::InvalidConfig(format!(
                "polytope has only {} vertices; empty interior or unbounded",
                verts.len()
            )));
        }
        let centroid = centroid(&verts);
        let scale = verts
            .iter()
            .map(|v| (v - &centroid).norm())
            .fold(0.0, f64::max);
        let margin = body.plane_slack(&centroid);
        if margin <= 1e-9 * scale.max(1.0) {
            return Err(Error::InvalidConfig(
                "polytope interior is empty or degenerate".into(),
            ));
        }
        body.check_bounded(&centroid, scale)?;
        Ok(body)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { center, .. } | Self::Box2D { center, .. } => center.len(),
            Self::Polytope { normals, .. } => normals[0].len(),
        }
    }

    /// Closed-set membership with tolerance 1e-9.
    pub fn contains(&self, x: &DVector<f64>) -> bool {
        match self {
            Self::Ball { center, radius } => (x - center).norm() <= radius + CONTAINS_EPS,
            Self::Box2D { half_widths, .. } => {
                let xi = self.box_frame_coords(x);
                xi[0].abs() <= half_widths[0] + CONTAINS_EPS
                    && xi[1].abs() <= half_widths[1] + CONTAINS_EPS
            }
            Self::Polytope { .. } => self.plane_slack(x) >= -CONTAINS_EPS,
        }
    }

    /// Distance from an interior (or boundary) point to the body boundary.
    pub fn distance_to_boundary(&self, x: &DVector<f64>) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::OutsideBody);
        }
        let d = match self {
            Self::Ball { center, radius } => radius - (x - center).norm(),
            Self::Box2D { half_widths, .. } => {
                let xi = self.box_frame_coords(x);
                (half_widths[0] - xi[0].abs()).min(half_widths[1] - xi[1].abs())
            }
            Self::Polytope { .. } => self.plane_slack(x),
        };
        Ok(d.max(0.0))
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (DVector<f64>, DVector<f64>) {
        match self {
            Self::Ball { center, radius } => {
                (center.map(|c| c - radius), center.map(|c| c + radius))
            }
            Self::Box2D {
                center,
                half_widths,
                angle,
            } => {
                let (s, c) = angle.sin_cos();
                let ex = c.abs() * half_widths[0] + s.abs() * half_widths[1];
                let ey = s.abs() * half_widths[0] + c.abs() * half_widths[1];
                let ext = DVector::from_vec(vec![ex, ey]);
                (center - &ext, center + &ext)
            }
            Self::Polytope { .. } => {
                let verts = self.polytope_vertices().expect("validated polytope");
                let dim = self.dim();
                let mut lo = DVector::from_element(dim, f64::INFINITY);
                let mut hi = DVector::from_element(dim, f64::NEG_INFINITY);
                for v in &verts {
                    for i in 0..dim {
                        lo[i] = lo[i].min(v[i]);
                        hi[i] = hi[i].max(v[i]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Extreme points, where the variant has finitely many (balls do not).
    pub fn vertices(&self) -> Option<Vec<DVector<f64>>> {
        match self {
            Self::Ball { .. } => None,
            Self::Box2D {
                center,
                half_widths,
                angle,
            } => {
                let (s, c) = angle.sin_cos();
                let mut out = Vec::with_capacity(4);
                for &sx in &[-1.0, 1.0] {
                    for &sy in &[-1.0, 1.0] {
                        let dx = sx * half_widths[0];
                        let dy = sy * half_widths[1];
                        out.push(DVector::from_vec(vec![
                            center[0] + c * dx - s * dy,
                            center[1] + s * dx + c * dy,
                        ]));
                    }
                }
                Some(out)
            }
            Self::Polytope { .. } => self.polytope_vertices().ok(),
        }
    }

    /// Upper bound on the body diameter (exact for balls and boxes).
    pub fn diameter_bound(&self) -> f64 {
        match self {
            Self::Ball { radius, .. } => 2.0 * radius,
            Self::Box2D { half_widths, .. } => 2.0 * half_widths[0].hypot(half_widths[1]),
            Self::Polytope { .. } => {
                let verts = self.polytope_vertices().expect("validated polytope");
                let mut d = 0.0f64;
                for i in 0..verts.len() {
                    for j in i + 1..verts.len() {
                        d = d.max((&verts[i] - &verts[j]).norm());
                    }
                }
                d
            }
        }
    }

    /// The body expressed in the canonical frame coordinates. Boxes become
    /// four-face polytopes so the rotation never leaves the angle range.
    pub fn transformed(&self, frame: &CanonicalFrame) -> ConvexBody {
        match self {
            Self::Ball { center, radius } => Self::Ball {
                center: frame.forward(center),
                radius: *radius,
            },
            Self::Box2D { .. } => {
                let (normals, offsets) = self.as_halfspaces().expect("box has half-spaces");
                Self::Polytope { normals, offsets }.transformed(frame)
            }
            Self::Polytope { normals, offsets } => {
                // a.x <= b with x = R^T y - t becomes (R a).y <= b + a.t
                let new_normals: Vec<DVector<f64>> =
                    normals.iter().map(|a| &frame.rotation * a).collect();
                let new_offsets: Vec<f64> = normals
                    .iter()
                    .zip(offsets)
                    .map(|(a, b)| b + a.dot(&frame.translation))
                    .collect();
                Self::Polytope {
                    normals: new_normals,
                    offsets: new_offsets,
                }
            }
        }
    }

    /// Half-space representation, where the variant has one.
    pub fn as_halfspaces(&self) -> Option<(Vec<DVector<f64>>, Vec<f64>)> {
        match self {
            Self::Ball { .. } => None,
            Self::Box2D {
                center,
                half_widths,
                angle,
            } => {
                let (s, c) = angle.sin_cos();
                let axes = [
                    DVector::from_vec(vec![c, s]),
                    DVector::from_vec(vec![-s, c]),
                ];
                let mut normals = Vec::with_capacity(4);
                let mut offsets = Vec::with_capacity(4);
                for (axis, sw) in axes.iter().zip(half_widths) {
                    for sign in [1.0, -1.0] {
                        let n = axis * sign;
                        offsets.push(n.dot(center) + sw);
                        normals.push(n);
                    }
                }
                Some((normals, offsets))
            }
            Self::Polytope { normals, offsets } => Some((normals.clone(), offsets.clone())),
        }
    }

    /// Rotate into the box frame (coordinates relative to center).
    fn box_frame_coords(&self, x: &DVector<f64>) -> [f64; 2] {
        match self {
            Self::Box2D { center, angle, .. } => {
                let dx = x[0] - center[0];
                let dy = x[1] - center[1];
                let (s, c) = angle.sin_cos();
                [c * dx + s * dy, -s * dx + c * dy]
            }
            _ => unreachable!("box_frame_coords on non-box body"),
        }
    }

    /// Minimum normalized slack over the half-spaces; equals the boundary
    /// distance for interior points.
    fn plane_slack(&self, x: &DVector<f64>) -> f64 {
        match self {
            Self::Polytope { normals, offsets } => normals
                .iter()
                .zip(offsets)
                .map(|(a, b)| (b - a.dot(x)) / a.norm())
                .fold(f64::INFINITY, f64::min),
            _ => unreachable!("plane_slack on non-polytope body"),
        }
    }

    /// Enumerate vertices by solving every `dim`-subset of active constraints
    /// and keeping the feasible, distinct solutions.
    fn polytope_vertices(&self) -> Result<Vec<DVector<f64>>> {
        let (normals, offsets) = match self {
            Self::Polytope { normals, offsets } => (normals, offsets),
            _ => return Err(Error::InvalidConfig("not a polytope".into())),
        };
        let m = normals.len();
        let dim = self.dim();
        let combos = n_choose_k(m, dim);
        if combos > 200_000 {
            return Err(Error::InvalidConfig(format!(
                "polytope too complex to validate ({combos} constraint subsets)"
            )));
        }

        let scale = offsets.iter().fold(1.0f64, |acc, b| acc.max(b.abs()));
        let mut verts: Vec<DVector<f64>> = Vec::new();
        let mut idx: Vec<usize> = (0..dim).collect();
        loop {
            let mut mat = DMatrix::zeros(dim, dim);
            let mut rhs = DVector::zeros(dim);
            for (row, &i) in idx.iter().enumerate() {
                mat.row_mut(row).copy_from(&normals[i].transpose());
                rhs[row] = offsets[i];
            }
            if let Some(sol) = mat.lu().solve(&rhs) {
                if sol.iter().all(|c| c.is_finite()) {
                    let feasible = normals
                        .iter()
                        .zip(offsets)
                        .all(|(a, b)| a.dot(&sol) <= b + 1e-9 * a.norm() * scale.max(1.0));
                    if feasible
                        && !verts
                            .iter()
                            .any(|v| (v - &sol).norm() < 1e-7 * scale.max(1.0))
                    {
                        verts.push(sol);
                    }
                }
            }
            if !advance_combination(&mut idx, m) {
                break;
            }
        }
        Ok(verts)
    }

    /// Reject recession rays: march from an interior point along every
    /// coordinate direction; an exit must exist. In 2-D, additionally require
    /// the normals to positively span the plane (no angular gap of pi or
    /// more), which is exact.
    fn check_bounded(&self, interior: &DVector<f64>, scale: f64) -> Result<()> {
        let (normals, _) = match self {
            Self::Polytope { normals, offsets } => (normals, offsets),
            _ => unreachable!(),
        };
        let dim = self.dim();
        for axis in 0..dim {
            for sign in [1.0, -1.0] {
                let escapes = normals.iter().any(|a| sign * a[axis] > 1e-12 * a.norm());
                if !escapes {
                    return Err(Error::InvalidConfig(format!(
                        "polytope is unbounded along coordinate axis {axis}"
                    )));
                }
            }
        }
        if dim == 2 {
            let mut angles: Vec<f64> = normals.iter().map(|a| a[1].atan2(a[0])).collect();
            angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut max_gap = 0.0f64;
            for i in 0..angles.len() {
                let next = if i + 1 < angles.len() {
                    angles[i + 1]
                } else {
                    angles[0] + std::f64::consts::TAU
                };
                max_gap = max_gap.max(next - angles[i]);
            }
            if max_gap >= std::f64::consts::PI - 1e-12 {
                return Err(Error::InvalidConfig(
                    "polytope is unbounded: normals do not positively span the plane".into(),
                ));
            }
        }
        let _ = (interior, scale);
        Ok(())
    }
}

/// Wire format for convex bodies: the `type` tag plus variant-specific
/// numeric arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodySpec {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    #[serde(rename = "box2d")]
    Box2d {
        center: Vec<f64>,
        half_widths: [f64; 2],
        angle: f64,
    },
    Polytope {
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
}

impl From<ConvexBody> for BodySpec {
    fn from(body: ConvexBody) -> Self {
        match body {
            ConvexBody::Ball { center, radius } => Self::Ball {
                center: center.iter().copied().collect(),
                radius,
            },
            ConvexBody::Box2D {
                center,
                half_widths,
                angle,
            } => Self::Box2d {
                center: center.iter().copied().collect(),
                half_widths,
                angle,
            },
            ConvexBody::Polytope { normals, offsets } => Self::Polytope {
                normals: normals
                    .iter()
                    .map(|a| a.iter().copied().collect())
                    .collect(),
                offsets,
            },
        }
    }
}

impl TryFrom<BodySpec> for ConvexBody {
    type Error = Error;

    fn try_from(spec: BodySpec) -> Result<Self> {
        match spec {
            BodySpec::Ball { center, radius } => Self::ball(DVector::from_vec(center), radius),
            BodySpec::Box2d {
                center,
                half_widths,
                angle,
            } => Self::box2d(DVector::from_vec(center), half_widths, angle),
            BodySpec::Polytope { normals, offsets } => Self::polytope(
                normals.into_iter().map(DVector::from_vec).collect(),
                offsets,
            ),
        }
    }
}

fn centroid(points: &[DVector<f64>]) -> DVector<f64> {
    let mut c = DVector::zeros(points[0].len());
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

fn n_choose_k(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn advance_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - (k - i) {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Position-dependent gradient bound `L - min(sigma1, sigma2) * d(x, boundary)`.
#[derive(Clone, Debug)]
pub struct ShrunkBound {
    pub base_bound: f64,
    pub min_sigma: f64,
    pub body: ConvexBody,
}

impl ShrunkBound {
    pub fn new(base_bound: f64, min_sigma: f64, body: ConvexBody) -> Result<Self> {
        if !(base_bound.is_finite() && base_bound > 0.0) {
            return Err(Error::InvalidConfig("base bound must be positive".into()));
        }
        if !(min_sigma.is_finite() && min_sigma > 0.0) {
            return Err(Error::InvalidConfig("min sigma must be positive".into()));
        }
        Ok(Self {
            base_bound,
            min_sigma,
            body,
        })
    }

    /// Evaluate the bound at a point of the body. Errors if the point is
    /// outside or if the shrink consumes the whole budget (no admissible
    /// gradient remains).
    pub fn eval(&self, x: &DVector<f64>) -> Result<f64> {
        let d = self.body.distance_to_boundary(x)?;
        let value = self.base_bound - self.min_sigma * d;
        if value <= 1e-12 {
            return Err(Error::NonpositiveBound { value });
        }
        Ok(value)
    }
}

/// Per-function gradient cap `L - sigma * d(x, boundary)` implied by strong
/// convexity of a single function bounded on the body. May be non-positive.
pub fn single_function_gradient_cap(
    sigma: f64,
    bound: f64,
    body: &ConvexBody,
    x: &DVector<f64>,
) -> Result<f64> {
    let d = body.distance_to_boundary(x)?;
    Ok(bound - sigma * d)
}

/// Convex hull of a 2-D point set (monotone chain), counterclockwise,
/// without the repeated closing point.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| a == b);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a simple polygon given by its vertices in order.
pub fn polygon_area(vertices: &[[f64; 2]]) -> f64 {
    if vertices.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..vertices.len() {
        let [x0, y0] = vertices[i];
        let [x1, y1] = vertices[(i + 1) % vertices.len()];
        acc += x0 * y1 - x1 * y0;
    }
    0.5 * acc.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v2(a: f64, b: f64) -> DVector<f64> {
        DVector::from_vec(vec![a, b])
    }

    fn unit_square() -> ConvexBody {
        ConvexBody::polytope(
            vec![v2(1.0, 0.0), v2(-1.0, 0.0), v2(0.0, 1.0), v2(0.0, -1.0)],
            vec![1.0, 1.0, 1.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn contains_examples() {
        let ball = ConvexBody::ball(v2(0.0, 1.0), 5.0).unwrap();
        assert!(ball.contains(&v2(0.0, 1.0)));
        assert!(!ball.contains(&v2(0.0, 7.0)));
        assert!(
            unit_square().contains(&v2(1.0, 0.0)),
            "face point is inside the closed set"
        );
    }

    #[test]
    fn ball_distance() {
        let ball = ConvexBody::ball(v2(0.0, 1.0), 5.0).unwrap();
        assert_relative_eq!(ball.distance_to_boundary(&v2(0.0, 1.0)).unwrap(), 5.0);
        assert_relative_eq!(ball.distance_to_boundary(&v2(5.0, 1.0)).unwrap(), 0.0);
        assert!(matches!(
            ball.distance_to_boundary(&v2(9.0, 0.0)),
            Err(Error::OutsideBody)
        ));
    }

    #[test]
    fn box_distance() {
        let bx = ConvexBody::box2d(v2(0.0, 0.0), [2.0, 1.0], 0.0).unwrap();
        assert_relative_eq!(bx.distance_to_boundary(&v2(0.5, 0.0)).unwrap(), 1.0);
        assert_relative_eq!(
            bx.distance_to_boundary(&v2(1.9, 0.0)).unwrap(),
            0.1,
            epsilon = 1e-12
        );
    }

    #[test]
    fn box_rejects_out_of_range_angle() {
        assert!(ConvexBody::box2d(v2(0.0, 0.0), [1.0, 1.0], 1.0).is_err());
        assert!(ConvexBody::box2d(v2(0.0, 0.0), [1.0, 1.0], std::f64::consts::FRAC_PI_4).is_ok());
    }

    #[test]
    fn polytope_distance_matches_box() {
        let bx = ConvexBody::box2d(v2(0.3, -0.2), [2.0, 1.0], 0.4).unwrap();
        let (normals, offsets) = bx.as_halfspaces().unwrap();
        let poly = ConvexBody::polytope(normals, offsets).unwrap();
        for &(x, y) in &[(0.3, -0.2), (1.0, 0.1), (-0.5, -0.6)] {
            let p = v2(x, y);
            if bx.contains(&p) {
                assert_relative_eq!(
                    bx.distance_to_boundary(&p).unwrap(),
                    poly.distance_to_boundary(&p).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn polytope_rejects_unbounded() {
        // A slab: no constraint pins down the second coordinate.
        let err = ConvexBody::polytope(
            vec![v2(1.0, 0.0), v2(-1.0, 0.0), v2(1.0, 1.0)],
            vec![1.0, 1.0, 1.0],
        );
        assert!(err.is_err());
        // 30-60 degree cone: unbounded only along a non-axis direction.
        let cone = ConvexBody::polytope(
            vec![
                v2(0.5773502691896258, -1.0),
                v2(-1.7320508075688772, 1.0),
                v2(-1.0, 0.0),
                v2(0.0, -1.0),
            ],
            vec![0.0, 0.0, 0.0, 0.0],
        );
        assert!(
            cone.is_err(),
            "cone with empty interior/unbounded must be rejected"
        );
    }

    #[test]
    fn polytope_vertices_of_square() {
        let verts = unit_square().vertices().unwrap();
        assert_eq!(verts.len(), 4);
        let (lo, hi) = unit_square().bounding_box();
        assert_relative_eq!(lo, v2(-1.0, -1.0), epsilon = 1e-12);
        assert_relative_eq!(hi, v2(1.0, 1.0), epsilon = 1e-12);
    }

    #[test]
    fn shrunk_bound_values() {
        let ball = ConvexBody::ball(v2(0.0, 0.0), 5.0).unwrap();
        let sb = ShrunkBound::new(10.0, 1.0, ball).unwrap();
        assert_relative_eq!(sb.eval(&v2(0.0, 0.0)).unwrap(), 5.0);
        assert_relative_eq!(sb.eval(&v2(5.0, 0.0)).unwrap(), 10.0);
        assert_relative_eq!(sb.eval(&v2(2.0, 0.0)).unwrap(), 7.0);
    }

    #[test]
    fn shrunk_bound_error_paths() {
        let ball = ConvexBody::ball(v2(0.0, 0.0), 20.0).unwrap();
        let sb = ShrunkBound::new(10.0, 1.0, ball).unwrap();
        assert!(matches!(
            sb.eval(&v2(0.0, 0.0)),
            Err(Error::NonpositiveBound { .. })
        ));
        assert!(matches!(sb.eval(&v2(30.0, 0.0)), Err(Error::OutsideBody)));
    }

    #[test]
    fn gradient_cap_values() {
        let ball = ConvexBody::ball(v2(0.0, 0.0), 5.0).unwrap();
        assert_relative_eq!(
            single_function_gradient_cap(1.0, 10.0, &ball, &v2(5.0, 0.0)).unwrap(),
            10.0
        );
        assert_relative_eq!(
            single_function_gradient_cap(2.0, 10.0, &ball, &v2(2.0, 0.0)).unwrap(),
            4.0
        );
        assert_relative_eq!(
            single_function_gradient_cap(2.0, 10.0, &ball, &v2(0.0, 0.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn hull_area_of_square_points() {
        let pts = vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.5, 0.5],
            [0.25, 0.75],
        ];
        let hull = convex_hull_2d(&pts);
        assert_eq!(hull.len(), 4);
        assert_relative_eq!(polygon_area(&hull), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hull_degenerate_collinear() {
        let pts = vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]];
        assert_relative_eq!(polygon_area(&convex_hull_2d(&pts)), 0.0);
    }
}
