//! Boundary extraction: marching squares on the membership indicator with
//! bisection refinement of every crossing against the residual sign.
//!
//! The marching pass works on the sign of a scalar field that equals the
//! angle-equality residual where it is defined and a positive sentinel
//! outside the admissible zone, so crossings are only generated across the
//! true region boundary. The minimizers, where the curve is tangent and grid
//! recovery is ill-conditioned, are appended analytically.

use std::collections::HashMap;
use std::path::Path;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::geometry::{CanonicalProblem, ReducedPoint, DEGENERACY_EPS};
use crate::region_p1::{in_m_hat, theorem1_applicable, theorem1_limit, tn_residual};
use crate::region_p2::{ConstrainedRegion, Verdict};

const BISECTION_ITERS: usize = 60;
const MIN_BOUNDARY_CELLS: usize = 16;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceMetadata {
    pub problem: CanonicalProblem,
    pub body: Option<ConvexBody>,
    pub resolution: usize,
    /// In dimensions above two the point-bound region is a surface of
    /// revolution about the minimizer axis; the polyline is its profile.
    pub surface_of_revolution: bool,
}

/// Ordered boundary approximation with per-vertex residuals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryPolyline {
    pub vertices: Vec<[f64; 2]>,
    /// `|residual|` at each vertex; absent at analytically inserted
    /// minimizer vertices where the residual is undefined.
    pub residuals: Vec<Option<f64>>,
    pub closed: bool,
    pub includes_minimizers: bool,
    /// Minimizer positions in the same frame as the vertices.
    pub minimizers: [[f64; 2]; 2],
    pub metadata: TraceMetadata,
}

impl BoundaryPolyline {
    /// Largest recorded residual magnitude over refined vertices.
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .flatten()
            .fold(0.0f64, |acc, r| acc.max(r.abs()))
    }

    /// Map vertices and minimizer markers through a point transform
    /// (e.g. back into the original coordinates).
    pub fn mapped(&self, f: impl Fn([f64; 2]) -> [f64; 2]) -> Self {
        let mut out = self.clone();
        out.vertices = self.vertices.iter().map(|&v| f(v)).collect();
        out.minimizers = [f(self.minimizers[0]), f(self.minimizers[1])];
        out
    }
}

/// Trace the point-bound region boundary in the reduced plane.
pub fn trace_p1(problem: &CanonicalProblem, resolution: usize) -> Result<BoundaryPolyline> {
    if !theorem1_applicable(problem) {
        return Err(Error::Theorem1NotApplicable {
            r: problem.r,
            limit: theorem1_limit(problem),
        });
    }
    let r = problem.r;
    let z_lo = r - problem.ball_radius2();
    let z_hi = problem.ball_radius1() - r;
    let u_max = problem.ball_radius1().min(problem.ball_radius2());
    let grid = Grid::new(z_lo, z_hi, -u_max, u_max, resolution);

    let scalar = |z: f64, u: f64| p1_scalar(z, u, problem);
    let residual_at = |z: f64, u: f64| {
        tn_residual(&ReducedPoint::new(z, u.abs()), problem, problem.grad_bound).ok()
    };
    let snap_tol = 1e-9 * (1.0 + r);
    let loop_pts = march(
        &grid,
        &scalar,
        &residual_at,
        [[-r, 0.0], [r, 0.0]],
        snap_tol,
    )?;
    let mut poly = assemble(loop_pts, problem, None, resolution);
    insert_minimizer(&mut poly, [-r, 0.0]);
    insert_minimizer(&mut poly, [r, 0.0]);
    poly.includes_minimizers = true;
    Ok(poly)
}

/// Trace the constrained-region boundary in the canonical plane (2-D only:
/// the body breaks the revolution symmetry in higher dimensions).
pub fn trace_p2(region: &ConstrainedRegion, resolution: usize) -> Result<BoundaryPolyline> {
    let problem = *region.problem();
    if problem.ambient_dim != 2 {
        return Err(Error::InvalidConfig(
            "constrained tracing requires ambient dimension 2".into(),
        ));
    }
    let report = region.theorem2_precondition(resolution);
    if report.verdict != Verdict::Applicable {
        return Err(Error::Theorem2NotApplicable {
            report: Box::new(report),
        });
    }

    let r = problem.r;
    let (body_lo, body_hi) = region.body().bounding_box();
    let z_lo = (r - problem.ball_radius2()).max(body_lo[0]);
    let z_hi = (problem.ball_radius1() - r).min(body_hi[0]);
    let u_max = problem.ball_radius1().min(problem.ball_radius2());
    let u_lo = (-u_max).max(body_lo[1]);
    let u_hi = u_max.min(body_hi[1]);
    let grid = Grid::new(z_lo, z_hi, u_lo, u_hi, resolution);

    let scalar = |z: f64, u: f64| p2_scalar(z, u, region);
    let residual_at = |z: f64, u: f64| {
        region
            .tn_residual_tilde(&DVector::from_vec(vec![z, u]))
            .ok()
    };
    let snap_tol = 1e-9 * (1.0 + r);
    let loop_pts = march(
        &grid,
        &scalar,
        &residual_at,
        [[-r, 0.0], [r, 0.0]],
        snap_tol,
    )?;
    let mut poly = assemble(loop_pts, &problem, Some(region.body().clone()), resolution);
    insert_minimizer(&mut poly, [-r, 0.0]);
    insert_minimizer(&mut poly, [r, 0.0]);
    poly.includes_minimizers = true;

    // Containment chain: every constrained-boundary vertex belongs to the
    // point-bound region.
    for v in &poly.vertices {
        let m = in_m_hat(&ReducedPoint::new(v[0], v[1].abs()), &problem);
        assert!(
            m.in_m_hat,
            "constrained boundary vertex {v:?} escaped the point-bound region"
        );
    }
    Ok(poly)
}

/// Residual-signed indicator for the point-bound region: negative = member.
fn p1_scalar(z: f64, u: f64, problem: &CanonicalProblem) -> f64 {
    let p = ReducedPoint::new(z, u.abs());
    match tn_residual(&p, problem, problem.grad_bound) {
        Ok(v) => v,
        Err(Error::UndefinedAtMinimizer { .. }) => {
            // Endpoint rule: grid node fell exactly on a minimizer.
            let d1 = p.d1(problem.r);
            let member = if d1 < DEGENERACY_EPS {
                problem.r <= 0.5 * problem.ball_radius2()
            } else {
                problem.r <= 0.5 * problem.ball_radius1()
            };
            if member {
                -1.0
            } else {
                1.0
            }
        }
        Err(_) => 1.0,
    }
}

/// Residual-signed indicator for the constrained region.
fn p2_scalar(z: f64, u: f64, region: &ConstrainedRegion) -> f64 {
    let x = DVector::from_vec(vec![z, u]);
    match region.tn_residual_tilde(&x) {
        Ok(v) => v,
        Err(Error::UndefinedAtMinimizer { .. }) => {
            let m = region.membership(&x);
            if m.in_n_hat {
                -1.0
            } else {
                1.0
            }
        }
        Err(_) => 1.0,
    }
}

struct Grid {
    x0: f64,
    y0: f64,
    dx: f64,
    dy: f64,
    n: usize,
}

impl Grid {
    /// Covers `[x_lo, x_hi] x [y_lo, y_hi]` inflated by 4% per side, with
    /// `n x n` cells.
    fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64, n: usize) -> Self {
        let pad_x = 0.04 * (x_hi - x_lo);
        let pad_y = 0.04 * (y_hi - y_lo);
        let x0 = x_lo - pad_x;
        let y0 = y_lo - pad_y;
        let dx = (x_hi + pad_x - x0) / n as f64;
        let dy = (y_hi + pad_y - y0) / n as f64;
        Self { x0, y0, dx, dy, n }
    }

    fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + i as f64 * self.dx, self.y0 + j as f64 * self.dy)
    }
}

/// Grid edge carrying a single crossing: (node index, horizontal?).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct EdgeId {
    i: usize,
    j: usize,
    horizontal: bool,
}

/// A chained loop of crossing points with the residual magnitude at each
/// (NaN where the residual is undefined).
struct TracedLoop {
    points: Vec<[f64; 2]>,
    residuals: Vec<f64>,
    closed: bool,
}

fn march(
    grid: &Grid,
    scalar: &(impl Fn(f64, f64) -> f64 + Sync),
    residual_at: &impl Fn(f64, f64) -> Option<f64>,
    minimizers: [[f64; 2]; 2],
    snap_tol: f64,
) -> Result<Vec<TracedLoop>> {
    let n = grid.n;
    let inside: Vec<Vec<bool>> = (0..=n)
        .into_par_iter()
        .map(|j| {
            (0..=n)
                .map(|i| {
                    let (x, y) = grid.node(i, j);
                    scalar(x, y) <= 0.0
                })
                .collect()
        })
        .collect();

    // Crossing points, refined once per edge.
    let mut crossings: HashMap<EdgeId, ([f64; 2], f64)> = HashMap::new();
    let refine = |edge: EdgeId, crossings: &mut HashMap<EdgeId, ([f64; 2], f64)>| {
        crossings.entry(edge).or_insert_with(|| {
            let (ax, ay) = grid.node(edge.i, edge.j);
            let (bx, by) = if edge.horizontal {
                grid.node(edge.i + 1, edge.j)
            } else {
                grid.node(edge.i, edge.j + 1)
            };
            let a_in = inside[edge.j][edge.i];
            let b_in = if edge.horizontal {
                inside[edge.j][edge.i + 1]
            } else {
                inside[edge.j + 1][edge.i]
            };
            assert!(
                a_in != b_in,
                "crossing edge endpoints must have opposite membership"
            );
            let (mut ins, mut out) = if a_in {
                ([ax, ay], [bx, by])
            } else {
                ([bx, by], [ax, ay])
            };
            for _ in 0..BISECTION_ITERS {
                let mid = [0.5 * (ins[0] + out[0]), 0.5 * (ins[1] + out[1])];
                if scalar(mid[0], mid[1]) <= 0.0 {
                    ins = mid;
                } else {
                    out = mid;
                }
            }
            let pt = [0.5 * (ins[0] + out[0]), 0.5 * (ins[1] + out[1])];
            // The curve is tangent at the minimizers and the residual
            // diverges there; snap such crossings onto the exact endpoint.
            for m in minimizers {
                if (pt[0] - m[0]).hypot(pt[1] - m[1]) < snap_tol {
                    return (m, f64::NAN);
                }
            }
            let res = residual_at(pt[0], pt[1]).map_or(f64::NAN, f64::abs);
            (pt, res)
        });
    };

    // Cell sweep: collect segments as edge pairs.
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    let mut mixed_cells = 0usize;
    for j in 0..n {
        for i in 0..n {
            let b00 = inside[j][i];
            let b10 = inside[j][i + 1];
            let b11 = inside[j + 1][i + 1];
            let b01 = inside[j + 1][i];
            let case = (b00 as u8) | ((b10 as u8) << 1) | ((b11 as u8) << 2) | ((b01 as u8) << 3);
            if case == 0 || case == 15 {
                continue;
            }
            mixed_cells += 1;
            let bottom = EdgeId {
                i,
                j,
                horizontal: true,
            };
            let top = EdgeId {
                i,
                j: j + 1,
                horizontal: true,
            };
            let left = EdgeId {
                i,
                j,
                horizontal: false,
            };
            let right = EdgeId {
                i: i + 1,
                j,
                horizontal: false,
            };
            let push = |a: EdgeId, b: EdgeId, segments: &mut Vec<(EdgeId, EdgeId)>| {
                segments.push((a, b));
            };
            match case {
                1 => push(bottom, left, &mut segments),
                2 => push(bottom, right, &mut segments),
                3 => push(left, right, &mut segments),
                4 => push(right, top, &mut segments),
                6 => push(bottom, top, &mut segments),
                7 => push(left, top, &mut segments),
                8 => push(left, top, &mut segments),
                9 => push(bottom, top, &mut segments),
                11 => push(right, top, &mut segments),
                12 => push(left, right, &mut segments),
                13 => push(bottom, right, &mut segments),
                14 => push(bottom, left, &mut segments),
                5 | 10 => {
                    // Saddle: the diagonal inside corners connect through
                    // the cell iff a center sample is inside; the boundary
                    // then wraps the two outside corners, otherwise it wraps
                    // the two inside corners.
                    let (cx, cy) = (
                        grid.x0 + (i as f64 + 0.5) * grid.dx,
                        grid.y0 + (j as f64 + 0.5) * grid.dy,
                    );
                    let center_in = scalar(cx, cy) <= 0.0;
                    let wrap_b00_b11 = if case == 5 { !center_in } else { center_in };
                    if wrap_b00_b11 {
                        push(bottom, left, &mut segments);
                        push(right, top, &mut segments);
                    } else {
                        push(bottom, right, &mut segments);
                        push(left, top, &mut segments);
                    }
                }
                _ => unreachable!("cases 0 and 15 filtered above"),
            }
        }
    }
    if mixed_cells < MIN_BOUNDARY_CELLS {
        return Err(Error::ResolutionTooCoarse { cells: mixed_cells });
    }
    for &(a, b) in &segments {
        refine(a, &mut crossings);
        refine(b, &mut crossings);
    }

    // Chain segments into loops by shared edges.
    let mut adjacency: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        adjacency.entry(a).or_default().push(k);
        adjacency.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut loops: Vec<TracedLoop> = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (first_edge, mut current) = segments[start];
        let mut chain = vec![first_edge, current];
        loop {
            let next = adjacency[&current].iter().copied().find(|&k| !used[k]);
            let Some(k) = next else { break };
            used[k] = true;
            let (a, b) = segments[k];
            current = if a == current { b } else { a };
            chain.push(current);
        }
        let closed = chain.len() > 2 && chain.first() == chain.last();
        if closed {
            chain.pop();
        } else {
            // Open chain (region clipped by the grid border): the start
            // segment may sit mid-chain, so extend backward as well.
            let mut front = chain[0];
            let mut backward = Vec::new();
            loop {
                let next = adjacency[&front].iter().copied().find(|&k| !used[k]);
                let Some(k) = next else { break };
                used[k] = true;
                let (a, b) = segments[k];
                front = if a == front { b } else { a };
                backward.push(front);
            }
            backward.reverse();
            backward.extend(chain);
            chain = backward;
        }
        loops.push(TracedLoop {
            points: chain.iter().map(|e| crossings[e].0).collect(),
            residuals: chain.iter().map(|e| crossings[e].1).collect(),
            closed,
        });
    }
    loops.sort_by_key(|l| std::cmp::Reverse(l.points.len()));
    Ok(loops)
}

fn assemble(
    loops: Vec<TracedLoop>,
    problem: &CanonicalProblem,
    body: Option<ConvexBody>,
    resolution: usize,
) -> BoundaryPolyline {
    // The region is connected; keep the dominant loop.
    let dominant = loops.into_iter().next().unwrap_or(TracedLoop {
        points: Vec::new(),
        residuals: Vec::new(),
        closed: false,
    });
    let closed = dominant.closed;
    let (raw_vertices, raw_residuals) = (dominant.points, dominant.residuals);

    // Crossings snapped onto a minimizer from adjacent edges coincide; drop
    // consecutive duplicates.
    let mut vertices: Vec<[f64; 2]> = Vec::with_capacity(raw_vertices.len());
    let mut residuals: Vec<f64> = Vec::with_capacity(raw_residuals.len());
    for (v, res) in raw_vertices.into_iter().zip(raw_residuals) {
        if let Some(prev) = vertices.last() {
            if (prev[0] - v[0]).hypot(prev[1] - v[1]) < 1e-12 {
                continue;
            }
        }
        vertices.push(v);
        residuals.push(res);
    }
    if vertices.len() > 1 {
        let first = vertices[0];
        let last = vertices[vertices.len() - 1];
        if (first[0] - last[0]).hypot(first[1] - last[1]) < 1e-12 {
            vertices.pop();
            residuals.pop();
        }
    }

    // Counterclockwise orientation, deterministic start at the lexicographic
    // minimum vertex.
    let signed_area: f64 = vertices
        .iter()
        .zip(vertices.iter().cycle().skip(1))
        .map(|(a, b)| a[0] * b[1] - b[0] * a[1])
        .take(vertices.len())
        .sum();
    if signed_area < 0.0 {
        vertices.reverse();
        residuals.reverse();
    }
    if let Some(start) = (0..vertices.len()).min_by(|&a, &b| {
        vertices[a]
            .partial_cmp(&vertices[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    }) {
        vertices.rotate_left(start);
        residuals.rotate_left(start);
    }

    let residuals = residuals
        .into_iter()
        .map(|r| if r.is_nan() { None } else { Some(r) })
        .collect();
    BoundaryPolyline {
        vertices,
        residuals,
        closed,
        includes_minimizers: false,
        minimizers: [[-problem.r, 0.0], [problem.r, 0.0]],
        metadata: TraceMetadata {
            problem: *problem,
            body,
            resolution,
            surface_of_revolution: problem.ambient_dim > 2,
        },
    }
}

/// Insert a point into the polyline on its nearest segment; skips the
/// insertion when a vertex already coincides with it.
fn insert_minimizer(poly: &mut BoundaryPolyline, m: [f64; 2]) {
    if poly.vertices.is_empty() {
        return;
    }
    if poly
        .vertices
        .iter()
        .any(|v| (v[0] - m[0]).hypot(v[1] - m[1]) < 1e-12)
    {
        return;
    }
    let n = poly.vertices.len();
    let mut best = (f64::INFINITY, 0usize);
    for k in 0..n {
        let a = poly.vertices[k];
        let b = poly.vertices[(k + 1) % n];
        let d = point_segment_distance(m, a, b);
        if d < best.0 {
            best = (d, k);
        }
    }
    poly.vertices.insert(best.1 + 1, m);
    poly.residuals.insert(best.1 + 1, None);
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Distance from a point to a polyline (closed or open).
pub fn point_to_polyline_distance(vertices: &[[f64; 2]], closed: bool, p: [f64; 2]) -> f64 {
    if vertices.is_empty() {
        return f64::INFINITY;
    }
    if vertices.len() == 1 {
        return (p[0] - vertices[0][0]).hypot(p[1] - vertices[0][1]);
    }
    let n = vertices.len();
    let last = if closed { n } else { n - 1 };
    (0..last)
        .map(|k| point_segment_distance(p, vertices[k], vertices[(k + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for EmitFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            other => Err(Error::InvalidConfig(format!("unknown format '{other}'"))),
        }
    }
}

/// Write the polyline to a file in the requested format.
pub fn emit(poly: &BoundaryPolyline, format: EmitFormat, path: &Path) -> Result<()> {
    let contents = match format {
        EmitFormat::Csv => to_csv(poly),
        EmitFormat::Json => to_json_string(poly)?,
        EmitFormat::Svg => to_svg(poly),
    };
    std::fs::write(path, contents)?;
    Ok(())
}

/// CSV with header `z1,u,residual`, one vertex per row, 17 significant digits.
pub fn to_csv(poly: &BoundaryPolyline) -> String {
    let mut out = String::from("z1,u,residual\n");
    for (v, r) in poly.vertices.iter().zip(&poly.residuals) {
        let res = r.unwrap_or(f64::NAN);
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", v[0], v[1], res));
    }
    out
}

pub fn to_json_string(poly: &BoundaryPolyline) -> Result<String> {
    Ok(serde_json::to_string_pretty(poly)?)
}

/// SVG rendering: the boundary path (closed with `Z`), minimizer markers,
/// viewBox equal to the vertex bounding box padded by 10%.
pub fn to_svg(poly: &BoundaryPolyline) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in poly.vertices.iter().chain(poly.minimizers.iter()) {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    let w = (hi[0] - lo[0]).max(1e-9);
    let h = (hi[1] - lo[1]).max(1e-9);
    let pad = 0.1;
    let vb = (
        lo[0] - pad * w,
        -(hi[1] + pad * h),
        (1.0 + 2.0 * pad) * w,
        (1.0 + 2.0 * pad) * h,
    );
    let mut path = String::new();
    for (k, v) in poly.vertices.iter().enumerate() {
        let cmd = if k == 0 { 'M' } else { 'L' };
        path.push_str(&format!("{cmd} {:.6} {:.6} ", v[0], -v[1]));
    }
    if poly.closed {
        path.push('Z');
    }
    let marker_r = 0.015 * w.max(h);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
        vb.0, vb.1, vb.2, vb.3
    ));
    svg.push_str(&format!(
        "  <path d=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"{:.6}\"/>\n",
        path.trim_end(),
        0.004 * w.max(h)
    ));
    for m in &poly.minimizers {
        svg.push_str(&format!(
            "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"#c23b22\"/>\n",
            m[0], -m[1], marker_r
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig5() -> CanonicalProblem {
        CanonicalProblem::new(4.0, 1.0, 1.0, 10.0).unwrap()
    }

    #[test]
    fn trace_requires_theorem1() {
        let problem = CanonicalProblem::new(6.0, 1.0, 1.0, 10.0).unwrap();
        assert!(matches!(
            trace_p1(&problem, 64),
            Err(Error::Theorem1NotApplicable { .. })
        ));
    }

    #[test]
    fn trace_rejects_coarse_grid() {
        assert!(matches!(
            trace_p1(&fig5(), 3),
            Err(Error::ResolutionTooCoarse { .. })
        ));
    }

    #[test]
    fn trace_fig5_passes_through_minimizers() {
        let poly = trace_p1(&fig5(), 128).unwrap();
        assert!(poly.closed && poly.includes_minimizers);
        for m in [[-4.0, 0.0], [4.0, 0.0]] {
            assert!(poly
                .vertices
                .iter()
                .any(|v| (v[0] - m[0]).hypot(v[1] - m[1]) < 1e-12));
        }
        assert!(
            poly.max_residual() < 1e-8,
            "max residual {}",
            poly.max_residual()
        );
    }

    #[test]
    fn trace_vertex_spacing_bound() {
        let poly = trace_p1(&fig5(), 128).unwrap();
        let w: f64 = 12.0 * 1.08;
        let h: f64 = 20.0 * 1.08;
        let diag = w.hypot(h);
        let limit = 2.0 * diag / 128.0;
        let n = poly.vertices.len();
        for k in 0..n {
            let a = poly.vertices[k];
            let b = poly.vertices[(k + 1) % n];
            let d = (a[0] - b[0]).hypot(a[1] - b[1]);
            assert!(d <= limit, "spacing {d} exceeds {limit}");
        }
    }

    #[test]
    fn emit_csv_line_count() {
        let poly = BoundaryPolyline {
            vertices: vec![[0.0, 1.0], [1.0, 0.0], [0.0, -1.0]],
            residuals: vec![Some(1e-12), Some(2e-12), None],
            closed: true,
            includes_minimizers: false,
            minimizers: [[-1.0, 0.0], [1.0, 0.0]],
            metadata: TraceMetadata {
                problem: fig5(),
                body: None,
                resolution: 8,
                surface_of_revolution: false,
            },
        };
        let csv = to_csv(&poly);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("z1,u,residual\n"));
        let svg = to_svg(&poly);
        assert!(
            svg.contains("Z\""),
            "closed polyline path must end with a close command"
        );
    }

    #[test]
    fn emit_json_round_trip() {
        let poly = trace_p1(&fig5(), 64).unwrap();
        let json = to_json_string(&poly).unwrap();
        let back: BoundaryPolyline = serde_json::from_str(&json).unwrap();
        assert_eq!(poly.vertices, back.vertices);
        assert_eq!(poly.residuals, back.residuals);
        assert_eq!(poly.closed, back.closed);
    }

    #[test]
    fn traced_extent_matches_axis_bisection() {
        // Independent 1-D oracle for the transverse extent at z1 = 0.
        let problem = fig5();
        let f = |u: f64| tn_residual(&ReducedPoint::new(0.0, u), &problem, 10.0).unwrap();
        let (mut a, mut b) = (0.1, 9.0);
        assert!(f(a) < 0.0 && f(b) > 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            if f(mid) <= 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let u_star = 0.5 * (a + b);
        assert_relative_eq!(u_star, (24.0f64).sqrt(), epsilon = 1e-10);

        let poly = trace_p1(&problem, 512).unwrap();
        let traced_max = poly.vertices.iter().map(|v| v[1]).fold(0.0f64, f64::max);
        assert!(
            (traced_max - u_star).abs() < 1e-6,
            "traced max u {traced_max} vs bisection root {u_star}"
        );
    }
}
