//! Command implementations. Stdout carries machine-parseable JSON; human
//! diagnostics go to stderr. Exit codes: 0 ok/member, 1 non-member,
//! 2 input error, 3 theorem hypotheses not satisfied, 4 containment
//! violations found.

use std::path::PathBuf;

use minreg_core::geometry::reduce;
use minreg_core::oracle::{
    conservatism_report, verify_containment_p1, verify_containment_p2, OracleParams,
};
use minreg_core::region_p1::in_m_hat;
use minreg_core::region_p2::ConstrainedRegion;
use minreg_core::trace::{emit, trace_p1, trace_p2, BoundaryPolyline, EmitFormat};
use minreg_core::{CanonicalFrame, Error};
use nalgebra::DVector;
use serde_json::json;

use crate::config::{ProblemKind, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NON_MEMBER: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_VIOLATIONS: i32 = 4;

fn fail_input(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

fn parse_point(text: &str, dim: usize) -> Result<DVector<f64>, String> {
    let coords: Result<Vec<f64>, String> = text
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err("empty coordinate".to_string());
            }
            tok.parse::<f64>()
                .map_err(|e| format!("bad coordinate '{tok}': {e}"))
        })
        .collect();
    let coords = coords?;
    if coords.len() != dim {
        return Err(format!(
            "point has {} coordinates, config needs {dim}",
            coords.len()
        ));
    }
    if !coords.iter().all(|c| c.is_finite()) {
        return Err("coordinates must be finite".to_string());
    }
    Ok(DVector::from_vec(coords))
}

pub fn cmd_member(cfg: &RunConfig, point_text: &str) -> i32 {
    let pc = match cfg.problem_config() {
        Ok(p) => p,
        Err(e) => return fail_input(&e),
    };
    let x = match parse_point(point_text, pc.dim()) {
        Ok(x) => x,
        Err(e) => return fail_input(&e),
    };
    let (problem, frame) = match pc.canonicalize() {
        Ok(v) => v,
        Err(e) => return fail_input(&e.to_string()),
    };
    let problem = problem.with_eps(cfg.membership_eps());

    let (record, member) = match cfg.problem {
        ProblemKind::P1 => {
            let p = reduce(&x, &frame);
            let m = in_m_hat(&p, &problem);
            (
                json!({
                    "problem": "p1",
                    "point": x.iter().copied().collect::<Vec<f64>>(),
                    "reduced": { "z1": p.z1, "u": p.u },
                    "membership": m,
                }),
                m.in_m_hat,
            )
        }
        ProblemKind::P2 => {
            let body = cfg
                .body
                .as_ref()
                .expect("validated p2 config")
                .transformed(&frame);
            let region = match ConstrainedRegion::new(problem, body) {
                Ok(r) => r,
                Err(e) => return fail_input(&e.to_string()),
            };
            let y = frame.forward(&x);
            let m = region.membership(&y);
            (
                json!({
                    "problem": "p2",
                    "point": x.iter().copied().collect::<Vec<f64>>(),
                    "canonical_point": y.iter().copied().collect::<Vec<f64>>(),
                    "membership": m,
                }),
                m.in_n_hat,
            )
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&record).expect("serializable")
    );
    if member {
        EXIT_OK
    } else {
        EXIT_NON_MEMBER
    }
}

struct PlannedOutput {
    path: PathBuf,
    format: EmitFormat,
}

fn planned_outputs(
    cfg: &RunConfig,
    cli_formats: &[String],
    stem: &str,
) -> Result<Vec<PlannedOutput>, String> {
    if !cfg.outputs.is_empty() {
        return cfg
            .outputs
            .iter()
            .map(|o| {
                o.format
                    .parse::<EmitFormat>()
                    .map(|format| PlannedOutput {
                        path: o.path.clone(),
                        format,
                    })
                    .map_err(|e| e.to_string())
            })
            .collect();
    }
    let formats: Vec<String> = if cli_formats.is_empty() {
        vec!["csv".into(), "svg".into()]
    } else {
        cli_formats.to_vec()
    };
    formats
        .iter()
        .map(|f| {
            let format = f.parse::<EmitFormat>().map_err(|e| e.to_string())?;
            let ext = match format {
                EmitFormat::Csv => "csv",
                EmitFormat::Json => "json",
                EmitFormat::Svg => "svg",
            };
            Ok(PlannedOutput {
                path: PathBuf::from(format!("{stem}.{ext}")),
                format,
            })
        })
        .collect()
}

fn write_outputs(
    poly: &BoundaryPolyline,
    frame: &CanonicalFrame,
    outputs: &[PlannedOutput],
) -> Result<Vec<String>, String> {
    // CSV and JSON stay in canonical coordinates; SVG is rendered in the
    // original frame when the ambient dimension allows it.
    let original = if frame.dim() == 2 {
        Some(poly.mapped(|v| {
            let y = frame.inverse(&DVector::from_vec(vec![v[0], v[1]]));
            [y[0], y[1]]
        }))
    } else {
        None
    };
    let mut written = Vec::new();
    for out in outputs {
        let target = match (out.format, &original) {
            (EmitFormat::Svg, Some(orig)) => orig,
            _ => poly,
        };
        emit(target, out.format, &out.path).map_err(|e| e.to_string())?;
        written.push(out.path.display().to_string());
    }
    Ok(written)
}

pub fn cmd_trace(cfg: &RunConfig, resolution: Option<usize>, formats: &[String]) -> i32 {
    let pc = match cfg.problem_config() {
        Ok(p) => p,
        Err(e) => return fail_input(&e),
    };
    let (problem, frame) = match pc.canonicalize() {
        Ok(v) => v,
        Err(e) => return fail_input(&e.to_string()),
    };
    let problem = problem.with_eps(cfg.membership_eps());
    let resolution = resolution.unwrap_or(cfg.resolution);

    let (traced, stem) = match cfg.problem {
        ProblemKind::P1 => (trace_p1(&problem, resolution), "boundary_p1"),
        ProblemKind::P2 => {
            let body = cfg
                .body
                .as_ref()
                .expect("validated p2 config")
                .transformed(&frame);
            match ConstrainedRegion::new(problem, body) {
                Ok(region) => (trace_p2(&region, resolution), "boundary_p2"),
                Err(e) => return fail_input(&e.to_string()),
            }
        }
    };

    let poly = match traced {
        Ok(poly) => poly,
        Err(Error::Theorem1NotApplicable { r, limit }) => {
            eprintln!(
                "boundary characterization not applicable (r = {r} > {limit}); \
                 membership-only mode: use `minreg member` to query points"
            );
            let record = json!({ "applicable": false, "r": r, "limit": limit });
            println!(
                "{}",
                serde_json::to_string_pretty(&record).expect("serializable")
            );
            return EXIT_HYPOTHESIS;
        }
        Err(Error::Theorem2NotApplicable { report }) => {
            eprintln!(
                "constrained boundary hypotheses not verified; \
                 membership-only mode: use `minreg member` to query points"
            );
            let record = json!({ "applicable": false, "report": *report });
            println!(
                "{}",
                serde_json::to_string_pretty(&record).expect("serializable")
            );
            return EXIT_HYPOTHESIS;
        }
        Err(e) => return fail_input(&e.to_string()),
    };

    let outputs = match planned_outputs(cfg, formats, stem) {
        Ok(o) => o,
        Err(e) => return fail_input(&e),
    };
    let files = match write_outputs(&poly, &frame, &outputs) {
        Ok(f) => f,
        Err(e) => return fail_input(&e),
    };
    let summary = json!({
        "problem": match cfg.problem { ProblemKind::P1 => "p1", ProblemKind::P2 => "p2" },
        "applicable": true,
        "vertices": poly.vertices.len(),
        "max_residual": poly.max_residual(),
        "includes_minimizers": poly.includes_minimizers,
        "surface_of_revolution": poly.metadata.surface_of_revolution,
        "files": files,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("serializable")
    );
    EXIT_OK
}

pub fn cmd_verify(cfg: &RunConfig, samples: Option<usize>, seed: Option<u64>) -> i32 {
    let pc = match cfg.problem_config() {
        Ok(p) => p,
        Err(e) => return fail_input(&e),
    };
    let params = OracleParams {
        n_samples: samples.unwrap_or(cfg.samples),
        kappa: cfg.kappa,
        quartic_fraction: cfg.quartic_fraction,
        seed: seed.unwrap_or(cfg.seed),
        tolerance: cfg.verify_eps(),
    };
    let stats = match cfg.problem {
        ProblemKind::P1 => verify_containment_p1(&pc, &params),
        ProblemKind::P2 => verify_containment_p2(
            &pc,
            cfg.body.as_ref().expect("validated p2 config"),
            &params,
        ),
    };
    let stats = match stats {
        Ok(s) => s,
        Err(e) => return fail_input(&e.to_string()),
    };
    let rendered = serde_json::to_string_pretty(&stats).expect("serializable");
    println!("{rendered}");
    for out in &cfg.outputs {
        if out.format.eq_ignore_ascii_case("json") {
            if let Err(e) = std::fs::write(&out.path, format!("{rendered}\n")) {
                return fail_input(&format!("cannot write {}: {e}", out.path.display()));
            }
        }
    }
    if stats.violations.is_empty() {
        EXIT_OK
    } else {
        eprintln!(
            "{} containment violations out of {} valid samples; \
             this contradicts the necessary conditions and signals a bug",
            stats.violations.len(),
            stats.valid
        );
        EXIT_VIOLATIONS
    }
}

pub fn cmd_report(
    cfg: &RunConfig,
    samples: Option<usize>,
    seed: Option<u64>,
    resolution: Option<usize>,
) -> i32 {
    let pc = match cfg.problem_config() {
        Ok(p) => p,
        Err(e) => return fail_input(&e),
    };
    let report = conservatism_report(
        &pc,
        cfg.body.as_ref(),
        samples.unwrap_or(cfg.samples),
        resolution.unwrap_or(cfg.resolution),
        cfg.kappa,
        seed.unwrap_or(cfg.seed),
    );
    match report {
        Ok(r) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&r).expect("serializable")
            );
            EXIT_OK
        }
        Err(e) => fail_input(&e.to_string()),
    }
}
