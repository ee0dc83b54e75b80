//! One function per subcommand. Each reads its inputs, runs the core
//! operation and writes its files into `--out`.

use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};
use tropsand_core::experiments::{corner_smoothing_run_with_budget, measure_edge_speed, scaling_run, snap, soliton_extract, SolitonWindow, DEFAULT_ROUND_BUDGET};
use tropsand_core::geometry::rasterize;
use tropsand_core::sandpile::{Lattice, SandState, Schedule, DEFAULT_BUDGET};
use tropsand_core::tropical::{apply_gmulti_with_budget, extract_curve, quasi_degree, symplectic_area, TropicalPolynomial, DEFAULT_STEP_BUDGET};
use tropsand_core::{LatticePolygon, Point};

use crate::error::CliError;
use crate::formats::{self, cells_csv, curve_json, format_rational, parse_ints, parse_points, parse_polygon, pgm_rows, point_json, polygon_json, polynomial_json, rational_json, state_pgm, GRAY};
use crate::{Common, CompareArgs, CornerArgs, PolygonArgs, RelaxArgs, ScheduleArg, SolitonArgs, TropicalArgs, WaveSpeedArgs};

fn load(input: &PolygonArgs) -> Result<(LatticePolygon, Vec<Point>), CliError> {
    let text = fs::read_to_string(&input.polygon).map_err(|e| CliError::Io(format!("{}: {e}", input.polygon.display())))?;
    let poly = parse_polygon(&text)?;
    let points = parse_points(&input.points)?;
    if let Some(p) = points.iter().find(|p| !poly.contains_interior(p)) {
        return Err(CliError::Config(format!(
            "point ({}, {}) is not interior to the polygon",
            format_rational(&p.x),
            format_rational(&p.y)
        )));
    }
    Ok((poly, points))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_json(dir: &Path, name: &str, v: &Value) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    write(dir, name, &s)
}

/// Writes report.json, adding wall_ms under `--timing`, and echoes it.
fn finish(common: &Common, start: Instant, mut report: Value) -> Result<(), CliError> {
    if common.timing {
        report["wall_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    write_json(&common.out, "report.json", &report)?;
    println!("{}", serde_json::to_string(&report).map_err(|e| CliError::Internal(e.to_string()))?);
    Ok(())
}

fn direction(s: &str) -> Result<(i64, i64), CliError> {
    match parse_ints::<i64>(s, "direction")?.as_slice() {
        &[p, q] => Ok((p, q)),
        _ => Err(CliError::Config(format!("direction {s:?} must be two integers p,q"))),
    }
}

/// Non-finite distances become strings since JSON has no infinity.
fn distance_json(d: Option<f64>) -> Value {
    match d {
        None => Value::Null,
        Some(d) if d.is_finite() => json!(d),
        Some(_) => json!("inf"),
    }
}

pub fn relax(a: &RelaxArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let (poly, points) = load(&a.input)?;
    if a.scale == 0 {
        return Err(CliError::Config("scale must be positive".into()));
    }
    let schedule = match (a.schedule, a.seed) {
        (ScheduleArg::Fifo, _) => Schedule::Fifo,
        (ScheduleArg::Lifo, _) => Schedule::Lifo,
        (ScheduleArg::Generations, _) => Schedule::Generations,
        (ScheduleArg::Random, Some(s)) => Schedule::Random(s),
        (ScheduleArg::Random, None) => return Err(CliError::Config("the random schedule needs --seed".into())),
    };
    let region = rasterize(&poly, a.scale)?;
    let lattice = Arc::new(Lattice::from_region(&region));
    let mut state = SandState::max_stable(Arc::clone(&lattice));
    let grains: Vec<(i64, i64)> = points.iter().map(|p| snap(p, a.scale)).collect();
    state.add_grains(&grains)?;
    let odo = state.relax_with_budget(schedule, a.budget.unwrap_or(DEFAULT_BUDGET))?;

    let cells = |vals: &dyn Fn(usize) -> i64| (0..lattice.len()).map(|v| (lattice.coord(v), vals(v))).collect::<Vec<_>>();
    write(&a.common.out, "state.csv", &cells_csv("x,y,height", cells(&|v| state.height(v) as i64)))?;
    write(&a.common.out, "state.pgm", &state_pgm(&state))?;
    write(&a.common.out, "odometer.csv", &cells_csv("x,y,h", cells(&|v| odo.counts[v] as i64)))?;
    let defects = (0..lattice.len()).filter(|&v| state.height(v) < 3).count();
    finish(
        &a.common,
        start,
        json!({
            "command": "relax",
            "polygon": polygon_json(&poly),
            "points": points.iter().map(point_json).collect::<Vec<_>>(),
            "scale": a.scale,
            "grains": grains,
            "schedule": format!("{:?}", a.schedule).to_lowercase(),
            "cells": lattice.len(),
            "topplings": odo.total(),
            "lost": state.lost(),
            "defects": defects,
        }),
    )
}

pub fn tropical(a: &TropicalArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let (poly, points) = load(&a.input)?;
    if points.is_empty() {
        return Err(CliError::Config("at least one point is required".into()));
    }
    let f = apply_gmulti_with_budget(&TropicalPolynomial::zero(poly.clone()), &points, a.budget.unwrap_or(DEFAULT_STEP_BUDGET))?;
    let curve = extract_curve(&f);
    let area = symplectic_area(&curve, &poly);
    let q = quasi_degree(&f)?;
    write_json(&a.common.out, "polynomial.json", &polynomial_json(&f))?;
    write_json(&a.common.out, "curve.json", &curve_json(&curve))?;
    finish(
        &a.common,
        start,
        json!({
            "command": "tropical",
            "polygon": polygon_json(&poly),
            "points": points.iter().map(point_json).collect::<Vec<_>>(),
            "monomials": f.coefficients().len(),
            "curve_vertices": curve.vertices.len(),
            "curve_edges": curve.edges.len(),
            "max_weight": curve.edges.iter().map(|e| e.weight).max().unwrap_or(0),
            "balanced": curve.is_balanced(&poly),
            "symplectic_area": rational_json(&area),
            "quasi_degree": q.multipliers,
            "boundary_area": rational_json(&q.boundary_area(&poly)),
            "integral": rational_json(&f.integral()),
        }),
    )
}

pub fn compare(a: &CompareArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let scales = parse_ints::<u32>(&a.scales, "scales")?;
    if scales.len() < 2 {
        return Err(CliError::Config("compare needs at least two scales".into()));
    }
    let (poly, points) = load(&a.input)?;
    if a.strip.is_some_and(|w| !(w >= 0.0 && w.is_finite())) {
        return Err(CliError::Config("strip width must be a nonnegative number".into()));
    }
    let run = scaling_run(&poly, &points, &scales, a.strip)?;
    let decreasing = run.sup_error_decreasing();
    let results: Vec<Value> = run
        .results
        .iter()
        .map(|r| {
            json!({
                "scale": r.scale,
                "sup_error": r.sup_error,
                "hausdorff": distance_json(r.hausdorff),
                "topplings": r.topplings,
                "lost": r.lost,
            })
        })
        .collect();
    write_json(&a.common.out, "polynomial.json", &polynomial_json(&run.limit))?;
    write_json(&a.common.out, "curve.json", &curve_json(&run.curve))?;
    finish(
        &a.common,
        start,
        json!({
            "command": "compare",
            "polygon": polygon_json(&poly),
            "points": points.iter().map(point_json).collect::<Vec<_>>(),
            "strip": run.strip,
            "results": results,
            "sup_error_decreasing": decreasing,
        }),
    )?;
    if a.assert && !decreasing {
        return Err(CliError::Assertion("sup-error does not strictly decrease with the scale".into()));
    }
    Ok(())
}

pub fn soliton(a: &SolitonArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let (p, q) = direction(&a.direction)?;
    let window = SolitonWindow::for_waves(p, q, a.waves);
    let (r, run) = soliton_extract(p, q, window, a.waves)?;
    let cells = |cs: &[(i64, i64, u32)]| cs.iter().map(|&(s, t, h)| json!([s, t, h])).collect::<Vec<_>>();

    // levels 0 (next to the sink) at the bottom up to a margin above the front
    let top = (r.front + 2 * (p.abs() + q.abs()) + 8).min(run.source_level());
    let rows: Vec<Vec<u8>> = (0..top)
        .rev()
        .map(|s| (0..window.period).map(|t| GRAY[run.state.height(run.index(s, t)).min(3) as usize]).collect())
        .collect();
    write(&a.common.out, "soliton.pgm", &pgm_rows(window.period as usize, top as usize, &rows))?;
    finish(
        &a.common,
        start,
        json!({
            "command": "soliton",
            "direction": [p, q],
            "period": window.period,
            "depth": window.depth,
            "waves": r.waves,
            "boundary": cells(&r.boundary),
            "moving": cells(&r.moving),
            "front": r.front,
            "offset": r.offset,
            "linear_fraction": r.linear_fraction,
            "displacement_per_wave": r.displacement_per_wave,
        }),
    )
}

pub fn smooth_corner(a: &CornerArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let c: [i64; 6] = parse_ints::<i64>(&a.corner, "corner")?
        .try_into()
        .map_err(|_| CliError::Config("corner needs six integers p0,q0,p1,q1,p2,q2".into()))?;
    let r = corner_smoothing_run_with_budget(c, a.radius, a.budget.unwrap_or(DEFAULT_ROUND_BUDGET))?;
    write(&a.common.out, "corner.csv", &cells_csv("x,y,f", r.values.iter().copied()))?;
    finish(
        &a.common,
        start,
        json!({
            "command": "smooth-corner",
            "corner": c,
            "radius": r.radius,
            "rounds": r.rounds,
            "decrements": r.decrements,
            "defects": r.defects,
            "monotone_directions": r.monotone_directions,
        }),
    )?;
    if a.assert && r.defects.is_empty() {
        return Err(CliError::Assertion("smoothing left no defects".into()));
    }
    Ok(())
}

pub fn wave_speed(a: &WaveSpeedArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let (alpha, beta) = direction(&a.direction)?;
    let s = measure_edge_speed(alpha, beta, a.waves, None)?;
    let level = 1.0 / formats::hypot(alpha, beta);
    let deviation = (s.displacement - s.predicted).abs();
    finish(
        &a.common,
        start,
        json!({
            "command": "wave-speed",
            "direction": [alpha, beta],
            "waves": a.waves,
            "level_shift": rational_json(&s.level_shift),
            "displacement": s.displacement,
            "predicted": s.predicted,
            "deviation": deviation,
        }),
    )?;
    if a.assert && deviation > level {
        return Err(CliError::Assertion(format!("displacement {} is more than one level from {}", s.displacement, s.predicted)));
    }
    Ok(())
}
