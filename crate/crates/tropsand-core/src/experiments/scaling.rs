use alloc::sync::Arc;
use alloc::vec::Vec;

use super::hausdorff;
use crate::error::{domain, Result};
use crate::geometry::{rasterize, rat, to_f64, LatticePolygon, Point, Rational};
use crate::sandpile::{Lattice, Odometer, SandState, Schedule};
use crate::tropical::{apply_gmulti, extract_curve, TropicalCurve, TropicalPolynomial};

/// Samples per bounding-box side for the sup-error.
const GRID: i128 = 40;

#[derive(Clone, Debug)]
pub struct ScaleResult {
    pub scale: u32,
    pub sup_error: f64,
    /// None when neither the defect set nor the curve survives the strip.
    pub hausdorff: Option<f64>,
    pub topplings: u64,
    pub lost: u64,
}

#[derive(Clone, Debug)]
pub struct ScalingRun {
    pub polygon: LatticePolygon,
    pub points: Vec<Point>,
    pub strip: f64,
    pub limit: TropicalPolynomial,
    pub curve: TropicalCurve,
    pub results: Vec<ScaleResult>,
}

impl ScalingRun {
    pub fn sup_error_decreasing(&self) -> bool {
        self.results.windows(2).all(|w| w[1].sup_error < w[0].sup_error)
    }
}

/// Coordinate-wise floor of N·p.
pub fn snap(p: &Point, n: u32) -> (i64, i64) {
    let n = rat(n as i128);
    ((p.x * n).floor().to_integer() as i64, (p.y * n).floor().to_integer() as i64)
}

/// Rational sample points of Δ on a 40×40 grid over its bounding box.
pub fn sample_grid(poly: &LatticePolygon) -> Vec<Point> {
    let (lo, hi) = poly.bounds();
    let mut out = Vec::new();
    for i in 0..=GRID {
        for j in 0..=GRID {
            let p = Point::new(
                lo.x + (hi.x - lo.x) * Rational::new(i, GRID),
                lo.y + (hi.y - lo.y) * Rational::new(j, GRID),
            );
            if poly.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Cells below 3, rescaled by 1/N and kept only at distance ≥ strip from ∂Δ.
pub fn defect_points(state: &SandState, poly: &LatticePolygon, n: u32, strip: f64) -> Vec<(f64, f64)> {
    let l = state.lattice();
    let s = n as f64;
    (0..l.len())
        .filter(|&v| state.height(v) < 3)
        .map(|v| {
            let (x, y) = l.coord(v);
            (x as f64 / s, y as f64 / s)
        })
        .filter(|&(x, y)| poly.boundary_distance(x, y) >= strip)
        .collect()
}

fn curve_points(curve: &TropicalCurve, poly: &LatticePolygon, step: f64, strip: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for e in &curve.edges {
        let (ax, ay) = curve.vertices[e.a].to_f64();
        let (bx, by) = curve.vertices[e.b].to_f64();
        let len = libm::hypot(bx - ax, by - ay);
        let k = libm::ceil(len / step).max(1.0) as usize;
        for i in 0..=k {
            let t = i as f64 / k as f64;
            let (x, y) = (ax + t * (bx - ax), ay + t * (by - ay));
            if poly.boundary_distance(x, y) >= strip {
                out.push((x, y));
            }
        }
    }
    out
}

/// Relax max-stable plus one grain per point on Γ(N·Δ) and compare with the limit.
pub fn scale_step(
    poly: &LatticePolygon,
    points: &[Point],
    limit: &TropicalPolynomial,
    curve: &TropicalCurve,
    n: u32,
    strip: f64,
) -> Result<(ScaleResult, SandState, Odometer)> {
    let region = rasterize(poly, n)?;
    let lattice = Arc::new(Lattice::from_region(&region));
    let mut state = SandState::max_stable(Arc::clone(&lattice));
    let grains: Vec<(i64, i64)> = points.iter().map(|p| snap(p, n)).collect();
    state.add_grains(&grains)?;
    let odo = state.relax(Schedule::Fifo)?;

    let scale = rat(n as i128);
    let mut sup_error: f64 = 0.0;
    for x in sample_grid(poly) {
        let (i, j) = ((x.x * scale).floor().to_integer() as i64, (x.y * scale).floor().to_integer() as i64);
        let h = lattice.index(i, j).map_or(0, |v| odo.counts[v]);
        let approx = h as f64 / n as f64;
        sup_error = sup_error.max(libm::fabs(approx - to_f64(&limit.value(&x))));
    }

    let defects = defect_points(&state, poly, n, strip);
    let samples = curve_points(curve, poly, 0.5 / n as f64, strip);
    let hd = match (defects.is_empty(), samples.is_empty()) {
        (true, true) => None,
        (false, false) => Some(hausdorff(&defects, &samples)?),
        _ => Some(f64::INFINITY),
    };
    let result = ScaleResult { scale: n, sup_error, hausdorff: hd, topplings: odo.total(), lost: state.lost() };
    Ok((result, state, odo))
}

/// `strip` is the excluded boundary width; None means 0.05·diam(Δ).
pub fn scaling_run(poly: &LatticePolygon, points: &[Point], scales: &[u32], strip: Option<f64>) -> Result<ScalingRun> {
    if scales.iter().any(|&n| n < 8) {
        return Err(domain("scales must be at least 8"));
    }
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("scales must be strictly increasing"));
    }
    if let Some(p) = points.iter().find(|p| !poly.contains_interior(p)) {
        return Err(domain(alloc::format!("point {:?} is not interior", p.to_f64())));
    }
    let strip = strip.unwrap_or(0.05 * poly.diameter());
    let limit = apply_gmulti(&TropicalPolynomial::zero(poly.clone()), points)?;
    let curve = extract_curve(&limit);
    let mut results = Vec::with_capacity(scales.len());
    for &n in scales {
        results.push(scale_step(poly, points, &limit, &curve, n, strip)?.0);
    }
    Ok(ScalingRun { polygon: poly.clone(), points: points.to_vec(), strip, limit, curve, results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat2;

    fn unit_square() -> LatticePolygon {
        LatticePolygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn snap_floors() {
        let p = Point::new(rat2(2, 5), rat2(3, 5));
        assert_eq!(snap(&p, 100), (40, 60));
        assert_eq!(snap(&p, 7), (2, 4));
    }

    #[test]
    fn zero_points_zero_odometer() {
        let run = scaling_run(&unit_square(), &[], &[8, 16], None).unwrap();
        for r in &run.results {
            assert_eq!(r.topplings, 0);
            assert_eq!(r.sup_error, 0.0);
            assert_eq!(r.hausdorff, None);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let p = [Point::new(rat2(1, 2), rat2(1, 2))];
        assert!(scaling_run(&unit_square(), &p, &[16, 8], None).is_err());
        assert!(scaling_run(&unit_square(), &p, &[4, 8], None).is_err());
        assert!(scaling_run(&unit_square(), &[Point::int(1, 0)], &[8], None).is_err());
    }

    #[test]
    fn one_point_error_shrinks() {
        let p = [Point::new(rat2(1, 3), rat2(1, 4))];
        let run = scaling_run(&unit_square(), &p, &[12, 24, 48], None).unwrap();
        assert!(run.sup_error_decreasing(), "{:?}", run.results);
        assert!(run.results[2].hausdorff.unwrap() < 0.2);
    }
}
