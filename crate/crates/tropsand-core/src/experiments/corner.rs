use alloc::vec;
use alloc::vec::Vec;

use crate::error::{contract, domain, Error, Result};
use crate::geometry::Region;
use crate::sandpile::{smooth_linear_min_observed, Lattice};

pub const DEFAULT_ROUND_BUDGET: u64 = 100_000;

const DIRECTIONS: [(i64, i64); 8] = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerReport {
    pub radius: i64,
    /// Stabilization index: number of smoothing rounds.
    pub rounds: u64,
    pub decrements: u64,
    /// Cells strictly inside the window with a nonzero Laplacian at the end.
    pub defects: Vec<(i64, i64)>,
    /// Directions in which f_0 is nondecreasing. Every f_n was checked for
    /// them on pairs of cells off the fixed ring.
    pub monotone_directions: Vec<(i64, i64)>,
    /// Window coordinates and final values.
    pub values: Vec<((i64, i64), i64)>,
}

fn corner_window(r: i64) -> Result<(Lattice, Vec<bool>)> {
    if r < 1 {
        return Err(domain("window radius must be positive"));
    }
    let side = (2 * r + 3) as usize;
    let mut mask = vec![false; side * side];
    for y in 1..side - 1 {
        for x in 1..side - 1 {
            mask[y * side + x] = true;
        }
    }
    let region = Region::from_mask(-r - 1, -r - 1, side, side, mask)?;
    let l = Lattice::from_region(&region);
    let frozen = (0..l.len()).map(|v| l.touches_sink(v)).collect();
    Ok((l, frozen))
}

pub fn corner_smoothing_run(c: [i64; 6], radius: i64) -> Result<CornerReport> {
    corner_smoothing_run_with_budget(c, radius, DEFAULT_ROUND_BUDGET)
}

/// Smooths f_0 = min(0, p1x+q1y, p2x+q2y) + p0x+q0y on [−r, r]² with the
/// outer ring held fixed, checking every f_n on the way.
pub fn corner_smoothing_run_with_budget(c: [i64; 6], radius: i64, budget: u64) -> Result<CornerReport> {
    let [p0, q0, p1, q1, p2, q2] = c;
    if p1 * q2 - p2 * q1 != 1 {
        return Err(domain("corner must satisfy p1·q2 − p2·q1 = 1"));
    }
    let (l, frozen) = corner_window(radius)?;
    let f0: Vec<i64> = (0..l.len())
        .map(|v| {
            let (x, y) = l.coord(v);
            0.min(p1 * x + q1 * y).min(p2 * x + q2 * y) + p0 * x + q0 * y
        })
        .collect();
    let grads = [(p0, q0), (p0 + p1, q0 + q1), (p0 + p2, q0 + q2)];
    let monotone: Vec<(i64, i64)> =
        DIRECTIONS.iter().copied().filter(|&(ex, ey)| grads.iter().all(|&(gx, gy)| gx * ex + gy * ey >= 0)).collect();
    let shifted: Vec<Vec<(usize, usize)>> = monotone
        .iter()
        .map(|&(ex, ey)| {
            (0..l.len())
                .filter_map(|v| l.index(l.coord(v).0 + ex, l.coord(v).1 + ey).map(|w| (v, w)))
                .filter(|&(v, w)| !frozen[v] && !frozen[w])
                .collect()
        })
        .collect();

    let mut prev = f0.clone();
    let mut failure: Option<&'static str> = None;
    let out = smooth_linear_min_observed(&l, &f0, &frozen, budget, |n, f| {
        if failure.is_some() {
            return;
        }
        if n > 0 && f.iter().zip(&prev).any(|(a, b)| b - a < 0 || b - a > 1) {
            failure = Some("a smoothing step changed some value by other than 0 or −1");
        }
        if shifted.iter().any(|pairs| pairs.iter().any(|&(v, w)| f[w] < f[v])) {
            failure = Some("smoothing broke monotonicity of f_0");
        }
        prev.copy_from_slice(f);
    });
    let out = match out {
        Err(Error::Budget { limit, .. }) => {
            return Err(Error::NotStabilized(alloc::format!("corner {c:?} did not settle in {limit} rounds")))
        }
        other => other?,
    };
    if let Some(msg) = failure {
        return Err(contract(msg));
    }
    let lap = l.laplacian(&out.values);
    let mut defects = Vec::new();
    for v in 0..l.len() {
        if frozen[v] {
            continue;
        }
        if lap[v] > 0 {
            return Err(contract("smoothing output is not superharmonic"));
        }
        if lap[v] != 0 {
            defects.push(l.coord(v));
        }
    }
    let values = (0..l.len()).map(|v| (l.coord(v), out.values[v])).collect();
    Ok(CornerReport {
        radius,
        rounds: out.rounds,
        decrements: out.decrements,
        defects,
        monotone_directions: monotone,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_corner_is_a_tripod() {
        let r = corner_smoothing_run([0, 0, 1, 0, 0, 1], 8).unwrap();
        assert_eq!(r.rounds, 0);
        // defects lie on the three rays of min(0, x, y)
        for &(x, y) in &r.defects {
            let vals = [0, x, y];
            let m = *vals.iter().min().unwrap();
            assert!(vals.iter().filter(|&&a| a - m <= 1).count() >= 2, "({x},{y})");
        }
        assert!(r.defects.contains(&(0, 0)));
    }

    #[test]
    fn steep_corner_needs_rounds() {
        let r = corner_smoothing_run([0, 0, 3, 2, 1, 1], 12).unwrap();
        assert!(r.rounds > 0);
        assert!(r.monotone_directions.is_empty() || !r.defects.is_empty());
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(corner_smoothing_run([0, 0, 2, 0, 0, 1], 5).is_err());
    }
}
