//! Smoothing of piecewise-linear minima: lower a superharmonic function one
//! unit at a time wherever 3 + Δf would go negative.

use alloc::vec;
use alloc::vec::Vec;

use super::lattice::{Lattice, SINK};
use crate::error::{Error, Result};

/// Cells with Δf ≤ −4 are decremented. In the normalized Laplacian Δ/4 with
/// the opposite sign this is the "Laplacian ≥ 1" rule.
pub const OVERDRAWN: i64 = -4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothing {
    pub values: Vec<i64>,
    /// Number of sweeps that decremented something; the stabilization index.
    pub rounds: u64,
    pub decrements: u64,
}

fn lap_at(l: &Lattice, f: &[i64], v: usize) -> i64 {
    let s: i64 = l.neighbors(v).iter().filter(|&&w| w != SINK).map(|&w| f[w as usize]).sum();
    s - 4 * f[v]
}

/// Synchronous sweeps: every non-frozen cell with Δf ≤ −4 drops by one, then
/// the sweep repeats. `observe` sees f_0, f_1, ... in order. Sinks count as 0.
pub fn smooth_linear_min_observed(
    lattice: &Lattice,
    f0: &[i64],
    frozen: &[bool],
    max_rounds: u64,
    mut observe: impl FnMut(u64, &[i64]),
) -> Result<Smoothing> {
    let n = lattice.len();
    let mut f = f0.to_vec();
    let mut candidates: Vec<usize> = (0..n).filter(|&v| !frozen[v]).collect();
    let mut mark = vec![false; n];
    let mut rounds = 0;
    let mut decrements = 0;
    observe(0, &f);
    loop {
        let hit: Vec<usize> = candidates.iter().copied().filter(|&v| lap_at(lattice, &f, v) <= OVERDRAWN).collect();
        if hit.is_empty() {
            break;
        }
        if rounds == max_rounds {
            return Err(Error::Budget { limit: max_rounds, what: "smoothing round" });
        }
        rounds += 1;
        decrements += hit.len() as u64;
        candidates.clear();
        for &v in &hit {
            f[v] -= 1;
        }
        for &v in &hit {
            for w in core::iter::once(v as u32).chain(lattice.neighbors(v).iter().copied()) {
                if w != SINK && !frozen[w as usize] && !mark[w as usize] {
                    mark[w as usize] = true;
                    candidates.push(w as usize);
                }
            }
        }
        for &v in &candidates {
            mark[v] = false;
        }
        candidates.sort_unstable();
        observe(rounds, &f);
    }
    Ok(Smoothing { values: f, rounds, decrements })
}

pub fn smooth_linear_min(lattice: &Lattice, f0: &[i64], frozen: &[bool], max_rounds: u64) -> Result<Smoothing> {
    smooth_linear_min_observed(lattice, f0, frozen, max_rounds, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Region;

    fn window(r: i64) -> (Lattice, Vec<bool>) {
        let n = (2 * r + 1) as usize;
        let w = n + 2;
        let mut mask = vec![false; w * w];
        for y in 1..=n {
            for x in 1..=n {
                mask[y * w + x] = true;
            }
        }
        let region = Region::from_mask(-r - 1, -r - 1, w, w, mask).unwrap();
        let l = Lattice::from_region(&region);
        let frozen = (0..l.len()).map(|v| l.touches_sink(v)).collect();
        (l, frozen)
    }

    #[test]
    fn affine_is_fixed() {
        let (l, frozen) = window(6);
        let f0: Vec<i64> = (0..l.len()).map(|v| 3 * l.coord(v).0 - 2 * l.coord(v).1 + 5).collect();
        let s = smooth_linear_min(&l, &f0, &frozen, 10).unwrap();
        assert_eq!(s.values, f0);
        assert_eq!(s.rounds, 0);
    }

    // Fixpoint oracle: sequential single-cell decrements in scan order until no
    // cell is overdrawn. The result must match the synchronous sweeps.
    fn sequential(l: &Lattice, f0: &[i64], frozen: &[bool]) -> Vec<i64> {
        let mut f = f0.to_vec();
        while let Some(v) = (0..l.len()).find(|&v| !frozen[v] && lap_at(l, &f, v) <= OVERDRAWN) {
            f[v] -= 1;
        }
        f
    }

    #[test]
    fn steep_corner_matches_sequential_fixpoint() {
        let (l, frozen) = window(10);
        let f0: Vec<i64> = (0..l.len())
            .map(|v| {
                let (x, y) = l.coord(v);
                0.min(3 * x + y).min(2 * x + y)
            })
            .collect();
        let s = smooth_linear_min(&l, &f0, &frozen, 10_000).unwrap();
        assert!(s.rounds > 0);
        assert_eq!(s.values, sequential(&l, &f0, &frozen));
        let lap = l.laplacian(&s.values);
        for v in 0..l.len() {
            if !frozen[v] {
                assert!((-3..=0).contains(&lap[v]));
            }
        }
    }

    #[test]
    fn trivial_corner_is_already_stable() {
        let (l, frozen) = window(5);
        let f0: Vec<i64> = (0..l.len()).map(|v| 0.min(l.coord(v).0).min(l.coord(v).1)).collect();
        assert_eq!(smooth_linear_min(&l, &f0, &frozen, 5).unwrap().rounds, 0);
    }
}
