//! Desk-scale experiments linking the sandpile engine to the tropical limit.

mod corner;
mod scaling;
mod soliton;

pub use corner::{corner_smoothing_run, corner_smoothing_run_with_budget, CornerReport, DEFAULT_ROUND_BUDGET};
pub use scaling::{defect_points, sample_grid, scale_step, scaling_run, snap, ScaleResult, ScalingRun};
pub use soliton::{linear_fit, measure_edge_speed, soliton_extract, Cell, EdgeSpeed, SolitonReport, SolitonWindow, WaveRun};

use crate::error::{domain, Result};

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(domain("Hausdorff distance of an empty set"));
    }
    Ok(directed(a, b).max(directed(b, a)))
}

fn directed(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut worst: f64 = 0.0;
    for &(x, y) in a {
        let mut best = f64::INFINITY;
        for &(u, v) in b {
            let d = (x - u) * (x - u) + (y - v) * (y - v);
            if d < best {
                best = d;
                if best <= worst {
                    break;
                }
            }
        }
        worst = worst.max(best);
    }
    libm::sqrt(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn hausdorff_examples() {
        let a = [(0.0, 0.0), (1.0, 2.0), (3.0, -1.0)];
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&[(0.0, 0.0)], &[(3.0, 4.0)]).unwrap(), 5.0);
        let seg: Vec<(f64, f64)> = (0..=100).map(|k| (k as f64 / 100.0, 0.0)).collect();
        let up: Vec<(f64, f64)> = seg.iter().map(|&(x, y)| (x, y + 0.25)).collect();
        assert!((hausdorff(&seg, &up).unwrap() - 0.25).abs() < 1e-12);
        assert!(hausdorff(&[], &a).is_err());
    }

    #[test]
    fn hausdorff_is_symmetric_max_of_directed() {
        let a = [(0.0, 0.0)];
        let b = [(0.0, 0.0), (10.0, 0.0)];
        assert_eq!(hausdorff(&a, &b).unwrap(), 10.0);
        assert_eq!(hausdorff(&b, &a).unwrap(), 10.0);
    }
}
