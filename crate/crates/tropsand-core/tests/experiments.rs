use proptest::prelude::*;
use tropsand_core::experiments::{corner_smoothing_run, hausdorff, soliton_extract, SolitonWindow};
use tropsand_core::sandpile::{smooth_linear_min, Lattice};

// Smoothing min(s + k, n) on the lower half of the cylinder reproduces the
// wave odometer h^(n) away from a set whose size does not grow with n.
#[test]
fn smoothing_matches_wave_odometer() {
    for (p, q) in [(1, 1), (1, 2), (2, 3)] {
        let mut sizes = Vec::new();
        for extra in [20u64, 60] {
            let window = SolitonWindow::for_waves(p, q, 300);
            let (report, mut run) = soliton_extract(p, q, window, 200).unwrap();
            for _ in 0..extra {
                run.send_wave().unwrap();
            }
            let n = run.waves as i64;
            let top = run.source_level() - 1;
            let half = Lattice::cylinder(p, q, window.period, top).unwrap();
            let f0: Vec<i64> = (0..half.len()).map(|v| (run.level_phase(v).0 + report.offset).min(n)).collect();
            let frozen: Vec<bool> = (0..half.len()).map(|v| half.touches_sink(v) && run.level_phase(v).0 > top / 2).collect();
            let out = smooth_linear_min(&half, &f0, &frozen, 100_000).unwrap();
            let mismatch = (0..half.len()).filter(|&v| out.values[v] != run.odometer[v] as i64).count();
            sizes.push(mismatch);
        }
        assert!(sizes[0] == sizes[1] && sizes[0] < 200, "({p},{q}) {sizes:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hausdorff_is_a_metric_on_samples(
        a in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..20),
        b in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..20),
        c in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..20),
    ) {
        let ab = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        prop_assert!(ab <= hausdorff(&a, &c).unwrap() + hausdorff(&c, &b).unwrap() + 1e-12);
    }

    #[test]
    fn corner_smoothing_settles(k in -3i64..4, m in 0i64..3, p0 in -2i64..3, q0 in -2i64..3, swap in any::<bool>()) {
        // (1+mk, m) and (k, 1) have determinant 1 for every k, m
        let (p1, q1, p2, q2) = (1 + m * k, m, k, 1);
        let c = if swap { [p0, q0, -p2, -q2, p1, q1] } else { [p0, q0, p1, q1, p2, q2] };
        prop_assume!(c[2] * c[5] - c[4] * c[3] == 1);
        let r = corner_smoothing_run(c, 12).unwrap();
        prop_assert!(r.defects.iter().all(|&(x, y)| x.abs() <= 12 && y.abs() <= 12));
    }
}
