//! Convex hulls and lattice-point enumeration for exponent sets.

use alloc::vec::Vec;

use crate::geometry::LatticeVector;

fn turn(o: LatticeVector, a: LatticeVector, b: LatticeVector) -> i128 {
    (a - o).det(b - o)
}

/// Counter-clockwise hull without collinear points (monotone chain).
/// Degenerate inputs return one or two points.
pub fn convex_hull(points: impl IntoIterator<Item = LatticeVector>) -> Vec<LatticeVector> {
    let mut pts: Vec<_> = points.into_iter().collect();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<LatticeVector> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticeVector> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Every lattice point of the hull returned by [`convex_hull`].
pub fn lattice_points(hull: &[LatticeVector]) -> Vec<LatticeVector> {
    match hull.len() {
        0 => Vec::new(),
        1 => hull.to_vec(),
        2 => {
            let d = hull[1] - hull[0];
            let g = d.gcd();
            let step = LatticeVector::new(d.x / g, d.y / g);
            (0..=g).map(|k| hull[0] + k * step).collect()
        }
        _ => {
            let x0 = hull.iter().map(|v| v.x).min().unwrap();
            let x1 = hull.iter().map(|v| v.x).max().unwrap();
            let y0 = hull.iter().map(|v| v.y).min().unwrap();
            let y1 = hull.iter().map(|v| v.y).max().unwrap();
            let mut out = Vec::new();
            for x in x0..=x1 {
                for y in y0..=y1 {
                    let p = LatticeVector::new(x, y);
                    if contains(hull, p) {
                        out.push(p);
                    }
                }
            }
            out
        }
    }
}

pub fn contains(hull: &[LatticeVector], p: LatticeVector) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == p,
        2 => {
            let (a, b) = (hull[0], hull[1]);
            turn(a, b, p) == 0 && (p - a).dot(b - a) >= 0 && (p - b).dot(a - b) >= 0
        }
        n => (0..n).all(|i| turn(hull[i], hull[(i + 1) % n], p) >= 0),
    }
}

/// Twice the area of a lattice polygon given counter-clockwise.
pub fn double_area(hull: &[LatticeVector]) -> i128 {
    let n = hull.len();
    if n < 3 {
        return 0;
    }
    (0..n).map(|i| hull[i].det(hull[(i + 1) % n])).sum()
}
