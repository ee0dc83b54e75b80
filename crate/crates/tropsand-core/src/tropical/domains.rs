//! Linearity domains of a tropical polynomial on a convex region, computed by
//! exact half-plane clipping.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::geometry::{cross3, rat, signed_area, LatticeVector, Point, Rational};

/// Full-dimensional piece of the region where monomial `w` attains the minimum.
#[derive(Clone, Debug)]
pub struct Piece {
    pub w: LatticeVector,
    pub c: Rational,
    pub polygon: Vec<Point>,
}

impl Piece {
    pub fn value(&self, p: &Point) -> Rational {
        self.c + self.w.apply(p)
    }
}

/// Keeps the part of a convex polygon where alpha + beta·x ≥ 0.
pub fn clip(poly: &[Point], alpha: Rational, beta: LatticeVector) -> Vec<Point> {
    let vals: Vec<Rational> = poly.iter().map(|p| alpha + beta.apply(p)).collect();
    if vals.iter().all(|v| *v >= Rational::zero()) {
        return poly.to_vec();
    }
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (a, b) = (&poly[i], &poly[j]);
        let (va, vb) = (vals[i], vals[j]);
        if va >= Rational::zero() {
            out.push(a.clone());
        }
        if (va > Rational::zero() && vb < Rational::zero()) || (va < Rational::zero() && vb > Rational::zero()) {
            let t = va / (va - vb);
            out.push(Point::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t));
        }
    }
    tidy(out)
}

/// Drops repeated and collinear vertices; anything without area becomes empty.
pub fn tidy(mut v: Vec<Point>) -> Vec<Point> {
    v.dedup();
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    let mut i = 0;
    while v.len() >= 3 && i < v.len() {
        let n = v.len();
        if cross3(&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]).is_zero() {
            v.remove(i);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    if v.len() < 3 {
        v.clear();
    }
    v
}

/// All pieces with positive area, in exponent order.
pub fn pieces(coeffs: &BTreeMap<LatticeVector, Rational>, region: &[Point]) -> Vec<Piece> {
    let terms: Vec<(LatticeVector, Rational)> = coeffs.iter().map(|(w, c)| (*w, *c)).collect();
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..terms.len()).collect();
    for (i, &(a, ca)) in terms.iter().enumerate() {
        // Nearby exponents are the likeliest neighbors, so they cut first.
        order.sort_by_key(|&j| ((terms[j].0 - a).norm2(), j));
        let mut poly = region.to_vec();
        for &j in &order {
            if j == i {
                continue;
            }
            let (b, cb) = terms[j];
            poly = clip(&poly, cb - ca, b - a);
            if poly.is_empty() {
                break;
            }
        }
        if !poly.is_empty() && signed_area(&poly) > Rational::zero() {
            out.push(Piece { w: a, c: ca, polygon: poly });
        }
    }
    out
}

/// Distinct vertices of all pieces with the function value there.
pub fn vertex_values(pieces: &[Piece]) -> BTreeMap<Point, Rational> {
    let mut out = BTreeMap::new();
    for pc in pieces {
        for v in &pc.polygon {
            out.entry(v.clone()).or_insert_with(|| pc.value(v));
        }
    }
    out
}

pub fn essential(pieces: &[Piece]) -> BTreeSet<LatticeVector> {
    pieces.iter().map(|p| p.w).collect()
}

/// ∫ (c + w·x) over the piece polygon.
pub fn piece_integral(pc: &Piece) -> Rational {
    let v = &pc.polygon;
    let mut total = Rational::zero();
    for i in 1..v.len() - 1 {
        let a = cross3(&v[0], &v[i], &v[i + 1]) / rat(2);
        let cx = (v[0].x + v[i].x + v[i + 1].x) / rat(3);
        let cy = (v[0].y + v[i].y + v[i + 1].y) / rat(3);
        total += a * pc.value(&Point::new(cx, cy));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat2;

    fn square(k: i128) -> Vec<Point> {
        alloc::vec![Point::int(0, 0), Point::int(k, 0), Point::int(k, k), Point::int(0, k)]
    }

    #[test]
    fn clip_halves_square() {
        let half = clip(&square(2), rat(1), LatticeVector::new(-1, 0));
        assert_eq!(signed_area(&half), rat(2));
        let none = clip(&square(2), rat(-5), LatticeVector::new(1, 0));
        assert!(none.is_empty());
        let touch = clip(&square(2), rat(0), LatticeVector::new(-1, 0));
        assert!(touch.is_empty());
    }

    #[test]
    fn pieces_of_min_x_y() {
        let mut c = BTreeMap::new();
        c.insert(LatticeVector::new(1, 0), rat(0));
        c.insert(LatticeVector::new(0, 1), rat(0));
        c.insert(LatticeVector::new(1, 1), rat(5));
        let ps = pieces(&c, &square(2));
        assert_eq!(ps.len(), 2);
        let total: Rational = ps.iter().map(|p| signed_area(&p.polygon)).sum();
        assert_eq!(total, rat(4));
        // ∫ min(x,y) over [0,2]² = 8/3
        let integral: Rational = ps.iter().map(piece_integral).sum();
        assert_eq!(integral, rat2(8, 3));
    }
}
