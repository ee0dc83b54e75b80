//! Corner loci as weighted graphs, their dual subdivisions, quasi-degree and
//! tropical symplectic area.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::domains::{pieces, Piece};
use super::hull;
use super::TropicalPolynomial;
use crate::error::{contract, Result};
use crate::geometry::{rat, rational_direction, LatticePolygon, LatticeVector, Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEdge {
    pub a: usize,
    pub b: usize,
    /// Primitive direction from vertex `a` towards vertex `b`.
    pub primitive: LatticeVector,
    pub weight: u64,
    /// The two monomials whose domains meet along the edge.
    pub monomials: (LatticeVector, LatticeVector),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TropicalCurve {
    pub vertices: Vec<Point>,
    pub edges: Vec<CurveEdge>,
    /// Full-dimensional faces as (monomial, coefficient).
    pub faces: Vec<(LatticeVector, Rational)>,
}

impl TropicalCurve {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Σ weight·primitive over edges leaving vertex `v`.
    pub fn balance_at(&self, v: usize) -> LatticeVector {
        let mut s = LatticeVector::new(0, 0);
        for e in &self.edges {
            let w = e.weight as i64;
            if e.a == v {
                s = s + w * e.primitive;
            }
            if e.b == v {
                s = s - w * e.primitive;
            }
        }
        s
    }

    /// Whether balancing holds at every vertex strictly inside `poly`.
    pub fn is_balanced(&self, poly: &LatticePolygon) -> bool {
        (0..self.vertices.len()).all(|v| !poly.contains_interior(&self.vertices[v]) || self.balance_at(v).is_zero())
    }
}

fn segment_key(p: &Point, q: &Point) -> (Point, Point) {
    if p <= q {
        (p.clone(), q.clone())
    } else {
        (q.clone(), p.clone())
    }
}

fn curve_from_pieces(ps: &[Piece], on_outer: impl Fn(&Point) -> bool) -> TropicalCurve {
    let mut segs: BTreeMap<(LatticeVector, LatticeVector), (Point, Point)> = BTreeMap::new();
    for pa in ps {
        let n = pa.polygon.len();
        for i in 0..n {
            let (p, q) = (&pa.polygon[i], &pa.polygon[(i + 1) % n]);
            let m = p.midpoint(q);
            if on_outer(&m) {
                continue;
            }
            let fm = pa.value(&m);
            let other = ps.iter().find(|pb| pb.w != pa.w && pb.value(&m) == fm);
            if let Some(pb) = other {
                let key = if pa.w < pb.w { (pa.w, pb.w) } else { (pb.w, pa.w) };
                segs.entry(key).or_insert_with(|| segment_key(p, q));
            }
        }
    }
    let mut index: BTreeMap<Point, usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut id = |p: &Point, vertices: &mut Vec<Point>| {
        *index.entry(p.clone()).or_insert_with(|| {
            vertices.push(p.clone());
            vertices.len() - 1
        })
    };
    let mut edges = Vec::new();
    for ((wa, wb), (p, q)) in segs {
        let a = id(&p, &mut vertices);
        let b = id(&q, &mut vertices);
        let (_, primitive) = rational_direction(&(&q - &p)).expect("segments have positive length");
        let weight = (wa - wb).gcd() as u64;
        edges.push(CurveEdge { a, b, primitive, weight, monomials: (wa, wb) });
    }
    let faces = ps.iter().map(|p| (p.w, p.c)).collect();
    TropicalCurve { vertices, edges, faces }
}

/// Corner locus of F inside Δ. Edges lying on ∂Δ are not part of it.
pub fn extract_curve(f: &TropicalPolynomial) -> TropicalCurve {
    let ps = f.pieces();
    curve_from_pieces(&ps, |m| f.domain().on_boundary(m))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSubdivision {
    /// Newton polygon, counter-clockwise.
    pub polygon: Vec<LatticeVector>,
    /// Cells as counter-clockwise vertex lists. Segments when the polygon is flat.
    pub cells: Vec<Vec<LatticeVector>>,
}

impl NewtonSubdivision {
    pub fn vertices(&self) -> BTreeSet<LatticeVector> {
        self.cells.iter().flatten().copied().collect()
    }
}

/// Subdivision of the Newton polygon induced by the lower hull of the lifted
/// coefficients, read off from the full-plane corner locus.
pub fn dual_subdivision(f: &TropicalPolynomial) -> NewtonSubdivision {
    let coeffs = f.coefficients();
    let polygon = hull::convex_hull(coeffs.keys().copied());
    if polygon.len() < 3 {
        let mut pts: Vec<LatticeVector> = plane_pieces(coeffs).iter().map(|p| p.w).collect();
        pts.sort();
        let cells = if pts.len() < 2 { alloc::vec![pts] } else { pts.windows(2).map(|w| w.to_vec()).collect() };
        return NewtonSubdivision { polygon, cells };
    }
    let (ps, bound) = plane_pieces_with_bound(coeffs);
    let inside = |p: &Point| p.x.abs() < bound && p.y.abs() < bound;
    let mut cells = BTreeSet::new();
    for pc in &ps {
        for v in pc.polygon.iter().filter(|v| inside(v)) {
            let fv = pc.value(v);
            let tied = coeffs.iter().filter(|(w, c)| **c + w.apply(v) == fv).map(|(w, _)| *w);
            let cell = hull::convex_hull(tied);
            if cell.len() >= 3 {
                cells.insert(cell);
            }
        }
    }
    NewtonSubdivision { polygon, cells: cells.into_iter().collect() }
}

fn plane_pieces(coeffs: &BTreeMap<LatticeVector, Rational>) -> Vec<Piece> {
    plane_pieces_with_bound(coeffs).0
}

/// Pieces clipped to a box large enough to hold every vertex of the curve.
fn plane_pieces_with_bound(coeffs: &BTreeMap<LatticeVector, Rational>) -> (Vec<Piece>, Rational) {
    let wmax = coeffs.keys().map(|w| w.x.abs().max(w.y.abs())).max().unwrap_or(0) as i128;
    let cmax = coeffs.values().map(|c| c.abs().ceil().to_integer()).max().unwrap_or(0);
    let bound = rat(8 * (wmax + 1) * (cmax + 1) + 1);
    let bx = alloc::vec![
        Point::new(-bound - 1, -bound - 1),
        Point::new(bound + 1, -bound - 1),
        Point::new(bound + 1, bound + 1),
        Point::new(-bound - 1, bound + 1),
    ];
    (pieces(coeffs, &bx), bound)
}

/// Quasi-degree: m(e) with m(e)·n(e) the monomial active next to edge e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiDegree {
    /// One entry per edge of Δ, in edge order.
    pub multipliers: Vec<u64>,
}

impl QuasiDegree {
    /// Σ_e m(e)·Area(e).
    pub fn boundary_area(&self, poly: &LatticePolygon) -> Rational {
        poly.edges().iter().zip(&self.multipliers).map(|(e, m)| e.symplectic_area() * rat(*m as i128)).sum()
    }
}

pub fn quasi_degree(f: &TropicalPolynomial) -> Result<QuasiDegree> {
    if !f.vanishes_on_boundary() {
        return Err(contract("quasi-degree needs F to vanish on the boundary"));
    }
    let mut multipliers = Vec::new();
    for e in f.domain().edges() {
        let mid = e.start.midpoint(&e.end);
        let w = f
            .argmin(&mid)
            .into_iter()
            .min_by_key(|w| w.dot(e.normal))
            .expect("nonempty argmin");
        if w.det(e.normal) != 0 || w.dot(e.normal) < 0 {
            return Err(contract("active monomial near an edge is not a multiple of its normal"));
        }
        multipliers.push((w.dot(e.normal) / e.normal.norm2()) as u64);
    }
    Ok(QuasiDegree { multipliers })
}

/// Σ over edges, clipped to `clip`, of length × primitive length × weight.
/// Exact: an edge d = t·v contributes t·|v|²·weight.
pub fn symplectic_area(c: &TropicalCurve, clip: &LatticePolygon) -> Rational {
    let mut total = Rational::zero();
    for e in &c.edges {
        let (p, q) = (&c.vertices[e.a], &c.vertices[e.b]);
        let (t, v) = rational_direction(&(q - p)).expect("positive length");
        let (mut lo, mut hi) = (Rational::zero(), rat(1));
        for ed in clip.edges() {
            let (l0, l1) = (ed.level(p), ed.level(q));
            let slope = l1 - l0;
            if slope.is_zero() {
                if l0 < Rational::zero() {
                    hi = lo - rat(1);
                }
            } else if slope > Rational::zero() {
                lo = lo.max(-l0 / slope);
            } else {
                hi = hi.min(-l0 / slope);
            }
        }
        if hi > lo {
            total += (hi - lo) * t * rat(v.norm2()) * rat(e.weight as i128);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat2;

    fn square(lo: i64, hi: i64) -> LatticePolygon {
        LatticePolygon::from_ints(&[(lo, lo), (hi, lo), (hi, hi), (lo, hi)]).unwrap()
    }

    #[test]
    fn tropical_line() {
        let f = TropicalPolynomial::from_terms(&[((0, 0), rat(0)), ((1, 0), rat(0)), ((0, 1), rat(0))], square(-1, 2))
            .unwrap();
        let c = extract_curve(&f);
        assert_eq!(c.edges.len(), 3);
        let o = c.vertices.iter().position(|v| *v == Point::int(0, 0)).unwrap();
        let mut dirs: Vec<_> = c
            .edges
            .iter()
            .map(|e| if e.a == o { e.primitive } else { LatticeVector::new(-e.primitive.x, -e.primitive.y) })
            .collect();
        dirs.sort();
        // min convention: the rays leave the origin along (1,0), (0,1) and (-1,-1)
        assert_eq!(dirs, alloc::vec![LatticeVector::new(-1, -1), LatticeVector::new(0, 1), LatticeVector::new(1, 0)]);
        assert!(c.edges.iter().all(|e| e.weight == 1));
        assert!(c.balance_at(o).is_zero());
    }

    #[test]
    fn double_line() {
        let f = TropicalPolynomial::from_terms(&[((0, 0), rat(0)), ((2, 0), rat(0))], square(-1, 1)).unwrap();
        let c = extract_curve(&f.canonicalize());
        assert_eq!(c.edges.len(), 1);
        assert_eq!(c.edges[0].weight, 2);
        assert_eq!(c.vertices[c.edges[0].a].x, rat(0));
        assert_eq!(c.vertices[c.edges[0].b].x, rat(0));
    }

    #[test]
    fn segment_area() {
        let c = TropicalCurve {
            vertices: alloc::vec![Point::int(0, 0), Point::int(3, 6)],
            edges: alloc::vec![CurveEdge {
                a: 0,
                b: 1,
                primitive: LatticeVector::new(1, 2),
                weight: 1,
                monomials: (LatticeVector::new(0, 0), LatticeVector::new(2, -1)),
            }],
            faces: Vec::new(),
        };
        assert_eq!(symplectic_area(&c, &square(-10, 10)), rat(15));
        assert_eq!(symplectic_area(&c, &square(0, 3)), rat2(15, 2));
        assert_eq!(symplectic_area(&TropicalCurve::default(), &square(0, 1)), rat(0));
    }

    #[test]
    fn subdivision_examples() {
        let tri =
            TropicalPolynomial::from_terms(&[((0, 0), rat(0)), ((1, 0), rat(0)), ((0, 1), rat(0))], square(0, 1)).unwrap();
        let s = dual_subdivision(&tri);
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.cells[0].len(), 3);

        let sq = TropicalPolynomial::from_terms(
            &[((0, 0), rat(0)), ((1, 0), rat(0)), ((0, 1), rat(0)), ((1, 1), rat(1))],
            square(0, 1),
        )
        .unwrap();
        let s = dual_subdivision(&sq);
        assert_eq!(s.cells.len(), 2);
        let diag: BTreeSet<_> = [LatticeVector::new(1, 0), LatticeVector::new(0, 1)].into_iter().collect();
        for cell in &s.cells {
            assert_eq!(cell.len(), 3);
            assert!(diag.iter().all(|d| cell.contains(d)));
        }
    }

    #[test]
    fn subdivision_of_flat_support() {
        let f = TropicalPolynomial::from_terms(&[((0, 0), rat(0)), ((1, 0), rat(5)), ((2, 0), rat(0))], square(0, 1))
            .unwrap();
        let s = dual_subdivision(&f);
        assert_eq!(s.cells, alloc::vec![alloc::vec![LatticeVector::new(0, 0), LatticeVector::new(2, 0)]]);
    }
}
