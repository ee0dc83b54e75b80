//! Min-plus polynomials F(x) = min_w (c_w + w·x) restricted to a polygon Δ.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{domain, Result};
use crate::geometry::{support_set, LatticePolygon, LatticeVector, Point, Rational};

mod curve;
pub mod domains;
mod dynamics;
pub mod hull;

pub use curve::{
    dual_subdivision, extract_curve, quasi_degree, symplectic_area, CurveEdge, NewtonSubdivision, QuasiDegree,
    TropicalCurve,
};
pub use dynamics::{apply_gmulti, apply_gmulti_with_budget, apply_gp, DEFAULT_STEP_BUDGET};

use domains::{pieces, vertex_values, Piece};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolynomial {
    coeffs: BTreeMap<LatticeVector, Rational>,
    domain: LatticePolygon,
}

impl TropicalPolynomial {
    pub fn new(coeffs: BTreeMap<LatticeVector, Rational>, domain: LatticePolygon) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain_err());
        }
        Ok(TropicalPolynomial { coeffs, domain })
    }

    pub fn from_terms(terms: &[((i64, i64), Rational)], domain: LatticePolygon) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for &((x, y), c) in terms {
            let e = coeffs.entry(LatticeVector::new(x, y)).or_insert(c);
            if c < *e {
                *e = c;
            }
        }
        TropicalPolynomial::new(coeffs, domain)
    }

    /// The constant polynomial 0.
    pub fn zero(domain: LatticePolygon) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(LatticeVector::new(0, 0), Rational::zero());
        TropicalPolynomial { coeffs, domain }
    }

    pub fn coefficients(&self) -> &BTreeMap<LatticeVector, Rational> {
        &self.coeffs
    }

    pub fn domain(&self) -> &LatticePolygon {
        &self.domain
    }

    pub fn coefficient(&self, w: LatticeVector) -> Option<Rational> {
        self.coeffs.get(&w).copied()
    }

    /// Exact value at a point of Δ.
    pub fn eval(&self, x: &Point) -> Result<Rational> {
        if !self.domain.contains(x) {
            return Err(domain("evaluation point outside the polygon"));
        }
        Ok(self.value(x))
    }

    /// Value anywhere in the plane.
    pub fn value(&self, x: &Point) -> Rational {
        self.coeffs.iter().map(|(w, c)| *c + w.apply(x)).min().expect("nonempty support")
    }

    /// Monomials attaining the minimum at x.
    pub fn argmin(&self, x: &Point) -> Vec<LatticeVector> {
        let v = self.value(x);
        self.coeffs.iter().filter(|(w, c)| **c + w.apply(x) == v).map(|(w, _)| *w).collect()
    }

    /// Newton polygon of the support, counter-clockwise.
    pub fn newton_polygon(&self) -> Vec<LatticeVector> {
        hull::convex_hull(self.coeffs.keys().copied())
    }

    pub(crate) fn pieces(&self) -> Vec<Piece> {
        pieces(&self.coeffs, self.domain.vertices())
    }

    /// Support filled out to every lattice point of the Newton polygon, each
    /// coefficient lowered to the least value that leaves F unchanged on Δ.
    pub fn canonicalize(&self) -> TropicalPolynomial {
        let ps = self.pieces();
        self.rebuild(&self.newton_polygon(), &ps)
    }

    /// Canonical form over the hull of the monomials that are active on an
    /// open subset of Δ. Two polynomials equal as functions on Δ share it.
    pub fn normal_form(&self) -> TropicalPolynomial {
        let ps = self.pieces();
        let hull = hull::convex_hull(ps.iter().map(|p| p.w));
        self.rebuild(&hull, &ps)
    }

    fn rebuild(&self, hull: &[LatticeVector], ps: &[Piece]) -> TropicalPolynomial {
        let verts = vertex_values(ps);
        let mut coeffs = BTreeMap::new();
        for u in hull::lattice_points(hull) {
            let c = verts.iter().map(|(v, f)| *f - u.apply(v)).max().expect("pieces cover Δ");
            coeffs.insert(u, c);
        }
        TropicalPolynomial { coeffs, domain: self.domain.clone() }
    }

    pub fn is_smooth_at(&self, p: &Point) -> bool {
        self.argmin(p).len() < 2
    }

    /// Monomials whose linearity domain has positive area in Δ.
    pub fn essential_monomials(&self) -> Vec<LatticeVector> {
        self.pieces().into_iter().map(|p| p.w).collect()
    }

    /// Exact ∫_Δ F.
    pub fn integral(&self) -> Rational {
        self.pieces().iter().map(domains::piece_integral).sum()
    }

    /// Whether F is identically zero along ∂Δ.
    pub fn vanishes_on_boundary(&self) -> bool {
        let ps = self.pieces();
        vertex_values(&ps).iter().all(|(v, f)| !self.domain.on_boundary(v) || f.is_zero())
    }

    /// Pointwise comparison F ≤ G on Δ, exact.
    pub fn le_on_domain(&self, other: &TropicalPolynomial) -> bool {
        // Both sides are affine on every cell of the common refinement, so
        // the vertices of that refinement decide.
        let theirs = other.pieces();
        self.pieces().iter().all(|pa| {
            theirs.iter().all(|pb| overlay(&pa.polygon, &pb.polygon).iter().all(|p| pa.value(p) <= pb.value(p)))
        })
    }
}

fn domain_err() -> crate::Error {
    domain("tropical polynomial needs a nonempty support")
}

/// Intersection of two convex polygons.
fn overlay(a: &[Point], b: &[Point]) -> Vec<Point> {
    let n = b.len();
    let mut poly = a.to_vec();
    for i in 0..n {
        if poly.is_empty() {
            break;
        }
        let (p, q) = (&b[i], &b[(i + 1) % n]);
        let Ok((_, dir)) = crate::geometry::rational_direction(&(q - p)) else { continue };
        let normal = dir.perp();
        poly = domains::clip(&poly, -normal.apply(p), normal);
    }
    poly
}

/// l_Δ as a tropical polynomial with support P(Δ).
pub fn weighted_distance_polynomial(poly: &LatticePolygon) -> TropicalPolynomial {
    let mut coeffs = BTreeMap::new();
    for w in support_set(poly) {
        coeffs.insert(w, -poly.min_dot(w));
    }
    TropicalPolynomial { coeffs, domain: poly.clone() }
}

/// l_Δ(x) = min over P(Δ) of (w·x − min_{q∈Δ} w·q).
pub fn weighted_distance(poly: &LatticePolygon, x: &Point) -> Result<Rational> {
    if !poly.contains(x) {
        return Err(domain("point outside the polygon"));
    }
    Ok(support_set(poly).into_iter().map(|w| w.apply(x) - poly.min_dot(w)).min().unwrap())
}
