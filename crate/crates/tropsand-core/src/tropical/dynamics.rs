//! The operators G_p and G_{p1..pn}: shrink the face containing p until p
//! sits on the corner locus.

use alloc::vec::Vec;

use num_traits::Zero;

use super::TropicalPolynomial;
use crate::error::{contract, domain, Error, Result};
use crate::geometry::{rat, LatticeVector, Point, Rational};

pub const DEFAULT_STEP_BUDGET: u64 = 10_000;

/// Pointwise-minimal F' ≥ F vanishing on ∂Δ and non-smooth at p.
///
/// The result is in normal form: its support is every lattice point of the
/// hull of the essential monomials, so equal functions compare equal.
pub fn apply_gp(f: &TropicalPolynomial, p: &Point) -> Result<TropicalPolynomial> {
    let poly = f.domain();
    if !poly.contains_interior(p) {
        return Err(domain("G_p needs p in the interior of the polygon"));
    }
    let f = f.normal_form();
    let active = f.argmin(p);
    if active.len() >= 2 {
        return Ok(f);
    }
    let w = active[0];
    let face = f
        .pieces()
        .into_iter()
        .find(|pc| pc.w == w)
        .ok_or_else(|| contract("face of p has no interior"))?;
    let touched: Vec<usize> = poly
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| face.polygon.iter().filter(|v| e.level(v).is_zero()).count() >= 2)
        .map(|(i, _)| i)
        .collect();

    let mut g = f.clone();
    match touched.len() {
        0 => {}
        1 => {
            let e = &poly.edges()[touched[0]];
            let m = multiple_of(w, e.normal)?;
            let u = (m + 1) * e.normal;
            g = with_term(&g, u, rat((m + 1) as i128) * e.offset).canonicalize();
        }
        _ => {
            if !w.is_zero() {
                return Err(contract("face touching several edges must be the zero monomial"));
            }
            for e in poly.edges() {
                g = with_term(&g, e.normal, e.offset);
            }
            g = g.canonicalize();
        }
    }
    let cw = g.coefficient(w).expect("face monomial survives canonicalization");
    let here = cw + w.apply(p);
    let rival = g
        .coefficients()
        .iter()
        .filter(|(u, _)| **u != w)
        .map(|(u, c)| *c + u.apply(p))
        .min()
        .ok_or_else(|| contract("no competing monomial to shrink the face against"))?;
    let mut coeffs = g.coefficients().clone();
    coeffs.insert(w, cw + (rival - here));
    let out = TropicalPolynomial::new(coeffs, poly.clone())?.normal_form();
    debug_assert!(!out.is_smooth_at(p));
    Ok(out)
}

fn multiple_of(w: LatticeVector, n: LatticeVector) -> Result<i64> {
    if w.det(n) != 0 || w.dot(n) < 0 {
        return Err(contract("boundary face monomial is not a multiple of the edge normal"));
    }
    Ok((w.dot(n) / n.norm2()) as i64)
}

fn with_term(f: &TropicalPolynomial, u: LatticeVector, c: Rational) -> TropicalPolynomial {
    let mut coeffs = f.coefficients().clone();
    let e = coeffs.entry(u).or_insert(c);
    if c < *e {
        *e = c;
    }
    TropicalPolynomial::new(coeffs, f.domain().clone()).expect("nonempty")
}

/// Applies G_p at the first smooth point until none is left.
pub fn apply_gmulti(f: &TropicalPolynomial, points: &[Point]) -> Result<TropicalPolynomial> {
    apply_gmulti_with_budget(f, points, DEFAULT_STEP_BUDGET)
}

pub fn apply_gmulti_with_budget(f: &TropicalPolynomial, points: &[Point], budget: u64) -> Result<TropicalPolynomial> {
    for (i, p) in points.iter().enumerate() {
        if !f.domain().contains_interior(p) {
            return Err(domain("all points must lie in the interior of the polygon"));
        }
        if points[..i].contains(p) {
            return Err(domain("points must be distinct"));
        }
    }
    let mut g = f.normal_form();
    let mut steps = 0u64;
    while let Some(p) = points.iter().find(|p| g.is_smooth_at(p)) {
        if steps == budget {
            return Err(Error::Budget { limit: budget, what: "G_p step" });
        }
        g = apply_gp(&g, p)?;
        steps += 1;
    }
    Ok(g)
}
