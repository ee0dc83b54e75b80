//! Lattice vectors, rational convex polygons, fans and rasterization.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{domain, Result};

pub type Rational = num_rational::Ratio<i128>;

pub fn rat(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn rat2(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticeVector { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn gcd(self) -> i64 {
        self.x.gcd(&self.y)
    }

    pub fn det(self, o: LatticeVector) -> i128 {
        self.x as i128 * o.y as i128 - self.y as i128 * o.x as i128
    }

    pub fn dot(self, o: LatticeVector) -> i128 {
        self.x as i128 * o.x as i128 + self.y as i128 * o.y as i128
    }

    pub fn norm2(self) -> i128 {
        self.dot(self)
    }

    /// w·x for a rational point x.
    pub fn apply(self, p: &Point) -> Rational {
        p.x * rat(self.x as i128) + p.y * rat(self.y as i128)
    }

    /// Rotation by a quarter turn counter-clockwise.
    pub fn perp(self) -> LatticeVector {
        LatticeVector::new(-self.y, self.x)
    }

    pub fn to_point(self) -> Point {
        Point::new(rat(self.x as i128), rat(self.y as i128))
    }

    pub fn is_primitive(self) -> bool {
        self.gcd() == 1
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, v: LatticeVector) -> LatticeVector {
        LatticeVector::new(self * v.x, self * v.y)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Shortest integer vector in the direction of `v`.
pub fn primitive_vector(v: LatticeVector) -> Result<LatticeVector> {
    if v.is_zero() {
        return Err(domain("primitive vector of the zero vector"));
    }
    let g = v.gcd();
    Ok(LatticeVector::new(v.x / g, v.y / g))
}

/// Whether two primitive vectors span a unimodular cone.
pub fn is_smooth_corner(w1: LatticeVector, w2: LatticeVector) -> Result<bool> {
    let d = w1.det(w2);
    if d == 0 {
        return Err(domain("parallel vectors do not form a corner"));
    }
    Ok(d.abs() == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn int(x: i128, y: i128) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn cross(&self, o: &Point) -> Rational {
        self.x * o.y - self.y * o.x
    }

    pub fn scale(&self, k: Rational) -> Point {
        Point::new(self.x * k, self.y * k)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        let h = rat2(1, 2);
        Point::new((self.x + o.x) * h, (self.y + o.y) * h)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Splits a nonzero rational vector into `t * v` with `v` primitive and `t > 0`.
pub fn rational_direction(d: &Point) -> Result<(Rational, LatticeVector)> {
    if d.x.is_zero() && d.y.is_zero() {
        return Err(domain("zero direction"));
    }
    let l = d.x.denom().lcm(d.y.denom());
    let ix = (d.x * rat(l)).to_integer();
    let iy = (d.y * rat(l)).to_integer();
    let g = ix.gcd(&iy);
    let (px, py) = (ix / g, iy / g);
    let v = LatticeVector::new(
        i64::try_from(px).map_err(|_| domain("direction overflows i64"))?,
        i64::try_from(py).map_err(|_| domain("direction overflows i64"))?,
    );
    Ok((Rational::new(g, l), v))
}

pub(crate) fn cross3(o: &Point, a: &Point, b: &Point) -> Rational {
    (a - o).cross(&(b - o))
}

/// Orders nonzero vectors by angle in [0, 2π) starting from the positive x axis.
pub fn angle_cmp(a: LatticeVector, b: LatticeVector) -> Ordering {
    let half = |v: LatticeVector| if v.y > 0 || (v.y == 0 && v.x > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&a.det(b)))
}

/// Nonzero primitive lattice vectors in the closed triangle 0, a, b.
pub fn primitive_vectors_in_triangle(a: LatticeVector, b: LatticeVector) -> Vec<LatticeVector> {
    let (a, b) = if a.det(b) < 0 { (b, a) } else { (a, b) };
    let d = a.det(b);
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    let (x0, x1) = (0.min(a.x).min(b.x), 0.max(a.x).max(b.x));
    let (y0, y1) = (0.min(a.y).min(b.y), 0.max(a.y).max(b.y));
    for x in x0..=x1 {
        for y in y0..=y1 {
            let z = LatticeVector::new(x, y);
            if z.is_zero() || !z.is_primitive() {
                continue;
            }
            let s = z.det(b);
            let t = a.det(z);
            if s >= 0 && t >= 0 && s + t <= d {
                out.push(z);
            }
        }
    }
    out
}

/// A complete fan given by its primitive rays, kept in angular order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<LatticeVector>,
}

impl Fan {
    pub fn new(rays: impl IntoIterator<Item = LatticeVector>) -> Result<Fan> {
        let mut set = BTreeSet::new();
        for r in rays {
            set.insert(primitive_vector(r)?);
        }
        let mut rays: Vec<_> = set.into_iter().collect();
        rays.sort_by(|a, b| angle_cmp(*a, *b));
        if rays.len() < 3 {
            return Err(domain("a complete fan needs at least three rays"));
        }
        for i in 0..rays.len() {
            let (a, b) = (rays[i], rays[(i + 1) % rays.len()]);
            if a.det(b) <= 0 {
                return Err(domain("consecutive rays must span an angle below π"));
            }
        }
        Ok(Fan { rays })
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn cones(&self) -> impl Iterator<Item = (LatticeVector, LatticeVector)> + '_ {
        let n = self.rays.len();
        (0..n).map(move |i| (self.rays[i], self.rays[(i + 1) % n]))
    }

    pub fn is_smooth(&self) -> bool {
        self.cones().all(|(a, b)| a.det(b) == 1)
    }
}

/// Adds every primitive vector of the triangles spanned by 0 and consecutive rays.
pub fn smooth_refinement(fan: &Fan) -> Fan {
    let mut all: BTreeSet<LatticeVector> = fan.rays.iter().copied().collect();
    for (a, b) in fan.cones() {
        all.extend(primitive_vectors_in_triangle(a, b));
    }
    Fan::new(all).expect("refining a valid fan keeps it valid")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub start: Point,
    pub end: Point,
    /// Primitive direction from `start` to `end`.
    pub direction: LatticeVector,
    /// Primitive inward normal n(e).
    pub normal: LatticeVector,
    /// a_e, so that n(e)·x + a_e vanishes on the edge and is positive inside.
    pub offset: Rational,
    /// Edge vector equals `length * direction`.
    pub lattice_length: Rational,
}

impl Edge {
    pub fn level(&self, p: &Point) -> Rational {
        self.normal.apply(p) + self.offset
    }

    /// Length times the Euclidean length of the primitive direction.
    pub fn symplectic_area(&self) -> Rational {
        self.lattice_length * rat(self.direction.norm2())
    }
}

/// Convex polygon with rational vertices in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolygon {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
}

impl LatticePolygon {
    /// Accepts either orientation; drops repeated and collinear vertices.
    pub fn new(vertices: Vec<Point>) -> Result<LatticePolygon> {
        let mut v = vertices;
        v.dedup();
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        if v.len() < 3 {
            return Err(domain("polygon needs three distinct vertices"));
        }
        if signed_area(&v) < Rational::zero() {
            v.reverse();
        }
        let mut changed = true;
        while changed && v.len() >= 3 {
            changed = false;
            for i in 0..v.len() {
                let n = v.len();
                let (a, b, c) = (&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]);
                if cross3(a, b, c).is_zero() {
                    v.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        let n = v.len();
        if n < 3 {
            return Err(domain("polygon has empty interior"));
        }
        for i in 0..n {
            if cross3(&v[i], &v[(i + 1) % n], &v[(i + 2) % n]) <= Rational::zero() {
                return Err(domain("polygon is not convex"));
            }
        }
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let (s, e) = (v[i].clone(), v[(i + 1) % n].clone());
            let (len, dir) = rational_direction(&(&e - &s))?;
            let normal = dir.perp();
            let offset = -normal.apply(&s);
            edges.push(Edge { start: s, end: e, direction: dir, normal, offset, lattice_length: len });
        }
        Ok(LatticePolygon { vertices: v, edges })
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Result<LatticePolygon> {
        LatticePolygon::new(pts.iter().map(|&(x, y)| Point::int(x as i128, y as i128)).collect())
    }

    /// Axis-parallel rectangle [x0,x1]×[y0,y1].
    pub fn rectangle(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Result<LatticePolygon> {
        LatticePolygon::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn area(&self) -> Rational {
        signed_area(&self.vertices)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.edges.iter().all(|e| e.level(p) >= Rational::zero())
    }

    pub fn contains_interior(&self, p: &Point) -> bool {
        self.edges.iter().all(|e| e.level(p) > Rational::zero())
    }

    pub fn on_boundary(&self, p: &Point) -> bool {
        self.contains(p) && !self.contains_interior(p)
    }

    /// min over the polygon of w·q.
    pub fn min_dot(&self, w: LatticeVector) -> Rational {
        self.vertices.iter().map(|v| w.apply(v)).min().expect("nonempty polygon")
    }

    pub fn bounds(&self) -> (Point, Point) {
        let xs = self.vertices.iter().map(|v| v.x);
        let ys = self.vertices.iter().map(|v| v.y);
        let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
        (Point::new(x0, y0), Point::new(x1, y1))
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.vertices {
            for b in &self.vertices {
                let (ax, ay) = a.to_f64();
                let (bx, by) = b.to_f64();
                d = d.max(libm::hypot(ax - bx, ay - by));
            }
        }
        d
    }

    /// Euclidean distance from a point to the boundary, for points inside.
    pub fn boundary_distance(&self, x: f64, y: f64) -> f64 {
        self.edges
            .iter()
            .map(|e| {
                let (nx, ny) = (e.normal.x as f64, e.normal.y as f64);
                (nx * x + ny * y + to_f64(&e.offset)) / libm::hypot(nx, ny)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn normal_fan(&self) -> Fan {
        Fan::new(self.edges.iter().map(|e| e.normal)).expect("normals of a convex polygon form a fan")
    }

    /// Whether every corner of the polygon is unimodular.
    pub fn is_smooth(&self) -> bool {
        self.normal_fan().is_smooth()
    }
}

pub(crate) fn signed_area(v: &[Point]) -> Rational {
    let n = v.len();
    let mut s = Rational::zero();
    for i in 0..n {
        s += v[i].cross(&v[(i + 1) % n]);
    }
    s / rat(2)
}

/// P(Δ): primitive vectors in the triangles 0, n(e1), n(e2) over adjacent edges.
pub fn support_set(poly: &LatticePolygon) -> BTreeSet<LatticeVector> {
    smooth_refinement(&poly.normal_fan()).rays.into_iter().collect()
}

/// Lattice points of N·Δ together with their outside neighbors.
///
/// The box stores a one-cell margin so every boundary cell has an index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub x0: i64,
    pub y0: i64,
    pub width: usize,
    pub height: usize,
    mask: Vec<bool>,
    count: usize,
}

impl Region {
    pub fn from_mask(x0: i64, y0: i64, width: usize, height: usize, mask: Vec<bool>) -> Result<Region> {
        if mask.len() != width * height {
            return Err(domain("mask size does not match box"));
        }
        let mut r = Region { x0, y0, width, height, mask, count: 0 };
        r.count = r.mask.iter().filter(|&&b| b).count();
        if r.count == 0 {
            return Err(domain("region is empty"));
        }
        for y in [0, height - 1] {
            for x in 0..width {
                if r.mask[y * width + x] {
                    return Err(domain("region touches the edge of its box"));
                }
            }
        }
        for x in [0, width - 1] {
            for y in 0..height {
                if r.mask[y * width + x] {
                    return Err(domain("region touches the edge of its box"));
                }
            }
        }
        if !r.is_connected() {
            return Err(domain("region is not edge-connected"));
        }
        Ok(r)
    }

    /// Square {0..n}² shifted by a margin.
    pub fn square(n: usize) -> Region {
        let w = n + 3;
        let mut mask = vec![false; w * w];
        for y in 1..=n + 1 {
            for x in 1..=n + 1 {
                mask[y * w + x] = true;
            }
        }
        Region::from_mask(-1, -1, w, w, mask).expect("square is valid")
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn slot(&self, x: i64, y: i64) -> Option<usize> {
        let (dx, dy) = (x - self.x0, y - self.y0);
        if dx < 0 || dy < 0 || dx as usize >= self.width || dy as usize >= self.height {
            return None;
        }
        Some(dy as usize * self.width + dx as usize)
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        self.slot(x, y).is_some_and(|s| self.mask[s])
    }

    /// Region cells in row-major order (y, then x).
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..self.height).flat_map(move |r| {
            (0..self.width).filter_map(move |c| {
                self.mask[r * self.width + c].then(|| (self.x0 + c as i64, self.y0 + r as i64))
            })
        })
    }

    pub fn boundary(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for r in 0..self.height {
            for c in 0..self.width {
                let (x, y) = (self.x0 + c as i64, self.y0 + r as i64);
                if !self.mask[r * self.width + c]
                    && NEIGHBORS.iter().any(|(dx, dy)| self.contains(x + dx, y + dy))
                {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn is_connected(&self) -> bool {
        let Some(start) = self.cells().next() else { return false };
        let mut seen = vec![false; self.mask.len()];
        let mut queue = VecDeque::from([start]);
        seen[self.slot(start.0, start.1).unwrap()] = true;
        let mut reached = 1;
        while let Some((x, y)) = queue.pop_front() {
            for (dx, dy) in NEIGHBORS {
                let (nx, ny) = (x + dx, y + dy);
                if self.contains(nx, ny) {
                    let s = self.slot(nx, ny).unwrap();
                    if !seen[s] {
                        seen[s] = true;
                        reached += 1;
                        queue.push_back((nx, ny));
                    }
                }
            }
        }
        reached == self.count
    }
}

pub const NEIGHBORS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// Γ(N·Δ) = (N·Δ) ∩ Z², closed polygon.
pub fn rasterize(poly: &LatticePolygon, scale: u32) -> Result<Region> {
    if scale == 0 {
        return Err(domain("scale must be positive"));
    }
    let n = rat(scale as i128);
    let (lo, hi) = poly.bounds();
    let x0 = (lo.x * n).floor().to_integer() as i64 - 1;
    let y0 = (lo.y * n).floor().to_integer() as i64 - 1;
    let x1 = (hi.x * n).ceil().to_integer() as i64 + 1;
    let y1 = (hi.y * n).ceil().to_integer() as i64 + 1;
    let width = (x1 - x0 + 1) as usize;
    let height = (y1 - y0 + 1) as usize;
    let mut mask = vec![false; width * height];
    for r in 0..height {
        for c in 0..width {
            let (x, y) = ((x0 + c as i64) as i128, (y0 + r as i64) as i128);
            mask[r * width + c] = poly.edges.iter().all(|e| {
                rat(e.normal.x as i128 * x + e.normal.y as i128 * y) + e.offset * n >= Rational::zero()
            });
        }
    }
    if !mask.iter().any(|&b| b) {
        return Err(domain("polygon contains no lattice points at this scale"));
    }
    Region::from_mask(x0, y0, width, height, mask)
}
