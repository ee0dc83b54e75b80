//! Cell graphs the engine runs on: rasterized regions and (p,q)-cylinders.
//!
//! Every cell has exactly four neighbor slots. A slot holding [`SINK`] sends
//! grains out of the system.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{domain, Result};
use crate::geometry::{Region, NEIGHBORS};

pub const SINK: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Layout {
    Planar { x0: i64, y0: i64, width: usize, height: usize, lookup: Vec<u32> },
    Cylinder(Cylinder),
}

/// Quotient of the strip 0 ≤ pj − qi ≤ depth by the translation period·(p,q).
///
/// Cells are addressed by level s = pj − qi and phase t mod period, where the
/// lattice point is s·(a,b) + t·(p,q) and pb − qa = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub p: i64,
    pub q: i64,
    pub a: i64,
    pub b: i64,
    pub period: i64,
    pub depth: i64,
}

impl Cylinder {
    pub fn level(&self, i: i64, j: i64) -> i64 {
        self.p * j - self.q * i
    }

    /// (level, phase) of a lattice point.
    pub fn classify(&self, i: i64, j: i64) -> (i64, i64) {
        let s = self.level(i, j);
        let t = if self.p != 0 { (i - s * self.a) / self.p } else { (j - s * self.b) / self.q };
        (s, t.rem_euclid(self.period))
    }

    pub fn point(&self, s: i64, t: i64) -> (i64, i64) {
        (s * self.a + t * self.p, s * self.b + t * self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    coords: Vec<(i64, i64)>,
    neighbors: Vec<[u32; 4]>,
    layout: Layout,
}

impl Lattice {
    pub fn from_region(region: &Region) -> Lattice {
        let (x0, y0, width, height) = (region.x0, region.y0, region.width, region.height);
        let mut lookup = vec![SINK; width * height];
        let coords: Vec<(i64, i64)> = region.cells().collect();
        for (k, &(x, y)) in coords.iter().enumerate() {
            lookup[(y - y0) as usize * width + (x - x0) as usize] = k as u32;
        }
        let at = |x: i64, y: i64| -> u32 {
            let (dx, dy) = (x - x0, y - y0);
            if dx < 0 || dy < 0 || dx as usize >= width || dy as usize >= height {
                SINK
            } else {
                lookup[dy as usize * width + dx as usize]
            }
        };
        let neighbors = coords
            .iter()
            .map(|&(x, y)| {
                let mut n = [SINK; 4];
                for (slot, (dx, dy)) in NEIGHBORS.iter().enumerate() {
                    n[slot] = at(x + dx, y + dy);
                }
                n
            })
            .collect();
        Lattice { coords, neighbors, layout: Layout::Planar { x0, y0, width, height, lookup } }
    }

    /// Cylinder for direction (p,q): levels 0..=depth, `period` cells per level.
    pub fn cylinder(p: i64, q: i64, period: i64, depth: i64) -> Result<Lattice> {
        if p.gcd(&q) != 1 {
            return Err(domain("cylinder direction must be primitive"));
        }
        if period < 1 || depth < 1 {
            return Err(domain("cylinder needs positive period and depth"));
        }
        let g = p.extended_gcd(&q);
        // p·x + q·y = ±1; normalize the sign so that pb − qa = 1
        let sign = g.gcd.signum();
        let cyl = Cylinder { p, q, a: -g.y * sign, b: g.x * sign, period, depth };
        debug_assert_eq!(cyl.p * cyl.b - cyl.q * cyl.a, 1);
        let index = |s: i64, t: i64| (s * period + t) as u32;
        let mut coords = Vec::with_capacity(((depth + 1) * period) as usize);
        let mut neighbors = Vec::with_capacity(coords.capacity());
        for s in 0..=depth {
            for t in 0..period {
                let (i, j) = cyl.point(s, t);
                coords.push((i, j));
                let mut n = [SINK; 4];
                for (slot, (dx, dy)) in NEIGHBORS.iter().enumerate() {
                    let (s2, t2) = cyl.classify(i + dx, j + dy);
                    if (0..=depth).contains(&s2) {
                        n[slot] = index(s2, t2);
                    }
                }
                neighbors.push(n);
            }
        }
        Ok(Lattice { coords, neighbors, layout: Layout::Cylinder(cyl) })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Lattice coordinates of a cell (a representative point on cylinders).
    pub fn coord(&self, v: usize) -> (i64, i64) {
        self.coords[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32; 4] {
        &self.neighbors[v]
    }

    pub fn cylinder_params(&self) -> Option<Cylinder> {
        match &self.layout {
            Layout::Cylinder(c) => Some(*c),
            Layout::Planar { .. } => None,
        }
    }

    /// Cell holding the lattice point (x, y), if any.
    pub fn index(&self, x: i64, y: i64) -> Option<usize> {
        match &self.layout {
            Layout::Planar { x0, y0, width, height, lookup } => {
                let (dx, dy) = (x - x0, y - y0);
                if dx < 0 || dy < 0 || dx as usize >= *width || dy as usize >= *height {
                    return None;
                }
                let k = lookup[dy as usize * width + dx as usize];
                (k != SINK).then_some(k as usize)
            }
            Layout::Cylinder(c) => {
                let (s, t) = c.classify(x, y);
                (0..=c.depth).contains(&s).then(|| (s * c.period + t) as usize)
            }
        }
    }

    /// Box (x0, y0, width, height) of a planar lattice.
    pub fn planar_box(&self) -> Option<(i64, i64, usize, usize)> {
        match &self.layout {
            Layout::Planar { x0, y0, width, height, .. } => Some((*x0, *y0, *width, *height)),
            Layout::Cylinder(_) => None,
        }
    }

    /// Discrete Laplacian −4H(v) + Σ H(w), with H = 0 on sinks.
    pub fn laplacian(&self, h: &[i64]) -> Vec<i64> {
        (0..self.len())
            .map(|v| {
                let s: i64 = self.neighbors[v].iter().filter(|&&w| w != SINK).map(|&w| h[w as usize]).sum();
                s - 4 * h[v]
            })
            .collect()
    }

    pub fn touches_sink(&self, v: usize) -> bool {
        self.neighbors[v].contains(&SINK)
    }
}
