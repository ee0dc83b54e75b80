use alloc::collections::VecDeque;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::lattice::{Lattice, SINK};
use crate::error::{contract, domain, Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000_000_000;

/// Order in which unstable cells are processed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    #[default]
    Fifo,
    Lifo,
    /// Uniformly random unstable cell, from a seeded ChaCha8 stream.
    Random(u64),
    /// Topple every cell unstable at the start of a sweep, then repeat.
    Generations,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandState {
    lattice: Arc<Lattice>,
    heights: Vec<u32>,
    lost: u64,
}

/// Topplings per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Odometer {
    pub counts: Vec<u64>,
}

impl Odometer {
    pub fn zero(n: usize) -> Self {
        Odometer { counts: vec![0; n] }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.counts.iter().map(|&c| c as i64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Territory {
    pub cells: Vec<usize>,
    pub touches_boundary: bool,
}

enum Worklist {
    Fifo(VecDeque<usize>),
    Lifo(Vec<usize>),
    Random(Vec<usize>, ChaCha8Rng),
    Generations(Vec<usize>, Vec<usize>),
}

impl Worklist {
    fn new(s: Schedule) -> Self {
        match s {
            Schedule::Fifo => Worklist::Fifo(VecDeque::new()),
            Schedule::Lifo => Worklist::Lifo(Vec::new()),
            Schedule::Random(seed) => Worklist::Random(Vec::new(), ChaCha8Rng::seed_from_u64(seed)),
            Schedule::Generations => Worklist::Generations(Vec::new(), Vec::new()),
        }
    }

    fn push(&mut self, v: usize) {
        match self {
            Worklist::Fifo(q) => q.push_back(v),
            Worklist::Lifo(s) | Worklist::Random(s, _) => s.push(v),
            Worklist::Generations(_, next) => next.push(v),
        }
    }

    fn pop(&mut self) -> Option<usize> {
        match self {
            Worklist::Fifo(q) => q.pop_front(),
            Worklist::Lifo(s) => s.pop(),
            Worklist::Random(s, rng) => {
                if s.is_empty() {
                    return None;
                }
                let k = (rng.next_u64() % s.len() as u64) as usize;
                Some(s.swap_remove(k))
            }
            Worklist::Generations(cur, next) => {
                if cur.is_empty() {
                    core::mem::swap(cur, next);
                    cur.reverse();
                }
                cur.pop()
            }
        }
    }

    /// FIFO and LIFO topple a cell as often as its height allows in one go;
    /// the other schedules topple once per visit.
    fn batch(&self) -> bool {
        matches!(self, Worklist::Fifo(_) | Worklist::Lifo(_))
    }
}

impl SandState {
    pub fn new(lattice: Arc<Lattice>, heights: Vec<u32>) -> Result<Self> {
        if heights.len() != lattice.len() {
            return Err(domain("height vector does not match the lattice"));
        }
        Ok(SandState { lattice, heights, lost: 0 })
    }

    /// All cells at 3.
    pub fn max_stable(lattice: Arc<Lattice>) -> Self {
        let heights = vec![3; lattice.len()];
        SandState { lattice, heights, lost: 0 }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn height(&self, v: usize) -> u32 {
        self.heights[v]
    }

    pub fn lost(&self) -> u64 {
        self.lost
    }

    pub fn total(&self) -> u64 {
        self.heights.iter().map(|&h| h as u64).sum()
    }

    pub fn is_stable(&self) -> bool {
        self.heights.iter().all(|&h| h < 4)
    }

    pub fn cell(&self, x: i64, y: i64) -> Result<usize> {
        self.lattice.index(x, y).ok_or_else(|| domain("point outside the region"))
    }

    /// One grain per listed point; repeats add up.
    pub fn add_grains(&mut self, points: &[(i64, i64)]) -> Result<()> {
        let cells = points.iter().map(|&(x, y)| self.cell(x, y)).collect::<Result<Vec<_>>>()?;
        for v in cells {
            self.heights[v] += 1;
        }
        Ok(())
    }

    pub fn add_grain_at(&mut self, v: usize, k: u32) {
        self.heights[v] += k;
    }

    /// A single legal toppling at v.
    pub fn topple(&mut self, v: usize) -> Result<()> {
        if self.heights[v] < 4 {
            return Err(contract("toppling a cell with fewer than four grains"));
        }
        self.fire(v, 1);
        Ok(())
    }

    #[inline]
    fn fire(&mut self, v: usize, k: u32) {
        self.heights[v] -= 4 * k;
        for &w in self.lattice.neighbors(v) {
            if w == SINK {
                self.lost += k as u64;
            } else {
                self.heights[w as usize] += k;
            }
        }
    }

    pub fn relax(&mut self, schedule: Schedule) -> Result<Odometer> {
        self.relax_with_budget(schedule, DEFAULT_BUDGET)
    }

    /// Topples until stable. On budget exhaustion the state is left part-way.
    pub fn relax_with_budget(&mut self, schedule: Schedule, budget: u64) -> Result<Odometer> {
        let n = self.heights.len();
        let lattice = Arc::clone(&self.lattice);
        let mut odo = vec![0u64; n];
        let mut queued = vec![false; n];
        let mut work = Worklist::new(schedule);
        let batch = work.batch();
        for v in 0..n {
            if self.heights[v] >= 4 {
                queued[v] = true;
                work.push(v);
            }
        }
        let mut used = 0u64;
        while let Some(v) = work.pop() {
            queued[v] = false;
            let h = self.heights[v];
            if h < 4 {
                continue;
            }
            let k = if batch { h / 4 } else { 1 };
            if used + k as u64 > budget {
                return Err(Error::Budget { limit: budget, what: "toppling" });
            }
            used += k as u64;
            odo[v] += k as u64;
            self.fire(v, k);
            for &w in lattice.neighbors(v).iter().chain(core::iter::once(&(v as u32))) {
                if w != SINK && self.heights[w as usize] >= 4 && !queued[w as usize] {
                    queued[w as usize] = true;
                    work.push(w as usize);
                }
            }
        }
        Ok(Odometer { counts: odo })
    }

    /// Maximal connected height-3 components with at least two cells.
    pub fn territories(&self) -> Result<Vec<Territory>> {
        if !self.is_stable() {
            return Err(contract("territories of an unstable state"));
        }
        let n = self.heights.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.heights[s] != 3 {
                continue;
            }
            seen[s] = true;
            let mut cells = vec![s];
            let mut i = 0;
            while i < cells.len() {
                let v = cells[i];
                i += 1;
                for &w in self.lattice.neighbors(v) {
                    if w != SINK && !seen[w as usize] && self.heights[w as usize] == 3 {
                        seen[w as usize] = true;
                        cells.push(w as usize);
                    }
                }
            }
            if cells.len() >= 2 {
                cells.sort_unstable();
                let touches_boundary = cells.iter().any(|&v| self.lattice.touches_sink(v));
                out.push(Territory { cells, touches_boundary });
            }
        }
        Ok(out)
    }

    /// Whether v lies in a territory of this stable state.
    pub fn in_territory(&self, v: usize) -> bool {
        self.heights[v] == 3
            && self.lattice.neighbors(v).iter().any(|&w| w != SINK && w as usize != v && self.heights[w as usize] == 3)
    }

    /// Add a grain at v, topple v, relax with v frozen, remove the grain.
    /// Returns the toppled cells in toppling order.
    pub fn send_wave(&mut self, v: usize) -> Result<Vec<usize>> {
        if !self.is_stable() {
            return Err(contract("waves start from a stable state"));
        }
        if !self.in_territory(v) {
            return Err(domain("wave source is not inside a territory"));
        }
        let n = self.heights.len();
        let lattice = Arc::clone(&self.lattice);
        let mut toppled = vec![false; n];
        let mut support = Vec::new();
        let mut queue = VecDeque::new();
        self.heights[v] += 1;
        toppled[v] = true;
        support.push(v);
        self.fire(v, 1);
        queue.extend(lattice.neighbors(v).iter().filter(|&&w| w != SINK).map(|&w| w as usize));
        while let Some(w) = queue.pop_front() {
            if self.heights[w] < 4 || w == v {
                continue;
            }
            if toppled[w] || self.heights[w] >= 8 {
                return Err(contract("a cell toppled twice within one wave"));
            }
            toppled[w] = true;
            support.push(w);
            self.fire(w, 1);
            queue.extend(lattice.neighbors(w).iter().filter(|&&u| u != SINK).map(|&u| u as usize));
        }
        self.heights[v] -= 1;
        debug_assert!(self.is_stable());
        Ok(support)
    }
}
