//! Waves sent from deep inside a (p,q)-cylinder towards its lower boundary.
//!
//! Levels s = pj − qi count lattice lines parallel to (p,q). The lower sink
//! sits below s = 0, the source at the middle level, so the upper half never
//! interacts with what is measured here.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::geometry::Rational;
use crate::sandpile::{Lattice, SandState};

/// A defect cell as (level, phase, height).
pub type Cell = (i64, i64, u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolitonWindow {
    /// Copies of (p,q) per level before the cylinder closes up.
    pub period: i64,
    pub depth: i64,
}

impl SolitonWindow {
    /// Deep enough that `waves` waves cannot reach the source.
    pub fn for_waves(p: i64, q: i64, waves: u64) -> Self {
        let w = p.abs() + q.abs();
        let margin = 8 * w * w + 32;
        SolitonWindow { period: 2, depth: 2 * (waves as i64 + margin) }
    }
}

/// Mutable experiment: cylinder state, accumulated odometer and wave count.
#[derive(Clone, Debug)]
pub struct WaveRun {
    pub p: i64,
    pub q: i64,
    pub window: SolitonWindow,
    pub state: SandState,
    pub odometer: Vec<u64>,
    pub source: usize,
    pub waves: u64,
}

impl WaveRun {
    pub fn new(p: i64, q: i64, window: SolitonWindow) -> Result<Self> {
        if window.period < 2 {
            return Err(domain("period must be at least 2 to observe (p,q)-periodicity"));
        }
        let lattice = Arc::new(Lattice::cylinder(p, q, window.period, window.depth)?);
        let source = (window.depth / 2 * window.period) as usize;
        let n = lattice.len();
        Ok(WaveRun { p, q, window, state: SandState::max_stable(lattice), odometer: vec![0; n], source, waves: 0 })
    }

    pub fn source_level(&self) -> i64 {
        self.window.depth / 2
    }

    pub fn level_phase(&self, v: usize) -> (i64, i64) {
        let per = self.window.period as usize;
        ((v / per) as i64, (v % per) as i64)
    }

    pub fn index(&self, s: i64, t: i64) -> usize {
        (s * self.window.period + t) as usize
    }

    pub fn send_wave(&mut self) -> Result<()> {
        for v in self.state.send_wave(self.source)? {
            self.odometer[v] += 1;
        }
        self.waves += 1;
        Ok(())
    }

    /// Defects below the source, sorted by level then phase.
    pub fn lower_defects(&self) -> Vec<Cell> {
        let per = self.window.period;
        (0..self.source_level() * per)
            .map(|v| v as usize)
            .filter(|&v| self.state.height(v) < 3)
            .map(|v| {
                let (s, t) = self.level_phase(v);
                (s, t, self.state.height(v))
            })
            .collect()
    }

    /// Heights are invariant under the (p,q) translation t → t+1 on these levels.
    pub fn periodic_on(&self, levels: impl IntoIterator<Item = i64>) -> bool {
        let per = self.window.period;
        levels.into_iter().all(|s| (0..per).all(|t| self.state.height(self.index(s, t)) == self.state.height(self.index(s, (t + 1) % per))))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolitonReport {
    pub p: i64,
    pub q: i64,
    pub window: SolitonWindow,
    /// Waves sent until the picture settled and was confirmed.
    pub waves: u64,
    /// Boundary artifacts B in absolute levels.
    pub boundary: Vec<Cell>,
    /// Moving pattern E with levels relative to its lowest level.
    pub moving: Vec<Cell>,
    /// Lowest level of E after the last wave.
    pub front: i64,
    /// Odometer offset: h = s + k between B and E.
    pub offset: i64,
    /// Share of the territory between B and E where h = s + k.
    pub linear_fraction: f64,
    /// Normal displacement per wave, 1/|(p,q)| when the pattern moves one level.
    pub displacement_per_wave: f64,
}

/// Split defects at the lowest level that changed in the last wave.
fn split(before: &[Cell], after: &[Cell]) -> Option<(Vec<Cell>, Vec<Cell>)> {
    let old: BTreeMap<(i64, i64), u32> = before.iter().map(|&(s, t, h)| ((s, t), h)).collect();
    let new: BTreeMap<(i64, i64), u32> = after.iter().map(|&(s, t, h)| ((s, t), h)).collect();
    let changed = old
        .keys()
        .chain(new.keys())
        .filter(|k| old.get(k) != new.get(k))
        .map(|k| k.0)
        .min()?;
    let (moving, boundary): (Vec<Cell>, Vec<Cell>) = after.iter().partition(|c| c.0 >= changed);
    Some((boundary, moving))
}

fn shifted(cells: &[Cell], by: i64) -> Vec<Cell> {
    cells.iter().map(|&(s, t, h)| (s + by, t, h)).collect()
}

/// Odometer offset k (most common h − s) and the share of cells where it fits.
pub fn linear_fit(run: &WaveRun, from: i64, to: i64) -> (i64, f64) {
    let mut tally: BTreeMap<i64, u64> = BTreeMap::new();
    let mut total = 0u64;
    for s in from..to {
        for t in 0..run.window.period {
            let v = run.index(s, t);
            if run.state.height(v) == 3 {
                *tally.entry(run.odometer[v] as i64 - s).or_default() += 1;
                total += 1;
            }
        }
    }
    match tally.iter().max_by_key(|&(k, c)| (*c, -*k)) {
        Some((&k, &c)) => (k, c as f64 / total as f64),
        None => (0, 0.0),
    }
}

/// Sends waves until B stays fixed, E moves up one level per wave and both
/// are (p,q)-periodic for `CONFIRM` consecutive waves.
pub fn soliton_extract(p: i64, q: i64, window: SolitonWindow, max_waves: u64) -> Result<(SolitonReport, WaveRun)> {
    const CONFIRM: u64 = 10;
    let mut run = WaveRun::new(p, q, window)?;
    let mut prev = run.lower_defects();
    let mut prev_split: Option<(Vec<Cell>, Vec<Cell>)> = None;
    let mut streak = 0;
    while run.waves < max_waves {
        run.send_wave()?;
        let cur = run.lower_defects();
        let parts = split(&prev, &cur);
        let good = match (&prev_split, &parts) {
            (Some((b0, e0)), Some((b1, e1))) => {
                !e1.is_empty()
                    && b0 == b1
                    && shifted(e0, 1) == *e1
                    && run.periodic_on(cur.iter().map(|c| c.0))
            }
            _ => false,
        };
        streak = if good { streak + 1 } else { 0 };
        prev = cur;
        prev_split = parts;
        if streak == CONFIRM {
            let (boundary, moving) = prev_split.unwrap();
            let front = moving[0].0;
            if front + 4 * (p.abs() + q.abs()) >= run.source_level() {
                break;
            }
            let lo = boundary.iter().map(|c| c.0 + 1).max().unwrap_or(0);
            let (offset, linear_fraction) = linear_fit(&run, lo, front);
            let report = SolitonReport {
                p,
                q,
                window,
                waves: run.waves,
                boundary,
                moving: shifted(&moving, -front),
                front,
                offset,
                linear_fraction,
                displacement_per_wave: 1.0 / libm::hypot(p as f64, q as f64),
            };
            return Ok((report, run));
        }
    }
    Err(Error::NotStabilized(alloc::format!("no self-reproducing pattern for ({p},{q}) within {max_waves} waves")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSpeed {
    /// Shift of the mean level of E over the M waves.
    pub level_shift: Rational,
    pub displacement: f64,
    pub predicted: f64,
}

/// Normal displacement of the moving pattern over `m` waves after it settles.
pub fn measure_edge_speed(alpha: i64, beta: i64, m: u64, window: Option<SolitonWindow>) -> Result<EdgeSpeed> {
    if m < 10 {
        return Err(domain("at least ten waves are needed"));
    }
    let warmup = 400;
    let window = window.unwrap_or_else(|| SolitonWindow::for_waves(alpha, beta, warmup + m));
    let (_, mut run) = soliton_extract(alpha, beta, window, warmup)?;
    let centroid = |run: &WaveRun, before: &[Cell]| -> Result<Rational> {
        let cur = run.lower_defects();
        let (_, e) = split(before, &cur).ok_or_else(|| Error::NotStabilized("pattern not detected".into()))?;
        if e.is_empty() {
            return Err(Error::NotStabilized("pattern not detected".into()));
        }
        Ok(Rational::new(e.iter().map(|c| c.0 as i128).sum(), e.len() as i128))
    };
    let mut before = run.lower_defects();
    run.send_wave()?;
    let start = centroid(&run, &before)?;
    for _ in 0..m {
        before = run.lower_defects();
        run.send_wave()?;
    }
    let end = centroid(&run, &before)?;
    let norm = libm::hypot(alpha as f64, beta as f64);
    let level_shift = end - start;
    Ok(EdgeSpeed {
        level_shift,
        displacement: crate::geometry::to_f64(&level_shift) / norm,
        predicted: m as f64 / norm,
    })
}
