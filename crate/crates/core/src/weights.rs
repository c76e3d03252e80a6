//! Weight generators and window-swept constants: Muckenhoupt A_p and A_1,
//! the restricted-weak-type constant A_p^R, reverse-Holder ratios, and the
//! cube-comparability extremes for product weights.
//!
//! Every constant is a maximum over the grid's window family, computed in
//! normalized mean form so that the flat weight w == 1 yields exactly 1.0.
//! Witness ties are broken toward the smallest window index.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::WeightField;
use crate::grid::Grid;
use crate::maximal::{hl_maximal, Window, WindowFamily};
use crate::rng::mix_f64;

/// Serializable recipe for a weight on any grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    /// w == c.
    Constant { value: f64 },
    /// w(x) = |x|^exponent, evaluated at cell centers (never at the origin:
    /// the cell count per axis is even).
    Power { exponent: f64 },
    /// Power-tail weight that leaves the restricted classes on the line:
    /// w(x) = |x|^{-n (1 + p2/p1)} for |x| >= 1 and 1 inside the unit ball.
    CounterexampleW2 { p1: f64, p2: f64, n: u8 },
    /// Piecewise-constant levels on unit blocks keyed by absolute position,
    /// so enlarging the grid extends the same weight. Levels are log-uniform
    /// in [level_min, level_max].
    PiecewiseRandom {
        seed: u64,
        level_min: f64,
        level_max: f64,
    },
    /// w = w1^{p/p1} * w2^{p/p2} with 1/p = 1/p1 + 1/p2.
    ProductCombine {
        first: Box<WeightSpec>,
        second: Box<WeightSpec>,
        p1: f64,
        p2: f64,
    },
}

impl WeightSpec {
    pub fn realize(&self, grid: Grid) -> Result<WeightField> {
        match self {
            WeightSpec::Constant { value } => WeightField::constant(grid, *value),
            WeightSpec::Power { exponent } => {
                let e = *exponent;
                let values = (0..grid.cell_count())
                    .map(|i| grid.center_radius(i).powf(e))
                    .collect();
                WeightField::new(grid, values)
            }
            WeightSpec::CounterexampleW2 { p1, p2, n } => {
                if *n != grid.dimension() {
                    return Err(Error::InvalidParameter(format!(
                        "counterexample weight has n={n} but the grid is {}-dimensional",
                        grid.dimension()
                    )));
                }
                if *p1 <= 0.0 || *p2 <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "counterexample weight requires p1, p2 > 0".into(),
                    ));
                }
                let e = -(*n as f64) * (1.0 + p2 / p1);
                let values = (0..grid.cell_count())
                    .map(|i| {
                        let r = grid.center_radius(i);
                        if r >= 1.0 {
                            r.powf(e)
                        } else {
                            1.0
                        }
                    })
                    .collect();
                WeightField::new(grid, values)
            }
            WeightSpec::PiecewiseRandom {
                seed,
                level_min,
                level_max,
            } => {
                if !(*level_min > 0.0 && level_max >= level_min) {
                    return Err(Error::InvalidParameter(
                        "piecewise weight requires 0 < level_min <= level_max".into(),
                    ));
                }
                let (lo, hi) = (level_min.ln(), level_max.ln());
                let values = (0..grid.cell_count())
                    .map(|i| {
                        let c = grid.center(i);
                        let bx = c[0].floor() as i64;
                        let by = if grid.dimension() == 2 {
                            c[1].floor() as i64
                        } else {
                            0
                        };
                        let u = mix_f64(*seed, &[bx, by]);
                        (lo + u * (hi - lo)).exp()
                    })
                    .collect();
                WeightField::new(grid, values)
            }
            WeightSpec::ProductCombine {
                first,
                second,
                p1,
                p2,
            } => {
                if *p1 <= 0.0 || *p2 <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "product weight requires p1, p2 > 0".into(),
                    ));
                }
                let p = combined_exponent(*p1, *p2);
                let w1 = first.realize(grid)?;
                let w2 = second.realize(grid)?;
                WeightField::combine(&w1, p / p1, &w2, p / p2)
            }
        }
    }
}

/// 1/p = 1/p1 + 1/p2.
pub fn combined_exponent(p1: f64, p2: f64) -> f64 {
    1.0 / (1.0 / p1 + 1.0 / p2)
}

/// Combined weight w1^{p/p1} w2^{p/p2} for already-realized weights.
pub fn combined_weight(
    w1: &WeightField,
    w2: &WeightField,
    p1: f64,
    p2: f64,
) -> Result<WeightField> {
    let p = combined_exponent(p1, p2);
    WeightField::combine(w1, p / p1, w2, p / p2)
}

/// Which constant a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    Ap,
    A1,
    ApRestricted,
    ReverseHolder,
}

impl ConstantKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConstantKind::Ap => "ap",
            ConstantKind::A1 => "a1",
            ConstantKind::ApRestricted => "apr",
            ConstantKind::ReverseHolder => "rh",
        }
    }
}

/// Result of a window sweep: the extremal value, the witnessing window, and
/// the size of the family swept. For the A_1 constant the witness is the
/// singleton window at the maximizing cell.
#[derive(Debug, Clone)]
pub struct ConstantReport {
    pub kind: ConstantKind,
    /// The Lebesgue exponent (p for A_p / A_p^R, s for reverse Holder, 1 for A_1).
    pub p: f64,
    pub value: f64,
    pub witness: Window,
    pub family_size: usize,
}

impl ConstantReport {
    /// CSV row `constant_name,p,value,witness_lo,witness_hi,family_size`.
    pub fn csv_row(&self, grid: &Grid) -> String {
        let (lo, hi) = self.witness.flat_bounds(grid);
        format!(
            "{},{},{},{},{},{}",
            self.kind.name(),
            crate::io::fmt_sig15(self.p),
            crate::io::fmt_sig15(self.value),
            lo,
            hi,
            self.family_size
        )
    }
}

/// Sweep state: maximum with smallest-window-index tie break.
struct SweepMax {
    value: f64,
    index: usize,
    window: Option<Window>,
}

impl SweepMax {
    fn new() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            index: usize::MAX,
            window: None,
        }
    }

    fn offer(&mut self, value: f64, index: usize, window: Window) {
        if value > self.value || (value == self.value && index < self.index) {
            self.value = value;
            self.index = index;
            self.window = Some(window);
        }
    }

    fn merge(mut self, other: SweepMax) -> SweepMax {
        if let Some(w) = other.window {
            self.offer(other.value, other.index, w);
        }
        self
    }
}

fn mean_over_cells(values: &[f64], cells: &[usize]) -> f64 {
    let sum: f64 = cells.iter().map(|&i| values[i]).sum();
    sum / cells.len() as f64
}

/// Muckenhoupt constant
/// [w]_{A_p} = sup_Q (mean_Q w) (mean_Q w^{1-p'})^{p-1}, p > 1.
/// For p = 1 this delegates to [w]_{A_1}.
pub fn ap_constant(w: &WeightField, p: f64, windows: &WindowFamily) -> Result<ConstantReport> {
    if w.grid() != windows.grid() {
        return Err(Error::GridMismatch);
    }
    if !(p >= 1.0) {
        return Err(Error::BadExponent {
            bound: "p >= 1",
            got: p,
        });
    }
    if p == 1.0 {
        return a1_constant(w, windows);
    }
    let dual = 1.0 - p / (p - 1.0); // 1 - p'
    let wv = w.values();
    let dualv: Vec<f64> = wv.iter().map(|&v| v.powf(dual)).collect();
    let grid = w.grid();
    let best = sweep_windows(windows, move |window, _| {
        let cells = window.cells(&grid);
        let m1 = mean_over_cells(wv, &cells);
        let m2 = mean_over_cells(&dualv, &cells);
        m1 * m2.powf(p - 1.0)
    });
    Ok(ConstantReport {
        kind: ConstantKind::Ap,
        p,
        value: best.value,
        witness: best.window.expect("window family is nonempty"),
        family_size: windows.len(),
    })
}

/// [w]_{A_1} = max over cells of (Mw)_i / w_i with M over the same family.
pub fn a1_constant(w: &WeightField, windows: &WindowFamily) -> Result<ConstantReport> {
    if w.grid() != windows.grid() {
        return Err(Error::GridMismatch);
    }
    let mw = hl_maximal(w.as_scalar(), windows)?;
    let mut best = f64::NEG_INFINITY;
    let mut cell = 0;
    for (i, (&m, &v)) in mw.values().iter().zip(w.values()).enumerate() {
        let ratio = m / v;
        if ratio > best {
            best = ratio;
            cell = i;
        }
    }
    let witness = match w.grid().dimension() {
        1 => Window::Interval { lo: cell, hi: cell },
        _ => {
            let (row, col) = w.grid().axis_indices(cell);
            Window::Square { row, col, side: 1 }
        }
    };
    Ok(ConstantReport {
        kind: ConstantKind::A1,
        p: 1.0,
        value: best,
        witness,
        family_size: windows.len(),
    })
}

/// Restricted-weak-type constant
/// [w]_{A_p^R} = sup_Q w(Q)^{1/p} ||chi_Q w^{-1}||_{L^{p',inf}(w)} / |Q|,
/// with L^{p',inf} read as L^inf when p = 1.
///
/// Computed in mean form: (mean_Q w)^{1/p} * max over cells j in Q of
/// (1/w_j) (F(j)/|Q|_cells)^{1/p'}, where F(j) is the w-sum over cells of Q
/// with w <= w_j. The inner maximum is the weak quasi-norm of chi_Q w^{-1}
/// against the measure w restricted to Q, evaluated at its jumps.
pub fn apr_constant(w: &WeightField, p: f64, windows: &WindowFamily) -> Result<ConstantReport> {
    if w.grid() != windows.grid() {
        return Err(Error::GridMismatch);
    }
    if !(p >= 1.0) {
        return Err(Error::BadExponent {
            bound: "p >= 1",
            got: p,
        });
    }
    let grid = w.grid();
    let wv = w.values();
    let inv_p = 1.0 / p;
    let inv_dual = if p > 1.0 { (p - 1.0) / p } else { 0.0 }; // 1/p'

    // Cells in globally ascending weight order; each window is scanned in
    // this order so the within-window cumulative w-sum needs no per-window
    // sort.
    let mut order: Vec<u32> = (0..wv.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| wv[a as usize].partial_cmp(&wv[b as usize]).unwrap());

    let best = match grid.dimension() {
        1 => {
            let n = grid.cells_per_axis();
            (0..n)
                .into_par_iter()
                .map(|lo| {
                    let mut local = SweepMax::new();
                    // windows [lo, hi] share the interval index base
                    let base: usize = (0..lo).map(|a| n - a).sum();
                    for hi in lo..n {
                        let len = (hi - lo + 1) as f64;
                        let (mean, inner) = if p > 1.0 {
                            let mut cum = 0.0;
                            let mut m: f64 = 0.0;
                            for &j in &order {
                                let j = j as usize;
                                if j < lo || j > hi {
                                    continue;
                                }
                                cum += wv[j];
                                m = m.max((cum / len).powf(inv_dual) / wv[j]);
                            }
                            (cum / len, m)
                        } else {
                            let mut min_w = f64::INFINITY;
                            let mut sum = 0.0;
                            for &v in &wv[lo..=hi] {
                                sum += v;
                                min_w = min_w.min(v);
                            }
                            (sum / len, 1.0 / min_w)
                        };
                        let value = mean.powf(inv_p) * inner;
                        local.offer(value, base + hi - lo, Window::Interval { lo, hi });
                    }
                    local
                })
                .reduce(SweepMax::new, SweepMax::merge)
        }
        _ => {
            let mut local = SweepMax::new();
            for (idx, window) in windows.iter().enumerate() {
                let cells = window.cells(&grid);
                let len = cells.len() as f64;
                let mut slice: Vec<f64> = cells.iter().map(|&i| wv[i]).collect();
                slice.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
                let mean = slice.iter().sum::<f64>() / len;
                let inner = if p > 1.0 {
                    let mut cum = 0.0;
                    let mut m: f64 = 0.0;
                    for &v in &slice {
                        cum += v;
                        m = m.max((cum / len).powf(inv_dual) / v);
                    }
                    m
                } else {
                    1.0 / slice[0]
                };
                local.offer(mean.powf(inv_p) * inner, idx, window);
            }
            local
        }
    };
    Ok(ConstantReport {
        kind: ConstantKind::ApRestricted,
        p,
        value: best.value,
        witness: best.window.expect("window family is nonempty"),
        family_size: windows.len(),
    })
}

/// Reverse-Holder ratio [w]_{RH_s} = sup_Q (mean_Q w^s)^{1/s} / mean_Q w,
/// s > 1.
pub fn rh_constant(w: &WeightField, s: f64, windows: &WindowFamily) -> Result<ConstantReport> {
    if w.grid() != windows.grid() {
        return Err(Error::GridMismatch);
    }
    if !(s > 1.0) {
        return Err(Error::BadExponent {
            bound: "s > 1",
            got: s,
        });
    }
    let grid = w.grid();
    let wv = w.values();
    let pow: Vec<f64> = wv.iter().map(|&v| v.powf(s)).collect();
    let best = sweep_windows(windows, move |window, _| {
        let cells = window.cells(&grid);
        mean_over_cells(&pow, &cells).powf(1.0 / s) / mean_over_cells(wv, &cells)
    });
    Ok(ConstantReport {
        kind: ConstantKind::ReverseHolder,
        p: s,
        value: best.value,
        witness: best.window.expect("window family is nonempty"),
        family_size: windows.len(),
    })
}

/// Extremes over the family of
/// r(Q) = w1(Q)^{1/p1} w2(Q)^{1/p2} / w(Q)^{1/p}, w = w1^{p/p1} w2^{p/p2}.
/// The minimum is >= 1 for every pair of weights (Holder on Q).
#[derive(Debug, Clone)]
pub struct ComparabilityReport {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub min_witness: Window,
    pub max_witness: Window,
    pub family_size: usize,
}

pub fn cube_comparability(
    w1: &WeightField,
    w2: &WeightField,
    p1: f64,
    p2: f64,
    windows: &WindowFamily,
) -> Result<ComparabilityReport> {
    if w1.grid() != windows.grid() || w2.grid() != windows.grid() {
        return Err(Error::GridMismatch);
    }
    if p1 <= 0.0 || p2 <= 0.0 {
        return Err(Error::BadExponent {
            bound: "p1, p2 > 0",
            got: p1.min(p2),
        });
    }
    let p = combined_exponent(p1, p2);
    let w = combined_weight(w1, w2, p1, p2)?;
    let grid = w.grid();
    let (w1v, w2v, wv) = (w1.values(), w2.values(), w.values());

    let mut min = (f64::INFINITY, usize::MAX, None::<Window>);
    let mut max = (f64::NEG_INFINITY, usize::MAX, None::<Window>);
    for (idx, window) in windows.iter().enumerate() {
        let cells = window.cells(&grid);
        let m1 = mean_over_cells(w1v, &cells);
        let m2 = mean_over_cells(w2v, &cells);
        let m = mean_over_cells(wv, &cells);
        // |Q| factors cancel: 1/p1 + 1/p2 = 1/p.
        let ratio = m1.powf(1.0 / p1) * m2.powf(1.0 / p2) / m.powf(1.0 / p);
        if ratio < min.0 || (ratio == min.0 && idx < min.1) {
            min = (ratio, idx, Some(window));
        }
        if ratio > max.0 || (ratio == max.0 && idx < max.1) {
            max = (ratio, idx, Some(window));
        }
    }
    Ok(ComparabilityReport {
        min_ratio: min.0,
        max_ratio: max.0,
        min_witness: min.2.expect("window family is nonempty"),
        max_witness: max.2.expect("window family is nonempty"),
        family_size: windows.len(),
    })
}

fn sweep_windows(windows: &WindowFamily, eval: impl Fn(Window, usize) -> f64 + Sync) -> SweepMax {
    let items: Vec<Window> = windows.iter().collect();
    items
        .par_iter()
        .enumerate()
        .fold(SweepMax::new, |mut acc, (idx, &window)| {
            acc.offer(eval(window, idx), idx, window);
            acc
        })
        .reduce(SweepMax::new, SweepMax::merge)
}
