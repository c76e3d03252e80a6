//! Uncentered Hardy-Littlewood maximal operators on grids, the product
//! operator Mf * Mg, and the symmetric bilinear maximal operator in one
//! dimension.
//!
//! The window family fixes which cube averages feed the supremum:
//! every contiguous cell run in 1D, and every axis-aligned square with
//! dyadic side length (1, 2, 4, ... cells) at all positions in 2D. Windows
//! are subsets of the grid by construction, and averages always divide by
//! the exact window volume, so Mf >= f pointwise (single cells are windows)
//! and Mf <= max f.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Grid;

/// One window of a family: a cell interval in 1D or a square in 2D. The
/// bounds are inclusive axis indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Interval { lo: usize, hi: usize },
    Square { row: usize, col: usize, side: usize },
}

impl Window {
    /// Number of cells covered.
    pub fn cell_count(&self) -> usize {
        match *self {
            Window::Interval { lo, hi } => hi - lo + 1,
            Window::Square { side, .. } => side * side,
        }
    }

    /// Flat indices of the covered cells.
    pub fn cells(&self, grid: &Grid) -> Vec<usize> {
        match *self {
            Window::Interval { lo, hi } => (lo..=hi).collect(),
            Window::Square { row, col, side } => {
                let mut out = Vec::with_capacity(side * side);
                for i in row..row + side {
                    for j in col..col + side {
                        out.push(grid.flat_index(i, j));
                    }
                }
                out
            }
        }
    }

    /// (first flat cell, last flat cell) for report serialization.
    pub fn flat_bounds(&self, grid: &Grid) -> (usize, usize) {
        match *self {
            Window::Interval { lo, hi } => (lo, hi),
            Window::Square { row, col, side } => (
                grid.flat_index(row, col),
                grid.flat_index(row + side - 1, col + side - 1),
            ),
        }
    }
}

/// The family of windows attached to a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowFamily {
    grid: Grid,
}

impl WindowFamily {
    pub fn for_grid(grid: Grid) -> Self {
        Self { grid }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Dyadic side lengths used on two-dimensional grids: 1, 2, 4, ..., <= N.
    pub fn dyadic_sides(n_axis: usize) -> Vec<usize> {
        let mut sides = Vec::new();
        let mut s = 1;
        while s <= n_axis {
            sides.push(s);
            s *= 2;
        }
        sides
    }

    /// Number of windows in the family.
    pub fn len(&self) -> usize {
        let n = self.grid.cells_per_axis();
        match self.grid.dimension() {
            1 => n * (n + 1) / 2,
            _ => Self::dyadic_sides(n)
                .iter()
                .map(|&s| (n - s + 1) * (n - s + 1))
                .sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All windows, smallest-index first within each shape class.
    pub fn iter(&self) -> Box<dyn Iterator<Item = Window> + '_> {
        let n = self.grid.cells_per_axis();
        match self.grid.dimension() {
            1 => Box::new(
                (0..n).flat_map(move |lo| (lo..n).map(move |hi| Window::Interval { lo, hi })),
            ),
            _ => Box::new(Self::dyadic_sides(n).into_iter().flat_map(move |side| {
                (0..=n - side).flat_map(move |row| {
                    (0..=n - side).map(move |col| Window::Square { row, col, side })
                })
            })),
        }
    }

    /// Average of `values` over a window (plain cell average).
    pub fn window_mean(&self, values: &[f64], window: Window) -> f64 {
        let cells = window.cells(&self.grid);
        let sum: f64 = cells.iter().map(|&i| values[i]).sum();
        sum / cells.len() as f64
    }
}

/// Uncentered maximal function: (Mf)_i = max over windows containing cell i
/// of the window average of f.
///
/// 1D runs an exact suffix-max sweep over left endpoints (O(N^2) total,
/// O(N) memory); 2D runs a sliding max filter per dyadic side length.
pub fn hl_maximal(f: &ScalarField, windows: &WindowFamily) -> Result<ScalarField> {
    if f.grid() != windows.grid() {
        return Err(Error::GridMismatch);
    }
    let out = match f.grid().dimension() {
        1 => maximal_1d(f.values()),
        _ => maximal_2d(f.values(), f.grid().cells_per_axis()),
    };
    ScalarField::new(f.grid(), out)
}

/// For each cell i: max over a <= i <= b of (P[b+1] - P[a]) / (b - a + 1),
/// where P is the prefix-sum array. For a fixed left endpoint a the inner
/// quantity max_{b >= i} avg(a, b) is a suffix maximum, computed right to
/// left in one pass.
fn maximal_1d(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + values[i];
    }
    let sweep = |range: std::ops::Range<usize>| {
        let mut best = vec![0.0f64; n];
        for a in range {
            let mut suffix = f64::NEG_INFINITY;
            for i in (a..n).rev() {
                // singleton window taken exactly so Mf >= f holds pointwise
                let avg = if i == a {
                    values[a]
                } else {
                    (prefix[i + 1] - prefix[a]) / ((i + 1 - a) as f64)
                };
                if avg > suffix {
                    suffix = avg;
                }
                if suffix > best[i] {
                    best[i] = suffix;
                }
            }
        }
        best
    };
    if n < 512 {
        return sweep(0..n);
    }
    let chunk = n.div_ceil(rayon::current_num_threads().max(1));
    (0..n)
        .into_par_iter()
        .step_by(chunk)
        .map(|start| sweep(start..(start + chunk).min(n)))
        .reduce(
            || vec![0.0f64; n],
            |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(&part) {
                    if *p > *a {
                        *a = *p;
                    }
                }
                acc
            },
        )
}

/// Per dyadic side s: window means via 2D prefix sums, then a clamped
/// sliding max over positions along rows and columns.
fn maximal_2d(values: &[f64], n: usize) -> Vec<f64> {
    let mut prefix = vec![0.0; (n + 1) * (n + 1)];
    for i in 0..n {
        for j in 0..n {
            prefix[(i + 1) * (n + 1) + j + 1] =
                values[i * n + j] + prefix[i * (n + 1) + j + 1] + prefix[(i + 1) * (n + 1) + j]
                    - prefix[i * (n + 1) + j];
        }
    }
    let box_sum = |i0: usize, j0: usize, i1: usize, j1: usize| -> f64 {
        prefix[i1 * (n + 1) + j1] - prefix[i0 * (n + 1) + j1] - prefix[i1 * (n + 1) + j0]
            + prefix[i0 * (n + 1) + j0]
    };

    let mut best = vec![0.0f64; n * n];
    for side in WindowFamily::dyadic_sides(n) {
        let w = n - side + 1;
        let area = (side * side) as f64;
        let mut means = vec![0.0f64; w * w];
        if side == 1 {
            means.copy_from_slice(values);
        } else {
            for pi in 0..w {
                for pj in 0..w {
                    means[pi * w + pj] = box_sum(pi, pj, pi + side, pj + side) / area;
                }
            }
        }
        // rowmax[pi][cj] = max over positions pj covering column cj
        let mut rowmax = vec![0.0f64; w * n];
        for pi in 0..w {
            sliding_cover_max(
                &means[pi * w..(pi + 1) * w],
                side,
                &mut rowmax[pi * n..(pi + 1) * n],
            );
        }
        // out[ci][cj] = max over positions pi covering row ci
        let mut column = vec![0.0f64; w];
        let mut covered = vec![0.0f64; n];
        for cj in 0..n {
            for pi in 0..w {
                column[pi] = rowmax[pi * n + cj];
            }
            sliding_cover_max(&column, side, &mut covered);
            for ci in 0..n {
                let b = &mut best[ci * n + cj];
                if covered[ci] > *b {
                    *b = covered[ci];
                }
            }
        }
    }
    best
}

/// out[c] = max of vals[p] over positions p with p <= c <= p + side - 1,
/// clamped to the valid position range. Monotone-deque sliding maximum.
fn sliding_cover_max(vals: &[f64], side: usize, out: &mut [f64]) {
    let w = vals.len();
    let n = out.len();
    let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    for c in 0..n {
        if c < w {
            while let Some(&back) = deque.back() {
                if vals[back] <= vals[c] {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(c);
        }
        let lo = c.saturating_sub(side - 1);
        while let Some(&front) = deque.front() {
            if front < lo {
                deque.pop_front();
            } else {
                break;
            }
        }
        out[c] = vals[*deque.front().expect("window family covers every cell")];
    }
}

/// Product of two maximal functions: (Mf * Mg)(x), both taken over the same
/// window family.
pub fn m_tensor(f: &ScalarField, g: &ScalarField, windows: &WindowFamily) -> Result<ScalarField> {
    f.check_same_grid(g)?;
    let mf = hl_maximal(f, windows)?;
    let mg = hl_maximal(g, windows)?;
    mf.product(&mg)
}

/// Symmetric bilinear maximal average in 1D:
///
///   sup over radii r = h, 2h, ..., R of the average of
///   |f(x - y)| |g(x + y)| over the cells with |y| <= r,
///
/// with f and g extended by zero outside the grid. The average divides by
/// the number of covered offsets (2k + 1 for radius kh).
pub fn calderon_maximal_1d(f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
    f.check_same_grid(g)?;
    if f.grid().dimension() != 1 {
        return Err(Error::RequiresOneDim);
    }
    let n = f.grid().cells_per_axis();
    let max_k = n / 2;
    let fv = f.values();
    let gv = g.values();
    let at = |v: &[f64], i: isize| -> f64 {
        if i < 0 || i >= n as isize {
            0.0
        } else {
            v[i as usize]
        }
    };
    let out: Vec<f64> = (0..n as isize)
        .map(|i| {
            let mut sum = fv[i as usize] * gv[i as usize];
            let mut best = 0.0f64;
            for k in 1..=max_k as isize {
                sum += at(fv, i - k) * at(gv, i + k) + at(fv, i + k) * at(gv, i - k);
                let avg = sum / (2 * k + 1) as f64;
                if avg > best {
                    best = avg;
                }
            }
            best
        })
        .collect();
    ScalarField::new(f.grid(), out)
}
