//! Distribution functions and decreasing rearrangements with respect to a
//! weighted measure.
//!
//! On a grid both objects are exact step functions: the distribution function
//! lambda(y) = w({f > y}) is a finite sum, and the rearrangement is obtained
//! by sorting cell values in decreasing order and accumulating cell measures.
//! Equal values merge into one step, so the step heights are strictly
//! decreasing and the representation is canonical.

use crate::error::Result;
use crate::field::{ScalarField, WeightField};

/// lambda_f^w(y) = w({f > y}). Nonincreasing and right-continuous in y.
pub fn distribution(f: &ScalarField, w: &WeightField, y: f64) -> Result<f64> {
    f.check_same_grid(w.as_scalar())?;
    let vol = f.grid().cell_volume();
    let sum: f64 = f
        .values()
        .iter()
        .zip(w.values())
        .filter(|(&fv, _)| fv > y)
        .map(|(_, &wv)| wv)
        .sum();
    Ok(sum * vol)
}

/// Decreasing rearrangement of f with respect to the measure induced by w,
/// stored as a right-open step function: value `values[k]` on
/// [breakpoints[k], breakpoints[k+1]) with breakpoints[0] = 0.
///
/// The final breakpoint equals the total measure of the grid, and the value
/// is 0 for arguments at or beyond it.
#[derive(Debug, Clone)]
pub struct StepRearrangement {
    /// Right endpoints t_1 < t_2 < ... < t_m = w(grid).
    breakpoints: Vec<f64>,
    /// Strictly decreasing step heights v_1 > ... > v_m >= 0.
    values: Vec<f64>,
}

impl StepRearrangement {
    /// Right endpoints of the steps; `breakpoints()[k]` closes the k-th step.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step_count(&self) -> usize {
        self.values.len()
    }

    /// Total measure of the underlying grid.
    pub fn total_measure(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// f*(t): the height of the step containing t, or 0 past the support.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.values[0];
        }
        // first breakpoint strictly greater than t
        match self.breakpoints.iter().position(|&b| b > t) {
            Some(k) => self.values[k],
            None => 0.0,
        }
    }

    /// Lebesgue measure of {t : f*(t) > y}; equals the distribution function
    /// by equimeasurability.
    pub fn level_measure(&self, y: f64) -> f64 {
        let mut out = 0.0;
        for (k, &v) in self.values.iter().enumerate() {
            if v > y {
                out = self.breakpoints[k];
            }
        }
        out
    }
}

/// Exact rearrangement: sort cell values descending, merge ties, accumulate
/// cell measures.
pub fn rearrangement(f: &ScalarField, w: &WeightField) -> Result<StepRearrangement> {
    f.check_same_grid(w.as_scalar())?;
    let vol = f.grid().cell_volume();
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_unstable_by(|&a, &b| f.values()[b].partial_cmp(&f.values()[a]).unwrap());

    let mut breakpoints = Vec::new();
    let mut values = Vec::new();
    let mut acc = 0.0;
    let mut i = 0;
    while i < order.len() {
        let v = f.values()[order[i]];
        let mut mass = 0.0;
        while i < order.len() && f.values()[order[i]] == v {
            mass += w.values()[order[i]];
            i += 1;
        }
        acc += mass * vol;
        values.push(v);
        breakpoints.push(acc);
    }
    Ok(StepRearrangement {
        breakpoints,
        values,
    })
}
