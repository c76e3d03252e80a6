//! Reproduction of the divergence that rules out an unweakened Holder
//! inequality for weak Lorentz norms with change of measures.
//!
//! On [-R, R] with fixed resolution h, build
//!   f = |x|^{-n/p1} chi_{|x| >= 1},   g = |x|^{n/p1} chi_{|x| >= 1},
//!   w1 = 1,  w2 = |x|^{-n(1 + p2/p1)} chi_{|x| >= 1} + chi_{|x| < 1},
//! so f g is the indicator of the tail and the combined weight is
//! |x|^{-n} out there. The left side || f g ||_{L^{p,inf}(w)} then grows
//! like (2 ln R)^{1/p} while the right side
//! || f ||_{L^{p1,inf}(w1)} || g ||_{L^{p2,inf}(w2)} stabilizes, so the
//! would-be inequality fails with any constant.

use serde::Serialize;

use mfold_core::{
    combined_exponent, lorentz_pinf_norm, Error, Grid, Result, ScalarField, WeightField, WeightSpec,
};

use crate::gen::FieldSpec;

/// One row of a sweep table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl SweepRow {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

/// Builds the counterexample data on each half-width in `radii` (one
/// dimension only) and returns (R, LHS, RHS) rows.
pub fn counterexample_sweep(
    p1: f64,
    p2: f64,
    resolution: f64,
    radii: &[f64],
) -> Result<Vec<SweepRow>> {
    if !(p1 > 0.0 && p2 > 0.0) {
        return Err(Error::InvalidParameter(
            "counterexample requires p1, p2 > 0".into(),
        ));
    }
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bad resolution {resolution}"
        )));
    }
    if radii.is_empty() {
        return Err(Error::InvalidParameter("empty radius list".into()));
    }
    let p = combined_exponent(p1, p2);
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "half-width must exceed 1, got {r}"
            )));
        }
        let cells = (2 * ((r / resolution).round() as usize)).max(2);
        let grid = Grid::line(r, cells)?;
        let (f, g, w1, w2) = counterexample_data(grid, p1, p2)?;
        let w = WeightSpec::ProductCombine {
            first: Box::new(WeightSpec::Constant { value: 1.0 }),
            second: Box::new(WeightSpec::CounterexampleW2 { p1, p2, n: 1 }),
            p1,
            p2,
        }
        .realize(grid)?;
        let lhs = lorentz_pinf_norm(&f.product(&g)?, &w, p)?;
        let rhs = lorentz_pinf_norm(&f, &w1, p1)? * lorentz_pinf_norm(&g, &w2, p2)?;
        rows.push(SweepRow { x: r, lhs, rhs });
    }
    Ok(rows)
}

/// The structured fields and weights of the counterexample on a given grid.
pub fn counterexample_data(
    grid: Grid,
    p1: f64,
    p2: f64,
) -> Result<(ScalarField, ScalarField, WeightField, WeightField)> {
    let n = grid.dimension() as f64;
    let f = FieldSpec::PowerTail { exponent: -n / p1 }.realize(grid)?;
    let g = FieldSpec::PowerTail { exponent: n / p1 }.realize(grid)?;
    let w1 = WeightField::constant(grid, 1.0)?;
    let w2 = WeightSpec::CounterexampleW2 {
        p1,
        p2,
        n: grid.dimension(),
    }
    .realize(grid)?;
    Ok((f, g, w1, w2))
}
