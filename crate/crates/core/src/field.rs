//! Sampled functions and weights on a grid.
//!
//! A `ScalarField` holds one finite nonnegative value per cell: the absolute
//! value is taken at ingestion, since every operator downstream consumes |f|.
//! A `WeightField` is a strictly positive field interpreted as the density of
//! a measure w(F) = sum over F of w_i h^n.

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    /// Builds a field from raw samples; signs are dropped.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(Error::LengthMismatch {
                got: values.len(),
                expected: grid.cell_count(),
            });
        }
        let mut values = values;
        for (idx, v) in values.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { idx, value: *v });
            }
            *v = v.abs();
        }
        Ok(Self { grid, values })
    }

    /// Field evaluated at cell centers.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Result<Self> {
        let values = (0..grid.cell_count())
            .map(|idx| f(grid.center(idx)))
            .collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.cell_count()])
    }

    /// Indicator of a cell subset.
    pub fn indicator(grid: Grid, cells: &[usize]) -> Result<Self> {
        let mut values = vec![0.0; grid.cell_count()];
        for &idx in cells {
            if idx >= values.len() {
                return Err(Error::IndexOutOfRange {
                    idx,
                    cells: values.len(),
                });
            }
            values[idx] = 1.0;
        }
        Self::new(grid, values)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(v))
    }

    /// Pointwise product, requiring a shared grid.
    pub fn product(&self, other: &ScalarField) -> Result<ScalarField> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        ScalarField::new(self.grid, values)
    }

    /// The field restricted to a cell subset (zero elsewhere).
    pub fn masked(&self, cells: &[usize]) -> Result<ScalarField> {
        let mut values = vec![0.0; self.values.len()];
        for &idx in cells {
            if idx >= values.len() {
                return Err(Error::IndexOutOfRange {
                    idx,
                    cells: values.len(),
                });
            }
            values[idx] = self.values[idx];
        }
        ScalarField::new(self.grid, values)
    }

    /// Pointwise power |f|^e; requires the result to stay finite.
    pub fn powf(&self, e: f64) -> Result<ScalarField> {
        let values = self.values.iter().map(|&v| v.powf(e)).collect();
        ScalarField::new(self.grid, values)
    }

    pub fn scale(&self, c: f64) -> Result<ScalarField> {
        let values = self.values.iter().map(|&v| c * v).collect();
        ScalarField::new(self.grid, values)
    }

    pub fn check_same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    inner: ScalarField,
}

impl WeightField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        for (idx, &v) in values.iter().enumerate() {
            if !(v > 0.0) {
                return Err(Error::NonPositiveWeight { idx, value: v });
            }
        }
        let inner = ScalarField::new(grid, values)?;
        Ok(Self { inner })
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Result<Self> {
        let values = (0..grid.cell_count())
            .map(|idx| f(grid.center(idx)))
            .collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.cell_count()])
    }

    pub fn grid(&self) -> Grid {
        self.inner.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.inner.values()
    }

    pub fn as_scalar(&self) -> &ScalarField {
        &self.inner
    }

    /// Total measure of the grid.
    pub fn total(&self) -> f64 {
        let vol = self.grid().cell_volume();
        self.values().iter().sum::<f64>() * vol
    }

    pub fn scale(&self, c: f64) -> Result<WeightField> {
        WeightField::new(self.grid(), self.values().iter().map(|&v| c * v).collect())
    }

    pub fn powf(&self, e: f64) -> Result<WeightField> {
        WeightField::new(
            self.grid(),
            self.values().iter().map(|&v| v.powf(e)).collect(),
        )
    }

    /// w1^a * w2^b on a shared grid.
    pub fn combine(w1: &WeightField, a: f64, w2: &WeightField, b: f64) -> Result<WeightField> {
        w1.as_scalar().check_same_grid(w2.as_scalar())?;
        let values = w1
            .values()
            .iter()
            .zip(w2.values())
            .map(|(&x, &y)| x.powf(a) * y.powf(b))
            .collect();
        WeightField::new(w1.grid(), values)
    }
}

/// Measure of a cell subset: sum of w_i h^n over the subset. Cells must be
/// distinct; an empty subset has measure zero.
pub fn weighted_measure(w: &WeightField, cells: &[usize]) -> Result<f64> {
    let count = w.grid().cell_count();
    let mut acc = 0.0;
    for &idx in cells {
        if idx >= count {
            return Err(Error::IndexOutOfRange { idx, cells: count });
        }
        acc += w.values()[idx];
    }
    Ok(acc * w.grid().cell_volume())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ingestion_drops_sign_and_rejects_nan() {
        let g = Grid::line(1.0, 4).unwrap();
        let f = ScalarField::new(g, vec![-1.0, 2.0, -3.0, 0.0]).unwrap();
        assert_eq!(f.values(), &[1.0, 2.0, 3.0, 0.0]);
        assert!(ScalarField::new(g, vec![f64::NAN, 0.0, 0.0, 0.0]).is_err());
        assert!(ScalarField::new(g, vec![f64::INFINITY, 0.0, 0.0, 0.0]).is_err());
        assert!(ScalarField::new(g, vec![0.0; 3]).is_err());
    }

    #[test]
    fn weights_must_be_positive() {
        let g = Grid::line(1.0, 4).unwrap();
        assert!(WeightField::new(g, vec![1.0, 2.0, 0.0, 1.0]).is_err());
        assert!(WeightField::new(g, vec![1.0, 2.0, -1.0, 1.0]).is_err());
        assert!(WeightField::new(g, vec![1.0; 4]).is_ok());
    }

    #[test]
    fn lebesgue_measure_of_box() {
        // w == 1 on [-1,1]: total measure 2^n.
        let g1 = Grid::line(1.0, 8).unwrap();
        let w1 = WeightField::constant(g1, 1.0).unwrap();
        let all: Vec<usize> = (0..g1.cell_count()).collect();
        assert!((weighted_measure(&w1, &all).unwrap() - 2.0).abs() < 1e-12);

        let g2 = Grid::square(1.0, 8).unwrap();
        let w2 = WeightField::constant(g2, 1.0).unwrap();
        let all: Vec<usize> = (0..g2.cell_count()).collect();
        assert!((weighted_measure(&w2, &all).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn empty_subset_has_zero_measure() {
        let g = Grid::line(1.0, 4).unwrap();
        let w = WeightField::constant(g, 3.0).unwrap();
        assert_eq!(weighted_measure(&w, &[]).unwrap(), 0.0);
    }

    #[test]
    fn subset_measure_matches_direct_sum() {
        // Oracle: re-summation over the subset in a separate loop shape.
        let g = Grid::line(2.0, 16).unwrap();
        let mut rng = crate::rng::SplitMix64::new(99);
        let values: Vec<f64> = (0..16).map(|_| rng.uniform(0.1, 5.0)).collect();
        let w = WeightField::new(g, values.clone()).unwrap();
        let subset = vec![0, 3, 4, 9, 15];
        let mut oracle = 0.0;
        for (i, &v) in values.iter().enumerate() {
            if subset.contains(&i) {
                oracle += v * g.cell_volume();
            }
        }
        let got = weighted_measure(&w, &subset).unwrap();
        assert!((got - oracle).abs() <= 1e-15 * oracle.abs());
    }
}
