//! Truncated uniform discretizations of R^n, n in {1, 2}.
//!
//! A grid covers the cube [-R, R]^n with N cells per axis (N even), so the
//! cell side is h = 2R/N and no cell center sits at the origin. Functions and
//! weights are piecewise constant on cells; every integral in this crate is
//! an exact cell sum against the cell volume h^n.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid on [-R, R]^n. The cell side is derived from (R, N) and never
/// stored, so N*h = 2R holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: u8,
    #[serde(rename = "R")]
    half_width: f64,
    #[serde(rename = "N")]
    cells_per_axis: usize,
}

impl Grid {
    pub fn new(n: u8, half_width: f64, cells_per_axis: usize) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::BadDimension(n));
        }
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::BadHalfWidth(half_width));
        }
        if cells_per_axis < 2 || cells_per_axis % 2 != 0 {
            return Err(Error::BadCellCount(cells_per_axis));
        }
        Ok(Self {
            n,
            half_width,
            cells_per_axis,
        })
    }

    pub fn line(half_width: f64, cells_per_axis: usize) -> Result<Self> {
        Self::new(1, half_width, cells_per_axis)
    }

    pub fn square(half_width: f64, cells_per_axis: usize) -> Result<Self> {
        Self::new(2, half_width, cells_per_axis)
    }

    pub fn dimension(&self) -> u8 {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    /// Cell side h = 2R/N.
    pub fn cell_size(&self) -> f64 {
        2.0 * self.half_width / self.cells_per_axis as f64
    }

    /// Cell volume h^n.
    pub fn cell_volume(&self) -> f64 {
        let h = self.cell_size();
        match self.n {
            1 => h,
            _ => h * h,
        }
    }

    /// Total number of cells, N^n.
    pub fn cell_count(&self) -> usize {
        match self.n {
            1 => self.cells_per_axis,
            _ => self.cells_per_axis * self.cells_per_axis,
        }
    }

    /// Center coordinate along one axis.
    pub fn axis_center(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.cell_size()
    }

    /// Flat index of the cell at axis indices (i, j); in 1D `j` is ignored.
    pub fn flat_index(&self, i: usize, j: usize) -> usize {
        match self.n {
            1 => i,
            _ => i * self.cells_per_axis + j,
        }
    }

    /// Axis indices of a flat cell index.
    pub fn axis_indices(&self, idx: usize) -> (usize, usize) {
        match self.n {
            1 => (idx, 0),
            _ => (idx / self.cells_per_axis, idx % self.cells_per_axis),
        }
    }

    /// Cell center; the second coordinate is 0.0 on one-dimensional grids.
    pub fn center(&self, idx: usize) -> [f64; 2] {
        let (i, j) = self.axis_indices(idx);
        match self.n {
            1 => [self.axis_center(i), 0.0],
            _ => [self.axis_center(i), self.axis_center(j)],
        }
    }

    /// Euclidean distance of the cell center from the origin. Strictly
    /// positive: N is even, so no center coincides with 0.
    pub fn center_radius(&self, idx: usize) -> f64 {
        let c = self.center(idx);
        match self.n {
            1 => c[0].abs(),
            _ => c[0].hypot(c[1]),
        }
    }

    /// Indices of all cells whose center lies in the closed box [lo, hi].
    pub fn cells_in_box(&self, lo: [f64; 2], hi: [f64; 2]) -> Vec<usize> {
        (0..self.cell_count())
            .filter(|&idx| {
                let c = self.center(idx);
                let mut inside = c[0] >= lo[0] && c[0] <= hi[0];
                if self.n == 2 {
                    inside = inside && c[1] >= lo[1] && c[1] <= hi[1];
                }
                inside
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(3, 1.0, 4).is_err());
        assert!(Grid::new(1, 0.0, 4).is_err());
        assert!(Grid::new(1, -1.0, 4).is_err());
        assert!(Grid::new(1, 1.0, 3).is_err());
        assert!(Grid::new(1, 1.0, 0).is_err());
    }

    #[test]
    fn one_dim_geometry() {
        let g = Grid::line(1.0, 4).unwrap();
        assert_eq!(g.cell_count(), 4);
        assert!((g.cell_size() - 0.5).abs() < 1e-15);
        assert!((g.axis_center(0) + 0.75).abs() < 1e-15);
        assert!((g.axis_center(3) - 0.75).abs() < 1e-15);
        for idx in 0..4 {
            assert!(g.center_radius(idx) > 0.0);
        }
    }

    #[test]
    fn two_dim_geometry() {
        let g = Grid::square(2.0, 4).unwrap();
        assert_eq!(g.cell_count(), 16);
        assert!((g.cell_volume() - 1.0).abs() < 1e-15);
        let (i, j) = g.axis_indices(7);
        assert_eq!(g.flat_index(i, j), 7);
    }

    #[test]
    fn box_selection_covers_grid() {
        let g = Grid::line(2.0, 8).unwrap();
        let all = g.cells_in_box([-2.0, 0.0], [2.0, 0.0]);
        assert_eq!(all.len(), 8);
        let right = g.cells_in_box([0.0, 0.0], [2.0, 0.0]);
        assert_eq!(right.len(), 4);
    }
}
