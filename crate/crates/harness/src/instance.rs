//! A bilinear verification instance: two fields, two weights, two exponents,
//! everything on one grid. The combined exponent p and combined weight
//! w = w1^{p/p1} w2^{p/p2} are always derived, never stored.

use mfold_core::{combined_exponent, combined_weight, Grid, Result, ScalarField, WeightField};

#[derive(Debug, Clone)]
pub struct Instance {
    pub grid: Grid,
    pub f: ScalarField,
    pub g: ScalarField,
    pub w1: WeightField,
    pub w2: WeightField,
    pub p1: f64,
    pub p2: f64,
    pub seed: u64,
}

impl Instance {
    pub fn new(
        f: ScalarField,
        g: ScalarField,
        w1: WeightField,
        w2: WeightField,
        p1: f64,
        p2: f64,
        seed: u64,
    ) -> Result<Self> {
        let grid = f.grid();
        f.check_same_grid(&g)?;
        f.check_same_grid(w1.as_scalar())?;
        f.check_same_grid(w2.as_scalar())?;
        if !(p1 >= 1.0) || !(p2 >= 1.0) || !p1.is_finite() || !p2.is_finite() {
            return Err(mfold_core::Error::BadExponent {
                bound: "1 <= p1, p2 < inf",
                got: p1.min(p2),
            });
        }
        Ok(Self {
            grid,
            f,
            g,
            w1,
            w2,
            p1,
            p2,
            seed,
        })
    }

    /// 1/p = 1/p1 + 1/p2.
    pub fn p(&self) -> f64 {
        combined_exponent(self.p1, self.p2)
    }

    /// w = w1^{p/p1} w2^{p/p2}.
    pub fn combined_weight(&self) -> Result<WeightField> {
        combined_weight(&self.w1, &self.w2, self.p1, self.p2)
    }
}
