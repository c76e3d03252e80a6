//! Two-sided Kolmogorov comparison between the weak quasi-norm and the
//! set-supremum of truncated strong norms:
//!
//!   || h ||_{L^{p,inf}(w)}  <=  S  <=  (p / (p - q))^{1/q} || h ||_{L^{p,inf}(w)},
//!
//! where S = sup over sets A of || h chi_A ||_{L^q(w)} w(A)^{1/p - 1/q},
//! 0 < q < p. On grids with at most 16 cells the supremum runs over all
//! 2^N - 1 nonempty subsets; on larger grids it is restricted to superlevel
//! sets {h >= v}, which witness the lower bound exactly.

use mfold_core::{lorentz_pinf_norm, Error, Result, ScalarField, WeightField};

use crate::report::VerificationReport;

/// Largest cell count for which the subset supremum is exhaustive.
pub const EXHAUSTIVE_CELL_LIMIT: usize = 16;

pub fn check_kolmogorov(
    h: &ScalarField,
    w: &WeightField,
    p: f64,
    q: f64,
    seed: u64,
) -> Result<[VerificationReport; 2]> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::BadExponent {
            bound: "p > 0",
            got: p,
        });
    }
    if !(q > 0.0 && q < p) {
        return Err(Error::InvalidParameter(format!(
            "kolmogorov requires 0 < q < p, got q={q}, p={p}"
        )));
    }
    h.check_same_grid(w.as_scalar())?;
    let cells = h.grid().cell_count();
    let vol = h.grid().cell_volume();
    let exponent = 1.0 / p - 1.0 / q;

    let term = |members: &dyn Fn(usize) -> bool| -> f64 {
        let mut norm_q = 0.0;
        let mut measure = 0.0;
        for i in 0..cells {
            if members(i) {
                norm_q += h.values()[i].powf(q) * w.values()[i] * vol;
                measure += w.values()[i] * vol;
            }
        }
        if measure == 0.0 {
            return 0.0;
        }
        norm_q.powf(1.0 / q) * measure.powf(exponent)
    };

    let sup = if cells <= EXHAUSTIVE_CELL_LIMIT {
        let mut best = 0.0f64;
        for mask in 1u32..(1u32 << cells) {
            best = best.max(term(&|i| mask & (1 << i) != 0));
        }
        best
    } else {
        let mut levels: Vec<f64> = h.values().to_vec();
        levels.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        levels.dedup();
        let mut best = 0.0f64;
        for &v in levels.iter().filter(|&&v| v > 0.0) {
            best = best.max(term(&|i| h.values()[i] >= v));
        }
        best
    };

    let weak = lorentz_pinf_norm(h, w, p)?;
    let strategy = if cells <= EXHAUSTIVE_CELL_LIMIT {
        "exhaustive"
    } else {
        "superlevel"
    };
    let detail = format!("p={p} q={q} cells={cells} strategy={strategy}");
    let lower = VerificationReport::new("kolmogorov_lower", seed, weak, sup, 1.0, detail.clone());
    let upper = VerificationReport::new(
        "kolmogorov_upper",
        seed,
        sup,
        weak,
        (p / (p - q)).powf(1.0 / q),
        detail,
    );
    Ok([lower, upper])
}
