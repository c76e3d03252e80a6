//! Independent oracles shared by the integration tests. These deliberately
//! avoid the rearrangement code path: the distribution function is evaluated
//! by brute-force filter-and-sum, and the norms are recovered from it by
//! piecewise quadrature / dense sups over y.

use mfold_core::{ScalarField, WeightField};

/// Brute-force lambda(y) = w({f > y}).
pub fn brute_distribution(f: &ScalarField, w: &WeightField, y: f64) -> f64 {
    let vol = f.grid().cell_volume();
    f.values()
        .iter()
        .zip(w.values())
        .filter(|(&fv, _)| fv > y)
        .map(|(_, &wv)| wv * vol)
        .sum()
}

/// Distinct field values, ascending.
pub fn distinct_values(f: &ScalarField) -> Vec<f64> {
    let mut v: Vec<f64> = f.values().to_vec();
    v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v
}

/// p * integral of lambda(y)^{1/p} dy by quadrature: lambda is constant
/// between consecutive distinct values, so sampling one interior point per
/// gap integrates it exactly.
pub fn oracle_p1_norm(f: &ScalarField, w: &WeightField, p: f64) -> f64 {
    let mut knots = distinct_values(f);
    if knots.first().copied() != Some(0.0) {
        knots.insert(0, 0.0);
    }
    let mut acc = 0.0;
    for gap in knots.windows(2) {
        let (lo, hi) = (gap[0], gap[1]);
        let mid = 0.5 * (lo + hi);
        acc += p * brute_distribution(f, w, mid).powf(1.0 / p) * (hi - lo);
    }
    acc
}

/// sup_y y * lambda(y)^{1/p} over a dense y-grid that includes points just
/// below every jump.
pub fn oracle_pinf_norm(f: &ScalarField, w: &WeightField, p: f64) -> f64 {
    let top = f.max_value();
    if top == 0.0 {
        return 0.0;
    }
    let mut samples: Vec<f64> = distinct_values(f)
        .into_iter()
        .filter(|&v| v > 0.0)
        .map(|v| v * (1.0 - 1e-12))
        .collect();
    for k in 1..512 {
        samples.push(top * k as f64 / 512.0);
    }
    samples
        .into_iter()
        .map(|y| y * brute_distribution(f, w, y).powf(1.0 / p))
        .fold(0.0, f64::max)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
