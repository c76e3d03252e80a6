//! Property tests over generated fields and weights.

use proptest::prelude::*;

use mfold_core::{
    lorentz_p1_norm, lorentz_pinf_norm, lp_norm, rearrangement, Grid, ScalarField, WeightField,
};

fn field_values(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..50.0, len)
}

fn weight_values(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..20.0, len)
}

proptest! {
    #[test]
    fn norms_homogeneous(
        fv in field_values(24),
        wv in weight_values(24),
        c in 0.01f64..100.0,
        p in 0.4f64..4.0,
    ) {
        let g = Grid::line(2.0, 24).unwrap();
        let f = ScalarField::new(g, fv).unwrap();
        let w = WeightField::new(g, wv).unwrap();
        let fc = f.scale(c).unwrap();
        for (norm, scaled) in [
            (lorentz_p1_norm(&f, &w, p).unwrap(), lorentz_p1_norm(&fc, &w, p).unwrap()),
            (lorentz_pinf_norm(&f, &w, p).unwrap(), lorentz_pinf_norm(&fc, &w, p).unwrap()),
            (lp_norm(&f, &w, p).unwrap(), lp_norm(&fc, &w, p).unwrap()),
        ] {
            let want = c * norm;
            prop_assert!((scaled - want).abs() <= 1e-12 * want.abs().max(1e-300));
        }
    }

    #[test]
    fn weak_times_p_below_p1(
        fv in field_values(24),
        wv in weight_values(24),
        p in 0.4f64..4.0,
    ) {
        let g = Grid::line(2.0, 24).unwrap();
        let f = ScalarField::new(g, fv).unwrap();
        let w = WeightField::new(g, wv).unwrap();
        let weak = lorentz_pinf_norm(&f, &w, p).unwrap();
        let one = lorentz_p1_norm(&f, &w, p).unwrap();
        prop_assert!(p * weak <= one * (1.0 + 1e-12));
    }

    #[test]
    fn rearrangement_canonical_form(
        fv in field_values(24),
        wv in weight_values(24),
    ) {
        let g = Grid::line(2.0, 24).unwrap();
        let f = ScalarField::new(g, fv).unwrap();
        let w = WeightField::new(g, wv).unwrap();
        let r = rearrangement(&f, &w).unwrap();
        for k in 1..r.step_count() {
            prop_assert!(r.values()[k] < r.values()[k - 1]);
            prop_assert!(r.breakpoints()[k] > r.breakpoints()[k - 1]);
        }
        let total: f64 = w.total();
        prop_assert!((r.total_measure() - total).abs() <= 1e-12 * total);
    }
}
