//! Window-localized boundedness tests for the maximal operator, and the
//! indicator-times-function bound for the 2-fold product.
//!
//! The cube test sweeps every window Q and corpus function g and measures
//!
//!   K_cube = max over (Q, g) of
//!            || chi_Q M g ||_out(w) / ( w1(Q)^{1/p1} * || g ||_in(w2) ),
//!
//! comparing it against the matching weight constant of w2: the restricted
//! constant [w2]_{A_{p2}^R} when the input norm is L^{p2,1}, the Muckenhoupt
//! constant [w2]_{A_{p2}} when it is L^{p2}. Both quantities are finite
//! together; the equivalence is checked as a two-sided band.

use rayon::prelude::*;

use mfold_core::rng::SplitMix64;
use mfold_core::{
    ap_constant, apr_constant, hl_maximal, lorentz_p1_norm, lorentz_pinf_norm, lp_norm, m_tensor,
    weighted_measure, Error, Result, ScalarField, WeightField, Window, WindowFamily,
};

use crate::checks::holder::weak_holder_constant;
use crate::instance::Instance;
use crate::report::VerificationReport;

/// Input norm of the cube test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeInput {
    /// || g ||_{L^{p2,1}(w2)}, compared against [w2]_{A_{p2}^R}.
    Lorentz1,
    /// || g ||_{L^{p2}(w2)}, compared against [w2]_{A_{p2}}.
    Strong,
}

/// Output norm of the cube test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeOutput {
    /// || chi_Q M g ||_{L^{p,inf}(w)}.
    Weak,
    /// || chi_Q M g ||_{L^p(w)} (requires p2 > 1 with strong input).
    Strong,
}

#[derive(Debug, Clone)]
pub struct CubeTestConfig {
    pub p1: f64,
    pub p2: f64,
    pub input: CubeInput,
    pub output: CubeOutput,
    /// Accepted band for K_cube / K_weight, both directions.
    pub band: (f64, f64),
    /// Windows sampled for the dual-witness pointwise check.
    pub dual_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CubeTestOutcome {
    pub k_cube: f64,
    pub k_weight: f64,
    pub witness: Window,
    pub reports: Vec<VerificationReport>,
}

/// Restricted-input cube test: the window-localized form of the
/// restricted-class equivalence.
pub fn check_restricted_cube_test(
    w1: &WeightField,
    w2: &WeightField,
    cfg: &CubeTestConfig,
    g_corpus: &[ScalarField],
) -> Result<CubeTestOutcome> {
    if cfg.input != CubeInput::Lorentz1 || cfg.output != CubeOutput::Weak {
        return Err(Error::InvalidParameter(
            "restricted cube test fixes L^{p2,1} input and weak output".into(),
        ));
    }
    cube_test(w1, w2, cfg, g_corpus, "cube_restricted")
}

/// Strong-input cube tests; the strong-output variant needs p2 > 1.
pub fn check_strong_cube_test(
    w1: &WeightField,
    w2: &WeightField,
    cfg: &CubeTestConfig,
    g_corpus: &[ScalarField],
) -> Result<CubeTestOutcome> {
    if cfg.input != CubeInput::Strong {
        return Err(Error::InvalidParameter(
            "strong cube test requires the L^{p2} input".into(),
        ));
    }
    if cfg.output == CubeOutput::Strong && !(cfg.p2 > 1.0) {
        return Err(Error::InvalidParameter(
            "strong-target cube test requires p2 > 1".into(),
        ));
    }
    let name = if cfg.output == CubeOutput::Strong {
        "cube_strong_target"
    } else {
        "cube_weak_target"
    };
    cube_test(w1, w2, cfg, g_corpus, name)
}

fn cube_test(
    w1: &WeightField,
    w2: &WeightField,
    cfg: &CubeTestConfig,
    g_corpus: &[ScalarField],
    name: &str,
) -> Result<CubeTestOutcome> {
    if g_corpus.is_empty() {
        return Err(Error::InvalidParameter("empty function corpus".into()));
    }
    let grid = w1.grid();
    w1.as_scalar().check_same_grid(w2.as_scalar())?;
    let fam = WindowFamily::for_grid(grid);
    let p = mfold_core::combined_exponent(cfg.p1, cfg.p2);
    let w = mfold_core::combined_weight(w1, w2, cfg.p1, cfg.p2)?;
    let vol = grid.cell_volume();

    // max over corpus and windows of the localized ratio
    let per_g: Result<Vec<(f64, usize)>> = g_corpus
        .par_iter()
        .map(|g| {
            let mg = hl_maximal(g, &fam)?;
            let g_norm = match cfg.input {
                CubeInput::Lorentz1 => lorentz_p1_norm(g, w2, cfg.p2)?,
                CubeInput::Strong => lp_norm(g, w2, cfg.p2)?,
            };
            if g_norm == 0.0 {
                return Ok((0.0, usize::MAX));
            }
            let mut best = 0.0f64;
            let mut best_idx = usize::MAX;
            for (idx, window) in fam.iter().enumerate() {
                let cells = window.cells(&grid);
                let w1_q: f64 = cells.iter().map(|&i| w1.values()[i]).sum::<f64>() * vol;
                let masked = mg.masked(&cells)?;
                let out = match cfg.output {
                    CubeOutput::Weak => lorentz_pinf_norm(&masked, &w, p)?,
                    CubeOutput::Strong => lp_norm(&masked, &w, p)?,
                };
                let ratio = out / (w1_q.powf(1.0 / cfg.p1) * g_norm);
                if ratio > best {
                    best = ratio;
                    best_idx = idx;
                }
            }
            Ok((best, best_idx))
        })
        .collect();
    let per_g = per_g?;
    let (k_cube, witness_idx) =
        per_g.iter().fold(
            (0.0f64, usize::MAX),
            |acc, &(v, i)| if v > acc.0 { (v, i) } else { acc },
        );
    let witness = fam
        .iter()
        .nth(if witness_idx == usize::MAX {
            0
        } else {
            witness_idx
        })
        .expect("window family is nonempty");

    let k_weight = match cfg.input {
        CubeInput::Lorentz1 => apr_constant(w2, cfg.p2, &fam)?.value,
        CubeInput::Strong => ap_constant(w2, cfg.p2, &fam)?.value,
    };

    let mut reports = Vec::new();
    let detail = format!(
        "p1={} p2={} band=({},{})",
        cfg.p1, cfg.p2, cfg.band.0, cfg.band.1
    );
    reports.push(VerificationReport::new(
        format!("{name}_upper"),
        cfg.seed,
        k_cube,
        k_weight,
        cfg.band.1,
        detail.clone(),
    ));
    reports.push(VerificationReport::new(
        format!("{name}_lower"),
        cfg.seed,
        k_weight * cfg.band.0,
        k_cube,
        1.0,
        detail.clone(),
    ));

    // dual witness: g = chi_F / w2 on a superlevel set of chi_Q / w2, and
    // the proof step M g >= (mean_Q g) chi_Q pointwise.
    let mut rng = SplitMix64::new(cfg.seed ^ 0xD0A1);
    let mut sample: Vec<Window> = vec![witness];
    let fam_size = fam.len();
    for _ in 0..cfg.dual_samples.saturating_sub(1) {
        let pick = rng.below(fam_size);
        if let Some(win) = fam.iter().nth(pick) {
            sample.push(win);
        }
    }
    let mut violation = 0.0f64;
    for window in sample {
        let cells = window.cells(&grid);
        let dual = dual_witness(w2, &cells, cfg.p2, grid)?;
        let mdual = hl_maximal(&dual, &fam)?;
        let mean_q = cells.iter().map(|&i| dual.values()[i]).sum::<f64>() / cells.len() as f64;
        for &i in &cells {
            violation = violation.max(mean_q - mdual.values()[i]);
        }
    }
    reports.push(VerificationReport::new(
        format!("{name}_dual_witness"),
        cfg.seed,
        violation,
        0.0,
        1.0,
        detail,
    ));

    Ok(CubeTestOutcome {
        k_cube,
        k_weight,
        witness,
        reports,
    })
}

fn dual_witness(
    w2: &WeightField,
    window_cells: &[usize],
    p2: f64,
    grid: mfold_core::Grid,
) -> Result<ScalarField> {
    let vol = grid.cell_volume();
    let mut order: Vec<usize> = window_cells.to_vec();
    order.sort_unstable_by(|&a, &b| w2.values()[a].partial_cmp(&w2.values()[b]).unwrap());
    let inv_dual = if p2 > 1.0 { (p2 - 1.0) / p2 } else { 0.0 };
    let mut cum = 0.0;
    let mut best = f64::NEG_INFINITY;
    let mut cut = w2.values()[order[0]];
    for &j in &order {
        cum += w2.values()[j] * vol;
        let term = cum.powf(inv_dual) / w2.values()[j];
        if term > best {
            best = term;
            cut = w2.values()[j];
        }
    }
    let values = (0..grid.cell_count())
        .map(|i| {
            if window_cells.contains(&i) && w2.values()[i] <= cut {
                1.0 / w2.values()[i]
            } else {
                0.0
            }
        })
        .collect();
    ScalarField::new(grid, values)
}

/// Indicator-times-function bound for the 2-fold product:
///
///   || M chi_E * M g ||_{L^{p,inf}(w)}
///     <= C(p,delta) * K1^delta * K2 * (p1 delta)^delta / p1
///        * || chi_E ||_{L^{p1,1}(w1)} * || g ||_{L^{p2,1}(w2)},
///
/// where K1, K2 are the restricted weak-type constants of M measured on the
/// corpus at exponents p1 * delta and p2. The exponent arithmetic of the
/// indicator reduction, w1(E)^{delta/(p1 delta)} = w1(E)^{1/p1}, is asserted
/// along the way.
#[derive(Debug, Clone)]
pub struct IndicatorProductOutcome {
    pub k1: f64,
    pub k2: f64,
    pub composite_constant: f64,
    pub reports: Vec<VerificationReport>,
    pub worst_ratio: f64,
}

pub fn check_indicator_product_bound(
    sets: &[Vec<usize>],
    instances: &[Instance],
    delta: f64,
) -> Result<IndicatorProductOutcome> {
    if sets.is_empty() || sets.len() != instances.len() {
        return Err(Error::InvalidParameter(
            "indicator-product check needs one set per instance".into(),
        ));
    }
    for inst in instances {
        if !(inst.p1 > 1.0) {
            return Err(Error::InvalidParameter(
                "indicator-product bound requires p1 > 1".into(),
            ));
        }
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0,1), got {delta}"
        )));
    }

    // measured restricted weak-type constants of M on this corpus
    let mut k1 = 0.0f64;
    let mut k2 = 0.0f64;
    for (set, inst) in sets.iter().zip(instances) {
        let fam = WindowFamily::for_grid(inst.grid);
        let p1d = inst.p1 * delta;
        let chi = ScalarField::indicator(inst.grid, set)?;
        let mchi = hl_maximal(&chi, &fam)?;
        let denom1 = lorentz_p1_norm(&chi, &inst.w1, p1d)?;
        if denom1 > 0.0 {
            k1 = k1.max(lorentz_pinf_norm(&mchi, &inst.w1, p1d)? / denom1);
        }
        let mg = hl_maximal(&inst.g, &fam)?;
        let denom2 = lorentz_p1_norm(&inst.g, &inst.w2, inst.p2)?;
        if denom2 > 0.0 {
            k2 = k2.max(lorentz_pinf_norm(&mg, &inst.w2, inst.p2)? / denom2);
        }
    }

    let mut reports = Vec::new();
    let mut worst = 0.0f64;
    let mut composite_any = 0.0;
    for (set, inst) in sets.iter().zip(instances) {
        let fam = WindowFamily::for_grid(inst.grid);
        let p = inst.p();
        let p1d = inst.p1 * delta;
        let c_holder = weak_holder_constant(p, delta)?;
        let composite = c_holder * k1.powf(delta) * k2 * p1d.powf(delta) / inst.p1;
        composite_any = composite;

        // exponent identity of the indicator reduction
        let chi = ScalarField::indicator(inst.grid, set)?;
        let w1e = weighted_measure(&inst.w1, set)?;
        if w1e > 0.0 {
            let via_delta = lorentz_p1_norm(&chi, &inst.w1, p1d)?.powf(delta);
            let direct = p1d.powf(delta) * w1e.powf(1.0 / inst.p1);
            let rel = (via_delta - direct).abs() / direct;
            assert!(
                rel <= 1e-12,
                "exponent identity broke: {via_delta} vs {direct}"
            );
            assert!((delta / p1d - 1.0 / inst.p1).abs() <= 1e-15);
        }

        let tensor = m_tensor(&chi, &inst.g, &fam)?;
        let w = inst.combined_weight()?;
        let lhs = lorentz_pinf_norm(&tensor, &w, p)?;
        let rhs = lorentz_p1_norm(&chi, &inst.w1, inst.p1)?
            * lorentz_p1_norm(&inst.g, &inst.w2, inst.p2)?;
        let rep = VerificationReport::new(
            "indicator_product",
            inst.seed,
            lhs,
            rhs,
            composite,
            format!(
                "p1={} p2={} delta={delta} |E|={}",
                inst.p1,
                inst.p2,
                set.len()
            ),
        );
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
        reports.push(rep);
    }
    Ok(IndicatorProductOutcome {
        k1,
        k2,
        composite_constant: composite_any,
        reports,
        worst_ratio: worst,
    })
}

/// || g ||_{L^{p2}(w2)} <= (1/p2) || g ||_{L^{p2,1}(w2)}: the strong norm is
/// dominated by the normalized downward Lorentz norm; equality at
/// indicators.
pub fn check_norm_domination(
    g_corpus: &[ScalarField],
    w2: &WeightField,
    p2: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let mut worst = 0.0f64;
    for g in g_corpus {
        let strong = lp_norm(g, w2, p2)?;
        let one = lorentz_p1_norm(g, w2, p2)?;
        if one > 0.0 {
            worst = worst.max(p2 * strong / one);
        }
    }
    Ok(VerificationReport::new(
        "norm_domination",
        seed,
        worst,
        1.0,
        1.0,
        format!("p2={p2} corpus={}", g_corpus.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mfold_core::Grid;

    fn flat_setup() -> (WeightField, WeightField, Vec<ScalarField>) {
        let grid = Grid::line(4.0, 48).unwrap();
        let one = WeightField::constant(grid, 1.0).unwrap();
        let mut rng = SplitMix64::new(4);
        let corpus: Vec<ScalarField> = (0..4)
            .map(|_| crate::gen::random_field(grid, &mut rng).unwrap())
            .chain([
                ScalarField::indicator(grid, &grid.cells_in_box([0.0, 0.0], [1.0, 0.0])).unwrap(),
            ])
            .collect();
        (one.clone(), one, corpus)
    }

    #[test]
    fn flat_weights_give_unit_constant_and_finite_cube_test() {
        let (w1, w2, corpus) = flat_setup();
        let cfg = CubeTestConfig {
            p1: 2.0,
            p2: 2.0,
            input: CubeInput::Lorentz1,
            output: CubeOutput::Weak,
            band: (1e-4, 1e4),
            dual_samples: 8,
            seed: 0,
        };
        let out = check_restricted_cube_test(&w1, &w2, &cfg, &corpus).unwrap();
        assert_eq!(out.k_weight, 1.0);
        assert!(out.k_cube.is_finite() && out.k_cube > 0.0);
        for rep in &out.reports {
            assert!(rep.pass, "{} failed: {} vs {}", rep.check, rep.lhs, rep.rhs);
        }
    }

    #[test]
    fn cube_indicator_reports_dominate_set_form() {
        // statement (2) => (3): with E = Q the set report is the cube report.
        // Here: the ratio at any window is at most the swept maximum.
        let (w1, w2, corpus) = flat_setup();
        let grid = w1.grid();
        let fam = WindowFamily::for_grid(grid);
        let cfg = CubeTestConfig {
            p1: 2.0,
            p2: 2.0,
            input: CubeInput::Lorentz1,
            output: CubeOutput::Weak,
            band: (1e-4, 1e4),
            dual_samples: 2,
            seed: 0,
        };
        let out = check_restricted_cube_test(&w1, &w2, &cfg, &corpus).unwrap();
        let g = &corpus[0];
        let mg = hl_maximal(g, &fam).unwrap();
        let w = mfold_core::combined_weight(&w1, &w2, 2.0, 2.0).unwrap();
        let window = fam.iter().nth(17).unwrap();
        let cells = window.cells(&grid);
        let masked = mg.masked(&cells).unwrap();
        let num = lorentz_pinf_norm(&masked, &w, 1.0).unwrap();
        let den = (weighted_measure(&w1, &cells).unwrap()).powf(0.5)
            * lorentz_p1_norm(g, &w2, 2.0).unwrap();
        assert!(num / den <= out.k_cube * (1.0 + 1e-12));
    }

    #[test]
    fn strong_input_variants_pass_on_flat_weights() {
        let (w1, w2, corpus) = flat_setup();
        for output in [CubeOutput::Weak, CubeOutput::Strong] {
            let cfg = CubeTestConfig {
                p1: 2.0,
                p2: 2.0,
                input: CubeInput::Strong,
                output,
                band: (1e-4, 1e4),
                dual_samples: 4,
                seed: 0,
            };
            let out = check_strong_cube_test(&w1, &w2, &cfg, &corpus).unwrap();
            assert_eq!(out.k_weight, 1.0);
            assert!(out.k_cube.is_finite() && out.k_cube > 0.0);
            for rep in &out.reports {
                assert!(rep.pass, "{} failed", rep.check);
            }
        }
    }

    #[test]
    fn strong_target_rejects_p2_one() {
        let (w1, w2, corpus) = flat_setup();
        let cfg = CubeTestConfig {
            p1: 2.0,
            p2: 1.0,
            input: CubeInput::Strong,
            output: CubeOutput::Strong,
            band: (1e-4, 1e4),
            dual_samples: 2,
            seed: 0,
        };
        assert!(check_strong_cube_test(&w1, &w2, &cfg, &corpus).is_err());
    }

    #[test]
    fn norm_domination_holds_on_corpus() {
        let (_, w2, corpus) = flat_setup();
        for p2 in [1.0, 1.5, 2.0, 3.0] {
            let rep = check_norm_domination(&corpus, &w2, p2, 1).unwrap();
            assert!(rep.pass, "p2={p2}: worst ratio {}", rep.lhs);
        }
    }

    #[test]
    fn indicator_product_chain_passes_on_flat_weights() {
        let grid = Grid::line(4.0, 40).unwrap();
        let one = WeightField::constant(grid, 1.0).unwrap();
        let mut rng = SplitMix64::new(6);
        let mut sets = Vec::new();
        let mut instances = Vec::new();
        for seed in 0..10 {
            let set = crate::gen::random_cell_subset(grid, &mut rng, 0.25);
            let g = crate::gen::random_field(grid, &mut rng).unwrap();
            let f = ScalarField::indicator(grid, &set).unwrap();
            sets.push(set);
            instances.push(Instance::new(f, g, one.clone(), one.clone(), 2.0, 2.0, seed).unwrap());
        }
        let out = check_indicator_product_bound(&sets, &instances, 0.75).unwrap();
        assert!(out.k1 > 0.0 && out.k2 > 0.0);
        for rep in &out.reports {
            assert!(
                rep.pass,
                "seed {}: {} > {} * {}",
                rep.seed, rep.lhs, rep.constant, rep.rhs
            );
        }
        assert!(out.worst_ratio.is_finite());
    }

    #[test]
    fn indicator_product_rejects_p1_one() {
        let grid = Grid::line(1.0, 8).unwrap();
        let one = WeightField::constant(grid, 1.0).unwrap();
        let f = ScalarField::indicator(grid, &[1]).unwrap();
        let inst = Instance::new(f.clone(), f, one.clone(), one.clone(), 1.0, 2.0, 0).unwrap();
        assert!(check_indicator_product_bound(&[vec![1]], &[inst], 0.5).is_err());
    }
}
