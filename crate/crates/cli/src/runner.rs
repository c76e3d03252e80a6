//! Two-phase manifest execution: validate every task first (no partial
//! outputs on invalid input), then run them in order.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};

use mfold_core::io::fmt_sig15;
use mfold_core::rng::SplitMix64;
use mfold_core::{
    a1_constant, ap_constant, apr_constant, calderon_maximal_1d, cube_comparability, hl_maximal,
    m_tensor, rh_constant, Grid, ScalarField, WeightField, WeightSpec, WindowFamily,
};
use mfold_harness::checks::cube_tests::{CubeInput, CubeOutput, CubeTestConfig};
use mfold_harness::output::{write_plotdata, write_reports_csv, write_summary_json};
use mfold_harness::{
    check_char_holder, check_endpoint_half, check_indicator_product_bound, check_kolmogorov,
    check_necessity, check_norm_domination, check_restricted_cube_test, check_strong_cube_test,
    check_weak_holder, estimate_bilinear_norm, gen, necessity_witness_instance, CheckSummary,
    FieldSpec, Instance, NecessityConfig, SweepRow, VerificationReport,
};

use crate::manifest::{
    ConstantWhich, MaximalOp, RunManifest, SweepQuantity, Task, TaskAction, VerifyParams,
};

/// Outcome of a full run: true when every verification report passed.
pub struct RunOutcome {
    pub all_passed: bool,
    pub failed_checks: Vec<String>,
}

pub fn parse_manifest(path: &Path) -> anyhow::Result<RunManifest> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read manifest {}", path.display()))?;
    let manifest: RunManifest = serde_json::from_str(&text)
        .map_err(|e| anyhow!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))?;
    Ok(manifest)
}

pub fn run_manifest(
    manifest: &RunManifest,
    seed_override: Option<u64>,
) -> anyhow::Result<RunOutcome> {
    validate(manifest)?;
    let mut all_passed = true;
    let mut failed = Vec::new();
    for (idx, task) in manifest.tasks.iter().enumerate() {
        let grid = task.grid.as_ref().unwrap_or(&manifest.grid).build()?;
        let seed = seed_override.or(task.seed).unwrap_or(0);
        let reports = execute_task(task, grid, seed)
            .with_context(|| format!("task[{idx}] ({})", task.output.display()))?;
        for summary in reports {
            if !summary.pass {
                all_passed = false;
                failed.push(summary.check.clone());
            }
        }
    }
    Ok(RunOutcome {
        all_passed,
        failed_checks: failed,
    })
}

fn validate(manifest: &RunManifest) -> anyhow::Result<()> {
    if manifest.version != "1" {
        bail!("unsupported manifest version {:?}", manifest.version);
    }
    manifest.grid.build().context("default grid")?;
    for (idx, task) in manifest.tasks.iter().enumerate() {
        let fail = |msg: String| -> anyhow::Result<()> { bail!("task[{idx}]: {msg}") };
        if let Some(g) = &task.grid {
            g.build().with_context(|| format!("task[{idx}] grid"))?;
        }
        match &task.action {
            TaskAction::Verify(params) => {
                if task.seed.is_none() {
                    return fail("verify tasks require a seed".into());
                }
                validate_verify(params).map_err(|e| anyhow!("task[{idx}]: {e}"))?;
            }
            TaskAction::Counterexample {
                p1,
                p2,
                resolution,
                radii,
            } => {
                if !(*p1 > 0.0 && *p2 > 0.0) {
                    return fail("counterexample requires p1, p2 > 0".into());
                }
                if !(*resolution > 0.0) {
                    return fail(format!("bad resolution {resolution}"));
                }
                if radii.is_empty() || radii.iter().any(|&r| !(r > 1.0)) {
                    return fail("radii must be nonempty and exceed 1".into());
                }
            }
            TaskAction::Sweep {
                quantity,
                resolution,
                radii,
            } => {
                if !(*resolution > 0.0) {
                    return fail(format!("bad resolution {resolution}"));
                }
                if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0)) {
                    return fail("radii must be nonempty and positive".into());
                }
                if matches!(quantity, SweepQuantity::EndpointRatio { .. }) && task.seed.is_none() {
                    return fail("randomized sweeps require a seed".into());
                }
            }
            TaskAction::Constant { which, p, .. } => {
                let needs_p = !matches!(which, ConstantWhich::A1);
                if needs_p && p.is_none() {
                    return fail("this constant requires an exponent p".into());
                }
            }
            TaskAction::Norm { p, .. } => {
                if !(*p > 0.0) {
                    return fail(format!("norm exponent must be positive, got {p}"));
                }
            }
            TaskAction::Maximal { op, field2, .. } => {
                if matches!(op, MaximalOp::Tensor | MaximalOp::Calderon) && field2.is_none() {
                    return fail("this operator needs a second field".into());
                }
            }
            TaskAction::Comparability { p1, p2, .. } => {
                if !(*p1 > 0.0 && *p2 > 0.0) {
                    return fail("comparability requires p1, p2 > 0".into());
                }
            }
        }
    }
    Ok(())
}

fn validate_verify(params: &VerifyParams) -> anyhow::Result<()> {
    match params {
        VerifyParams::CharHolder {
            instances,
            p_lo,
            p_hi,
        }
        | VerifyParams::WeakHolder {
            instances,
            p_lo,
            p_hi,
            ..
        } => {
            if *instances == 0 {
                bail!("instances must be positive");
            }
            if !(1.0 <= *p_lo && p_lo <= p_hi) {
                bail!("need 1 <= p_lo <= p_hi");
            }
            if let VerifyParams::WeakHolder { deltas, .. } = params {
                if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
                    bail!("deltas must be nonempty and lie in (0, 1)");
                }
            }
            Ok(())
        }
        VerifyParams::Kolmogorov {
            instances,
            cells,
            pairs,
        } => {
            if *instances == 0 || *cells < 2 || cells % 2 != 0 {
                bail!("kolmogorov needs instances > 0 and an even cell count >= 2");
            }
            for &(p, q) in pairs {
                if !(q > 0.0 && q < p) {
                    bail!("kolmogorov requires 0 < q < p, got q={q}, p={p}");
                }
            }
            Ok(())
        }
        VerifyParams::Necessity {
            p1,
            p2,
            resolution,
            radii,
            ..
        } => {
            if !(*p1 >= 1.0 && *p2 >= 1.0) {
                bail!("necessity requires p1, p2 >= 1");
            }
            if !(*resolution > 0.0) || radii.len() < 2 || radii.iter().any(|&r| !(r > 1.0)) {
                bail!("necessity needs resolution > 0 and at least two radii > 1");
            }
            Ok(())
        }
        VerifyParams::CubeRestricted {
            p1,
            p2,
            corpus,
            band,
            ..
        } => check_cube_params(*p1, *p2, *corpus, *band),
        VerifyParams::CubeStrong {
            p1,
            p2,
            corpus,
            band,
            strong_target,
            ..
        } => {
            check_cube_params(*p1, *p2, *corpus, *band)?;
            if *strong_target && !(*p2 > 1.0) {
                bail!("strong-target cube test requires p2 > 1");
            }
            Ok(())
        }
        VerifyParams::IndicatorProduct {
            instances,
            delta,
            p_lo,
            p_hi,
        } => {
            if *instances == 0 {
                bail!("instances must be positive");
            }
            if !(*delta > 0.0 && *delta < 1.0) {
                bail!("delta must lie in (0, 1)");
            }
            if !(*p_lo > 1.0 && p_lo <= p_hi) {
                bail!("indicator_product requires 1 < p_lo <= p_hi");
            }
            Ok(())
        }
        VerifyParams::Endpoint {
            resolution,
            radii,
            level_ratio,
            max_drift,
        } => {
            if !(*resolution > 0.0) || radii.len() < 2 || radii.iter().any(|&r| !(r > 1.0)) {
                bail!("endpoint needs resolution > 0 and at least two radii > 1");
            }
            if !(*level_ratio >= 1.0) || !(*max_drift > 0.0) {
                bail!("endpoint needs level_ratio >= 1 and max_drift > 0");
            }
            Ok(())
        }
        VerifyParams::Bilinear {
            instances,
            p_lo,
            p_hi,
            ..
        } => {
            if *instances == 0 || !(1.0 <= *p_lo && p_lo <= p_hi) {
                bail!("bilinear needs instances > 0 and 1 <= p_lo <= p_hi");
            }
            Ok(())
        }
    }
}

fn check_cube_params(p1: f64, p2: f64, corpus: usize, band: (f64, f64)) -> anyhow::Result<()> {
    if !(p1 >= 1.0 && p2 >= 1.0) {
        bail!("cube tests require p1, p2 >= 1");
    }
    if corpus == 0 {
        bail!("corpus must be positive");
    }
    if !(band.0 > 0.0 && band.0 <= band.1) {
        bail!("band must satisfy 0 < lo <= hi");
    }
    Ok(())
}

fn open_output(path: &Path) -> anyhow::Result<fs::File> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    fs::File::create(path).with_context(|| format!("creating {}", path.display()))
}

/// Executes one task; returns the summaries of any verification checks it
/// performed (empty for pure computation tasks).
fn execute_task(task: &Task, grid: Grid, seed: u64) -> anyhow::Result<Vec<CheckSummary>> {
    match &task.action {
        TaskAction::Norm {
            field,
            weight,
            p,
            form,
        } => {
            let f = field.realize(grid)?;
            let w = weight.realize(grid)?;
            let value = form.with_p(*p).eval(&f, &w)?;
            let mut out = open_output(&task.output)?;
            writeln!(out, "form,p,value")?;
            writeln!(
                out,
                "{},{},{}",
                form.name(),
                fmt_sig15(*p),
                fmt_sig15(value)
            )?;
            Ok(vec![])
        }
        TaskAction::Maximal { op, field, field2 } => {
            let f = field.realize(grid)?;
            let fam = WindowFamily::for_grid(grid);
            let result = match op {
                MaximalOp::Hl => hl_maximal(&f, &fam)?,
                MaximalOp::Tensor => {
                    let g = field2.as_ref().expect("validated").realize(grid)?;
                    m_tensor(&f, &g, &fam)?
                }
                MaximalOp::Calderon => {
                    let g = field2.as_ref().expect("validated").realize(grid)?;
                    calderon_maximal_1d(&f, &g)?
                }
            };
            let mut out = open_output(&task.output)?;
            mfold_core::io::write_field_csv(&mut out, &result)?;
            Ok(vec![])
        }
        TaskAction::Constant { which, weight, p } => {
            let w = weight.realize(grid)?;
            let fam = WindowFamily::for_grid(grid);
            let report = match which {
                ConstantWhich::Ap => ap_constant(&w, p.expect("validated"), &fam)?,
                ConstantWhich::A1 => a1_constant(&w, &fam)?,
                ConstantWhich::Apr => apr_constant(&w, p.expect("validated"), &fam)?,
                ConstantWhich::Rh => rh_constant(&w, p.expect("validated"), &fam)?,
            };
            let mut out = open_output(&task.output)?;
            writeln!(
                out,
                "constant_name,p,value,witness_lo,witness_hi,family_size"
            )?;
            writeln!(out, "{}", report.csv_row(&grid))?;
            Ok(vec![])
        }
        TaskAction::Comparability {
            weight1,
            weight2,
            p1,
            p2,
        } => {
            let w1 = weight1.realize(grid)?;
            let w2 = weight2.realize(grid)?;
            let fam = WindowFamily::for_grid(grid);
            let rep = cube_comparability(&w1, &w2, *p1, *p2, &fam)?;
            let mut out = open_output(&task.output)?;
            writeln!(out, "p1,p2,min_ratio,max_ratio,family_size")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_sig15(*p1),
                fmt_sig15(*p2),
                fmt_sig15(rep.min_ratio),
                fmt_sig15(rep.max_ratio),
                rep.family_size
            )?;
            Ok(vec![])
        }
        TaskAction::Counterexample {
            p1,
            p2,
            resolution,
            radii,
        } => {
            let rows = mfold_harness::counterexample_sweep(*p1, *p2, *resolution, radii)?;
            let mut out = open_output(&task.output)?;
            write_plotdata(&mut out, &rows)?;
            Ok(vec![])
        }
        TaskAction::Sweep {
            quantity,
            resolution,
            radii,
        } => {
            let rows = run_sweep(quantity, *resolution, radii, seed)?;
            let mut out = open_output(&task.output)?;
            write_plotdata(&mut out, &rows)?;
            Ok(vec![])
        }
        TaskAction::Verify(params) => run_verify(params, grid, seed, &task.output),
    }
}

fn run_sweep(
    quantity: &SweepQuantity,
    resolution: f64,
    radii: &[f64],
    seed: u64,
) -> anyhow::Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let cells = (2 * ((r / resolution).round() as usize)).max(2);
        let grid = Grid::line(r, cells)?;
        let row = match quantity {
            SweepQuantity::Constant { which, weight, p } => {
                let w = weight.realize(grid)?;
                let fam = WindowFamily::for_grid(grid);
                let value = match which {
                    ConstantWhich::Ap => ap_constant(&w, *p, &fam)?.value,
                    ConstantWhich::A1 => a1_constant(&w, &fam)?.value,
                    ConstantWhich::Apr => apr_constant(&w, *p, &fam)?.value,
                    ConstantWhich::Rh => rh_constant(&w, *p, &fam)?.value,
                };
                SweepRow {
                    x: r,
                    lhs: value,
                    rhs: 1.0,
                }
            }
            SweepQuantity::EndpointRatio {
                level_ratio,
                weight_seed,
            } => {
                let corpus = endpoint_corpus(grid, *level_ratio, *weight_seed, seed)?;
                let est = check_endpoint_half(&corpus)?;
                SweepRow {
                    x: r,
                    lhs: est.worst_ratio,
                    rhs: 1.0,
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Endpoint corpus on one grid: the unit-box indicator pair plus two
/// fixed-support random pairs, all with p1 = p2 = 1.
fn endpoint_corpus(
    grid: Grid,
    level_ratio: f64,
    weight_seed: u64,
    seed: u64,
) -> anyhow::Result<Vec<Instance>> {
    let weight = |salt: u64| -> anyhow::Result<WeightField> {
        Ok(if level_ratio == 1.0 {
            WeightField::constant(grid, 1.0)?
        } else {
            WeightSpec::PiecewiseRandom {
                seed: weight_seed ^ salt,
                level_min: 1.0,
                level_max: level_ratio,
            }
            .realize(grid)?
        })
    };
    let cells = grid.cells_in_box([0.0, 0.0], [1.0, 0.0]);
    let chi = ScalarField::indicator(grid, &cells)?;
    let mut corpus = vec![Instance::new(
        chi.clone(),
        chi,
        weight(0)?,
        weight(1)?,
        1.0,
        1.0,
        seed,
    )?];
    for k in 0..2u64 {
        let f = FieldSpec::PiecewiseRandom {
            seed: seed ^ (k.wrapping_mul(0x9E37) + 3),
            tail: 0.5,
            zero_fraction: 0.3,
            support: Some(2.0),
        }
        .realize(grid)?;
        let g = FieldSpec::PiecewiseRandom {
            seed: seed ^ (k.wrapping_mul(0x51F1) + 7),
            tail: 0.5,
            zero_fraction: 0.3,
            support: Some(2.0),
        }
        .realize(grid)?;
        corpus.push(Instance::new(
            f,
            g,
            weight(2 + k)?,
            weight(4 + k)?,
            1.0,
            1.0,
            seed + k,
        )?);
    }
    Ok(corpus)
}

/// Structured function corpus for cube tests: unit-box indicator, the dual
/// witness of w2's worst window, and seeded random fields.
fn cube_corpus(
    grid: Grid,
    w1: &WeightField,
    w2: &WeightField,
    p1: f64,
    p2: f64,
    count: usize,
    seed: u64,
) -> anyhow::Result<Vec<ScalarField>> {
    let cells = grid.cells_in_box([0.0, 0.0], [1.0, 0.0]);
    let mut corpus = vec![ScalarField::indicator(grid, &cells)?];
    let (witness, _) = necessity_witness_instance(grid, w1, w2, p1, p2, seed)?;
    corpus.push(witness.g.clone());
    let mut rng = SplitMix64::new(seed ^ 0xC0FFEE);
    while corpus.len() < count.max(3) {
        corpus.push(
            FieldSpec::PiecewiseRandom {
                seed: rng.next_u64(),
                tail: 0.5,
                zero_fraction: 0.4,
                support: Some(grid.half_width().min(4.0)),
            }
            .realize(grid)?,
        );
    }
    Ok(corpus)
}

fn run_verify(
    params: &VerifyParams,
    grid: Grid,
    seed: u64,
    output: &Path,
) -> anyhow::Result<Vec<CheckSummary>> {
    let name = params.name();
    let reports: Vec<VerificationReport> = match params {
        VerifyParams::CharHolder {
            instances,
            p_lo,
            p_hi,
        } => {
            let mut reports = Vec::with_capacity(*instances);
            for k in 0..*instances {
                let inst_seed = seed.wrapping_add(k as u64);
                let inst = gen::random_instance(inst_seed, *p_lo, *p_hi)?;
                let mut rng = SplitMix64::new(inst_seed ^ 0xE5E7);
                let density = rng.uniform(0.05, 0.6);
                let e = gen::random_cell_subset(inst.grid, &mut rng, density);
                reports.push(check_char_holder(&e, None, &inst)?);
            }
            reports
        }
        VerifyParams::WeakHolder {
            instances,
            deltas,
            p_lo,
            p_hi,
        } => {
            let mut reports = Vec::with_capacity(instances * deltas.len());
            for k in 0..*instances {
                let inst = gen::random_instance(seed.wrapping_add(k as u64), *p_lo, *p_hi)?;
                for &delta in deltas {
                    reports.push(check_weak_holder(&inst, delta)?);
                }
            }
            reports
        }
        VerifyParams::Kolmogorov {
            instances,
            cells,
            pairs,
        } => {
            let small = Grid::line(1.0, *cells)?;
            let mut reports = Vec::new();
            for k in 0..*instances {
                let inst_seed = seed.wrapping_add(k as u64);
                let mut rng = SplitMix64::new(inst_seed);
                let h = gen::random_field(small, &mut rng)?;
                let w = gen::random_weight(small, &mut rng, 8.0)?;
                for &(p, q) in pairs {
                    let [lower, upper] = check_kolmogorov(&h, &w, p, q, inst_seed)?;
                    reports.push(lower);
                    reports.push(upper);
                }
            }
            reports
        }
        VerifyParams::Necessity {
            p1,
            p2,
            resolution,
            radii,
            pointwise_sets,
        } => {
            let cfg = NecessityConfig {
                p1: *p1,
                p2: *p2,
                resolution: *resolution,
                radii: radii.clone(),
                pointwise_sets: *pointwise_sets,
                seed,
            };
            check_necessity(&cfg)?.reports
        }
        VerifyParams::CubeRestricted {
            p1,
            p2,
            weight1,
            weight2,
            corpus,
            band,
            dual_samples,
        } => {
            let w1 = weight1.realize(grid)?;
            let w2 = weight2.realize(grid)?;
            let g_corpus = cube_corpus(grid, &w1, &w2, *p1, *p2, *corpus, seed)?;
            let cfg = CubeTestConfig {
                p1: *p1,
                p2: *p2,
                input: CubeInput::Lorentz1,
                output: CubeOutput::Weak,
                band: *band,
                dual_samples: *dual_samples,
                seed,
            };
            check_restricted_cube_test(&w1, &w2, &cfg, &g_corpus)?.reports
        }
        VerifyParams::CubeStrong {
            p1,
            p2,
            weight1,
            weight2,
            corpus,
            strong_target,
            band,
            dual_samples,
        } => {
            let w1 = weight1.realize(grid)?;
            let w2 = weight2.realize(grid)?;
            let g_corpus = cube_corpus(grid, &w1, &w2, *p1, *p2, *corpus, seed)?;
            let cfg = CubeTestConfig {
                p1: *p1,
                p2: *p2,
                input: CubeInput::Strong,
                output: if *strong_target {
                    CubeOutput::Strong
                } else {
                    CubeOutput::Weak
                },
                band: *band,
                dual_samples: *dual_samples,
                seed,
            };
            let mut reports = check_strong_cube_test(&w1, &w2, &cfg, &g_corpus)?.reports;
            reports.push(check_norm_domination(&g_corpus, &w2, *p2, seed)?);
            reports
        }
        VerifyParams::IndicatorProduct {
            instances,
            delta,
            p_lo,
            p_hi,
        } => {
            let mut sets = Vec::with_capacity(*instances);
            let mut corpus = Vec::with_capacity(*instances);
            for k in 0..*instances {
                let inst_seed = seed.wrapping_add(k as u64);
                let inst = gen::random_instance(inst_seed, *p_lo, *p_hi)?;
                let mut rng = SplitMix64::new(inst_seed ^ 0x7E34);
                let density = rng.uniform(0.1, 0.5);
                sets.push(gen::random_cell_subset(inst.grid, &mut rng, density));
                corpus.push(inst);
            }
            check_indicator_product_bound(&sets, &corpus, *delta)?.reports
        }
        VerifyParams::Endpoint {
            resolution,
            radii,
            level_ratio,
            max_drift,
        } => {
            let mut ratios = Vec::with_capacity(radii.len());
            for &r in radii {
                let cells = (2 * ((r / resolution).round() as usize)).max(2);
                let sweep_grid = Grid::line(r, cells)?;
                let corpus = endpoint_corpus(sweep_grid, *level_ratio, seed ^ 0xBEEF, seed)?;
                ratios.push((r, check_endpoint_half(&corpus)?.worst_ratio));
            }
            ratios
                .windows(2)
                .map(|pair| {
                    VerificationReport::new(
                        "endpoint_drift",
                        seed,
                        (pair[1].1 - pair[0].1).abs(),
                        max_drift * pair[0].1,
                        1.0,
                        format!(
                            "R {} -> {} ratio {} -> {}",
                            pair[0].0, pair[1].0, pair[0].1, pair[1].1
                        ),
                    )
                })
                .collect()
        }
        VerifyParams::Bilinear {
            instances,
            indices,
            p_lo,
            p_hi,
        } => {
            let corpus: Vec<Instance> = (0..*instances)
                .map(|k| gen::random_instance(seed.wrapping_add(k as u64), *p_lo, *p_hi))
                .collect::<mfold_core::Result<_>>()?;
            let est = estimate_bilinear_norm(&corpus, *indices)?;
            // informational: pass means the supremum is finite
            let mut rep = VerificationReport::new(
                "bilinear",
                est.witness_seed,
                est.worst_ratio,
                1.0,
                1.0,
                format!("evaluated={} skipped={}", est.evaluated, est.skipped),
            );
            rep.pass = est.worst_ratio.is_finite();
            vec![rep]
        }
    };

    let summary = CheckSummary::from_reports(name, &reports);
    let mut out = open_output(output)?;
    write_reports_csv(&mut out, &reports)?;
    let summary_path: PathBuf = {
        let mut os = output.as_os_str().to_owned();
        os.push(".summary.json");
        PathBuf::from(os)
    };
    let mut sout = open_output(&summary_path)?;
    write_summary_json(&mut sout, &summary)?;
    Ok(vec![summary])
}
