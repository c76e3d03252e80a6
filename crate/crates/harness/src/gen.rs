//! Field recipes and seeded corpus generation.
//!
//! Random pieces are keyed by absolute position (unit blocks), so a recipe
//! realized on [-2R, 2R] restricts to the exact function it gives on [-R, R]. That keeps half-width sweeps coherent: growing the domain
//! extends a function instead of resampling it.

use serde::{Deserialize, Serialize};

use mfold_core::rng::{mix_f64, SplitMix64};
use mfold_core::{Error, Grid, Result, ScalarField, WeightField, WeightSpec};

use crate::instance::Instance;

/// Serializable recipe for a nonnegative field on any grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Constant {
        value: f64,
    },
    /// Indicator of the closed box [lo, hi] (coordinates of cell centers).
    IndicatorBox {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// |x|^exponent everywhere.
    Power {
        exponent: f64,
    },
    /// |x|^exponent on |x| >= 1, zero inside the unit ball.
    PowerTail {
        exponent: f64,
    },
    /// Piecewise-constant on unit blocks keyed by absolute position. Levels
    /// are heavy-tailed (u^{-tail} - 1 for uniform u), a `zero_fraction` of
    /// blocks vanish, and an optional `support` half-width zeroes the field
    /// outside [-support, support]^n.
    PiecewiseRandom {
        seed: u64,
        tail: f64,
        zero_fraction: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        support: Option<f64>,
    },
}

impl FieldSpec {
    pub fn realize(&self, grid: Grid) -> Result<ScalarField> {
        match self {
            FieldSpec::Constant { value } => ScalarField::constant(grid, *value),
            FieldSpec::IndicatorBox { lo, hi } => {
                let need = grid.dimension() as usize;
                if lo.len() != need || hi.len() != need {
                    return Err(Error::InvalidParameter(format!(
                        "indicator box needs {need} coordinate(s) per corner"
                    )));
                }
                let lo2 = [lo[0], if need == 2 { lo[1] } else { 0.0 }];
                let hi2 = [hi[0], if need == 2 { hi[1] } else { 0.0 }];
                let cells = grid.cells_in_box(lo2, hi2);
                ScalarField::indicator(grid, &cells)
            }
            FieldSpec::Power { exponent } => {
                let e = *exponent;
                ScalarField::from_fn(grid, move |c| radius(grid, c).powf(e))
            }
            FieldSpec::PowerTail { exponent } => {
                let e = *exponent;
                ScalarField::from_fn(grid, move |c| {
                    let r = radius(grid, c);
                    if r >= 1.0 {
                        r.powf(e)
                    } else {
                        0.0
                    }
                })
            }
            FieldSpec::PiecewiseRandom {
                seed,
                tail,
                zero_fraction,
                support,
            } => {
                if !(*tail >= 0.0) || !(0.0..=1.0).contains(zero_fraction) {
                    return Err(Error::InvalidParameter(
                        "piecewise field requires tail >= 0 and zero_fraction in [0, 1]".into(),
                    ));
                }
                let s = *seed;
                let t = *tail;
                let zf = *zero_fraction;
                let sup = *support;
                ScalarField::from_fn(grid, move |c| {
                    if let Some(sup) = sup {
                        if c[0].abs() > sup || (grid.dimension() == 2 && c[1].abs() > sup) {
                            return 0.0;
                        }
                    }
                    let bx = c[0].floor() as i64;
                    let by = if grid.dimension() == 2 {
                        c[1].floor() as i64
                    } else {
                        0
                    };
                    if mix_f64(s ^ 0x5EED, &[bx, by]) < zf {
                        return 0.0;
                    }
                    let u = mix_f64(s, &[bx, by]).max(1e-4);
                    u.powf(-t) - 1.0 + mix_f64(s ^ 0xF00D, &[bx, by])
                })
            }
        }
    }
}

fn radius(grid: Grid, c: [f64; 2]) -> f64 {
    match grid.dimension() {
        1 => c[0].abs(),
        _ => c[0].hypot(c[1]),
    }
}

/// Heavy-tailed piecewise field with cell-level granularity, for randomized
/// lemma suites on fixed grids.
pub fn random_field(grid: Grid, rng: &mut SplitMix64) -> Result<ScalarField> {
    let cells = grid.cell_count();
    let mut values = Vec::with_capacity(cells);
    while values.len() < cells {
        let run = 1 + rng.below(cells / 6 + 1);
        let level = if rng.next_f64() < 0.2 {
            0.0
        } else {
            rng.next_f64().max(1e-4).powf(-0.75) - 1.0 + rng.next_f64()
        };
        for _ in 0..run.min(cells - values.len()) {
            values.push(level);
        }
    }
    ScalarField::new(grid, values)
}

/// Random union of cell runs (roughly `density` of the grid).
pub fn random_cell_subset(grid: Grid, rng: &mut SplitMix64, density: f64) -> Vec<usize> {
    let cells = grid.cell_count();
    let mut member = vec![false; cells];
    let mut covered = 0usize;
    let target = ((cells as f64 * density) as usize).min(cells);
    while covered < target {
        let start = rng.below(cells);
        let run = 1 + rng.below(cells / 8 + 1);
        for slot in member[start..(start + run).min(cells)].iter_mut() {
            if !*slot {
                *slot = true;
                covered += 1;
            }
        }
    }
    member
        .iter()
        .enumerate()
        .filter_map(|(i, &m)| if m { Some(i) } else { None })
        .collect()
}

/// Bounded-level random weight (levels log-uniform in [1, ratio]).
pub fn random_weight(grid: Grid, rng: &mut SplitMix64, ratio: f64) -> Result<WeightField> {
    let spec = WeightSpec::PiecewiseRandom {
        seed: rng.next_u64(),
        level_min: 1.0,
        level_max: ratio,
    };
    // cell-level granularity on top of the block structure
    let base = spec.realize(grid)?;
    let values = base
        .values()
        .iter()
        .map(|&v| v * (rng.next_f64() * 2f64.ln()).exp())
        .collect();
    WeightField::new(grid, values)
}

/// One seeded instance for the randomized inequality suites: mixed 1D/2D
/// grids, heavy-tailed fields, piecewise weights with level ratio <= 16 and
/// an occasional power weight.
pub fn random_instance(seed: u64, p_lo: f64, p_hi: f64) -> Result<Instance> {
    let mut rng = SplitMix64::new(seed.wrapping_mul(0x9E37).wrapping_add(seed));
    let grid = if rng.next_f64() < 0.7 {
        Grid::line(rng.uniform(0.5, 6.0), 2 * (8 + rng.below(25)))?
    } else {
        Grid::square(rng.uniform(0.5, 3.0), 2 * (3 + rng.below(6)))?
    };
    let f = random_field(grid, &mut rng)?;
    let g = random_field(grid, &mut rng)?;
    let w1 = random_weight_mixed(grid, &mut rng)?;
    let w2 = random_weight_mixed(grid, &mut rng)?;
    let p1 = rng.uniform(p_lo, p_hi);
    let p2 = rng.uniform(p_lo, p_hi);
    Instance::new(f, g, w1, w2, p1, p2, seed)
}

fn random_weight_mixed(grid: Grid, rng: &mut SplitMix64) -> Result<WeightField> {
    let roll = rng.next_f64();
    if roll < 0.15 {
        WeightField::constant(grid, rng.uniform(0.1, 10.0))
    } else if roll < 0.3 {
        WeightSpec::Power {
            exponent: rng.uniform(-0.8, 1.5),
        }
        .realize(grid)
    } else {
        random_weight(grid, rng, 16.0)
    }
}
