//! Run manifests: a JSON file describing a grid and an ordered task list.
//! Identical manifests and seeds produce byte-identical outputs.

use std::path::PathBuf;

use serde::Deserialize;

use mfold_core::{Grid, WeightSpec};
use mfold_harness::{BilinearIndices, FieldSpec, NormForm};

#[derive(Debug, Deserialize)]
pub struct RunManifest {
    pub version: String,
    /// Default grid; tasks may override it.
    pub grid: GridSpec,
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct GridSpec {
    pub n: u8,
    #[serde(rename = "R")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub cells: usize,
}

impl GridSpec {
    pub fn build(&self) -> mfold_core::Result<Grid> {
        Grid::new(self.n, self.half_width, self.cells)
    }
}

#[derive(Debug, Deserialize)]
pub struct Task {
    #[serde(flatten)]
    pub action: TaskAction,
    pub output: PathBuf,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum TaskAction {
    /// One quasi-norm value: CSV `form,p,value`.
    Norm {
        field: FieldSpec,
        weight: WeightSpec,
        p: f64,
        form: NormForm,
    },
    /// A maximal-operator output field in field-CSV format.
    Maximal {
        op: MaximalOp,
        field: FieldSpec,
        #[serde(default)]
        field2: Option<FieldSpec>,
    },
    /// One weight constant: CSV `constant_name,p,value,witness_lo,witness_hi,family_size`.
    Constant {
        which: ConstantWhich,
        weight: WeightSpec,
        #[serde(default)]
        p: Option<f64>,
    },
    /// Cube-comparability extremes for a weight pair:
    /// CSV `p1,p2,min_ratio,max_ratio,family_size`.
    Comparability {
        weight1: WeightSpec,
        weight2: WeightSpec,
        p1: f64,
        p2: f64,
    },
    /// A named verification check; writes report CSV plus a summary JSON
    /// next to it (`<output>.summary.json`). Seeds are mandatory.
    Verify(VerifyParams),
    /// Tail counterexample sweep; writes plot CSV `x,lhs,rhs,ratio`.
    Counterexample {
        p1: f64,
        p2: f64,
        resolution: f64,
        radii: Vec<f64>,
    },
    /// Half-width sweep of a scalar quantity; plot CSV `x,lhs,rhs,ratio`.
    Sweep {
        #[serde(flatten)]
        quantity: SweepQuantity,
        resolution: f64,
        radii: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MaximalOp {
    Hl,
    Tensor,
    Calderon,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ConstantWhich {
    Ap,
    A1,
    Apr,
    Rh,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "quantity", rename_all = "snake_case")]
pub enum SweepQuantity {
    /// lhs = the constant at each half-width, rhs = 1.
    Constant {
        which: ConstantWhich,
        weight: WeightSpec,
        p: f64,
    },
    /// lhs = endpoint bilinear ratio for f = g = indicator of [0,1] with
    /// piecewise weights of the given level ratio (ratio 1 = flat), rhs = 1.
    EndpointRatio { level_ratio: f64, weight_seed: u64 },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum VerifyParams {
    /// Indicator Holder bound, constant 1, on seeded random instances.
    CharHolder {
        instances: usize,
        #[serde(default = "default_p_lo")]
        p_lo: f64,
        #[serde(default = "default_p_hi")]
        p_hi: f64,
    },
    /// Weakened Holder bound with C(p, delta).
    WeakHolder {
        instances: usize,
        deltas: Vec<f64>,
        #[serde(default = "default_p_lo")]
        p_lo: f64,
        #[serde(default = "default_p_hi")]
        p_hi: f64,
    },
    /// Two-sided Kolmogorov comparison on exhaustive small grids.
    Kolmogorov {
        instances: usize,
        cells: usize,
        pairs: Vec<(f64, f64)>,
    },
    /// Pointwise domination plus divergence co-trend along a half-width sweep.
    Necessity {
        p1: f64,
        p2: f64,
        resolution: f64,
        radii: Vec<f64>,
        #[serde(default = "default_pointwise_sets")]
        pointwise_sets: usize,
    },
    /// Restricted-input cube test against [w2]_{A_{p2}^R}.
    CubeRestricted {
        p1: f64,
        p2: f64,
        weight1: WeightSpec,
        weight2: WeightSpec,
        corpus: usize,
        #[serde(default = "default_band")]
        band: (f64, f64),
        #[serde(default = "default_dual_samples")]
        dual_samples: usize,
    },
    /// Strong-input cube test against [w2]_{A_{p2}}; `strong_target` selects
    /// the L^p output (requires p2 > 1) and adds the norm-domination report.
    CubeStrong {
        p1: f64,
        p2: f64,
        weight1: WeightSpec,
        weight2: WeightSpec,
        corpus: usize,
        strong_target: bool,
        #[serde(default = "default_band")]
        band: (f64, f64),
        #[serde(default = "default_dual_samples")]
        dual_samples: usize,
    },
    /// Indicator-times-function product bound with measured constants.
    IndicatorProduct {
        instances: usize,
        delta: f64,
        #[serde(default = "default_p_lo")]
        p_lo: f64,
        #[serde(default = "default_p_hi")]
        p_hi: f64,
    },
    /// Endpoint L^1 x L^1 ratio drift along a half-width sweep.
    Endpoint {
        resolution: f64,
        radii: Vec<f64>,
        level_ratio: f64,
        #[serde(default = "default_drift")]
        max_drift: f64,
    },
    /// Worst bilinear ratio over a random corpus for the given norm forms.
    Bilinear {
        instances: usize,
        indices: BilinearIndices,
        p_lo: f64,
        p_hi: f64,
    },
}

fn default_p_lo() -> f64 {
    1.0
}
fn default_p_hi() -> f64 {
    4.0
}
fn default_pointwise_sets() -> usize {
    100
}
fn default_band() -> (f64, f64) {
    (1e-4, 1e4)
}
fn default_dual_samples() -> usize {
    8
}
fn default_drift() -> f64 {
    0.10
}

pub const CHECK_NAMES: &[&str] = &[
    "char_holder",
    "weak_holder",
    "kolmogorov",
    "necessity",
    "cube_restricted",
    "cube_strong",
    "indicator_product",
    "endpoint",
    "bilinear",
];

impl VerifyParams {
    pub fn name(&self) -> &'static str {
        match self {
            VerifyParams::CharHolder { .. } => "char_holder",
            VerifyParams::WeakHolder { .. } => "weak_holder",
            VerifyParams::Kolmogorov { .. } => "kolmogorov",
            VerifyParams::Necessity { .. } => "necessity",
            VerifyParams::CubeRestricted { .. } => "cube_restricted",
            VerifyParams::CubeStrong { .. } => "cube_strong",
            VerifyParams::IndicatorProduct { .. } => "indicator_product",
            VerifyParams::Endpoint { .. } => "endpoint",
            VerifyParams::Bilinear { .. } => "bilinear",
        }
    }
}
