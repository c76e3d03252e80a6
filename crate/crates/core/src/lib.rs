//! Discrete toolkit for weighted Lorentz quasi-norms, Hardy-Littlewood
//! maximal operators, their 2-fold product, and Muckenhoupt-type weight
//! constants on truncated uniform grids.
//!
//! Everything is an exact finite computation: functions and weights are
//! piecewise constant on cells, rearrangements are sorted cell sums, and
//! window suprema sweep an explicit family (all intervals in 1D, dyadic-size
//! squares in 2D). All operations are pure functions of immutable inputs and
//! safe to run in parallel across instances.

pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod lorentz;
pub mod maximal;
pub mod rearrange;
pub mod rng;
pub mod weights;

pub use error::{Error, Result};
pub use field::{weighted_measure, ScalarField, WeightField};
pub use grid::Grid;
pub use lorentz::{lorentz_p1_norm, lorentz_pinf_norm, lp_norm, LorentzIndex};
pub use maximal::{calderon_maximal_1d, hl_maximal, m_tensor, Window, WindowFamily};
pub use rearrange::{distribution, rearrangement, StepRearrangement};
pub use weights::{
    a1_constant, ap_constant, apr_constant, combined_exponent, combined_weight, cube_comparability,
    rh_constant, ComparabilityReport, ConstantKind, ConstantReport, WeightSpec,
};
