//! Verification harness for the 2-fold maximal product toolkit.
//!
//! Each check turns one inequality (or one divergence claim) into seeded,
//! reproducible pass/fail records:
//!
//! - Holder-type bounds for weak Lorentz norms with change of measures,
//!   with the exact constants they carry;
//! - the two-sided Kolmogorov comparison;
//! - the tail counterexample sweep whose left side grows like (2 ln R)^{1/p}
//!   while its right side stabilizes;
//! - window-localized boundedness tests against Muckenhoupt-type constants;
//! - corpus estimates of bilinear operator norms.
//!
//! Theorem-backed checks must pass on every instance: a failure is an
//! implementation bug, not a finding. Divergence claims become monotone
//! growth assertions along half-width sweeps at fixed resolution.

pub mod checks;
pub mod gen;
pub mod instance;
pub mod output;
pub mod report;

pub use checks::bilinear::{
    check_endpoint_half, check_necessity, estimate_bilinear_norm, necessity_witness_instance,
    BilinearEstimate, BilinearIndices, NecessityConfig, NecessityOutcome, NormForm,
    RESTRICTED_WEAK, STRONG_STRONG, STRONG_WEAK,
};
pub use checks::counterexample::{counterexample_data, counterexample_sweep, SweepRow};
pub use checks::cube_tests::{
    check_indicator_product_bound, check_norm_domination, check_restricted_cube_test,
    check_strong_cube_test, CubeInput, CubeOutput, CubeTestConfig, CubeTestOutcome,
    IndicatorProductOutcome,
};
pub use checks::holder::{check_char_holder, check_weak_holder, weak_holder_constant};
pub use checks::kolmogorov::{check_kolmogorov, EXHAUSTIVE_CELL_LIMIT};
pub use gen::FieldSpec;
pub use instance::Instance;
pub use report::{CheckSummary, VerificationReport, PASS_REL_SLACK};
