pub mod bilinear;
pub mod counterexample;
pub mod cube_tests;
pub mod holder;
pub mod kolmogorov;
