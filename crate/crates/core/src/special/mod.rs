//! Explicit functions and measures: the bump-product counterexample with
//! its harmonic building blocks, the examples `g` and `u`, and lacunary
//! Riesz products.

mod bump;
mod counterexample;
mod harmonic;
mod riesz;

pub use bump::{bump_width, psi, BumpProfile};
pub use counterexample::{
    counterexample_f, example_g, example_u, example_u_arg, Counterexample, CounterexampleParams,
    EvalRoute,
};
pub use harmonic::{
    default_harmonics, BumpFamily, BumpHarmonic, CosineCoefficients, MAX_HARMONICS,
};
pub use riesz::{measure_radial_value, RieszProductMeasure};
