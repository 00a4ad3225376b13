//! Finite-truncation toolkit for boundary behaviour of Hardy spaces on the
//! infinite torus `T^∞`.
//!
//! Functions and measures are represented by finitely supported Fourier
//! coefficients indexed by multi-indices. On top of that representation the
//! crate provides
//!
//! * [`bohr`]: multi-index arithmetic and the Bohr lift between Dirichlet
//!   series and power series in infinitely many variables,
//! * [`series`]: sparse Fourier series, Bohr's abschnitt, polyharmonic
//!   evaluation and norms,
//! * [`extension`]: twisted radial extensions `f_ξ`, product Poisson kernels
//!   and grid radial maximal functions,
//! * [`radial`]: radial schemes, Marcinkiewicz–Zygmund radius sequences and
//!   structured approach paths,
//! * [`special`]: the explicit bump-product counterexample, the examples
//!   `g` and `u`, and lacunary Riesz products,
//! * [`verify`]: a seeded, worker-count independent Monte Carlo harness.

pub mod bohr;
pub mod error;
pub mod extension;
pub mod quad;
pub mod radial;
pub mod rng;
pub mod series;
pub mod special;
pub mod verify;

pub use bohr::{DirichletSeries, MultiIndex};
pub use error::{Error, Result};
pub use radial::RadialScheme;
pub use rng::SeedStream;
pub use series::{FourierSeries, PolydiscPoint, SpectrumClass, TorusPoint};

pub use num_complex::Complex64;
