use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bohr::MultiIndex;
use crate::error::{Error, Result};
use crate::extension::default_radius_grid;
use crate::radial::RadialScheme;
use crate::rng::SeedStream;
use crate::series::FourierSeries;
use crate::special::RieszProductMeasure;

/// One experiment run: the shared sampling fields plus the kind-specific
/// parameters, tagged by `kind` in the JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub samples: usize,
    /// Truncation dimension. Series targets are replaced by their abschnitt;
    /// `mz` uses it for the kernel-ratio guard and `divergence` for the
    /// number of factors of `f`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    #[serde(flatten)]
    pub experiment: Experiment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    Fatou(FatouConfig),
    WeakType(WeakTypeConfig),
    LogInt(LogIntConfig),
    Mz(MzConfig),
    Divergence(DivergenceConfig),
    Abschnitt(AbschnittConfig),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Fatou(_) => "fatou",
            Experiment::WeakType(_) => "weak_type",
            Experiment::LogInt(_) => "log_int",
            Experiment::Mz(_) => "mz",
            Experiment::Divergence(_) => "divergence",
            Experiment::Abschnitt(_) => "abschnitt",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FatouConfig {
    pub target: Target,
    #[serde(default)]
    pub scheme: RadialScheme,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    /// Allowed deviation of the fitted log-log slope from 1.
    #[serde(default = "default_slope_tolerance")]
    pub slope_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakTypeConfig {
    pub target: Target,
    #[serde(default)]
    pub scheme: RadialScheme,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "default_radius_grid")]
    pub radii: Vec<f64>,
    #[serde(default = "default_max_slope")]
    pub max_slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogIntConfig {
    pub target: Target,
    #[serde(default)]
    pub scheme: RadialScheme,
    /// Number of trapezoid nodes in `t`.
    #[serde(default = "default_quadrature")]
    pub quadrature: usize,
    #[serde(default = "default_quadrature_tol")]
    pub quadrature_tol: f64,
    /// Samples for the `‖F‖_1` estimate; defaults to `samples`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_samples: Option<usize>,
    #[serde(default = "default_se_multiplier")]
    pub se_multiplier: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MzConfig {
    #[serde(default = "default_base")]
    pub base: u32,
    #[serde(default = "default_depth")]
    pub depth: u32,
    /// Explicit increasing radii; `1 - k^{-1/3}` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    /// Log-spaced indices `k` per trajectory for the default sequence.
    #[serde(default = "default_trajectory_points")]
    pub trajectory_points: usize,
    #[serde(default = "default_mz_threshold")]
    pub threshold: f64,
    #[serde(default = "default_fraction")]
    pub fraction: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceTarget {
    G,
    U,
    F,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PathSource {
    /// Blocks chosen by [`crate::radial::choose_blocks_mc`].
    BlockMc {
        #[serde(default = "default_p0")]
        p0: f64,
        #[serde(default = "default_blocks")]
        blocks: usize,
        #[serde(default = "default_selection_samples")]
        selection_samples: usize,
    },
    Block { boundaries: Vec<usize> },
    Adaptive {
        #[serde(default = "default_levels")]
        levels: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<Vec<f64>>,
    },
    /// Every radius 1: the boundary value itself.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceConfig {
    pub target: DivergenceTarget,
    pub path: PathSource,
    #[serde(default = "default_oscillation")]
    pub oscillation: f64,
    #[serde(default = "default_min_modulus")]
    pub min_modulus: f64,
    #[serde(default = "default_boundary_modulus")]
    pub boundary_modulus: f64,
    #[serde(default = "default_fraction")]
    pub fraction: f64,
    #[serde(default = "default_boundary_fraction")]
    pub boundary_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbschnittConfig {
    pub target: Target,
    #[serde(default = "default_p")]
    pub p: f64,
    pub dims: Vec<u32>,
    #[serde(default = "default_se_multiplier")]
    pub se_multiplier: f64,
}

/// Where an experiment's series comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Target {
    /// Canonical series text, see [`FourierSeries::from_text`].
    Text { text: String },
    File { path: PathBuf },
    Random(RandomSeries),
    /// Riesz product on coordinate `coord`.
    Riesz {
        base: u32,
        depth: u32,
        #[serde(default = "default_coord")]
        coord: u32,
    },
}

impl Target {
    pub fn series(&self) -> Result<FourierSeries> {
        match self {
            Target::Text { text } => FourierSeries::from_text(text),
            Target::File { path } => FourierSeries::from_text(&std::fs::read_to_string(path)?),
            Target::Random(r) => r.build(),
            Target::Riesz { base, depth, coord } => RieszProductMeasure::new(*base, *depth)?.to_series(*coord),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomSpectrum {
    #[default]
    Analytic,
    PmAnalytic,
    General,
}

/// A random polynomial with coefficients uniform in `[-1, 1]^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSeries {
    pub seed: u64,
    pub terms: usize,
    pub dim: u32,
    /// Bound on `|ν_j|`.
    pub max_exponent: i32,
    #[serde(default)]
    pub spectrum: RandomSpectrum,
    /// Overrides the constant coefficient, as `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<[f64; 2]>,
}

impl RandomSeries {
    pub fn build(&self) -> Result<FourierSeries> {
        if self.dim == 0 || self.max_exponent < 0 {
            return Err(Error::config("random series need dim >= 1 and max_exponent >= 0"));
        }
        let mut rng = SeedStream::new(self.seed).channel(0x5e41e5).substream(0);
        let mut map = BTreeMap::new();
        let e = self.max_exponent;
        for _ in 0..self.terms {
            let sign = match self.spectrum {
                RandomSpectrum::PmAnalytic if rng.gen::<bool>() => -1,
                _ => 1,
            };
            let dense: Vec<i32> = (0..self.dim)
                .map(|_| match self.spectrum {
                    RandomSpectrum::General => rng.gen_range(-e..=e),
                    _ => sign * rng.gen_range(0..=e),
                })
                .collect();
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            *map.entry(MultiIndex::from_dense(&dense)).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        if let Some([re, im]) = self.constant {
            map.insert(MultiIndex::empty(), Complex64::new(re, im));
        }
        Ok(FourierSeries::from_terms(map))
    }
}

fn default_epsilons() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3, 1e-4]
}
fn default_slope_tolerance() -> f64 {
    0.05
}
fn default_lambdas() -> Vec<f64> {
    vec![1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 20.0, 32.0, 50.0]
}
fn default_max_slope() -> f64 {
    -0.8
}
fn default_quadrature() -> usize {
    4096
}
fn default_quadrature_tol() -> f64 {
    1e-6
}
fn default_se_multiplier() -> f64 {
    3.0
}
fn default_base() -> u32 {
    3
}
fn default_depth() -> u32 {
    12
}
fn default_trajectory_points() -> usize {
    400
}
fn default_mz_threshold() -> f64 {
    0.2
}
fn default_fraction() -> f64 {
    0.9
}
fn default_p0() -> f64 {
    0.95
}
fn default_blocks() -> usize {
    4
}
fn default_selection_samples() -> usize {
    1000
}
fn default_levels() -> usize {
    3
}
fn default_oscillation() -> f64 {
    0.4
}
fn default_min_modulus() -> f64 {
    (-4.0f64).exp()
}
fn default_boundary_modulus() -> f64 {
    0.1
}
fn default_boundary_fraction() -> f64 {
    0.5
}
fn default_p() -> f64 {
    1.0
}
fn default_coord() -> u32 {
    1
}
