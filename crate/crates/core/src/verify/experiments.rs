use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::*;
use super::result::{input_hash, Check, ExperimentResult, Record, Relation};
use crate::error::{Error, Result};
use crate::extension::{check_grid, multiplier_powers, radial_maximal, radial_section};
use crate::radial::{
    adaptive_block_path, choose_blocks_mc, default_adaptive_grid, kernel_ratio, BlockSchedule,
    RadialScheme, TermOracle, BLOCK_WIDTH_CAP,
};
use crate::rng::SeedStream;
use crate::series::{fmt_f64, phase, power_mean_estimate, FourierSeries, SpectrumClass, TorusPoint};
use crate::special::{Counterexample, CounterexampleParams, RieszProductMeasure};

/// Absolute rounding allowance, relative to the Wiener norm, for the
/// deterministic Fatou bound.
const ROUNDING: f64 = 1e-12;

/// Samples `0..samples` in parallel; `values` sees the sampled point.
fn per_sample<F>(samples: usize, m: usize, stream: &SeedStream, values: F) -> Result<Vec<Record>>
where
    F: Fn(&TorusPoint) -> Result<Vec<f64>> + Sync,
{
    (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let theta = TorusPoint::sample(m, &mut stream.substream(i));
            Ok(Record {
                sample_index: i,
                input_hash: input_hash(theta.angles()),
                values: values(&theta)?,
            })
        })
        .collect()
}

fn target_series(target: &Target, dim: Option<u32>) -> Result<FourierSeries> {
    let f = target.series()?;
    Ok(match dim {
        Some(m) => f.abschnitt(m),
        None => f,
    })
}

/// Least-squares slope of `ln y` against `ln x` over the pairs with `y > 0`.
fn log_log_slope(points: impl IntoIterator<Item = (f64, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Fraction of `values` satisfying `pred`, with its binomial standard error.
fn fraction(values: &[f64], pred: impl Fn(f64) -> bool) -> (f64, f64) {
    let n = values.len() as f64;
    let p = values.iter().filter(|&&v| pred(v)).count() as f64 / n;
    (p, (p * (1.0 - p) / n).sqrt())
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

pub(crate) fn fatou(config: &ExperimentConfig, c: &FatouConfig, stream: &SeedStream) -> Result<ExperimentResult> {
    c.scheme.validate()?;
    if c.epsilons.is_empty() || c.epsilons.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::config("epsilons must be nonempty and lie in (0, 1]"));
    }
    let f = target_series(&c.target, config.dim)?;
    let m = f.dim().max(1) as usize;
    let records = per_sample(config.samples, m, stream, |theta| {
        let boundary = f.evaluate_torus(theta)?;
        c.epsilons
            .iter()
            .map(|&e| Ok((radial_section(&f, 1.0 - e, theta, &c.scheme)? - boundary).norm()))
            .collect()
    })?;
    let columns = c.epsilons.iter().map(|&e| format!("error_{}", fmt_f64(e))).collect();
    let mut res = ExperimentResult::new(config, columns, records);
    let degree = f
        .terms()
        .map(|(nu, _)| {
            let (p, n) = multiplier_powers(nu, &c.scheme);
            p + n
        })
        .max()
        .unwrap_or(0);
    let wiener = f.wiener_norm();
    res.estimate("wiener_norm", wiener, None);
    res.estimate("max_weighted_degree", degree as f64, None);
    let mut maxima = Vec::new();
    for (i, &e) in c.epsilons.iter().enumerate() {
        let worst = max_of(&res.records.iter().map(|r| r.values[i]).collect::<Vec<_>>());
        maxima.push((e, worst));
        let bound = wiener * degree as f64 * e;
        res.estimate(format!("max_error_{}", fmt_f64(e)), worst, None);
        res.check(Check::new(
            format!("bound_{}", fmt_f64(e)),
            worst,
            Relation::Le,
            bound + ROUNDING * wiener,
        ));
    }
    if let Some(slope) = log_log_slope(maxima) {
        res.estimate("slope", slope, None);
        res.check(Check::new("slope_deviation", (slope - 1.0).abs(), Relation::Le, c.slope_tolerance));
    }
    Ok(res)
}

pub(crate) fn weak_type(
    config: &ExperimentConfig,
    c: &WeakTypeConfig,
    stream: &SeedStream,
) -> Result<ExperimentResult> {
    c.scheme.validate()?;
    check_grid(&c.radii).map_err(|e| Error::config(e.to_string()))?;
    if c.lambdas.is_empty() || c.lambdas.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::config("lambdas must be nonempty and positive"));
    }
    let records = match &c.target {
        Target::Riesz { base, depth, coord } => {
            if *coord == 0 {
                return Err(Error::config("coordinates are 1-based"));
            }
            let mu = RieszProductMeasure::new(*base, *depth)?;
            let mj = c.scheme.exponent(*coord) as f64;
            per_sample(config.samples, *coord as usize, stream, |theta| {
                let t = theta.angles()[*coord as usize - 1];
                c.radii
                    .iter()
                    .try_fold(0.0f64, |m, &r| Ok(m.max(mu.poisson((mj * r.ln()).exp(), t)?.abs())))
                    .map(|m| vec![m])
            })?
        }
        target => {
            let f = target_series(target, config.dim)?;
            if !f.spectrum_class().is_within(SpectrumClass::PMAnalytic) {
                return Err(Error::Spectrum("the weak-type experiment needs a PM-analytic series".into()));
            }
            per_sample(config.samples, f.dim().max(1) as usize, stream, |theta| {
                Ok(vec![radial_maximal(&f, theta, &c.radii, &c.scheme)?])
            })?
        }
    };
    let mut res = ExperimentResult::new(config, vec!["maximal".into()], records);
    let m = res.column("maximal").expect("column exists");
    let mut tail = Vec::new();
    for &l in &c.lambdas {
        let (p, se) = fraction(&m, |v| v > l);
        res.estimate(format!("tail_{}", fmt_f64(l)), p, Some(se));
        tail.push((l, p));
    }
    if let Some(slope) = log_log_slope(tail) {
        res.estimate("tail_slope", slope, None);
        res.check(Check::new("tail_slope", slope, Relation::Le, c.max_slope));
    }
    Ok(res)
}

pub(crate) fn log_int(config: &ExperimentConfig, c: &LogIntConfig, stream: &SeedStream) -> Result<ExperimentResult> {
    c.scheme.validate()?;
    if c.quadrature == 0 {
        return Err(Error::config("quadrature size must be positive"));
    }
    let f = target_series(&c.target, config.dim)?;
    if !f.spectrum_class().is_within(SpectrumClass::Analytic) {
        return Err(Error::Spectrum("the log-integrability experiment needs an analytic series".into()));
    }
    let f0 = f.constant_term();
    if f0.norm() == 0.0 {
        return Err(Error::domain(
            "the constant coefficient vanishes; Möbius shifts are not supported",
        ));
    }
    let norm = f.lp_norm_mc(1.0, c.norm_samples.unwrap_or(config.samples), &stream.channel(1))?;
    let q = c.quadrature;
    let records = per_sample(config.samples, f.dim().max(1) as usize, &stream.channel(0), |theta| {
        // Along ξ = e^{it} the series is a polynomial in ξ; group by degree.
        let mut by_degree: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (nu, a) in f.terms() {
            let (p, _) = multiplier_powers(nu, &c.scheme);
            *by_degree.entry(p).or_default() += a * Complex64::cis(phase(nu, theta.angles()));
        }
        let sum: f64 = (0..q)
            .map(|k| {
                let t = TAU * k as f64 / q as f64;
                let v: Complex64 = by_degree
                    .iter()
                    .map(|(&w, &a)| a * Complex64::cis(((w as f64) * t) % TAU))
                    .sum();
                -v.norm().ln()
            })
            .sum();
        Ok(vec![sum / q as f64])
    })?;
    let mut res = ExperimentResult::new(config, vec!["integral".into()], records);
    let upper = -f0.norm().ln() + c.quadrature_tol;
    let lower = -(norm.estimate + c.se_multiplier * norm.std_error);
    res.estimate("norm_l1", norm.estimate, Some(norm.std_error));
    res.estimate("upper_bound", upper, None);
    res.estimate("lower_bound", lower, None);
    let v = res.column("integral").expect("column exists");
    res.check(Check::new("max_integral", max_of(&v), Relation::Le, upper));
    res.check(Check::new("min_integral", min_of(&v), Relation::Ge, lower));
    Ok(res)
}

/// Radii of the trajectory and the next element of the sequence after each.
fn mz_radii(c: &MzConfig, limit: f64) -> Result<Vec<(f64, f64)>> {
    if let Some(radii) = &c.radii {
        if radii.is_empty()
            || radii.iter().any(|r| !(0.0..1.0).contains(r))
            || radii.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::config("radii must be strictly increasing inside [0, 1)"));
        }
        let mut pairs: Vec<(f64, f64)> = radii.windows(2).map(|w| (w[0], w[1])).collect();
        pairs.push((radii[radii.len() - 1], radii[radii.len() - 1]));
        return Ok(pairs.into_iter().filter(|p| p.0 <= limit).collect());
    }
    if c.trajectory_points < 2 {
        return Err(Error::config("need at least 2 trajectory points"));
    }
    let radius = |k: f64| 1.0 - 1.0 / k.cbrt();
    // r_k <= 1 - q^{-J} exactly when k <= q^{3J}.
    let log_kmax = 3.0 * c.depth as f64 * (c.base as f64).ln();
    let mut ks: Vec<f64> = (0..c.trajectory_points)
        .map(|i| (log_kmax * i as f64 / (c.trajectory_points - 1) as f64).exp().round())
        .filter(|&k| radius(k) <= limit)
        .collect();
    ks.dedup();
    Ok(ks.into_iter().map(|k| (radius(k), radius(k + 1.0))).collect())
}

pub(crate) fn mz(config: &ExperimentConfig, c: &MzConfig, stream: &SeedStream) -> Result<ExperimentResult> {
    let mu = RieszProductMeasure::new(c.base, c.depth)?;
    let limit = 1.0 - (c.base as f64).powi(-(c.depth as i32));
    let radii = mz_radii(c, limit)?;
    if radii.is_empty() {
        return Err(Error::config("no radius falls in the usable range"));
    }
    let guard_dim = config.dim.unwrap_or(50).max(1) as usize;
    let records = per_sample(config.samples, guard_dim, stream, |theta| {
        let t = theta.angles()[0];
        let (mut lo, mut at) = (f64::INFINITY, 0.0);
        let mut last = 0.0;
        let mut guard = 0.0f64;
        for &(r, next) in &radii {
            let v = mu.poisson(r, t)?;
            if v < lo {
                lo = v;
                at = r;
            }
            last = v;
            let g = kernel_ratio(next, r, theta, &RadialScheme::Diagonal)?;
            guard = if g.is_finite() { guard.max(g) } else { f64::INFINITY };
        }
        Ok(vec![lo, at, last, guard])
    })?;
    let columns = ["min_value", "argmin_radius", "final_value", "guard_max"].map(String::from).to_vec();
    let mut res = ExperimentResult::new(config, columns, records);
    let (p, se) = fraction(&res.column("min_value").expect("column"), |v| v < c.threshold);
    res.estimate("usable_limit", limit, None);
    res.estimate("trajectory_points", radii.len() as f64, None);
    res.estimate("dip_fraction", p, Some(se));
    let guard = res.column("guard_max").expect("column");
    res.estimate("guard_max", max_of(&guard), None);
    res.check(Check::new("dip_fraction", p, Relation::Ge, c.fraction));
    let infinite = guard.iter().filter(|g| !g.is_finite()).count() as f64;
    res.check(Check::new("guard_nonfinite", infinite, Relation::Le, 0.0));
    Ok(res)
}

/// `u_n` values along a path for a fixed boundary point.
struct BumpOracle<'a> {
    cx: &'a Counterexample,
    theta: &'a [f64],
}

impl BumpOracle<'_> {
    fn factors(&self) -> usize {
        self.cx.params().factors
    }

    fn mean(&self, n: usize) -> f64 {
        if n > self.factors() {
            0.0
        } else {
            self.cx.harmonic(n).mean()
        }
    }

    /// `-log |f|` along the radii `radii[n-1]`, missing coordinates at 0.
    fn exponent_sum(&self, radii: &[f64]) -> f64 {
        (1..=self.factors())
            .map(|n| self.value(n, radii.get(n - 1).copied().unwrap_or(0.0)))
            .sum()
    }
}

impl TermOracle for BumpOracle<'_> {
    fn value(&self, n: usize, r: f64) -> f64 {
        if n > self.factors() {
            return 0.0;
        }
        if r == 0.0 {
            return self.mean(n);
        }
        self.cx
            .harmonic(n)
            .herglotz(Complex64::from_polar(r, self.theta[n - 1]))
            .expect("radius inside the closed disc")
            .re
    }

    fn upper_bound(&self, n: usize, r: f64) -> f64 {
        if n > self.factors() {
            0.0
        } else {
            self.cx.harmonic(n).value_upper_bound(r, self.theta[n - 1])
        }
    }
}

pub(crate) fn divergence(
    config: &ExperimentConfig,
    c: &DivergenceConfig,
    stream: &SeedStream,
) -> Result<ExperimentResult> {
    let factors = config.dim.unwrap_or(200) as usize;
    let schedule = match &c.path {
        PathSource::BlockMc { p0, blocks, selection_samples } => Some(BlockSchedule::new(choose_blocks_mc(
            0,
            *blocks,
            *p0,
            *selection_samples,
            &stream.channel(2),
        )?)?),
        PathSource::Block { boundaries } => Some(BlockSchedule::new(boundaries.clone())?),
        PathSource::Adaptive { .. } | PathSource::Trivial => None,
    };
    if matches!(c.path, PathSource::Adaptive { .. }) && c.target != DivergenceTarget::F {
        return Err(Error::config("adaptive paths are defined for the target f only"));
    }
    let span = schedule.as_ref().map_or(0, |s| *s.boundaries().last().expect("nonempty"));
    let mut res = match c.target {
        DivergenceTarget::G | DivergenceTarget::U => {
            let m = if span > 0 { span } else { factors.max(1) };
            let term = |theta: &[f64], n: usize, r: f64| {
                let x = r * theta[n - 1].cos() / n as f64;
                if c.target == DivergenceTarget::G {
                    x
                } else {
                    x.atan()
                }
            };
            let records = per_sample(config.samples, m, &stream.channel(0), |theta| {
                let th = theta.angles();
                let boundary: f64 = (1..=m).map(|n| term(th, n, 1.0)).sum();
                let oscillation = match &schedule {
                    None => 0.0,
                    Some(s) => {
                        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                        for k in s.blocks().saturating_sub(2)..s.blocks() {
                            let (a, b) = s.block_extremes(k, |n, r| term(th, n, r));
                            lo = lo.min(a);
                            hi = hi.max(b);
                        }
                        hi - lo
                    }
                };
                Ok(vec![oscillation, boundary])
            })?;
            let mut res = ExperimentResult::new(config, vec!["oscillation".into(), "boundary_value".into()], records);
            let (p, se) = fraction(&res.column("oscillation").expect("column"), |v| v >= c.oscillation);
            res.estimate("oscillation_fraction", p, Some(se));
            res.check(Check::new("oscillation_fraction", p, Relation::Ge, c.fraction));
            res
        }
        DivergenceTarget::F => {
            let cx = Counterexample::new(CounterexampleParams::new(factors))?;
            let grid = match &c.path {
                PathSource::Adaptive { grid: Some(g), .. } => g.clone(),
                _ => default_adaptive_grid(),
            };
            let m = factors.max(span);
            let records = per_sample(config.samples, m, &stream.channel(0), |theta| {
                let oracle = BumpOracle { cx: &cx, theta: theta.angles() };
                let boundary = cx.boundary_modulus(theta);
                let means: f64 = (1..=factors).map(|n| oracle.mean(n)).sum();
                let (max_exponent, levels, used) = match (&c.path, &schedule) {
                    (_, Some(s)) => {
                        // Separable in the coordinates: -log|f| = Σ means - Σ (mean_n - u_n).
                        let lo = (0..s.blocks())
                            .map(|k| s.block_extremes(k, |n, r| oracle.mean(n) - oracle.value(n, r)).0)
                            .fold(f64::INFINITY, f64::min);
                        (means - lo, 0.0, span as f64)
                    }
                    (PathSource::Adaptive { levels, .. }, None) => {
                        let report = adaptive_block_path(&oracle, *levels, factors, &grid)?;
                        let e = report
                            .path
                            .steps()
                            .iter()
                            .map(|step| oracle.exponent_sum(&step.radii(factors)))
                            .fold(f64::NEG_INFINITY, f64::max);
                        (e, report.levels_reached as f64, report.coordinates_used as f64)
                    }
                    _ => (-boundary.ln(), 0.0, 0.0),
                };
                Ok(vec![(-max_exponent).exp(), boundary, levels, used])
            })?;
            let columns = ["min_modulus", "boundary_modulus", "levels_reached", "coordinates_used"]
                .map(String::from)
                .to_vec();
            let mut res = ExperimentResult::new(config, columns, records);
            let (p, se) = fraction(&res.column("min_modulus").expect("column"), |v| v <= c.min_modulus);
            res.estimate("small_modulus_fraction", p, Some(se));
            res.check(Check::new("small_modulus_fraction", p, Relation::Ge, c.fraction));
            let (p, se) = fraction(&res.column("boundary_modulus").expect("column"), |v| v >= c.boundary_modulus);
            res.estimate("boundary_fraction", p, Some(se));
            res.check(Check::new("boundary_fraction", p, Relation::Ge, c.boundary_fraction));
            res
        }
    };
    if let Some(s) = &schedule {
        for (k, &b) in s.boundaries().iter().enumerate() {
            res.estimate(format!("boundary_{}", k + 1), b as f64, None);
        }
        res.check(Check::new("max_block_width", s.max_width() as f64, Relation::Le, BLOCK_WIDTH_CAP as f64));
    }
    Ok(res)
}

pub(crate) fn abschnitt(
    config: &ExperimentConfig,
    c: &AbschnittConfig,
    stream: &SeedStream,
) -> Result<ExperimentResult> {
    if c.dims.is_empty() || c.dims[0] == 0 || c.dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("dims must be positive and strictly increasing"));
    }
    if !(c.p > 0.0 && c.p.is_finite()) {
        return Err(Error::config(format!("p must be positive, got {}", c.p)));
    }
    let f = target_series(&c.target, config.dim)?;
    let mut parts: Vec<FourierSeries> = c.dims.iter().map(|&m| f.abschnitt(m)).collect();
    parts.push(f.clone());
    let m = f.dim().max(*c.dims.last().expect("nonempty")) as usize;
    // Every truncation is evaluated at the same point: common random numbers.
    let records = per_sample(config.samples, m, stream, |theta| {
        parts.iter().map(|g| Ok(g.evaluate_torus(theta)?.norm().powf(c.p))).collect()
    })?;
    let mut columns: Vec<String> = c.dims.iter().map(|m| format!("abs_p_m{m}")).collect();
    columns.push("abs_p_full".into());
    let mut res = ExperimentResult::new(config, columns.clone(), records);
    let est: Vec<_> = columns
        .iter()
        .map(|col| power_mean_estimate(&res.column(col).expect("column"), c.p))
        .collect();
    let full = est[est.len() - 1];
    res.estimate("norm_full", full.estimate, Some(full.std_error));
    for (i, &m) in c.dims.iter().enumerate() {
        let e = est[i];
        res.estimate(format!("norm_m{m}"), e.estimate, Some(e.std_error));
        let se = (e.std_error.powi(2) + full.std_error.powi(2)).sqrt();
        res.check(Check::new(
            format!("contraction_m{m}"),
            e.estimate,
            Relation::Le,
            full.estimate + c.se_multiplier * se,
        ));
        if m >= f.dim() {
            res.check(Check::new(
                format!("stable_m{m}"),
                (e.estimate - full.estimate).abs(),
                Relation::Le,
                0.0,
            ));
        }
    }
    Ok(res)
}
