//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits non-zero when any criterion fails.

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use polytorus::bohr::{index_of_integer, integer_of_index, lift_dirichlet, unlift};
use polytorus::extension::{radial_section, twist, twisted_value, wiener_bound};
use polytorus::radial::{build_mz_sequence, kernel_ratio, mz_default_radius, mz_summand_bound};
use polytorus::special::{example_u, Counterexample, CounterexampleParams};
use polytorus::verify::{run, ExperimentConfig, ExperimentResult, RandomSeries, RandomSpectrum};
use polytorus::{DirichletSeries, FourierSeries, PolydiscPoint, RadialScheme, SeedStream, TorusPoint};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn random(seed: u64, terms: usize, dim: u32, max_exponent: i32, spectrum: RandomSpectrum) -> FourierSeries {
    RandomSeries { seed, terms, dim, max_exponent, spectrum, constant: None }.build().unwrap()
}

fn config(v: serde_json::Value) -> ExperimentConfig {
    serde_json::from_value(v).unwrap()
}

fn check_passed(r: &ExperimentResult, name: &str) -> (bool, f64) {
    let c = r.find_check(name).unwrap_or_else(|| panic!("missing check {name}"));
    (c.passed, c.value)
}

fn bohr_round_trip() -> Outcome {
    let bad = (1..=1_000_000u64)
        .into_par_iter()
        .filter(|&n| integer_of_index(&index_of_integer(n).unwrap()).unwrap() != n)
        .count();
    let stream = SeedStream::new(1);
    let mut lifted_bad = 0;
    for i in 0..100 {
        let mut rng = stream.substream(i);
        let terms: Vec<(u64, Complex64)> = (0..rng.gen_range(1..30))
            .map(|_| {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                (rng.gen_range(1..=1_000_000), c)
            })
            .collect();
        let d = DirichletSeries::from_terms(terms).unwrap();
        if unlift(&lift_dirichlet(&d).unwrap()).unwrap() != d {
            lifted_bad += 1;
        }
    }
    outcome(bad == 0 && lifted_bad == 0, format!("{bad} integer mismatches, {lifted_bad} lift mismatches"))
}

fn two_route_twist() -> Outcome {
    let stream = SeedStream::new(2);
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let f = random(1000 + i, 12, 6, 3, RandomSpectrum::General);
        let theta = TorusPoint::sample(6, &mut stream.substream(i));
        for r in [0.3, 0.9] {
            let a = radial_section(&f, r, &theta, &RadialScheme::Diagonal).unwrap();
            let radii: Vec<f64> = (1..=6).map(|j| r.powi(j)).collect();
            let b = f.evaluate(&PolydiscPoint::from_polar(&radii, theta.angles()).unwrap());
            worst = worst.max((a - b).norm());
        }
    }
    outcome(worst <= 1e-12, format!("max route difference {worst:.3e} (tolerance 1e-12)"))
}

fn harmonicity() -> Outcome {
    let stream = SeedStream::new(3);
    let mut worst: f64 = 0.0;
    for i in 0..20u64 {
        let f = random(2000 + i, 10, 4, 3, RandomSpectrum::PmAnalytic);
        let theta = TorusPoint::sample(4, &mut stream.substream(i));
        for rho in [0.3, 0.7] {
            let mean: Complex64 = (0..4096)
                .map(|k| {
                    let xi = Complex64::from_polar(rho, TAU * k as f64 / 4096.0);
                    twisted_value(&f, xi, &theta, &RadialScheme::Diagonal).unwrap()
                })
                .sum::<Complex64>()
                / 4096.0;
            worst = worst.max((mean - f.constant_term()).norm());
        }
    }
    outcome(worst <= 1e-8, format!("max |mean - F(0)| {worst:.3e} (tolerance 1e-8)"))
}

fn l1_contraction() -> Outcome {
    let stream = SeedStream::new(4);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..20u64 {
        let f = random(3000 + i, 10, 4, 2, RandomSpectrum::PmAnalytic);
        let s = stream.channel(i);
        let base = f.lp_norm_mc(1.0, 10_000, &s).unwrap();
        for xi in [Complex64::new(0.5, 0.0), Complex64::from_polar(0.9, 1.0)] {
            let g = twist(&f, xi, &RadialScheme::Diagonal).unwrap();
            let e = g.lp_norm_mc(1.0, 10_000, &s).unwrap();
            let se = (e.std_error.powi(2) + base.std_error.powi(2)).sqrt();
            worst = worst.max(e.estimate - base.estimate - 3.0 * se);
        }
    }
    outcome(worst <= 0.0, format!("max of |f_xi|_1 - |f|_1 - 3 SE: {worst:.4}"))
}

fn wiener() -> Outcome {
    let bound = wiener_bound(Complex64::new(0.9, 0.0), 1e-15).unwrap().value;
    let mut worst: f64 = 0.0;
    let mut fails = 0;
    for i in 0..100u64 {
        let f = random(4000 + i, 40, 10, 4, RandomSpectrum::General);
        let lhs = twist(&f, Complex64::new(0.9, 0.0), &RadialScheme::Diagonal).unwrap().wiener_norm();
        let rhs = f.max_abs_coeff() * bound;
        worst = worst.max(lhs / rhs);
        fails += (lhs > rhs) as usize;
    }
    outcome(fails == 0, format!("max ratio to bound {worst:.4}, {fails} violations"))
}

fn fatou_rate() -> Outcome {
    let r = run(
        &config(json!({"kind": "fatou", "seed": 6, "samples": 1000, "target": {
            "source": "random", "seed": 60, "terms": 8, "dim": 3, "max_exponent": 1}})),
        8,
    )
    .unwrap();
    let bounds_ok = r.checks.iter().filter(|c| c.name.starts_with("bound_")).all(|c| c.passed);
    let slope = r.find_estimate("slope").map_or(f64::NAN, |e| e.value);
    outcome(bounds_ok && r.passed, format!("bound holds: {bounds_ok}; slope {slope:.4} (1 +- 0.05)"))
}

fn mz_sequence() -> Outcome {
    let schemes = [
        RadialScheme::Diagonal,
        RadialScheme::Power { alpha: 1.5 },
        RadialScheme::Explicit { table: vec![1, 1, 2, 3, 5, 8] },
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for s in &schemes {
        let check = build_mz_sequence(s, 0.999).unwrap().check().unwrap();
        ok &= check.all_hold();
        notes.push(format!("{} fills/{} radii ok={}", check.fills, check.elements, check.all_hold()));
    }
    outcome(ok, notes.join("; "))
}

fn kernel_ratio_stability() -> Outcome {
    let stream = SeedStream::new(8);
    let ratios: Vec<(f64, f64)> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.substream(i);
            let k = rng.gen_range(1..=50usize);
            let (rk, rk1) = (mz_default_radius(k), mz_default_radius(k + 1));
            let r = rng.gen_range(rk..rk1);
            let theta = TorusPoint::sample(200, &mut rng);
            let short = TorusPoint::new(theta.angles()[..50].to_vec());
            (
                kernel_ratio(r, rk, &short, &RadialScheme::Diagonal).unwrap(),
                kernel_ratio(r, rk, &theta, &RadialScheme::Diagonal).unwrap(),
            )
        })
        .collect();
    let finite = ratios.iter().all(|&(a, b)| a.is_finite() && b.is_finite());
    let m50 = ratios.iter().map(|r| r.0).fold(0.0, f64::max);
    let m200 = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let change = (m200 - m50).abs() / m50;
    let summand = (1..=10_000).map(mz_summand_bound).fold(0.0, f64::max);
    outcome(
        finite && change < 0.01 && summand <= 1.0,
        format!("max ratio {m200:.4}, change m=50 to 200 {change:.2e}, max summand bound {summand:.4}"),
    )
}

fn singular_vanishing() -> Outcome {
    let r = run(&config(json!({"kind": "mz", "seed": 9, "samples": 1000, "base": 3, "depth": 12})), 8).unwrap();
    let (dip_ok, dip) = check_passed(&r, "dip_fraction");
    let (guard_ok, _) = check_passed(&r, "guard_nonfinite");
    let w = run(
        &config(json!({"kind": "weak_type", "seed": 9, "samples": 10_000,
            "target": {"source": "riesz", "base": 3, "depth": 12}})),
        8,
    )
    .unwrap();
    let (slope_ok, slope) = check_passed(&w, "tail_slope");
    outcome(
        dip_ok && guard_ok && slope_ok,
        format!("dip fraction {dip:.3} (need >= 0.9); tail slope {slope:.3} (need <= -0.8)"),
    )
}

fn log_integrability() -> Outcome {
    let mut all = true;
    let mut rng = SeedStream::new(10).substream(0);
    for i in 0..20u64 {
        let c = Complex64::from_polar(rng.gen_range(0.1..1.0), rng.gen_range(0.0..TAU));
        let r = run(
            &config(json!({"kind": "log_int", "seed": 100 + i, "samples": 50, "quadrature": 4096, "target": {
                "source": "random", "seed": 5000 + i, "terms": 6, "dim": 4, "max_exponent": 2,
                "constant": [c.re, c.im]}})),
            8,
        )
        .unwrap();
        all &= r.passed;
    }
    let r = run(
        &config(json!({"kind": "log_int", "seed": 11, "samples": 50, "quadrature": 4096,
            "target": {"source": "text", "text": "-> 1,0\n1:1 -> 0.5,0"}})),
        8,
    )
    .unwrap();
    let worst = r.column("integral").unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    outcome(all && worst <= 1e-6, format!("random bounds hold: {all}; |integral| for 1 + z1/2 {worst:.2e}"))
}

fn counterexample_behaviour() -> Outcome {
    let cx = Counterexample::new(CounterexampleParams::new(200)).unwrap();
    let stream = SeedStream::new(12);
    let max_modulus = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.substream(i);
            let radii: Vec<f64> = (0..200).map(|_| rng.gen::<f64>()).collect();
            let angles: Vec<f64> = (0..200).map(|_| rng.gen::<f64>() * TAU).collect();
            cx.value(&PolydiscPoint::from_polar(&radii, &angles).unwrap()).unwrap().norm()
        })
        .reduce(|| 0.0, f64::max);
    let r = run(
        &config(json!({"kind": "divergence", "seed": 12, "samples": 100, "dim": 200, "target": "f",
            "path": {"type": "adaptive", "levels": 3}})),
        8,
    )
    .unwrap();
    let (small_ok, small) = check_passed(&r, "small_modulus_fraction");
    let (boundary_ok, boundary) = check_passed(&r, "boundary_fraction");
    let levels = r.column("levels_reached").unwrap().iter().fold(0.0f64, |m, &v| m.max(v));
    outcome(
        max_modulus <= 1.0 + 1e-6 && small_ok && boundary_ok,
        format!(
            "max |f| {max_modulus:.6}; fraction with min |f| <= e^-4: {small:.2} (need >= 0.9); \
             boundary |f| >= 0.1: {boundary:.2} (need >= 0.5); most levels reached {levels}"
        ),
    )
}

fn oscillation() -> Outcome {
    let r = run(
        &config(json!({"kind": "divergence", "seed": 13, "samples": 1000, "target": "g",
            "path": {"type": "block_mc", "p0": 0.95, "blocks": 4, "selection_samples": 1000}})),
        8,
    )
    .unwrap();
    let (osc_ok, osc) = check_passed(&r, "oscillation_fraction");
    let (width_ok, width) = check_passed(&r, "max_block_width");
    let blocks: Vec<String> = (1..=4)
        .map(|k| format!("{}", r.find_estimate(&format!("boundary_{k}")).unwrap().value))
        .collect();
    let stream = SeedStream::new(14);
    let mut worst: f64 = 0.0;
    for i in 0..50u64 {
        let z = PolydiscPoint::on_torus(&TorusPoint::sample(40, &mut stream.substream(i)));
        let prod: f64 = z
            .coords()
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let x = w + w.conj();
                1.0 + (x * x).re / (4.0 * ((k + 1) * (k + 1)) as f64)
            })
            .product();
        worst = worst.max((example_u(&z).norm_sqr() - prod).abs());
    }
    outcome(
        osc_ok && width_ok && worst <= 1e-12,
        format!(
            "oscillation fraction {osc:.3} (need >= 0.9); blocks [{}], max width {width} (need <= 20); \
             u identity error {worst:.1e}",
            blocks.join(", ")
        ),
    )
}

fn reproducibility() -> Outcome {
    let configs = [
        json!({"kind": "fatou", "seed": 7, "samples": 200, "target": {
            "source": "random", "seed": 1, "terms": 6, "dim": 3, "max_exponent": 2}}),
        json!({"kind": "weak_type", "seed": 7, "samples": 500, "target": {"source": "riesz", "base": 3, "depth": 8}}),
        json!({"kind": "log_int", "seed": 7, "samples": 40, "quadrature": 512, "target": {
            "source": "random", "seed": 2, "terms": 5, "dim": 3, "max_exponent": 2, "constant": [0.5, 0.0]}}),
        json!({"kind": "mz", "seed": 7, "samples": 200, "depth": 8}),
        json!({"kind": "divergence", "seed": 7, "samples": 200, "target": "g", "path": {"type": "block_mc"}}),
        json!({"kind": "divergence", "seed": 7, "samples": 10, "dim": 40, "target": "f", "path": {"type": "adaptive"}}),
        json!({"kind": "abschnitt", "seed": 7, "samples": 300, "dims": [1, 2, 3], "target": {
            "source": "random", "seed": 3, "terms": 6, "dim": 3, "max_exponent": 2}}),
    ];
    let mut differing = Vec::new();
    for v in configs {
        let c = config(v);
        let a = run(&c, 1).unwrap();
        let b = run(&c, 8).unwrap();
        if a.to_csv().unwrap() != b.to_csv().unwrap() || a.to_json().unwrap() != b.to_json().unwrap() {
            differing.push(a.kind.clone());
        }
    }
    outcome(differing.is_empty(), format!("experiments differing between 1 and 8 workers: {differing:?}"))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        (1, "Bohr round trip", Duration::from_secs(10), bohr_round_trip),
        (2, "two-route twist identity", Duration::from_secs(5), two_route_twist),
        (3, "harmonicity of twisted values", Duration::from_secs(30), harmonicity),
        (4, "L1 contraction", Duration::from_secs(120), l1_contraction),
        (5, "Wiener bound", Duration::from_secs(5), wiener),
        (6, "Fatou rate", Duration::from_secs(60), fatou_rate),
        (7, "MZ sequence construction", Duration::from_secs(1), mz_sequence),
        (8, "kernel-ratio stability", Duration::from_secs(120), kernel_ratio_stability),
        (9, "singular-measure vanishing", Duration::from_secs(300), singular_vanishing),
        (10, "log-integrability", Duration::from_secs(120), log_integrability),
        (11, "counterexample behaviour", Duration::from_secs(600), counterexample_behaviour),
        (12, "block oscillation", Duration::from_secs(180), oscillation),
        (13, "reproducibility across worker counts", Duration::from_secs(600), reproducibility),
    ];
    let mut failed = Vec::new();
    for (n, name, budget, f) in criteria {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let passed = o.passed && elapsed <= budget;
        println!(
            "criterion {n:>2} {}: {name}: {} [{:.2} s of {} s]",
            if passed { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !passed {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 13 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
