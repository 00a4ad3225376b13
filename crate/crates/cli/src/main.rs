use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use polytorus::bohr::{lift_dirichlet, unlift};
use polytorus::extension::{product_poisson_kernel, radial_maximal, twist, default_radius_grid};
use polytorus::radial::{
    block_path, build_mz_sequence, choose_blocks_mc, kernel_ratio, mz_default_radius,
    sampled_block_path, BlockSchedule,
};
use polytorus::series::fmt_f64;
use polytorus::special::{example_g, example_u, Counterexample, CounterexampleParams, RieszProductMeasure};
use polytorus::verify::{run, ExperimentConfig};
use polytorus::{DirichletSeries, Error, FourierSeries, PolydiscPoint, RadialScheme, SeedStream, TorusPoint};

/// Boundary behaviour of Hardy spaces on the infinite torus, at finite truncation.
#[derive(Parser, Debug)]
#[command(name = "polytorus", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every stochastic subcommand; required by them.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Output format for experiment results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Truncation dimension.
    #[arg(long, global = true)]
    dim: Option<u32>,
    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dirichlet series and power series in infinitely many variables.
    #[command(subcommand)]
    Bohr(BohrCmd),
    /// Evaluate series and estimate their norms.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Radial extensions and Poisson kernels.
    #[command(subcommand)]
    Extend(ExtendCmd),
    /// Marcinkiewicz-Zygmund radii, kernel ratios and block paths.
    #[command(subcommand)]
    Radial(RadialCmd),
    /// The explicit example functions and Riesz products.
    #[command(subcommand)]
    Special(SpecialCmd),
    /// Seeded Monte Carlo experiments.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand, Debug)]
enum BohrCmd {
    /// Lift `Σ a_n n^{-s}` to a power series; terms from `--n/--coeff` pairs
    /// or an input file of `n -> re,im` lines.
    Lift {
        #[arg(long, value_delimiter = ',')]
        n: Vec<u64>,
        /// Coefficients `re` or `re:im`, one per `--n`; default 1.
        #[arg(long, value_delimiter = ',')]
        coeff: Vec<String>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Inverse of `lift`; reads a series file (`-` for stdin).
    Unlift {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Point {
    /// Angles `θ_1,θ_2,…`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    theta: Vec<f64>,
    /// Radii `|z_1|,|z_2|,…`; all 1 when omitted.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
}

impl Point {
    fn polydisc(&self) -> polytorus::Result<PolydiscPoint> {
        match &self.radii {
            Some(r) => PolydiscPoint::from_polar(r, &self.theta),
            None => Ok(PolydiscPoint::on_torus(&TorusPoint::new(self.theta.clone()))),
        }
    }
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    /// Polyharmonic evaluation.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        point: Point,
    },
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = NormKind::Wiener)]
        kind: NormKind,
        /// Exponent for `--kind lp`.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
    },
    /// Truncation to the first `m` coordinates.
    Abschnitt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NormKind {
    Wiener,
    L2,
    /// Monte Carlo; needs `--seed`.
    Lp,
}

#[derive(Subcommand, Debug)]
enum ExtendCmd {
    /// The twisted series `f_ξ` for `ξ = r e^{it}`.
    Twist {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value = "diagonal")]
        scheme: String,
    },
    /// Product Poisson kernel.
    Kernel {
        #[arg(long)]
        r: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[arg(long, default_value = "diagonal")]
        scheme: String,
    },
    /// Grid radial maximal function at a boundary point.
    Maximal {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        theta: Vec<f64>,
        /// Radii; `1 - 2^{-k}`, `k ≤ 40`, when omitted.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long, default_value = "diagonal")]
        scheme: String,
    },
}

#[derive(Subcommand, Debug)]
enum RadialCmd {
    /// `r_k = 1 - k^{-1/3}`; with `--count`, the first `count` radii.
    MzSeq {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Radius sequence for a scheme, up to the first radius past `--stop`.
    BuildSeq {
        #[arg(long, default_value_t = 0.999)]
        stop: f64,
        #[arg(long, default_value = "diagonal")]
        scheme: String,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
    /// Kernel ratio `P_r(θ)/P_{r_k}(θ)`.
    Ratio {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        rk: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[arg(long, default_value = "diagonal")]
        scheme: String,
    },
    /// Block path for explicit boundaries, or Monte Carlo boundaries with `--p0`.
    BlockPath {
        #[arg(long, value_delimiter = ',')]
        boundaries: Option<Vec<usize>>,
        #[arg(long)]
        p0: Option<f64>,
        #[arg(long, default_value_t = 4)]
        blocks: usize,
        /// Random tuples per block instead of full enumeration.
        #[arg(long)]
        tuples: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum SpecialCmd {
    /// The bump-product function `f` with `--factors` factors.
    F {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 200)]
        factors: usize,
    },
    G {
        #[command(flatten)]
        point: Point,
    },
    U {
        #[command(flatten)]
        point: Point,
    },
    /// Poisson extension of the Riesz product at `r e^{iθ}`.
    Riesz {
        #[arg(long, default_value_t = 3)]
        base: u32,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
    },
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Run the experiment in a JSON config file.
    Run { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polytorus: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse(_) => 2,
        Error::Resource(_) => 4,
        Error::Domain(_) | Error::Range(_) | Error::Spectrum(_) | Error::Io(_) => 3,
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn require_seed(g: &Global) -> polytorus::Result<u64> {
    g.seed.ok_or_else(|| config_err("this subcommand is stochastic and needs --seed"))
}

fn read_input(path: &Path) -> polytorus::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn read_series(path: &Path) -> polytorus::Result<FourierSeries> {
    FourierSeries::from_text(&read_input(path)?)
}

fn parse_complex(s: &str) -> polytorus::Result<Complex64> {
    let bad = || Error::Parse(format!("bad coefficient {s:?}; expected re or re:im"));
    let (re, im) = s.split_once(':').unwrap_or((s, "0"));
    Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?))
}

/// `diagonal`, `power:<alpha>` or `explicit:<m1>,<m2>,…`.
fn parse_scheme(s: &str) -> polytorus::Result<RadialScheme> {
    let bad = || config_err(format!("bad scheme {s:?}"));
    let scheme = match s.split_once(':') {
        None if s == "diagonal" => RadialScheme::Diagonal,
        Some(("power", a)) => RadialScheme::Power { alpha: a.parse().map_err(|_| bad())? },
        Some(("explicit", t)) => RadialScheme::Explicit {
            table: t.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?,
        },
        _ => return Err(bad()),
    };
    scheme.validate()?;
    Ok(scheme)
}

fn fmt_complex(z: Complex64) -> String {
    format!("{},{}", fmt_f64(z.re), fmt_f64(z.im))
}

fn emit(g: &Global, data: &str) -> polytorus::Result<()> {
    match &g.out {
        Some(path) => std::fs::write(path, data)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

fn execute(cli: &Cli) -> polytorus::Result<()> {
    let g = &cli.global;
    let data = match &cli.command {
        Command::Bohr(c) => bohr(c)?,
        Command::Series(c) => series(g, c)?,
        Command::Extend(c) => extend(c)?,
        Command::Radial(c) => radial(g, c)?,
        Command::Special(c) => special(c)?,
        Command::Experiment(ExperimentCmd::Run { config }) => experiment(g, config)?,
    };
    emit(g, &data)
}

fn bohr(c: &BohrCmd) -> polytorus::Result<String> {
    match c {
        BohrCmd::Lift { n, coeff, input } => {
            let mut terms = Vec::new();
            if let Some(path) = input {
                for raw in read_input(path)?.lines() {
                    let l = raw.trim();
                    if l.is_empty() || l.starts_with('#') {
                        continue;
                    }
                    let (k, a) = l
                        .split_once("->")
                        .ok_or_else(|| Error::Parse(format!("expected `n -> re,im`, got {l:?}")))?;
                    let k = k.trim().parse().map_err(|_| Error::Parse(format!("bad integer in {l:?}")))?;
                    terms.push((k, parse_complex(&a.trim().replacen(',', ":", 1))?));
                }
            }
            if !coeff.is_empty() && coeff.len() != n.len() {
                return Err(config_err("give one --coeff per --n, or none"));
            }
            for (i, &k) in n.iter().enumerate() {
                let a = coeff.get(i).map_or(Ok(Complex64::new(1.0, 0.0)), |s| parse_complex(s))?;
                terms.push((k, a));
            }
            Ok(lift_dirichlet(&DirichletSeries::from_terms(terms)?)?.to_text())
        }
        BohrCmd::Unlift { input } => {
            let d = unlift(&read_series(input)?)?;
            Ok(d.terms().map(|(n, a)| format!("{n} -> {}\n", fmt_complex(a))).collect())
        }
    }
}

fn series(g: &Global, c: &SeriesCmd) -> polytorus::Result<String> {
    match c {
        SeriesCmd::Eval { input, point } => Ok(line(fmt_complex(read_series(input)?.evaluate(&point.polydisc()?)))),
        SeriesCmd::Norm { input, kind, p } => {
            let f = read_series(input)?;
            Ok(match kind {
                NormKind::Wiener => line(fmt_f64(f.wiener_norm())),
                NormKind::L2 => line(fmt_f64(f.l2_norm())),
                NormKind::Lp => {
                    let seed = require_seed(g)?;
                    let samples = g.samples.unwrap_or(10_000);
                    let pool = pool(g.workers)?;
                    let e = pool.install(|| f.lp_norm_mc(*p, samples, &SeedStream::new(seed)))?;
                    line(format!("{},{}", fmt_f64(e.estimate), fmt_f64(e.std_error)))
                }
            })
        }
        SeriesCmd::Abschnitt { input, m } => Ok(read_series(input)?.abschnitt(*m).to_text()),
    }
}

fn pool(workers: usize) -> polytorus::Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(config_err("--workers must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))
}

fn extend(c: &ExtendCmd) -> polytorus::Result<String> {
    match c {
        ExtendCmd::Twist { input, r, t, scheme } => {
            Ok(twist(&read_series(input)?, Complex64::from_polar(*r, *t), &parse_scheme(scheme)?)?.to_text())
        }
        ExtendCmd::Kernel { r, theta, scheme } => Ok(line(fmt_f64(product_poisson_kernel(
            *r,
            &TorusPoint::new(theta.clone()),
            &parse_scheme(scheme)?,
        )?))),
        ExtendCmd::Maximal { input, theta, grid, scheme } => {
            let grid = grid.clone().unwrap_or_else(default_radius_grid);
            Ok(line(fmt_f64(radial_maximal(
                &read_series(input)?,
                &TorusPoint::new(theta.clone()),
                &grid,
                &parse_scheme(scheme)?,
            )?)))
        }
    }
}

fn radial(g: &Global, c: &RadialCmd) -> polytorus::Result<String> {
    match c {
        RadialCmd::MzSeq { k, count } => match (k, count) {
            (Some(0), _) => Err(config_err("k starts at 1")),
            (Some(k), None) => Ok(line(fmt_f64(mz_default_radius(*k)))),
            (None, Some(n)) => Ok((1..=*n).map(|k| line(fmt_f64(mz_default_radius(k)))).collect()),
            _ => Err(config_err("give exactly one of --k and --count")),
        },
        RadialCmd::BuildSeq { stop, scheme, limit } => {
            let seq = build_mz_sequence(&parse_scheme(scheme)?, *stop)?;
            Ok(seq.to_vec(*limit)?.into_iter().map(|r| line(fmt_f64(r))).collect())
        }
        RadialCmd::Ratio { r, rk, theta, scheme } => Ok(line(fmt_f64(kernel_ratio(
            *r,
            *rk,
            &TorusPoint::new(theta.clone()),
            &parse_scheme(scheme)?,
        )?))),
        RadialCmd::BlockPath { boundaries, p0, blocks, tuples } => {
            let bounds = match (boundaries, p0) {
                (Some(b), None) => b.clone(),
                (None, Some(p0)) => {
                    let seed = require_seed(g)?;
                    let samples = g.samples.unwrap_or(1000);
                    pool(g.workers)?
                        .install(|| choose_blocks_mc(0, *blocks, *p0, samples, &SeedStream::new(seed)))?
                }
                _ => return Err(config_err("give exactly one of --boundaries and --p0")),
            };
            let schedule = BlockSchedule::new(bounds)?;
            let path = match tuples {
                Some(t) => sampled_block_path(&schedule, *t, &SeedStream::new(require_seed(g)?).channel(1))?,
                None => block_path(&schedule)?,
            };
            Ok(path.to_text())
        }
    }
}

fn special(c: &SpecialCmd) -> polytorus::Result<String> {
    Ok(match c {
        SpecialCmd::F { point, factors } => {
            let cx = Counterexample::new(CounterexampleParams::new(*factors))?;
            line(fmt_complex(cx.value(&point.polydisc()?)?))
        }
        SpecialCmd::G { point } => line(fmt_complex(example_g(&point.polydisc()?))),
        SpecialCmd::U { point } => line(fmt_complex(example_u(&point.polydisc()?))),
        SpecialCmd::Riesz { base, depth, r, theta } => {
            line(fmt_f64(RieszProductMeasure::new(*base, *depth)?.poisson(*r, *theta)?))
        }
    })
}

fn experiment(g: &Global, path: &Path) -> polytorus::Result<String> {
    let mut doc: serde_json::Value =
        serde_json::from_str(&read_input(path)?).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| config_err("the config must be a JSON object"))?;
    if let Some(seed) = g.seed {
        obj.insert("seed".into(), seed.into());
    }
    if !obj.contains_key("seed") {
        return Err(config_err("experiments need a seed, in the config or via --seed"));
    }
    if let Some(s) = g.samples {
        obj.insert("samples".into(), s.into());
    }
    if let Some(d) = g.dim {
        obj.insert("dim".into(), d.into());
    }
    let config: ExperimentConfig = serde_json::from_value(doc).map_err(|e| config_err(e.to_string()))?;
    let result = run(&config, g.workers)?;
    if !result.passed {
        let failed: Vec<&str> = result.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        eprintln!("polytorus: failed checks: {}", failed.join(", "));
    }
    match g.format {
        Format::Csv => result.to_csv(),
        Format::Json => result.to_json(),
    }
}
