//! Point-independent block paths and point-adapted level paths.
//!
//! A path is a sequence of radius vectors. Each vector has a head of equal
//! radii, an explicit block, and zeros after that.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::SeedStream;
use crate::series::fmt_f64;

/// Largest block width [`block_path`] enumerates.
pub const BLOCK_WIDTH_CAP: usize = 20;

/// Radius used in place of 1 on the head of adaptive paths.
pub const HEAD_CAP: f64 = 1.0 - 1e-6;

/// Coordinate cap for [`choose_blocks_mc`].
const BLOCK_SEARCH_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct PathStep {
    pub head_len: usize,
    pub head_radius: f64,
    pub block: Vec<f64>,
}

impl PathStep {
    /// Radius of the 1-based coordinate `n`.
    pub fn radius(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        if n <= self.head_len {
            self.head_radius
        } else {
            self.block.get(n - self.head_len - 1).copied().unwrap_or(0.0)
        }
    }

    /// Number of leading coordinates that may be nonzero.
    pub fn support(&self) -> usize {
        self.head_len + self.block.len()
    }

    /// The first `m` radii.
    pub fn radii(&self, m: usize) -> Vec<f64> {
        (1..=m).map(|n| self.radius(n)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproachPath {
    steps: Vec<PathStep>,
    monotone: bool,
}

impl ApproachPath {
    /// Validates radii and records whether every coordinate is
    /// nondecreasing along the path.
    pub fn new(steps: Vec<PathStep>) -> Result<Self> {
        for (k, s) in steps.iter().enumerate() {
            let bad = std::iter::once(s.head_radius)
                .chain(s.block.iter().copied())
                .find(|r| !(0.0..=1.0).contains(r));
            if let Some(r) = bad {
                return Err(Error::domain(format!("step {k} has radius {r} outside [0, 1]")));
            }
        }
        let monotone = steps.windows(2).all(|w| {
            let m = w[0].support().max(w[1].support());
            (1..=m).all(|n| w[0].radius(n) <= w[1].radius(n))
        });
        Ok(ApproachPath { steps, monotone })
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Whether `r_{n,k}` is nondecreasing in `k` for every `n`.
    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// One step per line: `head_len head_radius | b1,b2,…`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&format!("{} {} |", s.head_len, fmt_f64(s.head_radius)));
            if !s.block.is_empty() {
                out.push(' ');
                let block: Vec<String> = s.block.iter().map(|&b| fmt_f64(b)).collect();
                out.push_str(&block.join(","));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse(format!("path line {}: {m}: {line:?}", i + 1));
            let (head, block) = line.split_once('|').ok_or_else(|| err("missing '|'"))?;
            let mut head = head.split_whitespace();
            let head_len = head
                .next()
                .and_then(|h| h.parse().ok())
                .ok_or_else(|| err("bad head length"))?;
            let head_radius = head
                .next()
                .and_then(|h| h.parse().ok())
                .ok_or_else(|| err("bad head radius"))?;
            if head.next().is_some() {
                return Err(err("trailing fields before '|'"));
            }
            let block = block.trim();
            let block = if block.is_empty() {
                Vec::new()
            } else {
                block
                    .split(',')
                    .map(|b| b.trim().parse::<f64>().map_err(|_| err("bad block radius")))
                    .collect::<Result<_>>()?
            };
            steps.push(PathStep { head_len, head_radius, block });
        }
        ApproachPath::new(steps)
    }
}

/// Block boundaries `m_1 < m_2 < ⋯` with the frozen head radius `1 - 1/m_k`.
///
/// Block `k` covers coordinates `m_{k-1} < n ≤ m_k` (with `m_0 = 0`) and, in
/// the full path, runs through all `2^{m_k - m_{k-1}}` tuples of `0` and
/// `1/2` while the first `m_{k-1}` coordinates sit at `1 - 1/m_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSchedule {
    boundaries: Vec<usize>,
}

impl BlockSchedule {
    pub fn new(boundaries: Vec<usize>) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::config("need at least one block boundary"));
        }
        if boundaries[0] == 0 || boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(format!(
                "block boundaries must be positive and strictly increasing: {boundaries:?}"
            )));
        }
        Ok(BlockSchedule { boundaries })
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn blocks(&self) -> usize {
        self.boundaries.len()
    }

    /// `(head_len, head_radius)` of block `k` (0-based).
    pub fn head(&self, k: usize) -> (usize, f64) {
        if k == 0 {
            (0, 0.0)
        } else {
            let m = self.boundaries[k - 1];
            (m, 1.0 - 1.0 / m as f64)
        }
    }

    /// Coordinates of block `k` as a 1-based inclusive range.
    pub fn block_range(&self, k: usize) -> std::ops::RangeInclusive<usize> {
        let (lo, _) = self.head(k);
        lo + 1..=self.boundaries[k]
    }

    pub fn width(&self, k: usize) -> usize {
        self.block_range(k).count()
    }

    pub fn max_width(&self) -> usize {
        (0..self.blocks()).map(|k| self.width(k)).max().unwrap_or(0)
    }

    /// Minimum and maximum over the steps of block `k` of the separable
    /// quantity `Σ_n term(n, r_n)`, where `term(n, 0)` must vanish off the
    /// head. Exact over all `2^width` tuples without enumerating them.
    pub fn block_extremes(&self, k: usize, term: impl Fn(usize, f64) -> f64) -> (f64, f64) {
        let (h, hr) = self.head(k);
        let head: f64 = (1..=h).map(|n| term(n, hr)).sum();
        let (mut lo, mut hi) = (head, head);
        for n in self.block_range(k) {
            let a = term(n, 0.0);
            let b = term(n, 0.5);
            lo += a.min(b);
            hi += a.max(b);
        }
        (lo, hi)
    }
}

/// The full enumeration path of a schedule whose blocks are at most
/// [`BLOCK_WIDTH_CAP`] wide. Within a block, tuple `i` puts `1/2` on the
/// coordinates given by the set bits of `i`.
///
/// The enumeration revisits 0 after 1/2 on every block coordinate, so the
/// result is not coordinatewise monotone; only the frozen head radii grow.
pub fn block_path(schedule: &BlockSchedule) -> Result<ApproachPath> {
    let w = schedule.max_width();
    if w > BLOCK_WIDTH_CAP {
        return Err(Error::config(format!(
            "block width {w} exceeds the enumeration cap {BLOCK_WIDTH_CAP}; use sampled_block_path"
        )));
    }
    let mut steps = Vec::new();
    for k in 0..schedule.blocks() {
        let (head_len, head_radius) = schedule.head(k);
        let width = schedule.width(k);
        for i in 0u64..1 << width {
            let block = (0..width)
                .map(|b| if i >> b & 1 == 1 { 0.5 } else { 0.0 })
                .collect();
            steps.push(PathStep { head_len, head_radius, block });
        }
    }
    ApproachPath::new(steps)
}

/// Like [`block_path`], but with `tuples` random `{0, 1/2}` tuples per
/// block drawn from substream `k` of `stream`.
pub fn sampled_block_path(
    schedule: &BlockSchedule,
    tuples: usize,
    stream: &SeedStream,
) -> Result<ApproachPath> {
    let mut steps = Vec::new();
    for k in 0..schedule.blocks() {
        let (head_len, head_radius) = schedule.head(k);
        let mut rng = stream.substream(k as u64);
        for _ in 0..tuples {
            let block = (0..schedule.width(k))
                .map(|_| if rng.gen::<bool>() { 0.5 } else { 0.0 })
                .collect();
            steps.push(PathStep { head_len, head_radius, block });
        }
    }
    ApproachPath::new(steps)
}

/// Greedy block boundaries for the weights `1/n`.
///
/// Starting from `start`, each new boundary is the smallest `N` for which
/// the empirical probability that `Σ_{m_k < n ≤ N} |cos θ_n|/n ≥ 1` is at
/// least `p0`. Sample `i` of block `k` draws its angles from substream `i`
/// of channel `k`.
pub fn choose_blocks_mc(
    start: usize,
    blocks: usize,
    p0: f64,
    samples: usize,
    stream: &SeedStream,
) -> Result<Vec<usize>> {
    if !(0.0..1.0).contains(&p0) {
        return Err(Error::config(format!("p0 must lie in [0, 1), got {p0}")));
    }
    if samples < 100 {
        return Err(Error::config(format!("need at least 100 samples, got {samples}")));
    }
    let mut out = Vec::with_capacity(blocks);
    let mut m = start;
    for k in 0..blocks {
        if p0 == 0.0 {
            m += 1;
            out.push(m);
            continue;
        }
        let channel = stream.channel(k as u64);
        let mut hits: Vec<usize> = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = channel.substream(i);
                let mut sum = 0.0;
                let mut n = m;
                while sum < 1.0 {
                    n += 1;
                    if n > BLOCK_SEARCH_CAP {
                        return usize::MAX;
                    }
                    let th: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
                    sum += th.cos().abs() / n as f64;
                }
                n
            })
            .collect();
        hits.sort_unstable();
        let rank = ((p0 * samples as f64).ceil() as usize).clamp(1, samples);
        let n = hits[rank - 1];
        if n == usize::MAX {
            return Err(Error::Resource(format!(
                "block {} needs more than {BLOCK_SEARCH_CAP} coordinates at p0 = {p0}",
                k + 1
            )));
        }
        m = n;
        out.push(m);
    }
    Ok(out)
}

/// Per-coordinate values `n, r ↦ v_n(r)` that an adaptive path maximizes.
pub trait TermOracle: Sync {
    fn value(&self, n: usize, r: f64) -> f64;

    /// An upper bound for `value(n, r)`; used to skip grid radii.
    fn upper_bound(&self, _n: usize, _r: f64) -> f64 {
        f64::INFINITY
    }
}

impl<F: Fn(usize, f64) -> f64 + Sync> TermOracle for F {
    fn value(&self, n: usize, r: f64) -> f64 {
        self(n, r)
    }
}

/// `1 - 2^{-i}` for `i = 1..=30`, capped at [`HEAD_CAP`] and deduplicated.
pub fn default_adaptive_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (1..=30).map(|i| (1.0 - 0.5f64.powi(i)).min(HEAD_CAP)).collect();
    g.dedup();
    g
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveReport {
    pub path: ApproachPath,
    /// Block sums `Σ v_n(r'_n)`; the last entry is partial when the
    /// coordinate cap stopped the search.
    pub block_sums: Vec<f64>,
    /// Levels whose target `4^ℓ` was met.
    pub levels_reached: usize,
    pub coordinates_used: usize,
    /// Chosen radii `r'_n`, `n = 1..=coordinates_used`.
    pub radii: Vec<f64>,
}

impl AdaptiveReport {
    pub fn complete(&self, levels: usize) -> bool {
        self.levels_reached >= levels
    }
}

/// Level path for one boundary point.
///
/// Coordinate `n` gets the grid radius `r'_n` maximizing the oracle. Level
/// `ℓ = 1..=levels` collects coordinates until `Σ v_n(r'_n) ≥ 4^ℓ`. Step
/// `ℓ` puts [`HEAD_CAP`] on all earlier levels, `r'_n` on level `ℓ`, and 0
/// beyond. When `coord_cap` is hit the path ends with the partial level.
pub fn adaptive_block_path(
    oracle: &impl TermOracle,
    levels: usize,
    coord_cap: usize,
    grid: &[f64],
) -> Result<AdaptiveReport> {
    if grid.is_empty() || grid.iter().any(|r| !(0.0..=HEAD_CAP).contains(r)) {
        return Err(Error::config(format!("adaptive grid must be nonempty and inside [0, {HEAD_CAP}]")));
    }
    let mut radii = Vec::new();
    let mut block_sums = Vec::new();
    let mut steps = Vec::new();
    let mut levels_reached = 0;
    let mut n = 0;
    let mut order: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
    for level in 1..=levels {
        let target = 4f64.powi(level as i32);
        let head_len = n;
        let mut sum = 0.0;
        while sum < target && n < coord_cap {
            n += 1;
            order.clear();
            order.extend(grid.iter().map(|&r| (oracle.upper_bound(n, r), r)));
            // Largest bound first; stop once no bound beats the best value.
            order.sort_by(|a, b| b.0.total_cmp(&a.0));
            let (mut best, mut best_r) = (f64::NEG_INFINITY, grid[0]);
            for &(bound, r) in &order {
                if bound <= best {
                    break;
                }
                let v = oracle.value(n, r);
                if v > best {
                    best = v;
                    best_r = r;
                }
            }
            radii.push(best_r);
            sum += best;
        }
        block_sums.push(sum);
        steps.push(PathStep {
            head_len,
            head_radius: if head_len == 0 { 0.0 } else { HEAD_CAP },
            block: radii[head_len..n].to_vec(),
        });
        if sum < target {
            break;
        }
        levels_reached = level;
    }
    Ok(AdaptiveReport {
        path: ApproachPath::new(steps)?,
        block_sums,
        levels_reached,
        coordinates_used: n,
        radii,
    })
}
