//! Radius sequences along which Poisson extensions of singular measures
//! still vanish.

use super::{admissibility_a, RadialScheme};
use crate::error::{Error, Result};

/// `r_k = 1 - k^{-1/3}` for `k = 1..=count`.
pub fn mz_default_sequence(count: usize) -> Vec<f64> {
    (1..=count).map(mz_default_radius).collect()
}

pub fn mz_default_radius(k: usize) -> f64 {
    1.0 - (k as f64).cbrt().recip()
}

/// `(r_{k+1} - r_k) / (1 - r_{k+1})^4` for the default sequence, evaluated
/// through the gaps `1 - r_k = k^{-1/3}`.
pub fn mz_summand_bound(k: usize) -> f64 {
    let g0 = (k as f64).cbrt().recip();
    let g1 = ((k + 1) as f64).cbrt().recip();
    (g0 - g1) / g1.powi(4)
}

/// Radii `anchor + i * step` for `i = 1..=count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Run {
    pub anchor: f64,
    pub step: f64,
    pub count: u64,
}

impl Run {
    pub fn get(&self, i: u64) -> f64 {
        debug_assert!(i >= 1 && i <= self.count);
        self.anchor + i as f64 * self.step
    }

    pub fn last(&self) -> f64 {
        self.get(self.count)
    }
}

/// Output of [`build_mz_sequence`]: `1/2` followed by one arithmetic run
/// per fill.
///
/// Near `r = 1` the steps are tiny (about `(1 - r)^4` for the diagonal
/// scheme), so the sequence is stored run-length encoded.
#[derive(Clone, Debug, PartialEq)]
pub struct MzSequence {
    scheme: RadialScheme,
    tol: f64,
    runs: Vec<Run>,
    stop: f64,
}

impl MzSequence {
    pub fn first(&self) -> f64 {
        0.5
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn len(&self) -> u64 {
        1 + self.runs.iter().map(|r| r.count).sum::<u64>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> f64 {
        self.runs.last().map_or(0.5, Run::last)
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(0.5).chain(
            self.runs
                .iter()
                .flat_map(|run| (1..=run.count).map(move |i| run.get(i))),
        )
    }

    /// Materializes the sequence; fails above `limit` elements.
    pub fn to_vec(&self, limit: u64) -> Result<Vec<f64>> {
        if self.len() > limit {
            return Err(Error::Resource(format!(
                "sequence has {} elements, above the limit {limit}",
                self.len()
            )));
        }
        Ok(self.iter().collect())
    }

    /// Re-checks the construction on the emitted radii.
    pub fn check(&self) -> Result<MzCheck> {
        let bound = |x: f64| -> Result<f64> {
            let (_, da) = admissibility_a(&self.scheme, x, self.tol)?;
            Ok((1.0 - x).powi(2) / da)
        };
        let mut report = MzCheck {
            step_bound_holds: true,
            strictly_increasing: true,
            gap_decay_holds: true,
            reaches_stop: self.last() > self.stop,
            fills: self.runs.len(),
            elements: self.len(),
            worst_step_ratio: 0.0,
        };
        let note = |d: f64, b: f64, report: &mut MzCheck| {
            report.strictly_increasing &= d > 0.0;
            report.step_bound_holds &= d <= b;
            report.worst_step_ratio = report.worst_step_ratio.max(d / b);
        };
        let mut prev = 0.5;
        for (fill_no, run) in self.runs.iter().enumerate() {
            let fill_start = prev;
            let first = run.get(1);
            note(first - prev, bound(first)?, &mut report);
            if run.count > 1 {
                // Within a run every radius is `anchor + i * step` to within
                // an ulp of 1, so consecutive differences (exact by Sterbenz)
                // are at most `step + 4ε`. The bound decreases in r, so the
                // last radius is binding.
                note(run.step + 4.0 * f64::EPSILON, bound(run.last())?, &mut report);
                report.strictly_increasing &= run.step > 2.0 * f64::EPSILON;
            }
            prev = run.last();
            let complete = fill_no + 1 < self.runs.len() || prev <= self.stop;
            if complete && 1.0 - prev > 0.75 * (1.0 - fill_start) {
                report.gap_decay_holds = false;
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MzCheck {
    pub step_bound_holds: bool,
    pub strictly_increasing: bool,
    pub gap_decay_holds: bool,
    pub reaches_stop: bool,
    pub fills: usize,
    pub elements: u64,
    /// Largest `(r_{k+1} - r_k) / bound(r_{k+1})` seen.
    pub worst_step_ratio: f64,
}

impl MzCheck {
    pub fn all_hold(&self) -> bool {
        self.step_bound_holds && self.strictly_increasing && self.gap_decay_holds && self.reaches_stop
    }
}

const MAX_FILLS: usize = 100_000;
const ADMISSIBILITY_TOL: f64 = 1e-12;

/// Halving-and-filling construction starting from `r_1 = 1/2`.
///
/// From the last radius `r`, the candidate is `r' = (1 + r)/2` with step
/// bound `b = (1 - r')^2 / A'(r')`. If `r' - r ≤ b` the next radius is `r'`,
/// otherwise `⌊(r' - r)/b⌋` equal steps of size `b` are taken. Every step
/// satisfies `r_{k+1} - r_k ≤ (1 - r_{k+1})^2 / A'(r_{k+1})`. Output stops
/// at the first radius above `stop`.
pub fn build_mz_sequence(scheme: &RadialScheme, stop: f64) -> Result<MzSequence> {
    scheme.validate()?;
    if !(stop > 0.5 && stop < 1.0) {
        return Err(Error::domain(format!("stop radius must lie in (1/2, 1), got {stop}")));
    }
    let tol = ADMISSIBILITY_TOL;
    let mut seq = MzSequence {
        scheme: scheme.clone(),
        tol,
        runs: Vec::new(),
        stop,
    };
    let mut r = 0.5;
    while r <= stop {
        if seq.runs.len() >= MAX_FILLS {
            return Err(Error::Resource(format!(
                "no progress past r = {r} after {MAX_FILLS} fills (stop {stop})"
            )));
        }
        let target = 0.5 * (1.0 + r);
        let (_, da) = admissibility_a(scheme, target, tol)?;
        let b = (1.0 - target).powi(2) / da;
        if target - r <= b {
            seq.runs.push(Run { anchor: r, step: target - r, count: 1 });
            r = seq.last();
            continue;
        }
        // Shrink the step so rounding of r + i*b cannot break the bound.
        let step = b * (1.0 - 1e-9) - 4.0 * f64::EPSILON;
        if step <= 2.0 * f64::EPSILON {
            return Err(Error::Resource(format!(
                "step bound {b:e} at r = {r} is below double precision resolution"
            )));
        }
        let mut count = ((target - r) / step).floor() as u64;
        let needed = ((stop - r) / step).floor() as u64 + 1;
        count = count.min(needed).max(1);
        while r + count as f64 * step > target && count > 1 {
            count -= 1;
        }
        let run = Run { anchor: r, step, count };
        seq.runs.push(run);
        r = run.last();
        if count == needed && r <= stop {
            // Rounding left us just short of `stop`; take one more step.
            seq.runs.last_mut().expect("just pushed").count += 1;
            r = seq.last();
        }
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sequence() {
        let r = mz_default_sequence(1000);
        assert_eq!(r[0], 0.0);
        assert!((r[7] - 0.5).abs() < 1e-15);
        assert!((r[999] - 0.9).abs() < 1e-15);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn summand_bound_is_bounded() {
        // (1 - r_{k+1})^{-4} (r_{k+1} - r_k) ~ k^{4/3} k^{-4/3} / 3.
        let max = (1..=10_000).map(mz_summand_bound).fold(0.0, f64::max);
        assert!(max < 1.0, "{max}");
        assert!((mz_summand_bound(10_000) - 1.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn diagonal_sequence() {
        let seq = build_mz_sequence(&RadialScheme::Diagonal, 0.9).unwrap();
        assert_eq!(seq.first(), 0.5);
        let v = seq.to_vec(1 << 20).unwrap();
        assert_eq!(v[0], 0.5);
        assert!(*v.last().unwrap() > 0.9);
        assert!(v[v.len() - 2] <= 0.9);
        for w in v.windows(2) {
            assert!(w[1] > w[0]);
            assert!(w[1] - w[0] <= (1.0 - w[1]).powi(4));
        }
        let check = seq.check().unwrap();
        assert!(check.all_hold(), "{check:?}");
        assert_eq!(check.elements, v.len() as u64);
    }

    #[test]
    fn power_and_explicit_sequences() {
        for scheme in [
            RadialScheme::Power { alpha: 2.0 },
            RadialScheme::Power { alpha: 1.5 },
            RadialScheme::Explicit { table: vec![1, 1, 2] },
        ] {
            let seq = build_mz_sequence(&scheme, 0.99).unwrap();
            let check = seq.check().unwrap();
            assert!(check.all_hold(), "{scheme:?}: {check:?}");
        }
    }

    #[test]
    fn endpoint_check_matches_exhaustive_pairs() {
        let scheme = RadialScheme::Explicit { table: vec![1, 1, 2, 3, 5, 8] };
        let seq = build_mz_sequence(&scheme, 0.99).unwrap();
        let v = seq.to_vec(1 << 22).unwrap();
        let mut worst: f64 = 0.0;
        for w in v.windows(2) {
            let (_, da) = admissibility_a(&scheme, w[1], ADMISSIBILITY_TOL).unwrap();
            worst = worst.max((w[1] - w[0]) / ((1.0 - w[1]).powi(2) / da));
        }
        let check = seq.check().unwrap();
        assert!(worst <= 1.0);
        assert!(check.all_hold() && worst <= check.worst_step_ratio, "{worst} vs {check:?}");
        // Tiny steps near 0.999 stay within the bound despite rounding.
        let deep = build_mz_sequence(&scheme, 0.999).unwrap().check().unwrap();
        assert!(deep.all_hold(), "{deep:?}");
    }

    #[test]
    fn bad_stop() {
        assert!(build_mz_sequence(&RadialScheme::Diagonal, 0.5).is_err());
        assert!(build_mz_sequence(&RadialScheme::Diagonal, 1.0).is_err());
    }
}
