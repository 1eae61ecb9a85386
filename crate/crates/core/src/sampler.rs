//! Monte Carlo over the Plancherel measure.
//!
//! The RSK shape of a uniform random permutation of `n` is Plancherel
//! distributed, and its first row is the longest increasing subsequence. The
//! extended success probability is `P(r₁ ≤ d)`; the non-extended one is the
//! expectation of `min(1, m_ρ / D_ρ)`.
//!
//! Trial `i` draws from a ChaCha8 stream selected by `(seed, i)` and partial
//! sums are reduced over fixed-size chunks in trial order, so results do not
//! depend on how many rayon workers run them.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::repmeasure::log_rep_data;

/// Trials per reduction chunk. Changing it changes float round-off in the
/// non-extended estimator, so it is part of the reproducibility contract.
const CHUNK: u64 = 1024;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Extended,
    Nonextended,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::Extended => "extended",
            Estimator::Nonextended => "nonextended",
        })
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "extended" => Ok(Estimator::Extended),
            "nonextended" => Ok(Estimator::Nonextended),
            other => Err(Error::InvalidArgument(format!(
                "unknown estimator {other:?}"
            ))),
        }
    }
}

/// A seeded Monte Carlo estimate with its 95% interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRun {
    pub n: usize,
    pub d: usize,
    pub trials: u64,
    pub seed: u64,
    pub estimator: Estimator,
    pub estimate: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
}

/// First row, plus the whole shape when it was materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeSample {
    pub r1: usize,
    pub full_shape: Option<Partition>,
}

/// The random stream of trial `trial` under master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Fills `buf` with a uniform permutation of `0..buf.len()` (Fisher–Yates).
pub fn uniform_permutation<R: Rng + ?Sized>(buf: &mut Vec<u32>, n: usize, rng: &mut R) {
    buf.clear();
    buf.extend(0..n as u32);
    buf.shuffle(rng);
}

/// Longest strictly increasing subsequence length by patience sorting.
pub fn longest_increasing<T: Ord + Copy>(seq: &[T]) -> usize {
    let mut tops: Vec<T> = Vec::new();
    for &x in seq {
        let pos = tops.partition_point(|&t| t < x);
        if pos == tops.len() {
            tops.push(x);
        } else {
            tops[pos] = x;
        }
    }
    tops.len()
}

/// Shape of the RSK insertion tableau of a sequence of distinct values.
pub fn rsk_shape<T: Ord + Copy>(seq: &[T]) -> Partition {
    let mut rows: Vec<Vec<T>> = Vec::new();
    for &x in seq {
        let mut carry = x;
        let mut placed = false;
        for row in rows.iter_mut() {
            let pos = row.partition_point(|&t| t < carry);
            if pos == row.len() {
                row.push(carry);
                placed = true;
                break;
            }
            std::mem::swap(&mut row[pos], &mut carry);
        }
        if !placed {
            rows.push(vec![carry]);
        }
    }
    Partition::from_sorted_unchecked(rows.iter().map(Vec::len).collect())
}

/// One Plancherel draw of `r₁` for `n` boxes.
pub fn sample_r1<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    let mut buf = Vec::with_capacity(n);
    uniform_permutation(&mut buf, n, rng);
    longest_increasing(&buf)
}

/// One Plancherel draw of a whole shape of `n` boxes.
pub fn sample_shape<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ShapeSample {
    let mut buf = Vec::with_capacity(n);
    uniform_permutation(&mut buf, n, rng);
    let shape = rsk_shape(&buf);
    ShapeSample {
        r1: shape.first_row(),
        full_shape: Some(shape),
    }
}

fn check_args(n: usize, d: usize, trials: u64) -> Result<()> {
    if n == 0 || d == 0 || trials == 0 {
        return Err(Error::InvalidArgument(format!(
            "n, d and trials must be positive (n = {n}, d = {d}, trials = {trials})"
        )));
    }
    Ok(())
}

fn chunks(trials: u64) -> impl IndexedParallelIterator<Item = std::ops::Range<u64>> {
    let count = trials.div_ceil(CHUNK) as usize;
    (0..count).into_par_iter().map(move |c| {
        let c = c as u64;
        c * CHUNK..((c + 1) * CHUNK).min(trials)
    })
}

/// Counts of each `r₁` value over `trials` draws; index `k` holds `#{r₁ = k}`.
pub fn r1_histogram(n: usize, trials: u64, seed: u64) -> Vec<u64> {
    chunks(trials)
        .map(|range| {
            let mut hist = vec![0u64; n + 1];
            let mut buf = Vec::with_capacity(n);
            for t in range {
                let mut rng = trial_rng(seed, t);
                uniform_permutation(&mut buf, n, &mut rng);
                hist[longest_increasing(&buf)] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = z / denom * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt();
    // the bounds are exactly 0 and 1 at the extremes; pin them against rounding
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

fn binomial_run(n: usize, d: usize, trials: u64, seed: u64, successes: u64) -> SampleRun {
    let p = successes as f64 / trials as f64;
    SampleRun {
        n,
        d,
        trials,
        seed,
        estimator: Estimator::Extended,
        estimate: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        ci95: wilson_interval(successes, trials, Z95),
    }
}

/// Extended-scheme estimate from an already sampled histogram.
pub fn extended_from_histogram(hist: &[u64], n: usize, d: usize, seed: u64) -> SampleRun {
    let trials: u64 = hist.iter().sum();
    let successes: u64 = hist.iter().take(d + 1).sum();
    binomial_run(n, d, trials, seed, successes)
}

/// Estimates `μ_n{r₁ ≤ d}` with a Wilson 95% interval.
pub fn estimate_p_extended(n: usize, d: usize, trials: u64, seed: u64) -> Result<SampleRun> {
    check_args(n, d, trials)?;
    if d >= n {
        return Ok(binomial_run(n, d, trials, seed, trials));
    }
    let hist = r1_histogram(n, trials, seed);
    Ok(extended_from_histogram(&hist, n, d, seed))
}

/// `min(1, m_ρ/D_ρ)` evaluated in log space; 0 when `ρ` has more than `d` rows.
fn nonextended_weight(shape: &Partition, d: usize) -> f64 {
    if shape.rows() > d {
        return 0.0;
    }
    let l = log_rep_data(shape, d);
    (l.log_mult - l.log_dim).min(0.0).exp()
}

/// Estimates `E_μ[min(1, m_ρ/D_ρ)]`, the non-extended success probability.
pub fn estimate_p_nonextended(n: usize, d: usize, trials: u64, seed: u64) -> Result<SampleRun> {
    check_args(n, d, trials)?;
    let sums: Vec<(f64, f64)> = chunks(trials)
        .map(|range| {
            let mut buf = Vec::with_capacity(n);
            let (mut s, mut s2) = (0.0, 0.0);
            for t in range {
                let mut rng = trial_rng(seed, t);
                uniform_permutation(&mut buf, n, &mut rng);
                let w = nonextended_weight(&rsk_shape(&buf), d);
                s += w;
                s2 += w * w;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let t = trials as f64;
    let mean = s / t;
    let var = if trials > 1 {
        ((s2 - t * mean * mean) / (t - 1.0)).max(0.0)
    } else {
        0.0
    };
    let stderr = (var / t).sqrt();
    Ok(SampleRun {
        n,
        d,
        trials,
        seed,
        estimator: Estimator::Nonextended,
        estimate: mean,
        stderr,
        ci95: (
            (mean - Z95 * stderr).max(0.0),
            (mean + Z95 * stderr).min(1.0),
        ),
    })
}

pub fn estimate(
    estimator: Estimator,
    n: usize,
    d: usize,
    trials: u64,
    seed: u64,
) -> Result<SampleRun> {
    match estimator {
        Estimator::Extended => estimate_p_extended(n, d, trials, seed),
        Estimator::Nonextended => estimate_p_nonextended(n, d, trials, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Longest increasing subsequence by checking every subset.
    fn brute_lis(seq: &[u32]) -> usize {
        let n = seq.len();
        (0u32..1 << n)
            .filter(|mask| {
                let picked: Vec<u32> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| seq[i])
                    .collect();
                picked.windows(2).all(|w| w[0] < w[1])
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn permutations(n: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn patience_sorting_matches_brute_force() {
        for n in 1..=7 {
            for perm in permutations(n) {
                assert_eq!(longest_increasing(&perm), brute_lis(&perm), "{perm:?}");
                assert_eq!(rsk_shape(&perm).first_row(), brute_lis(&perm));
            }
        }
    }

    #[test]
    fn injected_permutations() {
        assert_eq!(longest_increasing(&[3, 1, 2]), 2);
        assert_eq!(rsk_shape(&[2, 1]).parts(), &[1, 1]);
        assert_eq!(rsk_shape(&[1, 2]).parts(), &[2]);
        assert_eq!(rsk_shape(&[3, 1, 2]).parts(), &[2, 1]);
    }

    #[test]
    fn single_box_always_one() {
        let mut rng = trial_rng(5, 0);
        for _ in 0..20 {
            assert_eq!(sample_r1(1, &mut rng), 1);
        }
    }

    #[test]
    fn shape_sample_consistency() {
        let mut rng = trial_rng(9, 3);
        for n in 1..30 {
            let s = sample_shape(n, &mut rng);
            let shape = s.full_shape.unwrap();
            assert_eq!(shape.size(), n);
            assert_eq!(shape.first_row(), s.r1);
        }
    }

    #[test]
    fn wilson_brackets() {
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.4);
        let (lo, hi) = wilson_interval(10, 10, Z95);
        assert!(lo < 1.0 && hi == 1.0);
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo + hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn d_at_least_n_is_certain() {
        let r = estimate_p_extended(10, 10, 100, 1).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.stderr, 0.0);
        let r = estimate_p_extended(10, 12, 100, 1).unwrap();
        assert_eq!(r.estimate, 1.0);
    }

    #[test]
    fn rejects_zero_arguments() {
        assert!(estimate_p_extended(0, 1, 10, 1).is_err());
        assert!(estimate_p_nonextended(3, 0, 10, 1).is_err());
        assert!(estimate_p_extended(3, 1, 0, 1).is_err());
    }

    #[test]
    fn runs_are_reproducible_across_pool_sizes() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    (
                        estimate_p_extended(40, 11, 5000, 17).unwrap(),
                        estimate_p_nonextended(20, 5, 5000, 17).unwrap(),
                    )
                })
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a, b);
        assert_eq!(a.0.estimate.to_bits(), b.0.estimate.to_bits());
        assert_eq!(a.1.estimate.to_bits(), b.1.estimate.to_bits());
    }

    #[test]
    fn estimator_names_parse() {
        assert_eq!(
            "extended".parse::<Estimator>().unwrap(),
            Estimator::Extended
        );
        assert_eq!(
            "nonextended".parse::<Estimator>().unwrap(),
            Estimator::Nonextended
        );
        assert!("both".parse::<Estimator>().is_err());
    }
}
