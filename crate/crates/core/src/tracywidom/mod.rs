//! The GUE Tracy–Widom distribution `F_TW` and its comparison with the
//! finite-`n` extended success probability `μ_n{r₁ ≤ d}`.
//!
//! Two independent evaluations are provided: the Hastings–McLeod route
//! ([`painleve`]) and the Airy-kernel Fredholm determinant ([`fredholm`]). Each
//! runs at two refinement levels and reports their gap as its error estimate.

pub mod airy;
pub mod fredholm;
pub mod ode;
pub mod painleve;
pub mod quadrature;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::partition_count;
use crate::sampler::{self, SampleRun};
use crate::success::{p_extended, rational_to_f64};

use fredholm::{fredholm_det, COARSE_NODES, FINE_NODES};
use painleve::PainleveSolver;

/// Largest gap tolerated between the two refinement levels of one method.
pub const CONVERGENCE_TOL: f64 = 1e-8;
pub const PAINLEVE_RTOL_COARSE: f64 = 1e-10;
pub const PAINLEVE_RTOL_FINE: f64 = 1e-12;
/// Exact enumeration replaces sampling in [`theorem_b_scan`] up to this many partitions.
pub const EXACT_SCAN_PARTITIONS: u128 = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Painleve,
    Fredholm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Painleve => "painleve",
            Method::Fredholm => "fredholm",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "painleve" => Ok(Method::Painleve),
            "fredholm" => Ok(Method::Fredholm),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// `F_TW` on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TWTable {
    pub xs: Vec<f64>,
    pub fs: Vec<f64>,
    pub method: Method,
    /// Largest refinement-level gap over the grid.
    pub err_est: f64,
}

fn check_finite(xs: &[f64]) -> Result<()> {
    match xs.iter().find(|x| !x.is_finite()) {
        Some(&x) => Err(Error::NonFinite(x)),
        None => Ok(()),
    }
}

fn painleve_values(xs: &[f64], cutoff: f64, rtol: f64) -> Result<Vec<f64>> {
    PainleveSolver::new(cutoff, rtol)
        .solve_at(xs)
        .into_iter()
        .zip(xs)
        .map(|(p, &x)| {
            p.map(|p| p.f_tw()).ok_or(Error::ConvergenceFailure {
                method: "painleve",
                x,
                gap: f64::INFINITY,
            })
        })
        .collect()
}

/// Painlevé values with a custom right cutoff, fine tolerance.
pub fn f_tw_painleve_with_cutoff(xs: &[f64], cutoff: f64) -> Result<Vec<f64>> {
    check_finite(xs)?;
    painleve_values(xs, cutoff, PAINLEVE_RTOL_FINE)
}

/// Evaluates `F_TW` on `xs` with both refinement levels of `method`.
pub fn tw_table(xs: &[f64], method: Method) -> Result<TWTable> {
    check_finite(xs)?;
    let (coarse, fine) = match method {
        Method::Painleve => (
            painleve_values(xs, painleve::DEFAULT_CUTOFF, PAINLEVE_RTOL_COARSE)?,
            painleve_values(xs, painleve::DEFAULT_CUTOFF, PAINLEVE_RTOL_FINE)?,
        ),
        Method::Fredholm => xs
            .par_iter()
            .map(|&x| (fredholm_det(x, COARSE_NODES), fredholm_det(x, FINE_NODES)))
            .unzip(),
    };
    let mut err_est: f64 = 0.0;
    for ((&x, c), f) in xs.iter().zip(&coarse).zip(&fine) {
        let gap = (c - f).abs();
        // written so that a NaN gap also fails
        if gap.is_nan() || gap > CONVERGENCE_TOL {
            return Err(Error::ConvergenceFailure {
                method: if method == Method::Painleve {
                    "painleve"
                } else {
                    "fredholm"
                },
                x,
                gap,
            });
        }
        err_est = err_est.max(gap);
    }
    Ok(TWTable {
        xs: xs.to_vec(),
        fs: fine.into_iter().map(|f| f.clamp(0.0, 1.0)).collect(),
        method,
        err_est,
    })
}

/// `F_TW(x)` by the chosen method.
pub fn f_tw(x: f64, method: Method) -> Result<f64> {
    Ok(tw_table(&[x], method)?.fs[0])
}

/// One named pass/fail line of the self test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    pub grid: Vec<f64>,
    pub painleve: Vec<f64>,
    pub fredholm: Vec<f64>,
    pub max_cross_gap: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub const CROSS_METHOD_TOL: f64 = 1e-6;
pub const LEFT_TAIL_X: f64 = -6.0;
pub const LEFT_TAIL_MAX: f64 = 1e-6;
pub const RIGHT_TAIL_X: f64 = 4.0;
/// `1 − F_TW(4)` is about `4.96e-8`.
pub const RIGHT_TAIL_MIN: f64 = 1.0 - 1e-7;

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Self test on the default 101-point grid over `[-6, 4]`.
pub fn tw_selftest() -> SelfTestReport {
    tw_selftest_on(&linspace(-6.0, 4.0, 101))
}

/// Cross-method agreement, monotonicity, derivative positivity and tails on `grid`.
pub fn tw_selftest_on(grid: &[f64]) -> SelfTestReport {
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, value: f64, threshold: f64| {
        checks.push(Check {
            name: name.to_string(),
            passed,
            value,
            threshold,
        })
    };

    let pl = tw_table(&grid, Method::Painleve);
    let fr = tw_table(&grid, Method::Fredholm);
    check(
        "painleve converged",
        pl.is_ok(),
        pl.as_ref().map_or(f64::NAN, |t| t.err_est),
        CONVERGENCE_TOL,
    );
    check(
        "fredholm converged",
        fr.is_ok(),
        fr.as_ref().map_or(f64::NAN, |t| t.err_est),
        CONVERGENCE_TOL,
    );
    let painleve = pl.map(|t| t.fs).unwrap_or_default();
    let fredholm = fr.map(|t| t.fs).unwrap_or_default();
    let both = painleve.len() == grid.len() && fredholm.len() == grid.len();

    let max_cross_gap = if both {
        painleve
            .iter()
            .zip(&fredholm)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::NAN
    };
    check(
        "cross-method gap",
        max_cross_gap <= CROSS_METHOD_TOL,
        max_cross_gap,
        CROSS_METHOD_TOL,
    );

    for (name, values) in [
        ("painleve increasing", &painleve),
        ("fredholm increasing", &fredholm),
    ] {
        let min_inc = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        check(name, both && min_inc > 0.0, min_inc, 0.0);
    }

    let h = 1e-3;
    let min_deriv = grid
        .par_iter()
        .map(|&x| (fredholm_det(x + h, FINE_NODES) - fredholm_det(x - h, FINE_NODES)) / (2.0 * h))
        .reduce(|| f64::INFINITY, f64::min);
    check("derivative positive", min_deriv > 0.0, min_deriv, 0.0);

    if both {
        if let Some(i) = grid.iter().position(|&x| x <= LEFT_TAIL_X) {
            let v = fredholm[i].max(painleve[i]);
            check("left tail", v <= LEFT_TAIL_MAX, v, LEFT_TAIL_MAX);
        }
        if let Some(i) = grid.iter().rposition(|&x| x >= RIGHT_TAIL_X) {
            let v = fredholm[i].min(painleve[i]);
            check("right tail", v >= RIGHT_TAIL_MIN, v, RIGHT_TAIL_MIN);
        }
    }

    let passed = checks.iter().all(|c| c.passed);
    SelfTestReport {
        grid,
        painleve,
        fredholm,
        max_cross_gap,
        checks,
        passed,
    }
}

/// Scaled first-row variable `(d − 2√n) / n^{1/6}`.
pub fn scaled_x(n: usize, d: usize) -> f64 {
    let nf = n as f64;
    (d as f64 - 2.0 * nf.sqrt()) / nf.powf(1.0 / 6.0)
}

/// `round(2√n + x n^{1/6})`.
pub fn rounded_d(n: usize, x: f64) -> i64 {
    let nf = n as f64;
    (2.0 * nf.sqrt() + x * nf.powf(1.0 / 6.0)).round() as i64
}

#[derive(Clone, Debug, PartialEq)]
pub enum PEstimate {
    Exact(BigRational),
    Sampled(SampleRun),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremBReport {
    pub n: usize,
    pub d: usize,
    /// Requested scaled position before rounding `d`.
    pub x_target: f64,
    /// Scaled position recomputed from the integer `d`.
    pub x: f64,
    pub p_est: PEstimate,
    pub p: f64,
    pub f_tw: f64,
    pub gap: f64,
}

impl TheoremBReport {
    pub fn stderr(&self) -> f64 {
        match &self.p_est {
            PEstimate::Exact(_) => 0.0,
            PEstimate::Sampled(run) => run.stderr,
        }
    }
}

/// Compares `μ_n{r₁ ≤ d}` against `F_TW` for every `(n, x)` pair, with
/// `d = round(2√n + x n^{1/6})`.
///
/// One histogram of `trials` draws per `n` serves all `x`; each sampled entry
/// equals `estimate_p_extended(n, d, trials, seed)` bit for bit.
pub fn theorem_b_scan(
    n_list: &[usize],
    x_list: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<TheoremBReport>> {
    check_finite(x_list)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let mut plan = Vec::new();
    for &n in n_list {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        for &x in x_list {
            let d = rounded_d(n, x);
            if d < 1 || d > n as i64 {
                return Err(Error::DOutOfRange { n, x, d });
            }
            plan.push((n, x, d as usize));
        }
    }

    let xs: Vec<f64> = plan.iter().map(|&(n, _, d)| scaled_x(n, d)).collect();
    let f_values = tw_table(&xs, Method::Fredholm)?.fs;

    let mut reports = Vec::with_capacity(plan.len());
    let mut hist_cache: Option<(usize, Vec<u64>)> = None;
    for (&(n, x_target, d), (&x, &f)) in plan.iter().zip(xs.iter().zip(&f_values)) {
        let p_est = if partition_count(n) <= EXACT_SCAN_PARTITIONS {
            PEstimate::Exact(p_extended(n, d)?.exact().clone())
        } else if d >= n {
            PEstimate::Sampled(sampler::estimate_p_extended(n, d, trials, seed)?)
        } else {
            if hist_cache.as_ref().map(|(m, _)| *m) != Some(n) {
                hist_cache = Some((n, sampler::r1_histogram(n, trials, seed)));
            }
            let hist = &hist_cache.as_ref().unwrap().1;
            PEstimate::Sampled(sampler::extended_from_histogram(hist, n, d, seed))
        };
        let p = match &p_est {
            PEstimate::Exact(r) => rational_to_f64(r),
            PEstimate::Sampled(run) => run.estimate,
        };
        reports.push(TheoremBReport {
            n,
            d,
            x_target,
            x,
            p_est,
            p,
            f_tw: f,
            gap: (p - f).abs(),
        });
    }
    Ok(reports)
}
