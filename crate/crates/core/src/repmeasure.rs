//! Irreducible representation data of the symmetric group.
//!
//! `D_ρ` comes from the hook-length formula, the multiplicity `m_ρ(d)` of the
//! irrep inside `(C^d)^{⊗n}` from the hook-content formula, and the Plancherel
//! weight is `D_ρ² / n!`. Exact values use big integers; the log-space variant
//! sums logarithms so it stays finite for shapes far beyond `n = 20`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::partitions::Partition;

/// Exact representation data of one partition at a given color count `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepData {
    pub partition: Partition,
    pub dim: BigUint,
    pub mult: BigUint,
    pub d: usize,
    pub plancherel: BigRational,
}

impl RepData {
    pub fn new(partition: &Partition, d: usize) -> Self {
        let dim = dim_irrep(partition);
        let plancherel = plancherel_from_dim(&dim, partition.size());
        Self {
            partition: partition.clone(),
            mult: mult_irrep(partition, d),
            dim,
            d,
            plancherel,
        }
    }
}

/// Natural logarithms of `D_ρ`, `m_ρ` and `μ_n(ρ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogRepData {
    pub log_dim: f64,
    /// `-inf` when the multiplicity vanishes.
    pub log_mult: f64,
    pub log_plancherel: f64,
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `ln n!` as a plain sum of logarithms.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn hook_product(hooks: &[usize]) -> BigUint {
    hooks
        .iter()
        .fold(BigUint::one(), |acc, &h| acc * BigUint::from(h))
}

fn exact_div(num: BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "hook formula division left a remainder");
    q
}

/// Dimension `D_ρ = n! / ∏ hooks` of the irrep labeled by `p`.
pub fn dim_irrep(p: &Partition) -> BigUint {
    let stats = p.cell_stats();
    exact_div(factorial(p.size()), &hook_product(&stats.hooks))
}

/// Multiplicity `m_ρ(d) = ∏ (d + content) / ∏ hooks` of the irrep `p` in
/// `(C^d)^{⊗n}`; zero when `p` has more than `d` rows.
pub fn mult_irrep(p: &Partition, d: usize) -> BigUint {
    if p.rows() > d {
        return BigUint::zero();
    }
    let stats = p.cell_stats();
    let num = stats.contents.iter().fold(BigUint::one(), |acc, &c| {
        // rows ≤ d keeps every d + content ≥ 1
        acc * BigUint::from((d as i64 + c) as u64)
    });
    exact_div(num, &hook_product(&stats.hooks))
}

fn plancherel_from_dim(dim: &BigUint, n: usize) -> BigRational {
    let num = dim * dim;
    BigRational::new(num.into(), factorial(n).into())
}

/// Plancherel weight `μ_n(ρ) = D_ρ² / n!`.
pub fn plancherel_weight(p: &Partition) -> BigRational {
    plancherel_from_dim(&dim_irrep(p), p.size())
}

/// Log-space representation data, built only from sums of logarithms.
pub fn log_rep_data(p: &Partition, d: usize) -> LogRepData {
    let stats = p.cell_stats();
    let ln_hooks: f64 = stats.hooks.iter().map(|&h| (h as f64).ln()).sum();
    let ln_nfact = ln_factorial(p.size());
    let log_dim = ln_nfact - ln_hooks;
    let log_mult = if p.rows() > d {
        f64::NEG_INFINITY
    } else {
        stats
            .contents
            .iter()
            .map(|&c| ((d as i64 + c) as f64).ln())
            .sum::<f64>()
            - ln_hooks
    };
    LogRepData {
        log_dim,
        log_mult,
        log_plancherel: 2.0 * log_dim - ln_nfact,
    }
}
