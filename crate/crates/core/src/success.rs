//! Closed-form maximum success probabilities.
//!
//! Every quantum scheme is a sum over Young diagrams of `n` boxes:
//!
//! | scheme            | summand / n!                 |
//! |-------------------|------------------------------|
//! | non-extended      | `min(D_ρ, m_ρ) · D_ρ`        |
//! | extended, `|R|`   | `min(m_ρ·|R|, D_ρ) · D_ρ`    |
//! | extended          | `D_ρ²` over `rows(ρ) ≤ d`    |
//!
//! Sums are exact rationals. Enumeration is refused with
//! [`Error::FeasibilityExceeded`] once the partition count passes a limit, so an
//! estimate can never masquerade as an exact value.

use std::cmp::min;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, partition_count, Partition};
use crate::repmeasure::{dim_irrep, factorial, mult_irrep};

/// Default cap on the number of partitions an exact sum may visit.
pub const DEFAULT_PARTITION_LIMIT: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Classical,
    Nonextended,
    ExtendedLimited,
    Extended,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Classical => "classical",
            Scheme::Nonextended => "nonextended",
            Scheme::ExtendedLimited => "extended-limited",
            Scheme::Extended => "extended",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Scheme::Classical),
            "nonextended" => Ok(Scheme::Nonextended),
            "extended-limited" => Ok(Scheme::ExtendedLimited),
            "extended" => Ok(Scheme::Extended),
            other => Err(Error::InvalidArgument(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Ancilla dimension `|R|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ancilla {
    Finite(BigUint),
    Unbounded,
}

impl Ancilla {
    pub fn finite(r: u64) -> Self {
        Ancilla::Finite(BigUint::from(r))
    }
}

impl fmt::Display for Ancilla {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ancilla::Finite(r) => write!(f, "{r}"),
            Ancilla::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeQuery {
    pub n: usize,
    pub d: usize,
    pub scheme: Scheme,
    pub ancilla: Ancilla,
}

impl SchemeQuery {
    pub fn new(n: usize, d: usize, scheme: Scheme) -> Self {
        let ancilla = match scheme {
            Scheme::Extended => Ancilla::Unbounded,
            _ => Ancilla::finite(1),
        };
        Self {
            n,
            d,
            scheme,
            ancilla,
        }
    }

    pub fn with_ancilla(mut self, ancilla: Ancilla) -> Self {
        self.ancilla = ancilla;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::InvalidArgument(format!(
                "n and d must be positive (n = {}, d = {})",
                self.n, self.d
            )));
        }
        if self.scheme == Scheme::ExtendedLimited {
            match &self.ancilla {
                Ancilla::Finite(r) if !r.is_zero() => {}
                _ => {
                    return Err(Error::InvalidArgument(
                        "extended-limited needs a finite ancilla dimension ≥ 1".into(),
                    ))
                }
            }
        }
        Ok(())
    }
}

/// One partition's share of a success probability sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub partition: Partition,
    pub dim: BigUint,
    pub mult: BigUint,
    /// Summand before the `1/n!` normalization.
    pub contribution: BigUint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuccessReport {
    pub query: SchemeQuery,
    pub p_exact: Option<BigRational>,
    pub p_float: f64,
    pub terms: Option<Vec<Term>>,
}

impl SuccessReport {
    fn from_exact(query: SchemeQuery, p: BigRational, terms: Option<Vec<Term>>) -> Self {
        let p_float = rational_to_f64(&p);
        Self {
            query,
            p_exact: Some(p),
            p_float,
            terms,
        }
    }

    /// The exact value; every report built by this module carries one.
    pub fn exact(&self) -> &BigRational {
        self.p_exact.as_ref().expect("exact value present")
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Knobs for exact enumeration.
#[derive(Clone, Debug)]
pub struct ExactOptions {
    pub partition_limit: u128,
    pub breakdown: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            partition_limit: DEFAULT_PARTITION_LIMIT,
            breakdown: false,
        }
    }
}

fn check_feasible(n: usize, opts: &ExactOptions) -> Result<()> {
    let count = partition_count(n);
    if count > opts.partition_limit {
        return Err(Error::FeasibilityExceeded {
            n,
            count,
            limit: opts.partition_limit,
        });
    }
    Ok(())
}

fn check_positive(n: usize, d: usize) -> Result<()> {
    SchemeQuery::new(n, d, Scheme::Classical).validate()
}

/// Sizes of the balanced split of `n` boxes into `d` color classes.
pub fn balanced_split(n: usize, d: usize) -> Vec<usize> {
    let (q, r) = n.div_rem(&d);
    (0..d).map(|k| if k < r { q + 1 } else { q }).collect()
}

/// Classical optimum `1 / ∏ n_k!` for the balanced split `n_k`.
pub fn p_classical(n: usize, d: usize) -> Result<BigRational> {
    check_positive(n, d)?;
    let den = balanced_split(n, d)
        .into_iter()
        .fold(BigUint::one(), |acc, k| acc * factorial(k));
    Ok(BigRational::new(BigInt::one(), den.into()))
}

/// Sums `weight(ρ, D_ρ, m_ρ) / n!` over the partitions produced by `parts`.
fn exact_sum<I, F>(
    n: usize,
    d: usize,
    parts: I,
    opts: &ExactOptions,
    weight: F,
) -> (BigRational, Option<Vec<Term>>)
where
    I: Iterator<Item = Partition>,
    F: Fn(&BigUint, &BigUint) -> BigUint,
{
    let mut total = BigUint::zero();
    let mut terms = opts.breakdown.then(Vec::new);
    for rho in parts {
        let dim = dim_irrep(&rho);
        let mult = mult_irrep(&rho, d);
        let contribution = weight(&dim, &mult);
        total += &contribution;
        if let Some(t) = terms.as_mut() {
            t.push(Term {
                partition: rho,
                dim,
                mult,
                contribution,
            });
        }
    }
    (BigRational::new(total.into(), factorial(n).into()), terms)
}

pub fn p_nonextended(n: usize, d: usize) -> Result<SuccessReport> {
    p_nonextended_with(n, d, &ExactOptions::default())
}

/// Non-extended optimum `(1/n!) Σ_ρ min(D_ρ, m_ρ) D_ρ`.
pub fn p_nonextended_with(n: usize, d: usize, opts: &ExactOptions) -> Result<SuccessReport> {
    check_positive(n, d)?;
    check_feasible(n, opts)?;
    let (p, terms) = exact_sum(
        n,
        d,
        enumerate_partitions(n, Some(d), None),
        opts,
        |dim, mult| min(dim, mult) * dim,
    );
    Ok(SuccessReport::from_exact(
        SchemeQuery::new(n, d, Scheme::Nonextended),
        p,
        terms,
    ))
}

pub fn p_extended_limited(n: usize, d: usize, ancilla_dim: &BigUint) -> Result<SuccessReport> {
    p_extended_limited_with(n, d, ancilla_dim, &ExactOptions::default())
}

/// Ancilla-limited optimum `(1/n!) Σ_ρ min(m_ρ |R|, D_ρ) D_ρ`.
pub fn p_extended_limited_with(
    n: usize,
    d: usize,
    ancilla_dim: &BigUint,
    opts: &ExactOptions,
) -> Result<SuccessReport> {
    let query = SchemeQuery::new(n, d, Scheme::ExtendedLimited)
        .with_ancilla(Ancilla::Finite(ancilla_dim.clone()));
    query.validate()?;
    check_feasible(n, opts)?;
    let (p, terms) = exact_sum(
        n,
        d,
        enumerate_partitions(n, Some(d), None),
        opts,
        |dim, mult| min(mult * ancilla_dim, dim.clone()) * dim,
    );
    Ok(SuccessReport::from_exact(query, p, terms))
}

pub fn p_extended(n: usize, d: usize) -> Result<SuccessReport> {
    p_extended_with(n, d, &ExactOptions::default())
}

/// Unbounded-ancilla optimum `(1/n!) Σ_{rows(ρ) ≤ d} D_ρ²`.
pub fn p_extended_with(n: usize, d: usize, opts: &ExactOptions) -> Result<SuccessReport> {
    check_positive(n, d)?;
    check_feasible(n, opts)?;
    let (p, terms) = exact_sum(
        n,
        d,
        enumerate_partitions(n, Some(d), None),
        opts,
        |dim, _| dim * dim,
    );
    Ok(SuccessReport::from_exact(
        SchemeQuery::new(n, d, Scheme::Extended),
        p,
        terms,
    ))
}

/// Plancherel mass of `{ρ : r₁(ρ) ≤ d}`, enumerated over first-row-capped
/// diagrams. Equals [`p_extended`] by conjugation symmetry of `D_ρ`.
pub fn plancherel_first_row_at_most(n: usize, d: usize) -> Result<BigRational> {
    check_positive(n, d)?;
    check_feasible(n, &ExactOptions::default())?;
    let total = enumerate_partitions(n, None, Some(d)).fold(BigUint::zero(), |acc, rho| {
        let dim = dim_irrep(&rho);
        acc + &dim * &dim
    });
    Ok(BigRational::new(total.into(), factorial(n).into()))
}

pub fn min_sufficient_ancilla(n: usize, d: usize) -> Result<BigUint> {
    min_sufficient_ancilla_with(n, d, &ExactOptions::default())
}

/// Smallest `|R|` with `m_ρ |R| ≥ D_ρ` for every diagram with at most `d` rows.
pub fn min_sufficient_ancilla_with(n: usize, d: usize, opts: &ExactOptions) -> Result<BigUint> {
    check_positive(n, d)?;
    check_feasible(n, opts)?;
    Ok(enumerate_partitions(n, Some(d), None)
        .map(|rho| Integer::div_ceil(&dim_irrep(&rho), &mult_irrep(&rho, d)))
        .max()
        .unwrap_or_else(BigUint::one))
}

/// Dispatches a query to the matching closed form.
pub fn evaluate(query: &SchemeQuery, opts: &ExactOptions) -> Result<SuccessReport> {
    query.validate()?;
    let (n, d) = (query.n, query.d);
    match (query.scheme, &query.ancilla) {
        (Scheme::Classical, _) => Ok(SuccessReport::from_exact(
            query.clone(),
            p_classical(n, d)?,
            None,
        )),
        (Scheme::Nonextended, _) => p_nonextended_with(n, d, opts),
        (Scheme::ExtendedLimited, Ancilla::Finite(r)) => p_extended_limited_with(n, d, r, opts),
        (Scheme::ExtendedLimited, Ancilla::Unbounded) => unreachable!("rejected by validate"),
        (Scheme::Extended, _) => p_extended_with(n, d, opts),
    }
}
