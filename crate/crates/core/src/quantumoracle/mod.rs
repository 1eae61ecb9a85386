//! Brute-force check of the extended success probability at tiny sizes.
//!
//! Builds `T_σ` on `(C^d)^{⊗n}`, decomposes it numerically, assembles the
//! optimal covariant measurement with an `|R|`-dimensional ancilla and
//! evaluates the success probability straight from the POVM elements.

pub mod decompose;
pub mod measurement;
pub mod rep;

pub use decompose::{decompose, Component, IsotypicDecomposition};
pub use measurement::{
    build_optimal_measurement, evaluate_success, CovariantMeasurement, SuccessEvaluation,
};
pub use rep::{build_permutation_rep, PermutationOperator, PermutationRep};

use num_bigint::BigUint;

use crate::error::Result;
use crate::success::{p_extended_limited, rational_to_f64};

/// Numerical tolerances used across the oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Entry-wise bound for identities such as completeness and group law.
    pub structural: f64,
    /// Eigenvalue floor for positive semidefiniteness.
    pub positivity: f64,
    /// Minimum relative gap between distinct eigenvalues.
    pub eigen_separation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structural: 1e-10,
            positivity: 1e-12,
            eigen_separation: 1e-8,
        }
    }
}

/// End-to-end comparison of the constructed measurement with the closed form.
#[derive(Clone, Debug)]
pub struct Verification {
    pub decomposition: IsotypicDecomposition,
    pub evaluation: SuccessEvaluation,
    pub closed_form: f64,
    pub deviation: f64,
}

impl Verification {
    pub fn passed(&self, tol: &Tolerances) -> bool {
        self.deviation <= tol.structural && self.evaluation.is_valid_povm(tol)
    }
}

/// Runs the whole oracle for `(n, d, |R|)`.
pub fn verify(n: usize, d: usize, ancilla_dim: usize) -> Result<Verification> {
    let rep = build_permutation_rep(n, d)?;
    let decomposition = decompose(&rep)?;
    let meas = build_optimal_measurement(&decomposition, ancilla_dim)?;
    let evaluation = evaluate_success(&meas, &rep);
    let closed_form =
        rational_to_f64(p_extended_limited(n, d, &BigUint::from(ancilla_dim))?.exact());
    Ok(Verification {
        deviation: (evaluation.probability - closed_form).abs(),
        decomposition,
        evaluation,
        closed_form,
    })
}
