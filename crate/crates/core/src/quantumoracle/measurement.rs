//! Optimal covariant measurement on `H_Q ⊗ H_R` and direct evaluation of
//! its success probability.
//!
//! The seed operator is `E = Σ_e |e⟩⟨e|` with
//! `⟨ρ,b,a,r|e⟩ = √(D_ρ/n!) · u^ρ_{a,e:b,r}`. For every `ρ` the columns
//! `(b, r)` of `u^ρ` are standard unit vectors: the first `min(m_ρ|R|, D_ρ)`
//! columns put their 1 in the rows `(a = k, e_max)`, and any remaining columns
//! are spread over extra vectors `e_1, e_2, …` one row `a` at a time. Columns
//! of `u^ρ` are then orthonormal, which is exactly covariant completeness.

use nalgebra::{DMatrix, DVector};

use super::decompose::IsotypicDecomposition;
use super::rep::PermutationRep;
use super::Tolerances;
use crate::error::{Error, Result};
use crate::repmeasure::factorial;
use num_traits::ToPrimitive;

#[derive(Clone, Debug)]
pub struct CovariantMeasurement {
    pub n: usize,
    pub d: usize,
    pub ancilla_dim: usize,
    /// `E^{QR}`.
    pub seed_operator: DMatrix<f64>,
    /// The mutually orthogonal vectors `|e⟩`, `e_max` first.
    pub vectors: Vec<DVector<f64>>,
    /// Index into `vectors` of the code state's direction.
    pub code_index: usize,
    /// Normalized `|Φ^{QR}⟩`.
    pub code_state: DVector<f64>,
}

impl CovariantMeasurement {
    /// Indices of every `|e⟩` whose norm ties the largest within `tol`.
    pub fn tied_code_indices(&self, tol: f64) -> Vec<usize> {
        let norms: Vec<f64> = self.vectors.iter().map(|v| v.norm_squared()).collect();
        let best = norms.iter().cloned().fold(0.0, f64::max);
        (0..norms.len())
            .filter(|&i| best - norms[i] <= tol)
            .collect()
    }

    /// Same measurement, code state along `vectors[index]`.
    pub fn with_code_state(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.code_index = index;
        out.code_state = self.vectors[index].normalize();
        out
    }

    /// Max-entry deviation of `Σ_σ T_σ E T_σ†` from the identity.
    pub fn completeness_residual(&self, rep: &PermutationRep) -> f64 {
        let dim = self.seed_operator.nrows();
        let mut sum = DMatrix::<f64>::zeros(dim, dim);
        for op in &rep.ops {
            let map = op.extended_map(self.ancilla_dim);
            for j in 0..dim {
                for i in 0..dim {
                    sum[(map[i], map[j])] += self.seed_operator[(i, j)];
                }
            }
        }
        (sum - DMatrix::identity(dim, dim)).amax()
    }
}

/// Builds the optimal seed operator and code state for ancilla dimension `|R|`.
pub fn build_optimal_measurement(
    decomp: &IsotypicDecomposition,
    ancilla_dim: usize,
) -> Result<CovariantMeasurement> {
    if ancilla_dim == 0 {
        return Err(Error::InvalidArgument(
            "ancilla dimension must be ≥ 1".into(),
        ));
    }
    let r_dim = ancilla_dim;
    let q_dim = decomp.d.pow(decomp.n as u32);
    let total = q_dim * r_dim;
    let n_fact = factorial(decomp.n).to_f64().unwrap();

    let extra_needed = decomp
        .components
        .iter()
        .map(|c| (c.mult * r_dim).saturating_sub(c.dim).div_ceil(c.dim))
        .max()
        .unwrap_or(0);
    let mut vectors = vec![DVector::<f64>::zeros(total); 1 + extra_needed];

    for c in &decomp.components {
        let weight = (c.dim as f64 / n_fact).sqrt();
        let columns = c.mult * r_dim;
        let kept = columns.min(c.dim);
        for col in 0..columns {
            let (b, r) = (col / r_dim, col % r_dim);
            let (e, a) = if col < kept {
                (0, col)
            } else {
                let rest = col - kept;
                (1 + rest / c.dim, rest % c.dim)
            };
            let q_vec = c.vector(b, a);
            let target = &mut vectors[e];
            for (qi, &amp) in q_vec.iter().enumerate() {
                target[qi * r_dim + r] += weight * amp;
            }
        }
    }

    let mut seed_operator = DMatrix::zeros(total, total);
    for v in &vectors {
        seed_operator += v * v.transpose();
    }
    let code_state = vectors[0].normalize();
    Ok(CovariantMeasurement {
        n: decomp.n,
        d: decomp.d,
        ancilla_dim,
        seed_operator,
        vectors,
        code_index: 0,
        code_state,
    })
}

/// Outcome of evaluating a measurement against the permutation channel.
#[derive(Clone, Debug, PartialEq)]
pub struct SuccessEvaluation {
    /// `(1/n!) Σ_σ ⟨Φ|T_σ† E_σ T_σ|Φ⟩`.
    pub probability: f64,
    /// Smallest eigenvalue over all `E_σ = T_σ E T_σ†`.
    pub min_povm_eigenvalue: f64,
    /// Smallest probability of any (applied, guessed) permutation pair.
    pub min_outcome_probability: f64,
    /// Largest deviation of a row of the guess distribution from summing to 1.
    pub normalization_residual: f64,
    pub completeness_residual: f64,
}

impl SuccessEvaluation {
    pub fn is_valid_povm(&self, tol: &Tolerances) -> bool {
        self.min_povm_eigenvalue >= -tol.positivity
            && self.min_outcome_probability >= -tol.positivity
            && self.completeness_residual <= tol.structural
    }
}

fn permuted(e: &DMatrix<f64>, map: &[usize]) -> DMatrix<f64> {
    let dim = e.nrows();
    let mut out = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            out[(map[i], map[j])] = e[(i, j)];
        }
    }
    out
}

fn permuted_vec(v: &DVector<f64>, map: &[usize]) -> DVector<f64> {
    let mut out = DVector::zeros(v.len());
    for (i, &j) in map.iter().enumerate() {
        out[j] = v[i];
    }
    out
}

/// Evaluates the success probability from the explicit POVM `{E_σ}`.
pub fn evaluate_success(meas: &CovariantMeasurement, rep: &PermutationRep) -> SuccessEvaluation {
    let r_dim = meas.ancilla_dim;
    let maps: Vec<Vec<usize>> = rep.ops.iter().map(|op| op.extended_map(r_dim)).collect();
    let phi = &meas.code_state;
    let order = rep.order();

    let mut total = 0.0;
    let mut min_eig = f64::INFINITY;
    let mut povm: Vec<DMatrix<f64>> = Vec::with_capacity(order);
    let mut moved: Vec<DVector<f64>> = Vec::with_capacity(order);
    for map in &maps {
        let e_sigma = permuted(&meas.seed_operator, map);
        let psi = permuted_vec(phi, map);
        total += psi.dot(&(&e_sigma * &psi));
        min_eig = min_eig.min(e_sigma.symmetric_eigenvalues().min());
        povm.push(e_sigma);
        moved.push(psi);
    }

    // P(guess τ | applied σ) = ⟨T_σ Φ|E_τ|T_σ Φ⟩
    let mut min_outcome = f64::INFINITY;
    let mut norm_resid: f64 = 0.0;
    for psi in &moved {
        let mut row = 0.0;
        for e_tau in &povm {
            let p = psi.dot(&(e_tau * psi));
            min_outcome = min_outcome.min(p);
            row += p;
        }
        norm_resid = norm_resid.max((row - 1.0).abs());
    }

    SuccessEvaluation {
        probability: total / order as f64,
        min_povm_eigenvalue: min_eig,
        min_outcome_probability: min_outcome,
        normalization_residual: norm_resid,
        completeness_residual: meas.completeness_residual(rep),
    }
}
