use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest tensor dimension `d^n` the oracle will build.
pub const MAX_TENSOR_DIM: usize = 243;
pub const MAX_BOXES: usize = 5;

/// `T_σ` on `(C^d)^{⊗n}`: box `k`'s tensor factor moves to slot `σ(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationOperator {
    /// Zero-based images `σ(k)`.
    pub sigma: Vec<usize>,
    /// `T_σ e_i = e_{index_map[i]}`.
    pub index_map: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

impl PermutationOperator {
    /// `T_σ v`.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(v.len());
        for (i, &j) in self.index_map.iter().enumerate() {
            out[j] = v[i];
        }
        out
    }

    /// `(T_σ ⊗ 1_R) v` for a vector on `H_Q ⊗ H_R` with `H_R` as the fast index.
    pub fn apply_extended(&self, v: &DVector<f64>, ancilla: usize) -> DVector<f64> {
        let mut out = DVector::zeros(v.len());
        for (i, &j) in self.index_map.iter().enumerate() {
            for r in 0..ancilla {
                out[j * ancilla + r] = v[i * ancilla + r];
            }
        }
        out
    }

    /// Index map of `T_σ ⊗ 1_R`.
    pub fn extended_map(&self, ancilla: usize) -> Vec<usize> {
        let mut map = vec![0; self.index_map.len() * ancilla];
        for (i, &j) in self.index_map.iter().enumerate() {
            for r in 0..ancilla {
                map[i * ancilla + r] = j * ancilla + r;
            }
        }
        map
    }

    /// Sorted cycle lengths of `σ`.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.sigma.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.sigma[k];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

/// The permutation representation of `S(n)` on `(C^d)^{⊗n}`.
#[derive(Clone, Debug)]
pub struct PermutationRep {
    pub n: usize,
    pub d: usize,
    /// All `n!` operators, identity first, in lexicographic order of `σ`.
    pub ops: Vec<PermutationOperator>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl PermutationRep {
    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn order(&self) -> usize {
        self.ops.len()
    }

    pub fn index_of(&self, sigma: &[usize]) -> Option<usize> {
        self.lookup.get(sigma).copied()
    }

    /// Index of `σ_a ∘ σ_b`.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        let sa = &self.ops[a].sigma;
        let composed: Vec<usize> = self.ops[b].sigma.iter().map(|&k| sa[k]).collect();
        self.lookup[&composed]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let s = &self.ops[a].sigma;
        let mut inv = vec![0; s.len()];
        for (k, &v) in s.iter().enumerate() {
            inv[v] = k;
        }
        self.lookup[&inv]
    }

    /// Largest entry-wise deviation from `T_σ T_τ = T_{στ}` over all pairs.
    pub fn group_law_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.order() {
            for b in 0..self.order() {
                let prod = &self.ops[a].matrix * &self.ops[b].matrix;
                let c = self.compose(a, b);
                worst = worst.max((prod - &self.ops[c].matrix).amax());
            }
        }
        worst
    }

    /// Largest entry-wise deviation from `T_σ^T T_σ = 1`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = DMatrix::<f64>::identity(self.dim(), self.dim());
        self.ops
            .iter()
            .map(|op| (op.matrix.transpose() * &op.matrix - &id).amax())
            .fold(0.0, f64::max)
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

fn operator(sigma: Vec<usize>, d: usize) -> PermutationOperator {
    let n = sigma.len();
    let dim = d.pow(n as u32);
    let mut place = vec![0usize; n];
    for (k, p) in place.iter_mut().enumerate() {
        *p = d.pow((n - 1 - k) as u32);
    }
    let index_map: Vec<usize> = (0..dim)
        .map(|i| (0..n).map(|k| (i / place[k]) % d * place[sigma[k]]).sum())
        .collect();
    let mut matrix = DMatrix::zeros(dim, dim);
    for (i, &j) in index_map.iter().enumerate() {
        matrix[(j, i)] = 1.0;
    }
    PermutationOperator {
        sigma,
        index_map,
        matrix,
    }
}

/// Builds `T_σ` for every `σ ∈ S(n)` on `(C^d)^{⊗n}`.
pub fn build_permutation_rep(n: usize, d: usize) -> Result<PermutationRep> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("n and d must be positive".into()));
    }
    let dim = d.checked_pow(n as u32).unwrap_or(usize::MAX);
    if n > MAX_BOXES || dim > MAX_TENSOR_DIM {
        return Err(Error::SizeGuard {
            n,
            d,
            cap: MAX_TENSOR_DIM,
        });
    }
    let ops: Vec<PermutationOperator> = permutations(n)
        .into_iter()
        .map(|s| operator(s, d))
        .collect();
    let lookup = ops
        .iter()
        .enumerate()
        .map(|(i, op)| (op.sigma.clone(), i))
        .collect();
    Ok(PermutationRep { n, d, ops, lookup })
}
