//! Numerical isotypic decomposition of the permutation representation.
//!
//! 1. A random combination of class sums is central, so its eigenspaces are
//!    the isotypic components.
//! 2. Each component is labeled from its character: `m² = ⟨χ, χ⟩`,
//!    `D = dim / m`, and the transposition class sum, which acts as the
//!    content sum of `ρ`.
//! 3. A random symmetric group-algebra element acts as `A_ρ ⊗ 1_m` on the
//!    component. Its `D` eigenspaces fix the index `a`; transporting one
//!    eigenspace into the others with a second random element aligns the
//!    multiplicity index `b` across all of them.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rep::PermutationRep;
use super::Tolerances;
use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};
use crate::repmeasure::{dim_irrep, mult_irrep};

const DECOMPOSITION_SEED: u64 = 0x5eed_cafe;

/// One isotypic component with a basis `|ρ, b, a⟩`.
#[derive(Clone, Debug)]
pub struct Component {
    pub partition: Partition,
    pub dim: usize,
    pub mult: usize,
    /// Orthonormal columns; column `b·D + a` is `|ρ, b, a⟩`.
    pub basis: DMatrix<f64>,
}

impl Component {
    pub fn vector(&self, b: usize, a: usize) -> DVector<f64> {
        self.basis.column(b * self.dim + a).into_owned()
    }

    /// `D^ρ_{a₁a₂}(σ) = ⟨ρ,b,a₁|T_σ|ρ,b,a₂⟩` from multiplicity copy `b`.
    pub fn rep_matrix(&self, rep: &PermutationRep, sigma: usize, b: usize) -> DMatrix<f64> {
        let op = &rep.ops[sigma];
        let cols: Vec<DVector<f64>> = (0..self.dim)
            .map(|a| op.apply(&self.vector(b, a)))
            .collect();
        DMatrix::from_fn(self.dim, self.dim, |a1, a2| {
            self.vector(b, a1).dot(&cols[a2])
        })
    }
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomposition {
    pub n: usize,
    pub d: usize,
    /// Components in decreasing lexicographic order of their partitions.
    pub components: Vec<Component>,
}

impl IsotypicDecomposition {
    /// `Σ D_ρ m_ρ`, which must equal `d^n`.
    pub fn total_dim(&self) -> usize {
        self.components.iter().map(|c| c.dim * c.mult).sum()
    }

    /// Deviation of the stacked bases from an orthonormal set.
    pub fn orthonormality_residual(&self) -> f64 {
        let all = DMatrix::from_columns(
            &self
                .components
                .iter()
                .flat_map(|c| c.basis.column_iter().map(|col| col.into_owned()))
                .collect::<Vec<_>>(),
        );
        let gram = all.transpose() * &all;
        (gram - DMatrix::identity(all.ncols(), all.ncols())).amax()
    }

    /// Largest disagreement of `D^ρ(σ)` between multiplicity copies.
    pub fn copy_consistency_residual(&self, rep: &PermutationRep) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.components {
            for s in 0..rep.order() {
                let base = c.rep_matrix(rep, s, 0);
                for b in 1..c.mult {
                    worst = worst.max((c.rep_matrix(rep, s, b) - &base).amax());
                }
            }
        }
        worst
    }
}

/// Splits sorted eigenvalues into runs separated by gaps above `split`.
fn clusters(values: &[f64], split: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > split {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Symmetric eigen-decomposition with eigenpairs sorted by eigenvalue.
fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &idx.iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// `Σ_σ c_σ T_σ` restricted to the column space of `q`, as `q^T (Σ c T) q`.
fn restricted_element(rep: &PermutationRep, coeffs: &[f64], q: &DMatrix<f64>) -> DMatrix<f64> {
    let mut acc = DMatrix::zeros(q.nrows(), q.ncols());
    for (op, &c) in rep.ops.iter().zip(coeffs) {
        if c == 0.0 {
            continue;
        }
        for (i, &j) in op.index_map.iter().enumerate() {
            for col in 0..q.ncols() {
                acc[(j, col)] += c * q[(i, col)];
            }
        }
    }
    q.transpose() * acc
}

fn label_component(
    rep: &PermutationRep,
    q: &DMatrix<f64>,
    candidates: &[(Partition, usize, usize, i64)],
) -> Result<(Partition, usize, usize)> {
    let size = q.ncols();
    let order = rep.order() as f64;
    let mut norm2 = 0.0;
    let mut transposition_trace = 0.0;
    for op in &rep.ops {
        let mut chi = 0.0;
        for (i, &j) in op.index_map.iter().enumerate() {
            chi += q.row(j).dot(&q.row(i));
        }
        norm2 += chi * chi;
        let ct = op.cycle_type();
        if ct.first() == Some(&2) && ct.iter().skip(1).all(|&l| l == 1) {
            transposition_trace += chi;
        }
    }
    let mult_f = (norm2 / order).sqrt();
    let mult = mult_f.round() as usize;
    let content_f = transposition_trace / size as f64;
    let content = content_f.round() as i64;
    if mult == 0
        || (mult_f - mult as f64).abs() > 1e-6
        || (content_f - content as f64).abs() > 1e-6
        || !size.is_multiple_of(mult)
    {
        return Err(Error::DegeneracyUnresolved(format!(
            "component of size {size} has non-integral character data (m ≈ {mult_f}, content sum ≈ {content_f})"
        )));
    }
    let dim = size / mult;
    let matches: Vec<_> = candidates
        .iter()
        .filter(|(_, cd, cm, cc)| *cd == dim && *cm == mult && *cc == content)
        .collect();
    match matches.as_slice() {
        [(p, _, _, _)] => Ok((p.clone(), dim, mult)),
        _ => Err(Error::DegeneracyUnresolved(format!(
            "{} partitions match (D, m, content sum) = ({dim}, {mult}, {content})",
            matches.len()
        ))),
    }
}

/// Decomposes `rep` into isotypic components with aligned bases `|ρ, b, a⟩`.
pub fn decompose(rep: &PermutationRep) -> Result<IsotypicDecomposition> {
    decompose_with(rep, &Tolerances::default())
}

pub fn decompose_with(rep: &PermutationRep, tol: &Tolerances) -> Result<IsotypicDecomposition> {
    let dim = rep.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(DECOMPOSITION_SEED);

    // random central element, one coefficient per cycle type
    let mut class_coeff = std::collections::BTreeMap::new();
    let coeffs: Vec<f64> = rep
        .ops
        .iter()
        .map(|op| {
            *class_coeff
                .entry(op.cycle_type())
                .or_insert_with(|| rng.random::<f64>() + 0.5)
        })
        .collect();
    let central = restricted_element(rep, &coeffs, &DMatrix::identity(dim, dim));
    let (values, vectors) = sorted_eigen(central);
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let groups = clusters(&values, 1e-6 * scale);
    check_separation(&values, &groups, tol.eigen_separation * scale)?;

    let candidates: Vec<(Partition, usize, usize, i64)> =
        enumerate_partitions(rep.n, Some(rep.d), None)
            .map(|p| {
                let content: i64 = p.cell_stats().contents.iter().sum();
                let dm = dim_irrep(&p).to_usize().unwrap_or(usize::MAX);
                let mm = mult_irrep(&p, rep.d).to_usize().unwrap_or(usize::MAX);
                (p, dm, mm, content)
            })
            .collect();

    // symmetric generic element for the a-index, arbitrary one for transport
    let mut sym = vec![0.0; rep.order()];
    for s in 0..rep.order() {
        let c = rng.random::<f64>() - 0.5;
        sym[s] += c;
        sym[rep.inverse(s)] += c;
    }
    let transport: Vec<f64> = (0..rep.order())
        .map(|_| rng.random::<f64>() - 0.5)
        .collect();

    let mut components = Vec::with_capacity(groups.len());
    for g in groups {
        let q = vectors.columns(g.start, g.len()).into_owned();
        let (partition, d_rho, m_rho) = label_component(rep, &q, &candidates)?;
        let basis = aligned_basis(rep, &q, d_rho, m_rho, &sym, &transport, tol)?;
        components.push(Component {
            partition,
            dim: d_rho,
            mult: m_rho,
            basis,
        });
    }
    components.sort_by(|a, b| b.partition.cmp(&a.partition));
    Ok(IsotypicDecomposition {
        n: rep.n,
        d: rep.d,
        components,
    })
}

fn check_separation(values: &[f64], groups: &[std::ops::Range<usize>], min_gap: f64) -> Result<()> {
    for w in groups.windows(2) {
        let gap = values[w[1].start] - values[w[0].end - 1];
        if gap < min_gap {
            return Err(Error::DegeneracyUnresolved(format!(
                "eigenvalue gap {gap:e} below {min_gap:e}"
            )));
        }
    }
    Ok(())
}

/// Basis `|ρ, b, a⟩` of the component spanned by `q` (columns `b·D + a`).
fn aligned_basis(
    rep: &PermutationRep,
    q: &DMatrix<f64>,
    d_rho: usize,
    m_rho: usize,
    sym: &[f64],
    transport: &[f64],
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let size = d_rho * m_rho;
    let (values, vectors) = sorted_eigen(restricted_element(rep, sym, q));
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    // D eigenvalues, each m-fold
    for a in 0..d_rho {
        let run = &values[a * m_rho..(a + 1) * m_rho];
        if run[m_rho - 1] - run[0] > 1e-6 * scale {
            return Err(Error::DegeneracyUnresolved(format!(
                "multiplicity run {a} of {:?} is not degenerate",
                run
            )));
        }
        if a > 0 && values[a * m_rho] - values[a * m_rho - 1] < tol.eigen_separation * scale {
            return Err(Error::DegeneracyUnresolved(
                "group-algebra eigenvalues collide".into(),
            ));
        }
    }
    let b_mat = restricted_element(rep, transport, q);
    let seed = vectors.columns(0, m_rho).into_owned();
    let mut local = DMatrix::zeros(size, size);
    for a in 0..d_rho {
        let block = vectors.columns(a * m_rho, m_rho).into_owned();
        let moved = if a == 0 {
            seed.clone()
        } else {
            let proj = &block * block.transpose();
            proj * (&b_mat * &seed)
        };
        let norm0 = moved.column(0).norm();
        if norm0 < 1e-6 {
            return Err(Error::DegeneracyUnresolved(
                "transport element misses an eigenspace".into(),
            ));
        }
        for b in 0..m_rho {
            let v = moved.column(b) / norm0;
            if (v.norm() - 1.0).abs() > tol.structural * 1e2 {
                return Err(Error::DegeneracyUnresolved(
                    "transported copies have unequal norms".into(),
                ));
            }
            local.set_column(b * d_rho + a, &v);
        }
    }
    Ok(q * local)
}
