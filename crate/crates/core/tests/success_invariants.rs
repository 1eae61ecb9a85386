use std::collections::HashSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qcc_core::repmeasure::factorial;
use qcc_core::success::{
    balanced_split, min_sufficient_ancilla, p_classical, p_extended, p_extended_limited,
    p_nonextended, plancherel_first_row_at_most,
};

fn rat(a: u64, b: u64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[test]
fn single_ancilla_reduces_and_sufficient_ancilla_saturates() {
    for n in 1..=12 {
        for d in 1..=4 {
            let non = p_nonextended(n, d).unwrap();
            let lim1 = p_extended_limited(n, d, &BigUint::one()).unwrap();
            assert_eq!(lim1.exact(), non.exact(), "n = {n}, d = {d}");

            let full = p_extended(n, d).unwrap();
            let r_min = min_sufficient_ancilla(n, d).unwrap();
            for extra in 0u32..3 {
                let r = &r_min + BigUint::from(extra);
                assert_eq!(p_extended_limited(n, d, &r).unwrap().exact(), full.exact());
            }
            if r_min > BigUint::one() {
                let below = p_extended_limited(n, d, &(&r_min - 1u32)).unwrap();
                assert!(
                    below.exact() < full.exact(),
                    "n = {n}, d = {d}: R_min is not minimal"
                );
            }
        }
    }
}

#[test]
fn schemes_are_ordered_and_monotone_in_d() {
    for n in 1..=14 {
        let mut prev = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for d in 1..=n + 1 {
            let c = p_classical(n, d).unwrap();
            let q = p_nonextended(n, d).unwrap().exact().clone();
            let e = p_extended(n, d).unwrap().exact().clone();
            assert!(c <= q && q <= e, "n = {n}, d = {d}");
            assert!(e <= BigRational::one());
            for (p, cur) in prev.iter().zip([&c, &q, &e]) {
                assert!(p <= cur, "not monotone at n = {n}, d = {d}");
            }
            prev = [c, q, e];
        }
        assert!(prev[2].is_one());
    }
}

#[test]
fn extended_is_first_row_probability() {
    for n in 1..=20 {
        for d in 1..=6 {
            assert_eq!(
                p_extended(n, d).unwrap().exact(),
                &plancherel_first_row_at_most(n, d).unwrap(),
                "n = {n}, d = {d}"
            );
        }
    }
}

#[test]
fn extended_limited_is_monotone_in_ancilla() {
    for n in 1..=10 {
        for d in 1..=3 {
            let mut prev = BigRational::zero();
            for r in 1u32..=6 {
                let p = p_extended_limited(n, d, &BigUint::from(r))
                    .unwrap()
                    .exact()
                    .clone();
                assert!(p >= prev);
                prev = p;
            }
        }
    }
}

#[test]
fn enough_colors_give_certainty() {
    for n in 1..=10 {
        assert!(p_nonextended(n, n).unwrap().exact().is_one());
        assert!(p_extended(n, n).unwrap().exact().is_one());
        assert!(p_classical(n, n).unwrap().is_one());
    }
    // one color: only the symmetric irrep survives
    for n in 1..=10u64 {
        let inv = rat(1, (1..=n).product());
        assert_eq!(p_extended(n as usize, 1).unwrap().exact(), &inv);
        assert_eq!(p_nonextended(n as usize, 1).unwrap().exact(), &inv);
    }
}

#[test]
fn small_d_tail_is_tiny() {
    // far below 2√n the extended probability is negligible
    let p = p_extended(40, 3).unwrap();
    assert!(p.p_float < 1e-10, "{}", p.p_float);
}

/// Applies σ to a coloring: box k's color moves to slot σ(k).
fn permute(coloring: &[usize], sigma: &[usize]) -> Vec<usize> {
    let mut out = vec![0; coloring.len()];
    for (k, &c) in coloring.iter().enumerate() {
        out[sigma[k]] = c;
    }
    out
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn all_colorings(n: usize, d: usize) -> Vec<Vec<usize>> {
    (0..d.pow(n as u32))
        .map(|mut i| {
            (0..n)
                .map(|_| {
                    let c = i % d;
                    i /= d;
                    c
                })
                .collect()
        })
        .collect()
}

#[test]
fn classical_matches_brute_force_over_colorings() {
    // with coloring c, Alice wins exactly once per distinct permuted coloring
    for n in 1..=6 {
        let perms = all_permutations(n);
        for d in 1..=3 {
            let best = all_colorings(n, d)
                .iter()
                .map(|c| {
                    perms
                        .iter()
                        .map(|s| permute(c, s))
                        .collect::<HashSet<_>>()
                        .len()
                })
                .max()
                .unwrap();
            let brute = BigRational::new(BigUint::from(best).into(), factorial(n).into());
            assert_eq!(p_classical(n, d).unwrap(), brute, "n = {n}, d = {d}");
        }
    }
}

#[test]
fn balanced_split_maximizes_stabilizer_inverse() {
    for n in 1..=8 {
        for d in 1..=3 {
            let best = all_colorings(n, d)
                .iter()
                .map(|c| {
                    let den: BigUint = (0..d)
                        .map(|k| factorial(c.iter().filter(|&&x| x == k).count()))
                        .product();
                    BigRational::new(BigUint::one().into(), den.into())
                })
                .max()
                .unwrap();
            assert_eq!(p_classical(n, d).unwrap(), best);
            let split = balanced_split(n, d);
            assert_eq!(split.iter().sum::<usize>(), n);
            assert!(split.iter().max().unwrap() - split.iter().min().unwrap() <= 1);
        }
    }
}
