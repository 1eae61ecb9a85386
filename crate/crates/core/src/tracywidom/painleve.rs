//! `F_TW` through the Hastings–McLeod solution of Painlevé II.
//!
//! `q'' = s q + 2 q³` is integrated leftwards from the cutoff `s₀` with Airy
//! initial data, together with
//!
//! * `I(s) = ∫_s^∞ q²`, `I' = −q²`
//! * `J(s) = ∫_s^∞ (t − s) q(t)² dt`, `J' = −I`
//!
//! so that `F_TW(x) = exp(−J(x))`. At `s₀` the tails of `I` and `J` are
//! closed-form Airy integrals since `q = Ai` to within `O(Ai³)` there.

use super::airy::airy_ai;
use super::ode::Dopri5;

pub const DEFAULT_CUTOFF: f64 = 10.0;

/// Airy-kernel tails `(∫_x^∞ Ai², ∫_x^∞ (s − x) Ai(s)² ds)`.
pub fn airy_tails(x: f64) -> (f64, f64) {
    let (a, ap) = airy_ai(x);
    let i = ap * ap - x * a * a;
    let j = (2.0 * x * x * a * a - 2.0 * x * ap * ap - a * ap) / 3.0;
    (i, j)
}

fn rhs(s: f64, y: &[f64; 4]) -> [f64; 4] {
    let (q, p, i) = (y[0], y[1], y[2]);
    [p, s * q + 2.0 * q * q * q, -q * q, -i]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PainlevePoint {
    pub s: f64,
    pub q: f64,
    pub dq: f64,
    /// `∫_s^∞ q²`, which is also `d/ds ln F_TW(s)`.
    pub i: f64,
    pub j: f64,
}

impl PainlevePoint {
    pub fn f_tw(&self) -> f64 {
        (-self.j).exp()
    }
}

#[derive(Clone, Debug)]
pub struct PainleveSolver {
    pub cutoff: f64,
    pub rtol: f64,
}

impl Default for PainleveSolver {
    fn default() -> Self {
        Self {
            cutoff: DEFAULT_CUTOFF,
            rtol: 1e-10,
        }
    }
}

impl PainleveSolver {
    pub fn new(cutoff: f64, rtol: f64) -> Self {
        Self { cutoff, rtol }
    }

    /// Solution values at every requested `s`, returned in input order.
    /// `None` marks points the integrator could not reach.
    pub fn solve_at(&self, points: &[f64]) -> Vec<Option<PainlevePoint>> {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[b].total_cmp(&points[a]));

        let mut out = vec![None; points.len()];
        let s0 = self.cutoff;
        let (a0, ap0) = airy_ai(s0);
        let (i0, j0) = airy_tails(s0);
        let mut state = [a0, ap0, i0, j0];
        let mut s = s0;
        let mut ode = Dopri5::new(self.rtol, 1e-300, -0.01);
        let mut failed = false;

        for idx in order {
            let target = points[idx];
            if target >= s0 {
                let (a, ap) = airy_ai(target);
                let (i, j) = airy_tails(target);
                out[idx] = Some(PainlevePoint {
                    s: target,
                    q: a,
                    dq: ap,
                    i,
                    j,
                });
                continue;
            }
            if failed {
                continue;
            }
            match ode.advance(&rhs, s, state, target) {
                Ok(y) => {
                    state = y;
                    s = target;
                    out[idx] = Some(PainlevePoint {
                        s,
                        q: y[0],
                        dq: y[1],
                        i: y[2],
                        j: y[3],
                    });
                }
                Err(_) => failed = true,
            }
        }
        out
    }
}
