//! `F_TW(x) = det(I − K_Ai)` on `L²(x, ∞)` by Nyström discretization.
//!
//! The half-line is truncated at `max(x + 8, 12)`, past which the Airy kernel
//! is below `1e-30`, and discretized with an `m`-point Gauss–Legendre rule.

use nalgebra::DMatrix;

use super::airy::airy_ai;
use super::quadrature::gauss_legendre_on;

pub const COARSE_NODES: usize = 60;
pub const FINE_NODES: usize = 90;

pub fn truncation_point(x: f64) -> f64 {
    (x + 8.0).max(12.0)
}

/// Airy kernel `K(s, t)`.
pub fn airy_kernel(s: f64, t: f64) -> f64 {
    let (a_s, ap_s) = airy_ai(s);
    if s == t {
        return ap_s * ap_s - s * a_s * a_s;
    }
    let (a_t, ap_t) = airy_ai(t);
    (a_s * ap_t - ap_s * a_t) / (s - t)
}

/// Nyström approximation of the determinant with `m` nodes.
pub fn fredholm_det(x: f64, m: usize) -> f64 {
    let (s, w) = gauss_legendre_on(m, x, truncation_point(x));
    let ai: Vec<(f64, f64)> = s.iter().map(|&v| airy_ai(v)).collect();
    let sw: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
    let mat = DMatrix::from_fn(m, m, |i, j| {
        let k = if i == j {
            let (a, ap) = ai[i];
            ap * ap - s[i] * a * a
        } else {
            (ai[i].0 * ai[j].1 - ai[i].1 * ai[j].0) / (s[i] - s[j])
        };
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - sw[i] * k * sw[j]
    });
    mat.lu().determinant()
}
