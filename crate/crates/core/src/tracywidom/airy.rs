//! Airy function `Ai` and its derivative on the real line.
//!
//! Maclaurin series on `[-7, 6]`, the exponentially decaying asymptotic
//! expansion beyond `6`, and the oscillatory expansion below `-7`. Both
//! switch points keep the absolute error near `1e-12` or better.

use std::f64::consts::{FRAC_PI_4, PI};

#[allow(clippy::excessive_precision)]
const AI0: f64 = 0.355_028_053_887_817_239_26;
#[allow(clippy::excessive_precision)]
const NEG_AIP0: f64 = 0.258_819_403_792_806_798_41;

const SERIES_MAX: f64 = 6.0;
const SERIES_MIN: f64 = -7.0;

/// `(Ai(x), Ai'(x))`.
pub fn airy_ai(x: f64) -> (f64, f64) {
    if x > SERIES_MAX {
        asymptotic_positive(x)
    } else if x < SERIES_MIN {
        asymptotic_negative(-x)
    } else {
        maclaurin(x)
    }
}

pub(crate) fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f, g are the even-ish/odd-ish solutions with Ai = c1 f − c2 g.
    let (mut f, mut fp, mut g, mut gp) = (1.0, 0.0, x, 1.0);
    let (mut tf, mut tfp, mut tg, mut tgp) = (1.0, x * x / 2.0, x, 1.0);
    fp += tfp;
    for k in 0..200 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 + 2.0) * (k3 + 3.0));
        tfp *= x3 / ((k3 + 3.0) * (k3 + 5.0));
        tg *= x3 / ((k3 + 3.0) * (k3 + 4.0));
        tgp *= x3 / ((k3 + 1.0) * (k3 + 3.0));
        f += tf;
        fp += tfp;
        g += tg;
        gp += tgp;
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        if tf.abs() + tfp.abs() + tg.abs() + tgp.abs() <= 1e-18 * scale {
            break;
        }
    }
    (AI0 * f - NEG_AIP0 * g, AI0 * fp - NEG_AIP0 * gp)
}

/// Coefficients `u_k` and `v_k` of the large-argument expansions.
fn expansion_coefficients(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

/// Sums `Σ (-1)^k c_k z^{-k}` up to the smallest term.
fn truncated_sum(c: &[f64], inv_z: f64, stride: usize, offset: usize) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = offset;
    while k < c.len() {
        let term = c[k] * inv_z.powi(k as i32);
        if term.abs() > last {
            break;
        }
        sum += sign * term;
        last = term.abs();
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        sign = -sign;
        k += stride;
    }
    sum
}

pub(crate) fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = expansion_coefficients(60);
    let inv = 1.0 / zeta;
    let pre = (-zeta).exp() / (2.0 * PI.sqrt());
    let x14 = x.powf(0.25);
    (
        pre / x14 * truncated_sum(&u, inv, 1, 0),
        -pre * x14 * truncated_sum(&v, inv, 1, 0),
    )
}

/// `Ai(-z)`, `Ai'(-z)` for large positive `z`.
pub(crate) fn asymptotic_negative(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let (u, v) = expansion_coefficients(60);
    let inv = 1.0 / zeta;
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let z14 = z.powf(0.25);
    let pre = 1.0 / PI.sqrt();
    // even and odd index sums carry their own alternating signs
    let pu = truncated_sum(&u, inv, 2, 0);
    let qu = truncated_sum(&u, inv, 2, 1);
    let pv = truncated_sum(&v, inv, 2, 0);
    let qv = truncated_sum(&v, inv, 2, 1);
    (pre / z14 * (c * pu + s * qu), pre * z14 * (s * pv - c * qv))
}
