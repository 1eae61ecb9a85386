//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Clone, Debug)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Signed step carried between calls to [`Dopri5::advance`].
    h: f64,
    pub steps: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure {
    pub t: f64,
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64, initial_step: f64) -> Self {
        Self {
            rtol,
            atol,
            h: initial_step,
            steps: 0,
            rejected: 0,
        }
    }

    /// Integrates `y' = f(t, y)` from `t` to `t_end`, landing on `t_end` exactly.
    pub fn advance<const N: usize, F>(
        &mut self,
        f: &F,
        mut t: f64,
        mut y: [f64; N],
        t_end: f64,
    ) -> Result<[f64; N], StepFailure>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let dir = (t_end - t).signum();
        if dir == 0.0 {
            return Ok(y);
        }
        if self.h == 0.0 || self.h.signum() != dir {
            self.h = dir * self.h.abs().max(1e-6);
        }
        let span = (t_end - t).abs();
        while (t_end - t).abs() > 1e-14 * span.max(1.0) {
            let mut h = self.h;
            let last = (t + h - t_end) * dir >= 0.0;
            if last {
                h = t_end - t;
            }
            let (y_new, err) = step(f, t, &y, h, self.rtol, self.atol);
            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                return Err(StepFailure { t });
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                t = if last { t_end } else { t + h };
                y = y_new;
                self.steps += 1;
                if !last {
                    self.h = h * factor;
                }
            } else {
                self.rejected += 1;
                self.h = h * factor.min(1.0);
                if self.h.abs() < 1e-14 * t.abs().max(1.0) {
                    return Err(StepFailure { t });
                }
            }
        }
        Ok(y)
    }
}

fn step<const N: usize, F>(
    f: &F,
    t: f64,
    y: &[f64; N],
    h: f64,
    rtol: f64,
    atol: f64,
) -> ([f64; N], f64)
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, y);
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        if s == 6 {
            // last stage is evaluated at the fifth-order solution
            k[6] = f(t + h, &ys);
            let mut err: f64 = 0.0;
            for i in 0..N {
                let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * h;
                let scale = atol + rtol * y[i].abs().max(ys[i].abs());
                err = err.max(e.abs() / scale);
            }
            return (ys, err);
        }
        k[s] = f(t + C[s] * h, &ys);
    }
    unreachable!()
}
