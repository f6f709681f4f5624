//! Adaptive Dormand–Prince 5(4) integrator for scalar ODEs `y' = f(t, y)`.

use crate::error::{ForgeError, Result};

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
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

/// Accepted state with the slope that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub y: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Solution {
    pub samples: Vec<Sample>,
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl Solution {
    pub fn last(&self) -> Sample {
        *self.samples.last().expect("solution has the initial sample")
    }
}

/// Integrates from `t0` to `t1 > t0`. `f` may fail, which aborts the run.
pub fn integrate<F>(mut f: F, t0: f64, t1: f64, y0: f64, tol: Tolerances) -> Result<Solution>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let mut sol = Solution::default();
    let mut t = t0;
    let mut y = y0;
    let mut k = [0.0; 7];
    k[0] = f(t, y)?;
    sol.evaluations += 1;
    sol.samples.push(Sample { t, y, slope: k[0] });

    let span = t1 - t0;
    let mut h = span / 100.0;
    let h_min = 1e-14 * span.abs();
    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        for stage in 1..7 {
            let mut acc = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                acc += h * A[stage][j] * kj;
            }
            k[stage] = f(t + C[stage] * h, acc)?;
        }
        sol.evaluations += 6;
        // stage 7 is evaluated at the fifth-order solution (FSAL)
        let y_new = y + h * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
        let err_abs = h * E.iter().zip(&k).map(|(e, kj)| e * kj).sum::<f64>();
        let scale = tol.atol + tol.rtol * y.abs().max(y_new.abs());
        let err = (err_abs / scale).abs();

        if err <= 1.0 {
            t += h;
            y = y_new;
            // k[6] was evaluated at (t + h, y_new)
            k[0] = k[6];
            sol.accepted += 1;
            sol.samples.push(Sample { t, y, slope: k[0] });
        } else {
            sol.rejected += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < h_min && t < t1 {
            return Err(ForgeError::StepSizeUnderflow { s: t });
        }
    }
    Ok(sol)
}
