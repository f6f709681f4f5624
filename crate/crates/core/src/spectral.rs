//! Trigonometric interpolation and quadrature for periodic data.
//!
//! Every integral in this crate runs over a closed loop, so a uniform grid
//! with the periodic trapezoid rule is spectrally accurate, and the
//! trigonometric interpolant through the same grid supplies derivatives of
//! any order.

use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};

/// Periodic trapezoid rule on a uniform grid that omits the duplicated endpoint.
pub fn periodic_trapezoid(values: &[f64], period: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    period * values.iter().sum::<f64>() / values.len() as f64
}

/// Uniform grid `i * period / n`, `i = 0..n`.
pub fn uniform_grid(n: usize, period: f64) -> Vec<f64> {
    (0..n).map(|i| period * i as f64 / n as f64).collect()
}

/// Real trigonometric polynomial
/// `f(x) = c_0 + sum_j (c_j cos(j w x) + s_j sin(j w x))`, `w = 2 pi / period`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    period: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

/// Table of `cos(j w x)`, `sin(j w x)` at one abscissa, shared between series
/// of the same period and degree.
#[derive(Debug, Clone)]
pub struct FourierBasis {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl FourierBasis {
    pub fn new(period: f64, degree: usize, x: f64) -> Self {
        let mut cos = Vec::with_capacity(degree + 1);
        let mut sin = Vec::with_capacity(degree + 1);
        let (s1, c1) = (2.0 * PI * x / period).sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        for j in 0..=degree {
            // re-anchor the recurrence periodically to bound drift
            if j > 0 && j % 32 == 0 {
                let (sj, cj) = (2.0 * PI * x * j as f64 / period).sin_cos();
                c = cj;
                s = sj;
            }
            cos.push(c);
            sin.push(s);
            let next_c = c * c1 - s * s1;
            let next_s = s * c1 + c * s1;
            c = next_c;
            s = next_s;
        }
        Self { cos, sin }
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }
}

impl TrigSeries {
    /// Interpolant through `values` sampled at `i * period / n`.
    pub fn from_samples(values: &[f64], period: f64) -> Self {
        let n = values.len();
        assert!(n > 0, "cannot interpolate an empty sample set");
        let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);

        let degree = n / 2;
        let scale = 1.0 / n as f64;
        let mut cos = vec![0.0; degree + 1];
        let mut sin = vec![0.0; degree + 1];
        cos[0] = buf[0].re * scale;
        for j in 1..=degree {
            if 2 * j == n {
                // Nyquist mode: only the cosine component is resolved
                cos[j] = buf[j].re * scale;
            } else {
                cos[j] = 2.0 * buf[j].re * scale;
                sin[j] = -2.0 * buf[j].im * scale;
            }
        }
        Self { period, cos, sin }
    }

    /// Series from explicit harmonic amplitudes.
    pub fn from_coefficients(period: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        assert_eq!(cos.len(), sin.len());
        assert!(!cos.is_empty());
        Self { period, cos, sin }
    }

    pub fn constant(period: f64, value: f64) -> Self {
        Self {
            period,
            cos: vec![value],
            sin: vec![0.0],
        }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.cos[0]
    }

    fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn basis(&self, x: f64) -> FourierBasis {
        FourierBasis::new(self.period, self.degree(), x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with(&self.basis(x))
    }

    /// Evaluates with a precomputed basis. The basis may be of higher degree.
    pub fn eval_with(&self, basis: &FourierBasis) -> f64 {
        debug_assert!(basis.degree() >= self.degree());
        self.cos
            .iter()
            .zip(&self.sin)
            .zip(basis.cos.iter().zip(&basis.sin))
            .map(|((a, b), (c, s))| a * c + b * s)
            .sum()
    }

    pub fn derivative(&self) -> Self {
        let w = self.omega();
        let mut cos = vec![0.0; self.cos.len()];
        let mut sin = vec![0.0; self.sin.len()];
        for j in 1..self.cos.len() {
            let jw = j as f64 * w;
            cos[j] = jw * self.sin[j];
            sin[j] = -jw * self.cos[j];
        }
        Self {
            period: self.period,
            cos,
            sin,
        }
    }

    /// `[f, f', ..., f^(order)]`.
    pub fn derivatives(&self, order: usize) -> Vec<Self> {
        let mut out = vec![self.clone()];
        for _ in 0..order {
            let next = out.last().unwrap().derivative();
            out.push(next);
        }
        out
    }

    /// `int_0^x f(u) du`, exact for the trigonometric polynomial. Not
    /// periodic unless the mean vanishes.
    pub fn integral_from_zero(&self, x: f64) -> f64 {
        self.integral_with(x, &self.basis(x))
    }

    pub fn integral_with(&self, x: f64, basis: &FourierBasis) -> f64 {
        let w = self.omega();
        let mut acc = self.cos[0] * x;
        for j in 1..self.cos.len() {
            let jw = j as f64 * w;
            acc += (self.cos[j] * basis.sin[j] + self.sin[j] * (1.0 - basis.cos[j])) / jw;
        }
        acc
    }

    /// Values on the uniform grid of `n` points.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        uniform_grid(n, self.period)
            .into_iter()
            .map(|x| self.eval(x))
            .collect()
    }

    /// Largest harmonic magnitude among the top quarter of the spectrum,
    /// relative to the largest overall. Small values mean the data are resolved.
    pub fn tail_ratio(&self) -> f64 {
        let mags: Vec<f64> = self
            .cos
            .iter()
            .zip(&self.sin)
            .map(|(a, b)| a.hypot(*b))
            .collect();
        let peak = mags.iter().cloned().fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let start = mags.len() - mags.len() / 4;
        mags[start..].iter().cloned().fold(0.0, f64::max) / peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(f: impl Fn(f64) -> f64, n: usize, period: f64) -> Vec<f64> {
        uniform_grid(n, period).into_iter().map(f).collect()
    }

    #[test]
    fn reproduces_samples_and_interpolates() {
        let period = 3.0;
        let w = 2.0 * PI / period;
        let f = |x: f64| (w * x).sin().exp();
        let series = TrigSeries::from_samples(&samples(f, 64, period), period);
        for x in [0.0, 0.123, 1.7, 2.999] {
            assert!((series.eval(x) - f(x)).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn derivatives_match_closed_form() {
        let period = 2.0 * PI;
        let f = |x: f64| 1.0 / (2.0 + x.cos());
        let df = |x: f64| x.sin() / (2.0 + x.cos()).powi(2);
        let series = TrigSeries::from_samples(&samples(f, 128, period), period);
        let d = series.derivative();
        for x in [0.3, 1.1, 4.0] {
            assert!((d.eval(x) - df(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn odd_sample_count() {
        let period = 1.0;
        let f = |x: f64| (2.0 * PI * x).cos() + 0.5 * (6.0 * PI * x).sin();
        let series = TrigSeries::from_samples(&samples(f, 15, period), period);
        assert!((series.eval(0.37) - f(0.37)).abs() < 1e-13);
    }

    #[test]
    fn integral_of_shifted_cosine() {
        let period = 2.0 * PI;
        let f = |x: f64| 0.25 + x.cos();
        let series = TrigSeries::from_samples(&samples(f, 16, period), period);
        let x = 1.3;
        assert!((series.integral_from_zero(x) - (0.25 * x + x.sin())).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_is_spectral_on_periodic_integrands() {
        // int_0^{2pi} 1/(2 + cos x) dx = 2 pi / sqrt(3)
        let v = samples(|x| 1.0 / (2.0 + x.cos()), 64, 2.0 * PI);
        let exact = 2.0 * PI / 3f64.sqrt();
        assert!((periodic_trapezoid(&v, 2.0 * PI) - exact).abs() < 1e-14);
    }

    #[test]
    fn basis_recurrence_stays_accurate_at_high_degree() {
        let basis = FourierBasis::new(1.0, 1024, 0.7321);
        let j = 1000;
        let exact = (2.0 * PI * 0.7321 * j as f64).cos();
        assert!((basis.cos[j] - exact).abs() < 1e-12);
    }
}
