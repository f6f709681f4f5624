//! Transport of the normal angle: `theta' = -tau`, `theta(0) = theta0`.

use std::io::Write;

use crate::curve::{FrenetCurve, Vec3, DEFAULT_QUANTIZATION_TOL};
use crate::error::{ForgeError, Result};
use crate::jet::Jet;
use crate::spectral::{FourierBasis, TrigSeries};

/// Unwrapped solution of the transport equation on the curve's grid.
#[derive(Debug, Clone)]
pub struct ThetaField {
    theta0: f64,
    values: Vec<f64>,
    winding: i64,
    torsion: TrigSeries,
}

pub fn solve_theta(curve: &FrenetCurve, theta0: f64) -> Result<ThetaField> {
    solve_theta_with_tol(curve, theta0, DEFAULT_QUANTIZATION_TOL)
}

/// Fails with `NotQuantized` unless the total torsion is within `quant_tol`
/// of `2 pi m`; otherwise the strip built on `theta` cannot close up.
pub fn solve_theta_with_tol(curve: &FrenetCurve, theta0: f64, quant_tol: f64) -> Result<ThetaField> {
    let summary = curve.total_torsion();
    if !summary.is_quantized(quant_tol) {
        return Err(ForgeError::NotQuantized {
            total: summary.total,
            m: summary.m,
            residual: summary.residual,
        });
    }
    let torsion = curve.torsion_series().clone();
    let values = curve
        .grid()
        .iter()
        .map(|&s| theta0 - torsion.integral_from_zero(s))
        .collect();
    Ok(ThetaField {
        theta0,
        values,
        winding: summary.m,
        torsion,
    })
}

impl ThetaField {
    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `m` with `theta(L) - theta(0) = -2 pi m`.
    pub fn winding(&self) -> i64 {
        self.winding
    }

    /// `theta(s)`, not reduced modulo `2 pi` and not periodic in `s`.
    pub fn eval(&self, s: f64) -> f64 {
        self.theta0 - self.torsion.integral_from_zero(s)
    }

    /// The same transport started from another initial angle.
    pub fn with_theta0(&self, theta0: f64) -> Self {
        let shift = theta0 - self.theta0;
        Self {
            theta0,
            values: self.values.iter().map(|v| v + shift).collect(),
            winding: self.winding,
            torsion: self.torsion.clone(),
        }
    }

    /// Jet of `theta` from a torsion jet: `theta' = -tau`.
    pub(crate) fn jet_with(&self, s: f64, basis: &FourierBasis, tau: &Jet) -> Jet {
        let d = tau.derivatives();
        let theta = self.theta0 - self.torsion.integral_with(s, basis);
        Jet::from_derivatives([theta, -d[0], -d[1], -d[2]])
    }

    pub fn write_csv<W: Write>(&self, curve: &FrenetCurve, mut out: W) -> std::io::Result<()> {
        writeln!(out, "s,theta")?;
        for (s, theta) in curve.grid().iter().zip(&self.values) {
            writeln!(out, "{s:.15e},{theta:.15e}")?;
        }
        Ok(())
    }
}

/// Surface normal along the curve, `N = cos(theta) b - sin(theta) n`.
pub fn normal_direction(curve: &FrenetCurve, field: &ThetaField, s: f64) -> Vec3 {
    let f = curve.frenet_at(s);
    let (sin, cos) = field.eval(s).sin_cos();
    f.binormal * cos - f.normal * sin
}

/// Transverse tangent of the strip, `cos(theta) n + sin(theta) b`.
pub fn strip_direction(curve: &FrenetCurve, field: &ThetaField, s: f64) -> Vec3 {
    let f = curve.frenet_at(s);
    let (sin, cos) = field.eval(s).sin_cos();
    f.normal * cos + f.binormal * sin
}
