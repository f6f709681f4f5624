//! Independent check of the characteristic exponent: integrate the principal
//! line field of the germ next to the cycle and measure the return map.
//!
//! The principal directions solve `P dv^2 + Q ds dv + R ds^2 = 0` with
//! `P = Fg - Gf`, `Q = Eg - Ge`, `R = Ef - Fe`. Near the cycle the branch
//! through `dv/ds = 0` is transverse to `d/dv`, so `s` serves as the time of
//! an explicit scalar ODE for `v`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::germ::{partials_from_jets, FundamentalForms, SurfaceGerm};
use crate::hyperbolicity::{HyperbolicityReport, Verdict, DEFAULT_HYPERBOLICITY_TOL};
use crate::ode::{integrate, Tolerances};
use crate::spectral::periodic_trapezoid;

pub const DEFAULT_RTOL: f64 = 1e-10;
/// Shooting offsets as fractions of the strip half-width.
pub const SHOOTING_OFFSETS: [f64; 2] = [1e-3, 5e-4];
pub const MAX_START_FRACTION: f64 = 0.1;

/// Coefficients of the principal-direction quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrincipalOdeCoefficients {
    /// `F g - G f`, multiplies `dv^2`.
    pub p: f64,
    /// `E g - G e`, multiplies `ds dv`.
    pub q: f64,
    /// `E f - F e`, multiplies `ds^2`.
    pub r: f64,
}

impl PrincipalOdeCoefficients {
    pub fn from_forms(forms: &FundamentalForms) -> Self {
        let (i, ii) = (forms.first, forms.second);
        Self {
            p: i.f * ii.g - i.g * ii.f,
            q: i.e * ii.g - i.g * ii.e,
            r: i.e * ii.f - i.f * ii.e,
        }
    }

    /// Root of `p t^2 + q t + r = 0` continuous with `-r/q` as `p -> 0`.
    fn cycle_branch(&self) -> Option<f64> {
        let disc = self.q * self.q - 4.0 * self.p * self.r;
        if !(disc > 1e-12 * self.q * self.q) {
            return None;
        }
        let denom = self.q + self.q.signum() * disc.sqrt();
        Some(-2.0 * self.r / denom)
    }

    /// `|p t^2 + q t + r|` relative to the size of its terms.
    pub fn relative_residual(&self, t: f64) -> f64 {
        let value = self.p * t * t + self.q * t + self.r;
        let scale = self.p.abs() * t * t + self.q.abs() * t.abs() + self.r.abs();
        if scale == 0.0 {
            0.0
        } else {
            value.abs() / scale
        }
    }
}

pub fn ode_coefficients(germ: &SurfaceGerm, s: f64, v: f64) -> Result<PrincipalOdeCoefficients> {
    Ok(PrincipalOdeCoefficients::from_forms(&germ.fundamental_forms(s, v)?))
}

fn coefficients_from_jets(jets: &crate::germ::CycleJets, s: f64, v: f64) -> Result<PrincipalOdeCoefficients> {
    partials_from_jets(jets, v)
        .forms()
        .map(|f| PrincipalOdeCoefficients::from_forms(&f))
        .ok_or(ForgeError::DegenerateMetric { s, v })
}

/// `dv/ds` along the principal line of the cycle's family through `(s, v)`.
pub fn transverse_slope(germ: &SurfaceGerm, s: f64, v: f64) -> Result<f64> {
    let c = ode_coefficients(germ, s, v)?;
    c.cycle_branch().ok_or(ForgeError::BranchAmbiguity { s, v })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrincipalFlowTrace {
    pub v0: f64,
    /// Accepted `(s, v)` pairs from `s = 0` to `s = L`.
    pub samples: Vec<(f64, f64)>,
    /// `pi(v0)`.
    pub v_end: f64,
    pub steps: usize,
    pub rejected: usize,
    pub evaluations: usize,
    /// Largest relative residual of the quadratic at accepted samples.
    pub max_residual: f64,
}

impl PrincipalFlowTrace {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "s,v")?;
        for (s, v) in &self.samples {
            writeln!(out, "{s:.15e},{v:.15e}")?;
        }
        Ok(())
    }
}

pub fn integrate_principal_line(germ: &SurfaceGerm, v0: f64) -> Result<PrincipalFlowTrace> {
    integrate_principal_line_with(germ, v0, DEFAULT_RTOL)
}

/// Follows the principal line from `(0, v0)` once around the cycle.
pub fn integrate_principal_line_with(germ: &SurfaceGerm, v0: f64, rtol: f64) -> Result<PrincipalFlowTrace> {
    let v_max = germ.v_max();
    if v0.abs() > MAX_START_FRACTION * v_max {
        return Err(ForgeError::OutOfStrip {
            v: v0,
            v_max: MAX_START_FRACTION * v_max,
        });
    }
    let atol = rtol * if v0 != 0.0 { v0.abs() } else { 1e-6 * v_max };
    let mut max_residual: f64 = 0.0;
    let rhs = |s: f64, v: f64| -> Result<f64> {
        if v.abs() > v_max {
            return Err(ForgeError::LeftStrip { s, v });
        }
        let jets = germ.jets(s);
        let c = coefficients_from_jets(&jets, s, v)?;
        let t = c.cycle_branch().ok_or(ForgeError::BranchAmbiguity { s, v })?;
        max_residual = max_residual.max(c.relative_residual(t));
        Ok(t)
    };
    let sol = integrate(rhs, 0.0, germ.length(), v0, Tolerances { rtol, atol })?;
    Ok(PrincipalFlowTrace {
        v0,
        v_end: sol.last().y,
        samples: sol.samples.iter().map(|p| (p.t, p.y)).collect(),
        steps: sol.accepted,
        rejected: sol.rejected,
        evaluations: sol.evaluations,
        max_residual,
    })
}

/// Return map `pi(v0)`.
pub fn return_map(germ: &SurfaceGerm, v0: f64, rtol: f64) -> Result<f64> {
    Ok(integrate_principal_line_with(germ, v0, rtol)?.v_end)
}

/// Two estimates of `ln pi'(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareEstimate {
    /// Central differences of the return map, Richardson-extrapolated.
    pub shooting: f64,
    /// `-int R_v / Q ds` along `v = 0`.
    pub variational: f64,
    /// Unextrapolated central differences at the two offsets.
    pub central_differences: [f64; 2],
}

pub fn poincare_log_derivative(germ: &SurfaceGerm) -> Result<PoincareEstimate> {
    poincare_log_derivative_with(germ, DEFAULT_RTOL)
}

pub fn poincare_log_derivative_with(germ: &SurfaceGerm, rtol: f64) -> Result<PoincareEstimate> {
    let mut diffs = [0.0; 2];
    for (slot, frac) in diffs.iter_mut().zip(SHOOTING_OFFSETS) {
        let h = frac * germ.v_max();
        let plus = return_map(germ, h, rtol)?;
        let minus = return_map(germ, -h, rtol)?;
        *slot = (plus - minus) / (2.0 * h);
    }
    // offsets halve, so the O(h^2) error drops by 4
    let derivative = (4.0 * diffs[1] - diffs[0]) / 3.0;
    Ok(PoincareEstimate {
        shooting: derivative.ln(),
        variational: variational_log_derivative(germ)?,
        central_differences: diffs,
    })
}

/// `-int (dR/dv)/Q ds` at `v = 0`, with `dR/dv` by fourth-order differences.
pub fn variational_log_derivative(germ: &SurfaceGerm) -> Result<f64> {
    let curve = germ.curve();
    let delta = 1e-3 * germ.v_max();
    let mut values = Vec::with_capacity(curve.resolution());
    for &s in curve.grid() {
        let jets = germ.jets(s);
        let r = |v: f64| coefficients_from_jets(&jets, s, v).map(|c| c.r);
        let r_v = (8.0 * (r(delta)? - r(-delta)?) - (r(2.0 * delta)? - r(-2.0 * delta)?)) / (12.0 * delta);
        let q = coefficients_from_jets(&jets, s, 0.0)?.q;
        values.push(-r_v / q);
    }
    Ok(periodic_trapezoid(&values, curve.length()))
}

/// Which principal foliation the cycle belongs to, read from the normal
/// curvature along `d/ds` at `v = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleFamily {
    Minimal,
    Maximal,
    Mixed,
}

pub fn cycle_family(germ: &SurfaceGerm) -> CycleFamily {
    let mut below = false;
    let mut above = false;
    for &s in germ.curve().grid() {
        let (k_along, k_across) = germ.jets(s).cycle_curvatures();
        if k_along < k_across {
            below = true;
        } else {
            above = true;
        }
    }
    match (below, above) {
        (true, false) => CycleFamily::Minimal,
        (false, true) => CycleFamily::Maximal,
        _ => CycleFamily::Mixed,
    }
}

/// Observed relation between `ln pi'(0)` and `Lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignRelation {
    /// `ln pi'(0) = -Lambda`
    Opposite,
    /// `ln pi'(0) = Lambda`
    Same,
    /// Both below the hyperbolicity threshold.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Validation {
    pub estimate: PoincareEstimate,
    pub lambda: f64,
    pub tolerance: f64,
    pub sign: SignRelation,
    pub family: CycleFamily,
    /// Verdict implied by the measured return map.
    pub verdict: Verdict,
    /// Whether the measured verdict matches the certified one.
    pub confirmed: bool,
}

pub const DEFAULT_VALIDATION_FLOOR: f64 = 1e-4;

/// `max(floor, 1e-3 |Lambda|)`.
pub fn validation_tolerance(lambda: f64, floor: f64) -> f64 {
    (1e-3 * lambda.abs()).max(floor)
}

/// Checks a certificate against the shooting measurement on `germ`, which
/// must be the germ described by `report`.
pub fn cross_validate(germ: &SurfaceGerm, report: &HyperbolicityReport) -> Result<Validation> {
    cross_validate_with(germ, report, DEFAULT_VALIDATION_FLOOR, DEFAULT_HYPERBOLICITY_TOL)
}

pub fn cross_validate_with(
    germ: &SurfaceGerm,
    report: &HyperbolicityReport,
    floor: f64,
    threshold: f64,
) -> Result<Validation> {
    let estimate = poincare_log_derivative(germ)?;
    let lambda = report.lambda;
    let tolerance = validation_tolerance(lambda, floor);
    let gap = (estimate.shooting.abs() - lambda.abs()).abs();
    let internal = (estimate.shooting - estimate.variational).abs();
    if !(gap <= tolerance && internal <= tolerance) {
        return Err(ForgeError::Mismatch {
            shooting: estimate.shooting.abs(),
            quadrature: lambda.abs(),
            tolerance,
        });
    }
    let sign = if estimate.shooting.abs() <= threshold || lambda.abs() <= threshold {
        SignRelation::Undetermined
    } else if estimate.shooting.signum() == lambda.signum() {
        SignRelation::Same
    } else {
        SignRelation::Opposite
    };
    let verdict = if estimate.shooting.abs() > threshold {
        Verdict::Hyperbolic
    } else {
        Verdict::NonHyperbolic
    };
    let expected = match report.verdict {
        Verdict::CircleObstruction => Verdict::NonHyperbolic,
        v => v,
    };
    Ok(Validation {
        estimate,
        lambda,
        tolerance,
        sign,
        family: cycle_family(germ),
        verdict,
        confirmed: verdict == expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::ingest_analytic;
    use crate::germ::GermProfiles;
    use crate::theta::solve_theta;

    fn circle_germ() -> SurfaceGerm {
        let curve = ingest_analytic("circle", &[1.0], 64).unwrap();
        let theta = solve_theta(&curve, 0.4).unwrap();
        SurfaceGerm::new(curve, theta, GermProfiles::default()).unwrap()
    }

    #[test]
    fn cycle_is_a_solution() {
        let g = circle_germ();
        assert_eq!(transverse_slope(&g, 0.3, 0.0).unwrap(), 0.0);
        let trace = integrate_principal_line(&g, 0.0).unwrap();
        assert_eq!(trace.v_end, 0.0);
    }

    #[test]
    fn circle_return_map_is_identity() {
        let g = circle_germ();
        let v0 = 0.05 * g.v_max();
        let trace = integrate_principal_line(&g, v0).unwrap();
        assert!((trace.v_end - v0).abs() < 1e-9);
        assert!(trace.max_residual < 1e-9);
    }

    #[test]
    fn start_outside_shooting_window() {
        let g = circle_germ();
        assert!(matches!(
            integrate_principal_line(&g, 0.5 * g.v_max()),
            Err(ForgeError::OutOfStrip { .. })
        ));
    }

    #[test]
    fn quadratic_branch_selection() {
        let c = PrincipalOdeCoefficients {
            p: 1e-3,
            q: 2.0,
            r: -4e-3,
        };
        let t = c.cycle_branch().unwrap();
        assert!((t - 2e-3).abs() < 1e-8);
        assert!(c.relative_residual(t) < 1e-14);
        let degenerate = PrincipalOdeCoefficients { p: 1.0, q: 0.0, r: 0.0 };
        assert!(degenerate.cycle_branch().is_none());
    }
}
