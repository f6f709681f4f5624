//! Characteristic exponent of the principal cycle and the constructive
//! certification strategy.
//!
//! Sign convention: `Lambda = int A_eff' / (A_eff + k sin(theta)) ds`, where
//! `A_eff = A + eps a` is the principal curvature `k2` along the cycle. The
//! return map then satisfies `ln pi'(0) = -Lambda`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{FrenetCurve, DEFAULT_QUANTIZATION_TOL};
use crate::error::{ForgeError, Result};
use crate::germ::{cycle_jets, cycle_jets_with, umbilic_roots, CycleJets, GermProfiles};
use crate::spectral::periodic_trapezoid;
use crate::theta::{solve_theta_with_tol, ThetaField};

pub const DEFAULT_HYPERBOLICITY_TOL: f64 = 1e-6;
/// Default deformation size is `EPS_SCALE / max |a|`.
pub const EPS_SCALE: f64 = 0.1;
pub const MAX_EPS_HALVINGS: usize = 20;
/// `k sin(theta)` counts as constant when its spread is below this times `max k`.
pub const CONSTANT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Hyperbolic,
    NonHyperbolic,
    UmbilicObstruction,
    CircleObstruction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub theta0: f64,
    pub winding: i64,
    /// Exponent of the germ that was finally built (with `eps_used`).
    pub lambda: f64,
    /// Exponent of the undeformed default germ.
    pub lambda_default: f64,
    pub dlambda_dtheta0: f64,
    pub eps_used: f64,
    pub dlambda_deps0: f64,
    pub umbilic_roots: Vec<f64>,
    pub oracle_log_pi_prime: Option<f64>,
    pub verdict: Verdict,
    pub profiles: GermProfiles,
}

fn jets_on_grid(curve: &FrenetCurve, theta: &ThetaField, profiles: &GermProfiles) -> Vec<CycleJets> {
    curve
        .grid()
        .iter()
        .map(|&s| cycle_jets_with(curve, theta, profiles, s, &curve.basis(s)))
        .collect()
}

fn loop_integral(curve: &FrenetCurve, jets: &[CycleJets], f: impl Fn(&CycleJets) -> f64) -> f64 {
    let values: Vec<f64> = jets.iter().map(f).collect();
    periodic_trapezoid(&values, curve.length())
}

fn ensure_umbilic_free(curve: &FrenetCurve, theta: &ThetaField, profiles: &GermProfiles) -> Result<()> {
    match umbilic_roots(curve, theta, profiles) {
        Ok(roots) if roots.is_empty() => Ok(()),
        Ok(roots) => Err(ForgeError::UmbilicOnCycle { s: roots[0] }),
        Err(ForgeError::IdenticallyZero) => Err(ForgeError::UmbilicOnCycle { s: 0.0 }),
        Err(e) => Err(e),
    }
}

/// `Lambda = int A_eff' / (A_eff + k sin(theta)) ds`.
pub fn lambda(curve: &FrenetCurve, theta: &ThetaField, profiles: &GermProfiles) -> Result<f64> {
    ensure_umbilic_free(curve, theta, profiles)?;
    let jets = jets_on_grid(curve, theta, profiles);
    Ok(loop_integral(curve, &jets, |j| j.a_eff.derivative(1) / j.umbilic_gap()))
}

/// Default-profile exponent in its reduced form `-int (k sin(theta))' / k ds`.
pub fn lambda_default_reduced(curve: &FrenetCurve, theta: &ThetaField) -> f64 {
    let jets = jets_on_grid(curve, theta, &GermProfiles::default());
    loop_integral(curve, &jets, |j| -j.q.derivative(1) / j.k.value())
}

/// The three loop integrals of the classical hyperbolicity criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GsIntegrals {
    /// `int dk1 / (k2 - k1)`
    pub dk1: f64,
    /// `int dk2 / (k2 - k1)`
    pub dk2: f64,
    /// `1/2 int dH / sqrt(H^2 - K)`
    pub half_dh: f64,
}

/// Evaluates the criterion with `k1 = -k sin(theta)`, `k2 = A + eps a`.
pub fn gs_criterion(curve: &FrenetCurve, theta: &ThetaField, profiles: &GermProfiles) -> Result<GsIntegrals> {
    ensure_umbilic_free(curve, theta, profiles)?;
    let jets = jets_on_grid(curve, theta, profiles);
    let parts = |j: &CycleJets| {
        let (k1, k2) = (-j.q.value(), j.a_eff.value());
        let (dk1, dk2) = (-j.q.derivative(1), j.a_eff.derivative(1));
        (k1, k2, dk1, dk2)
    };
    Ok(GsIntegrals {
        dk1: loop_integral(curve, &jets, |j| {
            let (k1, k2, dk1, _) = parts(j);
            dk1 / (k2 - k1)
        }),
        dk2: loop_integral(curve, &jets, |j| {
            let (k1, k2, _, dk2) = parts(j);
            dk2 / (k2 - k1)
        }),
        half_dh: loop_integral(curve, &jets, |j| {
            let (k1, k2, dk1, dk2) = parts(j);
            let mean = 0.5 * (k1 + k2);
            let gauss = k1 * k2;
            0.5 * 0.5 * (dk1 + dk2) / (mean * mean - gauss).sqrt()
        }),
    })
}

/// `d Lambda / d theta0`, differentiating through `theta = theta0 - int tau`
/// and through whatever `theta0`-dependence the `A` profile carries. For a
/// frozen profile with `eps = 0` this is
/// `-int k A' cos(theta) / (k sin(theta) + A)^2 ds`.
pub fn dlambda_dtheta0(curve: &FrenetCurve, theta: &ThetaField, profiles: &GermProfiles) -> Result<f64> {
    ensure_umbilic_free(curve, theta, profiles)?;
    let jets = jets_on_grid(curve, theta, profiles);
    Ok(loop_integral(curve, &jets, |j| {
        let gap = j.umbilic_gap();
        let da = j.a_eff.derivative(1);
        let da_t = j.a_eff_theta0.derivative(1);
        let gap_t = j.a_eff_theta0.value() + j.p.value();
        (da_t * gap - da * gap_t) / (gap * gap)
    }))
}

fn min_deformed_gap(jets: &[CycleJets], eps: f64) -> f64 {
    jets.iter()
        .map(|j| j.k.value() + eps * j.deformation.value())
        .fold(f64::INFINITY, f64::min)
}

/// Exponent of the default germ deformed by `eps a v^2 / 2`:
/// `Lambda(eps) = -int a / (k + eps a) ds`, `a = (k sin(theta))'`.
pub fn lambda_perturbed(curve: &FrenetCurve, theta: &ThetaField, eps: f64) -> Result<f64> {
    let jets = jets_on_grid(curve, theta, &GermProfiles::default());
    let min_gap = min_deformed_gap(&jets, eps);
    if !(min_gap > 0.0) {
        return Err(ForgeError::EpsTooLarge {
            eps,
            min_denominator: min_gap,
        });
    }
    Ok(loop_integral(curve, &jets, |j| {
        let a = j.deformation.value();
        -a / (j.k.value() + eps * a)
    }))
}

/// `Lambda'(0) = int ((k sin(theta))' / k)^2 ds >= 0`.
pub fn dlambda_deps0(curve: &FrenetCurve, theta: &ThetaField) -> f64 {
    let jets = jets_on_grid(curve, theta, &GermProfiles::default());
    loop_integral(curve, &jets, |j| (j.deformation.value() / j.k.value()).powi(2))
}

/// `max |a|`, located on the grid and polished by Newton steps on `a' = 0`
/// so that it does not depend on the resolution.
pub fn max_deformation(curve: &FrenetCurve, theta: &ThetaField) -> f64 {
    let defaults = GermProfiles::default();
    let jets = jets_on_grid(curve, theta, &defaults);
    let (i_max, grid_max) = jets
        .iter()
        .map(|j| j.deformation.value().abs())
        .enumerate()
        .fold((0, 0.0), |best, (i, a)| if a > best.1 { (i, a) } else { best });
    let h = curve.length() / curve.resolution() as f64;
    let s0 = curve.grid()[i_max];
    let mut s = s0;
    let mut best = grid_max;
    for _ in 0..8 {
        let a = cycle_jets(curve, theta, &defaults, s).deformation;
        best = best.max(a.value().abs());
        let curvature = a.derivative(2);
        if curvature == 0.0 {
            break;
        }
        let step = a.derivative(1) / curvature;
        s -= step;
        if (s - s0).abs() > h {
            break;
        }
        if step.abs() < 1e-14 * curve.length() {
            best = best.max(cycle_jets(curve, theta, &defaults, s).deformation.value().abs());
            break;
        }
    }
    best
}

/// Spread of `k sin(theta)` over the grid.
fn normal_curvature_spread(curve: &FrenetCurve, theta: &ThetaField) -> f64 {
    let q: Vec<f64> = curve
        .curvatures()
        .iter()
        .zip(theta.values())
        .map(|(k, t)| k * t.sin())
        .collect();
    let hi = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = q.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub quantization_tol: f64,
    pub hyperbolicity_tol: f64,
    /// Overrides the default `0.1 / max |a|` when set.
    pub eps: Option<f64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            quantization_tol: DEFAULT_QUANTIZATION_TOL,
            hyperbolicity_tol: DEFAULT_HYPERBOLICITY_TOL,
            eps: None,
        }
    }
}

/// Builds a germ around `curve` with the cycle hyperbolic whenever that is
/// possible: default `A` first, then the `eps` deformation if the default
/// exponent vanishes.
pub fn certify_hyperbolic(curve: &FrenetCurve, theta0: f64) -> Result<HyperbolicityReport> {
    certify_hyperbolic_with(curve, theta0, &CertifyOptions::default())
}

pub fn certify_hyperbolic_with(
    curve: &FrenetCurve,
    theta0: f64,
    opts: &CertifyOptions,
) -> Result<HyperbolicityReport> {
    let theta = solve_theta_with_tol(curve, theta0, opts.quantization_tol)?;
    let defaults = GermProfiles::default();
    let lambda_default = lambda(curve, &theta, &defaults)?;
    let mut report = HyperbolicityReport {
        theta0,
        winding: theta.winding(),
        lambda: lambda_default,
        lambda_default,
        dlambda_dtheta0: dlambda_dtheta0(curve, &theta, &defaults)?,
        eps_used: 0.0,
        dlambda_deps0: dlambda_deps0(curve, &theta),
        umbilic_roots: Vec::new(),
        oracle_log_pi_prime: None,
        verdict: Verdict::NonHyperbolic,
        profiles: defaults.clone(),
    };

    if curve.is_circle(CONSTANT_TOL) {
        report.verdict = Verdict::CircleObstruction;
        return Ok(report);
    }
    if normal_curvature_spread(curve, &theta) <= CONSTANT_TOL * curve.max_curvature() {
        // k sin(theta) constant: neither branch can move the exponent
        return Ok(report);
    }
    if lambda_default.abs() > opts.hyperbolicity_tol {
        report.verdict = Verdict::Hyperbolic;
        return Ok(report);
    }

    let mut eps = opts
        .eps
        .unwrap_or_else(|| EPS_SCALE / max_deformation(curve, &theta));
    let mut lambda_eps = None;
    for _ in 0..=MAX_EPS_HALVINGS {
        match lambda_perturbed(curve, &theta, eps) {
            Ok(value) => {
                lambda_eps = Some(value);
                break;
            }
            Err(ForgeError::EpsTooLarge { .. }) => eps *= 0.5,
            Err(e) => return Err(e),
        }
    }
    let Some(lambda_eps) = lambda_eps else {
        return Err(ForgeError::EpsTooLarge {
            eps,
            min_denominator: f64::NAN,
        });
    };
    let profiles = defaults.with_eps(eps);
    report.eps_used = eps;
    report.lambda = lambda_eps;
    report.dlambda_dtheta0 = dlambda_dtheta0(curve, &theta, &profiles)?;
    report.profiles = profiles;
    if lambda_eps.abs() > opts.hyperbolicity_tol {
        report.verdict = Verdict::Hyperbolic;
    }
    Ok(report)
}

/// Report for caller-supplied profiles, without the constructive strategy.
/// Umbilics on the cycle yield `UmbilicObstruction` rather than an error.
pub fn assess_profiles(
    curve: &FrenetCurve,
    theta: &ThetaField,
    profiles: &GermProfiles,
    hyperbolicity_tol: f64,
) -> Result<HyperbolicityReport> {
    let roots = match umbilic_roots(curve, theta, profiles) {
        Ok(r) => r,
        Err(ForgeError::IdenticallyZero) => vec![0.0],
        Err(e) => return Err(e),
    };
    let mut report = HyperbolicityReport {
        theta0: theta.theta0(),
        winding: theta.winding(),
        lambda: f64::NAN,
        lambda_default: lambda_default_reduced(curve, theta),
        dlambda_dtheta0: f64::NAN,
        eps_used: profiles.eps,
        dlambda_deps0: dlambda_deps0(curve, theta),
        umbilic_roots: roots,
        oracle_log_pi_prime: None,
        verdict: Verdict::UmbilicObstruction,
        profiles: profiles.clone(),
    };
    if !report.umbilic_roots.is_empty() {
        return Ok(report);
    }
    report.lambda = lambda(curve, theta, profiles)?;
    report.dlambda_dtheta0 = dlambda_dtheta0(curve, theta, profiles)?;
    report.verdict = if curve.is_circle(CONSTANT_TOL) {
        Verdict::CircleObstruction
    } else if report.lambda.abs() > hyperbolicity_tol {
        Verdict::Hyperbolic
    } else {
        Verdict::NonHyperbolic
    };
    Ok(report)
}

/// One row of a `theta0` sweep. `lambda` and `dlambda` are `None` when the
/// cycle carries umbilics for that `theta0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta0: f64,
    pub lambda: Option<f64>,
    pub dlambda: Option<f64>,
    /// `None` when the umbilic condition holds along the whole curve.
    pub umbilic_count: Option<usize>,
}

/// `count` equally spaced values of `theta0` over `[0, 2 pi)`.
pub fn sweep_angles(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / count as f64)
        .collect()
}

/// Exponent and its `theta0`-derivative across `angles`, in parallel.
pub fn lambda_sweep(
    curve: &FrenetCurve,
    base: &ThetaField,
    profiles: &GermProfiles,
    angles: &[f64],
) -> Vec<SweepRow> {
    angles
        .par_iter()
        .map(|&theta0| {
            let theta = base.with_theta0(theta0);
            let roots = umbilic_roots(curve, &theta, profiles);
            let umbilic_count = roots.as_ref().ok().map(|r| r.len());
            let (lambda, dlambda) = if umbilic_count == Some(0) {
                (
                    lambda(curve, &theta, profiles).ok(),
                    dlambda_dtheta0(curve, &theta, profiles).ok(),
                )
            } else {
                (None, None)
            };
            SweepRow {
                theta0,
                lambda,
                dlambda,
                umbilic_count,
            }
        })
        .collect()
}
