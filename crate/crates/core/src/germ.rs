//! Surface germs through the curve:
//!
//! `alpha(s, v) = c + v W + [A v^2 / 2 + B v^3 / 6 + v^4 C(s, v) + eps a v^2 / 2] N`
//!
//! with `W = cos(theta) n + sin(theta) b`, `N = cos(theta) b - sin(theta) n`
//! and `a = (k sin(theta))'`.
//!
//! Because `theta' = -tau`, the frame `(t, W, N)` along the curve is a
//! right-handed Darboux frame with zero geodesic torsion:
//!
//! ```text
//! t' = p W - q N,   W' = -p t,   N' = q t,   p = k cos(theta), q = k sin(theta)
//! ```
//!
//! All partial derivatives of `alpha` are assembled in that frame, so the
//! fundamental forms need only the scalar invariants along the curve.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{FrenetCurve, Vec3};
use crate::error::{ForgeError, Result};
use crate::jet::Jet;
use crate::roots::bisect_interval;
use crate::spectral::FourierBasis;
use crate::theta::ThetaField;

/// One harmonic `cos * cos(2 pi n s / L) + sin * sin(2 pi n s / L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub n: u32,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

/// `L`-periodic profile given by a short Fourier sum.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PeriodicProfile {
    pub mean: f64,
    pub harmonics: Vec<Harmonic>,
}

impl PeriodicProfile {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.mean == 0.0 && self.harmonics.iter().all(|h| h.cos == 0.0 && h.sin == 0.0)
    }

    /// Value and derivatives through third order at `s`.
    pub fn jet(&self, s: f64, length: f64) -> Jet {
        let mut d = [self.mean, 0.0, 0.0, 0.0];
        for h in &self.harmonics {
            let w = 2.0 * PI * h.n as f64 / length;
            let (sn, cs) = (w * s).sin_cos();
            let f = h.cos * cs + h.sin * sn;
            let df = w * (-h.cos * sn + h.sin * cs);
            d[0] += f;
            d[1] += df;
            d[2] -= w * w * f;
            d[3] -= w * w * df;
        }
        Jet::from_derivatives(d)
    }
}

/// How the `v^2` coefficient `A(s)` is chosen.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AProfile {
    /// `A = (1 - sin(theta)) k`, re-derived for the germ's own `theta0`;
    /// makes `A + k sin(theta) = k > 0`.
    #[default]
    Default,
    /// `A = 0`: ruled germ.
    Zero,
    /// The default profile computed once at `theta_ref` and then held fixed
    /// while `theta0` varies.
    Frozen { theta_ref: f64 },
    Periodic(PeriodicProfile),
}

/// Free data of the germ beyond the curve and `theta`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GermProfiles {
    pub a: AProfile,
    pub b: PeriodicProfile,
    /// `C(s, v) = sum_k v^(k+1) c[k](s)`, so `C(s, 0) = 0`.
    pub c: Vec<PeriodicProfile>,
    /// Size of the deformation `eps a(s) v^2 / 2`, `a = (k sin(theta))'`.
    pub eps: f64,
}

impl GermProfiles {
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }
}

/// `A = (1 - sin(theta)) k`, `B = C = 0`, `eps = 0`.
pub fn default_profiles(_curve: &FrenetCurve, _theta: &ThetaField) -> GermProfiles {
    GermProfiles::default()
}

/// Scalar data along the curve at one `s`, as jets in `s`.
#[derive(Debug, Clone)]
pub struct CycleJets {
    pub k: Jet,
    pub tau: Jet,
    pub theta: Jet,
    /// `k cos(theta)`
    pub p: Jet,
    /// `k sin(theta)`; `-q` is the normal curvature of the curve.
    pub q: Jet,
    /// `A` alone, before the deformation.
    pub a_profile: Jet,
    /// Deformation profile `a = q'` (valid through second order).
    pub deformation: Jet,
    /// Effective `v^2` coefficient `A + eps a` (valid through second order).
    pub a_eff: Jet,
    /// `d(a_eff)/d(theta0)` at fixed `s` (valid through second order).
    pub a_eff_theta0: Jet,
    pub b: Jet,
    pub c: Vec<Jet>,
}

impl CycleJets {
    /// `A + eps a + k sin(theta)`: the umbilic function on the curve.
    pub fn umbilic_gap(&self) -> f64 {
        self.a_eff.value() + self.q.value()
    }

    /// Principal curvatures along the curve, in the labelling
    /// `k1 = -k sin(theta)`, `k2 = A + eps a` (not sorted).
    pub fn cycle_curvatures(&self) -> (f64, f64) {
        (-self.q.value(), self.a_eff.value())
    }
}

/// Evaluates profile jets for a curve, `theta` and profiles.
pub fn cycle_jets(curve: &FrenetCurve, theta: &ThetaField, profiles: &GermProfiles, s: f64) -> CycleJets {
    let basis = curve.basis(s);
    cycle_jets_with(curve, theta, profiles, s, &basis)
}

pub(crate) fn cycle_jets_with(
    curve: &FrenetCurve,
    theta: &ThetaField,
    profiles: &GermProfiles,
    s: f64,
    basis: &FourierBasis,
) -> CycleJets {
    let length = curve.length();
    let (k, tau) = curve.invariant_jets(basis);
    let th = theta.jet_with(s, basis, &tau);
    let (sin, cos) = th.sin_cos();
    let p = k * cos;
    let q = k * sin;
    let (a_profile, a_theta0) = match &profiles.a {
        AProfile::Default => (k - q, -p),
        AProfile::Zero => (Jet::constant(0.0), Jet::constant(0.0)),
        AProfile::Frozen { theta_ref } => {
            let shifted = th + (theta_ref - theta.theta0());
            (k - k * shifted.sin(), Jet::constant(0.0))
        }
        AProfile::Periodic(profile) => (profile.jet(s, length), Jet::constant(0.0)),
    };
    let deformation = q.differentiate();
    let a_eff = a_profile + deformation * profiles.eps;
    let a_eff_theta0 = a_theta0 + p.differentiate() * profiles.eps;
    CycleJets {
        k,
        tau,
        theta: th,
        p,
        q,
        a_profile,
        deformation,
        a_eff,
        a_eff_theta0,
        b: profiles.b.jet(s, length),
        c: profiles.c.iter().map(|c| c.jet(s, length)).collect(),
    }
}

/// First fundamental form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

/// Second fundamental form coefficients relative to
/// `alpha_s x alpha_v / |alpha_s x alpha_v|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub first: FirstForm,
    pub second: SecondForm,
    pub mean_curvature: f64,
    pub gauss_curvature: f64,
    /// Smaller principal curvature.
    pub k1: f64,
    /// Larger principal curvature.
    pub k2: f64,
}

impl FundamentalForms {
    pub fn from_coefficients(first: FirstForm, second: SecondForm) -> Self {
        let det = first.e * first.g - first.f * first.f;
        let mean = (first.e * second.g + first.g * second.e - 2.0 * first.f * second.f) / (2.0 * det);
        let gauss = (second.e * second.g - second.f * second.f) / det;
        let disc = (mean * mean - gauss).max(0.0).sqrt();
        Self {
            first,
            second,
            mean_curvature: mean,
            gauss_curvature: gauss,
            k1: mean - disc,
            k2: mean + disc,
        }
    }

    /// Principal directions `(ds, dv)` for `k1` and `k2`.
    pub fn principal_directions(&self) -> [(f64, f64); 2] {
        let (i, ii) = (self.first, self.second);
        [self.k1, self.k2].map(|kappa| {
            let a = (ii.f - kappa * i.f, -(ii.e - kappa * i.e));
            let b = (ii.g - kappa * i.g, -(ii.f - kappa * i.f));
            if a.0.hypot(a.1) >= b.0.hypot(b.1) {
                a
            } else {
                b
            }
        })
    }
}

/// Partial derivatives of `alpha` in the Darboux frame `(t, W, N)`.
#[derive(Debug, Clone, Copy)]
pub struct Partials {
    pub s: Vec3,
    pub v: Vec3,
    pub ss: Vec3,
    pub sv: Vec3,
    pub vv: Vec3,
}

impl Partials {
    pub fn forms(&self) -> Option<FundamentalForms> {
        let normal = self.s.cross(&self.v);
        let area = normal.norm();
        let first = FirstForm {
            e: self.s.dot(&self.s),
            f: self.s.dot(&self.v),
            g: self.v.dot(&self.v),
        };
        if !(area > 1e-300) || first.e * first.g - first.f * first.f <= 0.0 {
            return None;
        }
        let second = SecondForm {
            e: normal.dot(&self.ss) / area,
            f: normal.dot(&self.sv) / area,
            g: normal.dot(&self.vv) / area,
        };
        Some(FundamentalForms::from_coefficients(first, second))
    }
}

/// Height `h(s, v)` of the germ over the ruled strip and its partials.
#[derive(Debug, Clone, Copy)]
struct Height {
    h: f64,
    s: f64,
    ss: f64,
    v: f64,
    sv: f64,
    vv: f64,
}

fn height(j: &CycleJets, v: f64) -> Height {
    let a = j.a_eff.derivatives();
    let b = j.b.derivatives();
    let (v2, v3, v4) = (v * v, v * v * v, v * v * v * v);
    let mut out = Height {
        h: 0.5 * a[0] * v2 + b[0] * v3 / 6.0,
        s: 0.5 * a[1] * v2 + b[1] * v3 / 6.0,
        ss: 0.5 * a[2] * v2 + b[2] * v3 / 6.0,
        v: a[0] * v + 0.5 * b[0] * v2,
        sv: a[1] * v + 0.5 * b[1] * v2,
        vv: a[0] + b[0] * v,
    };
    // C(s, v) = sum_k v^(k+1) c_k(s)
    let (mut c, mut c_s, mut c_ss, mut c_v, mut c_sv, mut c_vv) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (idx, cj) in j.c.iter().enumerate() {
        let pow = idx as i32 + 1;
        let d = cj.derivatives();
        let vp = v.powi(pow);
        let vp1 = if pow >= 1 { pow as f64 * v.powi(pow - 1) } else { 0.0 };
        let vp2 = if pow >= 2 {
            (pow * (pow - 1)) as f64 * v.powi(pow - 2)
        } else {
            0.0
        };
        c += vp * d[0];
        c_s += vp * d[1];
        c_ss += vp * d[2];
        c_v += vp1 * d[0];
        c_sv += vp1 * d[1];
        c_vv += vp2 * d[0];
    }
    out.h += v4 * c;
    out.s += v4 * c_s;
    out.ss += v4 * c_ss;
    out.v += 4.0 * v3 * c + v4 * c_v;
    out.sv += 4.0 * v3 * c_s + v4 * c_sv;
    out.vv += 12.0 * v2 * c + 8.0 * v3 * c_v + v4 * c_vv;
    out
}

/// Partials of `alpha` at transverse offset `v`, given the jets at `s`.
pub fn partials_from_jets(j: &CycleJets, v: f64) -> Partials {
    let h = height(j, v);
    let (p, dp) = (j.p.value(), j.p.derivative(1));
    let (q, dq) = (j.q.value(), j.q.derivative(1));
    let x1 = 1.0 - p * v + q * h.h;
    Partials {
        s: Vec3::new(x1, 0.0, h.s),
        v: Vec3::new(0.0, 1.0, h.v),
        ss: Vec3::new(-dp * v + dq * h.h + 2.0 * q * h.s, x1 * p, h.ss - q * x1),
        sv: Vec3::new(-p + q * h.v, 0.0, h.sv),
        vv: Vec3::new(0.0, 0.0, h.vv),
    }
}

pub const DEFAULT_STRIP_FRACTION: f64 = 0.2;
pub const SEAM_TOL: f64 = 1e-6;

/// Germ of a surface around a closed curve, restricted to `|v| <= v_max`.
#[derive(Debug, Clone)]
pub struct SurfaceGerm {
    curve: FrenetCurve,
    theta: ThetaField,
    profiles: GermProfiles,
    v_max: f64,
}

impl SurfaceGerm {
    /// Germ with the default half-width `0.2 / max k`.
    pub fn new(curve: FrenetCurve, theta: ThetaField, profiles: GermProfiles) -> Result<Self> {
        let v_max = DEFAULT_STRIP_FRACTION / curve.max_curvature();
        Self::with_half_width(curve, theta, profiles, v_max)
    }

    pub fn with_half_width(
        curve: FrenetCurve,
        theta: ThetaField,
        profiles: GermProfiles,
        v_max: f64,
    ) -> Result<Self> {
        if !(v_max > 0.0 && v_max.is_finite()) {
            return Err(ForgeError::InvalidParams(format!("strip half-width {v_max}")));
        }
        let germ = Self {
            curve,
            theta,
            profiles,
            v_max,
        };
        germ.check_regularity()?;
        Ok(germ)
    }

    pub fn curve(&self) -> &FrenetCurve {
        &self.curve
    }

    pub fn theta(&self) -> &ThetaField {
        &self.theta
    }

    pub fn profiles(&self) -> &GermProfiles {
        &self.profiles
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    pub fn length(&self) -> f64 {
        self.curve.length()
    }

    pub fn jets(&self, s: f64) -> CycleJets {
        cycle_jets(&self.curve, &self.theta, &self.profiles, s)
    }

    fn check_strip(&self, v: f64) -> Result<()> {
        if v.abs() > self.v_max * (1.0 + 1e-12) {
            Err(ForgeError::OutOfStrip { v, v_max: self.v_max })
        } else {
            Ok(())
        }
    }

    /// `|alpha_s x alpha_v| >= 1e-6` on a grid covering the strip.
    fn check_regularity(&self) -> Result<()> {
        let n_s = self.curve.resolution().min(256);
        let n_v = 8;
        for i in 0..n_s {
            let s = self.length() * i as f64 / n_s as f64;
            let jets = self.jets(s);
            for j in 0..=n_v {
                let v = self.v_max * (2.0 * j as f64 / n_v as f64 - 1.0);
                let d = partials_from_jets(&jets, v);
                if d.s.cross(&d.v).norm() < 1e-6 {
                    return Err(ForgeError::DegenerateMetric { s, v });
                }
            }
        }
        Ok(())
    }

    /// Point `alpha(s, v)` in space. `s` is not reduced modulo `L`, so
    /// `alpha(L, v) - alpha(0, v)` measures the seam.
    pub fn evaluate(&self, s: f64, v: f64) -> Result<Vec3> {
        self.check_strip(v)?;
        let frame = self.curve.frenet_at(s);
        let jets = self.jets(s);
        let (sin, cos) = jets.theta.value().sin_cos();
        let across = frame.normal * cos + frame.binormal * sin;
        let normal = frame.binormal * cos - frame.normal * sin;
        let h = height(&jets, v).h;
        Ok(frame.position + across * v + normal * h)
    }

    pub fn partials(&self, s: f64, v: f64) -> Result<Partials> {
        self.check_strip(v)?;
        Ok(partials_from_jets(&self.jets(s), v))
    }

    pub fn fundamental_forms(&self, s: f64, v: f64) -> Result<FundamentalForms> {
        self.partials(s, v)?
            .forms()
            .ok_or(ForgeError::DegenerateMetric { s, v })
    }

    /// Sine of the angle between the principal direction nearest `d/ds`
    /// and `d/ds` itself, at `(s, 0)`.
    pub fn cycle_alignment(&self, s: f64) -> Result<f64> {
        let d = self.partials(s, 0.0)?;
        let forms = d.forms().ok_or(ForgeError::DegenerateMetric { s, v: 0.0 })?;
        let best = forms
            .principal_directions()
            .iter()
            .map(|&(ds, dv)| {
                let dir = d.s * ds + d.v * dv;
                let norm = dir.norm() * d.s.norm();
                if norm > 0.0 {
                    dir.cross(&d.s).norm() / norm
                } else {
                    1.0
                }
            })
            .fold(f64::INFINITY, f64::min);
        Ok(best)
    }

    /// Numerical `v`-derivatives of the forms at `v = 0` against the
    /// expansion coefficients.
    pub fn forms_series_check(&self, s: f64) -> Result<SeriesCheck> {
        forms_series_check(self, s)
    }

    pub fn umbilic_roots(&self) -> Result<Vec<f64>> {
        umbilic_roots(&self.curve, &self.theta, &self.profiles)
    }
}

/// Leading expansion coefficients in `v` of `(E, F, G, e, f, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormSeries {
    pub values: [f64; 6],
    pub slopes: [f64; 6],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesCheck {
    pub s: f64,
    pub expected: FormSeries,
    pub measured: FormSeries,
}

impl SeriesCheck {
    /// Residuals ordered `E, F, G, e, f, g` for values then slopes.
    pub fn residuals(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for i in 0..6 {
            out[i] = (self.expected.values[i] - self.measured.values[i]).abs();
            out[6 + i] = (self.expected.slopes[i] - self.measured.slopes[i]).abs();
        }
        out
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().into_iter().fold(0.0, f64::max)
    }
}

/// Expected values at `v = 0` and `v`-slopes, from the jets alone.
pub fn expected_form_series(j: &CycleJets) -> FormSeries {
    let (p, q) = (j.p.value(), j.q.value());
    let a = j.a_eff.value();
    FormSeries {
        values: [1.0, 0.0, 1.0, -q, 0.0, a],
        slopes: [-2.0 * p, 0.0, 0.0, p * (q - a), j.a_eff.derivative(1), j.b.value()],
    }
}

fn forms_vector(f: &FundamentalForms) -> [f64; 6] {
    [
        f.first.e,
        f.first.f,
        f.first.g,
        f.second.e,
        f.second.f,
        f.second.g,
    ]
}

pub fn forms_series_check(germ: &SurfaceGerm, s: f64) -> Result<SeriesCheck> {
    let jets = germ.jets(s);
    let at = |v: f64| -> Result<[f64; 6]> {
        partials_from_jets(&jets, v)
            .forms()
            .map(|f| forms_vector(&f))
            .ok_or(ForgeError::DegenerateMetric { s, v })
    };
    let h = 1e-3 * germ.v_max();
    let (p1, m1, p2, m2) = (at(h)?, at(-h)?, at(2.0 * h)?, at(-2.0 * h)?);
    let values = at(0.0)?;
    let mut slopes = [0.0; 6];
    for i in 0..6 {
        slopes[i] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
    }
    Ok(SeriesCheck {
        s,
        expected: expected_form_series(&jets),
        measured: FormSeries { values, slopes },
    })
}

/// Zeros of `A + eps a + k sin(theta)` on `[0, L)`, refined to `1e-10`.
pub fn umbilic_roots(curve: &FrenetCurve, theta: &ThetaField, profiles: &GermProfiles) -> Result<Vec<f64>> {
    let grid = curve.grid();
    let length = curve.length();
    let gap = |s: f64| cycle_jets(curve, theta, profiles, s).umbilic_gap();
    let values: Vec<f64> = grid.iter().map(|&s| gap(s)).collect();
    let scale = curve.max_curvature();
    if values.iter().all(|v| v.abs() <= 1e-12 * scale) {
        return Err(ForgeError::IdenticallyZero);
    }
    let mut roots = Vec::new();
    let n = grid.len();
    for i in 0..n {
        let (s0, f0) = (grid[i], values[i]);
        let (s1, f1) = if i + 1 < n {
            (grid[i + 1], values[i + 1])
        } else {
            (length, values[0])
        };
        if f0 == 0.0 {
            roots.push(s0);
        } else if f0 * f1 < 0.0 {
            roots.push(bisect_interval(gap, s0, s1, 1e-10));
        }
    }
    Ok(roots)
}
