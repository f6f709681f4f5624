//! Closed Frenet curves: ingestion, arc-length reparametrization, the Frenet
//! apparatus and total torsion.

use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::jet::Jet;
use crate::roots::{bisect, BisectOutcome};
use crate::spectral::{periodic_trapezoid, uniform_grid, FourierBasis, TrigSeries};

pub type Vec3 = Vector3<f64>;

pub const MIN_SAMPLES: usize = 16;
pub const MIN_RESOLUTION: usize = 64;
/// Curves with `min k < CURVATURE_FLOOR / L` are rejected.
pub const CURVATURE_FLOOR: f64 = 1e-6;
pub const DEFAULT_QUANTIZATION_TOL: f64 = 1e-6;

/// Built-in analytic closed curves, all parametrized over `t in [0, 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CurveFamily {
    /// `(r cos t, r sin t, 0)`.
    Circle { radius: f64 },
    /// `(a cos t, b sin t, 0)`.
    Ellipse { a: f64, b: f64 },
    /// `p(t)/|p(t)|` with `p(t) = (cos t, sin t, a cos 2t)`.
    Spherical { a: f64 },
    /// `((R + r cos qt) cos pt, (R + r cos qt) sin pt, r sin qt)`: `p` turns
    /// around the axis of revolution, `q` around the tube.
    TorusCurve { p: i32, q: i32, major: f64, minor: f64 },
}

impl CurveFamily {
    /// Parses the identifier + parameter-vector form used on the command line.
    pub fn from_params(name: &str, params: &[f64]) -> Result<Self> {
        let need = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(ForgeError::InvalidParams(format!(
                    "{name} takes {n} parameters, got {}",
                    params.len()
                )))
            }
        };
        let family = match name {
            "circle" => {
                need(1)?;
                CurveFamily::Circle { radius: params[0] }
            }
            "ellipse" => {
                need(2)?;
                CurveFamily::Ellipse {
                    a: params[0],
                    b: params[1],
                }
            }
            "spherical" => {
                need(1)?;
                CurveFamily::Spherical { a: params[0] }
            }
            "torus_curve" => {
                need(4)?;
                let int = |x: f64| -> Result<i32> {
                    if x.fract() == 0.0 && x.abs() < 1e6 {
                        Ok(x as i32)
                    } else {
                        Err(ForgeError::InvalidParams(format!(
                            "winding numbers must be integers, got {x}"
                        )))
                    }
                };
                CurveFamily::TorusCurve {
                    p: int(params[0])?,
                    q: int(params[1])?,
                    major: params[2],
                    minor: params[3],
                }
            }
            other => return Err(ForgeError::UnknownFamily(other.to_string())),
        };
        family.validate()?;
        Ok(family)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurveFamily::Circle { .. } => "circle",
            CurveFamily::Ellipse { .. } => "ellipse",
            CurveFamily::Spherical { .. } => "spherical",
            CurveFamily::TorusCurve { .. } => "torus_curve",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ForgeError::InvalidParams(msg));
        match *self {
            CurveFamily::Circle { radius } if !(radius > 0.0 && radius.is_finite()) => {
                bad(format!("circle radius must be positive, got {radius}"))
            }
            CurveFamily::Ellipse { a, b } if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) => {
                bad(format!("ellipse semi-axes must be positive, got ({a}, {b})"))
            }
            CurveFamily::Spherical { a } if !(a.abs() <= 1.0) => {
                bad(format!("spherical amplitude must lie in [-1, 1], got {a}"))
            }
            CurveFamily::TorusCurve { p, q, major, minor } => {
                if p == 0 || q == 0 {
                    bad("torus winding numbers must be nonzero".into())
                } else if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
                    bad(format!("winding numbers ({p}, {q}) must be coprime"))
                } else if !(minor > 0.0 && major > minor && major.is_finite()) {
                    bad(format!("need 0 < r < R, got (R, r) = ({major}, {minor})"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Named scalar parameter (for calibration).
    pub fn param(&self, name: &str) -> Result<f64> {
        match (self, name) {
            (CurveFamily::Circle { radius }, "radius") => Ok(*radius),
            (CurveFamily::Ellipse { a, .. }, "a") => Ok(*a),
            (CurveFamily::Ellipse { b, .. }, "b") => Ok(*b),
            (CurveFamily::Spherical { a }, "a") => Ok(*a),
            (CurveFamily::TorusCurve { major, .. }, "major") => Ok(*major),
            (CurveFamily::TorusCurve { minor, .. }, "minor") => Ok(*minor),
            _ => Err(ForgeError::InvalidParams(format!(
                "{} has no continuous parameter `{name}`",
                self.name()
            ))),
        }
    }

    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        self.param(name)?;
        let mut out = self.clone();
        match (&mut out, name) {
            (CurveFamily::Circle { radius }, _) => *radius = value,
            (CurveFamily::Ellipse { a, .. }, "a") => *a = value,
            (CurveFamily::Ellipse { b, .. }, _) => *b = value,
            (CurveFamily::Spherical { a }, _) => *a = value,
            (CurveFamily::TorusCurve { major, .. }, "major") => *major = value,
            (CurveFamily::TorusCurve { minor, .. }, _) => *minor = value,
        }
        out.validate()?;
        Ok(out)
    }

    /// True for families that lie in a plane for every parameter value.
    pub fn is_planar(&self) -> bool {
        matches!(self, CurveFamily::Circle { .. } | CurveFamily::Ellipse { .. })
    }

    fn eval_jet(&self, t: f64) -> [Jet; 3] {
        let t = Jet::variable(t);
        match *self {
            CurveFamily::Circle { radius } => {
                let (s, c) = t.sin_cos();
                [c * radius, s * radius, Jet::constant(0.0)]
            }
            CurveFamily::Ellipse { a, b } => {
                let (s, c) = t.sin_cos();
                [c * a, s * b, Jet::constant(0.0)]
            }
            CurveFamily::Spherical { a } => {
                let (s, c) = t.sin_cos();
                let z = (t * 2.0).cos() * a;
                let norm = (c * c + s * s + z * z).sqrt();
                [c / norm, s / norm, z / norm]
            }
            CurveFamily::TorusCurve { p, q, major, minor } => {
                let (sp, cp) = (t * p as f64).sin_cos();
                let (sq, cq) = (t * q as f64).sin_cos();
                let rho = cq * minor + major;
                [rho * cp, rho * sp, sq * minor]
            }
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A closed curve over `t in [0, 2 pi)` able to report `c, c', c'', c'''`.
trait LoopSource {
    fn derivatives(&self, t: f64) -> [Vec3; 4];
}

impl LoopSource for CurveFamily {
    fn derivatives(&self, t: f64) -> [Vec3; 4] {
        let [x, y, z] = self.eval_jet(t);
        let (dx, dy, dz) = (x.derivatives(), y.derivatives(), z.derivatives());
        [0, 1, 2, 3].map(|k| Vec3::new(dx[k], dy[k], dz[k]))
    }
}

/// Trigonometric interpolant through samples indexed uniformly over `[0, 2 pi)`.
struct SampledLoop {
    coords: [Vec<TrigSeries>; 3],
}

impl SampledLoop {
    fn new(points: &[Vec3]) -> Self {
        let coords = [0, 1, 2].map(|axis| {
            let values: Vec<f64> = points.iter().map(|p| p[axis]).collect();
            TrigSeries::from_samples(&values, 2.0 * PI).derivatives(3)
        });
        Self { coords }
    }
}

impl LoopSource for SampledLoop {
    fn derivatives(&self, t: f64) -> [Vec3; 4] {
        let basis = self.coords[0][0].basis(t);
        [0, 1, 2, 3].map(|k| {
            Vec3::new(
                self.coords[0][k].eval_with(&basis),
                self.coords[1][k].eval_with(&basis),
                self.coords[2][k].eval_with(&basis),
            )
        })
    }
}

/// Frenet apparatus at one arc-length value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetPoint {
    pub position: Vec3,
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub curvature: f64,
    pub torsion: f64,
}

/// Closed unit-speed Frenet curve sampled on a uniform arc-length grid.
///
/// Grid values are exact for analytic families (up to the arc-length
/// inversion) and interpolated for sampled input; the series give the curve
/// and its scalar invariants at any `s`.
#[derive(Debug, Clone)]
pub struct FrenetCurve {
    length: f64,
    grid: Vec<f64>,
    position: Vec<Vec3>,
    tangent: Vec<Vec3>,
    normal: Vec<Vec3>,
    binormal: Vec<Vec3>,
    curvature: Vec<f64>,
    torsion: Vec<f64>,
    /// `position_series[d][axis]` is the `d`-th arc-length derivative.
    position_series: Vec<[TrigSeries; 3]>,
    curvature_series: Vec<TrigSeries>,
    torsion_series: Vec<TrigSeries>,
}

/// Total torsion and its distance from the nearest multiple of `2 pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorsionSummary {
    pub total: f64,
    pub m: i64,
    pub residual: f64,
}

impl TorsionSummary {
    pub fn from_total(total: f64) -> Self {
        let m = (total / (2.0 * PI)).round() as i64;
        Self {
            total,
            m,
            residual: (total - 2.0 * PI * m as f64).abs(),
        }
    }

    pub fn is_quantized(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

/// Builds a curve from ordered samples of a closed loop.
///
/// With `closed` set, the last sample must repeat the first within `tol` and
/// is dropped; otherwise the samples are taken as one period without the
/// repeated endpoint.
pub fn ingest_samples(points: &[Vec3], closed: bool, tol: f64) -> Result<FrenetCurve> {
    if points.len() < MIN_SAMPLES {
        return Err(ForgeError::TooFewSamples {
            got: points.len(),
            min: MIN_SAMPLES,
        });
    }
    let mut pts = points;
    if closed {
        let gap = (points[0] - points[points.len() - 1]).norm();
        if gap > tol {
            return Err(ForgeError::NotClosed { gap, tol });
        }
        pts = &points[..points.len() - 1];
    }
    if pts.iter().any(|p| !p.iter().all(|x| x.is_finite())) {
        return Err(ForgeError::InvalidParams("non-finite sample coordinate".into()));
    }
    build_frenet(&SampledLoop::new(pts), pts.len())
}

/// Builds a curve from a named family and its parameter vector.
pub fn ingest_analytic(family: &str, params: &[f64], resolution: usize) -> Result<FrenetCurve> {
    let family = CurveFamily::from_params(family, params)?;
    ingest_family(&family, resolution)
}

pub fn ingest_family(family: &CurveFamily, resolution: usize) -> Result<FrenetCurve> {
    family.validate()?;
    if resolution < MIN_RESOLUTION {
        return Err(ForgeError::InvalidParams(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    build_frenet(family, resolution)
}

fn build_frenet(source: &dyn LoopSource, n: usize) -> Result<FrenetCurve> {
    let two_pi = 2.0 * PI;
    let t_grid = uniform_grid(n, two_pi);
    let speeds: Vec<f64> = t_grid.iter().map(|&t| source.derivatives(t)[1].norm()).collect();
    let max_speed = speeds.iter().cloned().fold(0.0, f64::max);
    if let Some((j, _)) = speeds
        .iter()
        .enumerate()
        .find(|(_, &v)| !(v > 1e-12 * max_speed))
    {
        return Err(ForgeError::NotRegular { parameter: t_grid[j] });
    }

    // cumulative arc length s(t) = mean * t + periodic part
    let speed = TrigSeries::from_samples(&speeds, two_pi);
    let length = two_pi * speed.mean();
    let t_of_s = invert_arc_length(&speed, length, n)?;

    let mut position = Vec::with_capacity(n);
    let mut tangent = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    let mut binormal = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    let mut torsion = Vec::with_capacity(n);
    for &t in &t_of_s {
        let [c, d1, d2, d3] = source.derivatives(t);
        let cross = d1.cross(&d2);
        let cross_norm = cross.norm();
        let sp = d1.norm();
        let k = cross_norm / sp.powi(3);
        let tau = if cross_norm > 0.0 {
            d1.dot(&d2.cross(&d3)) / (cross_norm * cross_norm)
        } else {
            0.0
        };
        let t_hat = d1 / sp;
        let b_hat = if cross_norm > 0.0 { cross / cross_norm } else { Vec3::zeros() };
        position.push(c);
        tangent.push(t_hat);
        binormal.push(b_hat);
        normal.push(b_hat.cross(&t_hat));
        curvature.push(k);
        torsion.push(tau);
    }

    let min_k = curvature.iter().cloned().fold(f64::INFINITY, f64::min);
    let floor = CURVATURE_FLOOR / length;
    if !(min_k >= floor) {
        return Err(ForgeError::CurvatureVanishes {
            min_curvature: min_k,
            floor,
        });
    }

    let axis_series: [Vec<TrigSeries>; 3] = [0, 1, 2].map(|axis| {
        let values: Vec<f64> = position.iter().map(|p| p[axis]).collect();
        TrigSeries::from_samples(&values, length).derivatives(3)
    });
    let position_series = (0..4)
        .map(|d| [0, 1, 2].map(|axis| axis_series[axis][d].clone()))
        .collect();

    Ok(FrenetCurve {
        length,
        grid: uniform_grid(n, length),
        curvature_series: TrigSeries::from_samples(&curvature, length).derivatives(3),
        torsion_series: TrigSeries::from_samples(&torsion, length).derivatives(2),
        position,
        tangent,
        normal,
        binormal,
        curvature,
        torsion,
        position_series,
    })
}

/// Parameter values `t_i` with `s(t_i) = i L / n`, by safeguarded Newton on
/// the spectral arc-length function.
fn invert_arc_length(speed: &TrigSeries, length: f64, n: usize) -> Result<Vec<f64>> {
    let two_pi = 2.0 * PI;
    let tol = 1e-14 * length;
    let mut out = Vec::with_capacity(n);
    let mut t_prev = 0.0;
    for i in 0..n {
        let target = length * i as f64 / n as f64;
        if i == 0 {
            out.push(0.0);
            continue;
        }
        let (mut lo, mut hi) = (t_prev, two_pi);
        let mut t = t_prev + (target - speed.integral_from_zero(t_prev)) / speed.eval(t_prev);
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        let mut converged = false;
        for _ in 0..100 {
            let basis = speed.basis(t);
            let f = speed.integral_with(t, &basis) - target;
            if f.abs() <= tol {
                converged = true;
                break;
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = f / speed.eval_with(&basis);
            let next = t - step;
            t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(ForgeError::NotRegular { parameter: t });
        }
        out.push(t);
        t_prev = t;
    }
    Ok(out)
}

impl FrenetCurve {
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of grid samples.
    pub fn resolution(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.position
    }

    pub fn tangents(&self) -> &[Vec3] {
        &self.tangent
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normal
    }

    pub fn binormals(&self) -> &[Vec3] {
        &self.binormal
    }

    pub fn curvatures(&self) -> &[f64] {
        &self.curvature
    }

    pub fn torsions(&self) -> &[f64] {
        &self.torsion
    }

    pub(crate) fn basis(&self, s: f64) -> FourierBasis {
        self.curvature_series[0].basis(s)
    }

    /// `[c, c', c'', c''']` at arc length `s`.
    pub fn position_derivatives(&self, s: f64) -> [Vec3; 4] {
        let basis = self.basis(s);
        self.position_derivatives_with(&basis)
    }

    pub(crate) fn position_derivatives_with(&self, basis: &FourierBasis) -> [Vec3; 4] {
        [0, 1, 2, 3].map(|d| {
            let [x, y, z] = &self.position_series[d];
            Vec3::new(x.eval_with(basis), y.eval_with(basis), z.eval_with(basis))
        })
    }

    pub fn curvature_at(&self, s: f64) -> f64 {
        self.curvature_series[0].eval(s)
    }

    pub fn torsion_at(&self, s: f64) -> f64 {
        self.torsion_series[0].eval(s)
    }

    /// Curvature jet (through `k'''`) and torsion jet (through `tau''`).
    pub(crate) fn invariant_jets(&self, basis: &FourierBasis) -> (Jet, Jet) {
        let k = [0, 1, 2, 3].map(|d| self.curvature_series[d].eval_with(basis));
        let tau = [0, 1, 2].map(|d| self.torsion_series[d].eval_with(basis));
        (
            Jet::from_derivatives(k),
            Jet::from_derivatives([tau[0], tau[1], tau[2], 0.0]),
        )
    }

    pub(crate) fn torsion_series(&self) -> &TrigSeries {
        &self.torsion_series[0]
    }

    /// Frame and invariants at `s` (taken modulo `L`).
    pub fn frenet_at(&self, s: f64) -> FrenetPoint {
        let basis = self.basis(s);
        let [c, d1, d2, _] = self.position_derivatives_with(&basis);
        let tangent = d1.normalize();
        let binormal = d1.cross(&d2).normalize();
        FrenetPoint {
            position: c,
            tangent,
            normal: binormal.cross(&tangent),
            binormal,
            curvature: self.curvature_series[0].eval_with(&basis),
            torsion: self.torsion_series[0].eval_with(&basis),
        }
    }

    /// Periodic-trapezoid integral of the torsion over the loop.
    pub fn total_torsion(&self) -> TorsionSummary {
        TorsionSummary::from_total(periodic_trapezoid(&self.torsion, self.length))
    }

    pub fn max_curvature(&self) -> f64 {
        self.curvature.iter().cloned().fold(0.0, f64::max)
    }

    pub fn min_curvature(&self) -> f64 {
        self.curvature.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Constant curvature and vanishing torsion, within `rel_tol * mean(k)`.
    pub fn is_circle(&self, rel_tol: f64) -> bool {
        let mean = self.curvature.iter().sum::<f64>() / self.curvature.len() as f64;
        let tol = rel_tol * mean;
        self.curvature.iter().all(|k| (k - mean).abs() <= tol)
            && self.torsion.iter().all(|t| t.abs() <= tol)
    }
}

/// Periodic-trapezoid total torsion with its nearest multiple of `2 pi`.
pub fn total_torsion(curve: &FrenetCurve) -> TorsionSummary {
    curve.total_torsion()
}

/// Root-finds a continuous family parameter so that total torsion equals
/// `2 pi target_m` to within `1e-10`.
pub fn calibrate_total_torsion(
    family: &CurveFamily,
    param: &str,
    bracket: (f64, f64),
    target_m: i64,
    resolution: usize,
) -> Result<CurveFamily> {
    const RESIDUAL_TOL: f64 = 1e-10;
    let target = 2.0 * PI * target_m as f64;
    let residual_at = |x: f64| -> Result<f64> {
        let fam = family.with_param(param, x)?;
        Ok(ingest_family(&fam, resolution)?.total_torsion().total - target)
    };

    // already quantized at the input value (e.g. planar curves with m = 0)
    if let Ok(current) = ingest_family(family, resolution) {
        if (current.total_torsion().total - target).abs() <= RESIDUAL_TOL {
            return Ok(family.clone());
        }
    }

    let (lo, hi) = bracket;
    let f_lo = residual_at(lo)?;
    let f_hi = residual_at(hi)?;
    if f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        return Err(ForgeError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    match bisect(|x| residual_at(x), lo, hi, f_lo, RESIDUAL_TOL, 200)? {
        BisectOutcome::Root(x) => family.with_param(param, x),
        BisectOutcome::Collapsed { at, value } => Err(ForgeError::CalibrationFailed {
            at,
            residual: value,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_points(r: f64, n: usize) -> Vec<Vec3> {
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Vec3::new(r * t.cos(), r * t.sin(), 0.0)
            })
            .collect()
    }

    #[test]
    fn sampled_circle() {
        let curve = ingest_samples(&circle_points(2.0, 256), false, 1e-9).unwrap();
        assert!((curve.length() - 4.0 * PI).abs() < 1e-12);
        for (&k, &tau) in curve.curvatures().iter().zip(curve.torsions()) {
            assert!((k - 0.5).abs() < 1e-10);
            assert!(tau.abs() < 1e-10);
        }
    }

    #[test]
    fn closed_flag_drops_duplicate_endpoint() {
        let mut pts = circle_points(1.0, 64);
        pts.push(pts[0]);
        let curve = ingest_samples(&pts, true, 1e-12).unwrap();
        assert_eq!(curve.resolution(), 64);
    }

    #[test]
    fn closed_flag_rejects_gap() {
        let pts = circle_points(1.0, 64);
        let err = ingest_samples(&pts, true, 1e-6).unwrap_err();
        assert!(matches!(err, ForgeError::NotClosed { .. }));
    }

    #[test]
    fn too_few_samples() {
        let pts = vec![Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0];
        assert!(matches!(
            ingest_samples(&pts, false, 1e-9),
            Err(ForgeError::TooFewSamples { got: 3, .. })
        ));
    }

    #[test]
    fn collinear_back_and_forth_is_rejected() {
        // x = cos t on a line: regular almost everywhere but curvature-free
        let pts: Vec<Vec3> = (0..32)
            .map(|i| Vec3::new((2.0 * PI * i as f64 / 32.0).cos(), 0.0, 0.0))
            .collect();
        let err = ingest_samples(&pts, false, 1e-9).unwrap_err();
        assert!(matches!(
            err,
            ForgeError::NotRegular { .. } | ForgeError::CurvatureVanishes { .. }
        ));
    }

    #[test]
    fn circle_frame_at_start() {
        let curve = ingest_analytic("circle", &[2.0], 128).unwrap();
        let f = curve.frenet_at(0.0);
        assert!((f.position - Vec3::new(2.0, 0.0, 0.0)).norm() < 1e-14);
        assert!((f.tangent - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-12);
        assert!((f.normal - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!(f.torsion.abs() < 1e-12);
    }

    #[test]
    fn unknown_family_and_bad_params() {
        assert!(matches!(
            ingest_analytic("lemniscate", &[1.0], 128),
            Err(ForgeError::UnknownFamily(_))
        ));
        assert!(matches!(
            ingest_analytic("circle", &[-1.0], 128),
            Err(ForgeError::InvalidParams(_))
        ));
        assert!(matches!(
            ingest_analytic("circle", &[1.0], 32),
            Err(ForgeError::InvalidParams(_))
        ));
        assert!(matches!(
            ingest_analytic("torus_curve", &[2.0, 4.0, 2.0, 0.5], 128),
            Err(ForgeError::InvalidParams(_))
        ));
    }

    #[test]
    fn spherical_points_on_unit_sphere() {
        let curve = ingest_analytic("spherical", &[0.3], 256).unwrap();
        for p in curve.positions() {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn torsion_summary_rounding() {
        let s = TorsionSummary::from_total(-2.0 * PI + 1e-9);
        assert_eq!(s.m, -1);
        assert!(s.residual < 2e-9);
        assert!(s.is_quantized(1e-6));
    }

    #[test]
    fn calibration_leaves_quantized_input_alone() {
        let fam = CurveFamily::Ellipse { a: 2.0, b: 1.0 };
        let out = calibrate_total_torsion(&fam, "a", (1.5, 3.0), 0, 128).unwrap();
        assert_eq!(out, fam);
    }

    #[test]
    fn calibration_without_sign_change() {
        let fam = CurveFamily::Spherical { a: 0.3 };
        let err = calibrate_total_torsion(&fam, "a", (0.1, 0.5), 1, 128).unwrap_err();
        assert!(matches!(err, ForgeError::NoSignChange { .. }));
    }
}
