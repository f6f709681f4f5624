#![allow(dead_code)]

use std::f64::consts::PI;

use forge_core::curve::calibrate_total_torsion;
use forge_core::{
    certify_hyperbolic, ingest_family, solve_theta, CurveFamily, FrenetCurve, HyperbolicityReport, SurfaceGerm,
};

pub const RES: usize = 256;

pub fn ellipse_family() -> CurveFamily {
    CurveFamily::Ellipse { a: 2.0, b: 1.0 }
}

pub fn spherical_family() -> CurveFamily {
    CurveFamily::Spherical { a: 0.3 }
}

pub fn uncalibrated_torus_family() -> CurveFamily {
    CurveFamily::TorusCurve {
        p: 1,
        q: 2,
        major: 2.0,
        minor: 1.0,
    }
}

/// `(1, 2)` torus curve with total torsion `2 pi m`, `m = -1`, or its mirror
/// `(1, -2)` with `m = +1`.
pub fn calibrated_torus_family(m: i64) -> CurveFamily {
    let q = if m < 0 { 2 } else { -2 };
    let start = CurveFamily::TorusCurve {
        p: 1,
        q,
        major: 2.0,
        minor: 1.0,
    };
    calibrate_total_torsion(&start, "minor", (1.0, 1.95), m, RES).unwrap()
}

pub fn curve(family: &CurveFamily) -> FrenetCurve {
    ingest_family(family, RES).unwrap()
}

/// Quantized non-circular test curves with the angle used for each.
pub fn hyperbolic_cases() -> Vec<(&'static str, CurveFamily, f64)> {
    vec![
        ("ellipse", ellipse_family(), PI / 2.0),
        ("spherical", spherical_family(), 1.0),
        ("torus m=-1", calibrated_torus_family(-1), 0.5),
        ("torus m=+1", calibrated_torus_family(1), 0.5),
    ]
}

pub fn certified_germ(family: &CurveFamily, theta0: f64) -> (SurfaceGerm, HyperbolicityReport) {
    let c = curve(family);
    let report = certify_hyperbolic(&c, theta0).unwrap();
    let theta = solve_theta(&c, theta0).unwrap();
    let germ = SurfaceGerm::new(c, theta, report.profiles.clone()).unwrap();
    (germ, report)
}
