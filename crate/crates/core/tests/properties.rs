mod common;

use std::f64::consts::PI;

use common::*;
use forge_core::curve::ingest_samples;
use forge_core::flow::{integrate_principal_line, poincare_log_derivative, poincare_log_derivative_with};
use forge_core::germ::{umbilic_roots, Harmonic};
use forge_core::hyperbolicity::{assess_profiles, dlambda_deps0, lambda};
use forge_core::mesh::build_mesh;
use forge_core::pipeline::round_significant;
use forge_core::theta::strip_direction;
use forge_core::{
    ingest_family, solve_theta, total_torsion, CurveFamily, FrenetCurve, GermProfiles, PeriodicProfile,
    SurfaceGerm, Vec3,
};
use nalgebra::{Rotation3, Unit};
use proptest::prelude::*;

fn knot_points(n: usize, warp: f64) -> Vec<Vec3> {
    // (2, 3) torus knot, sampled at a non-uniform parameter
    (0..n)
        .map(|i| {
            let u = 2.0 * PI * i as f64 / n as f64;
            let t = u + warp * u.sin();
            let rho = 2.0 + 0.7 * (3.0 * t).cos();
            Vec3::new(rho * (2.0 * t).cos(), rho * (2.0 * t).sin(), 0.7 * (3.0 * t).sin())
        })
        .collect()
}

fn frenet_residual(c: &FrenetCurve) -> f64 {
    // central differences of the stored frames against the Frenet equations
    let n = c.resolution();
    let h = c.length() / n as f64;
    let (t, nn, b) = (c.tangents(), c.normals(), c.binormals());
    let (k, tau) = (c.curvatures(), c.torsions());
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let (ip, im) = ((i + 1) % n, (i + n - 1) % n);
        let dt = (t[ip] - t[im]) / (2.0 * h);
        let dn = (nn[ip] - nn[im]) / (2.0 * h);
        let db = (b[ip] - b[im]) / (2.0 * h);
        worst = worst
            .max((dt - nn[i] * k[i]).norm())
            .max((dn + t[i] * k[i] - b[i] * tau[i]).norm())
            .max((db + nn[i] * tau[i]).norm());
    }
    worst
}

#[test]
fn frenet_residual_converges_at_second_order() {
    let coarse = ingest_family(&uncalibrated_torus_family(), 128).unwrap();
    let fine = ingest_family(&uncalibrated_torus_family(), 256).unwrap();
    let ratio = frenet_residual(&coarse) / frenet_residual(&fine);
    assert!(ratio > 3.5, "ratio {ratio}");
}

#[test]
fn arc_length_parametrization_has_unit_speed() {
    for c in [
        curve(&ellipse_family()),
        curve(&spherical_family()),
        ingest_samples(&knot_points(400, 0.3), false, 1e-9).unwrap(),
    ] {
        for &s in c.grid() {
            let speed = c.position_derivatives(s)[1].norm();
            assert!((speed - 1.0).abs() < 1e-8, "speed {speed}");
        }
    }
}

#[test]
fn planar_and_spherical_total_torsion() {
    for family in [
        CurveFamily::Circle { radius: 0.7 },
        CurveFamily::Ellipse { a: 3.0, b: 0.8 },
    ] {
        assert_eq!(total_torsion(&curve(&family)).total.abs(), 0.0);
    }
    for a in [0.1, 0.3, 0.6] {
        assert!(total_torsion(&curve(&CurveFamily::Spherical { a })).total.abs() <= 1e-6);
    }
}

#[test]
fn return_map_monotone_and_contracting_consistently() {
    let (germ, _) = certified_germ(&spherical_family(), 1.0);
    let log_slope = poincare_log_derivative(&germ).unwrap().shooting;
    let v_max = germ.v_max();
    let starts: Vec<f64> = [-4e-3, -2e-3, -1e-3, 1e-3, 2e-3, 4e-3].iter().map(|f| f * v_max).collect();
    let ends: Vec<f64> = starts
        .iter()
        .map(|&v0| integrate_principal_line(&germ, v0).unwrap().v_end)
        .collect();
    assert!(ends.windows(2).all(|w| w[0] < w[1]));
    for (v0, v1) in starts.iter().zip(&ends) {
        let grows = v1.abs() > v0.abs();
        assert_eq!(grows, log_slope > 0.0, "v0 = {v0}");
    }
}

#[test]
fn oracle_converges_in_integration_tolerance() {
    let (germ, report) = certified_germ(&ellipse_family(), PI / 2.0);
    let loose = poincare_log_derivative_with(&germ, 1e-10).unwrap().shooting;
    let tight = poincare_log_derivative_with(&germ, 5e-11).unwrap().shooting;
    let tol = forge_core::flow::validation_tolerance(report.lambda, 1e-4);
    assert!((loose - tight).abs() < 0.1 * tol);
}

#[test]
fn traces_satisfy_the_quadratic() {
    for (_, family, theta0) in hyperbolic_cases() {
        let (germ, _) = certified_germ(&family, theta0);
        let trace = integrate_principal_line(&germ, 0.05 * germ.v_max()).unwrap();
        assert!(trace.max_residual < 1e-9, "{}", trace.max_residual);
    }
}

fn profile_strategy() -> impl Strategy<Value = PeriodicProfile> {
    (
        -1.0..1.0f64,
        prop::collection::vec((1u32..5, -1.0..1.0f64, -1.0..1.0f64), 0..3),
    )
        .prop_map(|(mean, hs)| PeriodicProfile {
            mean,
            harmonics: hs.into_iter().map(|(n, cos, sin)| Harmonic { n, cos, sin }).collect(),
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rigid_motions_preserve_invariants(
        axis in (-1.0..1.0f64, -1.0..1.0f64, 0.2..1.0f64),
        angle in -3.0..3.0f64,
        shift in (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64),
    ) {
        let points = knot_points(240, 0.0);
        let rot = Rotation3::from_axis_angle(&Unit::new_normalize(Vec3::new(axis.0, axis.1, axis.2)), angle);
        let offset = Vec3::new(shift.0, shift.1, shift.2);
        let moved: Vec<Vec3> = points.iter().map(|p| rot * p + offset).collect();
        let a = ingest_samples(&points, false, 1e-9).unwrap();
        let b = ingest_samples(&moved, false, 1e-9).unwrap();
        prop_assert!((total_torsion(&a).total - total_torsion(&b).total).abs() <= 1e-9);
        prop_assert!((a.length() - b.length()).abs() <= 1e-10);
        for (ka, kb) in a.curvatures().iter().zip(b.curvatures()) {
            prop_assert!((ka - kb).abs() <= 1e-9);
        }
    }

    #[test]
    fn sampling_parameter_does_not_matter(warp in -0.5..0.5f64) {
        let plain = ingest_samples(&knot_points(300, 0.0), false, 1e-9).unwrap();
        let warped = ingest_samples(&knot_points(300, warp), false, 1e-9).unwrap();
        prop_assert!((plain.length() - warped.length()).abs() < 1e-8);
        prop_assert!((total_torsion(&plain).total - total_torsion(&warped).total).abs() < 1e-7);
        for s in [0.0, 3.0, 9.0] {
            prop_assert!((plain.curvature_at(s) - warped.curvature_at(s)).abs() < 1e-6);
        }
    }

    #[test]
    fn initial_angles_rotate_the_strip(t0 in 0.0..6.28f64, t1 in 0.0..6.28f64) {
        let c = curve(&calibrated_torus_family(-1));
        let a = solve_theta(&c, t0).unwrap();
        let b = solve_theta(&c, t1).unwrap();
        for s in [0.0, 2.0, 5.5] {
            let cos = strip_direction(&c, &a, s).dot(&strip_direction(&c, &b, s));
            prop_assert!((cos - (t1 - t0).cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn b_and_c_do_not_change_the_cycle(
        b in profile_strategy(),
        c in prop::collection::vec(profile_strategy(), 0..3),
        theta0 in 0.0..6.28f64,
    ) {
        let curve = curve(&spherical_family());
        let theta = solve_theta(&curve, theta0).unwrap();
        let base = GermProfiles::default().with_eps(0.05);
        let varied = GermProfiles { b, c, ..base.clone() };
        let l0 = lambda(&curve, &theta, &base).unwrap();
        let l1 = lambda(&curve, &theta, &varied).unwrap();
        prop_assert!((l0 - l1).abs() <= 1e-8);
        let g0 = SurfaceGerm::new(curve.clone(), theta.clone(), base.clone()).unwrap();
        let g1 = SurfaceGerm::new(curve.clone(), theta.clone(), varied.clone()).unwrap();
        for s in [0.1, 1.9, 4.4] {
            let (f0, f1) = (g0.fundamental_forms(s, 0.0).unwrap(), g1.fundamental_forms(s, 0.0).unwrap());
            prop_assert!((f0.k1 - f1.k1).abs() <= 1e-8 && (f0.k2 - f1.k2).abs() <= 1e-8);
        }
        let r0 = assess_profiles(&curve, &theta, &base, 1e-6).unwrap();
        let r1 = assess_profiles(&curve, &theta, &varied, 1e-6).unwrap();
        prop_assert_eq!(r0.verdict, r1.verdict);
    }

    #[test]
    fn default_profile_never_has_umbilics(a in 1.2..3.0f64, theta0 in 0.0..6.28f64) {
        let c = ingest_family(&CurveFamily::Ellipse { a, b: 1.0 }, 128).unwrap();
        let theta = solve_theta(&c, theta0).unwrap();
        prop_assert!(umbilic_roots(&c, &theta, &GermProfiles::default()).unwrap().is_empty());
        prop_assert!(dlambda_deps0(&c, &theta) >= 0.0);
    }

    #[test]
    fn theta_shift_is_uniform(t0 in -10.0..10.0f64, shift in -10.0..10.0f64) {
        let c = curve(&spherical_family());
        let a = solve_theta(&c, t0).unwrap();
        let b = a.with_theta0(t0 + shift);
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((y - x - shift).abs() < 1e-12);
        }
    }

    #[test]
    fn mesh_is_an_annulus(ns in 8usize..64, nv in 1usize..8) {
        let (germ, _) = certified_germ(&ellipse_family(), 1.0);
        let mesh = build_mesh(&germ, ns, nv).unwrap();
        prop_assert_eq!(mesh.euler_characteristic(), 0);
        prop_assert_eq!(mesh.vertices.len(), ns * (nv + 1));
    }

    #[test]
    fn rounding_is_idempotent_and_close(x in prop::num::f64::NORMAL) {
        let r = round_significant(x, 12);
        prop_assert_eq!(round_significant(r, 12), r);
        prop_assert!((r - x).abs() <= 5.0001e-12 * x.abs());
    }
}
