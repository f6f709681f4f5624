mod common;

use std::f64::consts::PI;
use std::fs;

use common::*;
use forge_core::config::{Calibration, CurveSource, SweepSpec};
use forge_core::pipeline::emit_sweep;
use forge_core::{run_pipeline, AProfile, Command, CurveFamily, RunConfig, Status};

fn config_in(dir: &std::path::Path, family: CurveFamily) -> RunConfig {
    let mut cfg = RunConfig::for_family(family);
    cfg.outputs.dir = dir.to_path_buf();
    cfg.mesh.resolution_s = 64;
    cfg.mesh.resolution_v = 4;
    cfg
}

#[test]
fn circle_sweep_is_flat() {
    let mut cfg = RunConfig::for_family(CurveFamily::Circle { radius: 2.0 });
    cfg.sweep = Some(SweepSpec { count: 8 });
    let rows = emit_sweep(&curve(&CurveFamily::Circle { radius: 2.0 }), &cfg).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.lambda.unwrap().abs() < 1e-12));
}

#[test]
fn planar_ellipse_sweep_default_profile() {
    let mut cfg = RunConfig::for_family(ellipse_family());
    cfg.sweep = Some(SweepSpec { count: 12 });
    let rows = emit_sweep(&curve(&ellipse_family()), &cfg).unwrap();
    for r in rows {
        assert!(r.lambda.unwrap().abs() < 1e-12);
        assert_eq!(r.umbilic_count, Some(0));
    }
}

#[test]
fn zero_profile_sweep_on_winding_curve_hits_umbilics() {
    let family = calibrated_torus_family(1);
    let mut cfg = RunConfig::for_family(family.clone());
    cfg.sweep = Some(SweepSpec { count: 12 });
    cfg.profiles.a = AProfile::Zero;
    let rows = emit_sweep(&curve(&family), &cfg).unwrap();
    for r in rows {
        assert!(r.umbilic_count.unwrap() >= 2, "{r:?}");
        assert!(r.lambda.is_none());
    }
}

#[test]
fn run_writes_artifacts_and_confirms() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config_in(dir.path(), ellipse_family());
    cfg.theta0 = PI / 2.0;
    cfg.sweep = Some(SweepSpec { count: 4 });
    let outcome = run_pipeline(&cfg, Command::Run).unwrap();
    assert_eq!(outcome.report.status, Status::Ok);
    assert_eq!(outcome.exit_code(), 0);
    let cert = outcome.report.certificate.as_ref().unwrap();
    assert!(cert.eps_used != 0.0);
    let shooting = cert.oracle_log_pi_prime.unwrap();
    assert!((shooting.abs() - cert.lambda.abs()).abs() < 1e-4);
    for name in ["report.json", "theta.csv", "sweep.csv", "trace.csv", "strip.obj", "germ.json"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let sweep = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().next(), Some("theta0,lambda,dlambda,umbilic_count"));
    assert_eq!(sweep.lines().count(), 5);
    let obj = fs::read_to_string(dir.path().join("strip.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 64 * 4);
}

#[test]
fn reports_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config_in(dir.path(), spherical_family());
    cfg.theta0 = 1.0;
    cfg.sweep = Some(SweepSpec { count: 6 });
    run_pipeline(&cfg, Command::Run).unwrap();
    let first = fs::read(dir.path().join("report.json")).unwrap();
    let germ_first = fs::read(dir.path().join("germ.json")).unwrap();
    run_pipeline(&cfg, Command::Run).unwrap();
    assert_eq!(first, fs::read(dir.path().join("report.json")).unwrap());
    assert_eq!(germ_first, fs::read(dir.path().join("germ.json")).unwrap());
}

#[test]
fn error_paths_produce_structured_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (config_in(dir.path(), uncalibrated_torus_family()), Status::NotQuantized, "not_quantized"),
        (
            {
                let mut c = config_in(dir.path(), uncalibrated_torus_family());
                c.calibrate = Some(Calibration {
                    param: "minor".into(),
                    lo: 1.0,
                    hi: 1.95,
                    m: -5,
                });
                c
            },
            Status::Failure,
            "no_sign_change",
        ),
        (
            {
                let mut c = config_in(dir.path(), ellipse_family());
                c.curve = CurveSource::File {
                    file: dir.path().join("missing.json"),
                };
                c
            },
            Status::Failure,
            "config",
        ),
    ];
    for (cfg, status, kind) in cases {
        let outcome = run_pipeline(&cfg, Command::Run).unwrap();
        assert_eq!(outcome.report.status, status);
        let text = fs::read_to_string(&outcome.report_path).unwrap();
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(json["error"]["kind"], kind);
        assert_eq!(json["exit_code"], status.exit_code());
    }
    let unquantized = run_pipeline(&config_in(dir.path(), uncalibrated_torus_family()), Command::Run).unwrap();
    let residual = unquantized.report.curve.unwrap().quantization_residual;
    assert!(residual > 1.0);
}

#[test]
fn verdict_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let circle = run_pipeline(&config_in(dir.path(), CurveFamily::Circle { radius: 1.0 }), Command::Run).unwrap();
    assert_eq!(circle.report.status, Status::CircleObstruction);
    let validation = circle.report.validation.unwrap();
    assert!(validation.confirmed);
    assert!(validation.estimate.shooting.abs() < 1e-7);

    let mut zero = config_in(dir.path(), calibrated_torus_family(-1));
    zero.profiles.a = AProfile::Zero;
    zero.theta0 = 0.5;
    let outcome = run_pipeline(&zero, Command::Run).unwrap();
    assert_eq!(outcome.report.status, Status::UmbilicOnCycle);
    assert!(outcome.report.certificate.unwrap().umbilic_roots.len() >= 2);
}

#[test]
fn mesh_command_writes_strip() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config_in(dir.path(), calibrated_torus_family(1));
    cfg.calibrate = None;
    cfg.theta0 = 0.5;
    let outcome = run_pipeline(&cfg, Command::Mesh).unwrap();
    assert_eq!(outcome.report.status, Status::Ok);
    let mesh = outcome.report.mesh.unwrap();
    assert!(mesh.seam_gap <= 1e-6);
    assert_eq!(mesh.euler_characteristic, 0);
    assert!(!dir.path().join("trace.csv").exists());
}
