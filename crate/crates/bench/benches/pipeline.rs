use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use forge_core::config::SweepSpec;
use forge_core::pipeline::emit_sweep;
use forge_core::{
    certify_hyperbolic, ingest_family, poincare_log_derivative, solve_theta, CurveFamily, RunConfig,
    SurfaceGerm,
};

fn torus() -> CurveFamily {
    // calibrated (1, 2) curve with total torsion -2 pi
    let start = CurveFamily::TorusCurve { p: 1, q: 2, major: 2.0, minor: 1.0 };
    forge_core::calibrate_total_torsion(&start, "minor", (1.0, 1.95), -1, 256).unwrap()
}

fn ingest(c: &mut Criterion) {
    let family = torus();
    let mut group = c.benchmark_group("ingest");
    for n in [128, 256, 512, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| ingest_family(black_box(&family), n).unwrap())
        });
    }
    group.finish();
}

fn certify(c: &mut Criterion) {
    let cases = [
        ("ellipse", CurveFamily::Ellipse { a: 2.0, b: 1.0 }, PI / 2.0),
        ("torus", torus(), 0.5),
    ];
    let mut group = c.benchmark_group("certify");
    for (name, family, theta0) in cases {
        let curve = ingest_family(&family, 256).unwrap();
        group.bench_function(name, |b| b.iter(|| certify_hyperbolic(black_box(&curve), theta0).unwrap()));
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let curve = ingest_family(&CurveFamily::Ellipse { a: 2.0, b: 1.0 }, 256).unwrap();
    let report = certify_hyperbolic(&curve, PI / 2.0).unwrap();
    let theta = solve_theta(&curve, PI / 2.0).unwrap();
    let germ = SurfaceGerm::new(curve, theta, report.profiles).unwrap();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    group.bench_function("poincare_log_derivative", |b| {
        b.iter(|| poincare_log_derivative(black_box(&germ)).unwrap())
    });
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let family = torus();
    let curve = ingest_family(&family, 256).unwrap();
    let mut config = RunConfig::for_family(family);
    config.sweep = Some(SweepSpec { count: 32 });
    c.bench_function("sweep/32", |b| b.iter(|| emit_sweep(black_box(&curve), &config).unwrap()));
}

criterion_group!(benches, ingest, certify, oracle, sweep);
criterion_main!(benches);
