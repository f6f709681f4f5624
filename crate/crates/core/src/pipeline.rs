//! End-to-end runs: ingest, certify, validate, and write the artifacts.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use serde::Serialize;
use serde_json::Value;

use crate::config::{CurveSource, RunConfig, SCHEMA_VERSION};
use crate::curve::{total_torsion, CurveFamily, FrenetCurve};
use crate::error::{ForgeError, Result};
use crate::flow::{cross_validate_with, integrate_principal_line, Validation};
use crate::germ::SurfaceGerm;
use crate::hyperbolicity::{
    assess_profiles, certify_hyperbolic_with, lambda_sweep, sweep_angles, CertifyOptions, HyperbolicityReport,
    SweepRow, Verdict,
};
use crate::mesh::build_mesh;
use crate::theta::{solve_theta_with_tol, ThetaField};

/// Significant digits kept for every float in JSON output.
pub const REPORT_DIGITS: usize = 12;
/// Start of the written principal-line trace, as a fraction of the strip half-width.
pub const TRACE_OFFSET: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Run,
    Sweep,
    Mesh,
}

/// Outcome classes, each with its own process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Hyperbolic, and confirmed by the oracle when it ran.
    Ok,
    Failure,
    NotQuantized,
    CircleObstruction,
    UmbilicOnCycle,
    Mismatch,
    NonHyperbolic,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failure => 1,
            Status::NotQuantized => 2,
            Status::CircleObstruction => 3,
            Status::UmbilicOnCycle => 4,
            Status::Mismatch => 5,
            Status::NonHyperbolic => 6,
        }
    }

    fn from_error(err: &ForgeError) -> Self {
        match err {
            ForgeError::NotQuantized { .. } => Status::NotQuantized,
            ForgeError::UmbilicOnCycle { .. } | ForgeError::IdenticallyZero => Status::UmbilicOnCycle,
            ForgeError::Mismatch { .. } => Status::Mismatch,
            _ => Status::Failure,
        }
    }

    fn from_verdict(verdict: Verdict) -> Self {
        match verdict {
            Verdict::Hyperbolic => Status::Ok,
            Verdict::NonHyperbolic => Status::NonHyperbolic,
            Verdict::UmbilicObstruction => Status::UmbilicOnCycle,
            Verdict::CircleObstruction => Status::CircleObstruction,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
    pub details: Value,
}

impl From<&ForgeError> for ErrorReport {
    fn from(err: &ForgeError) -> Self {
        Self {
            kind: err.kind(),
            message: err.to_string(),
            details: err.details(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveSummary {
    /// `samples` for file input, otherwise the (calibrated) family.
    pub source: Value,
    pub resolution: usize,
    pub length: f64,
    pub total_torsion: f64,
    pub m: i64,
    pub quantization_residual: f64,
    pub min_curvature: f64,
    pub max_curvature: f64,
}

impl CurveSummary {
    fn new(curve: &FrenetCurve, family: Option<&CurveFamily>) -> Self {
        let torsion = total_torsion(curve);
        Self {
            source: family
                .and_then(|f| serde_json::to_value(f).ok())
                .unwrap_or_else(|| Value::String("samples".into())),
            resolution: curve.resolution(),
            length: curve.length(),
            total_torsion: torsion.total,
            m: torsion.m,
            quantization_residual: torsion.residual,
            min_curvature: curve.min_curvature(),
            max_curvature: curve.max_curvature(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeshSummary {
    pub vertices: usize,
    pub faces: usize,
    pub seam_gap: f64,
    pub euler_characteristic: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceSummary {
    pub v0: f64,
    pub v_end: f64,
    pub steps: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: Command,
    pub status: Status,
    pub exit_code: i32,
    pub error: Option<ErrorReport>,
    pub curve: Option<CurveSummary>,
    pub certificate: Option<HyperbolicityReport>,
    pub validation: Option<Validation>,
    pub trace: Option<TraceSummary>,
    pub sweep: Option<Vec<SweepRow>>,
    pub mesh: Option<MeshSummary>,
    /// File names written next to the report.
    pub artifacts: Vec<String>,
}

impl RunReport {
    fn new(command: Command) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            status: Status::Ok,
            exit_code: 0,
            error: None,
            curve: None,
            certificate: None,
            validation: None,
            trace: None,
            sweep: None,
            mesh: None,
            artifacts: Vec::new(),
        }
    }

    fn fail(&mut self, err: &ForgeError) {
        self.set_status(Status::from_error(err));
        self.error = Some(err.into());
    }

    fn set_status(&mut self, status: Status) {
        self.status = status;
        self.exit_code = status.exit_code();
    }

    /// Report as JSON with every float rounded to `REPORT_DIGITS` significant digits.
    pub fn to_json(&self) -> Result<String> {
        let mut value = serde_json::to_value(self)?;
        round_floats(&mut value, REPORT_DIGITS);
        Ok(serde_json::to_string_pretty(&value)? + "\n")
    }
}

/// Rounds `x` to `digits` significant digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Rounds every non-integer number inside a JSON value.
pub fn round_floats(value: &mut Value, digits: usize) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if let Some(r) = serde_json::Number::from_f64(round_significant(x, digits)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_floats(v, digits)),
        Value::Object(map) => map.values_mut().for_each(|v| round_floats(v, digits)),
        _ => {}
    }
}

/// Result of a pipeline run: the report (already written) and its status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub report_path: PathBuf,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }
}

/// Runs `command` and writes its artifacts under `config.outputs.dir`.
/// Documented failures end up in the report; only failing to write the
/// report itself is returned as an error.
pub fn run_pipeline(config: &RunConfig, command: Command) -> Result<Outcome> {
    fs::create_dir_all(&config.outputs.dir)?;
    let mut report = RunReport::new(command);
    let result = match command {
        Command::Run => run_full(config, &mut report),
        Command::Sweep => run_sweep(config, &mut report),
        Command::Mesh => run_mesh(config, &mut report),
    };
    if let Err(err) = result {
        report.fail(&err);
    }
    let report_path = config.output_path(&config.outputs.report);
    fs::write(&report_path, report.to_json()?)?;
    Ok(Outcome { report, report_path })
}

fn ingest(config: &RunConfig, report: &mut RunReport) -> Result<FrenetCurve> {
    let (curve, family) = config.build_curve()?;
    report.curve = Some(CurveSummary::new(&curve, family.as_ref()));
    Ok(curve)
}

fn certify(config: &RunConfig, curve: &FrenetCurve) -> Result<(ThetaField, HyperbolicityReport)> {
    let tol = &config.tolerances;
    let theta = solve_theta_with_tol(curve, config.theta0, tol.quantization)?;
    let overrides = &config.profiles;
    let certificate = if overrides.uses_default_a() {
        let opts = CertifyOptions {
            quantization_tol: tol.quantization,
            hyperbolicity_tol: tol.hyperbolicity,
            eps: overrides.eps,
        };
        let mut cert = certify_hyperbolic_with(curve, config.theta0, &opts)?;
        cert.profiles.b = overrides.b.clone();
        cert.profiles.c = overrides.c.clone();
        cert
    } else {
        assess_profiles(curve, &theta, &overrides.to_profiles(), tol.hyperbolicity)?
    };
    Ok((theta, certificate))
}

fn create(config: &RunConfig, name: &str, report: &mut RunReport) -> Result<BufWriter<File>> {
    report.artifacts.push(name.to_string());
    Ok(BufWriter::new(File::create(config.output_path(name))?))
}

fn run_full(config: &RunConfig, report: &mut RunReport) -> Result<()> {
    let curve = ingest(config, report)?;
    let (theta, certificate) = certify(config, &curve)?;
    report.set_status(Status::from_verdict(certificate.verdict));
    report.certificate = Some(certificate.clone());

    if let Some(name) = &config.outputs.theta_csv {
        let mut out = create(config, name, report)?;
        theta.write_csv(&curve, &mut out)?;
        out.flush()?;
    }
    if config.sweep.is_some() {
        write_sweep(config, &curve, &theta, report)?;
    }
    if certificate.verdict == Verdict::UmbilicObstruction {
        return Ok(());
    }

    let germ = SurfaceGerm::new(curve, theta, certificate.profiles.clone())?;
    write_germ_artifacts(config, &germ, report)?;

    if config.oracle {
        let validation = cross_validate_with(
            &germ,
            &certificate,
            config.tolerances.validation,
            config.tolerances.hyperbolicity,
        )?;
        if let Some(cert) = report.certificate.as_mut() {
            cert.oracle_log_pi_prime = Some(validation.estimate.shooting);
        }
        if !validation.confirmed {
            report.set_status(Status::Mismatch);
        }
        report.validation = Some(validation);

        let trace = integrate_principal_line(&germ, TRACE_OFFSET * germ.v_max())?;
        report.trace = Some(TraceSummary {
            v0: trace.v0,
            v_end: trace.v_end,
            steps: trace.steps,
            max_residual: trace.max_residual,
        });
        if let Some(name) = &config.outputs.trace_csv {
            let mut out = create(config, name, report)?;
            trace.write_csv(&mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn run_sweep(config: &RunConfig, report: &mut RunReport) -> Result<()> {
    let curve = ingest(config, report)?;
    let theta = solve_theta_with_tol(&curve, config.theta0, config.tolerances.quantization)?;
    write_sweep(config, &curve, &theta, report)
}

fn run_mesh(config: &RunConfig, report: &mut RunReport) -> Result<()> {
    let curve = ingest(config, report)?;
    let (theta, certificate) = certify(config, &curve)?;
    report.set_status(Status::from_verdict(certificate.verdict));
    report.certificate = Some(certificate.clone());
    let germ = SurfaceGerm::new(curve, theta, certificate.profiles)?;
    write_germ_artifacts(config, &germ, report)
}

/// Rows of `(theta0, Lambda, dLambda/dtheta0, umbilic count)` for the
/// configured sweep, using the configured profiles.
pub fn emit_sweep(curve: &FrenetCurve, config: &RunConfig) -> Result<Vec<SweepRow>> {
    let theta = solve_theta_with_tol(curve, config.theta0, config.tolerances.quantization)?;
    Ok(sweep_rows(config, curve, &theta))
}

fn sweep_rows(config: &RunConfig, curve: &FrenetCurve, theta: &ThetaField) -> Vec<SweepRow> {
    let angles = sweep_angles(config.sweep_count());
    lambda_sweep(curve, theta, &config.profiles.to_profiles(), &angles)
}

fn write_sweep(config: &RunConfig, curve: &FrenetCurve, theta: &ThetaField, report: &mut RunReport) -> Result<()> {
    let rows = sweep_rows(config, curve, theta);
    if let Some(name) = &config.outputs.sweep_csv {
        let mut out = create(config, name, report)?;
        write_sweep_csv(&rows, &mut out)?;
        out.flush()?;
    }
    report.sweep = Some(rows);
    Ok(())
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    fn cell<T: ToString>(x: Option<T>) -> String {
        x.map(|v| v.to_string()).unwrap_or_default()
    }
    writeln!(out, "theta0,lambda,dlambda,umbilic_count")?;
    for row in rows {
        writeln!(
            out,
            "{:.15e},{},{},{}",
            row.theta0,
            cell(row.lambda.map(|x| format!("{x:.15e}"))),
            cell(row.dlambda.map(|x| format!("{x:.15e}"))),
            cell(row.umbilic_count),
        )?;
    }
    Ok(())
}

fn write_germ_artifacts(config: &RunConfig, germ: &SurfaceGerm, report: &mut RunReport) -> Result<()> {
    if let Some(name) = &config.outputs.germ {
        let mut value = germ_descriptor(config, germ);
        round_floats(&mut value, REPORT_DIGITS);
        let mut out = create(config, name, report)?;
        serde_json::to_writer_pretty(&mut out, &value)?;
        writeln!(out)?;
        out.flush()?;
    }
    if let Some(name) = &config.outputs.mesh {
        let mesh = build_mesh(germ, config.mesh.resolution_s, config.mesh.resolution_v)?;
        report.mesh = Some(MeshSummary {
            vertices: mesh.vertices.len(),
            faces: mesh.faces.len(),
            seam_gap: mesh.seam_gap,
            euler_characteristic: mesh.euler_characteristic(),
        });
        let mut out = create(config, name, report)?;
        mesh.write_obj(&mut out)?;
        out.flush()?;
    }
    Ok(())
}

/// Everything needed to rebuild the germ: the curve source, the angle field
/// and the height-function profiles.
pub fn germ_descriptor(config: &RunConfig, germ: &SurfaceGerm) -> Value {
    let curve = germ.curve();
    let source = match (&config.curve, config.resolved_family()) {
        (CurveSource::Family(_), Ok(Some(family))) => serde_json::to_value(family).unwrap_or(Value::Null),
        (CurveSource::File { file }, _) => serde_json::json!({ "file": file }),
        _ => Value::Null,
    };
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "height": "h(s, v) = (A + eps a) v^2 / 2 + B v^3 / 6 + v^4 C(s, v), C(s, v) = sum_k c_k v^(k + 1)",
        "curve": source,
        "resolution": curve.resolution(),
        "length": curve.length(),
        "theta0": germ.theta().theta0(),
        "winding": germ.theta().winding(),
        "v_max": germ.v_max(),
        "profiles": germ.profiles(),
    })
}
