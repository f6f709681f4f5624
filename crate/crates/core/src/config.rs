//! Run configuration and curve sample files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curve::{
    calibrate_total_torsion, ingest_family, ingest_samples, CurveFamily, FrenetCurve, Vec3,
    DEFAULT_QUANTIZATION_TOL,
};
use crate::error::{ForgeError, Result};
use crate::flow::DEFAULT_VALIDATION_FLOOR;
use crate::germ::{AProfile, GermProfiles, PeriodicProfile};
use crate::hyperbolicity::DEFAULT_HYPERBOLICITY_TOL;

pub const SCHEMA_VERSION: u32 = 1;
/// Overrides `outputs.dir` when set.
pub const OUTPUT_DIR_ENV: &str = "FORGE_OUTPUT_DIR";
pub const DEFAULT_RESOLUTION: usize = 256;
pub const DEFAULT_SWEEP_COUNT: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub curve: CurveSource,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    /// Adjusts one family parameter until the total torsion is `2 pi m`.
    #[serde(default)]
    pub calibrate: Option<Calibration>,
    #[serde(default)]
    pub theta0: f64,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub profiles: ProfileOverrides,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default = "yes")]
    pub oracle: bool,
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

fn yes() -> bool {
    true
}

/// Either an analytic family (`{"family": "ellipse", "a": 2, "b": 1}`) or a
/// sample file (`{"file": "loop.json"}`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSource {
    Family(CurveFamily),
    File { file: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub m: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileOverrides {
    pub a: AProfile,
    pub b: PeriodicProfile,
    /// `c_k` in `C(s, v) = sum_k v^(k+1) c_k(s)`.
    pub c: Vec<PeriodicProfile>,
    /// Forces the deformation size instead of the automatic choice.
    pub eps: Option<f64>,
}

impl ProfileOverrides {
    pub fn uses_default_a(&self) -> bool {
        self.a == AProfile::Default
    }

    pub fn to_profiles(&self) -> GermProfiles {
        GermProfiles {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            eps: self.eps.unwrap_or(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub quantization: f64,
    pub hyperbolicity: f64,
    /// Absolute floor of the oracle agreement tolerance.
    pub validation: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            quantization: DEFAULT_QUANTIZATION_TOL,
            hyperbolicity: DEFAULT_HYPERBOLICITY_TOL,
            validation: DEFAULT_VALIDATION_FLOOR,
        }
    }
}

/// File names are relative to `dir`; `None` skips that artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub report: String,
    pub theta_csv: Option<String>,
    pub sweep_csv: Option<String>,
    pub trace_csv: Option<String>,
    pub mesh: Option<String>,
    pub germ: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            report: "report.json".into(),
            theta_csv: Some("theta.csv".into()),
            sweep_csv: Some("sweep.csv".into()),
            trace_csv: Some("trace.csv".into()),
            mesh: Some("strip.obj".into()),
            germ: Some("germ.json".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshConfig {
    pub resolution_s: usize,
    pub resolution_v: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            resolution_s: 256,
            resolution_v: 8,
        }
    }
}

impl RunConfig {
    /// Minimal config for an analytic family with every default.
    pub fn for_family(family: CurveFamily) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            curve: CurveSource::Family(family),
            resolution: DEFAULT_RESOLUTION,
            calibrate: None,
            theta0: 0.0,
            sweep: None,
            profiles: ProfileOverrides::default(),
            tolerances: ToleranceConfig::default(),
            outputs: OutputConfig::default(),
            mesh: MeshConfig::default(),
            oracle: true,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ForgeError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config; relative paths inside it are taken relative to the
    /// file's directory, and `FORGE_OUTPUT_DIR` replaces `outputs.dir`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| ForgeError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let CurveSource::File { file } = &mut cfg.curve {
            if file.is_relative() {
                *file = base.join(&*file);
            }
        }
        if cfg.outputs.dir.is_relative() {
            cfg.outputs.dir = base.join(&cfg.outputs.dir);
        }
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            cfg.outputs.dir = PathBuf::from(dir);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ForgeError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let t = &self.tolerances;
        for (name, value) in [
            ("quantization", t.quantization),
            ("hyperbolicity", t.hyperbolicity),
            ("validation", t.validation),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ForgeError::Config(format!("tolerance `{name}` must be positive, got {value}")));
            }
        }
        if let Some(sweep) = self.sweep {
            if sweep.count == 0 {
                return Err(ForgeError::Config("sweep count must be at least 1".into()));
            }
        }
        if !self.theta0.is_finite() {
            return Err(ForgeError::Config("theta0 must be finite".into()));
        }
        if let CurveSource::Family(family) = &self.curve {
            family.validate()?;
        }
        Ok(())
    }

    /// `count` for sweeps, falling back to the default count.
    pub fn sweep_count(&self) -> usize {
        self.sweep.map_or(DEFAULT_SWEEP_COUNT, |s| s.count)
    }

    pub fn output_path(&self, name: &str) -> PathBuf {
        self.outputs.dir.join(name)
    }

    /// The family after calibration, if the curve is analytic.
    pub fn resolved_family(&self) -> Result<Option<CurveFamily>> {
        let CurveSource::Family(family) = &self.curve else {
            if self.calibrate.is_some() {
                return Err(ForgeError::Config("calibration needs an analytic curve family".into()));
            }
            return Ok(None);
        };
        match &self.calibrate {
            None => Ok(Some(family.clone())),
            Some(c) => calibrate_total_torsion(family, &c.param, (c.lo, c.hi), c.m, self.resolution).map(Some),
        }
    }

    pub fn build_curve(&self) -> Result<(FrenetCurve, Option<CurveFamily>)> {
        match self.resolved_family()? {
            Some(family) => Ok((ingest_family(&family, self.resolution)?, Some(family))),
            None => {
                let CurveSource::File { file } = &self.curve else {
                    unreachable!("families resolve to Some")
                };
                let samples = CurveSamples::load(file)?;
                Ok((ingest_samples(&samples.points, samples.closed, samples.tol)?, None))
            }
        }
    }
}

/// Contents of a curve sample file: either a bare array of `[x, y, z]` or
/// `{"points": [...], "closed": bool, "tol": f64}`. `closed` means the last
/// point repeats the first.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSamples {
    pub points: Vec<Vec3>,
    pub closed: bool,
    pub tol: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SampleFile {
    Bare(Vec<[f64; 3]>),
    Full {
        points: Vec<[f64; 3]>,
        #[serde(default)]
        closed: bool,
        #[serde(default = "default_closure_tol")]
        tol: f64,
    },
}

fn default_closure_tol() -> f64 {
    1e-9
}

impl CurveSamples {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SampleFile = serde_json::from_str(text).map_err(|e| ForgeError::Config(e.to_string()))?;
        let (points, closed, tol) = match file {
            SampleFile::Bare(points) => (points, false, default_closure_tol()),
            SampleFile::Full { points, closed, tol } => (points, closed, tol),
        };
        Ok(Self {
            points: points.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect(),
            closed,
            tol,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| ForgeError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg = RunConfig::from_json(
            r#"{"schema_version": 1, "curve": {"family": "ellipse", "a": 2.0, "b": 1.0}, "theta0": 1.5}"#,
        )
        .unwrap();
        assert_eq!(cfg.curve, CurveSource::Family(CurveFamily::Ellipse { a: 2.0, b: 1.0 }));
        assert_eq!(cfg.resolution, DEFAULT_RESOLUTION);
        assert!(cfg.oracle);
        assert_eq!(cfg.sweep_count(), DEFAULT_SWEEP_COUNT);
    }

    #[test]
    fn file_source_and_overrides() {
        let cfg = RunConfig::from_json(
            r#"{"schema_version": 1, "curve": {"file": "loop.json"},
                "profiles": {"a": {"mode": "zero"}, "c": [{"mean": 0.5}]},
                "sweep": {"count": 4}}"#,
        )
        .unwrap();
        assert_eq!(cfg.curve, CurveSource::File { file: "loop.json".into() });
        assert_eq!(cfg.profiles.a, AProfile::Zero);
        assert_eq!(cfg.profiles.c.len(), 1);
        assert_eq!(cfg.sweep_count(), 4);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"schema_version": 2, "curve": {"family": "circle", "radius": 1.0}}"#,
            r#"{"schema_version": 1, "curve": {"family": "circle", "radius": -1.0}}"#,
            r#"{"schema_version": 1, "curve": {"family": "circle", "radius": 1.0}, "sweep": {"count": 0}}"#,
            r#"{"schema_version": 1, "curve": {"family": "circle", "radius": 1.0}, "tolerances": {"quantization": 0}}"#,
            r#"{"schema_version": 1, "curve": {"family": "circle", "radius": 1.0}, "bogus": 1}"#,
        ] {
            assert!(matches!(RunConfig::from_json(text), Err(ForgeError::Config(_)) | Err(ForgeError::InvalidParams(_))), "{text}");
        }
    }

    #[test]
    fn sample_file_forms() {
        let bare = CurveSamples::from_json("[[1,0,0],[0,1,0],[-1,0,0]]").unwrap();
        assert_eq!(bare.points.len(), 3);
        assert!(!bare.closed);
        let full = CurveSamples::from_json(r#"{"points": [[1,0,0],[0,1,0]], "closed": true, "tol": 1e-6}"#).unwrap();
        assert!(full.closed);
        assert_eq!(full.tol, 1e-6);
    }
}
