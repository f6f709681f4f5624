use serde_json::{json, Value};
use thiserror::Error;

/// Every failure the pipeline can report.
#[derive(Debug, Error)]
pub enum ForgeError {
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },

    #[error("closure gap {gap:.3e} exceeds tolerance {tol:.3e}")]
    NotClosed { gap: f64, tol: f64 },

    #[error("minimum curvature {min_curvature:.3e} below floor {floor:.3e}: curve is not Frenet")]
    CurvatureVanishes { min_curvature: f64, floor: f64 },

    #[error("curve is not regular (speed vanishes near parameter {parameter:.6})")]
    NotRegular { parameter: f64 },

    #[error("unknown curve family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("residual does not change sign over [{lo}, {hi}] (values {f_lo:.3e}, {f_hi:.3e})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("bracket collapsed at {at} with residual {residual:.3e}: total torsion jumps there")]
    CalibrationFailed { at: f64, residual: f64 },

    #[error("total torsion {total:.9} is not 2*pi*m (nearest m = {m}, residual {residual:.3e})")]
    NotQuantized { total: f64, m: i64, residual: f64 },

    #[error("|v| = {v:.3e} is outside the strip half-width {v_max:.3e}")]
    OutOfStrip { v: f64, v_max: f64 },

    #[error("degenerate metric at (s, v) = ({s:.6}, {v:.3e})")]
    DegenerateMetric { s: f64, v: f64 },

    #[error("umbilic condition holds along the whole curve")]
    IdenticallyZero,

    #[error("seam gap {gap:.3e} exceeds {tol:.1e}")]
    SeamMismatch { gap: f64, tol: f64 },

    #[error("umbilic point on the cycle at s = {s:.9}")]
    UmbilicOnCycle { s: f64 },

    #[error("eps = {eps:.3e} makes k + eps*a non-positive (min {min_denominator:.3e})")]
    EpsTooLarge { eps: f64, min_denominator: f64 },

    #[error("principal direction branches nearly coincide at (s, v) = ({s:.6}, {v:.3e})")]
    BranchAmbiguity { s: f64, v: f64 },

    #[error("principal line left the strip at s = {s:.6} (v = {v:.3e})")]
    LeftStrip { s: f64, v: f64 },

    #[error("integrator step size underflow at s = {s:.6}")]
    StepSizeUnderflow { s: f64 },

    #[error("|ln pi'(0)| = {shooting:.9e} vs |Lambda| = {quadrature:.9e} differ beyond {tolerance:.3e}")]
    Mismatch {
        shooting: f64,
        quadrature: f64,
        tolerance: f64,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ForgeError {
    /// Stable snake_case name used in reports.
    pub fn kind(&self) -> &'static str {
        use ForgeError::*;
        match self {
            TooFewSamples { .. } => "too_few_samples",
            NotClosed { .. } => "not_closed",
            CurvatureVanishes { .. } => "curvature_vanishes",
            NotRegular { .. } => "not_regular",
            UnknownFamily(_) => "unknown_family",
            InvalidParams(_) => "invalid_params",
            NoSignChange { .. } => "no_sign_change",
            CalibrationFailed { .. } => "calibration_failed",
            NotQuantized { .. } => "not_quantized",
            OutOfStrip { .. } => "out_of_strip",
            DegenerateMetric { .. } => "degenerate_metric",
            IdenticallyZero => "identically_zero",
            SeamMismatch { .. } => "seam_mismatch",
            UmbilicOnCycle { .. } => "umbilic_on_cycle",
            EpsTooLarge { .. } => "eps_too_large",
            BranchAmbiguity { .. } => "branch_ambiguity",
            LeftStrip { .. } => "left_strip",
            StepSizeUnderflow { .. } => "step_size_underflow",
            Mismatch { .. } => "mismatch",
            Config(_) => "config",
            Io(_) => "io",
            Json(_) => "json",
        }
    }

    /// Structured payload for reports.
    pub fn details(&self) -> Value {
        use ForgeError::*;
        match self {
            TooFewSamples { got, min } => json!({ "got": got, "min": min }),
            NotClosed { gap, tol } => json!({ "gap": gap, "tol": tol }),
            CurvatureVanishes { min_curvature, floor } => {
                json!({ "min_curvature": min_curvature, "floor": floor })
            }
            NotRegular { parameter } => json!({ "parameter": parameter }),
            NoSignChange { lo, hi, f_lo, f_hi } => json!({ "lo": lo, "hi": hi, "f_lo": f_lo, "f_hi": f_hi }),
            CalibrationFailed { at, residual } => json!({ "at": at, "residual": residual }),
            NotQuantized { total, m, residual } => json!({ "total": total, "m": m, "residual": residual }),
            OutOfStrip { v, v_max } => json!({ "v": v, "v_max": v_max }),
            DegenerateMetric { s, v } | BranchAmbiguity { s, v } | LeftStrip { s, v } => json!({ "s": s, "v": v }),
            SeamMismatch { gap, tol } => json!({ "gap": gap, "tol": tol }),
            UmbilicOnCycle { s } | StepSizeUnderflow { s } => json!({ "s": s }),
            EpsTooLarge { eps, min_denominator } => json!({ "eps": eps, "min_denominator": min_denominator }),
            Mismatch {
                shooting,
                quadrature,
                tolerance,
            } => json!({ "shooting": shooting, "quadrature": quadrature, "tolerance": tolerance }),
            _ => Value::Null,
        }
    }
}

pub type Result<T, E = ForgeError> = std::result::Result<T, E>;
