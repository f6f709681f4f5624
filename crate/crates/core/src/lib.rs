//! Construction and certification of hyperbolic principal cycles on surface
//! germs built around closed space curves.
//!
//! The pipeline ingests a closed curve, fixes the angle field that makes the
//! curve a line of curvature, builds a quartic germ around it, computes the
//! characteristic exponent of the cycle and optionally checks it against an
//! integrated return map.

pub mod config;
pub mod curve;
pub mod error;
pub mod flow;
pub mod germ;
pub mod hyperbolicity;
pub mod jet;
pub mod mesh;
pub mod ode;
pub mod pipeline;
pub mod roots;
pub mod spectral;
pub mod theta;

pub use config::{CurveSource, RunConfig};
pub use curve::{
    calibrate_total_torsion, ingest_analytic, ingest_family, ingest_samples, total_torsion, CurveFamily,
    FrenetCurve, FrenetPoint, TorsionSummary, Vec3,
};
pub use error::{ForgeError, Result};
pub use flow::{cross_validate, integrate_principal_line, poincare_log_derivative, PrincipalFlowTrace, Validation};
pub use germ::{AProfile, FundamentalForms, GermProfiles, PeriodicProfile, SurfaceGerm};
pub use hyperbolicity::{certify_hyperbolic, certify_hyperbolic_with, CertifyOptions, HyperbolicityReport, Verdict};
pub use mesh::{build_mesh, StripMesh};
pub use theta::{solve_theta, ThetaField};
pub use pipeline::{run_pipeline, Command, Outcome, RunReport, Status};
