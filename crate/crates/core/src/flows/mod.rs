//! Numerical flows, closed-form solutions and their checks.

mod catalog;
pub mod integrator;
pub mod jet;
mod scan;
mod smoothness;
mod trajectory;

use thiserror::Error;

use crate::dynamics::DynamicsError;

pub use catalog::{
    beta_quadrature, closed_form, posmu_t0, warped_smooth_scalar_curvature, BetaQuadrature, CatalogId, CurveParams,
    SolutionCurve,
};
pub use integrator::{IntegratorStats, StopReason};
pub use jet::Jet;
pub use scan::{default_grid, linspace, residual_scan, ResidualReport};
pub use smoothness::{one_sided_limit, smoothness_check, Limit, LimitCheck, SmoothnessReport, Verdict, LIMIT_STEPS};
pub use trajectory::{format_float, integrate_canonical, integrate_first_order, Trajectory};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("unknown catalog curve {0:?}")]
    UnknownCurve(String),
    #[error("t = {t} lies outside the domain ({lo}, {hi})")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}
