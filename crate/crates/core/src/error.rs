use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its domain; `field` names the offending field.
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("degenerate configuration: both packet weights are zero")]
    DegenerateConfig,

    /// Intensity below the relative floor; the point sits on or next to a dark fringe.
    #[error("intensity {intensity:e} below floor {floor:e} at t={t}, x={x}")]
    NodeSingularity { t: f64, x: f64, intensity: f64, floor: f64 },

    #[error("wavenumber is zero, there are no fringe nodes")]
    ZeroWavenumber,

    #[error("degenerate seed span [{0}, {1}]")]
    DegenerateSpan(f64, f64),

    #[error("seed x0={x0} lies below the intensity floor at t={t}")]
    InvalidSeed { x0: f64, t: f64 },

    /// Sub-step budget exhausted inside a dark fringe; `t`, `x` is the last good state.
    #[error("integration stuck at a node: last good state t={t}, x={x}")]
    StuckAtNode { t: f64, x: f64 },

    #[error("trajectories do not share sample times")]
    MismatchedSampling,

    #[error("time {0} is outside the sampled range")]
    OutOfRange(f64),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("config parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
