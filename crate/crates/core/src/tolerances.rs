//! Pass/fail thresholds shared by `validate` and the acceptance suite.

/// Classical vs complex-amplitude current, max relative difference.
pub const ORACLE_REL: f64 = 1e-9;
/// Cells count in the oracle comparison when intensity exceeds this fraction of the grid peak.
pub const ORACLE_INTENSITY_FLOOR: f64 = 1e-12;
/// Resolution of the oracle comparison grid.
pub const ORACLE_GRID: usize = 256;

/// Accepted band for the residual reduction when both steps are halved.
pub const CONTINUITY_RATIO_MIN: f64 = 3.5;
pub const CONTINUITY_RATIO_MAX: f64 = 4.5;
/// Coarsest continuity grid (points per axis); refined three times.
pub const CONTINUITY_BASE_POINTS: usize = 129;
pub const CONTINUITY_REFINEMENTS: usize = 3;

/// Relative spread of the Riemann mass across rows.
pub const MASS_DRIFT: f64 = 1e-4;

/// Relative drift of the mass between adjacent flux lines.
pub const FLUX_DRIFT: f64 = 0.01;

/// Centreline seed of a symmetric pair must stay within this distance of x = 0.
pub const CENTERLINE_ABS: f64 = 1e-12;

/// Single-slit flux line vs `x0·σ(t)/σ₀`.
pub const SINGLE_SLIT_REL: f64 = 1e-6;

/// Mirror-image trajectories of a symmetric preset.
pub const MIRROR_ABS: f64 = 1e-9;
