//! Double-slit interference built from two dispersing Gaussian channels.
//!
//! [`packets`] holds the single-channel kinematics, [`interference`] the
//! superposed intensity and averaged current, [`trajectories`] the flux
//! lines of that current and [`fields`] grid sampling. [`oracle`] recomputes
//! intensity and current from complex amplitudes and serves as the
//! independent check used by [`validation`].

pub mod error;
pub mod experiment;
pub mod fields;
pub mod interference;
pub mod oracle;
pub mod packets;
pub mod presets;
pub mod quadrature;
pub mod tolerances;
pub mod trajectories;
pub mod validation;
pub mod vector;

pub use error::{Error, Result};
pub use interference::DoubleSlitConfig;
pub use packets::{GaussianPacket, PhysicalScales};
pub use vector::Vec2;
