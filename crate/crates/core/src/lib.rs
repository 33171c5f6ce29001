//! Domino-wave toolkit: predicts the limiting speed of a toppling domino
//! wave from a pairwise rigid-body collision model, measures real wave speeds
//! from audio recordings by envelope demodulation, and compares both against
//! embedded experimental data.
//!
//! - [`geometry`]: array geometry, spacing regimes, speed normalization.
//! - [`wave_model`]: fall-time quadrature, impulsive collision map, limiting
//!   speed, chain simulation, restitution calibration.
//! - [`acoustics`]: WAV I/O, synthetic collapse recordings, envelope
//!   demodulation and impact-rate estimation.
//! - [`validation`]: embedded measurement tables, CSV datasets, residual
//!   reports and CSV/SVG/JSON export.

pub mod acoustics;
pub mod geometry;
pub mod validation;
pub mod wave_model;

pub use acoustics::{AcousticsError, SampledSignal};
pub use geometry::{ArraySpec, DominoGeometry, GeometryError, SpacingRegime};
pub use validation::{Dataset, MeasurementPoint, ValidationError, ValidationReport};
pub use wave_model::{CollisionParams, SpeedPrediction, WaveModelError};
