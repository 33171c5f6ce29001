//! Domino-array geometry and the dimensionless quantities derived from it.
//!
//! An array is described by the domino dimensions (height `H`, thickness `t`,
//! width `w`, mass `m`) and the gap `d` between adjacent faces. The wave
//! advances one pitch `L = d + t` per collision, and the collision geometry is
//! governed by the spacing ratio `d/H`: a domino tilted from vertical touches
//! its neighbour at the contact angle `θ_c = arcsin(d/H)`, striking it at
//! height `h_c = H·cos θ_c` above the floor. Thickness enters only through the
//! pitch; the contact geometry uses the thin-domino approximation throughout.
//!
//! All absolute quantities are SI. The dimensionless ratios are the primary
//! interface: measured and predicted speeds are compared as `v/√(gH)`.

use serde::Serialize;
use thiserror::Error;

/// Standard gravity in m/s².
pub const STANDARD_GRAVITY: f64 = 9.806_65;

/// Practical upper spacing limit `√3/2`. Above this ratio the striker hits its
/// neighbour below the mid point and reliable toppling fails.
pub fn practical_spacing_limit() -> f64 {
    3.0_f64.sqrt() / 2.0
}

/// Errors from geometry construction and normalization.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// A domino dimension violates its invariant.
    #[error("invalid domino geometry: {0}")]
    InvalidGeometry(String),
    /// The inter-domino gap must be strictly positive.
    #[error("invalid gap: {0} m (must be > 0)")]
    InvalidGap(f64),
    /// `d/H >= 1`: a toppling domino never reaches its neighbour.
    #[error("overlapping spacing: d/H = {0} >= 1, no contact occurs before full fall")]
    OverlappingSpacing(f64),
    /// Chains need at least two dominoes.
    #[error("domino count {0} too small (need at least 2)")]
    CountTooSmall(u32),
    /// Normalization by `sqrt(gH)` requires a positive height.
    #[error("non-positive height: {0} m")]
    NonPositiveHeight(f64),
}

/// Physical dimensions of a single domino.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominoGeometry {
    /// Height `H` in m.
    pub height: f64,
    /// Thickness `t` in m.
    pub thickness: f64,
    /// Width `w` in m.
    pub width: f64,
    /// Mass `m` in kg.
    pub mass: f64,
}

impl DominoGeometry {
    /// Validates `H > 0`, `t >= 0`, `w > 0`, `m > 0`, `t < H`.
    pub fn new(height: f64, thickness: f64, width: f64, mass: f64) -> Result<Self, GeometryError> {
        if !height.is_finite() || height <= 0.0 {
            return Err(GeometryError::InvalidGeometry(format!(
                "height {height} must be positive"
            )));
        }
        if !thickness.is_finite() || thickness < 0.0 {
            return Err(GeometryError::InvalidGeometry(format!(
                "thickness {thickness} must be non-negative"
            )));
        }
        if !width.is_finite() || width <= 0.0 {
            return Err(GeometryError::InvalidGeometry(format!(
                "width {width} must be positive"
            )));
        }
        if !mass.is_finite() || mass <= 0.0 {
            return Err(GeometryError::InvalidGeometry(format!(
                "mass {mass} must be positive"
            )));
        }
        if thickness >= height {
            return Err(GeometryError::InvalidGeometry(format!(
                "thickness {thickness} must be smaller than height {height}"
            )));
        }
        Ok(Self {
            height,
            thickness,
            width,
            mass,
        })
    }
}

/// Where a spacing ratio sits relative to the propagation limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpacingRegime {
    /// `d/H <= √3/2`: the striker hits its neighbour at or above the mid
    /// point and the wave propagates reliably.
    Propagating,
    /// `√3/2 < d/H < 1`: contact still occurs but below the mid point;
    /// toppling becomes unreliable.
    BeyondPracticalLimit,
    /// `d/H >= 1`: no contact before the striker has fallen flat.
    Overlapping,
}

impl SpacingRegime {
    /// Classifies a raw spacing ratio. The `√3/2` boundary is inclusive on
    /// the propagating side.
    pub fn classify(spacing_ratio: f64) -> Self {
        if spacing_ratio >= 1.0 {
            SpacingRegime::Overlapping
        } else if spacing_ratio > practical_spacing_limit() {
            SpacingRegime::BeyondPracticalLimit
        } else {
            SpacingRegime::Propagating
        }
    }
}

/// A uniformly spaced array of identical dominoes.
///
/// Construction validates the geometry and precomputes the derived contact
/// quantities. Values are immutable afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArraySpec {
    geometry: DominoGeometry,
    gap: f64,
    count: u32,
    pitch: f64,
    spacing_ratio: f64,
    contact_angle: f64,
}

impl ArraySpec {
    /// Builds an array spec from domino geometry, gap `d` and domino count.
    ///
    /// Fails with [`GeometryError::OverlappingSpacing`] when `d/H >= 1`; the
    /// near-limit regime `√3/2 < d/H < 1` is still constructible and is
    /// reported by [`ArraySpec::spacing_regime`].
    pub fn new(geometry: DominoGeometry, gap: f64, count: u32) -> Result<Self, GeometryError> {
        if !gap.is_finite() || gap <= 0.0 {
            return Err(GeometryError::InvalidGap(gap));
        }
        if count < 2 {
            return Err(GeometryError::CountTooSmall(count));
        }
        let spacing_ratio = gap / geometry.height;
        if spacing_ratio >= 1.0 {
            return Err(GeometryError::OverlappingSpacing(spacing_ratio));
        }
        Ok(Self {
            geometry,
            gap,
            count,
            pitch: gap + geometry.thickness,
            spacing_ratio,
            contact_angle: spacing_ratio.asin(),
        })
    }

    /// Convenience constructor from the dimensionless ratios the model
    /// actually depends on, at unit height (w = H/2, m = 1 kg; neither enters
    /// the dynamics).
    pub fn from_ratios(d_over_h: f64, t_over_h: f64) -> Result<Self, GeometryError> {
        let geometry = DominoGeometry::new(1.0, t_over_h, 0.5, 1.0)?;
        Self::new(geometry, d_over_h, 2)
    }

    pub fn geometry(&self) -> &DominoGeometry {
        &self.geometry
    }

    /// Domino height `H` in m.
    pub fn height(&self) -> f64 {
        self.geometry.height
    }

    /// Gap `d` between adjacent faces in m.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Number of dominoes in the array.
    pub fn count(&self) -> u32 {
        self.count
    }

    /// Pitch `L = d + t`, the distance the wave advances per collision.
    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    /// Spacing ratio `d/H`.
    pub fn spacing_ratio(&self) -> f64 {
        self.spacing_ratio
    }

    /// Contact angle `θ_c = arcsin(d/H)` in rad, the striker's tilt from
    /// vertical at the instant it touches its neighbour.
    pub fn contact_angle(&self) -> f64 {
        self.contact_angle
    }

    /// Contact height `h_c = √(H² − d²) = H·cos θ_c` in m.
    pub fn contact_height(&self) -> f64 {
        (self.geometry.height.powi(2) - self.gap.powi(2)).sqrt()
    }

    /// Classifies the array's spacing ratio.
    pub fn spacing_regime(&self) -> SpacingRegime {
        SpacingRegime::classify(self.spacing_ratio)
    }

    /// Returns a copy with a different domino count.
    pub fn with_count(&self, count: u32) -> Result<Self, GeometryError> {
        Self::new(self.geometry, self.gap, count)
    }
}

/// Normalizes a wave speed to the dimensionless `v/√(gH)`.
pub fn normalize_speed(speed: f64, height: f64) -> Result<f64, GeometryError> {
    if !height.is_finite() || height <= 0.0 {
        return Err(GeometryError::NonPositiveHeight(height));
    }
    Ok(speed / (STANDARD_GRAVITY * height).sqrt())
}

/// Inverse of [`normalize_speed`]: recovers the absolute speed in m/s.
pub fn denormalize_speed(normalized: f64, height: f64) -> Result<f64, GeometryError> {
    if !height.is_finite() || height <= 0.0 {
        return Err(GeometryError::NonPositiveHeight(height));
    }
    Ok(normalized * (STANDARD_GRAVITY * height).sqrt())
}
