//! Limiting-speed model for a toppling domino wave.
//!
//! Each domino is a thin rigid plate pivoting without slipping about its base
//! edge, with moment of inertia `I = mH²/3` about the pivot. Toppling from
//! vertical with initial angular speed `ω₀`, energy conservation gives
//!
//! ```text
//! ω(θ)² = ω₀² + (3g/H)(1 − cos θ)
//! ```
//!
//! so the time to fall through the contact angle `θ_c` is the quadrature
//! `t = ∫₀^θc dθ / ω(θ)`. At contact the striker carries
//! `ω_f = √(ω₀² + Δ)` with `Δ = (3g/H)(1 − cos θ_c)`, and an instantaneous
//! horizontal impulse at the contact height (equal moment arms, equal
//! inertias) hands the struck domino the initial speed
//!
//! ```text
//! ω₀′ = α·ω_f,   α = (1 + e)/2
//! ```
//!
//! where `e` is the coefficient of restitution of the impact. Iterating fall
//! and collision drives the chain to the unique fixed point
//! `ω₀* = α·√(Δ/(1 − α²))` for `e < 1`; the limiting wave speed is one pitch
//! per steady collision period. For `e = 1` the map has no fixed point and
//! every collision strictly speeds the wave up.
//!
//! Only adjacent pairs interact: a striker is retired after its collision, so
//! there is no re-contact and no cooperative pushing by leaning stacks.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{normalize_speed, ArraySpec, SpacingRegime, STANDARD_GRAVITY};
use crate::validation::Dataset;

/// Absolute tolerance of the fall-time quadrature, in seconds.
const QUADRATURE_ABS_TOL: f64 = 1e-10;
/// Maximum bisection depth of the adaptive quadrature.
const QUADRATURE_MAX_DEPTH: u32 = 40;
/// Restitution grid step of the calibration coarse search.
const CALIBRATION_GRID_STEP: f64 = 1e-3;
/// Interval width at which the calibration refinement stops.
const CALIBRATION_REFINE_TOL: f64 = 1e-4;
/// Upper end of the restitution search range (`e = 1` has no fixed point).
const CALIBRATION_E_MAX: f64 = 0.999;

/// Errors from the wave model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveModelError {
    /// A domino at rest exactly vertical never falls in finite time.
    #[error("non-falling domino: initial angular speed {0} rad/s must be > 0")]
    NonFalling(f64),
    /// The spacing ratio exceeds the practical propagation limit √3/2.
    #[error("non-propagating spacing: d/H = {0:.4} exceeds the practical limit √3/2 ≈ 0.8660")]
    NonPropagating(f64),
    /// `e = 1`: every collision strictly increases the angular speed, so no
    /// limiting speed exists.
    #[error("divergent collision map: restitution e = 1 has no fixed point")]
    Divergent,
    /// Restitution outside `[0, 1]`.
    #[error("restitution {0} outside [0, 1]")]
    InvalidRestitution(f64),
    /// A speed curve needs at least one grid point.
    #[error("empty d/H grid")]
    EmptyGrid,
    /// Calibration needs at least two reliable points inside the model domain.
    #[error("insufficient data: {0} reliable points with d/H in (0, √3/2] (need at least 2)")]
    InsufficientData(usize),
    /// Propagated geometry failure (e.g. a grid value at or beyond d/H = 1).
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

/// Impulsive collision parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionParams {
    restitution: f64,
}

impl CollisionParams {
    /// Restitution used when nothing else is specified.
    pub const DEFAULT_RESTITUTION: f64 = 0.7;

    /// Validates `0 <= e <= 1`.
    pub fn new(restitution: f64) -> Result<Self, WaveModelError> {
        if !restitution.is_finite() || !(0.0..=1.0).contains(&restitution) {
            return Err(WaveModelError::InvalidRestitution(restitution));
        }
        Ok(Self { restitution })
    }

    pub fn restitution(&self) -> f64 {
        self.restitution
    }

    /// Fraction of the striker's contact angular speed handed to the struck
    /// domino: `α = (1 + e)/2`, between 1/2 (plastic) and 1 (elastic).
    pub fn transfer_alpha(&self) -> f64 {
        (1.0 + self.restitution) / 2.0
    }
}

impl Default for CollisionParams {
    fn default() -> Self {
        Self {
            restitution: Self::DEFAULT_RESTITUTION,
        }
    }
}

/// How a prediction or chain simulation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PredictionStatus {
    /// Fixed point exists and the chain converges to it.
    Converged,
    /// `e = 1`: angular speeds grow without bound.
    Divergent,
    /// Spacing beyond the practical limit.
    NonPropagating,
}

/// Limiting-speed prediction for one array and parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedPrediction {
    /// Steady time between collisions, s.
    pub collision_period: f64,
    /// Limiting wave speed `pitch / period`, m/s.
    pub wave_speed: f64,
    /// `wave_speed / √(gH)`.
    pub normalized_speed: f64,
    /// Fixed-point initial angular speed `ω₀*`, rad/s.
    pub fixed_point_omega: f64,
    pub status: PredictionStatus,
}

/// Per-collision record of a finite chain run.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactSeries {
    /// Time of each collision, strictly increasing, s.
    pub impact_times: Vec<f64>,
    /// Striker angular speed just before each collision, rad/s.
    pub pre_impact_omegas: Vec<f64>,
    /// Struck domino's angular speed just after each collision, rad/s.
    pub post_impact_omegas: Vec<f64>,
}

impl ImpactSeries {
    /// Number of collisions recorded.
    pub fn len(&self) -> usize {
        self.impact_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.impact_times.is_empty()
    }

    /// Times between consecutive collisions (first entry is the time from
    /// release to the first impact).
    pub fn periods(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.impact_times
            .iter()
            .map(|&t| {
                let p = t - prev;
                prev = t;
                p
            })
            .collect()
    }
}

/// Result of simulating a finite chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSimulation {
    pub impacts: ImpactSeries,
    /// `Divergent` when `e = 1`; the series is still valid.
    pub status: PredictionStatus,
}

/// One row of a model speed curve. Failures are recorded per point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub d_over_h: f64,
    pub normalized_speed: Result<f64, WaveModelError>,
}

/// Calibrated restitution and the residual it achieves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// Restitution minimizing the RMS residual.
    pub e_star: f64,
    /// RMS of (model − measured) normalized speeds at `e_star`.
    pub rms: f64,
    /// Number of reliable in-domain points used.
    pub points_used: usize,
}

/// Energy gain `Δ = (3g/H)(1 − cos θ_c)` of a fall through the contact angle,
/// in rad²/s².
pub fn contact_energy_gain(spec: &ArraySpec) -> f64 {
    3.0 * STANDARD_GRAVITY / spec.height() * (1.0 - spec.contact_angle().cos())
}

/// Angular speed at tilt `theta` of a domino released from vertical at `omega0`,
/// from energy conservation.
pub fn angular_velocity_at(spec: &ArraySpec, omega0: f64, theta: f64) -> f64 {
    (omega0 * omega0 + 3.0 * STANDARD_GRAVITY / spec.height() * (1.0 - theta.cos())).sqrt()
}

fn require_propagating(spec: &ArraySpec) -> Result<(), WaveModelError> {
    match spec.spacing_regime() {
        SpacingRegime::Propagating => Ok(()),
        _ => Err(WaveModelError::NonPropagating(spec.spacing_ratio())),
    }
}

/// Time for a domino released from vertical at `omega0 > 0` to tilt through
/// the contact angle, by adaptive Simpson quadrature of `∫ dθ/ω(θ)` to an
/// absolute tolerance of 1e-10 s.
pub fn fall_time(spec: &ArraySpec, omega0: f64) -> Result<f64, WaveModelError> {
    if !(omega0 > 0.0) {
        return Err(WaveModelError::NonFalling(omega0));
    }
    require_propagating(spec)?;
    let rate = 3.0 * STANDARD_GRAVITY / spec.height();
    let integrand = |theta: f64| 1.0 / (omega0 * omega0 + rate * (1.0 - theta.cos())).sqrt();
    Ok(adaptive_simpson(
        &integrand,
        0.0,
        spec.contact_angle(),
        QUADRATURE_ABS_TOL,
        QUADRATURE_MAX_DEPTH,
    ))
}

/// Maps a domino's initial angular speed to the initial angular speed it hands
/// its neighbour: the striker gains `Δ` falling through `θ_c`, then transfers
/// the fraction `α = (1 + e)/2` of its contact speed in an equal-moment-arm
/// impulsive exchange.
pub fn collision_map(
    spec: &ArraySpec,
    params: &CollisionParams,
    omega0: f64,
) -> Result<f64, WaveModelError> {
    if !(omega0 > 0.0) {
        return Err(WaveModelError::NonFalling(omega0));
    }
    let omega_f = (omega0 * omega0 + contact_energy_gain(spec)).sqrt();
    Ok(params.transfer_alpha() * omega_f)
}

/// The unique positive fixed point `ω₀* = α·√(Δ/(1 − α²))` of the per-domino
/// collision map, for `e < 1`.
pub fn limiting_omega(spec: &ArraySpec, params: &CollisionParams) -> Result<f64, WaveModelError> {
    require_propagating(spec)?;
    let alpha = params.transfer_alpha();
    let denom = 1.0 - alpha * alpha;
    if denom <= 0.0 {
        return Err(WaveModelError::Divergent);
    }
    Ok(alpha * (contact_energy_gain(spec) / denom).sqrt())
}

/// Limiting wave speed of the array: one pitch per steady collision period.
pub fn limiting_speed(
    spec: &ArraySpec,
    params: &CollisionParams,
) -> Result<SpeedPrediction, WaveModelError> {
    let omega_star = limiting_omega(spec, params)?;
    let period = fall_time(spec, omega_star)?;
    let wave_speed = spec.pitch() / period;
    let normalized_speed =
        normalize_speed(wave_speed, spec.height()).expect("spec heights are positive");
    Ok(SpeedPrediction {
        collision_period: period,
        wave_speed,
        normalized_speed,
        fixed_point_omega: omega_star,
        status: PredictionStatus::Converged,
    })
}

/// Normalized limiting speed at the given ratios (evaluated at unit height).
pub fn normalized_speed_at(
    d_over_h: f64,
    t_over_h: f64,
    params: &CollisionParams,
) -> Result<f64, WaveModelError> {
    let spec = ArraySpec::from_ratios(d_over_h, t_over_h)?;
    Ok(limiting_speed(&spec, params)?.normalized_speed)
}

/// Evaluates the model curve over a grid of `d/H` values at fixed `t/H` and
/// restitution. Per-point failures are recorded in their rows; only an empty
/// grid is fatal. Output order matches the input grid.
pub fn speed_curve(
    grid: &[f64],
    t_over_h: f64,
    params: &CollisionParams,
) -> Result<Vec<CurvePoint>, WaveModelError> {
    if grid.is_empty() {
        return Err(WaveModelError::EmptyGrid);
    }
    Ok(grid
        .iter()
        .map(|&d_over_h| CurvePoint {
            d_over_h,
            normalized_speed: normalized_speed_at(d_over_h, t_over_h, params),
        })
        .collect())
}

/// Simulates a finite chain released at `omega_init`: domino k falls from
/// vertical with its post-impact speed, strikes k+1 after its fall time, and
/// the collision map seeds k+1. Records the N−1 collisions.
pub fn simulate_chain(
    spec: &ArraySpec,
    params: &CollisionParams,
    omega_init: f64,
) -> Result<ChainSimulation, WaveModelError> {
    if !(omega_init > 0.0) {
        return Err(WaveModelError::NonFalling(omega_init));
    }
    require_propagating(spec)?;
    let delta = contact_energy_gain(spec);
    let alpha = params.transfer_alpha();
    let collisions = spec.count() as usize - 1;

    let mut impact_times = Vec::with_capacity(collisions);
    let mut pre_impact_omegas = Vec::with_capacity(collisions);
    let mut post_impact_omegas = Vec::with_capacity(collisions);

    let mut clock = 0.0;
    let mut omega0 = omega_init;
    for _ in 0..collisions {
        clock += fall_time(spec, omega0)?;
        let omega_f = (omega0 * omega0 + delta).sqrt();
        omega0 = alpha * omega_f;
        impact_times.push(clock);
        pre_impact_omegas.push(omega_f);
        post_impact_omegas.push(omega0);
    }

    let status = if params.restitution() >= 1.0 {
        PredictionStatus::Divergent
    } else {
        PredictionStatus::Converged
    };
    Ok(ChainSimulation {
        impacts: ImpactSeries {
            impact_times,
            pre_impact_omegas,
            post_impact_omegas,
        },
        status,
    })
}

/// Fits the restitution to a dataset's reliable in-domain points at fixed
/// `t/H`, minimizing the RMS of (model − measured) normalized speeds: a grid
/// search at step 0.001 over [0, 0.999] followed by golden-section refinement
/// to 1e-4.
pub fn calibrate_restitution(
    dataset: &Dataset,
    t_over_h: f64,
) -> Result<Calibration, WaveModelError> {
    let limit = crate::geometry::practical_spacing_limit();
    let points: Vec<(f64, f64)> = dataset
        .points()
        .iter()
        .filter(|p| p.reliable && p.d_over_h > 0.0 && p.d_over_h <= limit)
        .map(|p| (p.d_over_h, p.v_norm))
        .collect();
    if points.len() < 2 {
        return Err(WaveModelError::InsufficientData(points.len()));
    }

    let objective = |e: f64| -> f64 {
        let params = CollisionParams::new(e).expect("search stays within [0, 1]");
        let sum: f64 = points
            .iter()
            .map(|&(d_over_h, v_meas)| {
                let v_model = normalized_speed_at(d_over_h, t_over_h, &params)
                    .expect("reliable points were filtered to the model domain");
                (v_model - v_meas).powi(2)
            })
            .sum();
        (sum / points.len() as f64).sqrt()
    };

    let steps = (CALIBRATION_E_MAX / CALIBRATION_GRID_STEP).round() as usize;
    let mut best_e = 0.0;
    let mut best_rms = objective(0.0);
    for i in 1..=steps {
        let e = (i as f64 * CALIBRATION_GRID_STEP).min(CALIBRATION_E_MAX);
        let rms = objective(e);
        if rms < best_rms {
            best_e = e;
            best_rms = rms;
        }
    }

    let lo = (best_e - CALIBRATION_GRID_STEP).max(0.0);
    let hi = (best_e + CALIBRATION_GRID_STEP).min(CALIBRATION_E_MAX);
    let e_star = golden_section_min(&objective, lo, hi, CALIBRATION_REFINE_TOL);
    let rms = objective(e_star);
    // Keep whichever candidate the refinement did not manage to beat.
    let (e_star, rms) = if rms <= best_rms {
        (e_star, rms)
    } else {
        (best_e, best_rms)
    };
    Ok(Calibration {
        e_star,
        rms,
        points_used: points.len(),
    })
}

// ---------------------------------------------------------------------------
// Numerics
// ---------------------------------------------------------------------------

/// Adaptive Simpson quadrature with Richardson error estimate. The integrands
/// here are smooth and bounded, so plain interval bisection converges fast.
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * abs_tol {
        left + right + err / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1)
    }
}

/// Golden-section minimization of a unimodal function on `[a, b]`, stopping
/// when the bracket is narrower than `tol`.
fn golden_section_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
