//! Wave-speed measurement from audio recordings.
//!
//! A collapsing domino array is recorded as ordinary audio; the collision
//! rate lives in the envelope of the broadband impact noise. The pipeline is
//! crystal-set style envelope demodulation, known in passive sonar as DEMON
//! (Detection of Envelope Modulation On Noise):
//!
//! 1. band-pass the recording around the impact energy (800–3800 Hz),
//! 2. full-wave rectify and low-pass at 250 Hz, resample to 2 kHz,
//! 3. take a Hann-windowed, zero-padded magnitude spectrum of the envelope,
//! 4. pick the spectral peak in the expected impact-rate band with sub-bin
//!    parabolic refinement,
//! 5. progressively discard the start of the recording until the rate
//!    estimate stabilizes, eliminating start-up transients.
//!
//! The wave speed is the impact rate times the array pitch. A synthesizer
//! produces recordings with known impact times so the whole chain can be
//! tested closed-loop against the chain simulator.

mod analysis;
mod filter;
mod synth;
mod wav;

pub use analysis::{
    envelope, estimate_rate, modulation_spectrum, trim_transient, wave_speed_from_recording,
    AnalysisConfig, AnalysisReport, EnvelopeConfig, EnvelopeSpectrum, RateEstimate, TrimResult,
    WaveSpeedMeasurement, DEFAULT_RATE_BAND, SNR_RELIABLE_DB,
};
pub use filter::{butter_bandpass, butter_lowpass, filtfilt, magnitude_at, Biquad};
pub use synth::{synthesize_collapse, SynthesisParams};
pub use wav::{read_wav, write_wav};

use thiserror::Error;

/// Lowest sample rate the analysis accepts.
pub const MIN_SAMPLE_RATE: u32 = 8000;

/// Errors from audio ingestion, synthesis and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AcousticsError {
    /// Not a parseable RIFF/WAVE file.
    #[error("malformed WAV container: {0}")]
    MalformedContainer(String),
    /// Parseable container but not 16-bit PCM mono/stereo.
    #[error("unsupported WAV encoding: {0}")]
    UnsupportedEncoding(String),
    /// Sample rates below 8 kHz cannot carry the impact band.
    #[error("sample rate {0} Hz too low (need at least 8000 Hz)")]
    RateTooLow(u32),
    /// The operation needs a longer signal.
    #[error("signal too short: {actual_s:.3} s (need at least {required_s:.3} s)")]
    TooShort { required_s: f64, actual_s: f64 },
    /// Synthesis needs at least one impact.
    #[error("empty impact list")]
    EmptyImpactList,
    /// Impact times must be non-negative and strictly increasing.
    #[error("invalid impact times: {0}")]
    InvalidImpactTimes(String),
    /// Frequency band incompatible with the spectrum or sample rate.
    #[error("band out of range: {0}")]
    BandOutOfRange(String),
    /// A signal or parameter violates its invariant.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A uniformly sampled signal.
///
/// Audio produced by [`read_wav`] and [`synthesize_collapse`] is normalized
/// to `[-1, 1]`. Derived envelope signals reuse the container but are
/// mean-removed, so individual samples may be negative or small.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    sample_rate: u32,
    samples: Vec<f64>,
}

impl SampledSignal {
    /// Validates a positive rate and non-empty, finite samples.
    pub fn new(sample_rate: u32, samples: Vec<f64>) -> Result<Self, AcousticsError> {
        if sample_rate == 0 {
            return Err(AcousticsError::InvalidArgument(
                "sample rate must be positive".to_string(),
            ));
        }
        if samples.is_empty() {
            return Err(AcousticsError::InvalidArgument(
                "signal must not be empty".to_string(),
            ));
        }
        if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
            return Err(AcousticsError::InvalidArgument(format!(
                "non-finite sample {bad}"
            )));
        }
        Ok(Self {
            sample_rate,
            samples,
        })
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// True when every sample lies in `[-1, 1]`.
    pub fn is_normalized(&self) -> bool {
        self.samples.iter().all(|v| (-1.0..=1.0).contains(v))
    }

    /// Copy with the first `skip` samples dropped.
    pub fn suffix(&self, skip: usize) -> Result<Self, AcousticsError> {
        Self::new(self.sample_rate, self.samples[skip.min(self.samples.len())..].to_vec())
    }
}
