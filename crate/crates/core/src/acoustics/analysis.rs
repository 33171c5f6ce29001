//! Envelope demodulation and impact-rate estimation.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;
use std::f64::consts::PI;

use super::filter::{butter_bandpass, butter_lowpass, filtfilt};
use super::{AcousticsError, SampledSignal};
use crate::geometry::STANDARD_GRAVITY;

/// Default impact-rate search band, Hz.
pub const DEFAULT_RATE_BAND: (f64, f64) = (4.0, 100.0);
/// Peak-to-median SNR at or above which an estimate is considered reliable.
pub const SNR_RELIABLE_DB: f64 = 6.0;
/// Peaks within this relative magnitude of the strongest one count as
/// near-equal; the lowest-frequency one wins (impact spectra are
/// harmonic-rich, and the fundamental is the physical rate).
const NEAR_EQUAL_PEAK_TOL: f64 = 0.01;
/// Minimum input length for envelope extraction, s.
const MIN_ENVELOPE_INPUT_S: f64 = 0.5;
/// Minimum input length for transient trimming, s.
const MIN_TRIM_INPUT_S: f64 = 2.0;
/// Trim schedule: suffixes dropping 0%, 5%, ..., 50% of the duration.
const TRIM_STEPS: usize = 10;
/// Two consecutive rate estimates agree when they differ by less than this.
const TRIM_AGREE_TOL: f64 = 0.02;
/// Minimum envelope length for a modulation spectrum, samples.
const MIN_SPECTRUM_INPUT: usize = 16;

/// Envelope extraction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeConfig {
    /// Band-pass edges isolating the impact energy, Hz.
    pub band_lo_hz: f64,
    pub band_hi_hz: f64,
    /// Post-rectification low-pass cutoff, Hz.
    pub lowpass_hz: f64,
    /// Envelope output rate, Hz.
    pub envelope_rate_hz: u32,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        Self {
            band_lo_hz: 800.0,
            band_hi_hz: 3800.0,
            lowpass_hz: 250.0,
            envelope_rate_hz: 2000,
        }
    }
}

/// Parameters of the full recording-to-rate pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub envelope: EnvelopeConfig,
    /// Impact-rate search band, Hz.
    pub rate_band: (f64, f64),
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            envelope: EnvelopeConfig::default(),
            rate_band: DEFAULT_RATE_BAND,
        }
    }
}

/// One-sided magnitude spectrum of an envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSpectrum {
    /// Bin centers, a uniform grid starting at 0 Hz.
    pub bin_frequencies: Vec<f64>,
    /// Non-negative bin magnitudes.
    pub magnitudes: Vec<f64>,
    /// Grid spacing, Hz.
    pub resolution: f64,
}

impl EnvelopeSpectrum {
    /// Validates matching lengths and a strictly increasing grid from 0.
    pub fn new(
        bin_frequencies: Vec<f64>,
        magnitudes: Vec<f64>,
        resolution: f64,
    ) -> Result<Self, AcousticsError> {
        if bin_frequencies.len() != magnitudes.len() || bin_frequencies.is_empty() {
            return Err(AcousticsError::InvalidArgument(
                "spectrum needs equal-length, non-empty frequency and magnitude lists".to_string(),
            ));
        }
        if bin_frequencies[0] != 0.0
            || bin_frequencies.windows(2).any(|w| w[1] <= w[0])
            || !(resolution > 0.0)
        {
            return Err(AcousticsError::InvalidArgument(
                "frequency grid must increase strictly from 0".to_string(),
            ));
        }
        if magnitudes.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(AcousticsError::InvalidArgument(
                "magnitudes must be finite and non-negative".to_string(),
            ));
        }
        Ok(Self {
            bin_frequencies,
            magnitudes,
            resolution,
        })
    }

    pub fn max_frequency(&self) -> f64 {
        *self
            .bin_frequencies
            .last()
            .expect("spectrum is never empty")
    }
}

/// Estimated impact rate with its quality indicators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    /// Impact rate, Hz.
    pub rate_hz: f64,
    /// Peak power over median in-band power, dB.
    pub snr_db: f64,
    /// SNR at least [`SNR_RELIABLE_DB`] and, when trimming was involved, a
    /// stable trim schedule.
    pub reliable: bool,
    /// Seconds discarded from the start of the recording.
    pub trimmed_seconds: f64,
}

/// Result of the progressive transient trim.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimResult {
    /// The chosen suffix of the input.
    pub signal: SampledSignal,
    pub trimmed_seconds: f64,
    /// False when no trim produced consecutive agreeing estimates; the
    /// 50% suffix is returned and downstream estimates are flagged
    /// unreliable.
    pub stable: bool,
}

/// A wave speed measured from a recording.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpeedMeasurement {
    /// Impact rate times pitch, m/s.
    pub wave_speed_mps: f64,
    /// `wave_speed / √(gH)`.
    pub normalized_speed: f64,
    pub rate: RateEstimate,
}

/// Flat analysis record for text/JSON export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub rate_hz: f64,
    pub snr_db: f64,
    pub reliable: bool,
    pub trimmed_seconds: f64,
    pub wave_speed_mps: f64,
    pub normalized_speed: f64,
}

impl AnalysisReport {
    pub fn from_measurement(m: &WaveSpeedMeasurement) -> Self {
        Self {
            rate_hz: m.rate.rate_hz,
            snr_db: m.rate.snr_db,
            reliable: m.rate.reliable,
            trimmed_seconds: m.rate.trimmed_seconds,
            wave_speed_mps: m.wave_speed_mps,
            normalized_speed: m.normalized_speed,
        }
    }

    /// Flat `key=value` block, one field per line.
    pub fn to_key_value(&self) -> String {
        format!(
            "rate_hz={}\nsnr_db={}\nreliable={}\ntrimmed_seconds={}\nwave_speed_mps={}\nnormalized_speed={}\n",
            crate::validation::format_sig6(self.rate_hz),
            crate::validation::format_sig6(self.snr_db),
            self.reliable,
            crate::validation::format_sig6(self.trimmed_seconds),
            crate::validation::format_sig6(self.wave_speed_mps),
            crate::validation::format_sig6(self.normalized_speed),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Demodulates a recording into its mean-removed envelope: band-pass,
/// full-wave rectification, low-pass, resampling to the envelope rate.
pub fn envelope(
    signal: &SampledSignal,
    cfg: &EnvelopeConfig,
) -> Result<SampledSignal, AcousticsError> {
    let duration = signal.duration_seconds();
    if duration < MIN_ENVELOPE_INPUT_S {
        return Err(AcousticsError::TooShort {
            required_s: MIN_ENVELOPE_INPUT_S,
            actual_s: duration,
        });
    }
    let fs = signal.sample_rate() as f64;
    let nyquist = fs / 2.0;
    if !(0.0 < cfg.band_lo_hz && cfg.band_lo_hz < cfg.band_hi_hz && cfg.band_hi_hz < nyquist) {
        return Err(AcousticsError::BandOutOfRange(format!(
            "band-pass {}..{} Hz does not fit below the Nyquist rate {} Hz",
            cfg.band_lo_hz, cfg.band_hi_hz, nyquist
        )));
    }
    if !(0.0 < cfg.lowpass_hz && cfg.lowpass_hz < nyquist) {
        return Err(AcousticsError::BandOutOfRange(format!(
            "low-pass {} Hz does not fit below the Nyquist rate {} Hz",
            cfg.lowpass_hz, nyquist
        )));
    }
    let env_rate = cfg.envelope_rate_hz;
    if env_rate == 0 || (env_rate as f64) < 2.0 * cfg.lowpass_hz || env_rate > signal.sample_rate()
    {
        return Err(AcousticsError::InvalidArgument(format!(
            "envelope rate {env_rate} Hz must cover twice the low-pass cutoff and not exceed the input rate"
        )));
    }

    let mut work = signal.samples().to_vec();
    let bandpass = butter_bandpass(4, cfg.band_lo_hz, cfg.band_hi_hz, fs);
    filtfilt(&bandpass, &mut work);
    for v in work.iter_mut() {
        *v = v.abs();
    }
    let lowpass = butter_lowpass(4, cfg.lowpass_hz, fs);
    filtfilt(&lowpass, &mut work);

    // Resample onto the uniform envelope grid by linear interpolation; the
    // signal is band-limited far below the target rate at this point.
    let step = fs / env_rate as f64;
    let last = work.len() - 1;
    let count = (last as f64 / step).floor() as usize + 1;
    let mut env = Vec::with_capacity(count);
    for k in 0..count {
        let pos = k as f64 * step;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        let value = if i < last {
            work[i] * (1.0 - frac) + work[i + 1] * frac
        } else {
            work[last]
        };
        env.push(value);
    }
    let mean = env.iter().sum::<f64>() / env.len() as f64;
    for v in env.iter_mut() {
        *v -= mean;
    }
    SampledSignal::new(env_rate, env)
}

/// Hann-windowed magnitude spectrum of an envelope, zero-padded to the next
/// power of two at least 4x the length.
pub fn modulation_spectrum(env: &SampledSignal) -> Result<EnvelopeSpectrum, AcousticsError> {
    let n = env.len();
    if n < MIN_SPECTRUM_INPUT {
        return Err(AcousticsError::TooShort {
            required_s: MIN_SPECTRUM_INPUT as f64 / env.sample_rate() as f64,
            actual_s: env.duration_seconds(),
        });
    }
    let nfft = (4 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(nfft);
    let denom = (n - 1) as f64;
    for (i, &v) in env.samples().iter().enumerate() {
        let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / denom).cos();
        buf.push(Complex::new(v * w, 0.0));
    }
    buf.resize(nfft, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);

    let resolution = env.sample_rate() as f64 / nfft as f64;
    let bins = nfft / 2 + 1;
    let bin_frequencies: Vec<f64> = (0..bins).map(|k| k as f64 * resolution).collect();
    let magnitudes: Vec<f64> = buf[..bins].iter().map(|c| c.norm()).collect();
    EnvelopeSpectrum::new(bin_frequencies, magnitudes, resolution)
}

/// Picks the impact rate as the dominant spectral peak in `band`, with
/// parabolic sub-bin refinement and a peak-to-median SNR readout. Near-equal
/// peaks resolve to the lowest frequency.
pub fn estimate_rate(
    spectrum: &EnvelopeSpectrum,
    band: (f64, f64),
) -> Result<RateEstimate, AcousticsError> {
    let (lo, hi) = band;
    if !(0.0 <= lo && lo < hi && hi <= spectrum.max_frequency()) {
        return Err(AcousticsError::BandOutOfRange(format!(
            "band {lo}..{hi} Hz outside the spectrum range 0..{} Hz",
            spectrum.max_frequency()
        )));
    }
    let in_band: Vec<usize> = spectrum
        .bin_frequencies
        .iter()
        .enumerate()
        .filter(|(_, &f)| f >= lo && f <= hi)
        .map(|(i, _)| i)
        .collect();
    if in_band.len() < 3 {
        return Err(AcousticsError::BandOutOfRange(format!(
            "band {lo}..{hi} Hz covers fewer than 3 spectral bins"
        )));
    }

    let mags = &spectrum.magnitudes;
    let mut peak_idx = in_band[0];
    for &i in &in_band {
        if mags[i] > mags[peak_idx] {
            peak_idx = i;
        }
    }
    if mags[peak_idx] <= 0.0 {
        // Nothing in band at all (e.g. a zero envelope).
        return Ok(RateEstimate {
            rate_hz: lo,
            snr_db: 0.0,
            reliable: false,
            trimmed_seconds: 0.0,
        });
    }

    // Prefer the lowest-frequency local maximum among near-equal peaks.
    let floor = (1.0 - NEAR_EQUAL_PEAK_TOL) * mags[peak_idx];
    let chosen = in_band
        .iter()
        .copied()
        .find(|&i| {
            mags[i] >= floor
                && (i == 0 || mags[i] >= mags[i - 1])
                && (i + 1 >= mags.len() || mags[i] >= mags[i + 1])
        })
        .unwrap_or(peak_idx);

    let delta = if chosen > 0 && chosen + 1 < mags.len() {
        let alpha = mags[chosen - 1];
        let beta = mags[chosen];
        let gamma = mags[chosen + 1];
        let denom = alpha - 2.0 * beta + gamma;
        if denom.abs() < 1e-300 {
            0.0
        } else {
            (0.5 * (alpha - gamma) / denom).clamp(-0.5, 0.5)
        }
    } else {
        0.0
    };
    let rate_hz = ((chosen as f64 + delta) * spectrum.resolution).clamp(lo, hi);

    let peak_power = mags[chosen] * mags[chosen];
    let mut powers: Vec<f64> = in_band.iter().map(|&i| mags[i] * mags[i]).collect();
    powers.sort_by(|a, b| a.total_cmp(b));
    let median = if powers.len() % 2 == 1 {
        powers[powers.len() / 2]
    } else {
        0.5 * (powers[powers.len() / 2 - 1] + powers[powers.len() / 2])
    };
    let snr_db = 10.0 * (peak_power / median.max(peak_power * 1e-12)).log10();

    Ok(RateEstimate {
        rate_hz,
        snr_db,
        reliable: snr_db >= SNR_RELIABLE_DB,
        trimmed_seconds: 0.0,
    })
}

fn rate_of_suffix(
    signal: &SampledSignal,
    skip: usize,
    cfg: &AnalysisConfig,
) -> Result<f64, AcousticsError> {
    let suffix = signal.suffix(skip)?;
    let env = envelope(&suffix, &cfg.envelope)?;
    let spectrum = modulation_spectrum(&env)?;
    Ok(estimate_rate(&spectrum, cfg.rate_band)?.rate_hz)
}

/// Progressively discards the start of the recording (0%, 5%, ..., 50% of the
/// duration) and returns the smallest trim after which consecutive rate
/// estimates agree within 2% twice in a row. If the estimates never
/// stabilize, the half-signal suffix is returned flagged unstable.
pub fn trim_transient(
    signal: &SampledSignal,
    cfg: &AnalysisConfig,
) -> Result<TrimResult, AcousticsError> {
    let duration = signal.duration_seconds();
    if duration < MIN_TRIM_INPUT_S {
        return Err(AcousticsError::TooShort {
            required_s: MIN_TRIM_INPUT_S,
            actual_s: duration,
        });
    }
    let n = signal.len() as f64;
    let skips: Vec<usize> = (0..=TRIM_STEPS)
        .map(|i| (n * i as f64 * 0.05).floor() as usize)
        .collect();
    let mut rates = Vec::with_capacity(skips.len());
    for &skip in &skips {
        rates.push(rate_of_suffix(signal, skip, cfg)?);
    }

    let agree = |a: f64, b: f64| (b - a).abs() <= TRIM_AGREE_TOL * a.abs();
    for i in 0..rates.len() - 2 {
        if agree(rates[i], rates[i + 1]) && agree(rates[i + 1], rates[i + 2]) {
            return Ok(TrimResult {
                signal: signal.suffix(skips[i])?,
                trimmed_seconds: skips[i] as f64 / signal.sample_rate() as f64,
                stable: true,
            });
        }
    }
    let last = *skips.last().expect("schedule is non-empty");
    Ok(TrimResult {
        signal: signal.suffix(last)?,
        trimmed_seconds: last as f64 / signal.sample_rate() as f64,
        stable: false,
    })
}

/// Complete recording-to-measurement pipeline: trim, demodulate, estimate the
/// rate, convert to a wave speed via the array pitch and normalize by `√(gH)`.
pub fn wave_speed_from_recording(
    signal: &SampledSignal,
    pitch: f64,
    height: f64,
    cfg: &AnalysisConfig,
) -> Result<WaveSpeedMeasurement, AcousticsError> {
    if !(pitch > 0.0) || !pitch.is_finite() {
        return Err(AcousticsError::InvalidArgument(format!(
            "pitch {pitch} m must be positive"
        )));
    }
    if !(height > 0.0) || !height.is_finite() {
        return Err(AcousticsError::InvalidArgument(format!(
            "height {height} m must be positive"
        )));
    }
    let trim = trim_transient(signal, cfg)?;
    let env = envelope(&trim.signal, &cfg.envelope)?;
    let spectrum = modulation_spectrum(&env)?;
    let mut rate = estimate_rate(&spectrum, cfg.rate_band)?;
    rate.trimmed_seconds = trim.trimmed_seconds;
    rate.reliable = rate.reliable && trim.stable;

    let wave_speed_mps = rate.rate_hz * pitch;
    let normalized_speed = wave_speed_mps / (STANDARD_GRAVITY * height).sqrt();
    Ok(WaveSpeedMeasurement {
        wave_speed_mps,
        normalized_speed,
        rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acoustics::{synthesize_collapse, SynthesisParams};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn impact_train(rate_hz: f64, duration_s: f64) -> Vec<f64> {
        let period = 1.0 / rate_hz;
        let count = (duration_s / period).floor() as usize;
        (0..count).map(|k| k as f64 * period).collect()
    }

    fn analyze_rate(signal: &SampledSignal) -> RateEstimate {
        let env = envelope(signal, &EnvelopeConfig::default()).unwrap();
        let spectrum = modulation_spectrum(&env).unwrap();
        estimate_rate(&spectrum, DEFAULT_RATE_BAND).unwrap()
    }

    #[test]
    fn dc_input_gives_exactly_zero_envelope() {
        let signal = SampledSignal::new(44100, vec![0.8; 44100]).unwrap();
        let env = envelope(&signal, &EnvelopeConfig::default()).unwrap();
        assert_eq!(env.sample_rate(), 2000);
        assert!(env.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn envelope_scales_exactly_with_power_of_two() {
        // Scaling by 2 commutes bit-exactly with every float op in the chain.
        let times = impact_train(20.0, 2.0);
        let params = SynthesisParams::default();
        let base = synthesize_collapse(&times, &params, 44100).unwrap();
        let scaled = SampledSignal::new(
            44100,
            base.samples().iter().map(|&v| v * 0.5).collect(),
        )
        .unwrap();
        let env_base = envelope(&base, &EnvelopeConfig::default()).unwrap();
        let env_scaled = envelope(&scaled, &EnvelopeConfig::default()).unwrap();
        for (a, b) in env_base.samples().iter().zip(env_scaled.samples()) {
            assert_eq!(*b, 0.5 * *a);
        }
    }

    #[test]
    fn envelope_rejects_short_input() {
        let signal = SampledSignal::new(44100, vec![0.0; 1000]).unwrap();
        assert!(matches!(
            envelope(&signal, &EnvelopeConfig::default()),
            Err(AcousticsError::TooShort { .. })
        ));
    }

    #[test]
    fn am_carrier_envelope_peaks_at_modulation_rate() {
        // 1 kHz carrier, 100% depth 10 Hz modulation. The known modulation
        // envelope (1 + cos 2π·10t)/2 has its only non-DC line at 10 Hz.
        let fs = 44100u32;
        let n = 5 * fs as usize;
        let samples: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / fs as f64;
                0.45 * (1.0 + (2.0 * PI * 10.0 * t).cos()) * (2.0 * PI * 1000.0 * t).sin()
            })
            .collect();
        let signal = SampledSignal::new(fs, samples).unwrap();
        let est = analyze_rate(&signal);
        assert!(
            (est.rate_hz - 10.0).abs() < 0.1,
            "rate {} Hz",
            est.rate_hz
        );
        assert!(est.reliable);
    }

    #[test]
    fn impulse_train_spectrum_has_harmonics_and_fundamental_wins() {
        // Direct 20 Hz impulse-train envelope: the analytic Fourier series
        // has equal-weight lines at 20, 40, 60, ... Hz.
        let rate = 2000u32;
        let n = 10 * rate as usize;
        let mut samples = vec![0.0; n];
        let mut i = 0;
        while i < n {
            samples[i] = 1.0;
            i += 100; // 20 Hz at 2 kHz
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        for v in samples.iter_mut() {
            *v -= mean;
        }
        let env = SampledSignal::new(rate, samples).unwrap();
        let spectrum = modulation_spectrum(&env).unwrap();
        // Harmonic bins all carry near-equal magnitude.
        let mag_near = |f: f64| {
            let k = (f / spectrum.resolution).round() as usize;
            spectrum.magnitudes[k - 2..=k + 2]
                .iter()
                .fold(0.0_f64, |m, &v| m.max(v))
        };
        let m20 = mag_near(20.0);
        let m40 = mag_near(40.0);
        let m60 = mag_near(60.0);
        assert!(m40 > 0.9 * m20 && m60 > 0.9 * m20);
        let est = estimate_rate(&spectrum, DEFAULT_RATE_BAND).unwrap();
        assert!(
            (est.rate_hz - 20.0).abs() < 0.2,
            "fundamental not selected: {} Hz",
            est.rate_hz
        );
    }

    #[test]
    fn zero_envelope_gives_zero_spectrum() {
        let env = SampledSignal::new(2000, vec![0.0; 4000]).unwrap();
        let spectrum = modulation_spectrum(&env).unwrap();
        assert!(spectrum.magnitudes.iter().all(|&m| m == 0.0));
        let est = estimate_rate(&spectrum, DEFAULT_RATE_BAND).unwrap();
        assert!(!est.reliable);
    }

    #[test]
    fn flat_spectrum_is_unreliable() {
        let res = 0.5;
        let freqs: Vec<f64> = (0..400).map(|k| k as f64 * res).collect();
        let spectrum = EnvelopeSpectrum::new(freqs, vec![1.0; 400], res).unwrap();
        let est = estimate_rate(&spectrum, DEFAULT_RATE_BAND).unwrap();
        assert_eq!(est.snr_db, 0.0);
        assert!(!est.reliable);
    }

    #[test]
    fn equal_peaks_resolve_to_lower_frequency() {
        let res = 1.0;
        let freqs: Vec<f64> = (0..200).map(|k| k as f64 * res).collect();
        let mut mags = vec![0.0; 200];
        mags[15] = 1.0;
        mags[30] = 1.0;
        let spectrum = EnvelopeSpectrum::new(freqs, mags, res).unwrap();
        let est = estimate_rate(&spectrum, DEFAULT_RATE_BAND).unwrap();
        assert!((est.rate_hz - 15.0).abs() < 1e-9);
    }

    #[test]
    fn band_outside_spectrum_rejected() {
        let res = 1.0;
        let freqs: Vec<f64> = (0..50).map(|k| k as f64 * res).collect();
        let spectrum = EnvelopeSpectrum::new(freqs, vec![1.0; 50], res).unwrap();
        assert!(matches!(
            estimate_rate(&spectrum, (4.0, 100.0)),
            Err(AcousticsError::BandOutOfRange(_))
        ));
        assert!(matches!(
            estimate_rate(&spectrum, (10.0, 10.0)),
            Err(AcousticsError::BandOutOfRange(_))
        ));
    }

    #[test]
    fn amplitude_scaling_leaves_rate_unchanged() {
        let times = impact_train(20.0, 3.0);
        let base = synthesize_collapse(&times, &SynthesisParams::default(), 44100).unwrap();
        let est_base = analyze_rate(&base);
        for k in [0.25, 2.0, 7.3] {
            let scaled = SampledSignal::new(
                44100,
                base.samples().iter().map(|&v| v * k / 8.0).collect(),
            )
            .unwrap();
            let est = analyze_rate(&scaled);
            assert!((est.rate_hz - est_base.rate_hz).abs() < 1e-9);
            assert!((est.snr_db - est_base.snr_db).abs() < 1e-6);
            assert_eq!(est.reliable, est_base.reliable);
        }
    }

    #[test]
    fn dc_offset_moves_rate_less_than_a_bin() {
        let times = impact_train(20.0, 3.0);
        let base = synthesize_collapse(&times, &SynthesisParams::default(), 44100).unwrap();
        let shifted = SampledSignal::new(
            44100,
            base.samples().iter().map(|&v| 0.05 + v * 0.9).collect(),
        )
        .unwrap();
        let env = envelope(&base, &EnvelopeConfig::default()).unwrap();
        let resolution = modulation_spectrum(&env).unwrap().resolution;
        let a = analyze_rate(&base);
        let b = analyze_rate(&shifted);
        assert!((a.rate_hz - b.rate_hz).abs() <= resolution);
    }

    #[test]
    fn stationary_input_needs_no_trim() {
        let times = impact_train(20.0, 4.0);
        let signal = synthesize_collapse(&times, &SynthesisParams::default(), 44100).unwrap();
        let trim = trim_transient(&signal, &AnalysisConfig::default()).unwrap();
        assert!(trim.stable);
        assert_eq!(trim.trimmed_seconds, 0.0);
    }

    #[test]
    fn pure_noise_trims_half_and_flags_unstable() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples: Vec<f64> = (0..4 * 44100)
            .map(|_| {
                let v: f64 = rng.sample(StandardNormal);
                0.3 * v
            })
            .map(|v| v.clamp(-1.0, 1.0))
            .collect();
        let signal = SampledSignal::new(44100, samples).unwrap();
        let trim = trim_transient(&signal, &AnalysisConfig::default()).unwrap();
        assert!(!trim.stable);
        assert!((trim.trimmed_seconds - 2.0).abs() < 0.01);
        // The full pipeline reports the result as unreliable.
        let m = wave_speed_from_recording(&signal, 0.019, 0.05, &AnalysisConfig::default())
            .unwrap();
        assert!(!m.rate.reliable);
    }

    #[test]
    fn trim_rejects_short_input() {
        let signal = SampledSignal::new(44100, vec![0.0; 44100]).unwrap();
        assert!(matches!(
            trim_transient(&signal, &AnalysisConfig::default()),
            Err(AcousticsError::TooShort { .. })
        ));
    }

    #[test]
    fn measurement_arithmetic() {
        let times = impact_train(20.0, 4.0);
        let signal = synthesize_collapse(&times, &SynthesisParams::default(), 44100).unwrap();
        let m = wave_speed_from_recording(&signal, 0.05, 0.05, &AnalysisConfig::default())
            .unwrap();
        // V = rate * L and normalization by sqrt(gH) hold by construction.
        assert!((m.wave_speed_mps - m.rate.rate_hz * 0.05).abs() < 1e-12);
        assert!(
            (m.normalized_speed - m.wave_speed_mps / (STANDARD_GRAVITY * 0.05).sqrt()).abs()
                < 1e-12
        );
        // 20 Hz at a 50 mm pitch is 1 m/s, normalized ~1.4281 at H = 50 mm.
        assert!((m.wave_speed_mps - 1.0).abs() < 0.02);
        assert!((m.normalized_speed - 1.4281).abs() < 0.03);
        assert!(m.rate.reliable);
    }

    #[test]
    fn report_formats() {
        let m = WaveSpeedMeasurement {
            wave_speed_mps: 1.0,
            normalized_speed: 1.4281,
            rate: RateEstimate {
                rate_hz: 20.0,
                snr_db: 12.5,
                reliable: true,
                trimmed_seconds: 0.0,
            },
        };
        let report = AnalysisReport::from_measurement(&m);
        let kv = report.to_key_value();
        assert_eq!(
            kv,
            "rate_hz=20\nsnr_db=12.5\nreliable=true\ntrimmed_seconds=0\nwave_speed_mps=1\nnormalized_speed=1.4281\n"
        );
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(value["rate_hz"], 20.0);
        assert_eq!(value["reliable"], true);
        assert_eq!(value["normalized_speed"], 1.4281);
    }
}
