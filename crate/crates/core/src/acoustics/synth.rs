//! Synthetic collapse recordings for closed-loop testing.
//!
//! Each impact becomes a short burst of exponentially decaying white noise;
//! stationary background noise is mixed in at a chosen SNR measured over the
//! burst supports. A fixed seed gives bit-identical output.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rand::SeedableRng;

use super::{AcousticsError, SampledSignal, MIN_SAMPLE_RATE};

/// Click and noise parameters of the synthesizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisParams {
    /// Length of each impact burst, s.
    pub click_duration: f64,
    /// Exponential amplitude decay rate inside a burst, 1/s.
    pub click_decay: f64,
    /// Signal-to-noise ratio in dB over the burst supports;
    /// `f64::INFINITY` disables background noise.
    pub snr_db: f64,
    /// Seed of the deterministic noise generator.
    pub noise_seed: u64,
}

impl Default for SynthesisParams {
    fn default() -> Self {
        Self {
            click_duration: 0.005,
            click_decay: 800.0,
            snr_db: 30.0,
            noise_seed: 0,
        }
    }
}

/// Peak amplitude of the normalized output.
const PEAK_LEVEL: f64 = 0.9;

/// Renders a collapse recording from impact times (s, strictly increasing).
pub fn synthesize_collapse(
    impact_times: &[f64],
    params: &SynthesisParams,
    sample_rate: u32,
) -> Result<SampledSignal, AcousticsError> {
    if impact_times.is_empty() {
        return Err(AcousticsError::EmptyImpactList);
    }
    if impact_times[0] < 0.0 {
        return Err(AcousticsError::InvalidImpactTimes(format!(
            "first impact at {} s is negative",
            impact_times[0]
        )));
    }
    for pair in impact_times.windows(2) {
        if pair[1] <= pair[0] {
            return Err(AcousticsError::InvalidImpactTimes(format!(
                "impact at {} s does not follow {} s",
                pair[1], pair[0]
            )));
        }
    }
    if sample_rate < MIN_SAMPLE_RATE {
        return Err(AcousticsError::RateTooLow(sample_rate));
    }
    if !(params.click_duration > 0.0) || !(params.click_decay >= 0.0) {
        return Err(AcousticsError::InvalidArgument(
            "click duration must be positive and decay non-negative".to_string(),
        ));
    }

    let rate = sample_rate as f64;
    let last = *impact_times.last().expect("non-empty");
    let total = (rate * (last + params.click_duration)).ceil() as usize;
    let mut samples = vec![0.0; total];
    let mut burst = vec![false; total];
    let mut rng = ChaCha8Rng::seed_from_u64(params.noise_seed);

    for &t in impact_times {
        let start = (t * rate).ceil() as usize;
        let mut i = start;
        loop {
            let tau = i as f64 / rate - t;
            if tau >= params.click_duration || i >= total {
                break;
            }
            let noise: f64 = rng.sample(StandardNormal);
            samples[i] += noise * (-params.click_decay * tau).exp();
            burst[i] = true;
            i += 1;
        }
    }

    // Background noise scaled so that burst power / noise power hits the SNR.
    if params.snr_db.is_finite() {
        let burst_samples = burst.iter().filter(|&&b| b).count().max(1);
        let burst_power = samples
            .iter()
            .zip(&burst)
            .filter(|(_, &b)| b)
            .map(|(&s, _)| s * s)
            .sum::<f64>()
            / burst_samples as f64;
        let noise_power = burst_power / 10f64.powf(params.snr_db / 10.0);
        let sigma = noise_power.sqrt();
        for v in samples.iter_mut() {
            let noise: f64 = rng.sample(StandardNormal);
            *v += sigma * noise;
        }
    }

    let peak = samples.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    if peak > 0.0 {
        let scale = PEAK_LEVEL / peak;
        for v in samples.iter_mut() {
            *v *= scale;
        }
    }
    SampledSignal::new(sample_rate, samples)
}
