//! Butterworth biquad cascades and zero-phase filtering.
//!
//! Filters are designed in the analog domain from the Butterworth prototype
//! (low-pass scaling or the low-pass-to-band-pass transform), mapped to the
//! z-plane by the bilinear transform with frequency prewarping, and grouped
//! into second-order sections. Application is forward-backward with
//! steady-state initial conditions, so the cascade has exactly zero phase and
//! a constant input produces its exact DC response from the first sample.

use num_complex::Complex64;
use std::f64::consts::PI;

/// One second-order section, `a0` normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Biquad {
    /// DF2T state that makes the section behave as if the input had been
    /// `x` forever (the step-response steady state).
    fn steady_state(&self, x: f64) -> (f64, f64) {
        let gain_dc = (self.b0 + self.b1 + self.b2) / (1.0 + self.a1 + self.a2);
        let y = gain_dc * x;
        let s2 = self.b2 * x - self.a2 * y;
        let s1 = self.b1 * x - self.a1 * y + s2;
        (s1, s2)
    }

    /// Runs the section over `data` in place (direct form II transposed),
    /// starting from the steady state for the first sample.
    fn process(&self, data: &mut [f64]) {
        if data.is_empty() {
            return;
        }
        let (mut s1, mut s2) = self.steady_state(data[0]);
        for v in data.iter_mut() {
            let x = *v;
            let y = self.b0 * x + s1;
            s1 = self.b1 * x - self.a1 * y + s2;
            s2 = self.b2 * x - self.a2 * y;
            *v = y;
        }
    }
}

/// Applies a cascade forward then backward: zero phase, squared magnitude.
pub fn filtfilt(sections: &[Biquad], data: &mut [f64]) {
    for section in sections {
        section.process(data);
    }
    data.reverse();
    for section in sections {
        section.process(data);
    }
    data.reverse();
}

/// Cascade magnitude response at `freq` for sample rate `fs` (single pass,
/// not the forward-backward square).
pub fn magnitude_at(sections: &[Biquad], freq: f64, fs: f64) -> f64 {
    let z_inv = Complex64::from_polar(1.0, -2.0 * PI * freq / fs);
    sections
        .iter()
        .map(|s| {
            let num = Complex64::new(s.b0, 0.0) + s.b1 * z_inv + s.b2 * z_inv * z_inv;
            let den = Complex64::new(1.0, 0.0) + s.a1 * z_inv + s.a2 * z_inv * z_inv;
            (num / den).norm()
        })
        .product()
}

/// Left-half-plane poles of the normalized Butterworth prototype.
fn prototype_poles(order: usize) -> Vec<Complex64> {
    (0..order)
        .map(|k| {
            let theta = PI * (2 * k + order + 1) as f64 / (2 * order) as f64;
            Complex64::from_polar(1.0, theta)
        })
        .collect()
}

/// Prewarped analog frequency for the bilinear transform.
fn warp(freq: f64, fs: f64) -> f64 {
    2.0 * fs * (PI * freq / fs).tan()
}

fn bilinear_pole(p: Complex64, fs: f64) -> Complex64 {
    (2.0 * fs + p) / (2.0 * fs - p)
}

/// Groups complex poles into conjugate pairs (real poles pair with each
/// other) and emits one denominator per biquad.
fn pair_poles(mut poles: Vec<Complex64>) -> Vec<(f64, f64)> {
    debug_assert_eq!(poles.len() % 2, 0);
    poles.sort_by(|a, b| (a.re, a.im.abs(), a.im).partial_cmp(&(b.re, b.im.abs(), b.im)).unwrap());
    let mut out = Vec::with_capacity(poles.len() / 2);
    let mut i = 0;
    while i < poles.len() {
        let p = poles[i];
        let q = poles[i + 1];
        // a1 = -(p+q), a2 = p*q; conjugate or real-real pairs keep these real.
        out.push((-(p + q).re, (p * q).re));
        i += 2;
    }
    out
}

/// Digital Butterworth low-pass of even `order` with cutoff `cutoff_hz`.
pub fn butter_lowpass(order: usize, cutoff_hz: f64, fs: f64) -> Vec<Biquad> {
    assert!(order >= 2 && order % 2 == 0, "order must be even");
    assert!(cutoff_hz > 0.0 && cutoff_hz < fs / 2.0);
    let wc = warp(cutoff_hz, fs);
    let analog: Vec<Complex64> = prototype_poles(order).into_iter().map(|p| p * wc).collect();
    // Digital gain: wc^n / prod(2fs - p), all zeros at z = -1.
    let mut gain = Complex64::new(wc.powi(order as i32), 0.0);
    for &p in &analog {
        gain /= 2.0 * fs - p;
    }
    let digital: Vec<Complex64> = analog.into_iter().map(|p| bilinear_pole(p, fs)).collect();
    let mut sections: Vec<Biquad> = pair_poles(digital)
        .into_iter()
        .map(|(a1, a2)| Biquad {
            b0: 1.0,
            b1: 2.0,
            b2: 1.0,
            a1,
            a2,
        })
        .collect();
    sections[0].apply_gain(gain.re);
    sections
}

/// Digital Butterworth band-pass of even overall `order` (so an `order/2`
/// prototype) with edges `lo_hz..hi_hz`.
pub fn butter_bandpass(order: usize, lo_hz: f64, hi_hz: f64, fs: f64) -> Vec<Biquad> {
    assert!(order >= 2 && order % 2 == 0, "order must be even");
    assert!(0.0 < lo_hz && lo_hz < hi_hz && hi_hz < fs / 2.0);
    let half = order / 2;
    let w1 = warp(lo_hz, fs);
    let w2 = warp(hi_hz, fs);
    let bw = w2 - w1;
    let w0_sq = w1 * w2;

    let mut analog = Vec::with_capacity(order);
    for p in prototype_poles(half) {
        let half_term = p * bw * 0.5;
        let root = (half_term * half_term - w0_sq).sqrt();
        analog.push(half_term + root);
        analog.push(half_term - root);
    }
    // Gain: bw^n * (2fs)^n / prod(2fs - p); zeros split as n at z=1, n at z=-1.
    let mut gain = Complex64::new((bw * 2.0 * fs).powi(half as i32), 0.0);
    for &p in &analog {
        gain /= 2.0 * fs - p;
    }
    let digital: Vec<Complex64> = analog.into_iter().map(|p| bilinear_pole(p, fs)).collect();
    let mut sections: Vec<Biquad> = pair_poles(digital)
        .into_iter()
        .map(|(a1, a2)| Biquad {
            b0: 1.0,
            b1: 0.0,
            b2: -1.0,
            a1,
            a2,
        })
        .collect();
    sections[0].apply_gain(gain.re);
    sections
}

impl Biquad {
    fn apply_gain(&mut self, k: f64) {
        self.b0 *= k;
        self.b1 *= k;
        self.b2 *= k;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Analytic magnitude of the warped-analog Butterworth low-pass; the
    /// bilinear design must reproduce it exactly at every frequency.
    fn analytic_lowpass(order: usize, cutoff: f64, freq: f64, fs: f64) -> f64 {
        let ratio = warp(freq, fs) / warp(cutoff, fs);
        1.0 / (1.0 + ratio.powi(2 * order as i32)).sqrt()
    }

    fn analytic_bandpass(order: usize, lo: f64, hi: f64, freq: f64, fs: f64) -> f64 {
        let half = (order / 2) as i32;
        let w = warp(freq, fs);
        let w1 = warp(lo, fs);
        let w2 = warp(hi, fs);
        let x = (w * w - w1 * w2) / ((w2 - w1) * w);
        1.0 / (1.0 + x.powi(2 * half)).sqrt()
    }

    #[test]
    fn lowpass_matches_analytic_response() {
        let fs = 44100.0;
        let sections = butter_lowpass(4, 250.0, fs);
        assert_eq!(sections.len(), 2);
        assert_relative_eq!(
            magnitude_at(&sections, 250.0, fs),
            1.0 / 2.0_f64.sqrt(),
            max_relative = 1e-9
        );
        for freq in [5.0, 50.0, 125.0, 250.0, 400.0, 1000.0, 5000.0] {
            assert_relative_eq!(
                magnitude_at(&sections, freq, fs),
                analytic_lowpass(4, 250.0, freq, fs),
                max_relative = 1e-8
            );
        }
        assert_relative_eq!(magnitude_at(&sections, 0.0, fs), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn bandpass_matches_analytic_response() {
        let fs = 44100.0;
        let sections = butter_bandpass(4, 800.0, 3800.0, fs);
        assert_eq!(sections.len(), 2);
        // Band edges sit exactly at -3 dB.
        for edge in [800.0, 3800.0] {
            assert_relative_eq!(
                magnitude_at(&sections, edge, fs),
                1.0 / 2.0_f64.sqrt(),
                max_relative = 1e-9
            );
        }
        for freq in [900.0, 1500.0, 2000.0, 3000.0, 3700.0] {
            let got = magnitude_at(&sections, freq, fs);
            let want = analytic_bandpass(4, 800.0, 3800.0, freq, fs);
            assert_relative_eq!(got, want, max_relative = 1e-8);
            // In-band deviation from flat stays within 0.5 dB.
            assert!(20.0 * got.log10() > -0.5);
        }
        // DC is fully rejected.
        assert!(magnitude_at(&sections, 0.0, fs) < 1e-12);
    }

    #[test]
    fn bandpass_works_at_minimum_rate() {
        let fs = 8000.0;
        let sections = butter_bandpass(4, 800.0, 3800.0, fs);
        assert_relative_eq!(
            magnitude_at(&sections, 800.0, fs),
            1.0 / 2.0_f64.sqrt(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn filtfilt_kills_dc_exactly_through_bandpass() {
        let sections = butter_bandpass(4, 800.0, 3800.0, 44100.0);
        let mut data = vec![0.37; 4000];
        filtfilt(&sections, &mut data);
        assert!(data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn filtfilt_passes_dc_exactly_through_lowpass() {
        let sections = butter_lowpass(4, 250.0, 44100.0);
        let mut data = vec![0.37; 4000];
        filtfilt(&sections, &mut data);
        for &v in &data {
            assert_relative_eq!(v, 0.37, max_relative = 1e-9);
        }
    }

    #[test]
    fn filtfilt_is_zero_phase_on_tone() {
        // A mid-band tone keeps its phase: correlate input and output.
        let fs = 44100.0;
        let sections = butter_bandpass(4, 800.0, 3800.0, fs);
        let n = 44100;
        let tone: Vec<f64> = (0..n)
            .map(|i| (2.0 * PI * 2000.0 * i as f64 / fs).sin())
            .collect();
        let mut filtered = tone.clone();
        filtfilt(&sections, &mut filtered);
        // Compare away from the ends.
        let mid = n / 2;
        let expected_gain = magnitude_at(&sections, 2000.0, fs).powi(2);
        for i in mid - 50..mid + 50 {
            assert_relative_eq!(filtered[i], expected_gain * tone[i], epsilon = 1e-3);
        }
    }
}
