//! Minimal PCM16 WAV reader and writer.
//!
//! The reader walks RIFF chunks, accepts 16-bit PCM mono or stereo at any
//! rate from 8 kHz up, and averages stereo down to mono. The writer emits the
//! canonical 44-byte-header mono layout; for canonical mono input the two
//! round-trip byte-exactly.

use super::{AcousticsError, SampledSignal, MIN_SAMPLE_RATE};

const HEADER_LEN: usize = 44;
const PCM16_SCALE: f64 = 32768.0;

fn read_u16(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([bytes[at], bytes[at + 1]])
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]])
}

struct FmtChunk {
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
    format_tag: u16,
}

/// Parses a PCM16 WAV byte stream into a normalized mono signal
/// (samples scaled by 1/32768).
pub fn read_wav(bytes: &[u8]) -> Result<SampledSignal, AcousticsError> {
    if bytes.len() < 12 {
        return Err(AcousticsError::MalformedContainer(
            "shorter than a RIFF header".to_string(),
        ));
    }
    if &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(AcousticsError::MalformedContainer(
            "missing RIFF/WAVE magic".to_string(),
        ));
    }

    let mut fmt: Option<FmtChunk> = None;
    let mut data: Option<&[u8]> = None;
    let mut offset = 12;
    while offset + 8 <= bytes.len() {
        let id = &bytes[offset..offset + 4];
        let size = read_u32(bytes, offset + 4) as usize;
        let body_start = offset + 8;
        let body_end = body_start + size;
        if body_end > bytes.len() {
            return Err(AcousticsError::MalformedContainer(format!(
                "chunk {:?} overruns the file",
                String::from_utf8_lossy(id)
            )));
        }
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(AcousticsError::MalformedContainer(
                        "fmt chunk shorter than 16 bytes".to_string(),
                    ));
                }
                fmt = Some(FmtChunk {
                    format_tag: read_u16(bytes, body_start),
                    channels: read_u16(bytes, body_start + 2),
                    sample_rate: read_u32(bytes, body_start + 4),
                    bits_per_sample: read_u16(bytes, body_start + 14),
                });
            }
            b"data" => data = Some(&bytes[body_start..body_end]),
            _ => {}
        }
        // RIFF pads odd-sized chunks to even offsets.
        offset = body_end + (size & 1);
    }

    let fmt = fmt.ok_or_else(|| {
        AcousticsError::MalformedContainer("missing fmt chunk".to_string())
    })?;
    let data = data.ok_or_else(|| {
        AcousticsError::MalformedContainer("missing data chunk".to_string())
    })?;

    if fmt.format_tag != 1 {
        return Err(AcousticsError::UnsupportedEncoding(format!(
            "format tag {} (only PCM = 1)",
            fmt.format_tag
        )));
    }
    if fmt.bits_per_sample != 16 {
        return Err(AcousticsError::UnsupportedEncoding(format!(
            "{}-bit samples (only 16-bit)",
            fmt.bits_per_sample
        )));
    }
    if !(1..=2).contains(&fmt.channels) {
        return Err(AcousticsError::UnsupportedEncoding(format!(
            "{} channels (only mono or stereo)",
            fmt.channels
        )));
    }
    if fmt.sample_rate < MIN_SAMPLE_RATE {
        return Err(AcousticsError::RateTooLow(fmt.sample_rate));
    }

    let frame_bytes = 2 * fmt.channels as usize;
    if data.len() % frame_bytes != 0 {
        return Err(AcousticsError::MalformedContainer(format!(
            "data chunk of {} bytes is not whole {}-byte frames",
            data.len(),
            frame_bytes
        )));
    }
    if data.is_empty() {
        return Err(AcousticsError::MalformedContainer(
            "empty data chunk".to_string(),
        ));
    }

    let frames = data.len() / frame_bytes;
    let mut samples = Vec::with_capacity(frames);
    for frame in 0..frames {
        let at = frame * frame_bytes;
        let mut acc = 0.0;
        for ch in 0..fmt.channels as usize {
            let raw = i16::from_le_bytes([bytes_at(data, at + 2 * ch), bytes_at(data, at + 2 * ch + 1)]);
            acc += raw as f64 / PCM16_SCALE;
        }
        samples.push(acc / fmt.channels as f64);
    }
    SampledSignal::new(fmt.sample_rate, samples)
}

fn bytes_at(data: &[u8], at: usize) -> u8 {
    data[at]
}

/// Encodes a signal as canonical mono PCM16 WAV bytes. Samples are clamped to
/// `[-1, 1]`, scaled by 32768 and rounded half away from zero; the positive
/// full scale saturates at 32767.
pub fn write_wav(signal: &SampledSignal) -> Vec<u8> {
    let data_len = signal.len() * 2;
    let mut out = Vec::with_capacity(HEADER_LEN + data_len);
    let rate = signal.sample_rate();
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &v in signal.samples() {
        let scaled = (v.clamp(-1.0, 1.0) * PCM16_SCALE).round();
        let quantized = scaled.clamp(i16::MIN as f64, i16::MAX as f64) as i16;
        out.extend_from_slice(&quantized.to_le_bytes());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signal(rate: u32, samples: Vec<f64>) -> SampledSignal {
        SampledSignal::new(rate, samples).unwrap()
    }

    #[test]
    fn silence_round_trip() {
        let silence = signal(44100, vec![0.0; 44100]);
        let bytes = write_wav(&silence);
        assert_eq!(bytes.len(), 44 + 2 * 44100);
        let back = read_wav(&bytes).unwrap();
        assert_eq!(back.sample_rate(), 44100);
        assert_eq!(back.len(), 44100);
        assert!(back.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn canonical_mono_round_trip_is_byte_exact() {
        // Includes both integer extremes.
        let raw: Vec<i16> = vec![0, 1, -1, 1000, -1000, i16::MAX, i16::MIN, 12345, -32000];
        let source = signal(
            8000,
            raw.iter().map(|&v| v as f64 / 32768.0).collect(),
        );
        let bytes = write_wav(&source);
        let decoded = read_wav(&bytes).unwrap();
        assert!(decoded.is_normalized());
        assert_eq!(write_wav(&decoded), bytes);
    }

    #[test]
    fn clamps_out_of_range_samples() {
        let s = signal(8000, vec![1.0 + 1e-7, -1.0 - 1e-7, 1.0, -1.0]);
        let bytes = write_wav(&s);
        let vals: Vec<i16> = (0..4)
            .map(|i| i16::from_le_bytes([bytes[44 + 2 * i], bytes[45 + 2 * i]]))
            .collect();
        // Positive full scale saturates at 32767; negative reaches -32768.
        assert_eq!(vals, vec![32767, -32768, 32767, -32768]);
    }

    #[test]
    fn rounds_half_away_from_zero() {
        let s = signal(8000, vec![0.5 / 32768.0, -0.5 / 32768.0, 1.4 / 32768.0]);
        let bytes = write_wav(&s);
        let vals: Vec<i16> = (0..3)
            .map(|i| i16::from_le_bytes([bytes[44 + 2 * i], bytes[45 + 2 * i]]))
            .collect();
        assert_eq!(vals, vec![1, -1, 1]);
    }

    #[test]
    fn stereo_averages_to_mono() {
        // Hand-build a stereo file: L = 8192, R = -8192 then L = R = 4096.
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"RIFF");
        bytes.extend_from_slice(&(36u32 + 8).to_le_bytes());
        bytes.extend_from_slice(b"WAVE");
        bytes.extend_from_slice(b"fmt ");
        bytes.extend_from_slice(&16u32.to_le_bytes());
        bytes.extend_from_slice(&1u16.to_le_bytes());
        bytes.extend_from_slice(&2u16.to_le_bytes());
        bytes.extend_from_slice(&44100u32.to_le_bytes());
        bytes.extend_from_slice(&(44100u32 * 4).to_le_bytes());
        bytes.extend_from_slice(&4u16.to_le_bytes());
        bytes.extend_from_slice(&16u16.to_le_bytes());
        bytes.extend_from_slice(b"data");
        bytes.extend_from_slice(&8u32.to_le_bytes());
        for v in [8192i16, -8192, 4096, 4096] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        let decoded = read_wav(&bytes).unwrap();
        assert_eq!(decoded.len(), 2);
        assert_eq!(decoded.samples()[0], 0.0);
        assert_eq!(decoded.samples()[1], 4096.0 / 32768.0);
    }

    #[test]
    fn rejects_eight_bit() {
        let mono = signal(44100, vec![0.0; 4]);
        let mut bytes = write_wav(&mono);
        bytes[34] = 8; // bits per sample
        assert!(matches!(
            read_wav(&bytes),
            Err(AcousticsError::UnsupportedEncoding(_))
        ));
    }

    #[test]
    fn rejects_non_pcm() {
        let mono = signal(44100, vec![0.0; 4]);
        let mut bytes = write_wav(&mono);
        bytes[20] = 3; // IEEE float tag
        assert!(matches!(
            read_wav(&bytes),
            Err(AcousticsError::UnsupportedEncoding(_))
        ));
    }

    #[test]
    fn rejects_low_rate() {
        let mono = signal(8000, vec![0.0; 4]);
        let mut bytes = write_wav(&mono);
        bytes[24..28].copy_from_slice(&4000u32.to_le_bytes());
        assert!(matches!(
            read_wav(&bytes),
            Err(AcousticsError::RateTooLow(4000))
        ));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            read_wav(b"not a wav file at all"),
            Err(AcousticsError::MalformedContainer(_))
        ));
        assert!(matches!(
            read_wav(b""),
            Err(AcousticsError::MalformedContainer(_))
        ));
    }

    #[test]
    fn skips_extra_chunks() {
        let mono = signal(44100, vec![0.25; 8]);
        let canonical = write_wav(&mono);
        // Splice a LIST chunk between fmt and data.
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&canonical[..36]);
        bytes.extend_from_slice(b"LIST");
        bytes.extend_from_slice(&4u32.to_le_bytes());
        bytes.extend_from_slice(b"INFO");
        bytes.extend_from_slice(&canonical[36..]);
        let riff_size = (bytes.len() - 8) as u32;
        bytes[4..8].copy_from_slice(&riff_size.to_le_bytes());
        let decoded = read_wav(&bytes).unwrap();
        assert_eq!(decoded.len(), 8);
    }
}
