//! Signal containers, mono WAV I/O, SNR-controlled mixing, and test-signal synthesis.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Mono signal with its sample rate. Samples are f64 in nominal range [-1, 1];
/// values outside that range are only clamped when written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBuffer {
    pub samples: Vec<f64>,
    pub sample_rate_hz: u32,
}

impl SignalBuffer {
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(Error::InvalidArgument("sample rate must be positive".into()));
        }
        Ok(Self { samples, sample_rate_hz })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean squared sample value. Zero for an empty buffer.
    pub fn power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64
    }
}

/// Tap-delay-line input vector: taps[0] is the current sample, taps[j] the
/// sample j steps in the past, zero-padded before the start of the signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Regressor {
    pub taps: Vec<f64>,
}

impl Regressor {
    pub fn new(taps: Vec<f64>) -> Self {
        Self { taps }
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }
}

fn chunk_id(bytes: &[u8], at: usize) -> Option<&[u8]> {
    bytes.get(at..at + 4)
}

fn read_u16(bytes: &[u8], at: usize) -> Result<u16> {
    bytes
        .get(at..at + 2)
        .map(|b| u16::from_le_bytes([b[0], b[1]]))
        .ok_or_else(|| Error::WavFormat("truncated chunk".into()))
}

fn read_u32(bytes: &[u8], at: usize) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::WavFormat("truncated chunk".into()))
}

/// Reads a mono PCM WAV file (8-bit unsigned or 16-bit signed little-endian)
/// into normalized f64 samples.
pub fn read_wav(path: impl AsRef<Path>) -> Result<SignalBuffer> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;

    if bytes.len() < 12 || chunk_id(&bytes, 0) != Some(b"RIFF") || chunk_id(&bytes, 8) != Some(b"WAVE") {
        return Err(Error::WavFormat("missing RIFF/WAVE header".into()));
    }

    let mut fmt: Option<(u16, u16, u32, u16)> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = chunk_id(&bytes, pos).unwrap();
        let size = read_u32(&bytes, pos + 4)? as usize;
        let body_start = pos + 8;
        let body_end = body_start + size;
        if body_end > bytes.len() {
            return Err(Error::WavFormat("chunk extends past end of file".into()));
        }
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(Error::WavFormat("fmt chunk too short".into()));
                }
                let format_code = read_u16(&bytes, body_start)?;
                let channels = read_u16(&bytes, body_start + 2)?;
                let sample_rate = read_u32(&bytes, body_start + 4)?;
                let bits = read_u16(&bytes, body_start + 14)?;
                fmt = Some((format_code, channels, sample_rate, bits));
            }
            b"data" => data = Some(&bytes[body_start..body_end]),
            _ => {}
        }
        pos = body_end + size % 2;
    }

    let (format_code, channels, sample_rate, bits) =
        fmt.ok_or_else(|| Error::WavFormat("missing fmt chunk".into()))?;
    let data = data.ok_or_else(|| Error::WavFormat("missing data chunk".into()))?;

    if format_code != 1 {
        return Err(Error::NonPcm(format_code));
    }
    if channels != 1 {
        return Err(Error::MultiChannel(channels));
    }
    if sample_rate == 0 {
        return Err(Error::WavFormat("zero sample rate".into()));
    }

    let samples = match bits {
        8 => data.iter().map(|&b| (b as f64 - 128.0) / 128.0).collect(),
        16 => {
            if data.len() % 2 != 0 {
                return Err(Error::WavFormat("odd data length for 16-bit samples".into()));
            }
            data.chunks_exact(2)
                .map(|c| i16::from_le_bytes([c[0], c[1]]) as f64 / 32768.0)
                .collect()
        }
        other => return Err(Error::BitDepth(other)),
    };

    SignalBuffer::new(samples, sample_rate)
}

/// Writes a buffer as a mono 16-bit PCM WAV file. Samples are clamped to
/// [-1, 1] before quantization; non-finite samples are rejected.
pub fn write_wav(path: impl AsRef<Path>, signal: &SignalBuffer) -> Result<()> {
    let path = path.as_ref();
    if signal.samples.is_empty() {
        return Err(Error::EmptyBuffer);
    }
    if let Some(bad) = signal.samples.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFinite(bad));
    }

    let data_len = (signal.samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&signal.sample_rate_hz.to_le_bytes());
    out.extend_from_slice(&(signal.sample_rate_hz * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in &signal.samples {
        let q = (s.clamp(-1.0, 1.0) * 32768.0).round() as i32;
        let q = q.clamp(i16::MIN as i32, i16::MAX as i32) as i16;
        out.extend_from_slice(&q.to_le_bytes());
    }

    let mut file =
        fs::File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    file.write_all(&out).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Adds `noise` to `clean`, scaled so the mixture has the requested SNR in dB.
/// Returns the mixture and the scale applied to the noise. The noise may be
/// longer than the clean signal; only its leading segment is used.
pub fn mix_at_snr(
    clean: &SignalBuffer,
    noise: &SignalBuffer,
    target_snr_db: f64,
) -> Result<(SignalBuffer, f64)> {
    if clean.samples.is_empty() {
        return Err(Error::EmptyBuffer);
    }
    if clean.sample_rate_hz != noise.sample_rate_hz {
        return Err(Error::SampleRateMismatch(clean.sample_rate_hz, noise.sample_rate_hz));
    }
    if noise.len() < clean.len() {
        return Err(Error::NoiseTooShort { noise: noise.len(), clean: clean.len() });
    }
    if !target_snr_db.is_finite() {
        return Err(Error::InvalidArgument("target SNR must be finite".into()));
    }

    let n = clean.len();
    let clean_power = clean.power();
    let noise_power =
        noise.samples[..n].iter().map(|s| s * s).sum::<f64>() / n as f64;
    if clean_power == 0.0 {
        return Err(Error::ZeroPowerClean);
    }
    if noise_power == 0.0 {
        return Err(Error::ZeroPowerNoise);
    }

    let scale = (clean_power / (noise_power * 10f64.powf(target_snr_db / 10.0))).sqrt();
    let samples = clean
        .samples
        .iter()
        .zip(&noise.samples[..n])
        .map(|(c, v)| c + scale * v)
        .collect();
    Ok((SignalBuffer { samples, sample_rate_hz: clean.sample_rate_hz }, scale))
}

/// Builds one regressor per sample: a sliding window of `order_l` taps with
/// zero padding before the start of the signal.
pub fn make_regressors(signal: &SignalBuffer, order_l: usize) -> Result<Vec<Regressor>> {
    if order_l == 0 {
        return Err(Error::InvalidArgument("filter order must be at least 1".into()));
    }
    let s = &signal.samples;
    let mut regressors = Vec::with_capacity(s.len());
    for k in 0..s.len() {
        let taps = (0..order_l).map(|j| if j <= k { s[k - j] } else { 0.0 }).collect();
        regressors.push(Regressor::new(taps));
    }
    Ok(regressors)
}

/// One sinusoidal component of a synthetic clean signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tone {
    pub freq_hz: f64,
    pub amplitude: f64,
    pub phase: f64,
}

/// Recipe for a synthetic (clean, noise) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub length: usize,
    pub sample_rate_hz: u32,
    pub seed: u64,
    pub tones: Vec<Tone>,
}

/// Generates a deterministic clean signal (sum of sinusoids) and an
/// equally long unit-power white Gaussian noise signal from the seed.
pub fn synth_testbed(spec: &SynthSpec) -> Result<(SignalBuffer, SignalBuffer)> {
    if spec.length == 0 {
        return Err(Error::InvalidArgument("synthesis length must be at least 1".into()));
    }
    if spec.sample_rate_hz == 0 {
        return Err(Error::InvalidArgument("sample rate must be positive".into()));
    }
    if spec.tones.is_empty() {
        return Err(Error::InvalidArgument("at least one tone is required".into()));
    }

    let fs = spec.sample_rate_hz as f64;
    let mut clean = Vec::with_capacity(spec.length);
    for k in 0..spec.length {
        let t = k as f64 / fs;
        let s = spec
            .tones
            .iter()
            .map(|tone| tone.amplitude * (2.0 * std::f64::consts::PI * tone.freq_hz * t + tone.phase).sin())
            .sum();
        clean.push(s);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut noise: Vec<f64> =
        (0..spec.length).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mean_square = noise.iter().map(|v| v * v).sum::<f64>() / noise.len() as f64;
    if mean_square > 0.0 {
        let inv = 1.0 / mean_square.sqrt();
        for v in &mut noise {
            *v *= inv;
        }
    }

    Ok((
        SignalBuffer { samples: clean, sample_rate_hz: spec.sample_rate_hz },
        SignalBuffer { samples: noise, sample_rate_hz: spec.sample_rate_hz },
    ))
}
