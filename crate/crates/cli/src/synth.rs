//! Synthetic benchmark signals: a speech-like clean tone stack and five
//! shaped noise types, all deterministic in the seed.

use std::f64::consts::PI;
use std::str::FromStr;

use kaf_core::{synth_testbed, Error, Result, SignalBuffer, SynthSpec, Tone};

pub const SAMPLE_RATE_HZ: u32 = 8000;

/// Sustained harmonic stack on a 500 Hz fundamental. Every partial is a
/// multiple of 500 Hz, so at 8 kHz the waveform repeats every 16 samples,
/// and most of the power sits in bright upper partials: that keeps the
/// total power modest (the unnormalized filters need that to stay stable
/// at 0 dB) while still separating neighbouring regressors clearly, which
/// is what a unit-width Gaussian kernel resolves.
const CLEAN_TONES: [(f64, f64, f64); 7] = [
    (500.0, 0.08, 1.94),
    (1000.0, 0.06, 6.18),
    (1500.0, 0.06, 3.15),
    (2000.0, 0.08, 4.86),
    (2500.0, 0.11, 3.70),
    (3000.0, 0.14, 4.14),
    (3500.0, 0.16, 6.22),
];

pub fn clean_speech_like(length: usize, sample_rate_hz: u32) -> Result<SignalBuffer> {
    let spec = SynthSpec {
        length,
        sample_rate_hz,
        seed: 0,
        tones: CLEAN_TONES
            .iter()
            .map(|&(freq_hz, amplitude, phase)| Tone { freq_hz, amplitude, phase })
            .collect(),
    };
    let (clean, _) = synth_testbed(&spec)?;
    Ok(clean)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseType {
    White,
    Babble,
    Car,
    Train,
    Restaurant,
}

impl NoiseType {
    pub const ALL: [NoiseType; 5] =
        [Self::White, Self::Babble, Self::Car, Self::Train, Self::Restaurant];

    pub fn name(&self) -> &'static str {
        match self {
            Self::White => "white",
            Self::Babble => "babble",
            Self::Car => "car",
            Self::Train => "train",
            Self::Restaurant => "restaurant",
        }
    }

    fn index(&self) -> u64 {
        Self::ALL.iter().position(|t| t == self).unwrap() as u64
    }
}

impl FromStr for NoiseType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|t| t.name() == s)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("unknown noise type '{s}'")))
    }
}

fn white_base(noise_type: NoiseType, length: usize, sample_rate_hz: u32, seed: u64) -> Result<Vec<f64>> {
    let spec = SynthSpec {
        length,
        sample_rate_hz,
        seed: seed.wrapping_add(1009 * (noise_type.index() + 1)),
        tones: vec![Tone { freq_hz: 0.0, amplitude: 0.0, phase: 0.0 }],
    };
    let (_, white) = synth_testbed(&spec)?;
    Ok(white.samples)
}

fn one_pole_lowpass(samples: &mut [f64], alpha: f64) {
    let mut state = 0.0;
    for s in samples.iter_mut() {
        state = alpha * state + (1.0 - alpha) * *s;
        *s = state;
    }
}

fn amplitude_modulate(samples: &mut [f64], rate_hz: f64, base: f64, depth: f64, sample_rate_hz: u32) {
    let fs = sample_rate_hz as f64;
    for (k, s) in samples.iter_mut().enumerate() {
        *s *= base + depth * (2.0 * PI * rate_hz * k as f64 / fs).sin();
    }
}

/// Deterministic shaped noise. The mixer rescales to the target SNR, so only
/// the spectral and temporal structure matters here, not the power.
pub fn noise(noise_type: NoiseType, length: usize, sample_rate_hz: u32, seed: u64) -> Result<SignalBuffer> {
    let mut samples = white_base(noise_type, length, sample_rate_hz, seed)?;
    match noise_type {
        NoiseType::White => {}
        NoiseType::Car => one_pole_lowpass(&mut samples, 0.5),
        NoiseType::Babble => {
            one_pole_lowpass(&mut samples, 0.45);
            amplitude_modulate(&mut samples, 2.3, 0.8, 0.25, sample_rate_hz);
        }
        NoiseType::Train => {
            one_pole_lowpass(&mut samples, 0.45);
            let fs = sample_rate_hz as f64;
            for (k, s) in samples.iter_mut().enumerate() {
                let swell = 0.5 + 0.5 * (2.0 * PI * 1.5 * k as f64 / fs).sin();
                *s *= 0.55 + 0.45 * swell * swell;
            }
        }
        NoiseType::Restaurant => {
            let raw = samples.clone();
            one_pole_lowpass(&mut samples, 0.5);
            for (s, r) in samples.iter_mut().zip(&raw) {
                if r.abs() > 2.6 {
                    *s += 1.2 * r;
                }
            }
        }
    }
    SignalBuffer::new(samples, sample_rate_hz)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_signal_is_deterministic_and_moderate() {
        let a = clean_speech_like(4000, SAMPLE_RATE_HZ).unwrap();
        let b = clean_speech_like(4000, SAMPLE_RATE_HZ).unwrap();
        assert_eq!(a, b);
        let peak = a.samples.iter().fold(0.0f64, |acc, s| acc.max(s.abs()));
        assert!(peak < 1.0 && peak > 0.05);
        assert!(a.power() > 0.0);
    }

    #[test]
    fn noise_types_are_distinct_and_seeded() {
        let len = 4000;
        for noise_type in NoiseType::ALL {
            let a = noise(noise_type, len, SAMPLE_RATE_HZ, 7).unwrap();
            let b = noise(noise_type, len, SAMPLE_RATE_HZ, 7).unwrap();
            let c = noise(noise_type, len, SAMPLE_RATE_HZ, 8).unwrap();
            assert_eq!(a, b);
            assert_ne!(a.samples, c.samples);
            assert!(a.power() > 0.0);
        }
        let white = noise(NoiseType::White, len, SAMPLE_RATE_HZ, 7).unwrap();
        let car = noise(NoiseType::Car, len, SAMPLE_RATE_HZ, 7).unwrap();
        assert_ne!(white.samples, car.samples);
    }

    #[test]
    fn car_noise_is_lowpassed() {
        let len = 8000;
        let high_band_share = |buf: &SignalBuffer| {
            let diff_power: f64 =
                buf.samples.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
            diff_power / buf.samples.iter().map(|s| s * s).sum::<f64>()
        };
        let white = noise(NoiseType::White, len, SAMPLE_RATE_HZ, 7).unwrap();
        let car = noise(NoiseType::Car, len, SAMPLE_RATE_HZ, 7).unwrap();
        assert!(high_band_share(&car) < 0.5 * high_band_share(&white));
    }

    #[test]
    fn noise_names_round_trip() {
        for noise_type in NoiseType::ALL {
            assert_eq!(noise_type.name().parse::<NoiseType>().unwrap(), noise_type);
        }
        assert!("pink".parse::<NoiseType>().is_err());
    }
}
