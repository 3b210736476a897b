//! Linear adaptive filters: LMS, Newton-LMS, and the affine projection
//! family (APA, NAPA) over tap-delay-line regressors.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::solve_dense;
use crate::run::FilterRun;
use crate::signal_io::{make_regressors, Regressor, SignalBuffer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearAlgorithm {
    Lms,
    NewtonLms,
    Apa,
    Napa,
}

impl LinearAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Lms => "lms",
            Self::NewtonLms => "newton-lms",
            Self::Apa => "apa",
            Self::Napa => "napa",
        }
    }

    fn needs_epsilon(&self) -> bool {
        matches!(self, Self::NewtonLms | Self::Napa)
    }
}

impl fmt::Display for LinearAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinearAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lms" => Ok(Self::Lms),
            "newton-lms" | "newton_lms" => Ok(Self::NewtonLms),
            "apa" => Ok(Self::Apa),
            "napa" => Ok(Self::Napa),
            other => Err(Error::InvalidArgument(format!("unknown linear algorithm '{other}'"))),
        }
    }
}

/// Hyperparameters for a linear filter. `window_k` is the number of recent
/// (regressor, desired) pairs the affine projection steps operate on; the
/// LMS variants ignore it.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFilterConfig {
    pub algorithm: LinearAlgorithm,
    pub order_l: usize,
    pub step_eta: f64,
    pub reg_epsilon: f64,
    pub window_k: usize,
}

impl LinearFilterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order_l == 0 {
            return Err(Error::InvalidConfig("filter order must be at least 1".into()));
        }
        if !self.step_eta.is_finite() || self.step_eta < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "step size must be finite and non-negative, got {}",
                self.step_eta
            )));
        }
        if !self.reg_epsilon.is_finite() || self.reg_epsilon < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "regularization must be finite and non-negative, got {}",
                self.reg_epsilon
            )));
        }
        if self.algorithm.needs_epsilon() && self.reg_epsilon == 0.0 {
            return Err(Error::InvalidConfig(format!(
                "{} requires a positive regularization",
                self.algorithm
            )));
        }
        if self.window_k == 0 {
            return Err(Error::InvalidConfig("window must be at least 1".into()));
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_finite(u: &Regressor, d: f64) -> Result<()> {
    if !d.is_finite() || u.taps.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(())
}

/// A linear adaptive filter: weight vector plus the recent-pair window used
/// by the affine projection updates. Weights start at zero.
#[derive(Debug, Clone)]
pub struct LinearFilter {
    config: LinearFilterConfig,
    weights: Vec<f64>,
    history: VecDeque<(Regressor, f64)>,
}

impl LinearFilter {
    pub fn new(config: LinearFilterConfig) -> Result<Self> {
        config.validate()?;
        let weights = vec![0.0; config.order_l];
        let history = VecDeque::with_capacity(config.window_k + 1);
        Ok(Self { config, weights, history })
    }

    pub fn config(&self) -> &LinearFilterConfig {
        &self.config
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Current-weight prediction wᵀu, without adapting.
    pub fn predict(&self, u: &Regressor) -> Result<f64> {
        if u.len() != self.config.order_l {
            return Err(Error::LengthMismatch { expected: self.config.order_l, got: u.len() });
        }
        Ok(dot(&self.weights, &u.taps))
    }

    /// Runs one step of the configured algorithm. Returns the prediction for
    /// the current sample (from pre-update weights) and its error d - y.
    pub fn step(&mut self, u: &Regressor, d: f64) -> Result<(f64, f64)> {
        match self.config.algorithm {
            LinearAlgorithm::Lms => self.lms_step(u, d),
            LinearAlgorithm::NewtonLms => self.newton_lms_step(u, d),
            LinearAlgorithm::Apa => self.apa_step(u, d),
            LinearAlgorithm::Napa => self.napa_step(u, d),
        }
    }

    pub fn lms_step(&mut self, u: &Regressor, d: f64) -> Result<(f64, f64)> {
        let y = self.predict(u)?;
        check_finite(u, d)?;
        let e = d - y;
        let eta = self.config.step_eta;
        for (w, t) in self.weights.iter_mut().zip(&u.taps) {
            *w += eta * e * t;
        }
        Ok((y, e))
    }

    pub fn newton_lms_step(&mut self, u: &Regressor, d: f64) -> Result<(f64, f64)> {
        let y = self.predict(u)?;
        check_finite(u, d)?;
        let e = d - y;
        let denom = dot(&u.taps, &u.taps) + self.config.reg_epsilon;
        if denom == 0.0 {
            return Err(Error::SingularSystem);
        }
        let z = e / denom;
        let eta = self.config.step_eta;
        for (w, t) in self.weights.iter_mut().zip(&u.taps) {
            *w += eta * z * t;
        }
        Ok((y, e))
    }

    fn push_history(&mut self, u: &Regressor, d: f64) {
        self.history.push_back((u.clone(), d));
        if self.history.len() > self.config.window_k {
            self.history.pop_front();
        }
    }

    /// Errors d_n - w.u_n over the stored window, oldest first, using the
    /// current weights.
    fn window_errors(&self) -> Vec<f64> {
        self.history.iter().map(|(u, d)| d - dot(&self.weights, &u.taps)).collect()
    }

    fn apply_window_update(&mut self, z: &[f64]) {
        let eta = self.config.step_eta;
        for ((u, _), &z_n) in self.history.iter().zip(z) {
            for (w, t) in self.weights.iter_mut().zip(&u.taps) {
                *w += eta * z_n * t;
            }
        }
    }

    pub fn apa_step(&mut self, u: &Regressor, d: f64) -> Result<(f64, f64)> {
        let y = self.predict(u)?;
        check_finite(u, d)?;
        self.push_history(u, d);
        let errors = self.window_errors();
        let e = *errors.last().expect("window is never empty after a push");
        self.apply_window_update(&errors);
        Ok((y, e))
    }

    pub fn napa_step(&mut self, u: &Regressor, d: f64) -> Result<(f64, f64)> {
        let y = self.predict(u)?;
        check_finite(u, d)?;
        self.push_history(u, d);
        let errors = self.window_errors();
        let e = *errors.last().expect("window is never empty after a push");

        let k = self.history.len();
        let mut gram = vec![vec![0.0; k]; k];
        for (n, (u_n, _)) in self.history.iter().enumerate() {
            for (m, (u_m, _)) in self.history.iter().enumerate() {
                let value = dot(&u_n.taps, &u_m.taps);
                gram[n][m] = if n == m { value + self.config.reg_epsilon } else { value };
            }
        }
        let z = solve_dense(gram, errors)?;
        self.apply_window_update(&z);
        Ok((y, e))
    }
}

/// Drives the configured linear filter over a signal: regressors come from
/// the input, desired values from the paired signal.
pub fn run_linear(
    config: &LinearFilterConfig,
    input: &SignalBuffer,
    desired: &SignalBuffer,
) -> Result<FilterRun> {
    if input.is_empty() {
        return Err(Error::EmptyBuffer);
    }
    if input.len() != desired.len() {
        return Err(Error::LengthMismatch { expected: input.len(), got: desired.len() });
    }
    if input.sample_rate_hz != desired.sample_rate_hz {
        return Err(Error::SampleRateMismatch(input.sample_rate_hz, desired.sample_rate_hz));
    }

    let regressors = make_regressors(input, config.order_l)?;
    let mut filter = LinearFilter::new(config.clone())?;
    let mut outputs = Vec::with_capacity(input.len());
    let mut errors = Vec::with_capacity(input.len());
    for (reg, &d) in regressors.iter().zip(&desired.samples) {
        let (y, e) = filter.step(reg, d)?;
        outputs.push(y);
        errors.push(e);
    }

    Ok(FilterRun {
        outputs,
        errors,
        final_weights: Some(filter.weights.clone()),
        dictionary_size: None,
        coeff_l1_norm: None,
        kernel: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn config(algorithm: LinearAlgorithm, order_l: usize, eta: f64, eps: f64, k: usize) -> LinearFilterConfig {
        LinearFilterConfig { algorithm, order_l, step_eta: eta, reg_epsilon: eps, window_k: k }
    }

    fn reg(taps: &[f64]) -> Regressor {
        Regressor::new(taps.to_vec())
    }

    #[test]
    fn predict_is_the_inner_product() {
        let mut f = LinearFilter::new(config(LinearAlgorithm::Lms, 2, 0.5, 0.0, 1)).unwrap();
        assert_eq!(f.predict(&reg(&[3.0, 7.0])).unwrap(), 0.0);
        f.weights = vec![1.0, 0.0];
        assert_eq!(f.predict(&reg(&[3.0, 7.0])).unwrap(), 3.0);
        f.weights = vec![0.5, -0.5];
        assert_eq!(f.predict(&reg(&[2.0, 2.0])).unwrap(), 0.0);
        assert!(matches!(f.predict(&reg(&[1.0])), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn lms_step_hand_traces() {
        let mut f = LinearFilter::new(config(LinearAlgorithm::Lms, 2, 0.5, 0.0, 1)).unwrap();
        let (y, e) = f.lms_step(&reg(&[1.0, 0.0]), 1.0).unwrap();
        assert_eq!((y, e), (0.0, 1.0));
        assert_eq!(f.weights(), &[0.5, 0.0]);

        let mut f = LinearFilter::new(config(LinearAlgorithm::Lms, 1, 0.5, 0.0, 1)).unwrap();
        f.weights = vec![1.0];
        f.lms_step(&reg(&[1.0]), 1.0).unwrap();
        assert_eq!(f.weights(), &[1.0]);

        let mut f = LinearFilter::new(config(LinearAlgorithm::Lms, 1, 0.2, 0.0, 1)).unwrap();
        let (y, e) = f.lms_step(&reg(&[2.0]), 1.0).unwrap();
        assert_eq!((y, e), (0.0, 1.0));
        assert_eq!(f.weights(), &[0.4]);
    }

    #[test]
    fn lms_rejects_non_finite_input() {
        let mut f = LinearFilter::new(config(LinearAlgorithm::Lms, 1, 0.5, 0.0, 1)).unwrap();
        assert!(matches!(f.lms_step(&reg(&[f64::NAN]), 1.0), Err(Error::NonFiniteInput)));
        assert!(matches!(f.lms_step(&reg(&[1.0]), f64::INFINITY), Err(Error::NonFiniteInput)));
    }

    #[test]
    fn newton_lms_step_hand_traces() {
        let mut f = LinearFilter::new(config(LinearAlgorithm::NewtonLms, 1, 1.0, 1.0, 1)).unwrap();
        f.config.reg_epsilon = 0.0;
        let (y, e) = f.newton_lms_step(&reg(&[2.0]), 1.0).unwrap();
        assert_eq!((y, e), (0.0, 1.0));
        assert_eq!(f.weights(), &[0.5]);
        assert_eq!(f.predict(&reg(&[2.0])).unwrap(), 1.0);

        let mut f = LinearFilter::new(config(LinearAlgorithm::NewtonLms, 2, 1.0, 0.01, 1)).unwrap();
        f.weights = vec![0.3, -0.4];
        f.newton_lms_step(&reg(&[0.0, 0.0]), 1.0).unwrap();
        assert_eq!(f.weights(), &[0.3, -0.4]);

        let mut f = LinearFilter::new(config(LinearAlgorithm::NewtonLms, 2, 0.5, 1.0, 1)).unwrap();
        let (_, e) = f.newton_lms_step(&reg(&[1.0, 1.0]), 3.0).unwrap();
        assert_eq!(e, 3.0);
        assert_eq!(f.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn newton_lms_zero_denominator_is_an_error() {
        let mut f = LinearFilter::new(config(LinearAlgorithm::NewtonLms, 1, 1.0, 1.0, 1)).unwrap();
        f.config.reg_epsilon = 0.0;
        assert!(matches!(f.newton_lms_step(&reg(&[0.0]), 1.0), Err(Error::SingularSystem)));
    }

    #[test]
    fn apa_two_column_hand_trace() {
        let mut f = LinearFilter::new(config(LinearAlgorithm::Apa, 1, 0.1, 0.0, 2)).unwrap();
        f.apa_step(&reg(&[1.0]), 1.0).unwrap();
        assert_eq!(f.weights(), &[0.1]);

        let mut f = LinearFilter::new(config(LinearAlgorithm::Apa, 1, 0.1, 0.0, 2)).unwrap();
        f.history.push_back((reg(&[1.0]), 1.0));
        f.history.push_back((reg(&[2.0]), 2.0));
        let errors = f.window_errors();
        assert_eq!(errors, vec![1.0, 2.0]);
        f.apply_window_update(&errors);
        assert!((f.weights()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn napa_orthogonal_columns_hand_trace() {
        let mut f = LinearFilter::new(config(LinearAlgorithm::Napa, 2, 1.0, 1.0, 2)).unwrap();
        f.napa_step(&reg(&[1.0, 0.0]), 2.0).unwrap();
        let (_, e) = f.napa_step(&reg(&[0.0, 1.0]), 2.0).unwrap();
        assert_eq!(e, 2.0);

        let mut g = LinearFilter::new(config(LinearAlgorithm::Napa, 2, 1.0, 1.0, 2)).unwrap();
        g.history.push_back((reg(&[1.0, 0.0]), 2.0));
        g.history.push_back((reg(&[0.0, 1.0]), 2.0));
        let errors = g.window_errors();
        let gram = vec![vec![2.0, 0.0], vec![0.0, 2.0]];
        let z = crate::linalg::solve_dense(gram, errors).unwrap();
        assert_eq!(z, vec![1.0, 1.0]);
        g.apply_window_update(&z);
        assert_eq!(g.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn napa_exact_projection_at_unit_step() {
        let mut f = LinearFilter::new(config(LinearAlgorithm::Napa, 3, 1.0, 1e-12, 2)).unwrap();
        f.napa_step(&reg(&[1.0, 0.2, -0.4]), 0.7).unwrap();
        f.napa_step(&reg(&[-0.3, 0.9, 0.1]), -0.2).unwrap();
        for (u, d) in f.history.iter() {
            assert!((d - dot(&f.weights, &u.taps)).abs() < 1e-10);
        }
    }

    #[test]
    fn config_validation_rejects_bad_values() {
        assert!(LinearFilter::new(config(LinearAlgorithm::Lms, 0, 0.5, 0.0, 1)).is_err());
        assert!(LinearFilter::new(config(LinearAlgorithm::Lms, 1, -0.5, 0.0, 1)).is_err());
        assert!(LinearFilter::new(config(LinearAlgorithm::Lms, 1, f64::NAN, 0.0, 1)).is_err());
        assert!(LinearFilter::new(config(LinearAlgorithm::NewtonLms, 1, 0.5, 0.0, 1)).is_err());
        assert!(LinearFilter::new(config(LinearAlgorithm::Napa, 1, 0.5, 0.0, 2)).is_err());
        assert!(LinearFilter::new(config(LinearAlgorithm::Apa, 1, 0.5, 0.0, 0)).is_err());
        assert!(LinearFilter::new(config(LinearAlgorithm::Apa, 1, 0.5, 0.0, 2)).is_ok());
        assert!(LinearFilter::new(config(LinearAlgorithm::Lms, 1, 0.0, 0.0, 1)).is_ok());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for algo in [
            LinearAlgorithm::Lms,
            LinearAlgorithm::NewtonLms,
            LinearAlgorithm::Apa,
            LinearAlgorithm::Napa,
        ] {
            assert_eq!(algo.name().parse::<LinearAlgorithm>().unwrap(), algo);
        }
        assert!("rls".parse::<LinearAlgorithm>().is_err());
    }

    #[test]
    fn run_identifies_a_constant_signal() {
        let input = SignalBuffer::new(vec![0.5; 10_000], 8000).unwrap();
        let cfg = config(LinearAlgorithm::Lms, 1, 0.5, 0.0, 1);
        let run = run_linear(&cfg, &input, &input).unwrap();
        assert_eq!(run.outputs.len(), 10_000);
        assert!(run.errors.last().unwrap().abs() < 1e-3);
    }

    #[test]
    fn run_with_zero_step_keeps_initial_weights() {
        let input = SignalBuffer::new(vec![0.3, -0.8, 0.1], 8000).unwrap();
        let cfg = config(LinearAlgorithm::Lms, 2, 0.0, 0.0, 1);
        let run = run_linear(&cfg, &input, &input).unwrap();
        assert_eq!(run.outputs, vec![0.0, 0.0, 0.0]);
        assert_eq!(run.final_weights.unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn run_rejects_mismatched_signals() {
        let a = SignalBuffer::new(vec![0.1, 0.2], 8000).unwrap();
        let b = SignalBuffer::new(vec![0.1], 8000).unwrap();
        let c = SignalBuffer::new(vec![0.1, 0.2], 16000).unwrap();
        let empty = SignalBuffer::new(vec![], 8000).unwrap();
        let cfg = config(LinearAlgorithm::Lms, 1, 0.5, 0.0, 1);
        assert!(matches!(run_linear(&cfg, &a, &b), Err(Error::LengthMismatch { .. })));
        assert!(matches!(run_linear(&cfg, &a, &c), Err(Error::SampleRateMismatch(_, _))));
        assert!(matches!(run_linear(&cfg, &empty, &empty), Err(Error::EmptyBuffer)));
    }

    fn stream(len: usize) -> impl Strategy<Value = Vec<(Vec<f64>, f64)>> {
        (1usize..5).prop_flat_map(move |order| {
            prop::collection::vec(
                (prop::collection::vec(-1.0f64..=1.0, order), -1.0f64..=1.0),
                1..len,
            )
        })
    }

    proptest! {
        #[test]
        fn apa_with_unit_window_matches_lms_bitwise(pairs in stream(64)) {
            let order = pairs[0].0.len();
            let mut lms = LinearFilter::new(config(LinearAlgorithm::Lms, order, 0.2, 0.0, 1)).unwrap();
            let mut apa = LinearFilter::new(config(LinearAlgorithm::Apa, order, 0.2, 0.0, 1)).unwrap();
            for (taps, d) in &pairs {
                let u = Regressor::new(taps.clone());
                let (y_l, e_l) = lms.step(&u, *d).unwrap();
                let (y_a, e_a) = apa.step(&u, *d).unwrap();
                prop_assert_eq!(y_l.to_bits(), y_a.to_bits());
                prop_assert_eq!(e_l.to_bits(), e_a.to_bits());
                for (wl, wa) in lms.weights().iter().zip(apa.weights()) {
                    prop_assert_eq!(wl.to_bits(), wa.to_bits());
                }
            }
        }

        #[test]
        fn napa_with_unit_window_matches_newton_lms_bitwise(pairs in stream(64)) {
            let order = pairs[0].0.len();
            let mut newton =
                LinearFilter::new(config(LinearAlgorithm::NewtonLms, order, 0.2, 1e-3, 1)).unwrap();
            let mut napa = LinearFilter::new(config(LinearAlgorithm::Napa, order, 0.2, 1e-3, 1)).unwrap();
            for (taps, d) in &pairs {
                let u = Regressor::new(taps.clone());
                let (y_n, e_n) = newton.step(&u, *d).unwrap();
                let (y_p, e_p) = napa.step(&u, *d).unwrap();
                prop_assert_eq!(y_n.to_bits(), y_p.to_bits());
                prop_assert_eq!(e_n.to_bits(), e_p.to_bits());
                for (wn, wp) in newton.weights().iter().zip(napa.weights()) {
                    prop_assert_eq!(wn.to_bits(), wp.to_bits());
                }
            }
        }
    }
}
