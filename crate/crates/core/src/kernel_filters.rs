//! Kernel adaptive filters: KAPA and normalized KAPA with a growing
//! dictionary of stored regressors and windowed coefficient updates.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::linalg::solve_dense;
use crate::run::FilterRun;
use crate::signal_io::{make_regressors, Regressor, SignalBuffer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelAlgorithm {
    Kapa,
    Nkapa,
}

impl KernelAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Kapa => "kapa",
            Self::Nkapa => "nkapa",
        }
    }
}

impl fmt::Display for KernelAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kapa" => Ok(Self::Kapa),
            "nkapa" => Ok(Self::Nkapa),
            other => Err(Error::InvalidArgument(format!("unknown kernel algorithm '{other}'"))),
        }
    }
}

/// Hyperparameters for a kernel filter. `dict_cap`, when set, bounds the
/// dictionary by evicting the oldest (already frozen) center; it must be at
/// least `window_k` so eviction never touches an active coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFilterConfig {
    pub algorithm: KernelAlgorithm,
    pub kernel: KernelSpec,
    pub order_l: usize,
    pub step_eta: f64,
    pub reg_epsilon: f64,
    pub window_k: usize,
    pub dict_cap: Option<usize>,
}

impl KernelFilterConfig {
    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
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
        if self.algorithm == KernelAlgorithm::Nkapa && self.reg_epsilon == 0.0 {
            return Err(Error::InvalidConfig("nkapa requires a positive regularization".into()));
        }
        if self.window_k == 0 {
            return Err(Error::InvalidConfig("window must be at least 1".into()));
        }
        if let Some(cap) = self.dict_cap {
            if cap < self.window_k {
                return Err(Error::InvalidConfig(format!(
                    "dictionary cap {cap} is smaller than the window {}",
                    self.window_k
                )));
            }
        }
        Ok(())
    }
}

/// A kernel adaptive filter: stored centers with one coefficient each, plus
/// the desired values for the centers still inside the update window.
#[derive(Debug, Clone)]
pub struct KernelFilter {
    config: KernelFilterConfig,
    centers: Vec<Regressor>,
    coeffs: Vec<f64>,
    window_desired: VecDeque<f64>,
    step_count: usize,
}

impl KernelFilter {
    pub fn new(config: KernelFilterConfig) -> Result<Self> {
        config.validate()?;
        let window = config.window_k;
        Ok(Self {
            config,
            centers: Vec::new(),
            coeffs: Vec::new(),
            window_desired: VecDeque::with_capacity(window + 1),
            step_count: 0,
        })
    }

    pub fn config(&self) -> &KernelFilterConfig {
        &self.config
    }

    pub fn dictionary_size(&self) -> usize {
        self.centers.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    /// Kernel expansion over the whole dictionary; zero when it is empty.
    pub fn predict(&self, u: &Regressor) -> Result<f64> {
        if u.len() != self.config.order_l {
            return Err(Error::LengthMismatch { expected: self.config.order_l, got: u.len() });
        }
        let kernel = &self.config.kernel;
        Ok(self
            .coeffs
            .iter()
            .zip(&self.centers)
            .map(|(a, c)| a * kernel.eval_unchecked(&u.taps, &c.taps))
            .sum())
    }

    pub fn step(&mut self, u: &Regressor, d: f64) -> Result<(f64, f64)> {
        match self.config.algorithm {
            KernelAlgorithm::Kapa => self.kapa_step(u, d),
            KernelAlgorithm::Nkapa => self.nkapa_step(u, d),
        }
    }

    fn check_input(&self, u: &Regressor, d: f64) -> Result<()> {
        if u.len() != self.config.order_l {
            return Err(Error::LengthMismatch { expected: self.config.order_l, got: u.len() });
        }
        if !d.is_finite() || u.taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(())
    }

    /// Appends u as a new center with coefficient zero, records d for the
    /// window, and returns the window extent (start index, length).
    fn admit(&mut self, u: &Regressor, d: f64) -> (usize, usize) {
        self.centers.push(u.clone());
        self.coeffs.push(0.0);
        self.window_desired.push_back(d);
        if self.window_desired.len() > self.config.window_k {
            self.window_desired.pop_front();
        }
        self.step_count += 1;
        let len = self.window_desired.len();
        (self.centers.len() - len, len)
    }

    /// Predictions for every windowed center from the coefficients as they
    /// stood before this step; the just-admitted center is excluded from the
    /// expansion (its coefficient is still zero).
    fn window_predictions(&self, first: usize, len: usize) -> Vec<f64> {
        let kernel = &self.config.kernel;
        let m = self.centers.len();
        let mut ys = Vec::with_capacity(len);
        for n in first..m {
            let u_n = &self.centers[n].taps;
            let mut acc = 0.0;
            for j in 0..m - 1 {
                acc += self.coeffs[j] * kernel.eval_unchecked(u_n, &self.centers[j].taps);
            }
            ys.push(acc);
        }
        ys
    }

    fn window_errors(&self, ys: &[f64]) -> Vec<f64> {
        self.window_desired.iter().zip(ys).map(|(d_n, y_n)| d_n - y_n).collect()
    }

    fn evict_over_cap(&mut self) {
        if let Some(cap) = self.config.dict_cap {
            while self.centers.len() > cap {
                self.centers.remove(0);
                self.coeffs.remove(0);
            }
        }
    }

    pub fn kapa_step(&mut self, u: &Regressor, d: f64) -> Result<(f64, f64)> {
        self.check_input(u, d)?;
        let (first, len) = self.admit(u, d);
        let ys = self.window_predictions(first, len);
        let es = self.window_errors(&ys);
        let (y, e) = (ys[len - 1], es[len - 1]);
        let eta = self.config.step_eta;
        for (i, n) in (first..first + len).enumerate() {
            self.coeffs[n] += eta * es[i];
        }
        self.evict_over_cap();
        Ok((y, e))
    }

    #[allow(clippy::needless_range_loop)]
    pub fn nkapa_step(&mut self, u: &Regressor, d: f64) -> Result<(f64, f64)> {
        self.check_input(u, d)?;
        let (first, len) = self.admit(u, d);
        let ys = self.window_predictions(first, len);
        let es = self.window_errors(&ys);
        let (y, e) = (ys[len - 1], es[len - 1]);

        let kernel = &self.config.kernel;
        let mut gram = vec![vec![0.0; len]; len];
        for i in 0..len {
            for j in 0..len {
                let value = kernel
                    .eval_unchecked(&self.centers[first + i].taps, &self.centers[first + j].taps);
                gram[i][j] = if i == j { value + self.config.reg_epsilon } else { value };
            }
        }
        let z = solve_dense(gram, es)?;
        let eta = self.config.step_eta;
        for (i, n) in (first..first + len).enumerate() {
            self.coeffs[n] += eta * z[i];
        }
        self.evict_over_cap();
        Ok((y, e))
    }
}

/// Drives the configured kernel filter over a signal, mirroring the linear
/// driver; the run records the final dictionary statistics.
pub fn run_kernel(
    config: &KernelFilterConfig,
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
    let mut filter = KernelFilter::new(config.clone())?;
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
        final_weights: None,
        dictionary_size: Some(filter.centers.len()),
        coeff_l1_norm: Some(filter.coeffs.iter().map(|a| a.abs()).sum()),
        kernel: Some(config.kernel),
    })
}
