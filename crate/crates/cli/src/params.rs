//! Resolved hyperparameters shared by all subcommands, and dispatch over
//! the six algorithms.

use std::str::FromStr;

use kaf_core::{
    run_kernel, run_linear, Error, FilterRun, KernelAlgorithm, KernelFilterConfig, KernelSpec,
    LinearAlgorithm, LinearFilterConfig, Result, SignalBuffer,
};

/// Any of the six algorithms the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnyAlgorithm {
    Linear(LinearAlgorithm),
    Kernel(KernelAlgorithm),
}

impl AnyAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Linear(a) => a.name(),
            Self::Kernel(a) => a.name(),
        }
    }

    pub fn is_kernel(&self) -> bool {
        matches!(self, Self::Kernel(_))
    }
}

impl FromStr for AnyAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(linear) = s.parse::<LinearAlgorithm>() {
            return Ok(Self::Linear(linear));
        }
        if let Ok(kernel) = s.parse::<KernelAlgorithm>() {
            return Ok(Self::Kernel(kernel));
        }
        Err(Error::InvalidArgument(format!(
            "unknown algorithm '{s}' (expected lms, newton-lms, apa, napa, kapa, or nkapa)"
        )))
    }
}

/// Fully resolved hyperparameters after merging defaults, config file, and
/// flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub order_l: usize,
    pub step_eta: f64,
    pub reg_epsilon: f64,
    pub window_k: usize,
    pub kernel: KernelSpec,
    pub dict_cap: Option<usize>,
    pub curve_window: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            order_l: 10,
            step_eta: 0.2,
            reg_epsilon: 1e-3,
            window_k: 10,
            kernel: KernelSpec::Gaussian { width_a: 1.0 },
            dict_cap: None,
            curve_window: 500,
        }
    }
}

impl Params {
    pub fn linear_config(&self, algorithm: LinearAlgorithm) -> LinearFilterConfig {
        LinearFilterConfig {
            algorithm,
            order_l: self.order_l,
            step_eta: self.step_eta,
            reg_epsilon: self.reg_epsilon,
            window_k: self.window_k,
        }
    }

    pub fn kernel_config(&self, algorithm: KernelAlgorithm) -> KernelFilterConfig {
        KernelFilterConfig {
            algorithm,
            kernel: self.kernel,
            order_l: self.order_l,
            step_eta: self.step_eta,
            reg_epsilon: self.reg_epsilon,
            window_k: self.window_k,
            dict_cap: self.dict_cap,
        }
    }

    /// Key/value pairs describing one run, for report echoes.
    pub fn echo(&self, algorithm: AnyAlgorithm) -> Vec<(String, String)> {
        let mut echo = vec![
            ("eta".to_string(), self.step_eta.to_string()),
            ("eps".to_string(), self.reg_epsilon.to_string()),
            ("K".to_string(), self.window_k.to_string()),
            ("L".to_string(), self.order_l.to_string()),
        ];
        if algorithm.is_kernel() {
            echo.push(("kernel".to_string(), self.kernel.to_string()));
            let cap = match self.dict_cap {
                Some(cap) => cap.to_string(),
                None => "none".to_string(),
            };
            echo.push(("dict_cap".to_string(), cap));
        }
        echo.push(("curve_window".to_string(), self.curve_window.to_string()));
        echo
    }
}

/// Runs whichever filter family the algorithm belongs to.
pub fn run_any(
    algorithm: AnyAlgorithm,
    params: &Params,
    input: &SignalBuffer,
    desired: &SignalBuffer,
) -> Result<FilterRun> {
    match algorithm {
        AnyAlgorithm::Linear(a) => run_linear(&params.linear_config(a), input, desired),
        AnyAlgorithm::Kernel(a) => run_kernel(&params.kernel_config(a), input, desired),
    }
}
