//! Python bindings: the adaptive filters, the whole-signal drivers, and the
//! metrics, exposed as a `kaf` extension module.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use kaf_core::kernels::KernelSpec;
use kaf_core::signal_io::Regressor;
use kaf_core::{
    run_kernel, run_linear, Error, KernelAlgorithm, KernelFilter, KernelFilterConfig,
    LinearAlgorithm, LinearFilter, LinearFilterConfig, SignalBuffer, Snr,
};

fn py_err(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyIOError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn kernel_spec(kernel: &str, a: f64, p: u32) -> PyResult<KernelSpec> {
    match kernel {
        "gaussian" => KernelSpec::gaussian(a).map_err(py_err),
        "polynomial" => KernelSpec::polynomial(p).map_err(py_err),
        "linear" => Ok(KernelSpec::Linear),
        other => Err(PyValueError::new_err(format!(
            "unknown kernel '{other}' (expected gaussian, polynomial, or linear)"
        ))),
    }
}

fn buffer(samples: Vec<f64>, sample_rate_hz: u32) -> PyResult<SignalBuffer> {
    SignalBuffer::new(samples, sample_rate_hz).map_err(py_err)
}

fn snr_to_float(snr: Snr) -> f64 {
    match snr {
        Snr::Db(v) => v,
        Snr::Infinite => f64::INFINITY,
    }
}

/// Result of driving one filter over a whole signal.
#[pyclass]
pub struct RunResult {
    #[pyo3(get)]
    pub outputs: Vec<f64>,
    #[pyo3(get)]
    pub errors: Vec<f64>,
    #[pyo3(get)]
    pub final_weights: Option<Vec<f64>>,
    #[pyo3(get)]
    pub dictionary_size: Option<usize>,
}

/// A sample-by-sample linear adaptive filter: lms, newton-lms, apa, or napa.
#[pyclass(name = "LinearFilter")]
pub struct PyLinearFilter {
    inner: LinearFilter,
}

#[pymethods]
impl PyLinearFilter {
    #[new]
    #[pyo3(signature = (algorithm, *, order_l=10, eta=0.2, eps=1e-3, window_k=10))]
    fn new(algorithm: &str, order_l: usize, eta: f64, eps: f64, window_k: usize) -> PyResult<Self> {
        let algorithm: LinearAlgorithm = algorithm.parse().map_err(py_err)?;
        let config = LinearFilterConfig {
            algorithm,
            order_l,
            step_eta: eta,
            reg_epsilon: eps,
            window_k,
        };
        LinearFilter::new(config).map(|inner| Self { inner }).map_err(py_err)
    }

    /// One adaptation step; returns (prediction, error) from the pre-update
    /// weights.
    fn step(&mut self, taps: Vec<f64>, desired: f64) -> PyResult<(f64, f64)> {
        self.inner.step(&Regressor::new(taps), desired).map_err(py_err)
    }

    /// Prediction for one regressor without adapting.
    fn predict(&self, taps: Vec<f64>) -> PyResult<f64> {
        self.inner.predict(&Regressor::new(taps)).map_err(py_err)
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }
}

/// A sample-by-sample kernel adaptive filter: kapa or nkapa.
#[pyclass(name = "KernelFilter")]
pub struct PyKernelFilter {
    inner: KernelFilter,
}

#[pymethods]
impl PyKernelFilter {
    #[new]
    #[pyo3(signature = (algorithm, *, kernel="gaussian", a=1.0, p=2, order_l=10, eta=0.2, eps=1e-3, window_k=10, dict_cap=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        algorithm: &str,
        kernel: &str,
        a: f64,
        p: u32,
        order_l: usize,
        eta: f64,
        eps: f64,
        window_k: usize,
        dict_cap: Option<usize>,
    ) -> PyResult<Self> {
        let algorithm: KernelAlgorithm = algorithm.parse().map_err(py_err)?;
        let config = KernelFilterConfig {
            algorithm,
            kernel: kernel_spec(kernel, a, p)?,
            order_l,
            step_eta: eta,
            reg_epsilon: eps,
            window_k,
            dict_cap,
        };
        KernelFilter::new(config).map(|inner| Self { inner }).map_err(py_err)
    }

    /// One adaptation step; returns (prediction, error) from the pre-update
    /// network.
    fn step(&mut self, taps: Vec<f64>, desired: f64) -> PyResult<(f64, f64)> {
        self.inner.step(&Regressor::new(taps), desired).map_err(py_err)
    }

    /// Prediction for one regressor without adapting.
    fn predict(&self, taps: Vec<f64>) -> PyResult<f64> {
        self.inner.predict(&Regressor::new(taps)).map_err(py_err)
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn dictionary_size(&self) -> usize {
        self.inner.dictionary_size()
    }
}

/// Drives one algorithm over a whole signal pair, supervised: regressors
/// come from `input`, the desired sample is `desired`.
#[pyfunction]
#[pyo3(signature = (algorithm, input, desired, *, sample_rate_hz=8000, eta=0.2, eps=1e-3, order_l=10, window_k=10, kernel="gaussian", a=1.0, p=2, dict_cap=None))]
#[allow(clippy::too_many_arguments)]
fn run(
    algorithm: &str,
    input: Vec<f64>,
    desired: Vec<f64>,
    sample_rate_hz: u32,
    eta: f64,
    eps: f64,
    order_l: usize,
    window_k: usize,
    kernel: &str,
    a: f64,
    p: u32,
    dict_cap: Option<usize>,
) -> PyResult<RunResult> {
    let input = buffer(input, sample_rate_hz)?;
    let desired = buffer(desired, sample_rate_hz)?;
    let result = if let Ok(linear) = algorithm.parse::<LinearAlgorithm>() {
        let config = LinearFilterConfig {
            algorithm: linear,
            order_l,
            step_eta: eta,
            reg_epsilon: eps,
            window_k,
        };
        run_linear(&config, &input, &desired).map_err(py_err)?
    } else if let Ok(kernel_algo) = algorithm.parse::<KernelAlgorithm>() {
        let config = KernelFilterConfig {
            algorithm: kernel_algo,
            kernel: kernel_spec(kernel, a, p)?,
            order_l,
            step_eta: eta,
            reg_epsilon: eps,
            window_k,
            dict_cap,
        };
        run_kernel(&config, &input, &desired).map_err(py_err)?
    } else {
        return Err(PyValueError::new_err(format!(
            "unknown algorithm '{algorithm}' (expected lms, newton-lms, apa, napa, kapa, or nkapa)"
        )));
    };
    Ok(RunResult {
        outputs: result.outputs,
        errors: result.errors,
        final_weights: result.final_weights,
        dictionary_size: result.dictionary_size,
    })
}

/// Scales `noise` so the clean-to-noise power ratio hits `snr_db`, then adds
/// it to `clean`; returns (mixture, applied noise gain).
#[pyfunction]
fn mix_at_snr(clean: Vec<f64>, noise: Vec<f64>, snr_db: f64) -> PyResult<(Vec<f64>, f64)> {
    let clean = buffer(clean, 8000)?;
    let noise = buffer(noise, 8000)?;
    let (mix, gain) = kaf_core::mix_at_snr(&clean, &noise, snr_db).map_err(py_err)?;
    Ok((mix.samples, gain))
}

/// Output SNR in dB of `estimate` against `clean`; infinity for a perfect
/// estimate.
#[pyfunction]
fn output_snr_db(clean: Vec<f64>, estimate: Vec<f64>) -> PyResult<f64> {
    let clean = buffer(clean, 8000)?;
    let estimate = buffer(estimate, 8000)?;
    kaf_core::output_snr_db(&clean, &estimate).map(snr_to_float).map_err(py_err)
}

/// Mean squared error between two sequences, with `dof` subtracted from the
/// denominator.
#[pyfunction]
#[pyo3(signature = (estimates, truths, dof=0))]
fn mse(estimates: Vec<f64>, truths: Vec<f64>, dof: usize) -> PyResult<f64> {
    kaf_core::mse(&estimates, &truths, dof).map_err(py_err)
}

/// Windowed MSE of an error sequence as (index, mse) pairs.
#[pyfunction]
#[pyo3(signature = (errors, window=500))]
fn learning_curve(errors: Vec<f64>, window: usize) -> PyResult<Vec<(usize, f64)>> {
    kaf_core::learning_curve(&errors, window).map_err(py_err)
}

/// Reads a mono PCM WAV file; returns (samples, sample_rate_hz).
#[pyfunction]
fn read_wav(path: std::path::PathBuf) -> PyResult<(Vec<f64>, u32)> {
    let buf = kaf_core::read_wav(&path).map_err(py_err)?;
    Ok((buf.samples, buf.sample_rate_hz))
}

/// Writes samples as a 16-bit mono PCM WAV file.
#[pyfunction]
fn write_wav(path: std::path::PathBuf, samples: Vec<f64>, sample_rate_hz: u32) -> PyResult<()> {
    let buf = buffer(samples, sample_rate_hz)?;
    kaf_core::write_wav(&path, &buf).map_err(py_err)
}

#[pymodule]
fn kaf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLinearFilter>()?;
    m.add_class::<PyKernelFilter>()?;
    m.add_class::<RunResult>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(mix_at_snr, m)?)?;
    m.add_function(wrap_pyfunction!(output_snr_db, m)?)?;
    m.add_function(wrap_pyfunction!(mse, m)?)?;
    m.add_function(wrap_pyfunction!(learning_curve, m)?)?;
    m.add_function(wrap_pyfunction!(read_wav, m)?)?;
    m.add_function(wrap_pyfunction!(write_wav, m)?)?;
    Ok(())
}
