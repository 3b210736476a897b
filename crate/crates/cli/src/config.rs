//! Flat key=value configuration files and their merge with command-line
//! flags. Flags win over the file; the file wins over built-in defaults.

use std::fs;
use std::path::Path;

use kaf_core::{Error, KernelSpec, Result};

use crate::params::Params;

/// Optional settings from a config file or from flags. `None` means "not
/// given here". `dict_cap` uses a nested Option: the outer level is
/// presence, the inner level is the cap itself ("none" disables it).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub eta: Option<f64>,
    pub eps: Option<f64>,
    pub window_k: Option<usize>,
    pub order_l: Option<usize>,
    pub kernel: Option<String>,
    pub gaussian_a: Option<f64>,
    pub poly_p: Option<u32>,
    pub dict_cap: Option<Option<usize>>,
    pub curve_window: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub snr: Option<Vec<f64>>,
    pub algos: Option<Vec<String>>,
    pub nonlinear: Option<bool>,
    pub timing: Option<bool>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value '{value}' for key '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::InvalidConfig(format!("bad value '{other}' for key '{key}'"))),
    }
}

pub fn parse_dict_cap(value: &str) -> Result<Option<usize>> {
    match value {
        "none" | "off" => Ok(None),
        other => Ok(Some(parse_value("dict-cap", other)?)),
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value.split(',').map(|item| parse_value(key, item.trim())).collect()
}

impl Overrides {
    /// Parses `key = value` lines; '#' starts a comment, blank lines are
    /// skipped, unknown keys are rejected.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let mut over = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected key=value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "eta" => over.eta = Some(parse_value(key, value)?),
                "eps" => over.eps = Some(parse_value(key, value)?),
                "K" => over.window_k = Some(parse_value(key, value)?),
                "L" => over.order_l = Some(parse_value(key, value)?),
                "kernel" => over.kernel = Some(value.to_string()),
                "a" => over.gaussian_a = Some(parse_value(key, value)?),
                "p" => over.poly_p = Some(parse_value(key, value)?),
                "dict-cap" => over.dict_cap = Some(parse_dict_cap(value)?),
                "curve-window" => over.curve_window = Some(parse_value(key, value)?),
                "seed" => over.seed = Some(parse_value(key, value)?),
                "samples" => over.samples = Some(parse_value(key, value)?),
                "snr" => over.snr = Some(parse_list(key, value)?),
                "algos" => {
                    over.algos = Some(value.split(',').map(|s| s.trim().to_string()).collect())
                }
                "nonlinear" => over.nonlinear = Some(parse_bool(key, value)?),
                "timing" => over.timing = Some(parse_bool(key, value)?),
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(over)
    }

    /// Layers `self` on top of `base`: any field set here replaces the base.
    pub fn over(self, base: Self) -> Self {
        Self {
            eta: self.eta.or(base.eta),
            eps: self.eps.or(base.eps),
            window_k: self.window_k.or(base.window_k),
            order_l: self.order_l.or(base.order_l),
            kernel: self.kernel.or(base.kernel),
            gaussian_a: self.gaussian_a.or(base.gaussian_a),
            poly_p: self.poly_p.or(base.poly_p),
            dict_cap: self.dict_cap.or(base.dict_cap),
            curve_window: self.curve_window.or(base.curve_window),
            seed: self.seed.or(base.seed),
            samples: self.samples.or(base.samples),
            snr: self.snr.or(base.snr),
            algos: self.algos.or(base.algos),
            nonlinear: self.nonlinear.or(base.nonlinear),
            timing: self.timing.or(base.timing),
        }
    }

    /// Applies the hyperparameter fields to the defaults.
    pub fn resolve_params(&self) -> Result<Params> {
        let defaults = Params::default();
        let kernel = match self.kernel.as_deref() {
            None => match (self.gaussian_a, self.poly_p) {
                (None, Some(p)) => KernelSpec::polynomial(p)?,
                (a, _) => KernelSpec::gaussian(a.unwrap_or(1.0))?,
            },
            Some("gaussian") => KernelSpec::gaussian(self.gaussian_a.unwrap_or(1.0))?,
            Some("polynomial") => KernelSpec::polynomial(self.poly_p.unwrap_or(2))?,
            Some("linear") => KernelSpec::Linear,
            Some(other) => {
                return Err(Error::InvalidConfig(format!(
                    "unknown kernel '{other}' (expected gaussian, polynomial, or linear)"
                )))
            }
        };
        Ok(Params {
            order_l: self.order_l.unwrap_or(defaults.order_l),
            step_eta: self.eta.unwrap_or(defaults.step_eta),
            reg_epsilon: self.eps.unwrap_or(defaults.reg_epsilon),
            window_k: self.window_k.unwrap_or(defaults.window_k),
            kernel,
            dict_cap: self.dict_cap.unwrap_or(defaults.dict_cap),
            curve_window: self.curve_window.unwrap_or(defaults.curve_window),
        })
    }
}

/// Hyperparameter flags shared by the subcommands. Each maps to one
/// `Overrides` field; a --config file fills whatever the flags leave unset.
#[derive(Debug, Clone, clap::Args)]
pub struct CommonOpts {
    /// Step size
    #[arg(long)]
    pub eta: Option<f64>,

    /// Regularization epsilon
    #[arg(long)]
    pub eps: Option<f64>,

    /// Update window: most recent (regressor, desired) pairs per step
    #[arg(long = "K", value_name = "K")]
    pub window_k: Option<usize>,

    /// Filter order: taps per regressor
    #[arg(long = "L", value_name = "L")]
    pub order_l: Option<usize>,

    /// Kernel family: gaussian | polynomial | linear
    #[arg(long)]
    pub kernel: Option<String>,

    /// Gaussian kernel width
    #[arg(long)]
    pub a: Option<f64>,

    /// Polynomial kernel degree
    #[arg(long)]
    pub p: Option<u32>,

    /// Kernel dictionary cap ('none' disables eviction)
    #[arg(long = "dict-cap", value_name = "CAP")]
    pub dict_cap: Option<String>,

    /// Learning-curve window in samples
    #[arg(long = "curve-window")]
    pub curve_window: Option<usize>,

    /// Flat key=value config file; flags override its values
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
}

impl CommonOpts {
    /// Flag values layered over the config file, if one was given.
    pub fn merged(&self) -> Result<Overrides> {
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        let flags = Overrides {
            eta: self.eta,
            eps: self.eps,
            window_k: self.window_k,
            order_l: self.order_l,
            kernel: self.kernel.clone(),
            gaussian_a: self.a,
            poly_p: self.p,
            dict_cap: match &self.dict_cap {
                Some(raw) => Some(parse_dict_cap(raw)?),
                None => None,
            },
            curve_window: self.curve_window,
            ..Default::default()
        };
        Ok(flags.over(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(text: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kaf.conf");
        let mut file = fs::File::create(&path).unwrap();
        file.write_all(text.as_bytes()).unwrap();
        (dir, path)
    }

    #[test]
    fn parses_a_flat_config_file() {
        let (_dir, path) = write_config(
            "# benchmark defaults\neta = 0.1\nK=4\nkernel = polynomial\np = 3\nsnr = 0, 10\ndict-cap = none\nnonlinear = true\n",
        );
        let over = Overrides::from_file(&path).unwrap();
        assert_eq!(over.eta, Some(0.1));
        assert_eq!(over.window_k, Some(4));
        assert_eq!(over.snr, Some(vec![0.0, 10.0]));
        assert_eq!(over.dict_cap, Some(None));
        assert_eq!(over.nonlinear, Some(true));

        let params = over.resolve_params().unwrap();
        assert_eq!(params.step_eta, 0.1);
        assert_eq!(params.kernel, KernelSpec::Polynomial { degree_p: 3 });
        assert_eq!(params.order_l, 10);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let (_dir, path) = write_config("volume = 11\n");
        assert!(matches!(Overrides::from_file(&path), Err(Error::InvalidConfig(_))));
        let (_dir2, path2) = write_config("eta = loud\n");
        assert!(matches!(Overrides::from_file(&path2), Err(Error::InvalidConfig(_))));
        let (_dir3, path3) = write_config("just a line\n");
        assert!(matches!(Overrides::from_file(&path3), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn flags_layer_over_file_values() {
        let file = Overrides { eta: Some(0.1), order_l: Some(12), ..Default::default() };
        let flags = Overrides { eta: Some(0.3), ..Default::default() };
        let merged = flags.over(file);
        assert_eq!(merged.eta, Some(0.3));
        assert_eq!(merged.order_l, Some(12));
    }

    #[test]
    fn bare_width_flag_implies_a_gaussian_kernel() {
        let over = Overrides { gaussian_a: Some(2.5), ..Default::default() };
        let params = over.resolve_params().unwrap();
        assert_eq!(params.kernel, KernelSpec::Gaussian { width_a: 2.5 });

        let poly = Overrides { poly_p: Some(4), ..Default::default() };
        assert_eq!(
            poly.resolve_params().unwrap().kernel,
            KernelSpec::Polynomial { degree_p: 4 }
        );
    }
}
