//! Positive-definite kernels over regressors and Gram matrix assembly.

use std::fmt;

use crate::error::{Error, Result};
use crate::signal_io::Regressor;

/// Kernel choice with its shape parameters. The polynomial offset is fixed
/// at 1, so `polynomial(p)` computes (u.v + 1)^p. The linear kernel is the
/// plain inner product, which makes the kernel filters coincide with their
/// linear counterparts and is used to cross-check the two implementations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Gaussian { width_a: f64 },
    Polynomial { degree_p: u32 },
    Linear,
}

impl KernelSpec {
    pub fn gaussian(width_a: f64) -> Result<Self> {
        let spec = Self::Gaussian { width_a };
        spec.validate()?;
        Ok(spec)
    }

    pub fn polynomial(degree_p: u32) -> Result<Self> {
        let spec = Self::Polynomial { degree_p };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Gaussian { width_a } => {
                if !width_a.is_finite() || width_a <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "gaussian width must be positive, got {width_a}"
                    )));
                }
            }
            Self::Polynomial { degree_p } => {
                if degree_p < 1 {
                    return Err(Error::InvalidConfig("polynomial degree must be at least 1".into()));
                }
            }
            Self::Linear => {}
        }
        Ok(())
    }

    /// Evaluates the kernel on two equal-length tap vectors.
    pub fn eval(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch { expected: u.len(), got: v.len() });
        }
        Ok(self.eval_unchecked(u, v))
    }

    pub(crate) fn eval_unchecked(&self, u: &[f64], v: &[f64]) -> f64 {
        match *self {
            Self::Gaussian { width_a } => {
                let dist_sq: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
                (-width_a * dist_sq).exp()
            }
            Self::Polynomial { degree_p } => {
                let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                (dot + 1.0).powi(degree_p as i32)
            }
            Self::Linear => u.iter().zip(v).map(|(a, b)| a * b).sum(),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Gaussian { width_a } => write!(f, "gaussian(a={width_a})"),
            Self::Polynomial { degree_p } => write!(f, "polynomial(p={degree_p})"),
            Self::Linear => write!(f, "linear"),
        }
    }
}

/// Evaluates a kernel on two regressors.
pub fn kernel_eval(spec: &KernelSpec, u: &Regressor, v: &Regressor) -> Result<f64> {
    spec.validate()?;
    spec.eval(&u.taps, &v.taps)
}

/// Builds the full Gram matrix for a set of regressors. Each off-diagonal
/// pair is evaluated once and mirrored, so the result is exactly symmetric.
pub fn gram(spec: &KernelSpec, regressors: &[Regressor]) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    if regressors.is_empty() {
        return Err(Error::InvalidArgument("empty regressor set".into()));
    }
    let n = regressors.len();
    let dim = regressors[0].len();
    for r in regressors {
        if r.len() != dim {
            return Err(Error::LengthMismatch { expected: dim, got: r.len() });
        }
    }

    let mut matrix = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let value = spec.eval_unchecked(&regressors[i].taps, &regressors[j].taps);
            matrix[i][j] = value;
            matrix[j][i] = value;
        }
    }
    Ok(matrix)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gaussian_matches_closed_form() {
        let spec = KernelSpec::gaussian(1.0).unwrap();
        let unit_apart = spec.eval(&[0.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!((unit_apart - (-1.0f64).exp()).abs() < 1e-15);
        assert!((unit_apart - 0.367_879_441_171_442_33).abs() < 1e-15);
        assert_eq!(spec.eval(&[0.3, -0.7], &[0.3, -0.7]).unwrap(), 1.0);
    }

    #[test]
    fn polynomial_matches_closed_form() {
        let spec = KernelSpec::polynomial(2).unwrap();
        let value = spec.eval(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(value, 9.0);
    }

    #[test]
    fn linear_is_the_inner_product() {
        let value = KernelSpec::Linear.eval(&[1.0, 2.0, 3.0], &[4.0, -5.0, 6.0]).unwrap();
        assert_eq!(value, 1.0 * 4.0 - 2.0 * 5.0 + 3.0 * 6.0);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(matches!(KernelSpec::gaussian(0.0), Err(Error::InvalidConfig(_))));
        assert!(matches!(KernelSpec::gaussian(-1.0), Err(Error::InvalidConfig(_))));
        assert!(matches!(KernelSpec::gaussian(f64::NAN), Err(Error::InvalidConfig(_))));
        assert!(matches!(KernelSpec::polynomial(0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn eval_rejects_length_mismatch() {
        let spec = KernelSpec::gaussian(1.0).unwrap();
        assert!(matches!(
            spec.eval(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn gram_rejects_empty_and_ragged_sets() {
        let spec = KernelSpec::gaussian(1.0).unwrap();
        assert!(matches!(gram(&spec, &[]), Err(Error::InvalidArgument(_))));
        let ragged =
            vec![Regressor::new(vec![1.0, 2.0]), Regressor::new(vec![1.0])];
        assert!(matches!(gram(&spec, &ragged), Err(Error::LengthMismatch { .. })));
    }

    fn regressor_set() -> impl Strategy<Value = Vec<Regressor>> {
        (1usize..6, 1usize..5).prop_flat_map(|(n, dim)| {
            prop::collection::vec(prop::collection::vec(-2.0f64..=2.0, dim), n)
                .prop_map(|rows| rows.into_iter().map(Regressor::new).collect())
        })
    }

    proptest! {
        #[test]
        fn gram_is_symmetric_with_unit_gaussian_diagonal(
            regs in regressor_set(),
            width in 0.1f64..4.0,
        ) {
            let spec = KernelSpec::gaussian(width).unwrap();
            let g = gram(&spec, &regs).unwrap();
            for i in 0..regs.len() {
                prop_assert_eq!(g[i][i], 1.0);
                for j in 0..regs.len() {
                    prop_assert_eq!(g[i][j], g[j][i]);
                }
            }
        }

        #[test]
        fn gaussian_values_stay_in_unit_interval(
            u in prop::collection::vec(-3.0f64..=3.0, 1..6),
            v in prop::collection::vec(-3.0f64..=3.0, 1..6),
            width in 0.1f64..4.0,
        ) {
            prop_assume!(u.len() == v.len());
            let spec = KernelSpec::gaussian(width).unwrap();
            let value = spec.eval(&u, &v).unwrap();
            prop_assert!(value > 0.0 && value <= 1.0);
        }
    }
}
