//! Numerical integration over the probability simplex.
//!
//! The spherical schemes integrate `f(p(θ)) J(θ)` over the angle hypercube
//! `[0, π/2]^{n-1}`: a tensor-product Gauss-Legendre grid, or Monte Carlo
//! with angles drawn uniformly. Uniform angles are *not* uniform on the
//! simplex; the Jacobian weight corrects for that, so samples must never be
//! reused as simplex draws.
//!
//! [`nested_oracle`] integrates directly in the raw `p` coordinates with
//! shrinking upper limits and shares no code with the spherical schemes.
//! Test suites use it as ground truth.
//!
//! All sums are accumulated in log space and reduced in a fixed order, so
//! results do not depend on thread scheduling.

mod gauss;
mod grid;
mod logsum;
mod monte_carlo;
mod nested;

pub use gauss::GaussLegendre;
pub use monte_carlo::MC_BLOCK_SIZE;
pub use nested::{nested_oracle, nested_oracle_power, NESTED_MAX_BINS};

use crate::error::{Error, Result};
use crate::special::{log_pow, LogMagnitude};
use crate::sphere::ExponentVector;

/// Default cap on integrand evaluations for one integration.
pub const DEFAULT_EVALUATION_BUDGET: u64 = 100_000_000;

/// Node count used when none is given.
pub const DEFAULT_GAUSS_NODES: usize = 32;

/// How to integrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Tensor-product Gauss-Legendre with `nodes_per_axis` nodes on each
    /// `[0, π/2]` angle axis.
    GaussGrid { nodes_per_axis: usize },
    /// Angles drawn uniformly on the hypercube from a seeded ChaCha8 stream.
    MonteCarlo { samples: u64, seed: u64 },
    /// Adaptive iterated Gauss-Kronrod integration in raw coordinates.
    NestedOracle { rel_tol: f64 },
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::GaussGrid { .. } => "gauss_grid",
            Scheme::MonteCarlo { .. } => "monte_carlo",
            Scheme::NestedOracle { .. } => "nested_oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Maximum number of integrand evaluations.
    pub budget: u64,
}

impl QuadratureSpec {
    pub fn gauss(nodes_per_axis: usize) -> Self {
        Self {
            scheme: Scheme::GaussGrid { nodes_per_axis },
            budget: DEFAULT_EVALUATION_BUDGET,
        }
    }

    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        Self {
            scheme: Scheme::MonteCarlo { samples, seed },
            budget: DEFAULT_EVALUATION_BUDGET,
        }
    }

    pub fn nested(rel_tol: f64) -> Self {
        Self {
            scheme: Scheme::NestedOracle { rel_tol },
            budget: DEFAULT_EVALUATION_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.scheme {
            Scheme::GaussGrid { nodes_per_axis } if nodes_per_axis < 2 => Err(
                Error::InvalidInput(format!("nodes_per_axis must be >= 2, got {nodes_per_axis}")),
            ),
            Scheme::MonteCarlo { samples: 0, .. } => {
                Err(Error::InvalidInput("samples must be >= 1".into()))
            }
            Scheme::NestedOracle { rel_tol } if !(rel_tol > 0.0 && rel_tol.is_finite()) => Err(
                Error::InvalidInput(format!("rel_tol must be positive, got {rel_tol}")),
            ),
            _ => Ok(()),
        }
    }
}

/// Result of a numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: LogMagnitude,
    /// One-sigma error for Monte Carlo; zero for deterministic schemes.
    pub std_error: f64,
    pub evaluations: u64,
}

/// A nonnegative function on the simplex.
///
/// Implementations must be pure; the integrators call them from several
/// threads at once.
pub trait Integrand: Sync {
    fn value(&self, p: &[f64]) -> Result<f64>;

    /// `ln f(p)`, given `p` and elementwise `ln p`. Override when the log is
    /// cheaper or more accurate than `ln(value(p))`.
    fn log_value(&self, p: &[f64], log_p: &[f64]) -> Result<f64> {
        let _ = log_p;
        checked_log(self.value(p)?, p)
    }
}

impl<F> Integrand for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn value(&self, p: &[f64]) -> Result<f64> {
        Ok(self(p))
    }
}

/// `ln v`, rejecting negative and non-finite values.
pub(crate) fn checked_log(v: f64, p: &[f64]) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFiniteIntegrand { point: p.to_vec() });
    }
    if v < 0.0 {
        return Err(Error::NegativeIntegrand {
            value: v,
            point: p.to_vec(),
        });
    }
    Ok(v.ln())
}

/// Rejects log values that cannot come from a finite nonnegative integrand.
pub(crate) fn check_log_value(l: f64, p: &[f64]) -> Result<f64> {
    if l.is_nan() || l == f64::INFINITY {
        return Err(Error::NonFiniteIntegrand { point: p.to_vec() });
    }
    Ok(l)
}

/// `Π p_i^{m_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerProduct {
    exponents: ExponentVector,
}

impl PowerProduct {
    pub fn new(exponents: ExponentVector) -> Self {
        Self { exponents }
    }

    pub fn exponents(&self) -> &ExponentVector {
        &self.exponents
    }
}

impl Integrand for PowerProduct {
    fn value(&self, p: &[f64]) -> Result<f64> {
        let log_p: Vec<f64> = p.iter().map(|v| v.ln()).collect();
        Ok(self.log_value(p, &log_p)?.exp())
    }

    fn log_value(&self, _p: &[f64], log_p: &[f64]) -> Result<f64> {
        Ok(self
            .exponents
            .as_slice()
            .iter()
            .zip(log_p)
            .map(|(m, lp)| log_pow(*lp, *m))
            .sum())
    }
}

/// Pointwise product of two integrands, e.g. a likelihood and a prior.
#[derive(Debug, Clone, PartialEq)]
pub struct Product<A, B> {
    pub first: A,
    pub second: B,
}

impl<A: Integrand, B: Integrand> Integrand for Product<A, B> {
    fn value(&self, p: &[f64]) -> Result<f64> {
        Ok(self.first.value(p)? * self.second.value(p)?)
    }

    fn log_value(&self, p: &[f64], log_p: &[f64]) -> Result<f64> {
        let a = check_log_value(self.first.log_value(p, log_p)?, p)?;
        if a == f64::NEG_INFINITY {
            // Still evaluate the second factor so its contract errors surface.
            check_log_value(self.second.log_value(p, log_p)?, p)?;
            return Ok(a);
        }
        let b = check_log_value(self.second.log_value(p, log_p)?, p)?;
        Ok(a + b)
    }
}

/// `∫_D f(p) dp_1 … dp_{n-1}` over the `n`-bin simplex.
pub fn integrate_simplex<F: Integrand + ?Sized>(
    n: usize,
    f: &F,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 bins, got {n}")));
    }
    spec.validate()?;
    match spec.scheme {
        Scheme::GaussGrid { nodes_per_axis } => {
            grid::integrate_grid(n, f, nodes_per_axis, spec.budget)
        }
        Scheme::MonteCarlo { samples, seed } => {
            monte_carlo::integrate_monte_carlo(n, f, samples, seed, spec.budget)
        }
        Scheme::NestedOracle { .. } => nested_oracle(n, f, spec),
    }
}

/// `I(m)` as a product of `n - 1` one-dimensional Gauss-Legendre integrals
/// of the separated kernels `K_j`.
pub fn integrate_separable(m: &ExponentVector, spec: &QuadratureSpec) -> Result<IntegralEstimate> {
    spec.validate()?;
    match spec.scheme {
        Scheme::GaussGrid { nodes_per_axis } => {
            grid::integrate_separable(m, nodes_per_axis, spec.budget)
        }
        other => Err(Error::UnsupportedScheme {
            scheme: other.name(),
            operation: "integrate_separable",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::gauss(1).validate().is_err());
        assert!(QuadratureSpec::gauss(2).validate().is_ok());
        assert!(QuadratureSpec::monte_carlo(0, 1).validate().is_err());
        assert!(QuadratureSpec::nested(0.0).validate().is_err());
        assert!(QuadratureSpec::nested(f64::NAN).validate().is_err());
        assert_eq!(QuadratureSpec::gauss(4).with_budget(7).budget, 7);
    }

    #[test]
    fn power_product_log_value() {
        let f = PowerProduct::new(ExponentVector::new(vec![1.0, 2.0, 0.0]).unwrap());
        let p = [0.5, 0.25, 0.25];
        assert!((f.value(&p).unwrap() - 0.5 * 0.0625).abs() < 1e-16);
        // p^0 is 1 even at p = 0.
        let p = [0.5, 0.5, 0.0];
        assert!((f.value(&p).unwrap() - 0.125).abs() < 1e-16);
    }

    #[test]
    fn closures_are_checked() {
        let neg = |_: &[f64]| -1.0;
        assert!(matches!(
            neg.log_value(&[0.5, 0.5], &[0.0, 0.0]),
            Err(Error::NegativeIntegrand { .. })
        ));
        let nan = |_: &[f64]| f64::NAN;
        assert!(matches!(
            nan.log_value(&[0.5, 0.5], &[0.0, 0.0]),
            Err(Error::NonFiniteIntegrand { .. })
        ));
    }

    #[test]
    fn separable_rejects_other_schemes() {
        let m = ExponentVector::zeros(3).unwrap();
        assert!(matches!(
            integrate_separable(&m, &QuadratureSpec::monte_carlo(10, 1)),
            Err(Error::UnsupportedScheme { .. })
        ));
    }

    #[test]
    fn simplex_needs_two_bins() {
        let one = |_: &[f64]| 1.0;
        assert!(integrate_simplex(1, &one, &QuadratureSpec::gauss(4)).is_err());
    }
}
