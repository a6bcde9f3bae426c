//! Posterior moments of multinomial bin probabilities and numerical
//! integration over the probability simplex.
//!
//! Given bin counts `m_1 … m_n` and a constant prior, the posterior over the
//! bin probabilities is proportional to `Π p_i^{m_i}` on the simplex
//! `Σ p_i = 1`. [`moments`] evaluates its normalizer and moments in closed
//! form. [`quadrature`] integrates arbitrary nonnegative functions over the
//! simplex by mapping it onto the angle hypercube `[0, π/2]^{n-1}`
//! ([`sphere`]), which is how non-constant priors written in the
//! [`expr`] language are handled.

pub mod error;
pub mod expr;
pub mod moments;
pub mod quadrature;
pub mod special;
pub mod sphere;

pub use error::{Error, Result};
pub use expr::{EvalError, ParseError, PriorExpression};
pub use moments::{
    covariance, log_integral, log_moment, mean, moment, second_moment, skewness, std_dev,
    summarize, variance, BinSummary, MomentIndex,
};
pub use quadrature::{
    integrate_separable, integrate_simplex, nested_oracle, nested_oracle_power, IntegralEstimate,
    Integrand, PowerProduct, Product, QuadratureSpec, Scheme,
};
pub use special::{log_beta, log_factorial, log_gamma, log_gamma_ratio, LogMagnitude};
pub use sphere::{
    angles_to_simplex, log_jacobian, log_kernel, simplex_to_angles, AngleVector, ExponentVector,
    SimplexPoint,
};
