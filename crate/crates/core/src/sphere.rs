//! The change of variables between the angle hypercube `[0, π/2]^{n-1}` and
//! the probability simplex.
//!
//! With unit-radius polar coordinates `x_1 = cos θ_1`,
//! `x_i = sin θ_1 ⋯ sin θ_{i-1} cos θ_i` and `x_n = sin θ_1 ⋯ sin θ_{n-1}`,
//! the squares `p_i = x_i²` sum to one. Since `p_i` only depends on
//! `θ_1..θ_i`, the Jacobian matrix `∂p_i/∂θ_j` (i, j < n) is lower
//! triangular and its determinant is the product of the diagonal:
//!
//! ```text
//! J = Π_i 2 sin θ_i cos θ_i Π_{j<i} sin² θ_j
//!   = Π_i 2 cos θ_i sin^{2(n-1-i)+1} θ_i
//! ```
//!
//! Multiplying `Π p_i^{m_i}` by `J` separates into one factor per angle,
//! `K_j = 2 cos^{2(m_j+1)-1} θ_j sin^{2 Σ_{l>j} (1+m_l) - 1} θ_j`.

use std::f64::consts::{FRAC_PI_2, LN_2};

use crate::error::{Error, Result};
use crate::special::{log_pow, LogMagnitude};

/// Tolerance on `Σ p_i = 1` accepted by [`SimplexPoint::new`].
pub const SIMPLEX_SUM_TOLERANCE: f64 = 1e-12;

/// `(sin θ, cos θ)`, exact at the two ends of `[0, π/2]`.
#[inline]
pub(crate) fn sin_cos(theta: f64) -> (f64, f64) {
    if theta == 0.0 {
        (0.0, 1.0)
    } else if theta == FRAC_PI_2 {
        (1.0, 0.0)
    } else {
        theta.sin_cos()
    }
}

/// The `n - 1` angles parametrizing a point of the `n`-bin simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleVector {
    theta: Vec<f64>,
}

impl AngleVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidInput(
                "an angle vector needs at least one angle (n >= 2 bins)".into(),
            ));
        }
        if let Some(bad) = theta.iter().find(|t| !(0.0..=FRAC_PI_2).contains(*t)) {
            return Err(Error::Domain {
                function: "AngleVector::new",
                value: *bad,
                expected: "0 <= theta <= pi/2",
            });
        }
        Ok(Self { theta })
    }

    /// Number of bins, one more than the number of angles.
    pub fn bins(&self) -> usize {
        self.theta.len() + 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.theta
    }
}

/// A probability vector: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    p: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a simplex point needs at least 2 bins, got {}",
                p.len()
            )));
        }
        if let Some(bad) = p.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Domain {
                function: "SimplexPoint::new",
                value: *bad,
                expected: "finite p_i >= 0",
            });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "simplex point sums to {sum}, expected 1"
            )));
        }
        Ok(Self { p })
    }

    pub fn bins(&self) -> usize {
        self.p.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.p
    }
}

/// Exponents `m_i > -1` of the power product `Π p_i^{m_i}`, usually the
/// observed bin counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentVector {
    m: Vec<f64>,
}

impl ExponentVector {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        if m.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 bins, got {}",
                m.len()
            )));
        }
        if let Some(bad) = m.iter().find(|v| !(v.is_finite() && **v > -1.0)) {
            return Err(Error::Domain {
                function: "ExponentVector::new",
                value: *bad,
                expected: "finite m_i > -1",
            });
        }
        Ok(Self { m })
    }

    /// All-zero exponents: the constant integrand over `n` bins.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn bins(&self) -> usize {
        self.m.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.m
    }

    /// `N = Σ m_i`.
    pub fn total(&self) -> f64 {
        sorted_sum(self.m.iter().copied())
    }

    /// `Σ (m_i + 1)`, the argument of the normalizing gamma function.
    pub fn total_plus_bins(&self) -> f64 {
        sorted_sum(self.m.iter().map(|v| v + 1.0))
    }

    /// Exponents shifted elementwise by `shift`, re-validated.
    pub fn shifted(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.m.len() {
            return Err(Error::InvalidInput(format!(
                "shift has {} entries, exponents have {}",
                shift.len(),
                self.m.len()
            )));
        }
        Self::new(self.m.iter().zip(shift).map(|(a, b)| a + b).collect())
    }
}

/// Sum in ascending order, so the result does not depend on how the bins
/// are permuted.
pub(crate) fn sorted_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_unstable_by(f64::total_cmp);
    v.into_iter().sum()
}

/// Writes `p_i` and `ln p_i` for the given angles. Both slices have length
/// `theta.len() + 1`.
pub(crate) fn fill_simplex(theta: &[f64], p: &mut [f64], log_p: &mut [f64]) {
    debug_assert_eq!(p.len(), theta.len() + 1);
    debug_assert_eq!(log_p.len(), theta.len() + 1);
    let mut prefix = 1.0;
    let mut log_prefix = 0.0;
    for (i, &t) in theta.iter().enumerate() {
        let (s, c) = sin_cos(t);
        p[i] = prefix * c * c;
        log_p[i] = log_prefix + 2.0 * c.ln();
        prefix *= s * s;
        log_prefix += 2.0 * s.ln();
    }
    let last = theta.len();
    p[last] = prefix;
    log_p[last] = log_prefix;
}

/// `ln J` for raw angles; `-inf` where the map is degenerate.
pub(crate) fn log_jacobian_raw(theta: &[f64]) -> f64 {
    let n = theta.len() + 1;
    theta
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let (s, c) = sin_cos(t);
            // 0-based i: sin power is 2(n - 2 - i) + 1
            let sin_power = (2 * (n - 2 - i) + 1) as f64;
            LN_2 + c.ln() + sin_power * s.ln()
        })
        .sum()
}

/// `p_1 = cos² θ_1`, `p_i = (Π_{j<i} sin² θ_j) cos² θ_i`, `p_n = Π sin² θ_j`.
pub fn angles_to_simplex(angles: &AngleVector) -> SimplexPoint {
    let n = angles.bins();
    let mut p = vec![0.0; n];
    let mut log_p = vec![0.0; n];
    fill_simplex(angles.as_slice(), &mut p, &mut log_p);
    SimplexPoint { p }
}

/// Inverse of [`angles_to_simplex`].
///
/// Uses `θ_i = atan2(√r_{i+1}, √p_i)` with `r_i = Σ_{j>=i} p_j` the
/// remaining mass, which equals `arccos √(p_i / r_i)`. Once the remaining
/// mass is exhausted every later angle is set to `π/2`.
pub fn simplex_to_angles(point: &SimplexPoint) -> AngleVector {
    let p = point.as_slice();
    let n = p.len();
    // tail[i] = p_i + ... + p_{n-1}
    let mut tail = vec![0.0; n + 1];
    for i in (0..n).rev() {
        tail[i] = tail[i + 1] + p[i];
    }
    let mut theta = Vec::with_capacity(n - 1);
    let mut exhausted = false;
    for i in 0..n - 1 {
        if exhausted || tail[i] <= 0.0 {
            exhausted = true;
            theta.push(FRAC_PI_2);
            continue;
        }
        let t = tail[i + 1].sqrt().atan2(p[i].sqrt());
        theta.push(t.clamp(0.0, FRAC_PI_2));
    }
    AngleVector { theta }
}

/// Log of the Jacobian determinant of `θ ↦ (p_1, …, p_{n-1})`.
pub fn log_jacobian(angles: &AngleVector) -> LogMagnitude {
    LogMagnitude::from_log(log_jacobian_raw(angles.as_slice()))
}

/// `ln K_j(θ_j)` for the angle index `j` in `0..n-1`, where
/// `K_j = 2 cos^{2(m_j+1)-1} θ_j sin^{2 Σ_{l>j} (1+m_l) - 1} θ_j`.
pub fn log_kernel(j: usize, exponents: &ExponentVector, theta_j: f64) -> Result<f64> {
    let n = exponents.bins();
    if j + 1 >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n - 1 });
    }
    if !(0.0..=FRAC_PI_2).contains(&theta_j) {
        return Err(Error::Domain {
            function: "log_kernel",
            value: theta_j,
            expected: "0 <= theta <= pi/2",
        });
    }
    let m = exponents.as_slice();
    let tail: f64 = m[j + 1..].iter().map(|v| 1.0 + v).sum();
    Ok(log_kernel_raw(m[j], tail, theta_j))
}

/// `ln K` given `m_j` and `Σ_{l>j} (1 + m_l)`.
#[inline]
pub(crate) fn log_kernel_raw(m_j: f64, tail: f64, theta: f64) -> f64 {
    let (s, c) = sin_cos(theta);
    LN_2 + log_pow(c.ln(), 2.0 * (m_j + 1.0) - 1.0) + log_pow(s.ln(), 2.0 * tail - 1.0)
}
