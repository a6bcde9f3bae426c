//! Closed-form posterior moments under a constant prior.
//!
//! With counts `m`, the posterior over the simplex is proportional to
//! `Π p_i^{m_i}` and its normalizer is
//!
//! ```text
//! I(m) = Π Γ(m_i + 1) / Γ(Σ (m_i + 1))
//! ```
//!
//! which for integer counts is `Π m_i! / (N + n - 1)!`. Every moment
//! `E[Π p_i^{a_i}]` is the ratio `I(m + a) / I(m)`, evaluated here as a sum
//! of log-gamma ratios so large counts neither overflow nor lose digits.
//!
//! The marginal of a single bin is `Beta(α, S - α)` with `α = m_i + 1` and
//! `S = Σ (m_j + 1)`; the per-bin helpers use those closed forms.

use crate::error::{Error, Result};
use crate::special::{log_gamma, log_gamma_ratio, LogMagnitude};
use crate::sphere::{sorted_sum, ExponentVector};

/// Per-bin moment orders `a_i` for `E[Π p_i^{a_i}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentIndex {
    a: Vec<f64>,
}

impl MomentIndex {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if let Some(bad) = a.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain {
                function: "MomentIndex::new",
                value: *bad,
                expected: "finite moment order",
            });
        }
        Ok(Self { a })
    }

    pub fn zeros(n: usize) -> Self {
        Self { a: vec![0.0; n] }
    }

    /// `order` in bin `i`, zero elsewhere.
    pub fn single(n: usize, i: usize, order: f64) -> Result<Self> {
        check_bin(i, n)?;
        let mut a = vec![0.0; n];
        a[i] = order;
        Self::new(a)
    }

    /// One unit of order per listed bin; repeated bins accumulate, so
    /// `[0, 0, 2]` is `E[p_0² p_2]`.
    pub fn from_bins(n: usize, bins: &[usize]) -> Result<Self> {
        let mut a = vec![0.0; n];
        for &i in bins {
            check_bin(i, n)?;
            a[i] += 1.0;
        }
        Ok(Self { a })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

fn check_bin(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    Ok(())
}

/// `ln I(m) = Σ ln Γ(m_i + 1) - ln Γ(Σ (m_i + 1))`.
pub fn log_integral(m: &ExponentVector) -> Result<LogMagnitude> {
    let mut acc = 0.0;
    for &v in m.as_slice() {
        acc += log_gamma(v + 1.0)?;
    }
    acc -= log_gamma(m.total_plus_bins())?;
    Ok(LogMagnitude::from_log(acc))
}

/// `ln [I(m + a) / I(m)]`.
pub fn log_moment(m: &ExponentVector, index: &MomentIndex) -> Result<f64> {
    let ms = m.as_slice();
    let a = index.as_slice();
    if a.len() != ms.len() {
        return Err(Error::InvalidInput(format!(
            "moment index has {} entries, counts have {}",
            a.len(),
            ms.len()
        )));
    }
    if let Some((mi, ai)) = ms.iter().zip(a).find(|(mi, ai)| *mi + *ai <= -1.0) {
        return Err(Error::Domain {
            function: "moment",
            value: mi + ai,
            expected: "m_i + a_i > -1",
        });
    }
    let mut acc = 0.0;
    for (&mi, &ai) in ms.iter().zip(a) {
        acc += log_gamma_ratio(mi + 1.0, ai)?;
    }
    let order: f64 = a.iter().sum();
    acc -= log_gamma_ratio(m.total_plus_bins(), order)?;
    Ok(acc)
}

/// `E[Π p_i^{a_i}] = I(m + a) / I(m)` under the posterior.
pub fn moment(m: &ExponentVector, index: &MomentIndex) -> Result<f64> {
    Ok(log_moment(m, index)?.exp())
}

/// `α = m_i + 1` and `β = Σ_{j≠i} (m_j + 1)` for the Beta marginal of bin `i`.
fn marginal(m: &ExponentVector, i: usize) -> Result<(f64, f64)> {
    let ms = m.as_slice();
    check_bin(i, ms.len())?;
    let alpha = ms[i] + 1.0;
    let beta = sorted_sum(
        ms.iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v + 1.0),
    );
    Ok((alpha, beta))
}

/// `⟨p_i⟩ = (m_i + 1) / (N + n)`.
pub fn mean(m: &ExponentVector, i: usize) -> Result<f64> {
    let (alpha, beta) = marginal(m, i)?;
    Ok(alpha / (alpha + beta))
}

/// `⟨p_i²⟩ = (m_i + 2)(m_i + 1) / ((N + n + 1)(N + n))`.
pub fn second_moment(m: &ExponentVector, i: usize) -> Result<f64> {
    let (alpha, beta) = marginal(m, i)?;
    let s = alpha + beta;
    Ok((alpha + 1.0) * alpha / ((s + 1.0) * s))
}

/// `⟨p_i²⟩ - ⟨p_i⟩² = (m_i + 1)(N + n - m_i - 1) / ((N + n)² (N + n + 1))`.
pub fn variance(m: &ExponentVector, i: usize) -> Result<f64> {
    let (alpha, beta) = marginal(m, i)?;
    let s = alpha + beta;
    Ok(alpha * beta / (s * s * (s + 1.0)))
}

pub fn std_dev(m: &ExponentVector, i: usize) -> Result<f64> {
    Ok(variance(m, i)?.sqrt())
}

/// Standardized third central moment of `p_i`.
///
/// Evaluated from the Beta marginal as
/// `2 (β - α) √(α + β + 1) / ((α + β + 2) √(αβ))`, which is what
/// `(⟨p³⟩ - 3⟨p²⟩⟨p⟩ + 2⟨p⟩³) / var^{3/2}` reduces to without the
/// cancellation of the raw-moment form.
pub fn skewness(m: &ExponentVector, i: usize) -> Result<f64> {
    let (alpha, beta) = marginal(m, i)?;
    let s = alpha + beta;
    Ok(2.0 * (beta - alpha) * (s + 1.0).sqrt() / ((s + 2.0) * (alpha * beta).sqrt()))
}

/// `Cov(p_i, p_j) = ⟨p_i p_j⟩ - ⟨p_i⟩⟨p_j⟩`; equals the variance when `i == j`.
pub fn covariance(m: &ExponentVector, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return variance(m, i);
    }
    let ms = m.as_slice();
    check_bin(i, ms.len())?;
    check_bin(j, ms.len())?;
    let s = m.total_plus_bins();
    Ok(-(ms[i] + 1.0) * (ms[j] + 1.0) / (s * s * (s + 1.0)))
}

/// Posterior summary of one bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinSummary {
    pub mean: f64,
    pub variance: f64,
    pub std_dev: f64,
    pub skewness: f64,
}

/// Mean, variance, standard deviation and skewness for every bin.
pub fn summarize(m: &ExponentVector) -> Vec<BinSummary> {
    (0..m.bins())
        .map(|i| {
            // Indices are in range by construction.
            let variance = variance(m, i).expect("bin index in range");
            BinSummary {
                mean: mean(m, i).expect("bin index in range"),
                variance,
                std_dev: variance.sqrt(),
                skewness: skewness(m, i).expect("bin index in range"),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[f64]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn log_integral_examples() {
        assert!(rel(log_integral(&ev(&[0.0, 0.0, 0.0])).unwrap().value(), 0.5) < 1e-15);
        assert!(rel(log_integral(&ev(&[1.0, 1.0, 1.0])).unwrap().value(), 1.0 / 120.0) < 1e-14);
        // Reference from 40-digit arithmetic.
        let l = log_integral(&ev(&[0.5, 0.0, 2.0, 1.5])).unwrap().ln();
        assert!((l - -7.668_113_547_667_795_053).abs() < 1e-14);
    }

    #[test]
    fn moment_examples() {
        let m = ev(&[2.0, 0.0, 1.0]);
        assert_eq!(moment(&m, &MomentIndex::zeros(3)).unwrap(), 1.0);
        let e1 = MomentIndex::single(3, 0, 1.0).unwrap();
        assert!(rel(moment(&m, &e1).unwrap(), 0.5) < 1e-15);
        // Friedman's n = 3 mean (m_1 + 1) / (N + 3)
        let m = ev(&[4.0, 7.0, 2.0]);
        assert!(rel(moment(&m, &e1).unwrap(), 5.0 / 16.0) < 1e-15);
    }

    #[test]
    fn moment_rejects_bad_index() {
        let m = ev(&[0.5, 0.0]);
        assert!(moment(&m, &MomentIndex::new(vec![-1.5, 0.0]).unwrap()).is_err());
        assert!(moment(&m, &MomentIndex::zeros(3)).is_err());
        assert!(MomentIndex::new(vec![f64::NAN]).is_err());
        assert!(MomentIndex::single(2, 2, 1.0).is_err());
        // Negative orders are fine while m_i + a_i > -1.
        let inv = moment(&m, &MomentIndex::new(vec![-1.0, 0.0]).unwrap()).unwrap();
        // E[1/p_1] for Beta(1.5, 1) is (α + β - 1) / (α - 1) = 3
        assert!(rel(inv, 3.0) < 1e-14);
    }

    #[test]
    fn multi_index_from_bins() {
        let idx = MomentIndex::from_bins(3, &[0, 0, 2]).unwrap();
        assert_eq!(idx.as_slice(), &[2.0, 0.0, 1.0]);
        assert!(MomentIndex::from_bins(3, &[3]).is_err());
    }

    #[test]
    fn mean_examples() {
        for n in 2..8 {
            let m = ExponentVector::zeros(n).unwrap();
            for i in 0..n {
                assert!(rel(mean(&m, i).unwrap(), 1.0 / n as f64) < 1e-15);
            }
        }
        assert_eq!(mean(&ev(&[2.0, 0.0, 1.0]), 0).unwrap(), 0.5);
        assert!(rel(mean(&ev(&[10.0, 0.0, 0.0, 0.0, 0.0]), 0).unwrap(), 11.0 / 15.0) < 1e-15);
        assert!(mean(&ev(&[1.0, 1.0]), 2).is_err());
    }

    #[test]
    fn second_moment_and_variance_examples() {
        let z = ev(&[0.0, 0.0, 0.0]);
        assert!(rel(second_moment(&z, 0).unwrap(), 1.0 / 6.0) < 1e-15);
        assert!(rel(variance(&z, 0).unwrap(), 1.0 / 18.0) < 1e-15);
        let m = ev(&[2.0, 0.0, 1.0]);
        assert!(rel(second_moment(&m, 0).unwrap(), 2.0 / 7.0) < 1e-15);
        assert!(rel(variance(&m, 0).unwrap(), 1.0 / 28.0) < 1e-15);
        let two = MomentIndex::single(3, 0, 2.0).unwrap();
        assert!(rel(moment(&m, &two).unwrap(), second_moment(&m, 0).unwrap()) <= 1e-14);
        let sym = ev(&[3.0, 3.0, 3.0, 3.0]);
        let v0 = variance(&sym, 0).unwrap();
        for i in 1..4 {
            assert_eq!(variance(&sym, i).unwrap(), v0);
        }
        assert_eq!(std_dev(&m, 0).unwrap(), variance(&m, 0).unwrap().sqrt());
    }

    fn skewness_from_raw_moments(m: &ExponentVector, i: usize) -> f64 {
        let n = m.bins();
        let raw = |q: f64| moment(m, &MomentIndex::single(n, i, q).unwrap()).unwrap();
        let (p1, p2, p3) = (raw(1.0), raw(2.0), raw(3.0));
        let mu3 = p3 - 3.0 * p2 * p1 + 2.0 * p1 * p1 * p1;
        let var = p2 - p1 * p1;
        mu3 / var.powf(1.5)
    }

    #[test]
    fn skewness_examples() {
        assert_eq!(skewness(&ev(&[50.0, 50.0]), 0).unwrap(), 0.0);
        let a = skewness(&ev(&[0.0, 5.0]), 0).unwrap();
        let b = skewness(&ev(&[5.0, 0.0]), 0).unwrap();
        assert!(a > 0.0);
        assert!(rel(-b, a) < 1e-15);
        // (2, 0, 1), bin 0: Beta(3, 3) is symmetric.
        let m = ev(&[2.0, 0.0, 1.0]);
        assert!(skewness(&m, 0).unwrap().abs() < 1e-15);
        assert!(skewness_from_raw_moments(&m, 0).abs() < 1e-12);
    }

    #[test]
    fn skewness_matches_raw_moment_assembly() {
        for counts in [
            vec![0.0, 5.0],
            vec![2.0, 0.0, 1.0],
            vec![0.5, 3.0, 1.5, 0.0],
            vec![7.0, 1.0, 0.0, 2.0, 4.0],
        ] {
            let m = ev(&counts);
            for i in 0..m.bins() {
                let closed = skewness(&m, i).unwrap();
                let raw = skewness_from_raw_moments(&m, i);
                assert!((closed - raw).abs() < 1e-9, "{counts:?} bin {i}: {closed} vs {raw}");
            }
        }
    }

    #[test]
    fn covariance_matches_moment_route() {
        let m = ev(&[2.0, 0.5, 1.0, 4.0]);
        for i in 0..4 {
            for j in 0..4 {
                let pair = MomentIndex::from_bins(4, &[i, j]).unwrap();
                let via_moment =
                    moment(&m, &pair).unwrap() - mean(&m, i).unwrap() * mean(&m, j).unwrap();
                let closed = covariance(&m, i, j).unwrap();
                assert!((closed - via_moment).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn summary_covers_every_bin() {
        let m = ev(&[2.0, 0.0, 1.0]);
        let s = summarize(&m);
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].mean, 0.5);
        assert!(rel(s[1].mean, 1.0 / 6.0) < 1e-15);
        assert!(rel(s[2].mean, 1.0 / 3.0) < 1e-15);
        assert_eq!(s[0].std_dev, s[0].variance.sqrt());
    }

    #[test]
    fn large_counts_do_not_overflow() {
        let m = ev(&[1.0e5, 2.0e5, 3.0e5]);
        let idx = MomentIndex::single(3, 0, 1.0).unwrap();
        let expected = (1.0e5 + 1.0) / (6.0e5 + 3.0);
        assert!(rel(moment(&m, &idx).unwrap(), expected) < 1e-13);
        assert!(log_integral(&m).unwrap().ln().is_finite());
    }
}
