//! Log-domain special functions: log-gamma, log-beta, log-factorial and the
//! log-gamma ratio used by every moment formula.
//!
//! `log_gamma` is assembled from three pieces so that it keeps full relative
//! accuracy everywhere on the positive axis, including near its zeros at 1
//! and 2:
//!
//! - on `[0.5, 2.5]` a Taylor series of `ln Γ(1 + z)` whose coefficients are
//!   `(-1)^k (ζ(k) - 1) / k`, with the `ln(1 + z)` part split off so the
//!   series converges like `(z / 2)^k`;
//! - on `[10, ∞)` the Stirling series with eight Bernoulli corrections;
//! - in between, the recurrence `Γ(x + 1) = x Γ(x)` back onto `[1.5, 2.5]`.

use std::fmt;
use std::ops::{Add, Div, Mul};
use std::sync::OnceLock;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Smallest argument handed to the Stirling series.
const STIRLING_MIN: f64 = 10.0;

/// B_2, B_4, ..., B_16.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

const SERIES_TERMS: usize = 40;

/// A nonnegative real stored as its natural logarithm.
///
/// Zero is represented by a log value of negative infinity. Products and
/// quotients of magnitudes are sums and differences of the stored logs.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogMagnitude {
    log_value: f64,
}

impl LogMagnitude {
    pub const ZERO: LogMagnitude = LogMagnitude {
        log_value: f64::NEG_INFINITY,
    };
    pub const ONE: LogMagnitude = LogMagnitude { log_value: 0.0 };

    pub fn from_log(log_value: f64) -> Self {
        debug_assert!(!log_value.is_nan(), "log magnitude must not be NaN");
        Self { log_value }
    }

    /// Wraps a nonnegative value. Negative or NaN inputs are rejected.
    pub fn from_value(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::Domain {
                function: "LogMagnitude::from_value",
                value,
                expected: "value >= 0",
            });
        }
        Ok(Self {
            log_value: value.ln(),
        })
    }

    pub fn ln(self) -> f64 {
        self.log_value
    }

    /// The linear value; underflows to 0 or overflows to infinity when the
    /// magnitude is not representable.
    pub fn value(self) -> f64 {
        self.log_value.exp()
    }

    pub fn is_zero(self) -> bool {
        self.log_value == f64::NEG_INFINITY
    }

    pub fn powf(self, exponent: f64) -> Self {
        Self {
            log_value: log_pow(self.log_value, exponent),
        }
    }
}

/// Sum of two magnitudes, computed with a max shift.
impl Add for LogMagnitude {
    type Output = LogMagnitude;

    fn add(self, other: Self) -> Self {
        let (hi, lo) = if self.log_value >= other.log_value {
            (self.log_value, other.log_value)
        } else {
            (other.log_value, self.log_value)
        };
        if hi == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log_value: hi + (lo - hi).exp().ln_1p(),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for LogMagnitude {
    type Output = LogMagnitude;

    fn mul(self, rhs: Self) -> Self {
        LogMagnitude::from_log(self.log_value + rhs.log_value)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for LogMagnitude {
    type Output = LogMagnitude;

    fn div(self, rhs: Self) -> Self {
        LogMagnitude::from_log(self.log_value - rhs.log_value)
    }
}

impl fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", self.log_value)
    }
}

/// `exponent * log_base` with the convention `x^0 = 1` for every `x`,
/// including zero.
#[inline]
pub(crate) fn log_pow(log_base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * log_base
    }
}

/// Coefficients `(-1)^k (ζ(k) - 1) / k` for k = 2, 3, ...
fn series_coefficients() -> &'static [f64; SERIES_TERMS] {
    static COEFFS: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut c = [0.0; SERIES_TERMS];
        for (i, slot) in c.iter_mut().enumerate() {
            let k = i + 2;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            *slot = sign * zeta_minus_one(k) / k as f64;
        }
        c
    })
}

/// ζ(s) - 1 for integer s >= 2 by Euler-Maclaurin summation.
fn zeta_minus_one(s: usize) -> f64 {
    const CUT: usize = 16;
    let sf = s as f64;
    let head: f64 = (2..CUT).rev().map(|k| (k as f64).powf(-sf)).sum();
    let n = CUT as f64;
    let mut tail = n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powf(-sf);
    // B_{2j} / (2j)! * s (s+1) ... (s+2j-2) * N^{-s-2j+1}
    let mut rising = sf;
    let mut factorial = 2.0;
    let mut power = n.powf(-sf - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        tail += b / factorial * rising * power;
        let j2 = 2.0 * (j as f64 + 1.0);
        rising *= (sf + j2 - 1.0) * (sf + j2);
        factorial *= (j2 + 1.0) * (j2 + 2.0);
        power /= n * n;
    }
    head + tail
}

/// Σ_{k>=2} (-1)^k (ζ(k) - 1) / k · z^k, for |z| <= 1/2.
fn small_series(z: f64) -> f64 {
    let c = series_coefficients();
    let mut acc = 0.0;
    for coeff in c.iter().rev() {
        acc = acc * z + coeff;
    }
    acc * z * z
}

/// The Stirling correction Σ B_{2j} / (2j (2j-1) x^{2j-1}).
fn stirling_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for (j, b) in BERNOULLI.iter().enumerate().rev() {
        let k = 2.0 * (j as f64 + 1.0);
        acc = acc * inv2 + b / (k * (k - 1.0));
    }
    acc * inv
}

fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        log_gamma_unchecked(x + 1.0) - x.ln()
    } else if x < 1.5 {
        let z = x - 1.0;
        -z.ln_1p() + z * (1.0 - EULER_GAMMA) + small_series(z)
    } else if x <= 2.5 {
        let z = x - 2.0;
        z * (1.0 - EULER_GAMMA) + small_series(z)
    } else if x < STIRLING_MIN {
        // Γ(x) = (x-1)(x-2)⋯(x-k) Γ(x-k) with x - k in (1.5, 2.5]
        let mut y = x;
        let mut product = 1.0;
        while y > 2.5 {
            y -= 1.0;
            product *= y;
        }
        log_gamma_unchecked(y) + product.ln()
    } else {
        log_gamma_stirling(x)
    }
}

fn log_gamma_stirling(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x)
}

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::Domain {
            function: "log_gamma",
            value: x,
            expected: "finite x > 0",
        });
    }
    Ok(log_gamma_unchecked(x))
}

/// `ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b)`.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    for v in [a, b] {
        if !(v > 0.0) || v.is_infinite() {
            return Err(Error::Domain {
                function: "log_beta",
                value: v,
                expected: "finite a > 0 and b > 0",
            });
        }
    }
    // Order the operands so the result does not depend on argument order.
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Ok(log_gamma_unchecked(lo) + log_gamma_unchecked(hi) - log_gamma_unchecked(lo + hi))
}

/// `ln(k!)`. Exact integer products are used up to 20!.
pub fn log_factorial(k: u64) -> f64 {
    if k <= 20 {
        let f: u64 = (2..=k).product();
        (f as f64).ln()
    } else {
        log_gamma_unchecked(k as f64 + 1.0)
    }
}

/// `ln Γ(x + a) - ln Γ(x)` without forming either log-gamma value.
///
/// Requires `x > 0` and `x + a > 0`; `a` may be negative or fractional. The
/// absolute error stays near machine epsilon even when both log-gamma values
/// are large, which is what moment ratios of large counts need.
pub fn log_gamma_ratio(x: f64, a: f64) -> Result<f64> {
    if !(x > 0.0) || !(x + a > 0.0) || !x.is_finite() || !a.is_finite() {
        return Err(Error::Domain {
            function: "log_gamma_ratio",
            value: if x > 0.0 { x + a } else { x },
            expected: "x > 0 and x + a > 0",
        });
    }
    Ok(log_gamma_ratio_unchecked(x, a))
}

fn log_gamma_ratio_unchecked(x: f64, a: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if a < 0.0 {
        return -log_gamma_ratio_unchecked(x + a, -a);
    }
    if x >= STIRLING_MIN {
        return (x - 0.5) * (a / x).ln_1p() + a * (x + a).ln() - a
            + (stirling_correction(x + a) - stirling_correction(x));
    }
    // Γ(x + a) / Γ(x) = [Γ(y + a) / Γ(y)] · Π (x + j) / (x + a + j), y = x + s
    let mut y = x;
    let mut correction = 0.0;
    while y < STIRLING_MIN {
        correction += (a / y).ln_1p();
        y += 1.0;
    }
    log_gamma_ratio_unchecked(y, a) - correction
}
