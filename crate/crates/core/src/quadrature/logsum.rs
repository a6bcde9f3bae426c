//! Log-space accumulation of nonnegative terms with a running max shift.

/// Running `Σ exp(l_k)` and `Σ exp(2 l_k)` stored relative to the largest
/// term seen so far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LogSum {
    shift: f64,
    sum: f64,
    sum_sq: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self {
            shift: f64::NEG_INFINITY,
            sum: 0.0,
            sum_sq: 0.0,
        }
    }
}

impl LogSum {
    pub(crate) fn push(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term > self.shift {
            let scale = (self.shift - log_term).exp();
            self.sum = self.sum * scale + 1.0;
            self.sum_sq = self.sum_sq * scale * scale + 1.0;
            self.shift = log_term;
        } else {
            let t = (log_term - self.shift).exp();
            self.sum += t;
            self.sum_sq += t * t;
        }
    }

    pub(crate) fn merge(self, other: Self) -> Self {
        if other.shift == f64::NEG_INFINITY {
            return self;
        }
        if self.shift == f64::NEG_INFINITY {
            return other;
        }
        let shift = self.shift.max(other.shift);
        let a = (self.shift - shift).exp();
        let b = (other.shift - shift).exp();
        Self {
            shift,
            sum: self.sum * a + other.sum * b,
            sum_sq: self.sum_sq * a * a + other.sum_sq * b * b,
        }
    }

    /// `ln Σ exp(l_k)`; `-inf` when empty.
    pub(crate) fn ln_sum(&self) -> f64 {
        if self.shift == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.shift + self.sum.ln()
        }
    }

    pub(crate) fn shift(&self) -> f64 {
        self.shift
    }

    /// `(Σ t, Σ t²)` with `t = exp(l_k - shift)`.
    pub(crate) fn scaled_sums(&self) -> (f64, f64) {
        (self.sum, self.sum_sq)
    }
}
