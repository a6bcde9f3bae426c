//! Iterated adaptive integration in raw coordinates:
//!
//! ```text
//! ∫_0^1 dp_1 ∫_0^{1-p_1} dp_2 … ∫_0^{1-Σ p_j} dp_{n-1} f(p_1, …, p_{n-1}, 1 - Σ p_j)
//! ```
//!
//! Each level is a globally adaptive 7/15-point Gauss-Kronrod integration:
//! the panel with the largest error estimate is bisected until the summed
//! estimate meets the relative tolerance. Nodes and weights are tabulated
//! here so nothing is shared with the spherical schemes.

use std::cell::Cell;

use super::{check_log_value, Integrand, IntegralEstimate, PowerProduct, QuadratureSpec, Scheme};
use crate::error::{Error, Result};
use crate::special::LogMagnitude;
use crate::sphere::ExponentVector;

/// Largest bin count the oracle accepts.
pub const NESTED_MAX_BINS: usize = 5;

/// Panels one level may create before giving up.
const MAX_PANELS: usize = 4000;

// Kronrod abscissae (descending) and weights; every odd index is a Gauss node.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod_panel(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let dx = half * XGK[k];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

struct Budget {
    used: Cell<u64>,
    limit: u64,
}

impl Budget {
    fn charge(&self) -> Result<()> {
        let used = self.used.get() + 1;
        self.used.set(used);
        if used > self.limit {
            return Err(Error::NonConvergence { evaluations: used });
        }
        Ok(())
    }
}

fn adaptive(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    rel_tol: f64,
    budget: &Budget,
) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let mut panels = vec![kronrod_panel(f, a, b)?];
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= rel_tol * total.abs() {
            return Ok(total);
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if panels.len() + 2 > MAX_PANELS || !(a < mid && mid < b) {
            return Err(Error::NonConvergence {
                evaluations: budget.used.get(),
            });
        }
        panels.push(kronrod_panel(f, a, mid)?);
        panels.push(kronrod_panel(f, mid, b)?);
    }
}

struct Nested<'a, F: ?Sized> {
    n: usize,
    f: &'a F,
    rel_tol: f64,
    budget: Budget,
}

impl<F: Integrand + ?Sized> Nested<'_, F> {
    /// Integrates over `p[level]` in `[0, remaining]` with `p[..level]` fixed.
    fn level(&self, level: usize, p: &mut Vec<f64>, remaining: f64) -> Result<f64> {
        let last = level + 2 == self.n;
        let mut inner = |x: f64| -> Result<f64> {
            p[level] = x;
            let rest = (remaining - x).max(0.0);
            if last {
                p[level + 1] = rest;
                self.budget.charge()?;
                let log_p: Vec<f64> = p.iter().map(|v| v.ln()).collect();
                let l = check_log_value(self.f.log_value(p, &log_p)?, p)?;
                Ok(l.exp())
            } else {
                self.level(level + 1, p, rest)
            }
        };
        adaptive(&mut inner, 0.0, remaining, self.rel_tol, &self.budget)
    }
}

/// Ground-truth integral of `f` over the `n`-bin simplex, `2 <= n <= 5`.
pub fn nested_oracle<F: Integrand + ?Sized>(
    n: usize,
    f: &F,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    spec.validate()?;
    let rel_tol = match spec.scheme {
        Scheme::NestedOracle { rel_tol } => rel_tol,
        other => {
            return Err(Error::UnsupportedScheme {
                scheme: other.name(),
                operation: "nested_oracle",
            })
        }
    };
    if !(2..=NESTED_MAX_BINS).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "nested oracle supports 2..={NESTED_MAX_BINS} bins, got {n}"
        )));
    }
    let nested = Nested {
        n,
        f,
        rel_tol,
        budget: Budget {
            used: Cell::new(0),
            limit: spec.budget,
        },
    };
    let mut p = vec![0.0; n];
    let value = nested.level(0, &mut p, 1.0)?;
    Ok(IntegralEstimate {
        value: LogMagnitude::from_value(value.max(0.0))?,
        std_error: 0.0,
        evaluations: nested.budget.used.get(),
    })
}

/// [`nested_oracle`] for the power product `Π p_i^{m_i}`.
pub fn nested_oracle_power(m: &ExponentVector, spec: &QuadratureSpec) -> Result<IntegralEstimate> {
    nested_oracle(m.bins(), &PowerProduct::new(m.clone()), spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[f64]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn kronrod_rule_is_exact_for_degree_22() {
        let budget = Budget {
            used: Cell::new(0),
            limit: u64::MAX,
        };
        let mut f = |x: f64| Ok(x.powi(22));
        let v = adaptive(&mut f, 0.0, 1.0, 1e-14, &budget).unwrap();
        assert!((v - 1.0 / 23.0).abs() < 1e-16);
        assert_eq!(budget.used.get(), 0); // closure does not charge
    }

    #[test]
    fn triangle_examples() {
        let spec = QuadratureSpec::nested(1e-12);
        let v = nested_oracle_power(&ev(&[1.0, 1.0, 1.0]), &spec).unwrap();
        assert!((v.value.value() * 120.0 - 1.0).abs() < 1e-12);
        let one = |_: &[f64]| 1.0;
        let v = nested_oracle(3, &one, &spec).unwrap();
        assert!((v.value.value() - 0.5).abs() < 1e-14);
        assert!(v.evaluations > 0);
    }

    #[test]
    fn two_bins_is_beta() {
        let v = nested_oracle_power(&ev(&[2.0, 3.0]), &QuadratureSpec::nested(1e-12)).unwrap();
        assert!((v.value.value() * 60.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫_0^1 p^{-1/2} (1-p)^{1/2} dp = B(1/2, 3/2) = π/2
        let v = nested_oracle_power(&ev(&[-0.5, 0.5]), &QuadratureSpec::nested(1e-10)).unwrap();
        assert!((v.value.value() / std::f64::consts::FRAC_PI_2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_large_n_and_other_schemes() {
        let one = |_: &[f64]| 1.0;
        assert!(nested_oracle(6, &one, &QuadratureSpec::nested(1e-8)).is_err());
        assert!(matches!(
            nested_oracle(3, &one, &QuadratureSpec::gauss(8)),
            Err(Error::UnsupportedScheme { .. })
        ));
    }

    #[test]
    fn budget_exhaustion_is_non_convergence() {
        let spec = QuadratureSpec::nested(1e-12).with_budget(100);
        assert!(matches!(
            nested_oracle_power(&ev(&[1.0, 1.0, 1.0]), &spec),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn deterministic() {
        let spec = QuadratureSpec::nested(1e-10);
        let m = ev(&[0.5, 1.0, 2.0, 0.0]);
        let a = nested_oracle_power(&m, &spec).unwrap();
        let b = nested_oracle_power(&m, &spec).unwrap();
        assert_eq!(a.value.ln().to_bits(), b.value.ln().to_bits());
    }
}
