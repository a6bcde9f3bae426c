use std::f64::consts::{FRAC_PI_2, LN_2};

use rayon::prelude::*;

use super::gauss::GaussLegendre;
use super::logsum::LogSum;
use super::{check_log_value, Integrand, IntegralEstimate};
use crate::error::{Error, Result};
use crate::special::LogMagnitude;
use crate::sphere::{log_kernel_raw, sin_cos, ExponentVector};

/// Nodes and log-weights of the rule mapped onto `[0, π/2]`.
fn angle_rule(nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let (theta, w) = GaussLegendre::new(nodes).mapped(0.0, FRAC_PI_2);
    (theta, w.into_iter().map(f64::ln).collect())
}

/// `sin`, `cos` and their logs at each node, so grid points need no
/// transcendental calls beyond the integrand.
struct NodeTable {
    sin: Vec<f64>,
    cos: Vec<f64>,
    ln_sin: Vec<f64>,
    ln_cos: Vec<f64>,
}

impl NodeTable {
    fn new(theta: &[f64]) -> Self {
        let (sin, cos): (Vec<f64>, Vec<f64>) = theta.iter().map(|t| sin_cos(*t)).unzip();
        Self {
            ln_sin: sin.iter().map(|v| v.ln()).collect(),
            ln_cos: cos.iter().map(|v| v.ln()).collect(),
            sin,
            cos,
        }
    }

    /// Same arithmetic as `fill_simplex` and `log_jacobian_raw`, from the
    /// table; returns `ln J`.
    fn fill(&self, index: &[usize], p: &mut [f64], log_p: &mut [f64]) -> f64 {
        let n = index.len() + 1;
        let mut prefix = 1.0;
        let mut log_prefix = 0.0;
        let mut log_j = 0.0;
        for (i, &k) in index.iter().enumerate() {
            let (s, c) = (self.sin[k], self.cos[k]);
            p[i] = prefix * c * c;
            log_p[i] = log_prefix + 2.0 * self.ln_cos[k];
            prefix *= s * s;
            log_prefix += 2.0 * self.ln_sin[k];
            let sin_power = (2 * (n - 2 - i) + 1) as f64;
            log_j += LN_2 + self.ln_cos[k] + sin_power * self.ln_sin[k];
        }
        p[n - 1] = prefix;
        log_p[n - 1] = log_prefix;
        log_j
    }
}

fn check_budget(points: f64, budget: u64) -> Result<()> {
    if points > budget as f64 {
        return Err(Error::BudgetExceeded {
            requested: points,
            budget,
        });
    }
    Ok(())
}

pub(super) fn integrate_grid<F: Integrand + ?Sized>(
    n: usize,
    f: &F,
    nodes: usize,
    budget: u64,
) -> Result<IntegralEstimate> {
    let dims = n - 1;
    let points = (nodes as f64).powi(dims as i32);
    check_budget(points, budget)?;
    let (theta, log_w) = angle_rule(nodes);
    let table = NodeTable::new(&theta);

    // One task per node of the first axis; partial sums are merged in node
    // order so the result is independent of scheduling.
    let partials: Vec<Result<LogSum>> = (0..nodes)
        .into_par_iter()
        .map(|first| {
            let mut acc = LogSum::default();
            let mut index = vec![0usize; dims];
            index[0] = first;
            let mut p = vec![0.0; n];
            let mut log_p = vec![0.0; n];
            loop {
                let log_weight: f64 = index.iter().map(|&k| log_w[k]).sum();
                let log_j = table.fill(&index, &mut p, &mut log_p);
                let log_f = check_log_value(f.log_value(&p, &log_p)?, &p)?;
                if log_j > f64::NEG_INFINITY && log_f > f64::NEG_INFINITY {
                    acc.push(log_f + log_j + log_weight);
                }
                // Odometer over axes 1.., axis 0 fixed.
                let mut d = dims;
                loop {
                    if d == 1 {
                        return Ok(acc);
                    }
                    d -= 1;
                    index[d] += 1;
                    if index[d] < nodes {
                        break;
                    }
                    index[d] = 0;
                }
            }
        })
        .collect();

    let mut total = LogSum::default();
    for part in partials {
        total = total.merge(part?);
    }
    Ok(IntegralEstimate {
        value: LogMagnitude::from_log(total.ln_sum()),
        std_error: 0.0,
        evaluations: points as u64,
    })
}

pub(super) fn integrate_separable(
    m: &ExponentVector,
    nodes: usize,
    budget: u64,
) -> Result<IntegralEstimate> {
    let ms = m.as_slice();
    let axes = ms.len() - 1;
    let points = (nodes * axes) as f64;
    check_budget(points, budget)?;
    let (theta, log_w) = angle_rule(nodes);

    let mut log_total = 0.0;
    let mut tail: f64 = ms[1..].iter().map(|v| 1.0 + v).sum();
    for j in 0..axes {
        let mut acc = LogSum::default();
        for (t, lw) in theta.iter().zip(&log_w) {
            acc.push(log_kernel_raw(ms[j], tail, *t) + lw);
        }
        log_total += acc.ln_sum();
        tail -= 1.0 + ms[j + 1];
    }
    Ok(IntegralEstimate {
        value: LogMagnitude::from_log(log_total),
        std_error: 0.0,
        evaluations: points as u64,
    })
}
