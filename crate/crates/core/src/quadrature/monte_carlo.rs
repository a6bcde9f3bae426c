//! Plain Monte Carlo in angle space.
//!
//! Samples are split into blocks of [`MC_BLOCK_SIZE`]. Block `b` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `b`, so every block
//! is reproducible on its own and a parallel run yields exactly the serial
//! result. Block partial sums are merged in block order.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::logsum::LogSum;
use super::{check_log_value, Integrand, IntegralEstimate};
use crate::error::{Error, Result};
use crate::special::LogMagnitude;
use crate::sphere::{fill_simplex, log_jacobian_raw};

/// Samples drawn from one generator stream.
pub const MC_BLOCK_SIZE: u64 = 4096;

pub(super) fn integrate_monte_carlo<F: Integrand + ?Sized>(
    n: usize,
    f: &F,
    samples: u64,
    seed: u64,
    budget: u64,
) -> Result<IntegralEstimate> {
    if samples > budget {
        return Err(Error::BudgetExceeded {
            requested: samples as f64,
            budget,
        });
    }
    let dims = n - 1;
    // Each sample carries the hypercube volume (π/2)^{n-1}.
    let log_volume = dims as f64 * FRAC_PI_2.ln();
    let blocks = samples.div_ceil(MC_BLOCK_SIZE);

    let partials: Vec<Result<LogSum>> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let start = block * MC_BLOCK_SIZE;
            let count = MC_BLOCK_SIZE.min(samples - start);
            let mut angles = vec![0.0; dims];
            let mut p = vec![0.0; n];
            let mut log_p = vec![0.0; n];
            let mut acc = LogSum::default();
            for _ in 0..count {
                for a in angles.iter_mut() {
                    *a = FRAC_PI_2 * rng.random::<f64>();
                }
                fill_simplex(&angles, &mut p, &mut log_p);
                let log_j = log_jacobian_raw(&angles);
                let log_f = check_log_value(f.log_value(&p, &log_p)?, &p)?;
                if log_j > f64::NEG_INFINITY && log_f > f64::NEG_INFINITY {
                    acc.push(log_f + log_j + log_volume);
                }
            }
            Ok(acc)
        })
        .collect();

    let mut total = LogSum::default();
    for part in partials {
        total = total.merge(part?);
    }

    let s = samples as f64;
    let (sum, sum_sq) = total.scaled_sums();
    if total.shift() == f64::NEG_INFINITY {
        return Ok(IntegralEstimate {
            value: LogMagnitude::ZERO,
            std_error: 0.0,
            evaluations: samples,
        });
    }
    let mean = sum / s;
    let std_error = if samples > 1 {
        let var = ((sum_sq / s - mean * mean) * s / (s - 1.0)).max(0.0);
        total.shift().exp() * (var / s).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(IntegralEstimate {
        value: LogMagnitude::from_log(total.shift() + mean.ln()),
        std_error,
        evaluations: samples,
    })
}
