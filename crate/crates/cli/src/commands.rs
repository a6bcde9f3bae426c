use std::time::Instant;

use simplex_moments::quadrature::{DEFAULT_GAUSS_NODES, NESTED_MAX_BINS};
use simplex_moments::{
    integrate_separable, integrate_simplex, log_integral, log_moment, nested_oracle_power,
    summarize, ExponentVector, IntegralEstimate, MomentIndex, PowerProduct, PriorExpression,
    Product, QuadratureSpec,
};

use crate::args::{Cli, Command, CountsArgs, SchemeArgs, SchemeName, DEFAULT_COMPARE_TOL};
use crate::counts;
use crate::error::CliError;
use crate::report::*;

/// Result of one command: the report, plus a message when `compare` found
/// a deviation above tolerance.
#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub plain: bool,
    pub breach: Option<String>,
}

struct Partial {
    inputs: Inputs,
    results: Results,
    evaluations: u64,
    notes: Vec<String>,
    breach: Option<String>,
}

pub fn execute(cli: Cli, argv: Vec<String>, budget: u64) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (partial, plain) = match cli.command {
        Command::Moments {
            counts,
            moments,
            output,
        } => (cmd_moments(&counts, &moments.moment, budget)?, output.plain),
        Command::Integrate {
            counts,
            prior,
            scheme,
            moments,
            output,
        } => (
            cmd_integrate(&counts, &prior, &scheme, &moments.moment, budget)?,
            output.plain,
        ),
        Command::Compare {
            counts,
            nodes,
            tol,
            output,
        } => (cmd_compare(&counts, nodes, tol, budget)?, output.plain),
    };
    let report = RunReport {
        format_version: FORMAT_VERSION,
        command: argv,
        inputs: partial.inputs,
        defaults: Defaults {
            compare_tol: Num(DEFAULT_COMPARE_TOL),
            gauss_nodes: DEFAULT_GAUSS_NODES,
        },
        results: partial.results,
        diagnostics: Diagnostics {
            evaluations: partial.evaluations,
            notes: partial.notes,
            wall_time_seconds: Num(start.elapsed().as_secs_f64()),
        },
    };
    Ok(Outcome {
        report,
        plain,
        breach: partial.breach,
    })
}

fn load_counts(args: &CountsArgs) -> Result<ExponentVector, CliError> {
    match (&args.counts, &args.counts_file) {
        (Some(text), None) => counts::parse_inline(text),
        (None, Some(path)) => counts::read_file(path),
        _ => Err(CliError::Input(
            "give exactly one of --counts and --counts-file".into(),
        )),
    }
}

fn inputs(m: &ExponentVector, moments: &[Vec<usize>], budget: u64) -> Inputs {
    Inputs {
        counts: m.as_slice().iter().map(|v| Num(*v)).collect(),
        bins: m.bins(),
        prior: None,
        spec: None,
        tol: None,
        moments: moments.to_vec(),
        evaluation_budget: budget,
    }
}

fn parse_moments(raw: &[String], bins: usize) -> Result<Vec<Vec<usize>>, CliError> {
    raw.iter().map(|s| counts::parse_moment(s, bins)).collect()
}

fn moment_index(bins: usize, index: &[usize]) -> Result<MomentIndex, CliError> {
    let zero_based: Vec<usize> = index.iter().map(|i| i - 1).collect();
    Ok(MomentIndex::from_bins(bins, &zero_based)?)
}

fn cmd_moments(args: &CountsArgs, raw: &[String], budget: u64) -> Result<Partial, CliError> {
    let m = load_counts(args)?;
    let requested = parse_moments(raw, m.bins())?;
    let bins: Vec<BinReport> = summarize(&m)
        .into_iter()
        .enumerate()
        .map(|(i, s)| BinReport {
            bin: i + 1,
            mean: Num(s.mean),
            variance: Num(s.variance),
            std_dev: Num(s.std_dev),
            skewness: Num(s.skewness),
        })
        .collect();
    let mean_sum = bins.iter().map(|b| b.mean.0).sum();
    let mut moments = Vec::new();
    for index in &requested {
        let l = log_moment(&m, &moment_index(m.bins(), index)?)?;
        moments.push(MomentReport {
            index: index.clone(),
            value: Num(l.exp()),
            log_value: Num(l),
        });
    }
    Ok(Partial {
        inputs: inputs(&m, &requested, budget),
        results: Results::Moments(MomentsResult {
            bins,
            mean_sum: Num(mean_sum),
            log_normalization: Num(log_integral(&m)?.ln()),
            moments,
        }),
        evaluations: 0,
        notes: Vec::new(),
        breach: None,
    })
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("--tol must be positive, got {tol}")))
    }
}

fn cmd_integrate(
    args: &CountsArgs,
    prior_src: &str,
    scheme: &SchemeArgs,
    raw: &[String],
    budget: u64,
) -> Result<Partial, CliError> {
    let m = load_counts(args)?;
    let n = m.bins();
    let requested = parse_moments(raw, n)?;
    let prior = PriorExpression::parse(prior_src)
        .map_err(|e| CliError::Input(format!("--prior: {e}")))?;
    prior
        .bind(n)
        .map_err(|e| CliError::Input(format!("--prior: {e}")))?;

    let (spec, spec_report) = match scheme.scheme {
        SchemeName::Gauss => (
            QuadratureSpec::gauss(scheme.nodes),
            SpecReport::Gauss {
                nodes: scheme.nodes,
            },
        ),
        SchemeName::Mc => (
            QuadratureSpec::monte_carlo(scheme.samples, scheme.seed),
            SpecReport::Mc {
                samples: scheme.samples,
                seed: scheme.seed,
            },
        ),
        SchemeName::Oracle => {
            check_tol(scheme.tol)?;
            (
                QuadratureSpec::nested(scheme.tol),
                SpecReport::Oracle {
                    rel_tol: Num(scheme.tol),
                },
            )
        }
    };
    let spec = spec.with_budget(budget);
    spec.validate()?;

    let run = |exponents: ExponentVector| -> Result<IntegralEstimate, CliError> {
        let f = Product {
            first: PowerProduct::new(exponents),
            second: prior.clone(),
        };
        Ok(integrate_simplex(n, &f, &spec)?)
    };

    let base = run(m.clone())?;
    let mut evaluations = base.evaluations;
    let mut moments = Vec::new();
    for index in &requested {
        let shift = moment_index(n, index)?;
        let shifted = run(m.shifted(shift.as_slice())?)?;
        evaluations += shifted.evaluations;
        let l = shifted.value.ln() - base.value.ln();
        moments.push(MomentReport {
            index: index.clone(),
            value: Num(l.exp()),
            log_value: Num(l),
        });
    }

    let log_value = base.value.ln();
    let linear = log_value.exp();
    let value = (linear.is_finite() && (linear > 0.0 || log_value == f64::NEG_INFINITY))
        .then_some(Num(linear));
    let mut inputs = inputs(&m, &requested, budget);
    inputs.prior = Some(prior_src.to_string());
    inputs.spec = Some(spec_report);
    Ok(Partial {
        inputs,
        results: Results::Integrate(IntegrateResult {
            log_value: Num(log_value),
            value,
            std_error: Num(base.std_error),
            moments,
        }),
        evaluations,
        notes: Vec::new(),
        breach: None,
    })
}

/// Oracle tolerance used by `compare`: well inside the comparison tolerance,
/// but never tighter than double precision can deliver.
pub fn oracle_tolerance(tol: f64) -> f64 {
    (tol / 100.0).max(1e-13)
}

fn path(name: &str, estimate: IntegralEstimate) -> PathReport {
    let l = estimate.value.ln();
    PathReport {
        name: name.into(),
        log_value: Some(Num(l)),
        value: Some(Num(l.exp())),
        evaluations: estimate.evaluations,
        skipped: None,
    }
}

fn skipped(name: &str, reason: String) -> PathReport {
    PathReport {
        name: name.into(),
        log_value: None,
        value: None,
        evaluations: 0,
        skipped: Some(reason),
    }
}

fn cmd_compare(
    args: &CountsArgs,
    nodes: usize,
    tol: f64,
    budget: u64,
) -> Result<Partial, CliError> {
    check_tol(tol)?;
    let m = load_counts(args)?;
    let n = m.bins();
    let gauss = QuadratureSpec::gauss(nodes).with_budget(budget);
    gauss.validate()?;

    let exact = log_integral(&m)?.ln();
    let mut paths = vec![PathReport {
        name: "exact".into(),
        log_value: Some(Num(exact)),
        value: Some(Num(exact.exp())),
        evaluations: 0,
        skipped: None,
    }];
    let mut notes = Vec::new();

    paths.push(path("separable", integrate_separable(&m, &gauss)?));

    match integrate_simplex(n, &PowerProduct::new(m.clone()), &gauss) {
        Ok(est) => paths.push(path("grid", est)),
        Err(e @ simplex_moments::Error::BudgetExceeded { .. }) => {
            notes.push(format!("grid skipped: {e}"));
            paths.push(skipped("grid", e.to_string()));
        }
        Err(e) => return Err(e.into()),
    }

    if n <= NESTED_MAX_BINS {
        let spec = QuadratureSpec::nested(oracle_tolerance(tol)).with_budget(budget);
        match nested_oracle_power(&m, &spec) {
            Ok(est) => paths.push(path("oracle", est)),
            Err(e) => {
                notes.push(format!("oracle skipped: {e}"));
                paths.push(skipped("oracle", e.to_string()));
            }
        }
    } else {
        let reason = format!("oracle supports at most {NESTED_MAX_BINS} bins");
        notes.push(format!("oracle skipped: {reason}"));
        paths.push(skipped("oracle", reason));
    }

    let mut deviations = Vec::new();
    let ran: Vec<(&str, f64)> = paths
        .iter()
        .filter_map(|p| p.log_value.map(|l| (p.name.as_str(), l.0)))
        .collect();
    for (k, (a, la)) in ran.iter().enumerate() {
        for (b, lb) in &ran[k + 1..] {
            deviations.push(Deviation {
                a: a.to_string(),
                b: b.to_string(),
                relative: Num((la - lb).exp_m1().abs()),
            });
        }
    }
    let max_deviation = deviations
        .iter()
        .map(|d| d.relative.0)
        .fold(0.0, |acc: f64, v| if v.is_nan() { v } else { acc.max(v) });
    let within_tol = max_deviation <= tol;
    let breach = (!within_tol).then(|| {
        format!("largest relative deviation {max_deviation:e} exceeds --tol {tol:e}")
    });

    let mut inputs = inputs(&m, &[], budget);
    inputs.spec = Some(SpecReport::Gauss { nodes });
    inputs.tol = Some(Num(tol));
    Ok(Partial {
        inputs,
        evaluations: paths.iter().map(|p| p.evaluations).sum(),
        results: Results::Compare(CompareResult {
            paths,
            deviations,
            max_deviation: Num(max_deviation),
            within_tol,
        }),
        notes,
        breach,
    })
}
