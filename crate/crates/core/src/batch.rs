//! Seeded query sampling and parallel batch evaluation for benchmarks.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::{gradient_error, value_error, PointRecord};
use crate::multistart::evaluate;
use crate::problem::{Problem, Query, Vector};

/// Where benchmark queries are drawn: `x` uniform in `[-box, box]^d`, `t`
/// uniform in `t_range`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingDomain {
    pub box_halfwidth: f64,
    pub t_range: (f64, f64),
}

impl Default for SamplingDomain {
    fn default() -> Self {
        Self {
            box_halfwidth: 1.0,
            t_range: (0.1, 0.4),
        }
    }
}

impl SamplingDomain {
    /// Per-problem defaults that keep `t` inside the region where the
    /// iteration converges:
    ///
    /// * `lqr`: `t` in `[0.05, 0.9] / ||R^-1 Q||_2`
    /// * `cubic`: `x` in `[-1/sqrt(d), 1/sqrt(d)]^d`, `t` in `[0.01, 0.05]`
    /// * `log-quadratic`: `t` in `[0.05, 0.25]`
    /// * everything else: `x` in `[-1, 1]^d`, `t` in `[0.1, 0.4]`
    pub fn for_problem(problem: &dyn Problem) -> Self {
        let base = Self::default();
        match problem.id() {
            "lqr" => {
                let limit = problem.convergence_time_limit().unwrap_or(1.0);
                Self {
                    t_range: (0.05 * limit, 0.9 * limit),
                    ..base
                }
            }
            "cubic" => Self {
                box_halfwidth: 1.0 / (problem.dim() as f64).sqrt(),
                t_range: (0.01, 0.05),
            },
            "log-quadratic" => Self {
                t_range: (0.05, 0.25),
                ..base
            },
            _ => base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.t_range;
        if !(self.box_halfwidth >= 0.0 && self.box_halfwidth.is_finite()) {
            return Err(Error::InvalidArgument("sample box must be nonnegative".into()));
        }
        if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t range must satisfy 0 <= lo <= hi, got {lo}:{hi}"
            )));
        }
        Ok(())
    }
}

/// Draws `n` queries; each query consumes `d` draws for `x` then one for `t`
/// from a ChaCha8 stream seeded with `seed`.
pub fn sample_queries(dim: usize, n: usize, domain: &SamplingDomain, seed: u64) -> Result<Vec<Query>> {
    domain.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = domain.box_halfwidth;
    let (lo, hi) = domain.t_range;
    (0..n)
        .map(|_| {
            let x = Vector::from_fn(dim, |_, _| if b > 0.0 { rng.random_range(-b..=b) } else { 0.0 });
            let t = if hi > lo { rng.random_range(lo..=hi) } else { lo };
            Query::new(x, t)
        })
        .collect()
}

/// Seed for the multi-start stream of the `index`-th point in a batch.
pub fn point_seed(batch_seed: u64, index: usize) -> u64 {
    batch_seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Solves every query (across points when `exec` is parallel, the starts of
/// each point sequentially) and records errors against the problem's exact
/// solution where one exists.
///
/// Divergence at a point yields a non-converged record with a NaN value;
/// evaluation errors abort the batch.
pub fn run_queries(
    problem: &dyn Problem,
    queries: &[Query],
    config: &SolverConfig,
    exec: Execution,
) -> Result<Vec<PointRecord>> {
    config.validate()?;
    let indexed: Vec<(usize, &Query)> = queries.iter().enumerate().collect();
    let records = exec.map_slice(&indexed, |&(i, query)| -> Result<PointRecord> {
        let cfg = SolverConfig {
            rng_seed: point_seed(config.rng_seed, i),
            ..config.clone()
        };
        let start = Instant::now();
        let outcome = evaluate(problem, query, &cfg, Execution::Sequential);
        let wall_time = start.elapsed().as_secs_f64();
        match outcome {
            Ok(eval) => {
                let r = eval.result();
                let exact = problem.exact_solution(&query.x, query.t);
                Ok(PointRecord {
                    query: query.clone(),
                    value: r.value,
                    value_err: exact.as_ref().map(|e| value_error(r.value, e.value)),
                    grad_err: exact.as_ref().map(|e| gradient_error(&r.gradient, &e.gradient)),
                    iterations: r.iterations,
                    wall_time,
                    converged: r.converged,
                })
            }
            Err(Error::Diverged { iterations, .. }) => Ok(PointRecord {
                query: query.clone(),
                value: f64::NAN,
                value_err: None,
                grad_err: None,
                iterations,
                wall_time,
                converged: false,
            }),
            Err(Error::AllDiverged { .. }) => Ok(PointRecord {
                query: query.clone(),
                value: f64::NAN,
                value_err: None,
                grad_err: None,
                iterations: config.max_iters,
                wall_time,
                converged: false,
            }),
            Err(e) => Err(e),
        }
    });
    records.into_iter().collect()
}
