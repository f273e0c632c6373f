//! Multi-start fixed-point solving for problems whose fixed-point map has
//! several fixed points (kinks from crossing characteristics).
//!
//! Starts are drawn up front from a seeded ChaCha stream, then each Picard
//! run is independent and may execute on any worker. Converged minimizers are
//! clustered, each cluster representative is scored by its Hopf-Lax energy and
//! the lowest energy wins (first-found on ties).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{SamplingCenter, SolverConfig};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::picard::{solve, solve_from, SolveResult};
use crate::problem::{hopf_lax_energy, Problem, Query, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub minimizer: Vector,
    pub energy: f64,
    /// Number of converged starts that landed in this cluster.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiStartResult {
    pub best: SolveResult,
    /// Deduplicated converged fixed points in order of discovery.
    pub fixed_points: Vec<FixedPoint>,
    pub attempted: usize,
    pub converged_count: usize,
    pub diverged_count: usize,
}

/// Default box half-width `2 (1 + ||x||_inf + t)`.
pub fn default_box_halfwidth(query: &Query) -> f64 {
    2.0 * (1.0 + query.x.amax() + query.t)
}

/// The `n` initial guesses used by [`solve_multistart`], in sampling order.
/// A longer list always extends a shorter one drawn with the same settings.
pub fn sample_starts(query: &Query, config: &SolverConfig, n: usize) -> Vec<Vector> {
    let dim = query.dim();
    let alpha = config
        .init_box_halfwidth
        .unwrap_or_else(|| default_box_halfwidth(query));
    let center = match config.sampling_center {
        SamplingCenter::Query => query.x.clone(),
        SamplingCenter::Origin => Vector::zeros(dim),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    (0..n)
        .map(|_| Vector::from_fn(dim, |i, _| center[i] + rng.random_range(-alpha..=alpha)))
        .collect()
}

pub fn solve_multistart(
    problem: &dyn Problem,
    query: &Query,
    config: &SolverConfig,
) -> Result<MultiStartResult> {
    solve_multistart_with(problem, query, config, Execution::default())
}

pub fn solve_multistart_with(
    problem: &dyn Problem,
    query: &Query,
    config: &SolverConfig,
    exec: Execution,
) -> Result<MultiStartResult> {
    config.validate()?;
    query.check_against(problem)?;
    let n = config.multi_init_count;
    if n == 0 {
        return Err(Error::InvalidConfig(
            "multi-start needs multi_init_count >= 1".into(),
        ));
    }
    if query.t == 0.0 {
        let best = solve(problem, query, config)?;
        return Ok(MultiStartResult {
            best,
            fixed_points: Vec::new(),
            attempted: 0,
            converged_count: 0,
            diverged_count: 0,
        });
    }

    let starts = sample_starts(query, config, n);
    let runs = exec.map_slice(&starts, |y0| solve_from(problem, query, config, y0));

    let mut finished = Vec::with_capacity(n);
    let mut diverged_count = 0;
    for run in runs {
        match run {
            Ok(r) => finished.push(r),
            Err(Error::Diverged { .. }) => diverged_count += 1,
            Err(e) => return Err(e),
        }
    }
    if finished.is_empty() {
        return Err(Error::AllDiverged { attempted: n });
    }

    // Cluster converged minimizers; the representative is the first found.
    let mut clusters: Vec<(usize, usize)> = Vec::new(); // (index into finished, multiplicity)
    let mut converged_count = 0;
    for (i, r) in finished.iter().enumerate() {
        if !r.converged {
            continue;
        }
        converged_count += 1;
        let home = clusters.iter_mut().find(|(rep, _)| {
            (&finished[*rep].minimizer - &r.minimizer).norm() <= config.dedup_tolerance
        });
        match home {
            Some((_, mult)) => *mult += 1,
            None => clusters.push((i, 1)),
        }
    }

    let mut fixed_points = Vec::with_capacity(clusters.len());
    for &(rep, multiplicity) in &clusters {
        let minimizer = finished[rep].minimizer.clone();
        let energy = hopf_lax_energy(problem, query, &minimizer)?;
        fixed_points.push(FixedPoint {
            minimizer,
            energy,
            multiplicity,
        });
    }

    let best_index = if clusters.is_empty() {
        // Nothing converged: fall back to the lowest-energy final iterate.
        argmin_first(finished.iter().map(|r| r.value))
    } else {
        clusters[argmin_first(fixed_points.iter().map(|fp| fp.energy))].0
    };
    let best = finished.swap_remove(best_index);

    Ok(MultiStartResult {
        best,
        fixed_points,
        attempted: n,
        converged_count,
        diverged_count,
    })
}

/// Index of the smallest value; earliest index wins ties.
fn argmin_first(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Outcome of [`evaluate`]: a single Picard run or a multi-start search.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluation {
    Single(SolveResult),
    Multi(MultiStartResult),
}

impl Evaluation {
    pub fn result(&self) -> &SolveResult {
        match self {
            Evaluation::Single(r) => r,
            Evaluation::Multi(m) => &m.best,
        }
    }

    pub fn into_result(self) -> SolveResult {
        match self {
            Evaluation::Single(r) => r,
            Evaluation::Multi(m) => m.best,
        }
    }
}

/// Single start at `y0 = x` when `multi_init_count == 0`, multi-start
/// otherwise.
pub fn evaluate(
    problem: &dyn Problem,
    query: &Query,
    config: &SolverConfig,
    exec: Execution,
) -> Result<Evaluation> {
    if config.multi_init_count == 0 {
        solve(problem, query, config).map(Evaluation::Single)
    } else {
        solve_multistart_with(problem, query, config, exec).map(Evaluation::Multi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{quadratic_problem, steady_kink_problem, unsteady_kink_problem};
    use approx::assert_abs_diff_eq;

    fn kink_config(n: usize) -> SolverConfig {
        SolverConfig {
            multi_init_count: n,
            init_box_halfwidth: Some(2.0),
            rng_seed: 7,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn steady_kink_finds_both_branches() {
        let p = steady_kink_problem(1).unwrap();
        let q = Query::from_slice(&[0.0], 1.0).unwrap();
        let m = solve_multistart(&p, &q, &kink_config(100)).unwrap();
        assert_eq!(m.fixed_points.len(), 2);
        let mut ys: Vec<f64> = m.fixed_points.iter().map(|f| f.minimizer[0]).collect();
        ys.sort_by(f64::total_cmp);
        assert_eq!(ys, vec![-1.0, 1.0]);
        for fp in &m.fixed_points {
            assert_abs_diff_eq!(fp.energy, -0.5, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(m.best.value, -0.5, epsilon = 1e-12);
        // Tie goes to the first representative in sampling order.
        assert_eq!(m.best.minimizer, m.fixed_points[0].minimizer);
        let total: usize = m.fixed_points.iter().map(|f| f.multiplicity).sum();
        assert_eq!(total, m.converged_count);
    }

    #[test]
    fn unsteady_kink_prefers_lower_energy() {
        let p = unsteady_kink_problem(1).unwrap();
        let q = Query::from_slice(&[0.0], 1.0).unwrap();
        let m = solve_multistart(&p, &q, &kink_config(100)).unwrap();
        assert_eq!(m.best.minimizer[0], -1.0);
        assert_abs_diff_eq!(m.best.value, -0.5, epsilon = 1e-12);
        assert!(m
            .fixed_points
            .iter()
            .any(|f| f.minimizer[0] == 0.0 && f.energy == 0.0));
    }

    #[test]
    fn quadratic_has_one_cluster() {
        let p = quadratic_problem(3).unwrap();
        let q = Query::from_slice(&[0.2, -0.7, 1.0], 0.6).unwrap();
        let m = solve_multistart(&p, &q, &kink_config(50)).unwrap();
        assert_eq!(m.fixed_points.len(), 1);
        assert_eq!(m.fixed_points[0].multiplicity, m.converged_count);
        assert_eq!(m.converged_count, 50);
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let p = steady_kink_problem(2).unwrap();
        let q = Query::from_slice(&[0.05, -0.1], 0.3).unwrap();
        let cfg = kink_config(64);
        let a = solve_multistart_with(&p, &q, &cfg, Execution::Sequential).unwrap();
        let b = solve_multistart_with(&p, &q, &cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn starts_are_prefix_stable() {
        let q = Query::from_slice(&[0.5, 0.5], 0.2).unwrap();
        let cfg = kink_config(0);
        let short = sample_starts(&q, &cfg, 10);
        let long = sample_starts(&q, &cfg, 40);
        assert_eq!(short[..], long[..10]);
        for s in &long {
            assert!((s - &q.x).amax() <= 2.0);
        }
    }

    #[test]
    fn all_diverged_is_distinct() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 3.0).unwrap();
        assert_eq!(
            solve_multistart(&p, &q, &kink_config(8)),
            Err(Error::AllDiverged { attempted: 8 })
        );
    }

    #[test]
    fn non_converged_fallback() {
        // L_F = 1 exactly: every run oscillates without diverging.
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 1.0).unwrap();
        let cfg = SolverConfig {
            max_iters: 20,
            ..kink_config(5)
        };
        let m = solve_multistart(&p, &q, &cfg).unwrap();
        assert!(!m.best.converged);
        assert!(m.fixed_points.is_empty());
        assert_eq!(m.converged_count, 0);
    }

    #[test]
    fn requires_starts() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 0.5).unwrap();
        assert!(solve_multistart(&p, &q, &kink_config(0)).is_err());
    }

    #[test]
    fn zero_time_short_circuits() {
        let p = steady_kink_problem(1).unwrap();
        let q = Query::from_slice(&[0.3], 0.0).unwrap();
        let m = solve_multistart(&p, &q, &kink_config(10)).unwrap();
        assert_eq!(m.best.value, -0.3);
        assert_eq!(m.attempted, 0);
    }
}
