//! Single-start Picard iteration on the Hopf-Lax fixed-point map, with
//! residual-based a-posteriori error bounds and iteration-count prediction.

use serde::Serialize;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::problem::{
    apply_map, check_dim, checked_initial_grad, checked_initial_value, hopf_lax_energy,
    is_finite, Problem, Query, Vector,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Hopf-Lax minimizer `y*` (the last iterate).
    pub minimizer: Vector,
    /// `u(x, t)` evaluated at `minimizer`.
    pub value: f64,
    /// `grad u(x, t) = grad g(y*)`.
    pub gradient: Vector,
    /// Optimal control `(x - y*) / t`; zero at `t = 0`.
    pub control: Vector,
    /// Index `k` of the last residual `r_k = y_{k+1} - y_k`. The map was
    /// applied `k + 1` times.
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub residual_history: Vec<f64>,
}

impl SolveResult {
    /// The exact result at `t = 0`: `y* = x`, `u = g(x)`.
    fn at_initial_time(problem: &dyn Problem, query: &Query) -> Result<Self> {
        Ok(Self {
            minimizer: query.x.clone(),
            value: checked_initial_value(problem, &query.x)?,
            gradient: checked_initial_grad(problem, &query.x)?,
            control: Vector::zeros(query.dim()),
            iterations: 0,
            final_residual: 0.0,
            converged: true,
            residual_history: Vec::new(),
        })
    }

    fn from_iterate(
        problem: &dyn Problem,
        query: &Query,
        y: Vector,
        iterations: usize,
        history: Vec<f64>,
        converged: bool,
    ) -> Result<Self> {
        let value = hopf_lax_energy(problem, query, &y)?;
        let gradient = checked_initial_grad(problem, &y)?;
        let control = (&query.x - &y) / query.t;
        Ok(Self {
            minimizer: y,
            value,
            gradient,
            control,
            iterations,
            final_residual: history.last().copied().unwrap_or(0.0),
            converged,
            residual_history: history,
        })
    }
}

/// Runs the Picard iteration from `y0 = x`.
pub fn solve(problem: &dyn Problem, query: &Query, config: &SolverConfig) -> Result<SolveResult> {
    solve_from(problem, query, config, &query.x)
}

/// Runs `y_{k+1} = x - t grad H(grad g(y_k))` from `y0` until the step
/// length drops below `config.tolerance` or `config.max_iters` steps have
/// been taken.
pub fn solve_from(
    problem: &dyn Problem,
    query: &Query,
    config: &SolverConfig,
    y0: &Vector,
) -> Result<SolveResult> {
    config.validate()?;
    query.check_against(problem)?;
    check_dim(problem.dim(), y0)?;
    if !is_finite(y0) {
        return Err(Error::InvalidArgument("initial guess has non-finite components".into()));
    }
    if query.t == 0.0 {
        return SolveResult::at_initial_time(problem, query);
    }

    let mut y = y0.clone();
    let mut history = Vec::with_capacity(config.max_iters.min(64));
    let mut converged = false;
    for k in 0..config.max_iters {
        let next = apply_map(problem, &query.x, query.t, &y)?;
        let residual = (&next - &y).norm();
        history.push(residual);
        let norm = next.norm();
        if norm > config.divergence_threshold {
            return Err(Error::Diverged {
                norm,
                threshold: config.divergence_threshold,
                iterations: k + 1,
            });
        }
        y = next;
        if residual < config.tolerance {
            converged = true;
            break;
        }
    }
    let iterations = history.len() - 1;
    SolveResult::from_iterate(problem, query, y, iterations, history, converged)
}

/// Contraction modulus `L_F = t L_H L_g` of the fixed-point map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionInfo {
    pub modulus: f64,
    pub is_contraction: bool,
    /// Both `L_H` and `L_g` are known.
    pub available: bool,
}

pub fn contraction_info(problem: &dyn Problem, t: f64) -> ContractionInfo {
    let lip = problem.lipschitz();
    match (lip.h, lip.g) {
        (Some(lh), Some(lg)) => {
            let modulus = t * lh * lg;
            ContractionInfo {
                modulus,
                is_contraction: modulus < 1.0,
                available: true,
            }
        }
        _ => ContractionInfo {
            modulus: 0.0,
            is_contraction: false,
            available: false,
        },
    }
}

/// A-posteriori bounds derived from the final residual. A bound is `None`
/// when the constants it needs are unknown or the map is not a contraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorBounds {
    pub minimizer_bound: Option<f64>,
    pub solution_bound: Option<f64>,
    pub gradient_bound: Option<f64>,
}

impl ErrorBounds {
    pub fn valid(&self) -> bool {
        self.minimizer_bound.is_some()
            && self.solution_bound.is_some()
            && self.gradient_bound.is_some()
    }

    fn none() -> Self {
        Self {
            minimizer_bound: None,
            solution_bound: None,
            gradient_bound: None,
        }
    }
}

/// With `r` the final residual and `L_F < 1`:
///
/// * minimizer: `r / (1 - L_F)`
/// * solution: `(L_{H*} / t + L_g) / (1 - L_F) * r`
/// * gradient: `L_g * r`
pub fn error_bounds(problem: &dyn Problem, query: &Query, result: &SolveResult) -> ErrorBounds {
    let info = contraction_info(problem, query.t);
    let r = result.final_residual;
    if !info.is_contraction || !r.is_finite() {
        return ErrorBounds::none();
    }
    let lip = problem.lipschitz();
    // `is_contraction` implies both of these are present.
    let lg = lip.g.unwrap_or(f64::NAN);
    let denom = 1.0 - info.modulus;

    let solution_bound = if query.t == 0.0 {
        // u(x, 0) = g(x) is returned exactly.
        Some(0.0)
    } else {
        lip.h_conj.map(|lhc| (lhc / query.t + lg) / denom * r)
    };

    ErrorBounds {
        minimizer_bound: Some(r / denom),
        solution_bound,
        gradient_bound: Some(lg * r),
    }
}

/// Smallest `k` with `(1 + L_F) L_F^k d0 <= eps`, i.e. the ceiling of
/// `log((1 + L_F) d0 / eps) / (-log L_F)`; zero when that is nonpositive.
pub fn predicted_iterations(contraction: f64, initial_distance: f64, epsilon: f64) -> Result<usize> {
    if !(contraction > 0.0 && contraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "contraction modulus must lie in (0, 1), got {contraction}"
        )));
    }
    if !(epsilon > 0.0) || !(initial_distance >= 0.0) {
        return Err(Error::InvalidArgument(
            "need epsilon > 0 and initial_distance >= 0".into(),
        ));
    }
    if initial_distance == 0.0 {
        return Ok(0);
    }
    let k = ((1.0 + contraction) * initial_distance / epsilon).ln() / -contraction.ln();
    Ok(if k <= 0.0 { 0 } else { k.ceil() as usize })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{cubic_problem, quadratic_problem};
    use approx::assert_relative_eq;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn quadratic_converges_to_closed_form() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 0.5).unwrap();
        let r = solve(&p, &q, &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert!(r.final_residual < 1e-6);
        assert!(r.iterations <= 40);
        assert_relative_eq!(r.minimizer[0], 2.0 / 3.0, epsilon = 1e-6);
        assert_relative_eq!(r.value, 1.0 / 3.0, epsilon = 1e-6);
        assert_relative_eq!(r.gradient[0], 2.0 / 3.0, epsilon = 1e-6);
        assert_relative_eq!(r.control[0], 2.0 / 3.0, epsilon = 1e-5);
        assert_eq!(r.residual_history.len(), r.iterations + 1);
    }

    #[test]
    fn zero_time_short_circuits() {
        let p = quadratic_problem(2).unwrap();
        let q = Query::from_slice(&[1.0, -2.0], 0.0).unwrap();
        let r = solve_from(&p, &q, &SolverConfig::default(), &v(&[9.0, 9.0])).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.minimizer, q.x);
        assert_eq!(r.value, 2.5);
        assert_eq!(r.control, v(&[0.0, 0.0]));
    }

    #[test]
    fn divergence_is_reported() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 2.0).unwrap();
        match solve(&p, &q, &SolverConfig::default()) {
            Err(Error::Diverged { norm, threshold, .. }) => {
                assert!(norm > threshold);
                assert_eq!(threshold, 1e12);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn boundary_case_does_not_converge() {
        // F(y) = 1 - y oscillates between 1 and 0 forever at L_F = 1.
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 1.0).unwrap();
        let cfg = SolverConfig {
            max_iters: 50,
            ..SolverConfig::default()
        };
        let r = solve(&p, &q, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 49);
        assert_eq!(r.residual_history.len(), 50);
    }

    #[test]
    fn cubic_one_dimensional_stationarity() {
        let p = cubic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 0.01).unwrap();
        let r = solve(&p, &q, &SolverConfig::default()).unwrap();
        assert!(r.converged);
        let y = r.minimizer[0];
        assert!((y - (1.0 - 0.09 * y.powi(4))).abs() < 1e-6);
    }

    #[test]
    fn contraction_examples() {
        let p = quadratic_problem(3).unwrap();
        let c = contraction_info(&p, 0.5);
        assert_eq!(c.modulus, 0.5);
        assert!(c.is_contraction && c.available);
        let c = contraction_info(&p, 1.5);
        assert_eq!(c.modulus, 1.5);
        assert!(!c.is_contraction);
        let c = contraction_info(&cubic_problem(2).unwrap(), 0.1);
        assert!(!c.available && !c.is_contraction);
    }

    fn result_with_residual(dim: usize, r: f64) -> SolveResult {
        SolveResult {
            minimizer: Vector::zeros(dim),
            value: 0.0,
            gradient: Vector::zeros(dim),
            control: Vector::zeros(dim),
            iterations: 1,
            final_residual: r,
            converged: true,
            residual_history: vec![r],
        }
    }

    #[test]
    fn bound_formulas() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 0.5).unwrap();
        let b = error_bounds(&p, &q, &result_with_residual(1, 1e-6));
        assert!(b.valid());
        assert_relative_eq!(b.minimizer_bound.unwrap(), 2e-6, max_relative = 1e-12);
        assert_relative_eq!(b.solution_bound.unwrap(), 6e-6, max_relative = 1e-12);
        assert_relative_eq!(b.gradient_bound.unwrap(), 1e-6, max_relative = 1e-12);

        let b = error_bounds(&p, &q, &result_with_residual(1, 0.0));
        assert_eq!(b.minimizer_bound, Some(0.0));
        assert_eq!(b.solution_bound, Some(0.0));
        assert_eq!(b.gradient_bound, Some(0.0));
    }

    #[test]
    fn bounds_invalid_outside_contraction() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 1.5).unwrap();
        assert!(!error_bounds(&p, &q, &result_with_residual(1, 1e-6)).valid());
        let c = cubic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 0.01).unwrap();
        assert_eq!(error_bounds(&c, &q, &result_with_residual(1, 1e-6)), ErrorBounds::none());
    }

    #[test]
    fn predicted_iteration_examples() {
        assert_eq!(predicted_iterations(0.5, 1.0, 1e-6).unwrap(), 21);
        assert_eq!(predicted_iterations(0.5, 0.0, 1e-6).unwrap(), 0);
        assert_eq!(predicted_iterations(0.9, 1.0, 1e-3).unwrap(), 72);
        assert!(predicted_iterations(1.0, 1.0, 1e-3).is_err());
        assert!(predicted_iterations(0.0, 1.0, 1e-3).is_err());
        assert!(predicted_iterations(1.5, 1.0, 1e-3).is_err());
    }

    #[test]
    fn quadratic_iterations_within_prediction() {
        // x = 3 gives ||y0 - y*|| = 1 at t = 0.5.
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[3.0], 0.5).unwrap();
        let r = solve(&p, &q, &SolverConfig::default()).unwrap();
        assert!(r.iterations <= 21);
    }
}
