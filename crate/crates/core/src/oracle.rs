//! Brute-force grid minimization of the Hopf-Lax energy for `d <= 3`.
//!
//! Shares nothing with the fixed-point solvers beyond the problem's `H*` and
//! `g` evaluators: no gradients, no iteration on the map. Used as the ground
//! truth in verification tests.

use crate::error::{Error, Evaluator, Result};
use crate::exec::Execution;
use crate::problem::{checked_initial_grad, finite_scalar, Problem, Query, Vector};

pub const MAX_ORACLE_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub minimizer: Vector,
    pub value: f64,
    pub grid_points_per_axis: usize,
    /// Half-width of the last grid evaluated.
    pub box_halfwidth: f64,
    pub refinement_levels: usize,
    /// Best value after the initial grid and after each refinement.
    pub level_values: Vec<f64>,
}

impl OracleResult {
    /// Grid spacing of the last level.
    pub fn resolution(&self) -> f64 {
        2.0 * self.box_halfwidth / (self.grid_points_per_axis - 1) as f64
    }
}

/// `||x||_inf + t (1 + ||grad g(x)||)`, wide enough to hold the minimizer for
/// the built-in problems at moderate `t`.
pub fn default_halfwidth(problem: &dyn Problem, query: &Query) -> Result<f64> {
    let grad = checked_initial_grad(problem, &query.x)?;
    Ok(query.x.amax() + query.t * (1.0 + grad.norm()))
}

fn energy(problem: &dyn Problem, x: &Vector, t: f64, y: &Vector) -> Result<f64> {
    let q = (x - y) / t;
    let running = finite_scalar(problem.hamiltonian_conjugate(&q), Evaluator::HamiltonianConjugate)?;
    let terminal = finite_scalar(problem.initial_value(y), Evaluator::InitialValue)?;
    Ok(t * running + terminal)
}

/// Evaluates the energy on `points_per_axis^d` nodes of `center + [-h, h]^d`
/// and returns the best `(value, flat index)`; ties go to the smallest
/// lexicographic index.
fn scan_grid(
    problem: &dyn Problem,
    query: &Query,
    center: &Vector,
    halfwidth: f64,
    n: usize,
    exec: Execution,
) -> Result<(f64, usize)> {
    let dim = center.len();
    let spacing = 2.0 * halfwidth / (n - 1) as f64;
    let slab = n.pow(dim as u32 - 1);
    let node = |axis: usize, k: usize| center[axis] - halfwidth + spacing * k as f64;

    // One slab per index along the first axis.
    let slabs = exec.map_range(n, |first| -> Result<(f64, usize)> {
        let mut y = center.clone();
        y[0] = node(0, first);
        let mut best = (f64::INFINITY, usize::MAX);
        for rest in 0..slab {
            let mut r = rest;
            for axis in (1..dim).rev() {
                y[axis] = node(axis, r % n);
                r /= n;
            }
            let e = energy(problem, &query.x, query.t, &y)?;
            if e < best.0 {
                best = (e, first * slab + rest);
            }
        }
        Ok(best)
    });

    let mut best = (f64::INFINITY, usize::MAX);
    for s in slabs {
        let s = s?;
        if s.0 < best.0 {
            best = s;
        }
    }
    Ok(best)
}

fn node_at(center: &Vector, halfwidth: f64, n: usize, mut flat: usize) -> Vector {
    let dim = center.len();
    let spacing = 2.0 * halfwidth / (n - 1) as f64;
    let mut y = center.clone();
    for axis in (0..dim).rev() {
        y[axis] = center[axis] - halfwidth + spacing * (flat % n) as f64;
        flat /= n;
    }
    y
}

pub fn grid_minimize(
    problem: &dyn Problem,
    query: &Query,
    box_halfwidth: f64,
    points_per_axis: usize,
    refinement_levels: usize,
) -> Result<OracleResult> {
    grid_minimize_with(
        problem,
        query,
        box_halfwidth,
        points_per_axis,
        refinement_levels,
        Execution::default(),
    )
}

/// Scans `x + [-h, h]^d`, then `refinement_levels` times recentres on the best
/// node and shrinks the box to `min(h / 2, 2 * spacing)`.
pub fn grid_minimize_with(
    problem: &dyn Problem,
    query: &Query,
    box_halfwidth: f64,
    points_per_axis: usize,
    refinement_levels: usize,
    exec: Execution,
) -> Result<OracleResult> {
    query.check_against(problem)?;
    let dim = problem.dim();
    if dim > MAX_ORACLE_DIM {
        return Err(Error::OracleDimension(dim));
    }
    if query.t == 0.0 {
        return Err(Error::ZeroTime);
    }
    if points_per_axis < 3 {
        return Err(Error::InvalidArgument("points_per_axis must be at least 3".into()));
    }
    if !(box_halfwidth > 0.0 && box_halfwidth.is_finite()) {
        return Err(Error::InvalidArgument("box half-width must be positive".into()));
    }

    let n = points_per_axis;
    let mut center = query.x.clone();
    let mut h = box_halfwidth;
    let mut best_y = center.clone();
    let mut best_e = f64::INFINITY;
    let mut level_values = Vec::with_capacity(refinement_levels + 1);
    for level in 0..=refinement_levels {
        if level > 0 {
            let spacing = 2.0 * h / (n - 1) as f64;
            h = (h / 2.0).min(2.0 * spacing);
            center = best_y.clone();
        }
        let (e, flat) = scan_grid(problem, query, &center, h, n, exec)?;
        if e < best_e {
            best_e = e;
            best_y = node_at(&center, h, n, flat);
        }
        level_values.push(best_e);
    }

    Ok(OracleResult {
        minimizer: best_y,
        value: best_e,
        grid_points_per_axis: n,
        box_halfwidth: h,
        refinement_levels,
        level_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::hopf_lax_energy;
    use crate::problems::{cubic_problem, quadratic_problem, steady_kink_problem};

    #[test]
    fn quadratic_one_dimensional() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 1.0).unwrap();
        let o = grid_minimize(&p, &q, 3.0, 201, 4).unwrap();
        let res = o.resolution();
        assert!((o.minimizer[0] - 0.5).abs() <= res);
        assert!((o.value - 0.25).abs() <= res);
        assert!(o.value >= 0.25 - 1e-15);
        assert_eq!(hopf_lax_energy(&p, &q, &o.minimizer).unwrap(), o.value);
    }

    #[test]
    fn steady_kink_value() {
        let p = steady_kink_problem(1).unwrap();
        let q = Query::from_slice(&[0.0], 1.0).unwrap();
        let h = default_halfwidth(&p, &q).unwrap();
        let o = grid_minimize(&p, &q, h.max(2.0), 201, 4).unwrap();
        assert!((o.value + 0.5).abs() <= 1e-9);
        assert!((o.minimizer[0].abs() - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn cubic_matches_fixed_point_relation() {
        let p = cubic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 0.01).unwrap();
        let h = default_halfwidth(&p, &q).unwrap();
        let o = grid_minimize(&p, &q, h, 401, 5).unwrap();
        let y = o.minimizer[0];
        // y = x - 9 t |y|^3 y at the minimizer.
        assert!((y - (1.0 - 0.09 * y.powi(4))).abs() < 1e-4);
    }

    #[test]
    fn refinement_is_monotone() {
        let p = quadratic_problem(2).unwrap();
        let q = Query::from_slice(&[0.3, -0.8], 0.4).unwrap();
        let o = grid_minimize(&p, &q, 2.0, 21, 6).unwrap();
        assert_eq!(o.level_values.len(), 7);
        for w in o.level_values.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let p = steady_kink_problem(2).unwrap();
        let q = Query::from_slice(&[0.0, 0.0], 1.0).unwrap();
        let a = grid_minimize_with(&p, &q, 2.0, 41, 3, Execution::Sequential).unwrap();
        let b = grid_minimize_with(&p, &q, 2.0, 41, 3, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        for c in a.minimizer.iter() {
            assert!((c.abs() - 1.0).abs() < 1e-9);
        }
        assert!((a.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let p = quadratic_problem(4).unwrap();
        let q = Query::from_slice(&[0.0; 4], 1.0).unwrap();
        assert_eq!(grid_minimize(&p, &q, 1.0, 11, 1), Err(Error::OracleDimension(4)));
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[0.0], 0.0).unwrap();
        assert_eq!(grid_minimize(&p, &q, 1.0, 11, 1), Err(Error::ZeroTime));
        let q = Query::from_slice(&[0.0], 1.0).unwrap();
        assert!(grid_minimize(&p, &q, 1.0, 2, 1).is_err());
    }
}
