//! The problem interface and the two primitives every solver is built on:
//! the Hopf-Lax energy and the fixed-point map derived from its first-order
//! optimality condition.
//!
//! For a convex Hamiltonian `H` and initial data `g`, the viscosity solution of
//!
//! ```text
//! u_t + H(grad u) = 0,   u(x, 0) = g(x)
//! ```
//!
//! is `u(x, t) = inf_y { t H*((x - y) / t) + g(y) }`. Stationary points of the
//! energy satisfy `y = x - t grad H(grad g(y))`.

use nalgebra::DVector;

use crate::error::{Error, Evaluator, Result};

/// State-space vector (`x`, `y`, `p`, `q`).
pub type Vector = DVector<f64>;

/// Optional Lipschitz metadata. `h` and `g` bound the gradients of `H` and
/// `g`; `h_conj` bounds `H*` on the region of interest.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Lipschitz {
    pub h: Option<f64>,
    pub g: Option<f64>,
    pub h_conj: Option<f64>,
}

/// Closed-form value and gradient of `u` at a query.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub value: f64,
    pub gradient: Vector,
}

/// A first-order Hamilton-Jacobi problem with convex Hamiltonian.
///
/// Evaluators must be pure: solvers call them concurrently from worker
/// threads. Where `g` is not differentiable, `initial_grad` returns a fixed
/// single-valued subgradient selection.
pub trait Problem: Send + Sync {
    /// Registry identifier, e.g. `"quadratic"`.
    fn id(&self) -> &str;

    fn dim(&self) -> usize;

    fn hamiltonian(&self, p: &Vector) -> f64;

    fn hamiltonian_grad(&self, p: &Vector) -> Vector;

    /// The Legendre transform `H*(q) = sup_p { q.p - H(p) }`.
    fn hamiltonian_conjugate(&self, q: &Vector) -> f64;

    fn initial_value(&self, y: &Vector) -> f64;

    fn initial_grad(&self, y: &Vector) -> Vector;

    fn lipschitz(&self) -> Lipschitz {
        Lipschitz::default()
    }

    fn exact_solution(&self, _x: &Vector, _t: f64) -> Option<ExactSolution> {
        None
    }

    /// Closed-form Hopf-Lax minimizer, when one is known.
    fn exact_minimizer(&self, _x: &Vector, _t: f64) -> Option<Vector> {
        None
    }

    /// Supremum of the times `t` for which Picard iteration is known to
    /// converge. Defaults to `1 / (L_H L_g)` when both constants are known.
    fn convergence_time_limit(&self) -> Option<f64> {
        let lip = self.lipschitz();
        Some(1.0 / (lip.h? * lip.g?))
    }
}

/// An evaluation point `(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub x: Vector,
    pub t: f64,
}

impl Query {
    pub fn new(x: Vector, t: f64) -> Result<Self> {
        let q = Self { x, t };
        q.validate()?;
        Ok(q)
    }

    pub fn from_slice(x: &[f64], t: f64) -> Result<Self> {
        Self::new(Vector::from_column_slice(x), t)
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.x.is_empty() {
            return Err(Error::InvalidQuery("x must have at least one component".into()));
        }
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(Error::InvalidQuery(format!(
                "t must be finite and nonnegative, got {}",
                self.t
            )));
        }
        if !is_finite(&self.x) {
            return Err(Error::InvalidQuery("x has non-finite components".into()));
        }
        Ok(())
    }

    pub(crate) fn check_against(&self, problem: &dyn Problem) -> Result<()> {
        self.validate()?;
        check_dim(problem.dim(), &self.x)
    }
}

pub(crate) fn is_finite(v: &Vector) -> bool {
    v.iter().all(|c| c.is_finite())
}

pub(crate) fn check_dim(expected: usize, v: &Vector) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

pub(crate) fn finite_scalar(value: f64, source: Evaluator) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(source))
    }
}

pub(crate) fn finite_vector(v: Vector, expected: usize, source: Evaluator) -> Result<Vector> {
    if v.len() != expected || !is_finite(&v) {
        return Err(Error::NonFinite(source));
    }
    Ok(v)
}

pub(crate) fn checked_initial_value(problem: &dyn Problem, y: &Vector) -> Result<f64> {
    finite_scalar(problem.initial_value(y), Evaluator::InitialValue)
}

pub(crate) fn checked_initial_grad(problem: &dyn Problem, y: &Vector) -> Result<Vector> {
    finite_vector(problem.initial_grad(y), problem.dim(), Evaluator::InitialGrad)
}

/// `t H*((x - y) / t) + g(y)`. Undefined at `t = 0`.
pub fn hopf_lax_energy(problem: &dyn Problem, query: &Query, y: &Vector) -> Result<f64> {
    query.check_against(problem)?;
    check_dim(problem.dim(), y)?;
    if query.t == 0.0 {
        return Err(Error::ZeroTime);
    }
    let t = query.t;
    let q = (&query.x - y) / t;
    let running = finite_scalar(
        problem.hamiltonian_conjugate(&q),
        Evaluator::HamiltonianConjugate,
    )?;
    let terminal = checked_initial_value(problem, y)?;
    Ok(t * running + terminal)
}

/// `F(y) = x - t grad H(grad g(y))`; the identity onto `x` when `t = 0`.
pub fn fixed_point_map(problem: &dyn Problem, query: &Query, y: &Vector) -> Result<Vector> {
    query.check_against(problem)?;
    check_dim(problem.dim(), y)?;
    if query.t == 0.0 {
        return Ok(query.x.clone());
    }
    apply_map(problem, &query.x, query.t, y)
}

/// Unchecked inner step shared by the solvers; inputs are already validated.
pub(crate) fn apply_map(problem: &dyn Problem, x: &Vector, t: f64, y: &Vector) -> Result<Vector> {
    let dim = problem.dim();
    let p = finite_vector(problem.initial_grad(y), dim, Evaluator::InitialGrad)?;
    let v = finite_vector(problem.hamiltonian_grad(&p), dim, Evaluator::HamiltonianGrad)?;
    Ok(x - v * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{lqr_from_matrices, quadratic_problem, steady_kink_problem};
    use nalgebra::DMatrix;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn energy_quadratic_values() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 1.0).unwrap();
        assert_eq!(hopf_lax_energy(&p, &q, &v(&[0.5])).unwrap(), 0.25);
        let q0 = Query::from_slice(&[0.0], 1.0).unwrap();
        assert_eq!(hopf_lax_energy(&p, &q0, &v(&[0.0])).unwrap(), 0.0);
    }

    #[test]
    fn energy_steady_kink() {
        let p = steady_kink_problem(1).unwrap();
        let q = Query::from_slice(&[0.0], 1.0).unwrap();
        assert_eq!(hopf_lax_energy(&p, &q, &v(&[1.0])).unwrap(), -0.5);
    }

    #[test]
    fn energy_rejects_zero_time() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 0.0).unwrap();
        assert_eq!(hopf_lax_energy(&p, &q, &v(&[0.0])), Err(Error::ZeroTime));
    }

    #[test]
    fn map_values() {
        let p = quadratic_problem(1).unwrap();
        let q = Query::from_slice(&[1.0], 0.5).unwrap();
        assert_eq!(fixed_point_map(&p, &q, &v(&[1.0])).unwrap(), v(&[0.5]));

        let lqr = lqr_from_matrices(DMatrix::from_element(1, 1, 2.0), DMatrix::identity(1, 1))
            .unwrap();
        let q = Query::from_slice(&[1.0], 0.25).unwrap();
        assert_eq!(fixed_point_map(&lqr, &q, &v(&[1.0])).unwrap(), v(&[0.5]));
    }

    #[test]
    fn map_at_zero_time_is_x() {
        let p = steady_kink_problem(3).unwrap();
        let q = Query::from_slice(&[0.3, -1.0, 2.0], 0.0).unwrap();
        let y = v(&[100.0, -7.0, 0.0]);
        assert_eq!(fixed_point_map(&p, &q, &y).unwrap(), q.x);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p = quadratic_problem(2).unwrap();
        let q = Query::from_slice(&[1.0, 2.0], 0.5).unwrap();
        assert_eq!(
            fixed_point_map(&p, &q, &v(&[1.0])),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn query_validation() {
        assert!(Query::from_slice(&[1.0], -0.1).is_err());
        assert!(Query::from_slice(&[f64::NAN], 0.1).is_err());
        assert!(Query::from_slice(&[], 0.1).is_err());
    }

    struct Broken;

    impl Problem for Broken {
        fn id(&self) -> &str {
            "broken"
        }
        fn dim(&self) -> usize {
            1
        }
        fn hamiltonian(&self, _p: &Vector) -> f64 {
            0.0
        }
        fn hamiltonian_grad(&self, _p: &Vector) -> Vector {
            v(&[f64::INFINITY])
        }
        fn hamiltonian_conjugate(&self, _q: &Vector) -> f64 {
            f64::NAN
        }
        fn initial_value(&self, _y: &Vector) -> f64 {
            0.0
        }
        fn initial_grad(&self, y: &Vector) -> Vector {
            y.clone()
        }
    }

    #[test]
    fn non_finite_evaluators_are_named() {
        let q = Query::from_slice(&[1.0], 0.5).unwrap();
        assert_eq!(
            fixed_point_map(&Broken, &q, &v(&[1.0])),
            Err(Error::NonFinite(Evaluator::HamiltonianGrad))
        );
        assert_eq!(
            hopf_lax_energy(&Broken, &q, &v(&[1.0])),
            Err(Error::NonFinite(Evaluator::HamiltonianConjugate))
        );
    }
}
