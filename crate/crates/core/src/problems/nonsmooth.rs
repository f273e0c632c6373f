//! One-dimensional Burgers problems (`H(p) = p^2 / 2`) with initial data that
//! is not globally Lipschitz-smooth. No closed forms; used for profiles.

use crate::problem::{Problem, Vector};

fn burgers_h(p: &Vector) -> f64 {
    0.5 * p[0] * p[0]
}

/// `g(x) = x |x|`.
#[derive(Debug, Clone, Default)]
pub struct AbsQuadratic;

impl Problem for AbsQuadratic {
    fn id(&self) -> &str {
        "abs-quadratic"
    }

    fn dim(&self) -> usize {
        1
    }

    fn hamiltonian(&self, p: &Vector) -> f64 {
        burgers_h(p)
    }

    fn hamiltonian_grad(&self, p: &Vector) -> Vector {
        p.clone()
    }

    fn hamiltonian_conjugate(&self, q: &Vector) -> f64 {
        burgers_h(q)
    }

    fn initial_value(&self, y: &Vector) -> f64 {
        y[0] * y[0].abs()
    }

    fn initial_grad(&self, y: &Vector) -> Vector {
        Vector::from_element(1, 2.0 * y[0].abs())
    }
}

/// `g(x) = x^2 log(2 + |x|)`.
#[derive(Debug, Clone, Default)]
pub struct LogQuadratic;

impl Problem for LogQuadratic {
    fn id(&self) -> &str {
        "log-quadratic"
    }

    fn dim(&self) -> usize {
        1
    }

    fn hamiltonian(&self, p: &Vector) -> f64 {
        burgers_h(p)
    }

    fn hamiltonian_grad(&self, p: &Vector) -> Vector {
        p.clone()
    }

    fn hamiltonian_conjugate(&self, q: &Vector) -> f64 {
        burgers_h(q)
    }

    fn initial_value(&self, y: &Vector) -> f64 {
        let s = y[0];
        s * s * (2.0 + s.abs()).ln()
    }

    fn initial_grad(&self, y: &Vector) -> Vector {
        let s = y[0];
        let a = 2.0 + s.abs();
        // s^2 sign(s) = s |s|
        Vector::from_element(1, 2.0 * s * a.ln() + s * s.abs() / a)
    }
}
