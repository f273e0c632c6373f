//! Piecewise-linear initial data whose solutions carry kinks. Both use
//! `H(p) = |p|^2 / 2` and a fixed subgradient selection at the kinks of `g`.

use crate::problem::{ExactSolution, Problem, Vector};

/// `sign` with `sign(0) = 0`.
fn sign0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `g(x) = -|x|_1`; `u = -|x|_1 - d t / 2` with a steady kink at `x = 0`.
#[derive(Debug, Clone)]
pub struct SteadyKink {
    dim: usize,
}

impl SteadyKink {
    pub(crate) fn new(dim: usize) -> Self {
        Self { dim }
    }
}

impl Problem for SteadyKink {
    fn id(&self) -> &str {
        "steady-kink"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn hamiltonian(&self, p: &Vector) -> f64 {
        0.5 * p.norm_squared()
    }

    fn hamiltonian_grad(&self, p: &Vector) -> Vector {
        p.clone()
    }

    fn hamiltonian_conjugate(&self, q: &Vector) -> f64 {
        0.5 * q.norm_squared()
    }

    fn initial_value(&self, y: &Vector) -> f64 {
        -y.lp_norm(1)
    }

    fn initial_grad(&self, y: &Vector) -> Vector {
        y.map(|c| -sign0(c))
    }

    fn exact_solution(&self, x: &Vector, t: f64) -> Option<ExactSolution> {
        Some(ExactSolution {
            value: -x.lp_norm(1) - self.dim as f64 * t / 2.0,
            gradient: x.map(|c| -sign0(c)),
        })
    }
}

/// `g(x) = sum_i g0(x_i)` with `g0(s) = min(s, 0)`;
/// `u = sum_{x_i < t/2} (x_i - t/2)`, a kink travelling along `x_i = t / 2`.
#[derive(Debug, Clone)]
pub struct UnsteadyKink {
    dim: usize,
}

impl UnsteadyKink {
    pub(crate) fn new(dim: usize) -> Self {
        Self { dim }
    }
}

impl Problem for UnsteadyKink {
    fn id(&self) -> &str {
        "unsteady-kink"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn hamiltonian(&self, p: &Vector) -> f64 {
        0.5 * p.norm_squared()
    }

    fn hamiltonian_grad(&self, p: &Vector) -> Vector {
        p.clone()
    }

    fn hamiltonian_conjugate(&self, q: &Vector) -> f64 {
        0.5 * q.norm_squared()
    }

    fn initial_value(&self, y: &Vector) -> f64 {
        y.iter().map(|&c| c.min(0.0)).sum()
    }

    fn initial_grad(&self, y: &Vector) -> Vector {
        // Slope 0 is selected at the kink.
        y.map(|c| if c < 0.0 { 1.0 } else { 0.0 })
    }

    fn exact_solution(&self, x: &Vector, t: f64) -> Option<ExactSolution> {
        let half = t / 2.0;
        Some(ExactSolution {
            value: x.iter().filter(|&&c| c < half).map(|&c| c - half).sum(),
            gradient: x.map(|c| if c < half { 1.0 } else { 0.0 }),
        })
    }
}
