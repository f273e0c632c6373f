use crate::problem::{ExactSolution, Lipschitz, Problem, Vector};

/// `H(p) = |p|^2 / 2`, `g(x) = |x|^2 / 2`; `u = |x|^2 / (2 (1 + t))`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    dim: usize,
}

impl Quadratic {
    pub(crate) fn new(dim: usize) -> Self {
        Self { dim }
    }
}

impl Problem for Quadratic {
    fn id(&self) -> &str {
        "quadratic"
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
        0.5 * y.norm_squared()
    }

    fn initial_grad(&self, y: &Vector) -> Vector {
        y.clone()
    }

    fn lipschitz(&self) -> Lipschitz {
        Lipschitz {
            h: Some(1.0),
            g: Some(1.0),
            h_conj: Some(1.0),
        }
    }

    fn exact_solution(&self, x: &Vector, t: f64) -> Option<ExactSolution> {
        Some(ExactSolution {
            value: x.norm_squared() / (2.0 * (1.0 + t)),
            gradient: x / (1.0 + t),
        })
    }

    fn exact_minimizer(&self, x: &Vector, t: f64) -> Option<Vector> {
        Some(x / (1.0 + t))
    }
}
