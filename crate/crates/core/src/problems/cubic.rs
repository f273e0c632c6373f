use crate::problem::{Problem, Vector};

/// `H(p) = |p|^3 / 3`, `g(x) = |x|^3`, with `H*(q) = (2/3) |q|^{3/2}`.
///
/// Neither gradient is globally Lipschitz and there is no closed-form
/// solution; results are checked against the grid oracle and stationarity.
#[derive(Debug, Clone)]
pub struct Cubic {
    dim: usize,
}

impl Cubic {
    pub(crate) fn new(dim: usize) -> Self {
        Self { dim }
    }
}

impl Problem for Cubic {
    fn id(&self) -> &str {
        "cubic"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn hamiltonian(&self, p: &Vector) -> f64 {
        p.norm().powi(3) / 3.0
    }

    fn hamiltonian_grad(&self, p: &Vector) -> Vector {
        p * p.norm()
    }

    fn hamiltonian_conjugate(&self, q: &Vector) -> f64 {
        2.0 / 3.0 * q.norm().powf(1.5)
    }

    fn initial_value(&self, y: &Vector) -> f64 {
        y.norm().powi(3)
    }

    fn initial_grad(&self, y: &Vector) -> Vector {
        y * (3.0 * y.norm())
    }
}
