//! Linear-quadratic regulator with random SPD cost matrices.
//!
//! `u(x, t) = min (1/2) int_0^t q^T R q ds + (1/2) y(0)^T Q y(0)` subject to
//! `y' = q`, `y(t) = x`. Then `H(p) = p^T R^-1 p / 2`, `g(y) = y^T Q y / 2` and
//! the Hopf-Lax minimizer solves `(I + t R^-1 Q) y = x`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::problem::{ExactSolution, Lipschitz, Problem, Vector};

const SYMMETRY_TOL: f64 = 1e-12;
const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 100_000;

/// Cost matrices of an LQR instance and how they were generated.
#[derive(Debug, Clone, PartialEq)]
pub struct LqrSpec {
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub scale_q: f64,
    pub scale_r: f64,
    pub seed: u64,
}

impl LqrSpec {
    /// `Q = s1 (A^T A + I)`, `R = s2 (B^T B + I)` with `A` then `B` drawn
    /// row-major with standard normal entries from one seeded stream.
    pub fn generate(dim: usize, scale_q: f64, scale_r: f64, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension {
                id: "lqr".into(),
                dim,
            });
        }
        if !(scale_q > 0.0 && scale_r > 0.0) {
            return Err(Error::InvalidArgument("LQR scale factors must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || -> DMatrix<f64> {
            let entries: Vec<f64> = (0..dim * dim)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            DMatrix::from_row_slice(dim, dim, &entries)
        };
        let a = draw();
        let b = draw();
        let eye = DMatrix::<f64>::identity(dim, dim);
        let q = (a.transpose() * &a + &eye) * scale_q;
        let r = (b.transpose() * &b + &eye) * scale_r;
        Ok(Self {
            q: symmetrize(q),
            r: symmetrize(r),
            scale_q,
            scale_r,
            seed,
        })
    }

    /// Default benchmark realization: `s1 = s2 = 1/d`.
    pub fn benchmark(dim: usize, seed: u64) -> Result<Self> {
        let s = 1.0 / dim.max(1) as f64;
        Self::generate(dim, s, s, seed)
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

#[derive(Debug, Clone)]
pub struct Lqr {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
    r_inv: DMatrix<f64>,
    /// `R^-1 Q`
    r_inv_q: DMatrix<f64>,
    lip_h: f64,
    lip_g: f64,
    lip_h_conj: f64,
    map_norm: f64,
}

impl Lqr {
    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn r(&self) -> &DMatrix<f64> {
        &self.r
    }

    /// Spectral norm `||R^-1 Q||_2`; iteration converges for `t` below its
    /// reciprocal.
    pub fn map_norm(&self) -> f64 {
        self.map_norm
    }

    /// `(I + t R^-1 Q)^-1 x`.
    pub fn closed_form_minimizer(&self, x: &Vector, t: f64) -> Vector {
        let dim = x.len();
        let system = DMatrix::<f64>::identity(dim, dim) + &self.r_inv_q * t;
        system
            .lu()
            .solve(x)
            .expect("I + t R^-1 Q is nonsingular for t >= 0")
    }
}

fn check_spd(m: &DMatrix<f64>, name: &'static str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSpd(name));
    }
    let asym = (m - m.transpose()).amax();
    if asym > SYMMETRY_TOL * m.amax().max(1.0) || m.iter().any(|c| !c.is_finite()) {
        return Err(Error::NotSpd(name));
    }
    m.clone().cholesky().map(|_| ()).ok_or(Error::NotSpd(name))
}

/// Largest eigenvalue of a symmetric positive semidefinite matrix.
pub(crate) fn power_iteration(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    // Not all-ones, to stay off any structured eigenvector.
    let mut v = DVector::from_fn(n, |i, _| 1.0 + (i as f64 + 1.0).sqrt() * 1e-3);
    v.normalize_mut();
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let w = m * &v;
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / norm;
        if (next - lambda).abs() <= POWER_TOL * next.abs() {
            return next.max(norm);
        }
        lambda = next;
    }
    lambda
}

pub fn lqr_problem(spec: &LqrSpec) -> Result<Lqr> {
    lqr_from_matrices(spec.q.clone(), spec.r.clone())
}

pub fn lqr_from_matrices(q: DMatrix<f64>, r: DMatrix<f64>) -> Result<Lqr> {
    check_spd(&q, "Q")?;
    check_spd(&r, "R")?;
    if q.nrows() != r.nrows() {
        return Err(Error::DimensionMismatch {
            expected: q.nrows(),
            got: r.nrows(),
        });
    }
    let r_inv = r
        .clone()
        .cholesky()
        .ok_or(Error::NotSpd("R"))?
        .inverse();
    let r_inv = symmetrize(r_inv);
    let r_inv_q = &r_inv * &q;
    let lip_h = power_iteration(&r_inv);
    let lip_g = power_iteration(&q);
    let lip_h_conj = power_iteration(&r);
    let map_norm = power_iteration(&(r_inv_q.transpose() * &r_inv_q)).sqrt();
    Ok(Lqr {
        q,
        r,
        r_inv,
        r_inv_q,
        lip_h,
        lip_g,
        lip_h_conj,
        map_norm,
    })
}

impl Problem for Lqr {
    fn id(&self) -> &str {
        "lqr"
    }

    fn dim(&self) -> usize {
        self.q.nrows()
    }

    fn hamiltonian(&self, p: &Vector) -> f64 {
        0.5 * p.dot(&(&self.r_inv * p))
    }

    fn hamiltonian_grad(&self, p: &Vector) -> Vector {
        &self.r_inv * p
    }

    fn hamiltonian_conjugate(&self, q: &Vector) -> f64 {
        0.5 * q.dot(&(&self.r * q))
    }

    fn initial_value(&self, y: &Vector) -> f64 {
        0.5 * y.dot(&(&self.q * y))
    }

    fn initial_grad(&self, y: &Vector) -> Vector {
        &self.q * y
    }

    fn lipschitz(&self) -> Lipschitz {
        Lipschitz {
            h: Some(self.lip_h),
            g: Some(self.lip_g),
            h_conj: Some(self.lip_h_conj),
        }
    }

    fn exact_solution(&self, x: &Vector, t: f64) -> Option<ExactSolution> {
        let y = self.closed_form_minimizer(x, t);
        let gradient = &self.q * &y;
        Some(ExactSolution {
            value: 0.5 * x.dot(&gradient),
            gradient,
        })
    }

    fn exact_minimizer(&self, x: &Vector, t: f64) -> Option<Vector> {
        Some(self.closed_form_minimizer(x, t))
    }

    fn convergence_time_limit(&self) -> Option<f64> {
        Some(1.0 / self.map_norm)
    }
}
