//! Built-in benchmark problems and the string-keyed registry used by the CLI.

mod cubic;
mod kink;
mod lqr;
mod nonsmooth;
mod quadratic;

pub use cubic::Cubic;
pub use kink::{SteadyKink, UnsteadyKink};
pub use lqr::{lqr_from_matrices, lqr_problem, Lqr, LqrSpec};
pub use nonsmooth::{AbsQuadratic, LogQuadratic};
pub use quadratic::Quadratic;

use crate::error::{Error, Result};
use crate::problem::Problem;

/// Seed of the default LQR realization used by the registry.
pub const DEFAULT_LQR_SEED: u64 = 20_251;

pub const PROBLEM_IDS: [&str; 7] = [
    "quadratic",
    "lqr",
    "cubic",
    "steady-kink",
    "unsteady-kink",
    "abs-quadratic",
    "log-quadratic",
];

fn require_dim(id: &str, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::UnsupportedDimension { id: id.into(), dim });
    }
    Ok(())
}

pub fn quadratic_problem(dim: usize) -> Result<Quadratic> {
    require_dim("quadratic", dim)?;
    Ok(Quadratic::new(dim))
}

pub fn cubic_problem(dim: usize) -> Result<Cubic> {
    require_dim("cubic", dim)?;
    Ok(Cubic::new(dim))
}

pub fn steady_kink_problem(dim: usize) -> Result<SteadyKink> {
    require_dim("steady-kink", dim)?;
    Ok(SteadyKink::new(dim))
}

pub fn unsteady_kink_problem(dim: usize) -> Result<UnsteadyKink> {
    require_dim("unsteady-kink", dim)?;
    Ok(UnsteadyKink::new(dim))
}

pub fn abs_quadratic_problem() -> AbsQuadratic {
    AbsQuadratic
}

pub fn log_quadratic_problem() -> LogQuadratic {
    LogQuadratic
}

/// Whether the problem's initial data has kinks, which calls for
/// multi-start solving.
pub fn is_kink_problem(id: &str) -> bool {
    matches!(id, "steady-kink" | "unsteady-kink")
}

/// Looks up a problem by id. `lqr` uses [`LqrSpec::benchmark`] with
/// `lqr_seed`; the one-dimensional problems reject `dim != 1`.
pub fn problem_by_id_seeded(id: &str, dim: usize, lqr_seed: u64) -> Result<Box<dyn Problem>> {
    let one_dim = |p: Box<dyn Problem>| {
        if dim == 1 {
            Ok(p)
        } else {
            Err(Error::UnsupportedDimension { id: id.into(), dim })
        }
    };
    match id {
        "quadratic" => Ok(Box::new(quadratic_problem(dim)?)),
        "lqr" => {
            require_dim(id, dim)?;
            Ok(Box::new(lqr_problem(&LqrSpec::benchmark(dim, lqr_seed)?)?))
        }
        "cubic" => Ok(Box::new(cubic_problem(dim)?)),
        "steady-kink" => Ok(Box::new(steady_kink_problem(dim)?)),
        "unsteady-kink" => Ok(Box::new(unsteady_kink_problem(dim)?)),
        "abs-quadratic" => one_dim(Box::new(abs_quadratic_problem())),
        "log-quadratic" => one_dim(Box::new(log_quadratic_problem())),
        other => Err(Error::UnknownProblem(other.into())),
    }
}

pub fn problem_by_id(id: &str, dim: usize) -> Result<Box<dyn Problem>> {
    problem_by_id_seeded(id, dim, DEFAULT_LQR_SEED)
}
