//! Mesh-free, derivative-free evaluation of viscosity solutions of
//! first-order Hamilton-Jacobi equations
//!
//! ```text
//! u_t + H(grad u) = 0,   u(x, 0) = g(x)
//! ```
//!
//! with convex `H`. Each query `(x, t)` is answered independently by Picard
//! iteration on `y -> x - t grad H(grad g(y))`, whose fixed point is the
//! minimizer of the Hopf-Lax formula `u(x, t) = min_y t H*((x - y)/t) + g(y)`.
//! From the minimizer `y*` come the value, the gradient `grad g(y*)` and the
//! optimal control `(x - y*) / t`.
//!
//! When `g` has kinks the map can have several fixed points;
//! [`multistart::solve_multistart`] runs many seeded starts and keeps the one
//! with the lowest Hopf-Lax energy.
//!
//! ```
//! use hjfp::{picard, problems, Query, SolverConfig};
//!
//! let problem = problems::quadratic_problem(3).unwrap();
//! let query = Query::from_slice(&[1.0, 0.0, -1.0], 0.5).unwrap();
//! let result = picard::solve(&problem, &query, &SolverConfig::default()).unwrap();
//! assert!(result.converged);
//! assert!((result.value - 2.0 / 3.0).abs() < 1e-6);
//! ```

pub mod batch;
pub mod config;
pub mod error;
pub mod exec;
pub mod metrics;
pub mod multistart;
pub mod oracle;
pub mod picard;
pub mod problem;
pub mod problems;

pub use config::{SamplingCenter, SolverConfig};
pub use error::{Error, Evaluator, Result};
pub use exec::Execution;
pub use multistart::{evaluate, Evaluation, MultiStartResult};
pub use picard::{ContractionInfo, ErrorBounds, SolveResult};
pub use problem::{fixed_point_map, hopf_lax_energy, ExactSolution, Lipschitz, Problem, Query, Vector};
