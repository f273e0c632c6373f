use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where multi-start initial guesses are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SamplingCenter {
    /// `x + [-alpha, alpha]^d`.
    #[default]
    Query,
    /// `[-alpha, alpha]^d`.
    Origin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once `||y_{k+1} - y_k||_2 < tolerance`.
    pub tolerance: f64,
    /// Number of random starts; 0 runs a single start at `y0 = x`.
    pub multi_init_count: usize,
    /// Half-width `alpha` of the sampling box. `None` picks
    /// `2 (1 + ||x||_inf + t)` per query.
    pub init_box_halfwidth: Option<f64>,
    pub sampling_center: SamplingCenter,
    /// Converged minimizers closer than this are treated as one fixed point.
    pub dedup_tolerance: f64,
    /// An iterate whose norm exceeds this aborts the run as divergent.
    pub divergence_threshold: f64,
    pub rng_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            tolerance: 1e-6,
            multi_init_count: 0,
            init_box_halfwidth: None,
            sampling_center: SamplingCenter::Query,
            dedup_tolerance: 1e-6,
            divergence_threshold: 1e12,
            rng_seed: 0,
        }
    }
}

/// Library default number of starts for interactive multi-start use.
pub const DEFAULT_MULTI_INIT: usize = 32;

impl SolverConfig {
    pub fn with_multi_init(mut self, n: usize) -> Self {
        self.multi_init_count = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !(self.dedup_tolerance > 0.0 && self.dedup_tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "dedup_tolerance must be positive, got {}",
                self.dedup_tolerance
            )));
        }
        if !(self.divergence_threshold > 0.0) {
            return Err(Error::InvalidConfig(
                "divergence_threshold must be positive".into(),
            ));
        }
        if let Some(alpha) = self.init_box_halfwidth {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "init_box_halfwidth must be positive, got {alpha}"
                )));
            }
        }
        Ok(())
    }
}
