//! Per-point error records and their aggregation into benchmark rows.
//!
//! "L2" aggregates are mean squared errors, not root-mean-square; "Linf"
//! aggregates are maxima. Per-point gradient errors are the max-abs
//! difference over components.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Query, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub query: Query,
    pub value: f64,
    /// `|u - u_ref|`, when a reference is available.
    pub value_err: Option<f64>,
    /// `max_i |grad_i u - grad_i u_ref|`, when a reference is available.
    pub grad_err: Option<f64>,
    pub iterations: usize,
    /// Seconds spent inside the solver call.
    pub wall_time: f64,
    pub converged: bool,
}

/// One benchmark row. Serialized names match the CSV header
/// `problem,dim,n_points,l2_u,linf_u,l2_grad,linf_grad,time_s,mean_iters,seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    #[serde(rename = "problem")]
    pub problem_id: String,
    pub dim: usize,
    pub n_points: usize,
    #[serde(rename = "l2_u")]
    pub l2_value_err: f64,
    #[serde(rename = "linf_u")]
    pub linf_value_err: f64,
    #[serde(rename = "l2_grad")]
    pub l2_grad_err: f64,
    #[serde(rename = "linf_grad")]
    pub linf_grad_err: f64,
    #[serde(rename = "time_s")]
    pub total_time: f64,
    #[serde(rename = "mean_iters")]
    pub mean_iterations: f64,
    pub seed: u64,
}

pub fn value_error(value: f64, reference: f64) -> f64 {
    (value - reference).abs()
}

pub fn gradient_error(gradient: &Vector, reference: &Vector) -> f64 {
    (gradient - reference).amax()
}

/// Mean of squares and maximum; NaN for both when `errs` is empty.
fn mse_and_max(errs: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut n = 0usize;
    let mut sum_sq = 0.0;
    let mut max = 0.0f64;
    for e in errs {
        n += 1;
        sum_sq += e * e;
        max = max.max(e);
    }
    if n == 0 {
        (f64::NAN, f64::NAN)
    } else {
        (sum_sq / n as f64, max)
    }
}

/// Aggregates point records into a report row. Records without a reference
/// are skipped in the error columns; if none has one, those columns are NaN.
pub fn aggregate(problem_id: &str, seed: u64, records: &[PointRecord]) -> Result<BenchReport> {
    let first = records.first().ok_or(Error::EmptyRecords)?;
    let n = records.len();
    let (l2_u, linf_u) = mse_and_max(records.iter().filter_map(|r| r.value_err));
    let (l2_g, linf_g) = mse_and_max(records.iter().filter_map(|r| r.grad_err));
    Ok(BenchReport {
        problem_id: problem_id.to_string(),
        dim: first.query.dim(),
        n_points: n,
        l2_value_err: l2_u,
        linf_value_err: linf_u,
        l2_grad_err: l2_g,
        linf_grad_err: linf_g,
        total_time: records.iter().map(|r| r.wall_time).sum(),
        mean_iterations: records.iter().map(|r| r.iterations as f64).sum::<f64>() / n as f64,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(value_err: f64, grad_err: f64) -> PointRecord {
        PointRecord {
            query: Query::from_slice(&[0.0, 0.0], 0.2).unwrap(),
            value: 0.0,
            value_err: Some(value_err),
            grad_err: Some(grad_err),
            iterations: 3,
            wall_time: 0.5,
            converged: true,
        }
    }

    #[test]
    fn single_record() {
        let r = aggregate("quadratic", 1, &[record(1e-8, 0.0)]).unwrap();
        assert!((r.l2_value_err - 1e-16).abs() < 1e-30);
        assert_eq!(r.linf_value_err, 1e-8);
        assert_eq!(r.dim, 2);
        assert_eq!(r.n_points, 1);
    }

    #[test]
    fn two_records() {
        let r = aggregate("quadratic", 1, &[record(0.0, 0.0), record(2e-8, 1e-3)]).unwrap();
        assert!((r.l2_value_err - 2e-16).abs() < 1e-30);
        assert_eq!(r.linf_value_err, 2e-8);
        assert!((r.l2_grad_err - 5e-7).abs() < 1e-20);
        assert_eq!(r.total_time, 1.0);
        assert_eq!(r.mean_iterations, 3.0);
    }

    #[test]
    fn empty_is_rejected() {
        assert_eq!(aggregate("q", 0, &[]), Err(Error::EmptyRecords));
    }

    #[test]
    fn missing_references_give_nan() {
        let mut r = record(0.0, 0.0);
        r.value_err = None;
        r.grad_err = None;
        let rep = aggregate("cubic", 0, &[r]).unwrap();
        assert!(rep.l2_value_err.is_nan() && rep.linf_grad_err.is_nan());
    }

    #[test]
    fn error_helpers() {
        let a = Vector::from_column_slice(&[1.0, -2.0]);
        let b = Vector::from_column_slice(&[1.5, -1.0]);
        assert_eq!(gradient_error(&a, &b), 1.0);
        assert_eq!(value_error(-1.0, 2.0), 3.0);
    }

    proptest! {
        #[test]
        fn mean_square_bounded_by_max_square(errs in prop::collection::vec(0.0f64..1.0, 1..50)) {
            let recs: Vec<_> = errs.iter().map(|&e| record(e, e)).collect();
            let r = aggregate("q", 0, &recs).unwrap();
            prop_assert!(r.l2_value_err <= r.linf_value_err * r.linf_value_err * (1.0 + 1e-12));
        }

        #[test]
        fn permutation_invariant(errs in prop::collection::vec(0.0f64..1.0, 1..30), rot in 0usize..30) {
            let recs: Vec<_> = errs.iter().map(|&e| record(e, 2.0 * e)).collect();
            let mut rotated = recs.clone();
            let k = rot % rotated.len();
            rotated.rotate_left(k);
            rotated.reverse();
            let a = aggregate("q", 0, &recs).unwrap();
            let b = aggregate("q", 0, &rotated).unwrap();
            prop_assert_eq!(a.linf_value_err, b.linf_value_err);
            prop_assert_eq!(a.linf_grad_err, b.linf_grad_err);
            prop_assert!((a.l2_value_err - b.l2_value_err).abs() <= 1e-13 * a.l2_value_err.max(1e-300));
            prop_assert!((a.l2_grad_err - b.l2_grad_err).abs() <= 1e-13 * a.l2_grad_err.max(1e-300));
        }
    }
}
