//! Report files: benchmark rows as CSV or JSON, per-point records, and 1D
//! solution profiles. Reals are written with 17 significant digits so that
//! parsing a file reproduces the in-memory values exactly.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use hjfp::metrics::{BenchReport, PointRecord};

pub const BENCH_HEADER: [&str; 10] = [
    "problem",
    "dim",
    "n_points",
    "l2_u",
    "linf_u",
    "l2_grad",
    "linf_grad",
    "time_s",
    "mean_iters",
    "seed",
];

/// Formats a real with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn bench_csv(reports: &[BenchReport]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(BENCH_HEADER)?;
    for r in reports {
        w.write_record([
            r.problem_id.clone(),
            r.dim.to_string(),
            r.n_points.to_string(),
            fmt_real(r.l2_value_err),
            fmt_real(r.linf_value_err),
            fmt_real(r.l2_grad_err),
            fmt_real(r.linf_grad_err),
            fmt_real(r.total_time),
            fmt_real(r.mean_iterations),
            r.seed.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn parse_bench_csv(data: &[u8]) -> Result<Vec<BenchReport>> {
    let mut r = csv::Reader::from_reader(data);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    anyhow::ensure!(
        header == BENCH_HEADER,
        "unexpected bench header: {}",
        header.join(",")
    );
    r.deserialize()
        .map(|row| row.context("malformed bench row"))
        .collect()
}

pub fn bench_json(reports: &[BenchReport]) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(reports)?;
    out.push(b'\n');
    Ok(out)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

/// Per-point rows; `x` components are joined with `;`.
pub fn points_csv(records: &[PointRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "dim",
        "index",
        "t",
        "x",
        "u",
        "value_err",
        "grad_err",
        "iterations",
        "time_s",
        "converged",
    ])?;
    for (i, r) in records.iter().enumerate() {
        let x: Vec<String> = r.query.x.iter().map(|&c| fmt_real(c)).collect();
        w.write_record([
            r.query.dim().to_string(),
            i.to_string(),
            fmt_real(r.query.t),
            x.join(";"),
            fmt_real(r.value),
            fmt_opt(r.value_err),
            fmt_opt(r.grad_err),
            r.iterations.to_string(),
            fmt_real(r.wall_time),
            r.converged.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

/// One row of a solution profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub grad_u: f64,
}

pub fn profile_csv(rows: &[ProfileRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "t", "u", "grad_u"])?;
    for r in rows {
        w.write_record([fmt_real(r.x), fmt_real(r.t), fmt_real(r.u), fmt_real(r.grad_u)])?;
    }
    Ok(w.into_inner()?)
}

pub fn parse_profile_csv(data: &[u8]) -> Result<Vec<ProfileRow>> {
    let mut r = csv::Reader::from_reader(data);
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .context("short profile row")?
                .parse::<f64>()
                .context("bad real in profile")
        };
        rows.push(ProfileRow {
            x: field(0)?,
            t: field(1)?,
            u: field(2)?,
            grad_u: field(3)?,
        });
    }
    Ok(rows)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(data)?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
