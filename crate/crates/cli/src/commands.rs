//! The `solve`, `bench` and `profile` subcommands.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::json;

use hjfp::batch::{run_queries, sample_queries, SamplingDomain};
use hjfp::metrics::{aggregate, gradient_error, value_error, BenchReport, PointRecord};
use hjfp::picard::{contraction_info, error_bounds};
use hjfp::problems::{is_kink_problem, problem_by_id_seeded, DEFAULT_LQR_SEED};
use hjfp::{evaluate, Error, Evaluation, Execution, Problem, Query, SolverConfig, Vector};

use crate::report::{self, fmt_real, ProfileRow};

/// Exit status for "the solver ran but some point failed to converge".
pub const EXIT_NONCONVERGED: u8 = 2;

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Picard tolerance on the step norm.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    /// Seed for query sampling and multi-start.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seed used to generate the LQR matrices.
    #[arg(long, default_value_t = DEFAULT_LQR_SEED)]
    pub lqr_seed: u64,
}

impl SolverArgs {
    fn config(&self, multi_init: usize, alpha: Option<f64>) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            max_iters: self.max_iters,
            tolerance: self.tol,
            multi_init_count: multi_init,
            init_box_halfwidth: alpha,
            rng_seed: self.seed,
            ..SolverConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: String,
    #[arg(long)]
    pub dim: usize,
    /// Comma-separated components of x.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    #[arg(long)]
    pub t: f64,
    /// Number of random starts; 0 runs a single start from x.
    #[arg(long, default_value_t = 0)]
    pub multi_init: usize,
    /// Half-width of the start-sampling box.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Print a JSON object instead of text.
    #[arg(long)]
    pub json: bool,
}

fn fmt_vec(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|&c| fmt_real(c)).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_bound(b: Option<f64>) -> String {
    b.map(fmt_real).unwrap_or_else(|| "unavailable".into())
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<u8> {
    let problem = problem_by_id_seeded(&args.problem, args.dim, args.solver.lqr_seed)?;
    ensure!(
        args.x.len() == args.dim,
        "--x has {} components but --dim is {}",
        args.x.len(),
        args.dim
    );
    let query = Query::from_slice(&args.x, args.t)?;
    let cfg = args.solver.config(args.multi_init, args.alpha)?;
    let lf = contraction_info(problem.as_ref(), query.t);

    let eval = match evaluate(problem.as_ref(), &query, &cfg, Execution::Parallel) {
        Ok(e) => e,
        Err(e @ (Error::Diverged { .. } | Error::AllDiverged { .. })) => {
            eprintln!("error: {e}");
            if lf.available {
                eprintln!(
                    "L_F = t * L_H * L_g = {} ({})",
                    lf.modulus,
                    if lf.is_contraction { "< 1" } else { ">= 1, outside the contraction regime" }
                );
            }
            return Ok(EXIT_NONCONVERGED);
        }
        Err(e) => return Err(e.into()),
    };
    let r = eval.result();
    let bounds = error_bounds(problem.as_ref(), &query, r);
    let exact = problem.exact_solution(&query.x, query.t);
    let (value_err, grad_err) = match &exact {
        Some(e) => (Some(value_error(r.value, e.value)), Some(gradient_error(&r.gradient, &e.gradient))),
        None => (None, None),
    };

    if args.json {
        let mut obj = json!({
            "problem": problem.id(),
            "dim": problem.dim(),
            "x": query.x.as_slice(),
            "t": query.t,
            "value": r.value,
            "gradient": r.gradient.as_slice(),
            "control": r.control.as_slice(),
            "minimizer": r.minimizer.as_slice(),
            "iterations": r.iterations,
            "residual": r.final_residual,
            "converged": r.converged,
            "contraction": if lf.available { json!(lf.modulus) } else { json!(null) },
            "bounds": {
                "minimizer": bounds.minimizer_bound,
                "solution": bounds.solution_bound,
                "gradient": bounds.gradient_bound,
            },
            "value_err": value_err,
            "grad_err": grad_err,
        });
        if let Evaluation::Multi(m) = &eval {
            obj["multi_init"] = json!({
                "attempted": m.attempted,
                "converged": m.converged_count,
                "diverged": m.diverged_count,
                "fixed_points": m.fixed_points.iter().map(|f| json!({
                    "minimizer": f.minimizer.as_slice(),
                    "energy": f.energy,
                    "multiplicity": f.multiplicity,
                })).collect::<Vec<_>>(),
            });
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&obj)?)?;
    } else {
        writeln!(out, "problem    {} (d = {})", problem.id(), problem.dim())?;
        writeln!(out, "t          {}", fmt_real(query.t))?;
        writeln!(out, "value      {}", fmt_real(r.value))?;
        writeln!(out, "gradient   {}", fmt_vec(&r.gradient))?;
        writeln!(out, "control    {}", fmt_vec(&r.control))?;
        writeln!(out, "minimizer  {}", fmt_vec(&r.minimizer))?;
        writeln!(out, "iterations {}", r.iterations)?;
        writeln!(out, "residual   {}", fmt_real(r.final_residual))?;
        writeln!(out, "converged  {}", r.converged)?;
        if lf.available {
            writeln!(out, "L_F        {}", fmt_real(lf.modulus))?;
        }
        if bounds.valid() {
            writeln!(out, "bound |y - y*|        {}", fmt_bound(bounds.minimizer_bound))?;
            writeln!(out, "bound |u - u*|        {}", fmt_bound(bounds.solution_bound))?;
            writeln!(out, "bound |grad u - ..|   {}", fmt_bound(bounds.gradient_bound))?;
        }
        if let (Some(ve), Some(ge)) = (value_err, grad_err) {
            writeln!(out, "exact value error     {}", fmt_real(ve))?;
            writeln!(out, "exact gradient error  {}", fmt_real(ge))?;
        }
        if let Evaluation::Multi(m) = &eval {
            writeln!(
                out,
                "starts     {} ({} converged, {} diverged)",
                m.attempted, m.converged_count, m.diverged_count
            )?;
            for f in &m.fixed_points {
                writeln!(
                    out,
                    "  fixed point {} energy {} (x{})",
                    fmt_vec(&f.minimizer),
                    fmt_real(f.energy),
                    f.multiplicity
                )?;
            }
        }
    }

    if !r.converged {
        eprintln!(
            "warning: no convergence after {} iterations (residual {})",
            r.iterations, r.final_residual
        );
        return Ok(EXIT_NONCONVERGED);
    }
    Ok(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub problem: String,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 128)]
    pub points: usize,
    /// Half-width of the box x is drawn from (problem default if omitted).
    #[arg(long)]
    pub sample_box: Option<f64>,
    /// Range t is drawn from, as lo:hi (problem default if omitted).
    #[arg(long, value_parser = parse_range)]
    pub t_range: Option<(f64, f64)>,
    /// Starts per point; defaults to 100*d for kink problems and 0 otherwise.
    #[arg(long)]
    pub multi_init: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Report path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write one CSV row per sampled point.
    #[arg(long)]
    pub points_out: Option<PathBuf>,
    /// Write 0 in the time column so reports are byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

pub fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if !(lo <= hi) {
        return Err(format!("lower bound {lo} exceeds upper bound {hi}"));
    }
    Ok((lo, hi))
}

fn default_multi_init(problem_id: &str, dim: usize) -> usize {
    if is_kink_problem(problem_id) {
        100 * dim
    } else {
        0
    }
}

/// Runs the sampled batch for one dimension.
pub fn bench_dim(args: &BenchArgs, dim: usize) -> Result<(BenchReport, Vec<PointRecord>)> {
    let problem = problem_by_id_seeded(&args.problem, dim, args.solver.lqr_seed)?;
    let mut domain = SamplingDomain::for_problem(problem.as_ref());
    if let Some(b) = args.sample_box {
        domain.box_halfwidth = b;
    }
    if let Some(r) = args.t_range {
        domain.t_range = r;
    }
    let queries = sample_queries(dim, args.points, &domain, args.solver.seed)?;
    let n = args.multi_init.unwrap_or_else(|| default_multi_init(problem.id(), dim));
    let cfg = args.solver.config(n, None)?;
    let records = run_queries(problem.as_ref(), &queries, &cfg, Execution::Parallel)?;
    let mut rep = aggregate(problem.id(), args.solver.seed, &records)?;
    if args.no_timing {
        rep.total_time = 0.0;
    }
    Ok((rep, records))
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<u8> {
    ensure!(args.points > 0, "--points must be positive");
    let mut reports = Vec::with_capacity(args.dims.len());
    let mut all_points = Vec::new();
    let mut failed = 0usize;
    for &dim in &args.dims {
        let (rep, records) = bench_dim(args, dim)?;
        let bad = records.iter().filter(|r| !r.converged).count();
        if bad > 0 {
            eprintln!("{}: d = {dim}: {bad} of {} points did not converge", rep.problem_id, rep.n_points);
        }
        failed += bad;
        reports.push(rep);
        if args.points_out.is_some() {
            all_points.extend(records.into_iter().map(|mut r| {
                if args.no_timing {
                    r.wall_time = 0.0;
                }
                r
            }));
        }
    }

    let bytes = match args.format {
        Format::Csv => report::bench_csv(&reports)?,
        Format::Json => report::bench_json(&reports)?,
    };
    match &args.out {
        Some(path) => report::write_atomic(path, &bytes)?,
        None => out.write_all(&bytes)?,
    }
    if let Some(path) = &args.points_out {
        report::write_atomic(path, &report::points_csv(&all_points)?)?;
    }
    Ok(if failed > 0 { EXIT_NONCONVERGED } else { 0 })
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub problem: String,
    /// Only 1 is supported.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, value_parser = parse_range, default_value = "-2:2", allow_hyphen_values = true)]
    pub x_range: (f64, f64),
    #[arg(long, default_value_t = 401)]
    pub nx: usize,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',', required = true)]
    pub times: Vec<f64>,
    /// Starts per point; defaults to 100 for kink problems and 0 otherwise.
    #[arg(long)]
    pub multi_init: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

fn profile_point(problem: &dyn Problem, x: f64, t: f64, cfg: &SolverConfig) -> Result<(ProfileRow, bool)> {
    let xv = Vector::from_element(1, x);
    if t == 0.0 {
        let u = problem.initial_value(&xv);
        let g = problem.initial_grad(&xv);
        return Ok((ProfileRow { x, t, u, grad_u: g[0] }, true));
    }
    let query = Query::new(xv, t)?;
    match evaluate(problem, &query, cfg, Execution::Sequential) {
        Ok(e) => {
            let r = e.result();
            Ok((ProfileRow { x, t, u: r.value, grad_u: r.gradient[0] }, r.converged))
        }
        Err(Error::Diverged { .. } | Error::AllDiverged { .. }) => {
            Ok((ProfileRow { x, t, u: f64::NAN, grad_u: f64::NAN }, false))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_profile(args: &ProfileArgs) -> Result<u8> {
    if args.dim != 1 {
        bail!("profile supports d = 1 only, got --dim {}", args.dim);
    }
    ensure!(args.nx >= 2, "--nx must be at least 2");
    let problem = problem_by_id_seeded(&args.problem, 1, args.solver.lqr_seed)?;
    let n = args.multi_init.unwrap_or_else(|| default_multi_init(problem.id(), 1));
    let base = args.solver.config(n, None)?;
    let (lo, hi) = args.x_range;
    let step = (hi - lo) / (args.nx - 1) as f64;

    let mut grid = Vec::with_capacity(args.times.len() * args.nx);
    for &t in &args.times {
        ensure!(t >= 0.0 && t.is_finite(), "times must be nonnegative, got {t}");
        for i in 0..args.nx {
            let x = if i + 1 == args.nx { hi } else { lo + step * i as f64 };
            grid.push((grid.len(), x, t));
        }
    }
    let rows = Execution::Parallel.map_slice(&grid, |&(i, x, t)| {
        let cfg = SolverConfig {
            rng_seed: hjfp::batch::point_seed(base.rng_seed, i),
            ..base.clone()
        };
        profile_point(problem.as_ref(), x, t, &cfg)
    });
    let rows: Vec<(ProfileRow, bool)> = rows.into_iter().collect::<Result<_>>()?;
    let failed = rows.iter().filter(|(_, ok)| !ok).count();
    let rows: Vec<ProfileRow> = rows.into_iter().map(|(r, _)| r).collect();
    report::write_atomic(&args.out, &report::profile_csv(&rows)?)
        .with_context(|| format!("writing profile to {}", args.out.display()))?;
    if failed > 0 {
        eprintln!("{failed} profile points did not converge");
        return Ok(EXIT_NONCONVERGED);
    }
    Ok(0)
}
