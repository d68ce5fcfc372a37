use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use alphasun_core::closedform::{
    alpha1_density, alpha1_density_mb, alpha1_density_rational, alpha1_density_series, alpha1_generating,
    alpha1_mellin, frechet_density, frechet_mellin, large_gamma_density, RationalGamma,
};
use alphasun_core::laplace::{laplace_alpha1, laplace_cf, laplace_series};
use alphasun_core::mellin::{density_hankel_engine, hankel_with, mellin_h, tail_series, MellinEngine};
use alphasun_core::simulate::{empirical_vs_limit, ks_critical, run_path_with};
use alphasun_core::validate::{build_tables, Model, DEFAULT_ALPHAS, DEFAULT_GAMMAS};
use alphasun_core::{Complex64, Error, EvalResult, InputDist, Method, Params, SimConfig, TableReport};
use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::output::{Cell, Format, Table};
use crate::settings::{Settings, TolArgs};

#[derive(Parser, Debug)]
#[command(name = "alphasun", version, about = "Densities and transforms of the alpha-sun limit law")]
pub struct Cli {
    /// CSV output (default)
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,
    /// JSON output; errors are reported as JSON on stderr
    #[arg(long, global = true)]
    pub json: bool,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Evaluate h(x; gamma, alpha) on a grid
    Density(DensityArgs),
    /// Evaluate H(s), g(x) or L(z)
    Transform {
        #[command(subcommand)]
        kind: TransformKind,
    },
    /// Normalisation and integral-equation tables
    Validate(ValidateArgs),
    /// Monte Carlo of the recursion and KS distance to the limit
    Simulate(SimulateArgs),
    /// Write the density curves behind a figure, one CSV per curve
    Figures(FiguresArgs),
}

#[derive(clap::Args, Debug)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<Params> {
        Ok(Params::new(self.gamma, self.alpha)?)
    }
}

#[derive(clap::Args, Debug)]
pub struct GridArgs {
    /// Points, comma separated or repeated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    /// Log-spaced grid `a:b:n`
    #[arg(long)]
    pub x_log: Option<String>,
    /// Linearly spaced grid `a:b:n`
    #[arg(long)]
    pub x_lin: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensityMethod {
    Auto,
    Mb,
    Series,
    Closed,
    Hankel,
    Tail,
}

#[derive(clap::Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = DensityMethod::Auto)]
    pub method: DensityMethod,
    /// Terms of the large-x tail expansion
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LaplaceMethod {
    Auto,
    Cf,
    Series,
}

#[derive(Subcommand, Debug)]
pub enum TransformKind {
    /// H(s) = E[X^{s-1}]
    Mellin {
        #[command(flatten)]
        params: ParamArgs,
        /// Real s (shorthand for --re s --im 0)
        #[arg(long, allow_negative_numbers = true, conflicts_with = "re")]
        s: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        re: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im: f64,
    },
    /// g(x)
    Generating {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// L(z) = int_0^inf e^{-zx} g(x) dx
    Laplace {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_delimiter = ',')]
        z: Vec<f64>,
        /// Log-spaced grid `a:b:n`
        #[arg(long)]
        z_log: Option<String>,
        #[arg(long, value_enum, default_value_t = LaplaceMethod::Auto)]
        method: LaplaceMethod,
    },
}

#[derive(clap::Args, Debug)]
pub struct ValidateArgs {
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    /// Sets both thresholds
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = 1e-4)]
    pub norm_threshold: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub residual_threshold: f64,
    /// Directory for norm_errors.csv, residual_errors.csv and validate_summary.json
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Pareto,
    Frechet,
}

#[derive(clap::Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Steps per path
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = InputKind::Pareto)]
    pub input: InputKind,
    /// Defaults to 1/gamma
    #[arg(long)]
    pub norming_exponent: Option<f64>,
    /// Write the sorted normalised endpoints here
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Write `n,y` along path 0 here
    #[arg(long)]
    pub dump_path: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Alpha1,
    G025,
    G050,
    G075,
    G100,
    Glarge,
}

#[derive(clap::Args, Debug)]
pub struct FiguresArgs {
    #[arg(value_enum)]
    pub id: FigureId,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Right end of the x range (figure default otherwise)
    #[arg(long)]
    pub x_max: Option<f64>,
}

/// A validation cell exceeded its threshold or failed.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ThresholdExceeded(pub String);

struct Ctx {
    format: Format,
    settings: Settings,
}

impl Ctx {
    fn meta(&self, command: &str, params: Value) -> Value {
        json!({
            "command": command,
            "params": params,
            "config": self.settings,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    fn emit(&self, table: &Table, meta: Value) -> Result<()> {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        self.format.emit(table, meta, &mut out)?;
        out.flush()?;
        Ok(())
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        format: if cli.json { Format::Json } else { Format::Csv },
        settings: Settings::resolve(&cli.tol)?,
    };
    match cli.cmd {
        Cmd::Density(a) => density(&ctx, &a),
        Cmd::Transform { kind } => transform(&ctx, &kind),
        Cmd::Validate(a) => validate(&ctx, &a),
        Cmd::Simulate(a) => simulate(&ctx, &a),
        Cmd::Figures(a) => figures(&ctx, &a),
    }
}

fn domain(msg: String) -> anyhow::Error {
    Error::Domain(msg).into()
}

/// `a:b:n` into its three parts.
fn parse_range(spec: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || domain(format!("grid spec `{spec}` must be a:b:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() || (n > 1 && b <= a) {
        return Err(bad());
    }
    Ok((a, b, n))
}

fn lin_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub fn log_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a > 0.0) {
        return Err(domain(format!("log grid needs a positive left end, got {a}")));
    }
    Ok(lin_grid(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect())
}

fn grid(points: &[f64], log: Option<&str>, lin: Option<&str>, name: &str) -> Result<Vec<f64>> {
    let mut xs = points.to_vec();
    if let Some(spec) = log {
        let (a, b, n) = parse_range(spec)?;
        xs.extend(log_grid(a, b, n)?);
    }
    if let Some(spec) = lin {
        let (a, b, n) = parse_range(spec)?;
        xs.extend(lin_grid(a, b, n));
    }
    if xs.is_empty() {
        return Err(domain(format!("no {name} values given")));
    }
    Ok(xs)
}

fn record(x: f64, r: &EvalResult) -> Vec<Cell> {
    vec![x.into(), r.value.into(), r.abs_err.into(), r.method.as_str().into()]
}

fn closed(v: f64, method: Method) -> Result<EvalResult> {
    Ok(EvalResult::new(v, 4.0 * f64::EPSILON * v.abs(), method)?)
}

/// Evaluates `h` with a fixed method; engines are built once per grid.
struct DensityEval {
    p: Params,
    method: DensityMethod,
    model: Option<Model>,
    engine: Option<MellinEngine>,
    settings: Settings,
    terms: usize,
}

impl DensityEval {
    fn new(p: Params, method: DensityMethod, settings: &Settings, terms: usize) -> Result<Self> {
        let cfg = settings.mellin();
        let needs_engine = matches!(method, DensityMethod::Mb | DensityMethod::Hankel) && !p.is_unity();
        let model = match method {
            DensityMethod::Auto => Some(Model::new(&p, &cfg)?),
            _ => None,
        };
        let engine = if needs_engine { Some(MellinEngine::new(p, &cfg)?) } else { None };
        match method {
            DensityMethod::Series if !p.is_unity() => {
                return Err(domain("the density series is only available at alpha = 1".into()))
            }
            DensityMethod::Closed if !p.is_frechet() && !p.is_unity() && p.gamma <= 1.0 => {
                return Err(domain(format!(
                    "no closed form at (gamma, alpha) = ({}, {}); closed forms cover alpha = 0, alpha = 1 and gamma > 1",
                    p.gamma, p.alpha
                )))
            }
            DensityMethod::Tail => p.require_interior()?,
            _ => {}
        }
        Ok(DensityEval { p, method, model, engine, settings: settings.clone(), terms })
    }

    fn eval(&self, x: f64) -> Result<EvalResult> {
        let (g, quad) = (self.p.gamma, self.settings.quad());
        let r = match self.method {
            DensityMethod::Auto => self.model.as_ref().expect("built for auto").density(x)?,
            DensityMethod::Mb if self.p.is_unity() => alpha1_density_mb(g, x, &quad)?,
            DensityMethod::Mb => self.engine.as_ref().expect("built for mb").density(x)?,
            DensityMethod::Series => alpha1_density_series(g, x)?,
            DensityMethod::Closed if self.p.is_frechet() => closed(frechet_density(g, x)?, Method::ClosedForm)?,
            DensityMethod::Closed if self.p.is_unity() => match RationalGamma::detect(g) {
                Some(r) => closed(alpha1_density_rational(r, x)?, Method::ClosedForm)?,
                None => alpha1_density(g, x)?,
            },
            DensityMethod::Closed => closed(large_gamma_density(&self.p, x)?, Method::Asymptotic)?,
            DensityMethod::Hankel if self.p.is_unity() => {
                hankel_with(g, x, |u| Ok(alpha1_generating(g, u)?.value), &quad)?
            }
            DensityMethod::Hankel => density_hankel_engine(self.engine.as_ref().expect("built for hankel"), x, &quad)?,
            DensityMethod::Tail => tail_series(&self.p, x, self.terms)?,
        };
        Ok(r)
    }
}

fn density_table(eval: &DensityEval, xs: &[f64]) -> Result<Table> {
    let mut t = Table::new(&["x", "value", "abs_err", "method"]);
    for &x in xs {
        let r = eval.eval(x).with_context(|| format!("density at x = {x}"))?;
        t.push(record(x, &r));
    }
    Ok(t)
}

fn density(ctx: &Ctx, a: &DensityArgs) -> Result<()> {
    let p = a.params.params()?;
    let xs = grid(&a.grid.x, a.grid.x_log.as_deref(), a.grid.x_lin.as_deref(), "x")?;
    let eval = DensityEval::new(p, a.method, &ctx.settings, a.terms)?;
    let t = density_table(&eval, &xs)?;
    ctx.emit(&t, ctx.meta("density", json!({ "gamma": p.gamma, "alpha": p.alpha, "method": format!("{:?}", a.method).to_lowercase() })))
}

fn mellin_value(p: &Params, s: Complex64, settings: &Settings) -> Result<(Complex64, f64, Method)> {
    if p.is_frechet() {
        let v = frechet_mellin(p.gamma, s)?;
        return Ok((v, 4.0 * f64::EPSILON * v.norm(), Method::ClosedForm));
    }
    if p.is_unity() {
        let v = alpha1_mellin(p.gamma, s)?;
        return Ok((v, 4.0 * f64::EPSILON * v.norm(), Method::ClosedForm));
    }
    let cfg = settings.mellin();
    let v = mellin_h(p, s, &cfg)?;
    // halving the product truncation gives a conservative error estimate
    let mut coarse = cfg.clone();
    coarse.product_j = (cfg.product_j / 2).max(16);
    let err = (mellin_h(p, s, &coarse)? - v).norm();
    Ok((v, err, Method::Product))
}

fn transform(ctx: &Ctx, kind: &TransformKind) -> Result<()> {
    match kind {
        TransformKind::Mellin { params, s, re, im } => {
            let p = params.params()?;
            let s = Complex64::new(s.or(*re).ok_or_else(|| domain("give --s or --re".into()))?, *im);
            let (v, err, m) = mellin_value(&p, s, &ctx.settings)?;
            let mut t = Table::new(&["s_re", "s_im", "value_re", "value_im", "abs_err", "method"]);
            t.push(vec![s.re.into(), s.im.into(), v.re.into(), v.im.into(), err.into(), m.as_str().into()]);
            ctx.emit(&t, ctx.meta("transform mellin", json!({ "gamma": p.gamma, "alpha": p.alpha })))
        }
        TransformKind::Generating { params, grid: g } => {
            let p = params.params()?;
            let xs = grid(&g.x, g.x_log.as_deref(), g.x_lin.as_deref(), "x")?;
            let engine = if p.is_frechet() || p.is_unity() { None } else { Some(MellinEngine::new(p, &ctx.settings.mellin())?) };
            let mut t = Table::new(&["x", "value", "abs_err", "method"]);
            for &x in &xs {
                if !(x >= 0.0) {
                    return Err(domain(format!("generating function needs x >= 0, got {x}")));
                }
                let r = match &engine {
                    _ if p.is_frechet() => closed((-x).exp(), Method::ClosedForm)?,
                    _ if p.is_unity() => alpha1_generating(p.gamma, x)?,
                    Some(e) => e.generating(x)?,
                    None => unreachable!("engine exists for 0 < alpha < 1"),
                };
                t.push(record(x, &r));
            }
            ctx.emit(&t, ctx.meta("transform generating", json!({ "gamma": p.gamma, "alpha": p.alpha })))
        }
        TransformKind::Laplace { params, z, z_log, method } => {
            let p = params.params()?;
            let zs = grid(z, z_log.as_deref(), None, "z")?;
            let tol = ctx.settings.cf_tol;
            let mut t = Table::new(&["z", "value", "abs_err", "method"]);
            for &zv in &zs {
                if !(zv > 0.0) || !zv.is_finite() {
                    return Err(domain(format!("z must be positive and finite, got {zv}")));
                }
                let r = match method {
                    LaplaceMethod::Series => laplace_series(&p, zv, 100_000)?,
                    LaplaceMethod::Cf => laplace_cf(&p, zv, tol)?,
                    // at alpha = 1 the convergents cancel for small z; the Mittag-Leffler form does not
                    LaplaceMethod::Auto if p.is_unity() => match laplace_cf(&p, zv, tol) {
                        Err(Error::ToleranceNotMet { .. }) => laplace_alpha1(p.gamma, zv)?,
                        r => r?,
                    },
                    LaplaceMethod::Auto => laplace_cf(&p, zv, tol)?,
                };
                t.push(record(zv, &r));
            }
            ctx.emit(&t, ctx.meta("transform laplace", json!({ "gamma": p.gamma, "alpha": p.alpha })))
        }
    }
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn validate(ctx: &Ctx, a: &ValidateArgs) -> Result<()> {
    let gammas = if a.gamma.is_empty() { DEFAULT_GAMMAS.to_vec() } else { a.gamma.clone() };
    let alphas = if a.alpha.is_empty() { DEFAULT_ALPHAS.to_vec() } else { a.alpha.clone() };
    let (tn, tr) = a.threshold.map_or((a.norm_threshold, a.residual_threshold), |t| (t, t));
    let report: TableReport = build_tables(&gammas, &alphas, &ctx.settings.mellin());

    let mut all = Table::new(&["gamma", "alpha", "norm_error", "residual_error", "failure"]);
    let mut norm = Table::new(&["gamma", "alpha", "norm_error", "failure"]);
    let mut resid = Table::new(&["gamma", "alpha", "residual_error", "failure"]);
    for r in &report.rows {
        let fail: Cell = r.failure.clone().map_or(Cell::Null, Cell::Str);
        all.push(vec![r.gamma.into(), r.alpha.into(), r.norm_error.into(), r.residual_error.into(), fail.clone()]);
        norm.push(vec![r.gamma.into(), r.alpha.into(), r.norm_error.into(), fail.clone()]);
        resid.push(vec![r.gamma.into(), r.alpha.into(), r.residual_error.into(), fail]);
    }
    let failures = report.rows.iter().filter(|r| r.failure.is_some()).count();
    let (mn, mr) = (report.max_norm_error(), report.max_residual_error());
    let pass = failures == 0 && mn.is_some_and(|v| v <= tn) && mr.is_some_and(|v| v <= tr);

    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    write_file(&a.out_dir.join("norm_errors.csv"), |w| norm.write_csv(w))?;
    write_file(&a.out_dir.join("residual_errors.csv"), |w| resid.write_csv(w))?;
    let meta = ctx.meta("validate", json!({ "gammas": gammas, "alphas": alphas }));
    let summary = json!({
        "meta": meta,
        "cells": report.rows.len(),
        "failures": failures,
        "max_norm_error": mn,
        "max_residual_error": mr,
        "norm_threshold": tn,
        "residual_threshold": tr,
        "pass": pass,
    });
    write_file(&a.out_dir.join("validate_summary.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &summary)?;
        writeln!(w)?;
        Ok(())
    })?;
    ctx.emit(&all, meta)?;
    if !pass {
        return Err(ThresholdExceeded(format!(
            "validation failed: {failures} failed cells, max norm error {mn:?} (threshold {tn}), max residual {mr:?} (threshold {tr})"
        ))
        .into());
    }
    Ok(())
}

fn simulate(ctx: &Ctx, a: &SimulateArgs) -> Result<()> {
    let p = a.params.params()?;
    let mut cfg = SimConfig::new(p, a.n, a.paths, a.seed);
    cfg.input_dist = match a.input {
        InputKind::Pareto => InputDist::Pareto(p.gamma),
        InputKind::Frechet => InputDist::Frechet(p.gamma),
    };
    if let Some(e) = a.norming_exponent {
        cfg.norming_exponent = e;
    }
    cfg.validate()?;
    if let Some(path) = &a.dump_path {
        let mut t = Table::new(&["n", "y"]);
        run_path_with(&cfg, 0, |n, y| t.push(vec![Cell::Int(n as u64), y.into()]))?;
        write_file(path, |w| t.write_csv(w))?;
    }
    if let Some(path) = &a.samples {
        let ys = alphasun_core::simulate::normalised_samples(&cfg)?;
        let mut t = Table::new(&["y"]);
        ys.into_iter().for_each(|y| t.push(vec![y.into()]));
        write_file(path, |w| t.write_csv(w))?;
    }
    let (ks, crit) = if a.paths >= 100 {
        let model = Model::new(&p, &ctx.settings.mellin())?;
        let ks = empirical_vs_limit(&cfg, |x| model.cdf(x).map(|e| e.value))?;
        (Some(ks), Some(ks_critical(a.paths, 0.01)))
    } else {
        (None, None)
    };
    let mut t = Table::new(&["gamma", "alpha", "n_steps", "n_paths", "seed", "norming", "ks", "ks_critical_1pct"]);
    t.push(vec![
        p.gamma.into(),
        p.alpha.into(),
        Cell::Int(a.n as u64),
        Cell::Int(a.paths as u64),
        Cell::Int(a.seed),
        cfg.norming().into(),
        ks.into(),
        crit.into(),
    ]);
    let input = format!("{:?}", a.input).to_lowercase();
    ctx.emit(&t, ctx.meta("simulate", json!({ "gamma": p.gamma, "alpha": p.alpha, "input": input })))
}

struct Figure {
    gamma: Vec<f64>,
    alpha: Vec<f64>,
    x_max: f64,
}

fn figure(id: FigureId) -> Figure {
    let quarters = vec![0.0, 0.25, 0.5, 0.75, 1.0];
    match id {
        FigureId::Alpha1 => Figure { gamma: vec![0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.75], alpha: vec![1.0], x_max: 2.0 },
        FigureId::G025 => Figure { gamma: vec![0.25], alpha: quarters, x_max: 0.05 },
        FigureId::G050 => Figure { gamma: vec![0.5], alpha: quarters, x_max: 2.0 },
        FigureId::G075 => Figure { gamma: vec![0.75], alpha: quarters, x_max: 2.0 },
        FigureId::G100 => Figure { gamma: vec![1.0], alpha: vec![0.0, 0.25, 0.5, 0.75], x_max: 3.0 },
        FigureId::Glarge => Figure { gamma: vec![4.0], alpha: vec![0.0, 0.25, 0.5, 0.75, 0.875], x_max: 3.0 },
    }
}

fn figures(ctx: &Ctx, a: &FiguresArgs) -> Result<()> {
    let fig = figure(a.id);
    let x_max = a.x_max.unwrap_or(fig.x_max);
    if !(x_max > 0.0) || a.points < 2 {
        return Err(domain(format!("need x_max > 0 and at least 2 points, got {x_max} and {}", a.points)));
    }
    let xs = lin_grid(x_max / a.points as f64, x_max, a.points);
    let name = format!("{:?}", a.id).to_lowercase();
    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let mut index = Table::new(&["file", "gamma", "alpha", "rows"]);
    for &g in &fig.gamma {
        for &al in &fig.alpha {
            let p = Params::new(g, al)?;
            let method = if a.id == FigureId::Glarge { DensityMethod::Closed } else { DensityMethod::Auto };
            let t = density_table(&DensityEval::new(p, method, &ctx.settings, 40)?, &xs)
                .with_context(|| format!("figure {name}, gamma = {g}, alpha = {al}"))?;
            let file = if fig.gamma.len() > 1 {
                format!("{name}_gamma{:.4}.csv", g)
            } else {
                format!("{name}_alpha{:.4}.csv", al)
            };
            write_file(&a.out_dir.join(&file), |w| t.write_csv(w))?;
            index.push(vec![file.into(), g.into(), al.into(), Cell::Int(t.rows.len() as u64)]);
        }
    }
    ctx.emit(&index, ctx.meta("figures", json!({ "id": name, "points": a.points, "x_max": x_max })))
}
