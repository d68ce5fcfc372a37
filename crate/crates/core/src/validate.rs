//! Global checks on computed densities: the integral equation, the
//! normalisation, the bounds, the retarded differential equation, the mode,
//! and the error tables over the standard grid.

use std::cell::RefCell;

use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::{alpha1_density, frechet_cdf, frechet_density, golden_min, mode_alpha0};
use crate::error::{Error, Result};
use crate::mellin::{tail_survival, MellinConfig, MellinEngine};
use crate::quad::{integrate_finite, QuadConfig};
use crate::specfun::gamma as gamma_fn;
use crate::types::{EvalResult, Method, Params};

/// `h` and `f` for one parameter pair by the appropriate route.
pub enum Model {
    Frechet(f64),
    Unity(f64),
    General(Box<MellinEngine>),
}

impl Model {
    pub fn new(p: &Params, cfg: &MellinConfig) -> Result<Self> {
        if p.is_frechet() {
            return Ok(Model::Frechet(p.gamma));
        }
        if p.is_unity() {
            p.require_subunit_gamma()?;
            return Ok(Model::Unity(p.gamma));
        }
        Ok(Model::General(Box::new(MellinEngine::new(*p, cfg)?)))
    }

    pub fn params(&self) -> Params {
        match self {
            Model::Frechet(g) => Params { gamma: *g, alpha: 0.0 },
            Model::Unity(g) => Params { gamma: *g, alpha: 1.0 },
            Model::General(e) => e.params(),
        }
    }

    pub fn density(&self, x: f64) -> Result<EvalResult> {
        match self {
            Model::Frechet(g) => {
                let v = frechet_density(*g, x)?;
                EvalResult::new(v, 4.0 * f64::EPSILON * v, Method::ClosedForm)
            }
            Model::Unity(g) => alpha1_density(*g, x),
            Model::General(e) => e.density(x),
        }
    }

    /// `ln x` below which the density is negligible (`f < e^{-45}`).
    pub fn log_floor(&self) -> f64 {
        match self {
            Model::Unity(g) => {
                // exponent of the small-x asymptotic reaches 45
                let c = (1.0 / g - 1.0) * (g * gamma_fn(1.0 - g)).powf(1.0 / (1.0 - g));
                (c / 45.0).ln() * (1.0 - g) / g
            }
            _ => -(45.0f64).ln() / self.params().gamma,
        }
    }

    pub fn cdf(&self, x: f64) -> Result<EvalResult> {
        match self {
            Model::Frechet(g) => {
                let v = frechet_cdf(*g, x)?;
                EvalResult::new(v, 4.0 * f64::EPSILON, Method::ClosedForm)
            }
            Model::Unity(_) => {
                let quad = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 200 };
                let r = integrate_log(self, self.log_floor(), x.ln(), &quad)?;
                EvalResult::new(r.value.clamp(0.0, 1.0), r.abs_err, Method::Quadrature)
            }
            Model::General(e) => e.cdf_mb(x),
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
    }
    Ok(())
}

/// Quadrature of `f`, re-raising the first error seen inside the integrand.
fn guarded(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, quad: &QuadConfig) -> Result<EvalResult> {
    let failure = RefCell::new(None);
    let g = |t: f64| match f(t) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let r = integrate_finite(g, a, b, quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    r
}

// int_{e^a}^{e^b} h(u) du in the variable ln u
fn integrate_log(m: &Model, a: f64, b: f64, quad: &QuadConfig) -> Result<EvalResult> {
    if b <= a {
        return EvalResult::new(0.0, 0.0, Method::Exact);
    }
    guarded(|v| Ok(m.density(v.exp())?.value * v.exp()), a, b, quad)
}

fn inner_quad() -> QuadConfig {
    QuadConfig { abs_tol: 1e-13, rel_tol: 1e-10, max_subdivisions: 400 }
}

/// `|h(x) - gamma x^{-gamma} int_0^1 h(x v) (1 - alpha v)^{-gamma} dv|`.
pub fn ie_residual_model(m: &Model, x: f64) -> Result<f64> {
    check_x(x)?;
    let p = m.params();
    let (g, a) = (p.gamma, p.alpha);
    let h = m.density(x)?.value;
    let v_lo = (m.log_floor() - x.ln()).exp().min(1.0);
    let r = guarded(|v| Ok(m.density(x * v)?.value * (1.0 - a * v).powf(-g)), v_lo, 1.0, &inner_quad())?;
    Ok((h - g * x.powf(-g) * r.value).abs())
}

pub fn ie_residual(p: &Params, x: f64, cfg: &MellinConfig) -> Result<f64> {
    ie_residual_model(&Model::new(p, cfg)?, x)
}

/// `|int_0^inf h - 1|`: quadrature in `ln x` up to where the tail expansion takes over.
pub fn norm_error_model(m: &Model) -> Result<f64> {
    let p = m.params();
    if p.is_unity() {
        return Err(Error::Domain("norm_error needs alpha < 1".into()));
    }
    let g = p.gamma;
    // the expansion drops O(1/x) relative terms, so hand over far out
    let v_hi = (20f64.ln() / g).max(1e5f64.ln());
    let quad = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-11, max_subdivisions: 400 };
    let body = integrate_log(m, m.log_floor(), v_hi, &quad)?;
    let tail = match m {
        Model::Frechet(_) => 1.0 - frechet_cdf(g, v_hi.exp())?,
        _ => tail_survival(&p, v_hi.exp(), 60)?.value,
    };
    Ok((body.value + tail - 1.0).abs())
}

pub fn norm_error(p: &Params, cfg: &MellinConfig) -> Result<f64> {
    norm_error_model(&Model::new(p, cfg)?)
}

/// `gamma x^{-gamma-1} exp(-(1-alpha)^{-gamma} x^{-gamma})` and
/// `gamma (1-alpha)^{-gamma} x^{-gamma-1} exp(-x^{-gamma})`.
pub fn density_bounds(p: &Params, x: f64) -> (f64, f64) {
    let g = p.gamma;
    let fi = p.f_inf();
    let xg = x.powf(-g);
    let base = g * xg / x;
    (base * (-fi * xg).exp(), base * fi * (-xg).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub x: f64,
    pub lower: f64,
    pub h: f64,
    pub upper: f64,
}

/// Evaluate `h` on `xs` and check it lies between the bounds within its error estimate.
pub fn bounds_check_model(m: &Model, xs: &[f64]) -> Result<Vec<BoundRow>> {
    let p = m.params();
    if p.is_unity() {
        return Err(Error::Domain("the density bounds need alpha < 1".into()));
    }
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        check_x(x)?;
        let r = m.density(x)?;
        let (lower, upper) = density_bounds(&p, x);
        let slack = r.abs_err + 1e-12 * upper;
        if r.value < lower - slack {
            return Err(Error::BoundViolation { x, detail: format!("h = {:e} below lower bound {lower:e}", r.value) });
        }
        if r.value > upper + slack {
            return Err(Error::BoundViolation { x, detail: format!("h = {:e} above upper bound {upper:e}", r.value) });
        }
        rows.push(BoundRow { x, lower, h: r.value, upper });
    }
    Ok(rows)
}

pub fn bounds_check(p: &Params, xs: &[f64], cfg: &MellinConfig) -> Result<Vec<BoundRow>> {
    bounds_check_model(&Model::new(p, cfg)?, xs)
}

/// Residual of `f' - (1-alpha)^{-gamma} gamma x^{-gamma-1} f + alpha gamma^2 x^{-gamma-1} int_0^1 (1-alpha q)^{-gamma-1} f(qx) dq`.
pub fn ddie_residual_model(m: &Model, x: f64) -> Result<f64> {
    check_x(x)?;
    let p = m.params();
    if p.is_unity() {
        return Err(Error::Domain("the retarded equation needs alpha < 1".into()));
    }
    let (g, a) = (p.gamma, p.alpha);
    let d = m.density(x)?.value;
    let f = m.cdf(x)?.value;
    let xg = x.powf(-g - 1.0);
    let q_lo = (m.log_floor() - x.ln()).exp().min(1.0);
    let integral = if a == 0.0 {
        0.0
    } else {
        guarded(|q| Ok((1.0 - a * q).powf(-g - 1.0) * m.cdf(q * x)?.value), q_lo, 1.0, &inner_quad())?.value
    };
    Ok((d - p.f_inf() * g * xg * f + a * g * g * xg * integral).abs())
}

pub fn ddie_residual(p: &Params, x: f64, cfg: &MellinConfig) -> Result<f64> {
    ddie_residual_model(&Model::new(p, cfg)?, x)
}

const SCAN_POINTS: usize = 24;

/// Location and height of the density maximum.
pub fn find_mode_model(m: &Model) -> Result<(f64, f64)> {
    let p = m.params();
    let x0 = mode_alpha0(p.gamma)?.0;
    let h = |v: f64| m.density(v.exp()).map(|r| r.value);
    let (mut lo, mut hi) = ((0.5 * x0).ln(), (4.0 * x0).ln());
    for _ in 0..40 {
        let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
        let vals = (0..SCAN_POINTS).map(|i| h(lo + step * i as f64)).collect::<Result<Vec<_>>>()?;
        let k = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        if k == 0 {
            lo -= 2.0 * (hi - lo);
            continue;
        }
        if k == SCAN_POINTS - 1 {
            hi += 2.0 * (hi - lo);
            continue;
        }
        let (a, b) = (lo + step * (k - 1) as f64, lo + step * (k + 1) as f64);
        let failure = RefCell::new(None);
        let v = golden_min(
            |v| match h(v) {
                Ok(y) => -y,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            a,
            b,
            1e-8,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        return Ok((v.exp(), h(v)?));
    }
    Err(Error::BracketFailure(format!("no interior maximum found for gamma = {}, alpha = {}", p.gamma, p.alpha)))
}

pub fn find_mode(p: &Params, cfg: &MellinConfig) -> Result<(f64, f64)> {
    find_mode_model(&Model::new(p, cfg)?)
}

pub const DEFAULT_GAMMAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
pub const DEFAULT_ALPHAS: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub gamma: f64,
    pub alpha: f64,
    pub norm_error: Option<f64>,
    pub residual_error: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub meta: MellinConfig,
}

impl TableReport {
    pub fn max_norm_error(&self) -> Option<f64> {
        self.rows.iter().map(|r| r.norm_error).try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))
    }

    pub fn max_residual_error(&self) -> Option<f64> {
        self.rows.iter().map(|r| r.residual_error).try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))
    }
}

fn table_cell(gamma: f64, alpha: f64, cfg: &MellinConfig) -> TableRow {
    let run = || -> Result<(f64, f64)> {
        let m = Model::new(&Params::new(gamma, alpha)?, cfg)?;
        Ok((norm_error_model(&m)?, ie_residual_model(&m, 1.0)?))
    };
    match run() {
        Ok((n, r)) => TableRow { gamma, alpha, norm_error: Some(n), residual_error: Some(r), failure: None },
        Err(e) => TableRow { gamma, alpha, norm_error: None, residual_error: None, failure: Some(e.to_string()) },
    }
}

/// Normalisation and integral-equation residual (at `x = 1`) over `gammas x alphas`; cells run in parallel.
pub fn build_tables(gammas: &[f64], alphas: &[f64], cfg: &MellinConfig) -> TableReport {
    let cells: Vec<(f64, f64)> = gammas.iter().flat_map(|&g| alphas.iter().map(move |&a| (g, a))).collect();
    let rows = cells.par_iter().map(|&(g, a)| table_cell(g, a, cfg)).collect();
    TableReport { rows, meta: cfg.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: f64, a: f64) -> Params {
        Params::new(g, a).unwrap()
    }

    fn cfg() -> MellinConfig {
        MellinConfig::default()
    }

    #[test]
    fn integral_equation() {
        assert!(ie_residual(&p(0.5, 0.0), 1.0, &cfg()).unwrap() < 1e-10);
        assert!(ie_residual(&p(0.25, 0.5), 1.0, &cfg()).unwrap() < 1e-5);
        assert!(ie_residual(&p(1.0, 0.6), 1.0, &cfg()).unwrap() < 1e-4);
        // endpoint singularity at alpha = 1
        assert!(ie_residual(&p(0.5, 1.0), 1.0, &cfg()).unwrap() < 1e-6);
    }

    #[test]
    fn normalisation() {
        assert!(norm_error(&p(0.7, 0.0), &cfg()).unwrap() < 1e-8);
        assert!(norm_error(&p(0.25, 0.3), &cfg()).unwrap() < 1e-4);
        assert!(norm_error(&p(0.75, 0.5), &cfg()).unwrap() < 1e-4);
    }

    #[test]
    fn bounds() {
        let xs: Vec<f64> = (0..=30).map(|i| 10f64.powf(-1.0 + i as f64 / 10.0)).collect();
        let rows = bounds_check(&p(0.5, 0.5), &xs, &cfg()).unwrap();
        assert_eq!(rows.len(), xs.len());
        let (lo, hi) = density_bounds(&p(0.5, 0.0), 2.0);
        assert_eq!(lo, hi);
        let (lo, hi) = density_bounds(&p(0.5, 1e-9), 2.0);
        assert!((hi - lo) / hi < 1e-8);
    }

    #[test]
    fn retarded_equation() {
        assert!(ddie_residual(&p(0.8, 0.0), 1.3, &cfg()).unwrap() < 1e-10);
        assert!(ddie_residual(&p(0.5, 0.25), 1.0, &cfg()).unwrap() < 1e-4);
        assert!(ddie_residual(&p(0.75, 0.5), 2.0, &cfg()).unwrap() < 1e-4);
    }

    #[test]
    fn modes() {
        let (x, h) = find_mode(&p(1.0, 0.0), &cfg()).unwrap();
        assert!((x - 0.5).abs() < 1e-6 && (h - 4.0 * (-2.0f64).exp()).abs() < 1e-12);
        let (x1, h1) = find_mode(&p(0.5, 1.0), &cfg()).unwrap();
        assert!((x1 - 0.523599).abs() < 1e-5 && (h1 - 0.294463).abs() < 1e-6, "{x1} {h1}");
        let (xh, hh) = find_mode(&p(0.5, 0.5), &cfg()).unwrap();
        let (x0, h0) = find_mode(&p(0.5, 0.0), &cfg()).unwrap();
        assert!(x0 < xh && xh < x1);
        assert!(h0 > hh && hh > h1);
    }

    #[test]
    fn table_cells_report_failures() {
        let bad = table_cell(0.5, 2.0, &cfg());
        assert!(bad.failure.is_some() && bad.norm_error.is_none());
    }
}
