//! The general-`(gamma, alpha)` engine: the product `G`, the Mellin
//! transform `H`, contour inversions for `h` and `g`, and the cross-checks
//! that tie them together.

mod engine;
mod line;
mod product;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::quad::{integrate_bessel_j0, integrate_finite, QuadConfig};
use crate::specfun::{gamma as gamma_fn, hyp2f1_b_bplus1, ln_gamma, log_gamma};
use crate::types::{EvalResult, Method, Params};

pub use engine::{LineInfo, MellinEngine};
pub use line::Weight;
pub use product::{Ladder, ProductValue};

/// Contour, product truncation and quadrature settings for the inversions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MellinConfig {
    pub contour_c: f64,
    pub product_j: usize,
    /// Number of asymptotic orders in the product tail correction, `0..=4`.
    pub tail_order: usize,
    pub quad: QuadConfig,
}

impl Default for MellinConfig {
    fn default() -> Self {
        MellinConfig { contour_c: 0.5, product_j: 8192, tail_order: 4, quad: QuadConfig::default() }
    }
}

impl MellinConfig {
    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        if self.product_j < 16 {
            return Err(Error::Domain(format!("product_J must be >= 16, got {}", self.product_j)));
        }
        if self.tail_order > 4 {
            return Err(Error::Domain(format!("tail_order must be in 0..=4, got {}", self.tail_order)));
        }
        if !self.contour_c.is_finite() {
            return Err(Error::Domain("contour_c must be finite".into()));
        }
        Ok(())
    }

    fn ladder(&self, p: &Params) -> Result<Ladder> {
        self.validate()?;
        Ladder::new(*p, self.product_j)
    }
}

/// `G_k = 1 / prod_{l=1..k} F_l`.
pub fn g_k(p: &Params, k: usize) -> Result<f64> {
    p.require_interior()?;
    let mut v = 1.0;
    for l in 1..=k {
        v /= crate::specfun::f_j(p, l)?;
    }
    Ok(v)
}

/// `G(u) = (1-alpha)^{gamma u} prod_{j>=1} F_{j+u}/F_j`; equals `G_k` at `u = k`.
///
/// The density contour integrand uses `G(-t)`.
pub fn g_interp(p: &Params, u: C64, cfg: &MellinConfig) -> Result<ProductValue> {
    let l = cfg.ladder(p)?;
    l.ln_g(u, cfg.tail_order)
}

fn ln_h(l: &Ladder, s: C64, tail_order: usize) -> Result<C64> {
    let g = l.params.gamma;
    if s.re >= 1.0 + g {
        return Err(Error::Domain(format!("H(s) needs Re s < 1 + gamma, got s = {s}")));
    }
    let t = (C64::new(1.0, 0.0) - s) / g;
    Ok(log_gamma(t + 1.0)? + l.ln_g(t, tail_order)?.ln())
}

/// Mellin transform `H(s) = int_0^inf x^{s-1} h(x) dx`, normalised so `H(1) = 1`.
pub fn mellin_h(p: &Params, s: C64, cfg: &MellinConfig) -> Result<C64> {
    let l = cfg.ladder(p)?;
    Ok(ln_h(&l, s, cfg.tail_order)?.exp())
}

/// `K(s) = (1-alpha)^s H(s) / Gamma(1 + 1/gamma - s/gamma)`.
pub fn mellin_k(p: &Params, s: C64, cfg: &MellinConfig) -> Result<C64> {
    let l = cfg.ladder(p)?;
    let g = p.gamma;
    if s.re >= 1.0 + g {
        return Err(Error::Domain(format!("K(s) needs Re s < 1 + gamma, got s = {s}")));
    }
    let t = (C64::new(1.0, 0.0) - s) / g;
    let lk = s * (1.0 - p.alpha).ln() + l.ln_g(t, cfg.tail_order)?.ln();
    Ok(lk.exp())
}

fn f_b(p: &Params, b: C64) -> Result<C64> {
    Ok(hyp2f1_b_bplus1(p, b)?.value)
}

/// `|H(s) - gamma/(1+gamma-s) F_{1+gamma-s} H(s-gamma)|`.
pub fn functional_residual(p: &Params, s: C64, cfg: &MellinConfig) -> Result<f64> {
    let l = cfg.ladder(p)?;
    let g = p.gamma;
    let b = C64::new(1.0 + g, 0.0) - s;
    let h0 = ln_h(&l, s, cfg.tail_order)?.exp();
    let h1 = ln_h(&l, s - g, cfg.tail_order)?.exp();
    Ok((h0 - b.inv() * g * f_b(p, b)? * h1).norm())
}

/// Residual of the three-term difference equation in steps `1` and `gamma`.
pub fn three_term_residual(p: &Params, s: C64, cfg: &MellinConfig) -> Result<f64> {
    let g = p.gamma;
    if s.re >= g {
        return Err(Error::Domain(format!("three-term residual needs Re s < gamma, got s = {s}")));
    }
    let l = cfg.ladder(p)?;
    let ratio = |s: C64| -> Result<C64> { Ok((ln_h(&l, s, cfg.tail_order)? - ln_h(&l, s - g, cfg.tail_order)?).exp()) };
    let a = p.alpha;
    let one = C64::new(1.0, 0.0);
    let r = (one * (1.0 + g) - s + (one - s) * a) * ratio(s)?
        + (s - 2.0) * a * ratio(s - 1.0)?
        + (s - g) * ratio(s + 1.0)?;
    Ok(r.norm())
}

/// Residual of `F_{-t} prod_{j>=1} F_{j-t}/F_j = F_inf prod_{j>=0} F_{j-t}/F_{j+1}`,
/// each side computed with its own truncated product and tail.
pub fn fprod_identity_residual(p: &Params, t: C64, cfg: &MellinConfig) -> Result<f64> {
    let l = cfg.ladder(p)?;
    let g = p.gamma;
    let u = -t;
    // left: the G product without its (1-alpha) prefactor
    let left = l.ln_g(u, cfg.tail_order)?.ln() - u * (g * (1.0 - p.alpha).ln()) + f_b(p, u * g)?.ln();
    let jm = l.j_max();
    let mut right = C64::new(p.f_inf().ln(), 0.0);
    let mut prod = C64::new(1.0, 0.0);
    for j in 0..jm {
        prod *= l.f((u + j as f64) * g)? / l.fj[j + 1];
        if j % 64 == 63 {
            right += prod.ln();
            prod = C64::new(1.0, 0.0);
        }
    }
    right += prod.ln();
    // sum_{j>=J} [ln F_{j-t} - ln F_{j+1}] = ln F_{J-t} - ln F_inf + sum_{j>J} [ln F_{j-t} - ln F_j]
    let tail = l.ln_g(u, cfg.tail_order)?.tail_correction;
    right += tail + (l.f((u + jm as f64) * g)? / p.f_inf()).ln();
    let lv = left.exp();
    Ok((lv - right.exp()).norm() / lv.norm().max(1.0))
}

/// `ln prod_{k=1..n} 2F1(gamma, 1; 2 + k gamma - s; alpha/(alpha-1)) + alpha/(1-alpha) ln(n + 1 + (2-s)/gamma)`.
pub fn product_asymptotic(p: &Params, s: C64, n: usize) -> Result<C64> {
    p.require_interior()?;
    let g = p.gamma;
    let mut acc = C64::new(0.0, 0.0);
    for k in 1..=n {
        // 2F1(gamma, 1; b+1; w) = F_b / F_inf with b = 1 + k gamma - s
        let b = C64::new(1.0 + k as f64 * g, 0.0) - s;
        acc += (f_b(p, b)? / p.f_inf()).ln();
    }
    let w = p.alpha / (1.0 - p.alpha);
    Ok(acc + (C64::new(n as f64 + 1.0, 0.0) + (C64::new(2.0, 0.0) - s) / g).ln() * w)
}

/// `(1/pi) x^{-sigma} Re int_0^inf x^{-iy} H(sigma + iy) dy` for a transform given by its logarithm.
///
/// Used for closed-form transforms; `sigma` may be placed at the real saddle of
/// `x^{-s} H(s)` so that exponentially small densities keep their relative accuracy.
pub fn invert_mellin(ln_h: impl Fn(C64) -> Result<C64>, x: f64, sigma: f64, quad: &QuadConfig) -> Result<EvalResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
    }
    let lx = x.ln();
    let base = ln_h(C64::new(sigma, 0.0))?;
    let failure = RefCell::new(None);
    let f = |y: f64| match ln_h(C64::new(sigma, y)) {
        Ok(l) => (l - base.re - C64::new(0.0, y * lx)).exp().re,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let r = crate::quad::integrate_semi_infinite(f, 0.0, quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = r?;
    let pref = (base.re - sigma * lx).exp() / std::f64::consts::PI;
    EvalResult::new(pref * r.value, pref * r.abs_err, Method::MellinBarnes).map(|e| e.with_work(r.n_evals, 0))
}

/// `h(x)` by Mellin-Barnes inversion.
pub fn density(p: &Params, x: f64, cfg: &MellinConfig) -> Result<EvalResult> {
    MellinEngine::new(*p, cfg)?.density(x)
}

/// `g(x)`: series for small `x`, contour integral for large.
pub fn generating(p: &Params, x: f64, cfg: &MellinConfig) -> Result<EvalResult> {
    MellinEngine::new(*p, cfg)?.generating(x)
}

/// `h(x) = 2 gamma x^{-gamma-1} int_0^inf u g(u^2) J0(2 x^{-gamma/2} u) du`
/// for any `g` (used for `alpha = 1`, where `g` is a Wright function).
pub fn hankel_with(gamma: f64, x: f64, g: impl Fn(f64) -> Result<f64>, quad: &QuadConfig) -> Result<EvalResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
    }
    let failure = RefCell::new(None);
    let f = |u: f64| match g(u * u) {
        Ok(v) => u * v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let scale = 2.0 * x.powf(-gamma / 2.0);
    let r = integrate_bessel_j0(f, scale, quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = r?;
    let pref = 2.0 * gamma * x.powf(-gamma - 1.0);
    EvalResult::new(pref * r.value, pref * r.abs_err, Method::Hankel).map(|e| e.with_work(r.n_evals, r.terms_used))
}

/// Hankel-transform route for `h(x)` using the generating function of the engine.
pub fn density_hankel_engine(e: &MellinEngine, x: f64, quad: &QuadConfig) -> Result<EvalResult> {
    hankel_with(e.params().gamma, x, |y| Ok(e.generating(y)?.value), quad)
}

/// Hankel-transform route for `h(x)`.
pub fn density_hankel(p: &Params, x: f64, cfg: &MellinConfig) -> Result<EvalResult> {
    let e = MellinEngine::new(*p, cfg)?;
    let quad = QuadConfig { abs_tol: 1e-9, rel_tol: 1e-6, max_subdivisions: 200 };
    density_hankel_engine(&e, x, &quad)
}

/// `F_b` for real `b`, including the Gauss sum at `alpha = 1`.
fn f_real(p: &Params, b: f64) -> Result<f64> {
    if p.is_unity() {
        p.require_subunit_gamma()?;
        let g = p.gamma;
        if (1.0 + b) <= 0.0 && (1.0 + b) == (1.0 + b).round() {
            return Err(Error::Pole(format!("F_b has a pole at b = {b}")));
        }
        return Ok(gamma_fn(1.0 - g) * gamma_fn(1.0 + b) / gamma_fn(1.0 + b - g));
    }
    Ok(f_b(p, C64::new(b, 0.0))?.re)
}

/// Large-`x` expansion `h = gamma/x sum_j (-1)^j/j! x^{-gamma(j+1)} prod_{k=0..j} F_{-k}`,
/// truncated at its smallest term.
pub fn tail_series(p: &Params, x: f64, n_terms: usize) -> Result<EvalResult> {
    check_tail_args(x, n_terms)?;
    if p.is_unity() {
        // the F_{-k} products hit 0 * inf at rational gamma; the alpha = 1 expansion converges
        let r = crate::closedform::alpha1_density_series(p.gamma, x)?;
        return EvalResult::new(r.value, r.abs_err, Method::TailSeries).map(|e| e.with_work(r.n_evals, r.terms_used));
    }
    let (sum, err, used) = tail_terms(p, x, n_terms, false)?;
    let pref = p.gamma / x;
    EvalResult::new(pref * sum, pref * err, Method::TailSeries).map(|e| e.with_work(used, used))
}

/// `1 - f(x)` from the termwise integral of the large-`x` expansion.
pub fn tail_survival(p: &Params, x: f64, n_terms: usize) -> Result<EvalResult> {
    check_tail_args(x, n_terms)?;
    p.require_interior()?;
    let (sum, err, used) = tail_terms(p, x, n_terms, true)?;
    EvalResult::new(sum, err, Method::TailSeries).map(|e| e.with_work(used, used))
}

fn check_tail_args(x: f64, n_terms: usize) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
    }
    if n_terms == 0 {
        return Err(Error::Domain("tail series needs at least one term".into()));
    }
    Ok(())
}

// Returns (sum, abs error, terms used); `integrated` divides term j by j+1.
fn tail_terms(p: &Params, x: f64, n_terms: usize, integrated: bool) -> Result<(f64, f64, usize)> {
    let g = p.gamma;
    let lx = x.ln();
    let mut ln_prod = 0.0;
    let mut sign_prod = 1.0;
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut used = 0;
    let mut err = None;
    for j in 0..n_terms {
        let b = -(j as f64) * g;
        let fk = match f_real(p, b) {
            Ok(v) => v,
            Err(Error::Pole(_)) => {
                err = Some(last);
                break;
            }
            Err(e) => return Err(e),
        };
        ln_prod += fk.abs().ln();
        sign_prod *= fk.signum();
        let jf = j as f64;
        let lnj = if integrated { ln_gamma(jf + 2.0) } else { ln_gamma(jf + 1.0) };
        let mag = (ln_prod - g * (jf + 1.0) * lx - lnj).exp();
        if mag > last {
            if j == 1 {
                return Err(Error::DivergentRegime(format!(
                    "tail series terms grow at x = {x} (|a1| = {mag:e} > |a0| = {last:e})"
                )));
            }
            err = Some(last);
            break;
        }
        let term = if j % 2 == 0 { sign_prod * mag } else { -sign_prod * mag };
        sum += term;
        last = mag;
        used = j + 1;
    }
    let trunc = err.unwrap_or(last);
    Ok((sum, trunc + 4.0 * f64::EPSILON * sum.abs(), used))
}

/// `ln x` below which `f(x) <= exp(-x^{-gamma}) < e^{-45}`.
fn cdf_floor(gamma: f64) -> f64 {
    -(45.0f64).ln() / gamma
}

/// `f(x) = int_0^x h` by quadrature of the contour density in `ln u`.
pub fn cdf_engine(e: &MellinEngine, x: f64) -> Result<EvalResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
    }
    let g = e.params().gamma;
    let v_lo = cdf_floor(g);
    let v_hi = x.ln();
    let floor = (-(x.powf(-g))).exp();
    if v_hi <= v_lo {
        return EvalResult::new(0.0, floor, Method::Quadrature);
    }
    let failure = RefCell::new(None);
    let f = |v: f64| {
        let u = v.exp();
        match e.density(u) {
            Ok(r) => r.value * u,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                0.0
            }
        }
    };
    let quad = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 200 };
    let r = integrate_finite(f, v_lo, v_hi, &quad);
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    let r = r?;
    let v = r.value.clamp(0.0, 1.0);
    EvalResult::new(v, r.abs_err + (-45.0f64).exp(), Method::Quadrature).map(|x| x.with_work(r.n_evals, 0))
}

/// `f(x) = int_0^x h(u) du`.
pub fn cdf(p: &Params, x: f64, cfg: &MellinConfig) -> Result<EvalResult> {
    cdf_engine(&MellinEngine::new(*p, cfg)?, x)
}

/// `|Gamma(t) G(-t) - int_0^inf x^{t-1} g(x) dx|` for `0 < t < 1`.
pub fn ramanujan_check_engine(e: &MellinEngine, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("ramanujan_check needs 0 < t < 1, got {t}")));
    }
    let p = e.params();
    let g = p.gamma;
    let lhs = (log_gamma(C64::new(t, 0.0))? + e.ladder().ln_g(C64::new(-t, 0.0), e.config().tail_order)?.ln()).exp().re;
    // [0, x0] term by term
    let x0: f64 = 4.0;
    let gl = e.g_values(200)?;
    let mut head = 0.0;
    for (l, gv) in gl.iter().enumerate() {
        let lf = l as f64;
        let term = gv * (lf * x0.ln() - ln_gamma(lf + 1.0)).exp() * x0.powf(t) / (lf + t);
        head += if l % 2 == 0 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    // [x0, inf) in ln x; g decays at least like x^{-1-1/gamma}
    let decay = if p.alpha == 0.0 { 1.0 } else { 1.0 + 1.0 / g - t };
    let v_hi = x0.ln() + 40.0 / decay;
    let failure = RefCell::new(None);
    let f = |v: f64| {
        let x = v.exp();
        match e.generating(x) {
            Ok(r) => r.value * (t * v).exp(),
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                0.0
            }
        }
    };
    let quad = QuadConfig { abs_tol: 1e-9, rel_tol: 1e-8, max_subdivisions: 400 };
    let r = integrate_finite(f, x0.ln(), v_hi, &quad);
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    Ok((lhs - head - r?.value).abs())
}

/// Ramanujan interpolation residual at `t`.
pub fn ramanujan_check(p: &Params, t: f64, cfg: &MellinConfig) -> Result<f64> {
    ramanujan_check_engine(&MellinEngine::new(*p, cfg)?, t)
}
