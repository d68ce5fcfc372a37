//! Mellin-Barnes inversion for the density, survival function and
//! generating function at one parameter pair.

use std::sync::{Arc, Mutex};

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::line::{Kernel, Line, LineSum, Weight};
use super::product::Ladder;
use super::MellinConfig;
use crate::error::{Error, Result};
use crate::quad::{integrate_finite, QuadConfig};
use crate::specfun::ln_gamma;
use crate::types::{EvalResult, Method, Params};

/// Largest series term tolerated before the generating function switches to inversion.
const SERIES_MAX_TERM: f64 = 1e6;

/// Diagnostics describing one contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineInfo {
    pub c: f64,
    pub y_max: f64,
    pub panels: usize,
    pub interp_err: f64,
    pub decay_rate: f64,
    pub g_evals: usize,
}

impl From<&Line> for LineInfo {
    fn from(l: &Line) -> Self {
        LineInfo {
            c: l.c,
            y_max: l.y_max,
            panels: l.n_panels(),
            interp_err: l.interp_err,
            decay_rate: l.decay_rate,
            g_evals: l.g_evals,
        }
    }
}

#[derive(Default)]
struct KernelCache {
    h: Vec<Arc<Kernel>>,
    g: Vec<Arc<Kernel>>,
}

/// Contour data for one `(gamma, alpha)`; cheap to query once built.
pub struct MellinEngine {
    params: Params,
    cfg: MellinConfig,
    ladder: Ladder,
    h_line: Line,
    g_line: Mutex<Option<Arc<Line>>>,
    kernels: Mutex<KernelCache>,
}

fn bucket(omega: f64) -> f64 {
    let mut b = 2.0;
    while b < omega {
        b *= 2.0;
    }
    b
}

impl MellinEngine {
    pub fn new(params: Params, cfg: &MellinConfig) -> Result<Self> {
        params.require_interior()?;
        cfg.validate()?;
        if !(cfg.contour_c < 1.0) {
            return Err(Error::Domain(format!("density inversion needs contour_c < 1, got {}", cfg.contour_c)));
        }
        let ladder = Ladder::new(params, cfg.product_j)?;
        let h_line = Line::build(&ladder, cfg.contour_c, Weight::Density, cfg.tail_order)?;
        Ok(MellinEngine {
            params,
            cfg: cfg.clone(),
            ladder,
            h_line,
            g_line: Mutex::new(None),
            kernels: Mutex::new(KernelCache::default()),
        })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn config(&self) -> &MellinConfig {
        &self.cfg
    }

    pub fn ladder(&self) -> &Ladder {
        &self.ladder
    }

    pub fn density_line(&self) -> LineInfo {
        LineInfo::from(&self.h_line)
    }

    /// Contour abscissa used for the generating-function inversion.
    pub fn generating_c(&self) -> f64 {
        0.5 + 1.0 / self.params.gamma
    }

    fn g_line(&self) -> Result<Arc<Line>> {
        let mut slot = self.g_line.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(l) = slot.as_ref() {
            return Ok(l.clone());
        }
        let l = Arc::new(Line::build(&self.ladder, self.generating_c(), Weight::Generating, self.cfg.tail_order)?);
        *slot = Some(l.clone());
        Ok(l)
    }

    pub fn generating_line(&self) -> Result<LineInfo> {
        Ok(LineInfo::from(self.g_line()?.as_ref()))
    }

    fn phase_rate(&self) -> f64 {
        self.params.gamma * (1.0 - self.params.alpha).ln().abs()
    }

    fn kernel(&self, weight: Weight, omega: f64) -> Result<Arc<Kernel>> {
        let b = bucket(omega.abs());
        {
            let cache = self.kernels.lock().unwrap_or_else(|e| e.into_inner());
            let list = if weight == Weight::Density { &cache.h } else { &cache.g };
            if let Some(k) = list.iter().find(|k| k.omega == b) {
                return Ok(k.clone());
            }
        }
        let k = match weight {
            Weight::Density => Arc::new(Kernel::build(&self.h_line, b, self.phase_rate())?),
            Weight::Generating => Arc::new(Kernel::build(self.g_line()?.as_ref(), b, self.phase_rate())?),
        };
        let mut cache = self.kernels.lock().unwrap_or_else(|e| e.into_inner());
        let list = if weight == Weight::Density { &mut cache.h } else { &mut cache.g };
        if let Some(k) = list.iter().find(|k| k.omega == b) {
            return Ok(k.clone());
        }
        list.push(k.clone());
        Ok(k)
    }

    /// Build kernels ahead of time for arguments in `[x_lo, x_hi]`.
    pub fn prepare(&self, x_lo: f64, x_hi: f64) -> Result<()> {
        let l = x_lo.ln().abs().max(x_hi.ln().abs());
        self.kernel(Weight::Density, self.params.gamma * l)?;
        Ok(())
    }

    fn check_x(x: f64) -> Result<()> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
        }
        Ok(())
    }

    fn finish(&self, value: f64, abs_err: f64, n: usize, quad: &QuadConfig) -> Result<EvalResult> {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("Mellin-Barnes inversion gave {value}")));
        }
        if abs_err > quad.abs_tol.max(quad.rel_tol * value.abs()) {
            return Err(Error::ToleranceNotMet { value, abs_err });
        }
        EvalResult::new(value, abs_err, Method::MellinBarnes).map(|e| e.with_work(n, self.cfg.product_j))
    }

    fn density_sum(&self, x: f64) -> Result<(f64, LineSum)> {
        let g = self.params.gamma;
        let lx = x.ln();
        let k = self.kernel(Weight::Density, g * lx)?;
        let s = k.integrate(g * lx, |_| C64::new(1.0, 0.0));
        let pref = (-g * self.cfg.contour_c * lx).exp() * g / (PI * x);
        Ok((pref, s))
    }

    /// `h(x)` by the fixed-node contour sum; negative round-off is clipped to zero.
    pub fn density(&self, x: f64) -> Result<EvalResult> {
        Self::check_x(x)?;
        let (pref, s) = self.density_sum(x)?;
        let (mut v, err) = (pref * s.value, pref * s.abs_err);
        if v < 0.0 {
            if v < -err.max(1e-300) {
                return Err(Error::Convergence(format!("negative density {v:e} at x = {x} beyond abs_err {err:e}")));
            }
            v = 0.0;
        }
        self.finish(v, err, s.n_evals, &self.cfg.quad)
    }

    /// `1 - f(x)` from the contour integral with the extra factor `1/t`.
    pub fn survival(&self, x: f64) -> Result<EvalResult> {
        Self::check_x(x)?;
        let c = self.cfg.contour_c;
        if !(c > 0.0) {
            return Err(Error::Domain(format!("survival inversion needs 0 < contour_c < 1, got {c}")));
        }
        let g = self.params.gamma;
        let lx = x.ln();
        let k = self.kernel(Weight::Density, g * lx)?;
        let s = k.integrate(g * lx, |t| t.inv());
        let pref = (-g * c * lx).exp() / PI;
        self.finish((pref * s.value).clamp(0.0, 1.0), pref * s.abs_err, s.n_evals, &self.cfg.quad)
    }

    /// `f(x) = 1 - survival(x)`.
    pub fn cdf_mb(&self, x: f64) -> Result<EvalResult> {
        let s = self.survival(x)?;
        EvalResult::new(1.0 - s.value, s.abs_err, Method::MellinBarnes).map(|e| e.with_work(s.n_evals, s.terms_used))
    }

    /// `h(x)` by adaptive quadrature along the same contour (cross-check).
    pub fn density_adaptive(&self, x: f64) -> Result<EvalResult> {
        Self::check_x(x)?;
        let g = self.params.gamma;
        let lx = x.ln();
        let line = &self.h_line;
        let quad = QuadConfig { abs_tol: 1e-300, rel_tol: 1e-11, max_subdivisions: 1000 };
        let f = |y: f64| match line.phi(y) {
            Ok(p) => (C64::from_polar(1.0, -g * lx * y) * p).re,
            Err(_) => f64::NAN,
        };
        let scale = line.ln_peak.exp();
        let quad = QuadConfig { abs_tol: 1e-15 * scale, ..quad };
        let r = integrate_finite(f, 0.0, line.y_max, &quad)?;
        let pref = (-g * self.cfg.contour_c * lx).exp() * g / (PI * x);
        let err = pref * (r.abs_err + line.ln_end.exp() * 2.0 / PI + line.interp_err * scale * line.y_max);
        self.finish((pref * r.value).max(0.0), err, r.n_evals, &self.cfg.quad)
    }

    /// `G_l` for `l = 0..=n` (beyond the ladder the factors are computed directly).
    pub fn g_values(&self, n: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut v = 1.0;
        out.push(v);
        for l in 1..=n {
            let f = if l <= self.ladder.j_max() {
                self.ladder.fj[l]
            } else {
                self.ladder.f(C64::new(l as f64 * self.params.gamma, 0.0))?.re
            };
            v /= f;
            out.push(v);
        }
        Ok(out)
    }

    /// The alternating series for `g`; `None` once terms exceed the cancellation budget.
    pub fn generating_series(&self, x: f64) -> Result<Option<EvalResult>> {
        if x == 0.0 {
            return EvalResult::new(1.0, 0.0, Method::Exact).map(Some);
        }
        let lx = x.ln();
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut ln_g = 0.0;
        let mut prev = f64::INFINITY;
        for l in 0..100_000usize {
            if l > 0 {
                let f = if l <= self.ladder.j_max() {
                    self.ladder.fj[l]
                } else {
                    self.ladder.f(C64::new(l as f64 * self.params.gamma, 0.0))?.re
                };
                ln_g -= f.ln();
            }
            let lf = l as f64;
            let t = (lf * lx - ln_gamma(lf + 1.0) + ln_g).exp();
            if t > SERIES_MAX_TERM {
                return Ok(None);
            }
            sum += if l % 2 == 0 { t } else { -t };
            abs_sum += t * (1.0 + lf);
            if t < prev && t <= 1e-17 * sum.abs().max(1e-300) {
                let err = 4.0 * f64::EPSILON * abs_sum + t;
                return EvalResult::new(sum, err, Method::Series).map(|e| Some(e.with_work(l + 1, l + 1)));
            }
            prev = t;
        }
        Err(Error::Convergence(format!("generating series at x = {x} did not converge")))
    }

    /// `g(x)` by the contour integral only.
    pub fn generating_mb(&self, x: f64) -> Result<EvalResult> {
        Self::check_x(x)?;
        let lx = x.ln();
        let k = self.kernel(Weight::Generating, lx)?;
        let s = k.integrate(lx, |_| C64::new(1.0, 0.0));
        let pref = (-self.generating_c() * lx).exp() / PI;
        self.finish(pref * s.value, pref * s.abs_err, s.n_evals, &self.cfg.quad)
    }

    /// `g(x)`: series for small `x`, contour integral otherwise.
    pub fn generating(&self, x: f64) -> Result<EvalResult> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("generating function needs finite x >= 0, got {x}")));
        }
        if let Some(r) = self.generating_series(x)? {
            return Ok(r);
        }
        self.generating_mb(x)
    }
}
