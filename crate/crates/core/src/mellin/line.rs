//! Precomputed Mellin-Barnes contours.
//!
//! A [`Line`] is a piecewise Chebyshev interpolant of `ln G(-t)` along
//! `Re t = c`; a [`Kernel`] holds Gauss-Kronrod nodes on that line with the
//! full integrand weight `Gamma(1-t) G(-t)` or `Gamma(t) G(-t)` baked in,
//! fine enough to resolve a prescribed oscillation rate.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::product::Ladder;
use crate::error::{Error, Result};
use crate::quad::{gk_nodes, rescale_error, GK15};
use crate::specfun::log_gamma;

const CHEB_N: usize = 16;
const LINE_TOL: f64 = 1e-12;
const MIN_WIDTH: f64 = 1.0 / 64.0;
const MAX_WIDTH: f64 = 2.0;
/// `ln(1e18)`: the contour stops once the weight falls this far below its peak.
const DECAY_SPAN: f64 = 41.5;
const Y_CAP: f64 = 2000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `Gamma(1-t)`, for the density and survival function.
    Density,
    /// `Gamma(t)`, for the generating function.
    Generating,
}

impl Weight {
    fn ln_gamma(self, t: C64) -> Result<C64> {
        match self {
            Weight::Density => log_gamma(C64::new(1.0, 0.0) - t),
            Weight::Generating => log_gamma(t),
        }
    }
}

#[derive(Debug, Clone)]
struct ChebPanel {
    lo: f64,
    hi: f64,
    vals: [C64; CHEB_N + 1],
}

fn cheb_node(k: usize) -> f64 {
    (PI * k as f64 / CHEB_N as f64).cos()
}

fn wrap(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

impl ChebPanel {
    fn eval(&self, y: f64) -> C64 {
        let s = (2.0 * y - self.lo - self.hi) / (self.hi - self.lo);
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        for k in 0..=CHEB_N {
            let d = s - cheb_node(k);
            if d.abs() < 1e-15 {
                return self.vals[k];
            }
            let mut lam = if k % 2 == 0 { 1.0 } else { -1.0 };
            if k == 0 || k == CHEB_N {
                lam *= 0.5;
            }
            num += self.vals[k] * (lam / d);
            den += lam / d;
        }
        num / den
    }
}

/// Chebyshev interpolant of `ln G(-t)` on `t = c + iy`, `0 <= y <= y_max`.
#[derive(Debug, Clone)]
pub struct Line {
    pub c: f64,
    pub weight: Weight,
    panels: Vec<ChebPanel>,
    pub y_max: f64,
    /// Peak of `ln |weight * G|` on the line.
    pub ln_peak: f64,
    /// `ln |weight * G|` at `y_max`.
    pub ln_end: f64,
    /// Largest interpolation discrepancy seen at the check points.
    pub interp_err: f64,
    /// Observed exponential decay rate of the integrand over the last half of the line.
    pub decay_rate: f64,
    pub g_evals: usize,
    /// Distance from the line to the nearest singularity of the integrand.
    pub pole_distance: f64,
}

impl Line {
    pub fn build(ladder: &Ladder, c: f64, weight: Weight, tail_order: usize) -> Result<Line> {
        let g = ladder.params.gamma;
        let pole_distance = match weight {
            Weight::Density => (1.0 - c).min(1.0 + 1.0 / g - c),
            Weight::Generating => c.min(1.0 + 1.0 / g - c),
        };
        if !(pole_distance > 0.0) {
            return Err(Error::Domain(format!("contour abscissa {c} is not inside the strip of analyticity")));
        }
        let evals = std::cell::Cell::new(0usize);
        let ln_g = |y: f64| -> Result<C64> {
            evals.set(evals.get() + 1);
            Ok(ladder.ln_g(-C64::new(c, y), tail_order)?.ln())
        };
        let mut panels: Vec<ChebPanel> = Vec::new();
        let mut lo = 0.0;
        let mut width = MAX_WIDTH.min(pole_distance);
        let mut interp_err: f64 = 0.0;
        let mut ln_peak = f64::NEG_INFINITY;
        let mut mid_ln = None;
        let ln_abs = |y: f64, lg: C64| -> Result<f64> { Ok((weight.ln_gamma(C64::new(c, y))? + lg).re) };
        loop {
            let hi = lo + width;
            let mut vals = [C64::new(0.0, 0.0); CHEB_N + 1];
            for k in (0..=CHEB_N).rev() {
                let y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * cheb_node(k);
                let mut v = ln_g(y)?;
                if k < CHEB_N {
                    let prev = vals[k + 1].im;
                    v.im = prev + wrap(v.im - prev);
                }
                vals[k] = v;
            }
            let panel = ChebPanel { lo, hi, vals };
            let mut err: f64 = 0.0;
            for s in [0.31, -0.67] {
                let y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * s;
                let d = panel.eval(y) - ln_g(y)?;
                err = err.max(d.re.abs() + wrap(d.im).abs());
            }
            if err > LINE_TOL && width > MIN_WIDTH {
                width *= 0.5;
                continue;
            }
            interp_err = interp_err.max(err);
            for k in 0..=CHEB_N {
                let y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * cheb_node(k);
                ln_peak = ln_peak.max(ln_abs(y, panel.vals[k])?);
            }
            let ln_end = ln_abs(hi, panel.vals[0])?;
            panels.push(panel);
            lo = hi;
            if mid_ln.is_none() && lo >= 8.0 {
                mid_ln = Some((lo, ln_end));
            }
            if ln_end < ln_peak - DECAY_SPAN && lo >= 4.0 {
                let decay_rate = match mid_ln {
                    Some((ym, lm)) if lo > ym => (lm - ln_end) / (lo - ym),
                    _ => f64::NAN,
                };
                return Ok(Line {
                    c,
                    weight,
                    panels,
                    y_max: lo,
                    ln_peak,
                    ln_end,
                    interp_err,
                    decay_rate,
                    g_evals: evals.get(),
                    pole_distance,
                });
            }
            if lo > Y_CAP {
                return Err(Error::Convergence(format!(
                    "Mellin-Barnes integrand has not decayed by Im t = {lo} (ln|.| = {ln_end}, peak {ln_peak})"
                )));
            }
            width = (width * 2.0).min(MAX_WIDTH);
        }
    }

    /// Interpolated `ln G(-c - iy)` for `0 <= y <= y_max`.
    pub fn ln_g(&self, y: f64) -> C64 {
        let idx = self.panels.partition_point(|p| p.hi < y).min(self.panels.len() - 1);
        self.panels[idx].eval(y)
    }

    /// Integrand weight times `G(-t)` at `t = c + iy`.
    pub fn phi(&self, y: f64) -> Result<C64> {
        let t = C64::new(self.c, y);
        Ok((self.weight.ln_gamma(t)? + self.ln_g(y)).exp())
    }

    pub fn n_panels(&self) -> usize {
        self.panels.len()
    }
}

/// Fixed Gauss-Kronrod discretisation of a [`Line`] resolving phases up to `omega`.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub omega: f64,
    pub c: f64,
    y: Vec<f64>,
    t: Vec<C64>,
    phi: Vec<C64>,
    wk: Vec<f64>,
    wg: Vec<f64>,
    halves: Vec<f64>,
    tail: f64,
    interp_err: f64,
}

/// Integral value with its error budget.
#[derive(Debug, Clone, Copy)]
pub struct LineSum {
    pub value: f64,
    pub abs_err: f64,
    pub n_evals: usize,
}

const PER_PANEL: usize = 15;

impl Kernel {
    pub fn build(line: &Line, omega: f64, gamma_alpha_rate: f64) -> Result<Kernel> {
        let rate = omega + (line.y_max + 2.0).ln() + gamma_alpha_rate + 1.0;
        let width = (2.0 / rate).min(0.6 * line.pole_distance).min(1.0);
        let n = (line.y_max / width).ceil() as usize;
        let h = line.y_max / n as f64;
        let rule = gk_nodes(&GK15);
        let mut k = Kernel {
            omega,
            c: line.c,
            y: Vec::with_capacity(n * PER_PANEL),
            t: Vec::with_capacity(n * PER_PANEL),
            phi: Vec::with_capacity(n * PER_PANEL),
            wk: Vec::with_capacity(n * PER_PANEL),
            wg: Vec::with_capacity(n * PER_PANEL),
            halves: vec![0.5 * h; n],
            tail: line.ln_end.exp() * 2.0 / PI,
            interp_err: line.interp_err,
        };
        for p in 0..n {
            let mid = (p as f64 + 0.5) * h;
            for &(x, wk, wg) in &rule {
                let y = mid + 0.5 * h * x;
                k.y.push(y);
                k.t.push(C64::new(line.c, y));
                k.phi.push(line.phi(y)?);
                k.wk.push(wk);
                k.wg.push(wg);
            }
        }
        Ok(k)
    }

    /// `Re int_0^Y e^{-i rate y} extra(t) phi(t) dy`, with panel-wise error estimates.
    pub fn integrate(&self, rate: f64, extra: impl Fn(C64) -> C64) -> LineSum {
        let mut value = 0.0;
        let mut err = 0.0;
        let mut absum = 0.0;
        let mut f = [0.0f64; PER_PANEL];
        for (p, half) in self.halves.iter().enumerate() {
            let base = p * PER_PANEL;
            let (mut rk, mut rg, mut ra) = (0.0, 0.0, 0.0);
            for i in 0..PER_PANEL {
                let j = base + i;
                let (s, c) = (rate * self.y[j]).sin_cos();
                let v = (C64::new(c, -s) * self.phi[j] * extra(self.t[j])).re;
                f[i] = v;
                rk += self.wk[j] * v;
                rg += self.wg[j] * v;
                ra += self.wk[j] * v.abs();
            }
            let mean = 0.5 * rk;
            let mut asc = 0.0;
            for i in 0..PER_PANEL {
                asc += self.wk[base + i] * (f[i] - mean).abs();
            }
            value += rk * half;
            absum += ra * half;
            err += rescale_error((rk - rg) * half, ra * half, asc * half);
        }
        let extra_tail = extra(C64::new(self.c, self.y.last().copied().unwrap_or(0.0))).norm();
        let abs_err = err + self.tail * extra_tail + (self.interp_err + 50.0 * f64::EPSILON) * absum;
        LineSum { value, abs_err, n_evals: self.y.len() }
    }
}
