//! Adaptive quadrature, a J0-weighted oscillatory integrator and sequence
//! acceleration.

mod epsilon;
mod gk;
mod qags;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_j0, j0_zero};
use crate::types::{EvalResult, Method};
pub use epsilon::accelerate;
use gk::{QK15, QK21};
pub(crate) use gk::{expand as gk_nodes, rescale_error, QK15 as GK15};
use qags::{qags, QagsOut, Status};

/// Error goals and subdivision budget for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-6, rel_tol: 1e-4, max_subdivisions: 200 }
    }
}

impl QuadConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let c = QuadConfig { abs_tol, rel_tol, max_subdivisions };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) || self.max_subdivisions < 1 {
            return Err(Error::Domain(format!(
                "invalid QuadConfig: abs_tol={}, rel_tol={}, max_subdivisions={}",
                self.abs_tol, self.rel_tol, self.max_subdivisions
            )));
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

fn finish(out: QagsOut, cfg: &QuadConfig) -> Result<EvalResult> {
    let QagsOut { result, abserr, neval, status } = out;
    if !result.is_finite() {
        return Err(Error::NonFinite(format!("quadrature produced {result}")));
    }
    if abserr <= cfg.tolerance(result) && status != Status::Divergent {
        return EvalResult::new(result, abserr, Method::Quadrature).map(|e| e.with_work(neval, neval));
    }
    match status {
        Status::MaxSubdivisions => Err(Error::MaxSubdivisions { value: result, abs_err: abserr }),
        _ => Err(Error::ToleranceNotMet { value: result, abs_err: abserr }),
    }
}

/// `∫_a^b f`, adaptive 10/21-point Gauss-Kronrod with epsilon extrapolation.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<EvalResult> {
    cfg.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("integrate_finite needs finite limits, got [{a}, {b}]")));
    }
    if a == b {
        return EvalResult::new(0.0, 0.0, Method::Exact);
    }
    finish(qags(&f, a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions, &QK21), cfg)
}

/// `∫_a^∞ f` through `u = a + t/(1-t)` on `(0, 1]`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &QuadConfig) -> Result<EvalResult> {
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::Domain(format!("integrate_semi_infinite needs finite a, got {a}")));
    }
    let g = |t: f64| {
        let s = 1.0 - t;
        let v = f(a + t / s) / (s * s);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    finish(qags(&g, 0.0, 1.0, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions, &QK15), cfg)
}

const BESSEL_MAX_PANELS: usize = 400;
const BESSEL_MIN_PANELS: usize = 6;

/// `∫_0^∞ g(u) J0(scale·u) du` by summing panels between consecutive zeros
/// of `J0` and extrapolating the partial sums.
pub fn integrate_bessel_j0<G: Fn(f64) -> f64>(g: G, scale: f64, cfg: &QuadConfig) -> Result<EvalResult> {
    cfg.validate()?;
    if !scale.is_finite() || scale < 0.0 {
        return Err(Error::Domain(format!("integrate_bessel_j0 needs scale >= 0, got {scale}")));
    }
    if scale == 0.0 {
        return integrate_semi_infinite(g, 0.0, cfg);
    }
    // Panels are resolved much more tightly than the target so the
    // extrapolation sees clean partial sums.
    let panel_cfg = QuadConfig {
        abs_tol: (cfg.abs_tol * 1e-3).max(1e-300),
        rel_tol: (cfg.rel_tol * 1e-3).max(1e-14),
        max_subdivisions: cfg.max_subdivisions,
    };
    let f = |u: f64| g(u) * bessel_j0(scale * u);
    let mut partials = Vec::new();
    let mut sum = 0.0;
    let mut lo = 0.0;
    let mut panel_err = 0.0;
    let mut neval = 0;
    let mut prev: Option<f64> = None;
    let mut stable = 0;
    for k in 1..=BESSEL_MAX_PANELS {
        let hi = j0_zero(k) / scale;
        let r = match integrate_finite(&f, lo, hi, &panel_cfg) {
            Ok(r) => r,
            Err(e) => match e.best_estimate() {
                Some((v, err)) => EvalResult::new(v, err, Method::Quadrature)?,
                None => return Err(e),
            },
        };
        neval += r.n_evals;
        panel_err += r.abs_err;
        sum += r.value;
        partials.push(sum);
        lo = hi;
        if partials.len() < BESSEL_MIN_PANELS {
            continue;
        }
        let start = partials.len().saturating_sub(30);
        let est = match accelerate(&partials[start..]) {
            Ok(e) => e,
            Err(Error::AccelerationStalled { .. }) => continue,
            Err(e) => return Err(e),
        };
        if let Some(p) = prev {
            let diff = (est.value - p).abs();
            let err = diff.max(est.abs_err) + panel_err;
            if err <= cfg.tolerance(est.value) {
                stable += 1;
                if stable >= 2 {
                    return EvalResult::new(est.value, err, Method::Extrapolated).map(|e| e.with_work(neval, k));
                }
            } else {
                stable = 0;
            }
        }
        prev = Some(est.value);
    }
    Err(Error::AccelerationStalled { value: prev.unwrap_or(sum), abs_err: f64::NAN })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> QuadConfig {
        QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 200 }
    }

    #[test]
    fn finite_examples() {
        let c = tight();
        assert!((integrate_finite(|_| 1.0, 0.0, 1.0, &c).unwrap().value - 1.0).abs() < 1e-14);
        let r = integrate_finite(|x| x.powf(-0.5), 0.0, 1.0, &c).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
        let r = integrate_finite(|u| (1.0 - 0.5 * u).powf(-2.0), 0.0, 1.0, &c).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_examples() {
        let c = tight();
        let r = integrate_semi_infinite(|x| (-x).exp(), 0.0, &c).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        let r = integrate_semi_infinite(|x| x * (-x * x).exp(), 0.0, &c).unwrap();
        assert!((r.value - 0.5).abs() < 1e-10);
        let r = integrate_semi_infinite(|x| (-x).exp() * x.sin(), 0.0, &c).unwrap();
        assert!((r.value - 0.5).abs() < 1e-10);
    }

    #[test]
    fn bessel_examples() {
        let c = QuadConfig { abs_tol: 1e-10, rel_tol: 1e-9, max_subdivisions: 200 };
        let r = integrate_bessel_j0(|u| (-u).exp(), 1.0, &c).unwrap();
        assert!((r.value - 0.5f64.sqrt()).abs() < 1e-9, "{r:?}");
        for &x in &[0.5f64, 1.0, 3.0] {
            let s = 2.0 * x.powf(-0.25);
            let r = integrate_bessel_j0(|u| u * (-u * u).exp(), s, &c).unwrap();
            let want = 0.5 * (-x.powf(-0.5)).exp();
            assert!((r.value - want).abs() < 1e-9, "x={x} {r:?} {want}");
        }
        let r = integrate_bessel_j0(|u| (-u).exp(), 0.0, &c).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn failure_carries_estimate() {
        let c = QuadConfig { abs_tol: 1e-14, rel_tol: 0.0, max_subdivisions: 3 };
        let e = integrate_finite(|x| (1.0 / x).sin(), 1e-4, 1.0, &c).unwrap_err();
        assert!(e.best_estimate().is_some());
    }

    #[test]
    fn rejects_bad_config() {
        let c = QuadConfig { abs_tol: 0.0, rel_tol: 1e-3, max_subdivisions: 10 };
        assert!(integrate_finite(|x| x, 0.0, 1.0, &c).unwrap_err().is_domain());
    }
}
