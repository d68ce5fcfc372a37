//! The Laplace transform `L(z)` of the generating function: the
//! expansion about `z = infinity` and the M-continued fraction.

use serde::Serialize;

use crate::closedform::alpha1_generating;
use crate::error::{Error, Result};
use crate::mellin::{MellinConfig, MellinEngine};
use crate::quad::{integrate_semi_infinite, QuadConfig};
use crate::specfun::{f_j, gamma as gamma_fn, ln_gamma, mittag_leffler};
use crate::types::{EvalResult, Method, Params};

pub const CF_MAX_DEPTH: usize = 100_000;
const TINY: f64 = 1e-300;
const RESCALE: f64 = 1e100;

/// Where the continued-fraction evaluation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfState {
    pub depth: usize,
    pub convergent: f64,
    /// Relative change since the previous checkpoint.
    pub delta: f64,
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("z must be positive and finite, got {z}")));
    }
    Ok(())
}

/// `F_j`, with the Gauss value `Gamma(1-gamma) Gamma(1+j gamma) / Gamma(1+(j-1) gamma)` at `alpha = 1`.
pub fn ladder_value(p: &Params, j: usize) -> Result<f64> {
    if j == 0 {
        return Ok(1.0);
    }
    if p.is_unity() {
        p.require_subunit_gamma()?;
        let g = p.gamma;
        let jf = j as f64;
        return Ok(gamma_fn(1.0 - g) * (ln_gamma(1.0 + jf * g) - ln_gamma(1.0 + (jf - 1.0) * g)).exp());
    }
    f_j(p, j)
}

/// Radius of convergence of the expansion about infinity, `(1-alpha)^gamma`.
pub fn series_radius(p: &Params) -> f64 {
    (1.0 - p.alpha).powf(p.gamma)
}

/// `L(z) = sum_l (-1)^l z^{-l-1} / prod_{j<=l} F_j`, truncated once terms fall below roundoff.
pub fn laplace_series(p: &Params, z: f64, n_max: usize) -> Result<EvalResult> {
    check_z(z)?;
    if z <= series_radius(p) {
        return Err(Error::DivergentRegime(format!(
            "the expansion of L needs z > (1-alpha)^gamma = {}, got {z}",
            series_radius(p)
        )));
    }
    let lz = z.ln();
    let mut ln_g = 0.0;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for l in 0..n_max {
        if l > 0 {
            ln_g -= ladder_value(p, l)?.ln();
        }
        let t = (ln_g - (l as f64 + 1.0) * lz).exp();
        sum += if l % 2 == 0 { t } else { -t };
        abs_sum += t;
        if t <= 1e-17 * sum.abs() {
            let err = t + 2.0 * f64::EPSILON * abs_sum;
            return EvalResult::new(sum, err, Method::Series).map(|e| e.with_work(l + 1, l + 1));
        }
    }
    Err(Error::Convergence(format!("L({z}) series not converged after {n_max} terms")))
}

/// Forward recurrence for `z + K_{m>=1} (F_{m-1} z)/(F_m z - 1)` with periodic rescaling.
struct Recurrence<'a> {
    p: &'a Params,
    z: f64,
    m: usize,
    f_prev: f64,
    a: [f64; 2],
    b: [f64; 2],
    /// Largest plain convergent seen; the cancellation scale of the partial sums.
    peak: f64,
}

impl<'a> Recurrence<'a> {
    fn new(p: &'a Params, z: f64) -> Self {
        // (A_{-1}, A_0) = (1, z), (B_{-1}, B_0) = (0, 1)
        Recurrence { p, z, m: 0, f_prev: 1.0, a: [1.0, z], b: [0.0, 1.0], peak: 1.0 / z }
    }

    fn step(&mut self) -> Result<()> {
        self.m += 1;
        let f = ladder_value(self.p, self.m)?;
        let (num, den) = (self.f_prev * self.z, f * self.z - 1.0);
        let a = den * self.a[1] + num * self.a[0];
        let b = den * self.b[1] + num * self.b[0];
        self.a = [self.a[1], a];
        self.b = [self.b[1], b];
        self.f_prev = f;
        let s = (b / a).abs();
        if s.is_finite() {
            self.peak = self.peak.max(s);
        }
        let big = a.abs().max(b.abs());
        if big > RESCALE {
            for v in self.a.iter_mut().chain(self.b.iter_mut()) {
                *v /= big;
            }
        }
        Ok(())
    }

    /// `1/L` with the tail replaced by its fixed point `R = 1`.
    fn modified(&self) -> f64 {
        let den = self.b[1] + self.b[0];
        let den = if den.abs() < TINY { TINY } else { den };
        (self.a[1] + self.a[0]) / den
    }

    fn plain(&self) -> f64 {
        let den = if self.b[1].abs() < TINY { TINY } else { self.b[1] };
        self.a[1] / den
    }
}

/// The first `n` plain convergents of the fraction for `L` (inverted, so they estimate `L`).
pub fn laplace_cf_convergents(p: &Params, z: f64, n: usize) -> Result<Vec<f64>> {
    check_z(z)?;
    let mut r = Recurrence::new(p, z);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(1.0 / r.plain());
        r.step()?;
    }
    Ok(out)
}

/// `L(z)` from the M-continued fraction; the depth doubles until the relative change is below `tol`.
pub fn laplace_cf_state(p: &Params, z: f64, tol: f64) -> Result<(EvalResult, CfState)> {
    check_z(z)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let mut r = Recurrence::new(p, z);
    if p.is_frechet() {
        // periodic fraction, the tail R = 1 is exact after one step
        r.step()?;
        let v = 1.0 / r.modified();
        let e = EvalResult::new(v, 2.0 * f64::EPSILON * v, Method::ContinuedFraction)?.with_work(1, 1);
        return Ok((e, CfState { depth: 1, convergent: v, delta: 0.0 }));
    }
    if z <= series_radius(p) {
        return Err(Error::DivergentRegime(format!(
            "continued fraction for L diverges for z <= (1-alpha)^gamma = {} when 0 < alpha < 1, got {z}",
            series_radius(p)
        )));
    }
    let mut prev = 1.0 / r.modified();
    let mut target = 4;
    loop {
        while r.m < target {
            r.step()?;
        }
        let cur = 1.0 / r.modified();
        if !cur.is_finite() {
            return Err(Error::NonFinite(format!("continued fraction for L({z}) broke down at depth {}", r.m)));
        }
        let delta = (cur - prev).abs() / cur.abs().max(TINY);
        if delta < tol {
            let round = 4.0 * f64::EPSILON * r.peak;
            let abs_err = (cur - prev).abs() + round;
            // the convergents are partial sums, so they inherit the series' cancellation;
            // 0 < L <= 1/z since 0 <= g <= 1
            let scale = cur.abs().min(1.0 / z);
            if round > tol.max(64.0 * f64::EPSILON) * scale || !(cur > 0.0 && cur * z <= 1.0 + tol) {
                return Err(Error::ToleranceNotMet { value: cur, abs_err });
            }
            let state = CfState { depth: r.m, convergent: cur, delta };
            let e = EvalResult::new(cur, abs_err, Method::ContinuedFraction)?.with_work(r.m, r.m);
            return Ok((e, state));
        }
        if target >= CF_MAX_DEPTH {
            return Err(Error::Convergence(format!(
                "continued fraction for L({z}) not converged at depth {} (delta {delta:e})",
                r.m
            )));
        }
        prev = cur;
        target = (target * 2).min(CF_MAX_DEPTH);
    }
}

pub fn laplace_cf(p: &Params, z: f64, tol: f64) -> Result<EvalResult> {
    Ok(laplace_cf_state(p, z, tol)?.0)
}

/// `L_1(z) = z^{-1} E_gamma(-1/(Gamma(1-gamma) z))`.
pub fn laplace_alpha1(gamma: f64, z: f64) -> Result<EvalResult> {
    check_z(z)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("alpha = 1 needs 0 < gamma < 1, got {gamma}")));
    }
    let e = mittag_leffler(gamma, -1.0 / (gamma_fn(1.0 - gamma) * z))?;
    EvalResult::new(e.value / z, e.abs_err / z, Method::ClosedForm)
}

/// `|L(z) - int_0^inf e^{-zx} g(x) dx|` with `L` from the continued fraction.
pub fn laplace_vs_generating(p: &Params, z: f64, cfg: &MellinConfig) -> Result<f64> {
    check_z(z)?;
    let l = laplace_cf(p, z, 1e-13)?.value;
    let quad = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 400 };
    let transform = |g: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        let failure = std::cell::RefCell::new(None);
        let f = |x: f64| match g(x) {
            Ok(v) => (-z * x).exp() * v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let r = integrate_semi_infinite(f, 0.0, &quad);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(r?.value)
    };
    let direct = if p.is_unity() {
        transform(&|x| Ok(alpha1_generating(p.gamma, x)?.value))?
    } else if p.is_frechet() {
        transform(&|x| Ok((-x).exp()))?
    } else {
        let e = MellinEngine::new(*p, cfg)?;
        transform(&|x| Ok(e.generating(x)?.value))?
    };
    Ok((l - direct).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::large_gamma_laplace;

    fn p(g: f64, a: f64) -> Params {
        Params::new(g, a).unwrap()
    }

    #[test]
    fn frechet_case() {
        let q = p(0.7, 0.0);
        assert!((laplace_series(&q, 2.0, 200).unwrap().value - 1.0 / 3.0).abs() < 1e-15);
        for z in [0.05, 0.5, 1.0, 7.0] {
            let v = laplace_cf(&q, z, 1e-14).unwrap().value;
            assert!((v - 1.0 / (z + 1.0)).abs() < 1e-12, "z={z}: {v}");
        }
        assert!(matches!(laplace_series(&q, 0.9, 100), Err(Error::DivergentRegime(_))));
    }

    #[test]
    fn leading_term() {
        let q = p(0.5, 0.5);
        let z = 1e6;
        assert!((z * laplace_series(&q, z, 100).unwrap().value - 1.0).abs() < 1e-5);
    }

    #[test]
    fn cf_matches_series() {
        let q = p(0.5, 0.5);
        let s = laplace_series(&q, 2.0, 10_000).unwrap().value;
        let c = laplace_cf(&q, 2.0, 1e-13).unwrap().value;
        assert!((s - c).abs() < 1e-9, "{s} {c}");
    }

    #[test]
    fn plain_convergents_are_partial_sums() {
        let q = p(0.75, 0.4);
        let z = 1.7;
        let conv = laplace_cf_convergents(&q, z, 25).unwrap();
        let mut partial = 0.0;
        let mut g = 1.0;
        for (l, c) in conv.iter().enumerate() {
            if l > 0 {
                g /= ladder_value(&q, l).unwrap();
            }
            partial += if l % 2 == 0 { 1.0 } else { -1.0 } * g * z.powi(-(l as i32) - 1);
            assert!((c - partial).abs() < 1e-13, "n={l}: {c} vs {partial}");
        }
    }

    #[test]
    fn mittag_leffler_case() {
        let q = p(0.5, 1.0);
        let want = laplace_alpha1(0.5, 2.0).unwrap().value;
        let cf = laplace_cf(&q, 2.0, 1e-13).unwrap().value;
        assert!((cf - want).abs() < 1e-6, "{cf} {want}");
        // E_{1/2}(-1) = e erfc(1)
        let l = laplace_alpha1(0.5, 1.0 / std::f64::consts::PI.sqrt()).unwrap().value;
        assert!((l * std::f64::consts::PI.sqrt().recip() - 0.42758357615580700441).abs() < 1e-12);
    }

    #[test]
    fn large_gamma_reference() {
        let q = p(8.0, 0.5);
        let z = 0.5;
        let cf = laplace_cf(&q, z, 1e-12).unwrap().value;
        let lg = large_gamma_laplace(&q, z).unwrap();
        assert!((cf / lg - 1.0).abs() < 0.01, "{cf} {lg}");
    }

    #[test]
    fn cf_near_series_radius() {
        let q = p(0.5, 0.25);
        let r = series_radius(&q);
        let (v, st) = laplace_cf_state(&q, 1.05 * r, 1e-12).unwrap();
        assert!(v.value > 0.0 && v.value < 1.0 / (1.05 * r) && st.delta < 1e-12 && st.depth > 16);
        assert!(matches!(laplace_cf(&q, 0.9 * r, 1e-12), Err(Error::DivergentRegime(_))));
        // alpha = 1 has no finite radius, but small z cancels like the series
        let v = laplace_cf(&p(0.5, 1.0), 0.3, 1e-12).unwrap().value;
        assert!((v - laplace_alpha1(0.5, 0.3).unwrap().value).abs() < 1e-12);
        assert!(matches!(laplace_cf(&p(0.5, 1.0), 0.05, 1e-12), Err(Error::ToleranceNotMet { .. })));
    }

    #[test]
    fn transform_of_generating() {
        let cfg = MellinConfig::default();
        assert!(laplace_vs_generating(&p(0.5, 0.0), 1.0, &cfg).unwrap() < 1e-12);
        assert!(laplace_vs_generating(&p(0.5, 0.25), 3.0, &cfg).unwrap() < 1e-5);
        assert!(laplace_vs_generating(&p(0.75, 0.5), 2.0, &cfg).unwrap() < 1e-5);
    }
}
