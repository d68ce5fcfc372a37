//! Closed forms and limiting regimes: the Fréchet case `alpha = 0`, the
//! `alpha = 1` family (series, integral, Airy forms, small-`x` asymptotics),
//! the Gumbel-domain density and the large-`gamma` family.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mellin::invert_mellin;
use crate::quad::{integrate_finite, integrate_semi_infinite, QuadConfig};
use crate::specfun::{airy_ai, airy_ai_prime, gamma as gamma_fn, hyp1f1_neg, ln_gamma, log_gamma, wright_bessel};
use crate::types::{EvalResult, Method, Params};

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    Ok(())
}

fn check_unit_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("the alpha = 1 family needs 0 < gamma < 1, got {gamma}")));
    }
    Ok(())
}

fn check_strip(gamma: f64, s: C64) -> Result<()> {
    if s.re >= 1.0 + gamma {
        return Err(Error::Domain(format!("Mellin transform needs Re s < 1 + gamma, got s = {s}")));
    }
    Ok(())
}

/// `gamma x^{-gamma-1} exp(-x^{-gamma})`.
pub fn frechet_density(gamma: f64, x: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_x(x)?;
    let xg = x.powf(-gamma);
    Ok(gamma * xg / x * (-xg).exp())
}

/// `exp(-x^{-gamma})`.
pub fn frechet_cdf(gamma: f64, x: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_x(x)?;
    Ok((-x.powf(-gamma)).exp())
}

/// `H_0(s) = Gamma((1 + gamma - s)/gamma)`.
pub fn frechet_mellin(gamma: f64, s: C64) -> Result<C64> {
    check_gamma(gamma)?;
    check_strip(gamma, s)?;
    Ok(log_gamma((C64::new(1.0 + gamma, 0.0) - s) / gamma)?.exp())
}

/// Location and height of the Fréchet mode.
pub fn mode_alpha0(gamma: f64) -> Result<(f64, f64)> {
    check_gamma(gamma)?;
    let r = (gamma + 1.0) / gamma;
    let x = r.powf(-1.0 / gamma);
    let h = (-1.0 / gamma - 1.0).exp() * r.powf(1.0 / gamma) * (gamma + 1.0);
    Ok((x, h))
}

/// Ratio of consecutive `alpha = 1` series terms at `n = 5`, ignoring the sine factor.
pub fn alpha1_series_ratio(gamma: f64, x: f64) -> f64 {
    let z = gamma_fn(1.0 - gamma) * x.powf(-gamma);
    (ln_gamma(1.0 + 6.0 * gamma) - ln_gamma(1.0 + 5.0 * gamma)).exp() / 6.0 * z
}

/// `h_1(x) = (1/(pi x)) sum_{n>=1} (-1)^{n-1} sin(pi n gamma) Gamma(1+n gamma)/n! (Gamma(1-gamma) x^{-gamma})^n`.
pub fn alpha1_density_series(gamma: f64, x: f64) -> Result<EvalResult> {
    check_unit_gamma(gamma)?;
    check_x(x)?;
    let lz = ln_gamma(1.0 - gamma) - gamma * x.ln();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut max_lt = f64::NEG_INFINITY;
    let mut prev = f64::INFINITY;
    for n in 1..200_000usize {
        let nf = n as f64;
        let lt = ln_gamma(1.0 + nf * gamma) - ln_gamma(nf + 1.0) + nf * lz;
        if lt > 700.0 {
            return Err(Error::Overflow(format!("alpha = 1 series terms reach e^{lt:.0} at x = {x}")));
        }
        max_lt = max_lt.max(lt);
        let mag = lt.exp();
        let t = (PI * ((nf * gamma) % 2.0)).sin() * mag;
        sum += if n % 2 == 1 { t } else { -t };
        abs_sum += mag * (1.0 + lt.abs());
        let falling = lt < prev;
        prev = lt;
        if falling && (mag <= 1e-17 * sum.abs() || lt < max_lt - 80.0 || mag < 1e-300) {
            let pref = 1.0 / (PI * x);
            let err = pref * (4.0 * f64::EPSILON * abs_sum + mag);
            return EvalResult::new(pref * sum, err, Method::Series).map(|e| e.with_work(n, n));
        }
    }
    Err(Error::Convergence(format!("alpha = 1 series at x = {x} did not converge")))
}

/// The `alpha = 1` Laplace-inversion integral `(1/2 pi i) int exp(p x - Gamma(1-gamma) p^gamma) dp`.
///
/// The real-axis form `(1/pi) int_0^inf exp(-x r - cos(pi gamma) Gamma(1-gamma) r^gamma)
/// sin(pi r^gamma / Gamma(gamma)) dr` is the Hankel loop folded onto the cut; here the
/// loop is a wedge through the real saddle point `p0`, so the integrand never exceeds
/// its saddle value and small densities keep their relative accuracy.
pub fn alpha1_density_integral(gamma: f64, x: f64) -> Result<EvalResult> {
    check_unit_gamma(gamma)?;
    check_x(x)?;
    let a = gamma_fn(1.0 - gamma);
    let p0 = (a * gamma / x).powf(1.0 / (1.0 - gamma));
    let phi0 = p0 * x * (1.0 - 1.0 / gamma);
    if phi0 < -745.0 {
        return EvalResult::new(0.0, 0.0, Method::Integral);
    }
    let len = (p0 / (x * (1.0 - gamma))).sqrt().max(1.0 / x);
    let theta_max = PI.min(PI / (2.0 * gamma)).min(0.75 * PI);
    let theta = 0.5 * (0.5 * PI + theta_max);
    let dir = C64::from_polar(1.0, theta);
    // phi(p0 + d) - phi(p0) = -(p0 x / gamma) [(1+u)^gamma - 1 - gamma u], u = d / p0
    let scale = p0 * x / gamma;
    let f = |w: f64| {
        let u = dir * (len * w / p0);
        (dir * (-scale * binomial_excess(gamma, u)).exp()).im * len
    };
    let quad = QuadConfig { abs_tol: 1e-15 * len, rel_tol: 1e-12, max_subdivisions: 400 };
    let r = integrate_semi_infinite(f, 0.0, &quad)?;
    let pref = phi0.exp() / PI;
    EvalResult::new(pref * r.value, pref * r.abs_err, Method::Integral).map(|e| e.with_work(r.n_evals, 0))
}

// (1+u)^g - 1 - g u without cancellation for small |u|
fn binomial_excess(g: f64, u: C64) -> C64 {
    if u.norm() > 0.25 {
        return ((u + 1.0).ln() * g).exp() - 1.0 - u * g;
    }
    let mut term = u * (g * 0.5 * (g - 1.0)) * u;
    let mut sum = term;
    for k in 2..60 {
        let kf = k as f64;
        term *= u * ((g - kf) / (kf + 1.0));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// `gamma = p/q` values with an Airy or elementary closed form for `h_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalGamma {
    pub p: u32,
    pub q: u32,
}

impl RationalGamma {
    pub const HALF: RationalGamma = RationalGamma { p: 1, q: 2 };
    pub const THIRD: RationalGamma = RationalGamma { p: 1, q: 3 };
    pub const TWO_THIRDS: RationalGamma = RationalGamma { p: 2, q: 3 };

    /// Match `gamma` against 1/2, 1/3, 2/3 to within a few ulps.
    pub fn detect(gamma: f64) -> Option<RationalGamma> {
        [Self::HALF, Self::THIRD, Self::TWO_THIRDS]
            .into_iter()
            .find(|r| (gamma - r.value()).abs() <= 4.0 * f64::EPSILON)
    }

    pub fn value(self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// `h_1(x; p/q)` for `p/q` in {1/2, 1/3, 2/3}.
pub fn alpha1_density_rational(r: RationalGamma, x: f64) -> Result<f64> {
    check_x(x)?;
    match (r.p, r.q) {
        (1, 2) => Ok(0.5 * x.powf(-1.5) * (-PI / (4.0 * x)).exp()),
        (1, 3) => {
            let g23 = gamma_fn(2.0 / 3.0);
            let c3 = 3f64.cbrt();
            Ok(g23 / (c3 * x.powf(4.0 / 3.0)) * airy_ai(g23 / c3 * x.powf(-1.0 / 3.0)))
        }
        (2, 3) => {
            let g43 = gamma_fn(4.0 / 3.0);
            let c23 = 3f64.powf(2.0 / 3.0);
            let xi = c23 * g43 * g43 * x.powf(-4.0 / 3.0);
            let pref = 4.0 * PI * (-2.0 * g43.powi(3) / (x * x)).exp()
                / (3f64.powf(5.0 / 6.0) * gamma_fn(-1.0 / 3.0) * x.powf(7.0 / 3.0));
            Ok(pref * (c23 * x.powf(2.0 / 3.0) * airy_ai_prime(xi) - 3.0 * g43 * airy_ai(xi)))
        }
        _ => Err(Error::Domain(format!("no closed form for gamma = {}/{}", r.p, r.q))),
    }
}

/// `h_1(x; gamma)` by the cheapest accurate route.
pub fn alpha1_density(gamma: f64, x: f64) -> Result<EvalResult> {
    check_unit_gamma(gamma)?;
    check_x(x)?;
    if RationalGamma::detect(gamma) == Some(RationalGamma::HALF) {
        let v = alpha1_density_rational(RationalGamma::HALF, x)?;
        return EvalResult::new(v, 4.0 * f64::EPSILON * v, Method::ClosedForm);
    }
    if alpha1_series_ratio(gamma, x) < 0.5 {
        if let Ok(r) = alpha1_density_series(gamma, x) {
            if r.abs_err <= 1e-12 * r.value.abs().max(1e-300) {
                return Ok(r);
            }
        }
    }
    alpha1_density_integral(gamma, x)
}

/// `H_1(s) = Gamma(1-gamma)^{(s-1)/gamma} Gamma((1+gamma-s)/gamma) / Gamma(2-s)`.
pub fn alpha1_mellin(gamma: f64, s: C64) -> Result<C64> {
    Ok(alpha1_ln_mellin(gamma, s)?.exp())
}

fn alpha1_ln_mellin(gamma: f64, s: C64) -> Result<C64> {
    check_unit_gamma(gamma)?;
    check_strip(gamma, s)?;
    let one = C64::new(1.0, 0.0);
    let ln_a = ln_gamma(1.0 - gamma);
    let ln_rg = match log_gamma(one * 2.0 - s) {
        Ok(v) => -v,
        // 1/Gamma vanishes at s = 2, 3, ...
        Err(Error::Pole(_)) => return Ok(C64::new(f64::NEG_INFINITY, 0.0)),
        Err(e) => return Err(e),
    };
    Ok((s - 1.0) / gamma * ln_a + log_gamma((one * (1.0 + gamma) - s) / gamma)? + ln_rg)
}

/// `|H_1(s) - gamma/(1+gamma-s) F_{1+gamma-s} H_1(s-gamma)|` with the Gauss value of `F_b`.
pub fn alpha1_functional_residual(gamma: f64, s: C64) -> Result<f64> {
    check_unit_gamma(gamma)?;
    let b = C64::new(1.0 + gamma, 0.0) - s;
    let ln_f = ln_gamma(1.0 - gamma) + log_gamma(b + 1.0)? - log_gamma(b + 1.0 - gamma)?;
    let rhs = (ln_f + alpha1_ln_mellin(gamma, s - gamma)?).exp() * gamma / b;
    Ok((alpha1_mellin(gamma, s)? - rhs).norm())
}

/// `h_1` by inverting `H_1` along the real-saddle vertical line.
pub fn alpha1_density_mb(gamma: f64, x: f64, quad: &QuadConfig) -> Result<EvalResult> {
    check_unit_gamma(gamma)?;
    check_x(x)?;
    let lx = x.ln();
    let objective = |sigma: f64| -> f64 {
        match alpha1_ln_mellin(gamma, C64::new(sigma, 0.0)) {
            Ok(l) => l.re - sigma * lx,
            Err(_) => f64::INFINITY,
        }
    };
    let sigma = golden_min(objective, -400.0, 1.0 + gamma - 1e-3, 1e-6);
    invert_mellin(|s| alpha1_ln_mellin(gamma, s), x, sigma, quad)
}

pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `g_1(x) = phi(gamma, 1; -x / Gamma(1-gamma))`.
pub fn alpha1_generating(gamma: f64, x: f64) -> Result<EvalResult> {
    check_unit_gamma(gamma)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("generating function needs finite x >= 0, got {x}")));
    }
    let y = x / gamma_fn(1.0 - gamma);
    let series = wright_bessel(gamma, y);
    match &series {
        Ok(e) if e.abs_err <= 1e-12 => return series,
        _ => {}
    }
    match alpha1_generating_loop(gamma, y) {
        Ok(e) => Ok(e),
        Err(err) => match series {
            Ok(e) if e.abs_err <= 1e-8 * e.value.abs().max(1.0) => Ok(e),
            _ => Err(err),
        },
    }
}

/// `phi(gamma, 1; -y) = (1/2 pi i) int_Ha exp(t - y t^-gamma) dt / t` on steepest-descent
/// rays through the upper saddle point; after `t = y^{1/(1+gamma)} tau` the exponent is
/// `lam (tau - tau^-gamma)`.
fn alpha1_generating_loop(gamma: f64, y: f64) -> Result<EvalResult> {
    let lam = y.powf(1.0 / (1.0 + gamma));
    let phi = |t: C64| t - (t.ln() * -gamma).exp();
    let ts = C64::from_polar(gamma.powf(1.0 / (1.0 + gamma)), PI / (1.0 + gamma));
    let phi_s = phi(ts);
    if lam * phi_s.re < -745.0 {
        return EvalResult::new(0.0, f64::MIN_POSITIVE, Method::Integral);
    }
    // descent directions at the saddle: psi (outward) and psi - pi (down to the real axis)
    let psi = (gamma + 2.0) * PI / (2.0 * (1.0 + gamma));
    let out = C64::from_polar(1.0, psi);
    let down = -out;
    let seg = ts.im / (PI - psi).sin();
    let width = 1.0 / (lam * gamma * (1.0 + gamma) * ts.norm().powf(-gamma - 2.0)).sqrt();
    let w = |t: C64| (lam * (phi(t) - phi_s.re)).exp() / t;
    let quad = QuadConfig { abs_tol: 1e-14, rel_tol: 1e-10, max_subdivisions: 400 };
    // real axis -> saddle, then saddle -> infinity
    // a missed tolerance still carries an honest error estimate; keep it
    let soft = |r: Result<EvalResult>| match r {
        Err(e) => match e.best_estimate() {
            Some((v, err)) => EvalResult::new(v, err, Method::Integral),
            None => Err(e),
        },
        ok => ok,
    };
    let leg1 = soft(integrate_finite(|v| (w(ts + down * (seg - v)) * -down).im, 0.0, seg, &quad))?;
    let leg2 = soft(integrate_semi_infinite(|u| (w(ts + out * (u * width)) * out).im * width, 0.0, &quad))?;
    let pref = (lam * phi_s.re).exp() / PI;
    let n = leg1.n_evals + leg2.n_evals;
    EvalResult::new(pref * (leg1.value + leg2.value), pref * (leg1.abs_err + leg2.abs_err), Method::Integral)
        .map(|e| e.with_work(n, 0))
}

/// Leading small-`x` behaviour of `h_1`, from the saddle point of the inversion integral:
/// `(gamma A)^{1/(2(1-gamma))} / sqrt(2 pi (1-gamma)) x^{-(1-gamma/2)/(1-gamma)}
/// exp[-(1/gamma - 1)(gamma A)^{1/(1-gamma)} x^{-gamma/(1-gamma)}]`, `A = Gamma(1-gamma)`.
pub fn alpha1_smallx(gamma: f64, x: f64) -> Result<f64> {
    check_unit_gamma(gamma)?;
    check_x(x)?;
    let ga = gamma * gamma_fn(1.0 - gamma);
    let e = 1.0 / (1.0 - gamma);
    let pref = ga.powf(0.5 * e) / (2.0 * PI * (1.0 - gamma)).sqrt();
    let rate = (1.0 / gamma - 1.0) * ga.powf(e);
    Ok(pref * x.powf(-(1.0 - 0.5 * gamma) * e) * (-rate * x.powf(-gamma * e)).exp())
}

/// Gumbel-domain density `(1-alpha)/Gamma(1/(1-alpha)) exp(-x - e^{-(1-alpha)x})`.
pub fn gumbel_density(alpha: f64, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("gumbel_density needs 0 <= alpha < 1, got {alpha}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let b = 1.0 - alpha;
    Ok((b.ln() - ln_gamma(1.0 / b) - x - (-b * x).exp()).exp())
}

fn large_gamma_check(p: &Params) -> Result<()> {
    if p.alpha >= 1.0 {
        return Err(Error::Domain("the large-gamma forms need alpha < 1".into()));
    }
    if p.gamma <= p.alpha {
        return Err(Error::Domain(format!("the large-gamma forms need gamma > alpha, got {}", p.gamma)));
    }
    Ok(())
}

fn large_gamma_shape(p: &Params) -> (f64, f64) {
    let b = 1.0 - p.alpha;
    ((1.0 - p.alpha / p.gamma) / b, (p.gamma - p.alpha) / b)
}

/// Large-`gamma` density `gamma (1-alpha)^{-beta} / Gamma(a) x^{-1-beta} exp(-(1-alpha)^{-gamma} x^{-gamma})`,
/// `beta = (gamma-alpha)/(1-alpha)`, `a = beta/gamma`.
pub fn large_gamma_density(p: &Params, x: f64) -> Result<f64> {
    large_gamma_check(p)?;
    check_x(x)?;
    let (a, beta) = large_gamma_shape(p);
    let b = 1.0 - p.alpha;
    let ln = p.gamma.ln() - beta * b.ln() - ln_gamma(a) - (1.0 + beta) * x.ln() - (-p.gamma * (b.ln() + x.ln())).exp();
    Ok(ln.exp())
}

/// `H(s) = (1-alpha)^{1-s} Gamma(a + (1-s)/gamma) / Gamma(a)`.
pub fn large_gamma_mellin(p: &Params, s: C64) -> Result<C64> {
    large_gamma_check(p)?;
    let (a, _) = large_gamma_shape(p);
    let arg = (C64::new(1.0, 0.0) - s) / p.gamma + a;
    if arg.re <= 0.0 {
        return Err(Error::Domain(format!("large-gamma Mellin transform needs Re s < 1 + gamma a, got {s}")));
    }
    let one = C64::new(1.0, 0.0);
    Ok(((one - s) * (1.0 - p.alpha).ln() + log_gamma(arg)? - ln_gamma(a)).exp())
}

/// `g(x) = 1F1(1/(1-alpha); 1; -(1-alpha)^gamma x)`.
pub fn large_gamma_generating(p: &Params, x: f64) -> Result<EvalResult> {
    large_gamma_check(p)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("generating function needs finite x >= 0, got {x}")));
    }
    let b = 1.0 - p.alpha;
    hyp1f1_neg(1.0 / b, 1.0, b.powf(p.gamma) * x)
}

/// `L(z) = z^{-1} (1 + (1-alpha)^gamma / z)^{-1/(1-alpha)}`.
pub fn large_gamma_laplace(p: &Params, z: f64) -> Result<f64> {
    large_gamma_check(p)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("z must be positive, got {z}")));
    }
    let b = 1.0 - p.alpha;
    Ok((1.0 + b.powf(p.gamma) / z).powf(-1.0 / b) / z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_finite;

    const E_INV: f64 = 0.36787944117144233;

    fn q() -> QuadConfig {
        QuadConfig { abs_tol: 1e-13, rel_tol: 1e-11, max_subdivisions: 400 }
    }

    #[test]
    fn frechet() {
        assert!((frechet_density(1.0, 1.0).unwrap() - E_INV).abs() < 1e-16);
        assert!((frechet_mellin(0.5, C64::new(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        let (x, h) = mode_alpha0(1.0).unwrap();
        assert!((x - 0.5).abs() < 1e-15 && (h - 4.0 * (-2.0f64).exp()).abs() < 1e-15);
        let (x, h) = mode_alpha0(0.5).unwrap();
        assert!((h - frechet_density(0.5, x).unwrap()).abs() < 1e-15);
        let xn = golden_min(|x| -frechet_density(0.5, x).unwrap(), 0.1, 2.0, 1e-12);
        assert!((xn - x).abs() < 1e-8);
        assert!(frechet_density(1.0, -1.0).unwrap_err().is_domain());
    }

    #[test]
    fn alpha1_reference_values() {
        // high-precision series (mpmath, 400 digits)
        let cases = [
            (0.5, 1.0, 0.227969063882998118383),
            (1.0 / 3.0, 1.0, 0.1363937684754764758464),
            (2.0 / 3.0, 1.0, 0.09637820952421984906469),
            (2.0 / 3.0, 0.3, 3.303659476718815167952e-13),
            (1.0 / 3.0, 0.1, 0.6823361229276831844441),
            (0.25, 0.01, 2.433935724088834070743),
            (0.25, 0.002, 2.100334132340719735452),
            (0.75, 3.0, 0.1995868530013628183926),
            (0.75, 1.0, 7.19396443355270910112e-8),
            (0.75, 0.5, 1.607686402722667987568e-62),
        ];
        for (g, x, want) in cases {
            let i = alpha1_density_integral(g, x).unwrap();
            assert!((i.value / want - 1.0).abs() < 1e-10, "integral g={g} x={x}: {i:?} vs {want}");
            let a = alpha1_density(g, x).unwrap();
            assert!((a.value / want - 1.0).abs() < 1e-10, "auto g={g} x={x}: {a:?} vs {want}");
            if alpha1_series_ratio(g, x) < 0.5 {
                let s = alpha1_density_series(g, x).unwrap();
                assert!((s.value - want).abs() <= s.abs_err.max(1e-15 * want), "series g={g} x={x}: {s:?}");
            }
        }
    }

    #[test]
    fn real_axis_integral_agrees() {
        // the folded-loop integral as written, at a point where it does not cancel
        let (g, x) = (1.0 / 3.0, 1.0);
        let a = gamma_fn(1.0 - g);
        let f = |r: f64| (-x * r - (PI * g).cos() * a * r.powf(g)).exp() * (PI * r.powf(g) / gamma_fn(g)).sin() / PI;
        let r = integrate_semi_infinite(f, 0.0, &QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 1000 }).unwrap();
        assert!((r.value - alpha1_density_integral(g, x).unwrap().value).abs() < 1e-9);
    }

    #[test]
    fn rational_forms_match_routes() {
        for r in [RationalGamma::HALF, RationalGamma::THIRD, RationalGamma::TWO_THIRDS] {
            for x in [0.2, 0.7, 1.5, 4.0, 20.0] {
                let c = alpha1_density_rational(r, x).unwrap();
                let i = alpha1_density_integral(r.value(), x).unwrap().value;
                assert!((c - i).abs() < 1e-7 && (c - i).abs() < 1e-9 * c.max(1e-3), "{r:?} x={x}: {c} {i}");
            }
        }
        assert_eq!(RationalGamma::detect(1.0 / 3.0), Some(RationalGamma::THIRD));
        assert_eq!(RationalGamma::detect(0.3), None);
    }

    #[test]
    fn alpha1_normalised() {
        for g in [0.25, 0.5, 0.75] {
            let f = |v: f64| {
                let x = v.exp();
                alpha1_density(g, x).unwrap().value * x
            };
            let r = integrate_finite(f, -30.0, 60.0 / g, &QuadConfig { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 400 }).unwrap();
            // x^{-1-gamma} tail beyond e^{60/gamma} is below e^{-60}
            assert!((r.value - 1.0).abs() < 1e-6, "g={g}: {r:?}");
        }
    }

    #[test]
    fn alpha1_mellin_examples() {
        assert!((alpha1_mellin(0.4, C64::new(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        // mpmath
        let v = alpha1_mellin(1.0 / 3.0, C64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 0.95193330481429725098).abs() < 1e-13);
        for s in [C64::new(0.3, 0.7), C64::new(-1.2, 2.5), C64::new(0.9, -4.0)] {
            assert!(alpha1_functional_residual(0.6, s).unwrap() < 1e-10 * alpha1_mellin(0.6, s).unwrap().norm().max(1.0));
        }
        let g = 1.0 / 3.0;
        let f = |v: f64| {
            let x = v.exp();
            alpha1_density(g, x).unwrap().value * x.sqrt()
        };
        let m = integrate_finite(f, -30.0, 200.0, &q()).unwrap().value;
        assert!((m - v.re).abs() < 1e-6);
    }

    #[test]
    fn fox_h_inversion_matches_series() {
        for &(g, x) in &[(0.25, 0.05), (0.5, 1.0), (0.75, 3.0), (0.4, 10.0), (0.6, 0.2)] {
            let mb = alpha1_density_mb(g, x, &q()).unwrap();
            let want = alpha1_density(g, x).unwrap().value;
            assert!((mb.value - want).abs() < 1e-6 * want.max(1e-2), "g={g} x={x}: {mb:?} {want}");
        }
    }

    #[test]
    fn generating_is_wright() {
        let g = 0.5;
        let v = alpha1_generating(g, 2.0).unwrap().value;
        let w = wright_bessel(0.5, 2.0 / PI.sqrt()).unwrap().value;
        assert_eq!(v, w);
        assert_eq!(alpha1_generating(g, 0.0).unwrap().value, 1.0);
    }

    #[test]
    fn small_x_asymptotic() {
        let (g, x) = (0.5, 0.02);
        let a = alpha1_smallx(g, x).unwrap();
        let b = alpha1_density_integral(g, x).unwrap().value;
        assert!((a.ln() / b.ln() - 1.0).abs() < 0.05);
        // exact at gamma = 1/2
        for x in [0.01, 0.1, 1.0] {
            let e = alpha1_density_rational(RationalGamma::HALF, x).unwrap();
            assert!((alpha1_smallx(0.5, x).unwrap() / e - 1.0).abs() < 1e-13);
        }
        // the ratio tends to 1 at other gamma
        let r1 = alpha1_smallx(0.75, 0.8).unwrap() / alpha1_density_integral(0.75, 0.8).unwrap().value;
        let r2 = alpha1_smallx(0.75, 0.4).unwrap() / alpha1_density_integral(0.75, 0.4).unwrap().value;
        assert!((r2 - 1.0).abs() < (r1 - 1.0).abs() && (r2 - 1.0).abs() < 0.05, "{r1} {r2}");
    }

    #[test]
    fn gumbel() {
        assert!((gumbel_density(0.0, 0.0).unwrap() - E_INV).abs() < 1e-16);
        for a in [0.0f64, 0.5, 0.75] {
            let r = integrate_finite(|x| gumbel_density(a, x).unwrap(), -12.0 / (1.0 - a), 80.0, &q()).unwrap();
            assert!((r.value - 1.0).abs() < 1e-8, "a={a}: {r:?}");
        }
        let x: f64 = 0.7;
        assert!((gumbel_density(0.0, x).unwrap() - (-x - (-x).exp()).exp()).abs() < 1e-16);
        assert!(gumbel_density(1.0, 0.0).is_err());
    }

    #[test]
    fn large_gamma_family() {
        let p0 = Params::new(16.0, 0.0).unwrap();
        let d = large_gamma_density(&p0, 1.0).unwrap();
        let f = frechet_density(16.0, 1.0).unwrap();
        assert!((d / f - 1.0).abs() < 0.02);
        assert!((large_gamma_laplace(&Params::new(3.0, 0.0).unwrap(), 1.5).unwrap() - 0.4).abs() < 1e-15);
        let p = Params::new(4.0, 0.5).unwrap();
        let r = integrate_finite(
            |v| {
                let x = v.exp();
                large_gamma_density(&p, x).unwrap() * x
            },
            -3.0,
            40.0,
            &q(),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{r:?}");
        let s = C64::new(0.4, 1.3);
        let h = large_gamma_mellin(&p, s).unwrap();
        let m = integrate_finite(
            |v| {
                let x = v.exp();
                large_gamma_density(&p, x).unwrap() * x.powf(0.4) * (1.3 * v).cos()
            },
            -3.0,
            40.0,
            &q(),
        )
        .unwrap();
        assert!((h.re - m.value).abs() < 1e-9, "{h} {m:?}");
        assert!((large_gamma_mellin(&p, C64::new(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        // Laplace transform of the generating function
        let z = 0.8;
        let lap = integrate_semi_infinite(|x| (-z * x).exp() * large_gamma_generating(&p, x).unwrap().value, 0.0, &q()).unwrap();
        assert!((lap.value - large_gamma_laplace(&p, z).unwrap()).abs() < 1e-9, "{lap:?}");
        assert!(large_gamma_density(&Params::new(0.5, 0.6).unwrap(), 1.0).is_err());
    }

    #[test]
    fn alpha1_generating_large_x() {
        // 120-digit partial sums of the Wright series
        let cases = [
            (5.0, -0.051338008971064878),
            (12.0, 0.0012756237947172805),
            (30.0, -0.0005977188145935364),
            (80.0, 9.5512564087890868e-7),
            (300.0, 1.3584783566746902e-14),
        ];
        for (x, want) in cases {
            let got = alpha1_generating(0.5, x).unwrap();
            assert!((got.value - want).abs() <= 1e-9 * want.abs(), "x={x}: {} vs {want}", got.value);
        }
        for y in [0.5, 3.0, 20.0] {
            let a = alpha1_generating_loop(0.5, y).unwrap().value;
            let b = wright_bessel(0.5, y).unwrap().value;
            assert!((a - b).abs() < 1e-10, "y={y}: {a} vs {b}");
        }
    }
}
