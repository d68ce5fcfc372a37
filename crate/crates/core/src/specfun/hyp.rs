use crate::error::{Error, Result};
use crate::quad::{integrate_finite, QuadConfig};
use crate::specfun::gamma::ln_gamma;
use crate::types::{EvalResult, Method, Params};
use num_complex::Complex64 as C64;

/// Direct-series term budget before switching to quadrature.
pub const SERIES_MAX_TERMS: usize = 10_000;
const PFAFF_MAX_TERMS: usize = 400;
const EPS: f64 = f64::EPSILON;

fn check_pole(b: C64) -> Result<()> {
    if b.re < -0.5 {
        let m = (-b.re).round();
        if m >= 1.0 && (b + m).norm() < 1e-12 * m {
            return Err(Error::Pole(format!("2F1(g, b; b+1; a) has a pole at b = {}", -m)));
        }
    }
    Ok(())
}

/// `2F1(gamma, b; b+1; alpha)` for complex `b` and `0 <= alpha < 1`.
///
/// Uses the alpha-series for small alpha, the Pfaff-transformed series in
/// `alpha/(alpha-1)` when it converges quickly (large `|b|`), and the
/// integral representation as a last resort.
pub fn hyp2f1_b_bplus1(p: &Params, b: C64) -> Result<EvalResult<C64>> {
    let alpha = p.alpha;
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("2F1 kernel needs alpha in [0,1), got {alpha}")));
    }
    if !(b.re.is_finite() && b.im.is_finite()) {
        return Err(Error::Domain("non-finite b".into()));
    }
    if alpha == 0.0 || b == C64::new(0.0, 0.0) {
        return EvalResult::new(C64::new(1.0, 0.0), 0.0, Method::Exact);
    }
    check_pole(b)?;
    let prefer_direct = alpha <= 0.5 && b.norm() < 30.0;
    if !prefer_direct {
        if let Some(r) = pfaff_series(p, b) {
            return r;
        }
    }
    if let Some(r) = direct_series(p, b, SERIES_MAX_TERMS) {
        return r;
    }
    if prefer_direct {
        if let Some(r) = pfaff_series(p, b) {
            return r;
        }
    }
    integral_route(p, b)
}

/// Series in powers of alpha.
pub fn direct_series(p: &Params, b: C64, max_terms: usize) -> Option<Result<EvalResult<C64>>> {
    let (g, a) = (p.gamma, p.alpha);
    let mut t = 1.0f64;
    let mut sum = C64::new(1.0, 0.0);
    let mut abs_sum = 1.0;
    for k in 1..max_terms {
        let kf = k as f64;
        t *= a * (g + kf - 1.0) / kf;
        let term = b / (b + kf) * t;
        sum += term;
        let m = term.norm();
        abs_sum += m;
        let r = a * ((g + kf) / (kf + 1.0)).max(1.0);
        if r < 1.0 {
            let tail = m * r / (1.0 - r);
            if tail <= 0.5 * EPS * sum.norm() || m == 0.0 {
                let err = tail + 2.0 * EPS * abs_sum;
                return Some(EvalResult::new(sum, err, Method::Series).map(|e| e.with_work(k, k)));
            }
        }
    }
    None
}

/// Pfaff form `(1-alpha)^{-gamma} 2F1(gamma, 1; b+1; alpha/(alpha-1))`.
/// Returns `None` when the terms stop decreasing before reaching roundoff.
pub fn pfaff_series(p: &Params, b: C64) -> Option<Result<EvalResult<C64>>> {
    let (g, a) = (p.gamma, p.alpha);
    let w = a / (a - 1.0);
    let mut term = C64::new(1.0, 0.0);
    let mut s = C64::new(1.0, 0.0);
    let mut abs_sum = 1.0;
    for k in 0..PFAFF_MAX_TERMS {
        let kf = k as f64;
        let ratio = (b + 1.0 + kf).inv() * ((g + kf) * w);
        let rn = ratio.norm();
        if w.abs() >= 1.0 && rn >= 1.0 && k > 0 {
            return None;
        }
        term *= ratio;
        s += term;
        let m = term.norm();
        abs_sum += m;
        if m <= 0.5 * EPS * s.norm() && rn < 1.0 {
            let scale = p.f_inf();
            let tail = m * rn / (1.0 - rn);
            let err = scale * (tail + 2.0 * EPS * abs_sum);
            return Some(EvalResult::new(s * scale, err, Method::Pfaff).map(|e| e.with_work(k + 1, k + 1)));
        }
    }
    None
}

/// `(1-alpha)^{-gamma} - alpha gamma int_0^1 u^b (1-alpha u)^{-gamma-1} du`, valid for `Re b > -1`.
pub fn integral_route(p: &Params, b: C64) -> Result<EvalResult<C64>> {
    if b.re <= -1.0 {
        return Err(Error::Convergence(format!(
            "series routes failed and the integral form needs Re b > -1 (b = {b})"
        )));
    }
    let (g, a) = (p.gamma, p.alpha);
    let cfg = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-13, max_subdivisions: 500 };
    let kern = |u: f64| -> C64 {
        if u <= 0.0 {
            return C64::new(0.0, 0.0);
        }
        (b * u.ln()).exp() * (1.0 - a * u).powf(-g - 1.0)
    };
    let re = integrate_finite(|u| kern(u).re, 0.0, 1.0, &cfg);
    let im = integrate_finite(|u| kern(u).im, 0.0, 1.0, &cfg);
    let (re, im) = match (re, im) {
        (Ok(r), Ok(i)) => (r, i),
        (Err(e), _) | (_, Err(e)) => {
            return Err(Error::Convergence(format!("2F1 integral route failed: {e}")));
        }
    };
    let v = C64::new(p.f_inf(), 0.0) - C64::new(re.value, im.value) * (a * g);
    let err = a * g * (re.abs_err + im.abs_err) + EPS * p.f_inf();
    EvalResult::new(v, err, Method::Integral).map(|e| e.with_work(re.n_evals + im.n_evals, 0))
}

/// `F_j = 2F1(gamma, j gamma; 1 + j gamma; alpha)`; at `alpha = 1` the Gauss sum
/// `Gamma(1-gamma) Gamma(1+j gamma) / Gamma(1+(j-1) gamma)` (needs `gamma < 1`).
pub fn f_j(p: &Params, j: usize) -> Result<f64> {
    if j == 0 {
        return Ok(1.0);
    }
    let g = p.gamma;
    if p.alpha == 1.0 {
        p.require_subunit_gamma()?;
        let jf = j as f64;
        return Ok((ln_gamma(1.0 - g) + ln_gamma(1.0 + jf * g) - ln_gamma(1.0 + (jf - 1.0) * g)).exp());
    }
    Ok(hyp2f1_b_bplus1(p, C64::new(j as f64 * g, 0.0))?.value.re)
}

/// Plain Gauss series `2F1(a, b; c; z)` for `|z| < 1`; used for transformation checks.
pub fn hyp2f1_series(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("Gauss series needs |z| < 1, got {z}")));
    }
    let mut term = C64::new(1.0, 0.0);
    let mut s = term;
    for k in 0..200_000 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        s += term;
        if term.norm() < 1e-17 * s.norm() && k > 4 {
            return Ok(s);
        }
    }
    Err(Error::Convergence("Gauss series did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: f64, a: f64) -> Params {
        Params::new(g, a).unwrap()
    }

    #[test]
    fn b_zero_is_one() {
        let v = hyp2f1_b_bplus1(&p(0.7, 0.4), C64::new(0.0, 0.0)).unwrap();
        assert_eq!(v.value, C64::new(1.0, 0.0));
    }

    #[test]
    fn two_ln_two() {
        let v = f_j(&p(1.0, 0.5), 1).unwrap();
        assert!((v - 2.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn pole_rejected() {
        let r = hyp2f1_b_bplus1(&p(0.5, 0.3), C64::new(-2.0, 0.0));
        assert!(matches!(r, Err(Error::Pole(_))));
    }

    #[test]
    fn routes_agree() {
        let q = p(0.75, 0.6);
        for b in [C64::new(0.3, 0.0), C64::new(2.5, 7.0), C64::new(-0.4, 3.0), C64::new(40.0, -25.0)] {
            let d = direct_series(&q, b, 100_000).unwrap().unwrap().value;
            let i = integral_route(&q, b).unwrap().value;
            assert!((d - i).norm() < 1e-12 * d.norm().max(1.0), "b={b}: {d} vs {i}");
            if let Some(pf) = pfaff_series(&q, b) {
                assert!((pf.unwrap().value - d).norm() < 1e-12 * d.norm());
            }
        }
    }

    #[test]
    fn alpha_one_gauss_sum() {
        // gamma = 1/2: F_1 = Gamma(1/2) Gamma(3/2) / Gamma(1) = pi/2
        let v = f_j(&p(0.5, 1.0), 1).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }
}
