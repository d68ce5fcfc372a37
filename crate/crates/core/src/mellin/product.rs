//! The infinite hypergeometric product behind `G(u)`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::specfun::{digamma, hyp2f1_b_bplus1};
use crate::types::Params;

const EPS: f64 = f64::EPSILON;
const CHUNK: usize = 64;
const POLE_GUARD: f64 = 1e-6;
const PFAFF_FAST_TERMS: usize = 40;

/// `ln G(u)` split into the truncated product and its asymptotic tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductValue {
    /// `ln[(1-alpha)^{gamma u} prod_{j<=J} F_{j+u}/F_j]`
    pub log_value: C64,
    pub tail_correction: C64,
    pub j_used: usize,
    /// Size of the first neglected tail term.
    pub tail_err: f64,
}

impl ProductValue {
    pub fn ln(&self) -> C64 {
        self.log_value + self.tail_correction
    }

    pub fn value(&self) -> C64 {
        self.ln().exp()
    }
}

/// The real ladder `F_0..=F_J` for one parameter pair.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub params: Params,
    pub fj: Vec<f64>,
    w: f64,
    f_inf: f64,
}

impl Ladder {
    pub fn new(params: Params, j_max: usize) -> Result<Self> {
        params.require_interior()?;
        let mut fj = Vec::with_capacity(j_max + 1);
        fj.push(1.0);
        for j in 1..=j_max {
            let b = C64::new(j as f64 * params.gamma, 0.0);
            fj.push(hyp2f1_b_bplus1(&params, b)?.value.re);
        }
        let a = params.alpha;
        Ok(Ladder { params, fj, w: a / (a - 1.0), f_inf: params.f_inf() })
    }

    pub fn j_max(&self) -> usize {
        self.fj.len() - 1
    }

    /// `F_b` for complex `b`, with a quick Pfaff sum when `|b|` is large.
    pub fn f(&self, b: C64) -> Result<C64> {
        let g = self.params.gamma;
        if self.params.alpha == 0.0 {
            return Ok(C64::new(1.0, 0.0));
        }
        if b.norm() > 8.0 * (1.0 + g) * self.w.abs().max(1.0) {
            let mut term = C64::new(1.0, 0.0);
            let mut s = term;
            for k in 0..PFAFF_FAST_TERMS {
                let kf = k as f64;
                term *= (b + 1.0 + kf).inv() * ((g + kf) * self.w);
                s += term;
                if term.norm() <= 0.25 * EPS * s.norm() {
                    return Ok(s * self.f_inf);
                }
            }
        }
        Ok(hyp2f1_b_bplus1(&self.params, b)?.value)
    }

    /// Reject `u` within the guard distance of a pole `u = -(j + m/gamma)`, `j, m >= 1`.
    pub fn check_pole(&self, u: C64) -> Result<()> {
        let g = self.params.gamma;
        if self.params.alpha == 0.0 || u.im.abs() > POLE_GUARD || u.re > -1.0 - 1.0 / g + POLE_GUARD {
            return Ok(());
        }
        let mut m = 1.0;
        while m / g <= -u.re {
            let j = (-u.re - m / g).round();
            if j >= 1.0 && (u + j + m / g).norm() < POLE_GUARD {
                return Err(Error::Pole(format!("G has a pole at u = {}", -(j + m / g))));
            }
            m += 1.0;
        }
        Ok(())
    }

    /// `ln G(u)` with `J = j_max` explicit factors and a tail of the given order (0..=4).
    pub fn ln_g(&self, u: C64, tail_order: usize) -> Result<ProductValue> {
        let p = &self.params;
        let jm = self.j_max();
        if p.alpha == 0.0 || u == C64::new(0.0, 0.0) {
            let z = C64::new(0.0, 0.0);
            return Ok(ProductValue { log_value: z, tail_correction: z, j_used: jm, tail_err: 0.0 });
        }
        self.check_pole(u)?;
        let g = p.gamma;
        let mut acc = u * (g * (1.0 - p.alpha).ln());
        let mut prod = C64::new(1.0, 0.0);
        for j in 1..=jm {
            let b = (u + j as f64) * g;
            prod *= self.f(b)? / self.fj[j];
            if j % CHUNK == 0 || j == jm {
                acc += prod.ln();
                prod = C64::new(1.0, 0.0);
            }
        }
        if !(acc.re.is_finite() && acc.im.is_finite()) {
            return Err(Error::NonFinite(format!("ln G({u}) overflowed")));
        }
        let (tail, tail_err) = tail_sum(g, self.w, u, jm, tail_order)?;
        Ok(ProductValue { log_value: acc, tail_correction: tail, j_used: jm, tail_err })
    }
}

/// Coefficients `d_n` of `ln(F_b / F_inf) ~ sum_n d_n (b+1)^{-n}`.
fn tail_coeffs(g: f64, w: f64) -> [f64; 5] {
    let w2 = w * w;
    [
        g * w,
        g * w2 * (g + 2.0) / 2.0,
        g * w2 * (g * g * w + 6.0 * g * w - 3.0 * g + 6.0 * w - 3.0) / 3.0,
        g * w2
            * (g.powi(3) * w2 + 12.0 * g * g * w2 - 8.0 * g * g * w + 34.0 * g * w2 - 32.0 * g * w
                + 4.0 * g
                + 24.0 * w2
                - 24.0 * w
                + 4.0)
            / 4.0,
        // bound on |d_5|, calibrated over gamma in [1/4, 9/10], alpha in [0.1, 0.9]
        4.0 * g * w2 * (1.0 + g).powi(3) * (1.0 + w.abs()).powi(4),
    ]
}

// sum_{k>=0} (z+k)^{-n}, n >= 2
fn hurwitz(n: i32, z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 30.0 || w.re < 10.0 {
        acc += w.powi(-n);
        w += 1.0;
    }
    let nf = n as f64;
    // Euler-Maclaurin with B2, B4, B6
    let wi = w.inv();
    let base = w.powi(1 - n);
    acc + base / (nf - 1.0)
        + base * wi * 0.5
        + base * wi * wi * (nf / 12.0)
        - base * wi.powi(4) * (nf * (nf + 1.0) * (nf + 2.0) / 720.0)
        + base * wi.powi(6) * (nf * (nf + 1.0) * (nf + 2.0) * (nf + 3.0) * (nf + 4.0) / 30240.0)
}

fn tail_sum(g: f64, w: f64, u: C64, jm: usize, order: usize) -> Result<(C64, f64)> {
    let d = tail_coeffs(g, w);
    let a = u + 1.0 / g;
    let a0 = C64::new(1.0 / g, 0.0);
    let z = a + (jm as f64 + 1.0);
    let z0 = a0 + (jm as f64 + 1.0);
    let mut t = C64::new(0.0, 0.0);
    for n in 1..=order.min(4) {
        let diff = if n == 1 {
            digamma(z0)? - digamma(z)?
        } else {
            hurwitz(n as i32, z) - hurwitz(n as i32, z0)
        };
        t += diff * (d[n - 1] / g.powi(n as i32));
    }
    // first omitted order, difference of Hurwitz sums ~ |u| z^{-n}
    let n = order.min(4) + 1;
    let err = (d[n - 1] / g.powi(n as i32)).abs() * u.norm() * z0.norm().powi(-(n as i32));
    Ok((t, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::f_j;

    fn ladder(g: f64, a: f64, j: usize) -> Ladder {
        Ladder::new(Params::new(g, a).unwrap(), j).unwrap()
    }

    #[test]
    fn integer_values_are_reciprocal_products() {
        let l = ladder(0.5, 0.25, 2048);
        let p = l.params;
        let mut prod = 1.0;
        for k in 1..=3 {
            prod *= f_j(&p, k).unwrap();
            let v = l.ln_g(C64::new(k as f64, 0.0), 4).unwrap().value();
            assert!((v.re - 1.0 / prod).abs() < 1e-12 && v.im.abs() < 1e-14, "k={k} {v}");
        }
    }

    #[test]
    fn tail_order_improves_truncation() {
        let u = C64::new(-0.5, 3.0);
        let reference = ladder(0.75, 0.5, 8192).ln_g(u, 4).unwrap().ln();
        let short = ladder(0.75, 0.5, 256);
        let mut prev = f64::INFINITY;
        for order in 0..=4 {
            let e = (short.ln_g(u, order).unwrap().ln() - reference).norm();
            assert!(e < prev || e < 1e-13, "order {order}: {e} vs {prev}");
            prev = e;
        }
        let est = short.ln_g(u, 4).unwrap().tail_err;
        assert!(prev < 5e-9 && prev < est, "{prev} vs estimate {est}");
    }

    #[test]
    fn pole_guard() {
        let l = ladder(0.5, 0.3, 64);
        assert!(matches!(l.ln_g(C64::new(-3.0, 0.0), 2), Err(Error::Pole(_))));
        assert!(l.ln_g(C64::new(-3.0, 1e-3), 2).is_ok());
    }

    #[test]
    fn hurwitz_matches_reference() {
        // mpmath zeta(3, 3.5+2j)
        let r = C64::new(0.015283301297620265701, -0.034967889058224666347);
        let d = (hurwitz(3, C64::new(3.5, 2.0)) - r).norm();
        assert!(d < 1e-15, "{d}");
    }
}
