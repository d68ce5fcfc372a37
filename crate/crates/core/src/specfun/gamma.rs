use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1))
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

// B_{2k}
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

const ASYM_RADIUS: f64 = 15.0;

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn stirling(w: C64) -> C64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// `ln sin(pi z)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: C64) -> C64 {
    let flip = z.im < 0.0;
    let z = if flip { z.conj() } else { z };
    // sin(pi z) = e^{-i pi z} (1 - e^{2 i pi z}) / (2i)
    let ipz = C64::new(0.0, PI) * z;
    let v = -ipz + (C64::new(1.0, 0.0) - (ipz * 2.0).exp()).ln() - C64::new(2.0f64.ln(), PI / 2.0);
    if flip {
        v.conj()
    } else {
        v
    }
}

/// Principal branch of `ln Gamma(z)`.
pub fn log_gamma(z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("Gamma has a pole at {}", z.re)));
    }
    if z.re < -20.0 {
        let refl = log_gamma(C64::new(1.0, 0.0) - z)?;
        return Ok(C64::new(PI.ln(), 0.0) - ln_sin_pi(z) - refl);
    }
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.re < 0.5 || w.norm() < ASYM_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// Gamma(x) for 0.5 <= x < ASYM_RADIUS
fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * a
}

// Gamma(x) for 0 < x < ASYM_RADIUS
fn gamma_small(x: f64) -> f64 {
    if x < 0.5 {
        lanczos(x + 1.0) / x
    } else {
        lanczos(x)
    }
}

/// `ln Gamma(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x <= 0.0 || x.is_nan() {
        return f64::NAN;
    }
    if x < ASYM_RADIUS {
        if x == 1.0 || x == 2.0 {
            return 0.0;
        }
        return gamma_small(x).ln();
    }
    stirling(C64::new(x, 0.0)).re
}

/// Real Gamma function; `inf` at poles.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        if x > 171.7 {
            return f64::INFINITY;
        }
        if x == x.round() && x <= 25.0 {
            let mut p = 1.0;
            for k in 2..(x as u64) {
                p *= k as f64;
            }
            return p;
        }
        if x < ASYM_RADIUS {
            return gamma_small(x);
        }
        return ln_gamma(x).exp();
    }
    if x == x.round() {
        return f64::INFINITY;
    }
    PI / ((PI * x).sin() * gamma(1.0 - x))
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x > 0.0 {
        return (-ln_gamma(x)).exp();
    }
    (PI * x).sin() * gamma(1.0 - x) / PI
}

/// Complex Gamma function.
pub fn cgamma(z: C64) -> Result<C64> {
    Ok(log_gamma(z)?.exp())
}

/// Digamma `psi(z)`.
pub fn digamma(z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("digamma has a pole at {}", z.re)));
    }
    if z.re < 0.5 && z.norm() < ASYM_RADIUS + 5.0 || z.re < -20.0 {
        // psi(1-z) - psi(z) = pi cot(pi z)
        let cot = (z * PI).cos() / (z * PI).sin();
        return Ok(digamma(C64::new(1.0, 0.0) - z)? - cot * PI);
    }
    let mut w = z;
    let mut acc = C64::new(0.0, 0.0);
    while w.norm() < ASYM_RADIUS {
        acc -= w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut p = inv2;
    let mut s = w.ln() - inv * 0.5;
    for (k, b) in BERNOULLI.iter().enumerate() {
        s -= p * (b / (2.0 * (k as f64 + 1.0)));
        p *= inv2;
    }
    Ok(s + acc)
}

/// Trigamma `psi'(z)` for `Re z > 0`.
pub fn trigamma(z: C64) -> Result<C64> {
    if z.re <= 0.0 {
        return Err(Error::Domain(format!("trigamma implemented for Re z > 0, got {z}")));
    }
    let mut w = z;
    let mut acc = C64::new(0.0, 0.0);
    while w.norm() < ASYM_RADIUS {
        acc += (w * w).inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut s = inv + inv2 * 0.5;
    let mut p = inv2 * inv;
    for b in BERNOULLI {
        s += p * b;
        p *= inv2;
    }
    Ok(s + acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn small_integers() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((log_gamma(c(5.0, 0.0)).unwrap().re - 24f64.ln()).abs() < 1e-14);
        assert_eq!(gamma(6.0), 120.0);
    }

    #[test]
    fn half() {
        let v = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((v.re - 0.572_364_942_924_700_1).abs() < 1e-14);
    }

    #[test]
    fn poles() {
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn negative_real_gamma() {
        // Gamma(-1/2) = -2 sqrt(pi)
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((rgamma(-2.0)).abs() == 0.0);
    }

    #[test]
    fn digamma_values() {
        // psi(1) = -Euler gamma
        let e = 0.577_215_664_901_532_9;
        assert!((digamma(c(1.0, 0.0)).unwrap().re + e).abs() < 1e-14);
        // psi'(1) = pi^2/6
        assert!((trigamma(c(1.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-13);
    }
}
