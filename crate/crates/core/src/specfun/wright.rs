use crate::error::{Error, Result};
use crate::quad::{integrate_semi_infinite, QuadConfig};
use crate::specfun::gamma::ln_gamma;
use crate::types::{EvalResult, Method};
use std::f64::consts::PI;

const LOG_OVERFLOW: f64 = 700.0;

// Sum of sign_n * exp(logterm(n)) with a max-term roundoff estimate.
fn log_series(logterm: impl Fn(usize) -> f64, alternating: bool, what: &str) -> Result<EvalResult> {
    let mut sum = 0.0;
    let mut max_log = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    // exp(lt) carries a relative error of order |lt| eps from the log-gamma sums
    let mut round = 0.0;
    for n in 0..100_000 {
        let lt = logterm(n);
        if lt > LOG_OVERFLOW {
            return Err(Error::Overflow(format!("{what}: series term exceeds e^{LOG_OVERFLOW}")));
        }
        max_log = max_log.max(lt);
        let t = lt.exp();
        round += t * (4.0 + 2.0 * lt.abs());
        sum += if alternating && n % 2 == 1 { -t } else { t };
        let past_peak = lt < prev;
        prev = lt;
        if past_peak && (t <= 1e-17 * sum.abs() || lt < max_log - 80.0 || t < 1e-300) {
            let err = f64::EPSILON * round + t;
            return EvalResult::new(sum, err, Method::Series).map(|e| e.with_work(n + 1, n + 1));
        }
    }
    Err(Error::Convergence(format!("{what}: series did not converge")))
}

/// Wright function `phi(gamma, 1; -z) = sum_n (-z)^n / (n! Gamma(1 + n gamma))`.
pub fn wright_bessel(gamma: f64, z: f64) -> Result<EvalResult> {
    if !(gamma > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("wright_bessel needs gamma > 0 and finite z (gamma={gamma}, z={z})")));
    }
    if z == 0.0 {
        return EvalResult::new(1.0, 0.0, Method::Exact);
    }
    let lz = z.abs().ln();
    log_series(
        |n| {
            let nf = n as f64;
            nf * lz - ln_gamma(nf + 1.0) - ln_gamma(1.0 + nf * gamma)
        },
        z > 0.0,
        "wright_bessel",
    )
}

/// One-parameter Mittag-Leffler function `E_gamma(z)` for real `z`, `0 < gamma <= 1`.
pub fn mittag_leffler(gamma: f64, z: f64) -> Result<EvalResult> {
    if !(gamma > 0.0 && gamma <= 1.0) || !z.is_finite() {
        return Err(Error::Domain(format!("mittag_leffler needs 0 < gamma <= 1 (gamma={gamma}, z={z})")));
    }
    if gamma == 1.0 {
        let v = z.exp();
        if !v.is_finite() {
            return Err(Error::Overflow(format!("exp({z})")));
        }
        return EvalResult::new(v, f64::EPSILON * v, Method::Exact);
    }
    if z == 0.0 {
        return EvalResult::new(1.0, 0.0, Method::Exact);
    }
    let t = z.abs().powf(1.0 / gamma);
    if z > 0.0 || t < 5.0 {
        let lz = z.abs().ln();
        return log_series(|k| k as f64 * lz - ln_gamma(1.0 + gamma * k as f64), z < 0.0, "mittag_leffler");
    }
    // E(-x) = sin(pi g)/(pi g) int_0^inf exp(-t q^{1/g}) / (q^2 + 2 q cos(pi g) + 1) dq,  t = x^{1/g}
    let c = (PI * gamma).cos();
    let cfg = QuadConfig { abs_tol: 1e-16, rel_tol: 1e-13, max_subdivisions: 400 };
    let r = integrate_semi_infinite(
        |q| (-t * q.powf(1.0 / gamma)).exp() / (q * q + 2.0 * q * c + 1.0),
        0.0,
        &cfg,
    )?;
    let pref = (PI * gamma).sin() / (PI * gamma);
    EvalResult::new(pref * r.value, pref * r.abs_err, Method::Integral).map(|e| e.with_work(r.n_evals, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wright_values() {
        assert_eq!(wright_bessel(0.5, 0.0).unwrap().value, 1.0);
        // mpmath nsum at 30 digits
        let r = wright_bessel(0.5, 1.0).unwrap();
        assert!((r.value - 0.264_786_600_526_265_88).abs() <= r.abs_err.min(1e-14));
        let r = wright_bessel(1.0 / 3.0, 3.0).unwrap();
        assert!((r.value + 0.002_957_783_419_216_463_8).abs() <= r.abs_err.min(1e-13), "{r:?}");
    }

    #[test]
    fn wright_gamma_one_is_bessel() {
        // phi(1,1;-z) = J0(2 sqrt z)
        for z in [0.3, 2.0, 9.0] {
            let v = wright_bessel(1.0, z).unwrap().value;
            let j = crate::specfun::bessel_j0(2.0 * f64::sqrt(z));
            assert!((v - j).abs() < 1e-13);
        }
    }

    #[test]
    fn wright_overflow() {
        assert!(matches!(wright_bessel(0.1, -1e6), Err(Error::Overflow(_))));
    }

    #[test]
    fn mittag_values() {
        assert!((mittag_leffler(1.0, 0.7).unwrap().value - 0.7f64.exp()).abs() < 1e-15);
        assert_eq!(mittag_leffler(0.4, 0.0).unwrap().value, 1.0);
        let cases = [
            (0.5, -1.0, 0.427_583_576_155_807),
            (0.5, -5.0, 0.110_704_637_733_068_63),
            (0.75, -2.0, 0.202_078_483_412_954_45),
            (0.25, -0.5, 0.637_670_519_200_393_36),
        ];
        for (g, z, want) in cases {
            let v = mittag_leffler(g, z).unwrap().value;
            assert!((v - want).abs() < 1e-12, "E_{g}({z}) = {v}, want {want}");
        }
    }
}
