use crate::quad::{integrate_finite, QuadConfig};
use std::f64::consts::PI;

const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = 0.258_819_403_792_806_8;
const POS_SWITCH: f64 = 2.5;
const NEG_SWITCH: f64 = -8.0;

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f, g and their derivatives, term by term
    let (mut f, mut g, mut fp, mut gp) = (1.0, x, 0.0, 1.0);
    let (mut tf, mut tg) = (1.0, x);
    let mut tfp = 0.5 * x * x;
    let mut tgp = 1.0;
    fp += tfp;
    for k in 1..200 {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf - 1.0) * 3.0 * kf);
        tg *= x3 / (3.0 * kf * (3.0 * kf + 1.0));
        tgp *= x3 / ((3.0 * kf - 2.0) * 3.0 * kf);
        if k >= 2 {
            tfp *= x3 / ((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            fp += tfp;
        }
        f += tf;
        g += tg;
        gp += tgp;
        let m = tf.abs() + tg.abs() + tfp.abs() + tgp.abs();
        if m < 1e-18 * (f.abs() + g.abs() + fp.abs() + gp.abs()) {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

// Steepest-descent form for x > 0:
// Ai(x)  = e^{-z}/pi int_0^inf e^{-sqrt(x) s^2} cos(s^3/3) ds
// Ai'(x) = e^{-z}/pi int_0^inf [-sqrt(x) cos(s^3/3) - s sin(s^3/3)] e^{-sqrt(x) s^2} ds
fn steepest(x: f64) -> (f64, f64) {
    let rx = x.sqrt();
    let zeta = 2.0 / 3.0 * x * rx;
    let upper = (42.0 / rx).sqrt();
    let cfg = QuadConfig { abs_tol: 1e-17, rel_tol: 1e-14, max_subdivisions: 200 };
    let ai = integrate_finite(|s| (-rx * s * s).exp() * (s * s * s / 3.0).cos(), 0.0, upper, &cfg)
        .map(|r| r.value)
        .unwrap_or_else(|e| e.best_estimate().map(|b| b.0).unwrap_or(f64::NAN));
    let aip = integrate_finite(
        |s| {
            let c = s * s * s / 3.0;
            (-rx * c.cos() - s * c.sin()) * (-rx * s * s).exp()
        },
        0.0,
        upper,
        &cfg,
    )
    .map(|r| r.value)
    .unwrap_or_else(|e| e.best_estimate().map(|b| b.0).unwrap_or(f64::NAN));
    let pref = (-zeta).exp() / PI;
    (pref * ai, pref * aip)
}

fn oscillatory(x: f64) -> (f64, f64) {
    let t = -x;
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let mut u = vec![1.0f64];
    for k in 1..40 {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
    }
    let v: Vec<f64> = (0..u.len())
        .map(|k| if k == 0 { 1.0 } else { -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u[k] })
        .collect();
    let sums = |c: &[f64]| -> (f64, f64) {
        let (mut even, mut odd) = (0.0, 0.0);
        let mut zp = 1.0;
        let mut last = f64::INFINITY;
        for (k, ck) in c.iter().enumerate() {
            let term = ck / zp;
            if term.abs() > last {
                break;
            }
            last = term.abs();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                even += sign * term;
            } else {
                odd += sign * term;
            }
            zp *= zeta;
        }
        (even, odd)
    };
    let (pu, qu) = sums(&u);
    let (pv, qv) = sums(&v);
    let ph = zeta - PI / 4.0;
    let ai = (ph.cos() * pu + ph.sin() * qu) / (PI.sqrt() * t.powf(0.25));
    let aip = t.powf(0.25) / PI.sqrt() * (ph.sin() * pv - ph.cos() * qv);
    (ai, aip)
}

fn airy_pair(x: f64) -> (f64, f64) {
    if x >= POS_SWITCH {
        steepest(x)
    } else if x >= NEG_SWITCH {
        maclaurin(x)
    } else {
        oscillatory(x)
    }
}

pub fn airy_ai(x: f64) -> f64 {
    airy_pair(x).0
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy_pair(x).1
}
