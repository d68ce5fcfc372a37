use std::f64::consts::PI;

const ASYM_SWITCH: f64 = 25.0;

/// First eight positive zeros of `J0`.
pub const J0_ZEROS: [f64; 8] = [
    2.404_825_557_695_773,
    5.520_078_110_286_311,
    8.653_727_912_911_012,
    11.791_534_439_014_28,
    14.930_917_708_487_79,
    18.071_063_967_910_92,
    21.211_636_629_879_26,
    24.352_471_530_749_30,
];

// Trapezoid rule on the periodic integrand of the Bessel integral; exact to
// roundoff once the node count exceeds the argument by a margin.
fn trapezoid(order: u32, x: f64) -> f64 {
    let n = (x.abs().ceil() as usize) + 40;
    let h = 2.0 * PI / n as f64;
    let mut s = 0.0;
    for k in 0..n {
        let th = h * k as f64;
        s += (order as f64 * th - x * th.sin()).cos();
    }
    s / n as f64
}

// Hankel expansion, P and Q series for order nu.
fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let chi = x - (0.5 * nu + 0.25) * PI;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        if a.abs() > last || a.abs() < 1e-18 {
            break;
        }
        last = a.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        return 1.0;
    }
    if x <= ASYM_SWITCH {
        trapezoid(0, x)
    } else {
        hankel(0.0, x)
    }
}

pub fn bessel_j1(x: f64) -> f64 {
    let s = x.signum();
    let x = x.abs();
    if x == 0.0 {
        return 0.0;
    }
    s * if x <= ASYM_SWITCH { trapezoid(1, x) } else { hankel(1.0, x) }
}

/// The `k`-th positive zero of `J0` (1-based).
pub fn j0_zero(k: usize) -> f64 {
    assert!(k >= 1, "zeros are 1-based");
    if k <= J0_ZEROS.len() {
        return J0_ZEROS[k - 1];
    }
    let beta = (k as f64 - 0.25) * PI;
    let e = 8.0 * beta;
    let mut z = beta + 1.0 / e - 124.0 / (3.0 * e.powi(3)) + 120_928.0 / (15.0 * e.powi(5));
    for _ in 0..2 {
        z += bessel_j0(z) / bessel_j1(z);
    }
    z
}
