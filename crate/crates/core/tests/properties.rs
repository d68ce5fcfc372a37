use alphasun_core::closedform::{alpha1_density_integral, alpha1_density_series, alpha1_series_ratio};
use alphasun_core::laplace::{laplace_cf, laplace_cf_convergents, laplace_series, series_radius};
use alphasun_core::mellin::mellin_h;
use alphasun_core::quad::{integrate_finite, integrate_semi_infinite};
use alphasun_core::simulate::{normalised_samples, run_path_with};
use alphasun_core::specfun::{cgamma, direct_series, f_j, integral_route, pfaff_series};
use alphasun_core::validate::{density_bounds, Model};
use alphasun_core::{Complex64, MellinConfig, Params, QuadConfig, SimConfig};
use proptest::prelude::*;

fn p(g: f64, a: f64) -> Params {
    Params::new(g, a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ladder_increases_to_its_limit(g in 0.1f64..3.0, a in 0.01f64..0.95, j in 0usize..60) {
        let q = p(g, a);
        let (f0, f1) = (f_j(&q, j).unwrap(), f_j(&q, j + 1).unwrap());
        prop_assert!(f1 > f0);
        prop_assert!(f1 < (1.0 - a).powf(-g));
    }

    #[test]
    fn hypergeometric_routes_agree(g in 0.2f64..1.5, a in 0.05f64..0.6, sr in -0.5f64..0.9, si in -3.0f64..3.0) {
        let q = p(g, a);
        let b = Complex64::new(1.0 + g - sr, -si);
        let i = integral_route(&q, b).unwrap().value;
        let scale = i.norm().max(1.0);
        if let Some(Ok(d)) = direct_series(&q, b, 10_000) {
            prop_assert!((d.value - i).norm() <= 1e-10 * scale, "{} vs {}", d.value, i);
        }
        if let Some(Ok(f)) = pfaff_series(&q, b) {
            prop_assert!((f.value - i).norm() <= 1e-10 * scale, "{} vs {}", f.value, i);
        }
    }

    #[test]
    fn gamma_reflection(re in -4.0f64..4.0, im in 0.05f64..3.0) {
        let z = Complex64::new(re, im);
        let one = Complex64::new(1.0, 0.0);
        let lhs = cgamma(z).unwrap() * cgamma(one - z).unwrap();
        let rhs = std::f64::consts::PI / (z * std::f64::consts::PI).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm());
    }

    #[test]
    fn quadrature_is_linear_and_additive(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, k in 0.2f64..3.0, split in 0.1f64..0.9) {
        let cfg = QuadConfig::new(1e-13, 1e-12, 200).unwrap();
        let f = |x: f64| (k * x).sin() / (1.0 + x * x);
        let g = |x: f64| (-k * x).exp();
        let (a, b) = (0.0, 3.0);
        let whole = integrate_finite(|x| c0 * f(x) + c1 * g(x), a, b, &cfg).unwrap();
        let parts = c0 * integrate_finite(f, a, b, &cfg).unwrap().value + c1 * integrate_finite(g, a, b, &cfg).unwrap().value;
        prop_assert!((whole.value - parts).abs() <= 1e-11);
        let c = a + split * (b - a);
        let split_sum = integrate_finite(f, a, c, &cfg).unwrap().value + integrate_finite(f, c, b, &cfg).unwrap().value;
        prop_assert!((integrate_finite(f, a, b, &cfg).unwrap().value - split_sum).abs() <= 1e-11);
        let tail = integrate_semi_infinite(g, 0.0, &cfg).unwrap();
        prop_assert!((tail.value - 1.0 / k).abs() <= tail.abs_err.max(1e-12) * 10.0);
    }

    #[test]
    fn laplace_positive_decreasing_and_euler(g in 0.25f64..2.0, a in 0.05f64..0.9, k in 2.0f64..10.0) {
        let q = p(g, a);
        let z = k * series_radius(&q);
        let l0 = laplace_cf(&q, z, 1e-12).unwrap().value;
        let l1 = laplace_cf(&q, 1.1 * z, 1e-12).unwrap().value;
        prop_assert!(l0 > 0.0 && l1 < l0);
        prop_assert!((l0 - laplace_series(&q, z, 100_000).unwrap().value).abs() <= 1e-9);
        // plain convergents are the partial sums of the z^{-1} expansion
        let conv = laplace_cf_convergents(&q, z, 12).unwrap();
        let mut sum = 0.0;
        let mut gk = 1.0;
        for (n, c) in conv.iter().enumerate() {
            if n > 0 {
                gk /= f_j(&q, n).unwrap();
            }
            sum += (-1.0f64).powi(n as i32) * gk * z.powi(-(n as i32) - 1);
            prop_assert!((c - sum).abs() <= 1e-13 * sum.abs().max(1.0), "n={n}: {c} vs {sum}");
        }
    }

    #[test]
    fn paths_never_decrease(a in 0.0f64..=1.0, g in 0.3f64..2.0, seed in any::<u64>(), path in 0u64..1000) {
        let cfg = SimConfig::new(p(g, a), 200, 1, seed);
        let mut prev = f64::NEG_INFINITY;
        run_path_with(&cfg, path, |_, y| {
            assert!(y >= prev);
            prev = y;
        }).unwrap();
    }

    #[test]
    fn alpha1_routes_agree(g in 0.2f64..0.8, x in 0.3f64..5.0) {
        prop_assume!(alpha1_series_ratio(g, x) < 0.5);
        let s = alpha1_density_series(g, x).unwrap().value;
        let i = alpha1_density_integral(g, x).unwrap().value;
        prop_assert!((s - i).abs() <= 1e-7 * s.abs().max(1e-300), "{s} vs {i}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn density_within_bounds(g in 0.3f64..1.0, a in 0.05f64..0.7, lx in -1.5f64..3.0) {
        let q = p(g, a);
        let m = Model::new(&q, &MellinConfig::default()).unwrap();
        let x = lx.exp();
        let h = m.density(x).unwrap();
        let (lo, hi) = density_bounds(&q, x);
        let slack = h.abs_err + 1e-12 * hi;
        prop_assert!(h.value >= lo - slack && h.value <= hi + slack, "x={x}: {lo} <= {} <= {hi}", h.value);
    }

    #[test]
    fn mellin_bound(g in 0.3f64..1.0, a in 0.05f64..0.7, sr in 0.0f64..1.0, si in -4.0f64..4.0) {
        let q = p(g, a);
        let s = Complex64::new(sr * g, si);
        let h = mellin_h(&q, s, &MellinConfig::default()).unwrap();
        let bound = (1.0 - a).powf(-g) * cgamma(Complex64::new((1.0 + g - s.re) / g, 0.0)).unwrap().re;
        prop_assert!(h.norm() <= bound * (1.0 + 1e-9));
    }

    #[test]
    fn sampling_is_deterministic(a in 0.0f64..=1.0, seed in any::<u64>()) {
        let cfg = SimConfig::new(p(0.7, a), 30, 64, seed);
        prop_assert_eq!(normalised_samples(&cfg).unwrap(), normalised_samples(&cfg).unwrap());
    }
}
