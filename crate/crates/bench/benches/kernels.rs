use alphasun_core::closedform::{alpha1_density, alpha1_generating};
use alphasun_core::laplace::laplace_cf;
use alphasun_core::mellin::MellinEngine;
use alphasun_core::simulate::run_path;
use alphasun_core::specfun::hyp2f1_b_bplus1;
use alphasun_core::{Complex64, MellinConfig, Params, SimConfig};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn kernels(c: &mut Criterion) {
    let p = Params::new(0.5, 0.5).unwrap();
    c.bench_function("hyp2f1_complex_b", |b| b.iter(|| hyp2f1_b_bplus1(&p, black_box(Complex64::new(1.2, 3.0)))));

    let cfg = MellinConfig::default();
    c.bench_function("engine_build", |b| b.iter(|| MellinEngine::new(black_box(p), &cfg)));
    let e = MellinEngine::new(p, &cfg).unwrap();
    e.density(1.0).unwrap();
    c.bench_function("mb_density_x1", |b| b.iter(|| e.density(black_box(1.0))));

    c.bench_function("alpha1_density_g075", |b| b.iter(|| alpha1_density(0.75, black_box(0.8))));
    c.bench_function("alpha1_generating_loop", |b| b.iter(|| alpha1_generating(0.5, black_box(80.0))));
    c.bench_function("laplace_cf", |b| b.iter(|| laplace_cf(&p, black_box(2.0), 1e-12)));

    let sim = SimConfig::new(p, 1000, 1, 1);
    c.bench_function("sim_path_1000", |b| b.iter(|| run_path(&sim, black_box(0))));
}

criterion_group!(benches, kernels);
criterion_main!(benches);
