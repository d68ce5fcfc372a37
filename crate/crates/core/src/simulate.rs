//! Monte Carlo for the recursion `Y_n = max(Y_{n-1}, alpha Y_{n-1} + X_n)`
//! with heavy-tailed inputs, and the KS distance of the normalised
//! endpoint to a limit cdf.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Params;

/// Input law with tail index `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InputDist {
    /// `P(X > x) = x^{-gamma}`, `x >= 1`
    Pareto(f64),
    /// `P(X <= x) = exp(-x^{-gamma})`
    Frechet(f64),
}

impl InputDist {
    pub fn gamma(&self) -> f64 {
        match *self {
            InputDist::Pareto(g) | InputDist::Frechet(g) => g,
        }
    }
}

/// Inverse-cdf draw for `u` in `(0, 1)`.
pub fn sample_input(dist: InputDist, u: f64) -> f64 {
    match dist {
        InputDist::Pareto(g) => u.powf(-1.0 / g),
        InputDist::Frechet(g) => (-u.ln()).powf(-1.0 / g),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: Params,
    pub n_steps: usize,
    pub n_paths: usize,
    pub seed: u64,
    pub input_dist: InputDist,
    pub norming_exponent: f64,
}

impl SimConfig {
    /// Pareto inputs with the tail index of `params` and norming exponent `1/gamma`.
    pub fn new(params: Params, n_steps: usize, n_paths: usize, seed: u64) -> Self {
        SimConfig {
            params,
            n_steps,
            n_paths,
            seed,
            input_dist: InputDist::Pareto(params.gamma),
            norming_exponent: 1.0 / params.gamma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 1 || self.n_paths < 1 {
            return Err(Error::Domain(format!(
                "n_steps and n_paths must be >= 1, got {} and {}",
                self.n_steps, self.n_paths
            )));
        }
        let g = self.input_dist.gamma();
        if !(g > 0.0) || !g.is_finite() || !self.norming_exponent.is_finite() {
            return Err(Error::Domain(format!(
                "input tail index and norming exponent must be finite, gamma > 0 (got {g}, {})",
                self.norming_exponent
            )));
        }
        Params::new(self.params.gamma, self.params.alpha).map(|_| ())
    }

    /// `a_n = (n_steps + 1)^{norming_exponent}`, counting `X_0`.
    pub fn norming(&self) -> f64 {
        ((self.n_steps + 1) as f64).powf(self.norming_exponent)
    }

    fn rng(&self, path: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(path);
        r
    }
}

/// Run one path, calling `visit` with `(n, Y_n)` for `n = 0..=n_steps`.
pub fn run_path_with(cfg: &SimConfig, path: u64, mut visit: impl FnMut(usize, f64)) -> Result<f64> {
    cfg.validate()?;
    let a = cfg.params.alpha;
    let mut rng = cfg.rng(path);
    let mut y = sample_input(cfg.input_dist, rng.sample(Open01));
    visit(0, y);
    for n in 1..=cfg.n_steps {
        let x = sample_input(cfg.input_dist, rng.sample(Open01));
        y = y.max(a * y + x);
        if !y.is_finite() {
            return Err(Error::Overflow(format!("path {path} left the f64 range at step {n} (last input {x:e})")));
        }
        visit(n, y);
    }
    Ok(y)
}

/// Final `Y_n` of path `path`.
pub fn run_path(cfg: &SimConfig, path: u64) -> Result<f64> {
    run_path_with(cfg, path, |_, _| {})
}

/// Normalised endpoints `Y_n / a_n` of all paths, sorted ascending.
pub fn normalised_samples(cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let an = cfg.norming();
    let mut ys = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| run_path(cfg, i).map(|y| y / an))
        .collect::<Result<Vec<_>>>()?;
    ys.sort_by(f64::total_cmp);
    Ok(ys)
}

/// Kolmogorov-Smirnov distance between sorted samples and a cdf.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> Result<f64> + Sync) -> Result<f64> {
    let n = sorted.len() as f64;
    let gaps = sorted
        .par_iter()
        .enumerate()
        .map(|(i, &y)| {
            let f = cdf(y)?;
            Ok((f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs()))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// KS distance of the normalised endpoints to `cdf`.
pub fn empirical_vs_limit(cfg: &SimConfig, cdf: impl Fn(f64) -> Result<f64> + Sync) -> Result<f64> {
    if cfg.n_paths < 100 {
        return Err(Error::Domain(format!("empirical_vs_limit needs n_paths >= 100, got {}", cfg.n_paths)));
    }
    ks_statistic(&normalised_samples(cfg)?, cdf)
}

/// Critical value of the one-sample KS statistic at level `level` (asymptotic).
pub fn ks_critical(n: usize, level: f64) -> f64 {
    (-(0.5 * level).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::frechet_cdf;

    fn cfg(g: f64, a: f64, n: usize, paths: usize) -> SimConfig {
        SimConfig::new(Params::new(g, a).unwrap(), n, paths, 7)
    }

    #[test]
    fn inverse_cdf() {
        assert_eq!(sample_input(InputDist::Pareto(1.0), 0.5), 2.0);
        assert!((sample_input(InputDist::Frechet(1.0), (-1.0f64).exp()) - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let hits = (0..n).filter(|_| sample_input(InputDist::Pareto(1.0), rng.sample(Open01)) > 100.0).count();
        let sd = (n as f64 * 0.01 * 0.99).sqrt();
        assert!((hits as f64 - 1000.0).abs() < 3.0 * sd, "{hits}");
    }

    #[test]
    fn bookend_recursions() {
        let c0 = cfg(0.7, 0.0, 50, 1);
        // alpha = 0: the running maximum of the inputs
        let mut rng = c0.rng(3);
        let inputs: Vec<f64> = (0..=50).map(|_| sample_input(c0.input_dist, rng.sample(Open01))).collect();
        assert_eq!(run_path(&c0, 3).unwrap(), inputs.iter().cloned().fold(0.0, f64::max));
        let c1 = cfg(0.7, 1.0, 50, 1);
        let s: f64 = inputs.iter().sum();
        assert!((run_path(&c1, 3).unwrap() / s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn paths_are_monotone() {
        let c = cfg(0.5, 0.5, 200, 1);
        let mut prev = 0.0;
        run_path_with(&c, 0, |_, y| {
            assert!(y >= prev);
            prev = y;
        })
        .unwrap();
    }

    #[test]
    fn fixed_point_of_unit_inputs() {
        let (mut y, a) = (0.0f64, 0.5);
        for _ in 0..200 {
            y = y.max(a * y + 1.0);
        }
        assert!((y - 2.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_under_seed() {
        let c = cfg(0.5, 0.5, 100, 500);
        assert_eq!(normalised_samples(&c).unwrap(), normalised_samples(&c).unwrap());
        let mut d = c.clone();
        d.seed = 8;
        assert_ne!(normalised_samples(&c).unwrap(), normalised_samples(&d).unwrap());
    }

    #[test]
    fn frechet_max_stability() {
        let mut c = cfg(1.0, 0.0, 20, 10_000);
        c.input_dist = InputDist::Frechet(1.0);
        let ks = empirical_vs_limit(&c, |x| frechet_cdf(1.0, x)).unwrap();
        assert!(ks < ks_critical(10_000, 0.01), "{ks}");
    }

    #[test]
    fn overflow_is_reported() {
        let c = cfg(0.002, 1.0, 100_000, 1);
        assert!(matches!(run_path(&c, 0), Err(Error::Overflow(_))));
    }
}
