//! Numeric settings: flags (or `ALPHASUN_*` env vars) over a `key = value` file over defaults.

use std::collections::BTreeMap;
use std::path::Path;

use alphasun_core::{Error, MellinConfig, QuadConfig};
use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;

#[derive(Args, Debug, Clone, Default)]
pub struct TolArgs {
    /// Config file with one `key = value` per line
    #[arg(long, global = true, env = "ALPHASUN_CONFIG")]
    pub config: Option<std::path::PathBuf>,
    /// Absolute quadrature tolerance
    #[arg(long, global = true, env = "ALPHASUN_ABS_TOL")]
    pub abs_tol: Option<f64>,
    /// Relative quadrature tolerance
    #[arg(long, global = true, env = "ALPHASUN_REL_TOL")]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true, env = "ALPHASUN_MAX_SUBDIVISIONS")]
    pub max_subdivisions: Option<usize>,
    /// Real part of the inversion contour
    #[arg(long, global = true, env = "ALPHASUN_CONTOUR_C")]
    pub contour_c: Option<f64>,
    /// Product truncation J
    #[arg(long, global = true, env = "ALPHASUN_PRODUCT_J")]
    pub product_j: Option<usize>,
    /// Orders of the product tail correction (0..=4)
    #[arg(long, global = true, env = "ALPHASUN_TAIL_ORDER")]
    pub tail_order: Option<usize>,
    /// Stopping tolerance of the Laplace continued fraction
    #[arg(long, global = true, env = "ALPHASUN_CF_TOL")]
    pub cf_tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub contour_c: f64,
    pub product_j: usize,
    pub tail_order: usize,
    pub cf_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        let m = MellinConfig::default();
        Settings {
            abs_tol: m.quad.abs_tol,
            rel_tol: m.quad.rel_tol,
            max_subdivisions: m.quad.max_subdivisions,
            contour_c: m.contour_c,
            product_j: m.product_j,
            tail_order: m.tail_order,
            cf_tol: 1e-12,
        }
    }
}

fn domain(msg: String) -> anyhow::Error {
    Error::Domain(msg).into()
}

fn parse_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| domain(format!("{}:{}: expected `key = value`", path.display(), i + 1)))?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| domain(format!("config key {key}: cannot parse `{v}`")))
}

impl Settings {
    pub fn resolve(args: &TolArgs) -> Result<Settings> {
        let mut s = Settings::default();
        if let Some(path) = &args.config {
            for (k, v) in parse_file(path)? {
                match k.as_str() {
                    "abs_tol" => s.abs_tol = num(&k, &v)?,
                    "rel_tol" => s.rel_tol = num(&k, &v)?,
                    "max_subdivisions" => s.max_subdivisions = num(&k, &v)?,
                    "contour_c" => s.contour_c = num(&k, &v)?,
                    "product_j" => s.product_j = num(&k, &v)?,
                    "tail_order" => s.tail_order = num(&k, &v)?,
                    "cf_tol" => s.cf_tol = num(&k, &v)?,
                    _ => return Err(domain(format!("unknown config key `{k}`"))),
                }
            }
        }
        s.abs_tol = args.abs_tol.unwrap_or(s.abs_tol);
        s.rel_tol = args.rel_tol.unwrap_or(s.rel_tol);
        s.max_subdivisions = args.max_subdivisions.unwrap_or(s.max_subdivisions);
        s.contour_c = args.contour_c.unwrap_or(s.contour_c);
        s.product_j = args.product_j.unwrap_or(s.product_j);
        s.tail_order = args.tail_order.unwrap_or(s.tail_order);
        s.cf_tol = args.cf_tol.unwrap_or(s.cf_tol);
        if !(s.cf_tol > 0.0) {
            return Err(domain(format!("cf_tol must be positive, got {}", s.cf_tol)));
        }
        s.mellin().validate()?;
        Ok(s)
    }

    pub fn quad(&self) -> QuadConfig {
        QuadConfig { abs_tol: self.abs_tol, rel_tol: self.rel_tol, max_subdivisions: self.max_subdivisions }
    }

    pub fn mellin(&self) -> MellinConfig {
        MellinConfig { contour_c: self.contour_c, product_j: self.product_j, tail_order: self.tail_order, quad: self.quad() }
    }
}
