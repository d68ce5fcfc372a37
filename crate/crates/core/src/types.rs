use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest `alpha` accepted by methods that need `alpha < 1` is `1 - DELTA_MAX`.
pub const DELTA_MAX: f64 = 1e-3;

/// The pair `(gamma, alpha)` selecting one member of the density family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub gamma: f64,
    pub alpha: f64,
}

impl Params {
    pub fn new(gamma: f64, alpha: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain(format!("alpha must lie in [0,1], got {alpha}")));
        }
        Ok(Params { gamma, alpha })
    }

    pub fn is_frechet(&self) -> bool {
        self.alpha == 0.0
    }

    pub fn is_unity(&self) -> bool {
        self.alpha == 1.0
    }

    /// Reject parameters too close to `alpha = 1` for the general engine.
    pub fn require_interior(&self) -> Result<()> {
        if self.alpha > 1.0 - DELTA_MAX {
            return Err(Error::Domain(format!(
                "alpha = {} exceeds 1 - {DELTA_MAX}; use the alpha = 1 routines",
                self.alpha
            )));
        }
        Ok(())
    }

    /// The `alpha = 1` family needs `gamma < 1`.
    pub fn require_subunit_gamma(&self) -> Result<()> {
        if self.gamma >= 1.0 {
            return Err(Error::Domain(format!(
                "alpha = 1 requires gamma < 1, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// `(1-alpha)^{-gamma}`, the limit of `F_j` as `j -> infinity`.
    pub fn f_inf(&self) -> f64 {
        (1.0 - self.alpha).powf(-self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Series,
    Pfaff,
    Integral,
    Quadrature,
    MellinBarnes,
    Hankel,
    TailSeries,
    ClosedForm,
    Asymptotic,
    ContinuedFraction,
    Extrapolated,
    Product,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Series => "series",
            Method::Pfaff => "pfaff",
            Method::Integral => "integral",
            Method::Quadrature => "quadrature",
            Method::MellinBarnes => "mellin_barnes",
            Method::Hankel => "hankel",
            Method::TailSeries => "tail_series",
            Method::ClosedForm => "closed_form",
            Method::Asymptotic => "asymptotic",
            Method::ContinuedFraction => "continued_fraction",
            Method::Extrapolated => "extrapolated",
            Method::Product => "product",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed value with its estimated absolute error and work counters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T = f64> {
    pub value: T,
    pub abs_err: f64,
    pub method: Method,
    pub n_evals: usize,
    pub terms_used: usize,
}

pub trait FiniteCheck {
    fn all_finite(&self) -> bool;
}

impl FiniteCheck for f64 {
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl FiniteCheck for Complex64 {
    fn all_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<T: FiniteCheck + Copy> EvalResult<T> {
    /// Build a result, turning NaN or infinity into an error.
    pub fn new(value: T, abs_err: f64, method: Method) -> Result<Self> {
        if !value.all_finite() {
            return Err(Error::NonFinite(format!("{} produced a non-finite value", method)));
        }
        let abs_err = if abs_err.is_nan() { f64::INFINITY } else { abs_err.abs() };
        Ok(EvalResult { value, abs_err, method, n_evals: 0, terms_used: 0 })
    }

    pub fn with_work(mut self, n_evals: usize, terms_used: usize) -> Self {
        self.n_evals = n_evals;
        self.terms_used = terms_used;
        self
    }
}
