pub mod closedform;
pub mod error;
pub mod laplace;
pub mod mellin;
pub mod quad;
pub mod simulate;
pub mod specfun;
pub mod types;
pub mod validate;
pub use error::{Error, Result};
pub use validate::TableReport;
pub use mellin::MellinConfig;
pub use num_complex::Complex64;
pub use quad::QuadConfig;
pub use simulate::{InputDist, SimConfig};
pub use types::{EvalResult, Method, Params, DELTA_MAX};
