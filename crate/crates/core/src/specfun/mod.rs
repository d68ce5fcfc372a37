//! Scalar special functions.

mod airy;
mod bessel;
mod gamma;
mod hyp;
mod kummer;
mod wright;

pub use airy::{airy_ai, airy_ai_prime};
pub use bessel::{bessel_j0, bessel_j1, j0_zero, J0_ZEROS};
pub use gamma::{cgamma, digamma, gamma, ln_gamma, log_gamma, rgamma, trigamma};
pub use hyp::{direct_series, f_j, hyp2f1_b_bplus1, hyp2f1_series, integral_route, pfaff_series, SERIES_MAX_TERMS};
pub use kummer::hyp1f1_neg;
pub use wright::{mittag_leffler, wright_bessel};
