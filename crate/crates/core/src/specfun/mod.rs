//! Pochhammer symbols, log-gamma, terminating hypergeometric series and the
//! positive-term incomplete beta sums the model is built on.

pub mod beta;
mod gamma;
mod hyper;
mod kdf;
mod sum;

pub use gamma::{factorial, ln_gamma, ln_gamma_ratio, pochhammer};
pub use hyper::{gauss_2f1_at_unity, gauss_2f1_terminating, gauss_2f1_terminating_sum};
pub use kdf::{kdf_eval, KdfSpec};
pub use sum::CompensatedSum;
