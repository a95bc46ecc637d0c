//! Closed-form structure of a star whose density follows
//! `ρ(r) = ρ_c (1 - (r/R)^δ)^γ`.
//!
//! Mass, pressure, temperature and (for `T`-linear energy generation)
//! luminosity are evaluated as finite sums of incomplete beta functions.
//! [`oracle`] integrates the defining integrals directly and [`validate`]
//! cross-checks the two.
//!
//! Everything numerical is generic over [`Real`]: `f64` for normal use,
//! `f32` for bulk evaluation and [`Quad`] (double-double) for checking
//! cancellation-prone series.
//!
//! ```
//! use sunmodel::structure::{mass_ratio, pressure_factor_g};
//! use sunmodel::ModelParamsF64;
//!
//! let params = ModelParamsF64::new(1.2814, 10).unwrap();
//! let m = mass_ratio(&params, 0.245).unwrap();
//! assert!((m - 0.5225).abs() < 5e-4);
//! assert!(pressure_factor_g(&params, 1.0).unwrap().abs() < 1e-15);
//! ```

pub mod calibrate;
pub mod density;
pub mod energy;
pub mod error;
pub mod oracle;
pub mod reference;
pub mod scalar;
pub mod specfun;
pub mod structure;
pub mod tables;
pub mod validate;

pub use error::{Error, Result};
pub use scalar::{Quad, Real};

pub type ModelParamsF64 = density::ModelParams<f64>;
pub type ModelParamsF32 = density::ModelParams<f32>;
pub type ModelParamsQuad = density::ModelParams<Quad>;
pub type SolarConstantsF64 = structure::SolarConstants<f64>;
pub type SolarConstantsQuad = structure::SolarConstants<Quad>;
pub type EnergyParamsF64 = energy::EnergyParams<f64>;
pub type ProfileF64 = structure::Profile<f64>;
pub type ReferenceTableF64 = calibrate::ReferenceTable<f64>;
