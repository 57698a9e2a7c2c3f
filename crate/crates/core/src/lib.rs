//! Lipschitz continuity of posterior distributions in the data.
//!
//! Given a model and a prior, the [`bounds`] module computes constants `L`
//! with `d(π(·|x₁), π(·|x₂)) ≤ L |x₁ − x₂|` for total variation and
//! Wasserstein distances. [`experiments`] checks such constants numerically.
//!
//! ```
//! use wellposed::bounds::lipschitz_expfam;
//! use wellposed::models::{ExpFamilyModel, Prior};
//!
//! let cert = lipschitz_expfam(&ExpFamilyModel::gaussian(1.0)?, &Prior::normal(0.0, 1.0)?)?;
//! assert_eq!(cert.l, 0.5);
//! # Ok::<(), wellposed::Error>(())
//! ```

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod measures;
pub mod models;
pub mod numerics;
pub mod poincare;
pub mod transport;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/poincare.md")]
    mod poincare {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
