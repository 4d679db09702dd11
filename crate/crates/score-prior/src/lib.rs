//! Proper objective priors from scoring rules.
//!
//! The priors in this crate are built so that a combined local score of
//! the density, the log score plus the Hyvarinen score, is constant in
//! the parameter. That requirement turns into a second-order equation
//! for u = -log p which the [`prior`] module solves by Taylor marching;
//! the rest of the crate evaluates the resulting densities, samples
//! posteriors built on them, and runs the model-selection and
//! frequentist studies that exercise them.

pub mod error;
pub mod io;
pub mod mcmc;
pub mod models;
pub mod numeric;
pub mod prior;
pub mod scoring;
pub mod selection;

pub use error::{Error, Result};
