//! Traveling reactive shock waves in a fractional-order reaction model.
//!
//! The crate classifies waves through the transition map of a planar
//! slow-fast field, builds whole-line profiles, and traces the curves
//! `beta_0(c)` and `beta_1(c)` that separate the wave types.

// NaN must fail parameter checks, so `!(x > 0.0)` is used on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bifurcation;
pub mod cli;
pub mod error;
pub mod integrator;
pub mod model;
pub mod table;
pub mod transition;

pub use error::{Error, Result};
pub use model::{FlowParams, Kinetics, ModelParams};
pub use transition::{Branch, SolutionClass, WaveSystem, WaveType};
