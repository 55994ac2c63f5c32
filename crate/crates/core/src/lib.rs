//! Classical mode dynamics of the parametric dissipative oscillator model.
//!
//! A mode of wavenumber `k` and openness (link count) `n` is described by a
//! damped oscillator `u` and its amplified mirror `v`, both driven by the
//! exponentially relaxing frequency `omega_n(t) = omega0 * exp(-L t / (2n + 1))`.
//! The crate provides:
//!
//! * [`formulas`]: closed-form frequencies, recording deadlines, infrared
//!   thresholds, coherence-domain sizes and mode lifetimes;
//! * [`specfun`]: spherical Bessel functions and the substitution that turns
//!   them into exact solutions of the oscillator pair;
//! * [`integrator`]: an adaptive Dormand-Prince 5(4) integrator for the pair
//!   and the parametric oscillator, plus residual certification;
//! * [`domains`]: memory-event bookkeeping and lifetime curve families.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domains;
pub mod error;
pub mod formulas;
pub mod integrator;
pub mod numeric;
pub mod specfun;

pub use error::{Error, Result};
pub use formulas::{DomainSnapshot, ModelParams, Mode, RecordingWindow};
pub use integrator::{IntegratorConfig, OscillatorSystem, SystemForm, Trajectory};
pub use specfun::{BesselKind, BesselValue, Jet, TransformParams};
