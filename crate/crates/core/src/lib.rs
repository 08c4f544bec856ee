//! Relativistic tunneling of a spin-1/2 particle through two identical
//! rectangular electrostatic barriers.
//!
//! The crate evaluates the stationary Dirac scattering problem in closed form
//! (transmission and reflection amplitudes, interior coefficients, phase time,
//! self-interference delay, dwell time and their opaque-barrier limits) and
//! carries an independent numerical [`oracle`] that solves the same problem by
//! direct linear algebra, finite differences and quadrature.
//!
//! Natural units are used throughout: `ħ = c = 1`, energies in units of the
//! rest energy, lengths and times in units of `1/m`.
//!
//! ## no_std support
//!
//! The crate is `no_std` and only needs `alloc` (for the oracle's dense
//! systems and for sweep datasets). Transcendental functions come from `libm`
//! through `num-traits`. File formats and the command-line driver live in the
//! `dirac-tunneling-cli` crate.

#![no_std]
#![deny(missing_docs)]
// negated comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod amplitudes;
pub mod diff;
mod error;
pub mod kinematics;
pub mod linalg;
pub mod minimize;
pub mod oracle;
pub mod quad;
pub mod scenarios;
pub mod times;

pub use amplitudes::{
    reflection, region_coefficients, scatter, transmission, transmission_phase, PhaseBranch,
    RegionCoefficients, ScatteringSolution,
};
pub use error::{Error, Result};
pub use kinematics::{alpha, classify_regime, decay_q, wavenumber_k, BarrierSystem, KinematicPoint, Regime};
pub use scenarios::{
    figure_dataset, find_resonances, run_sweep, Figure, Resonance, SweepAxis, SweepDataset,
    SweepRow, SweepSpec,
};
pub use times::{
    dwell_time, nonrelativistic_times, opaque_limit_times, phase_time_closed,
    self_interference_delay, time_report, AppendixTerms, TimeReport,
};

/// Complex scalar used for every amplitude.
pub type Complex64 = num_complex::Complex<f64>;
