use core::fmt;

use crate::kinematics::Regime;

/// Convenience alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while evaluating tunneling observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// A system parameter violates its domain (negative width, non-positive height, ...).
    InvalidParameter {
        /// Parameter name as used on the command line (`V0`, `a`, `l`, `mass`, `E`).
        name: &'static str,
        /// Offending value.
        value: f64,
    },
    /// The energy/potential pair lies outside the evanescent particle window.
    Regime {
        /// Classification of the rejected point.
        regime: Regime,
        /// Total energy.
        energy: f64,
        /// Barrier height.
        v0: f64,
    },
    /// Nonrelativistic comparison requires `0 < E_kin < V0`.
    OutOfWindow {
        /// Kinetic energy.
        kinetic: f64,
        /// Barrier height.
        v0: f64,
    },
    /// A sweep grid point left the evanescent window.
    SweepPoint {
        /// Index of the grid point.
        index: usize,
        /// Value of the swept parameter at that point.
        value: f64,
        /// Classification of the offending point.
        regime: Regime,
    },
    /// A sweep specification is malformed.
    InvalidSweep(&'static str),
    /// Two formulas for the same quantity disagree; this is an implementation defect.
    Inconsistent {
        /// Which quantity was computed twice.
        quantity: &'static str,
        /// First route.
        first: f64,
        /// Second route.
        second: f64,
    },
    /// Dense linear solve hit a zero pivot.
    Singular,
    /// A computed amplitude underflowed to zero.
    Underflow,
    /// Finite-difference step does not fit between the evaluation point and a regime boundary.
    StepUnderflow {
        /// Distance to the nearest regime boundary.
        margin: f64,
        /// Requested step.
        step: f64,
    },
    /// Adaptive quadrature exhausted its subdivision budget.
    QuadratureNonconvergence {
        /// Left end of the failing panel.
        at: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}")
            }
            Error::Regime { regime, energy, v0 } => {
                write!(f, "{} (E = {energy}, V0 = {v0})", regime.message())
            }
            Error::OutOfWindow { kinetic, v0 } => write!(
                f,
                "nonrelativistic comparison needs 0 < E_kin < V0 (E_kin = {kinetic}, V0 = {v0})"
            ),
            Error::SweepPoint { index, value, regime } => write!(
                f,
                "{} at grid point {index} (swept value {value})",
                regime.message()
            ),
            Error::InvalidSweep(why) => write!(f, "invalid sweep: {why}"),
            Error::Inconsistent { quantity, first, second } => write!(
                f,
                "internal consistency failure: two evaluations of {quantity} disagree ({first} vs {second})"
            ),
            Error::Singular => f.write_str("singular continuity system"),
            Error::Underflow => f.write_str("transmission amplitude underflowed to zero"),
            Error::StepUnderflow { margin, step } => write!(
                f,
                "derivative step {step} does not fit inside regime margin {margin}"
            ),
            Error::QuadratureNonconvergence { at } => {
                write!(f, "adaptive quadrature did not converge near z = {at}")
            }
        }
    }
}

impl core::error::Error for Error {}
