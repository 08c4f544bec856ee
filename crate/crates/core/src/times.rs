//! Tunneling time scales: phase time, self-interference delay, dwell time.
//!
//! The phase time is the energy derivative of the transmission phase,
//! written out analytically as
//!
//! ```text
//! τ_p = l E / k - h₁ / (k² q² (Γ² + Δ²))
//! ```
//!
//! where `Γ` and `Δ` are the denominator and numerator of the phase arctangent
//! and `h₁` collects their energy derivatives. The self-interference delay
//! `τ_i = -(m/k²) Im R` links phase and dwell time through `τ_d = τ_p - τ_i`.
//! It is also available as a ratio `h₂/h₃` of trigonometric-hyperbolic
//! polynomials; both routes are evaluated and must agree.
//!
//! All hyperbolic functions are rescaled: `Γ`, `Δ` by `e^{-2qa}` and `h₁`,
//! `h₂`, `h₃` by `e^{-4qa}`, which leaves every ratio unchanged.

#[allow(unused_imports)] // inherent methods take over once std is linked
use num_traits::Float;

use crate::amplitudes::{unwrap_near, Cavity};
use crate::diff::{central_richardson, RELATIVE_STEP};
use crate::error::{Error, Result};
use crate::kinematics::{BarrierSystem, KinematicPoint};

/// Time scales at one energy, in units of `1/m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeReport {
    /// Phase (group delay) time.
    pub tau_p: f64,
    /// Self-interference delay.
    pub tau_i: f64,
    /// Dwell time `τ_p - τ_i`.
    pub tau_d: f64,
    /// Time for a free packet peak to cross `0 < z < 2a + l`.
    pub t_free: f64,
    /// Time for light to cross `0 < z < 2a + l`.
    pub t_light: f64,
}

/// Rescaled intermediate quantities of the closed-form phase time and
/// self-interference delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixTerms {
    /// `Γ e^{-2qa}`: denominator of the phase arctangent.
    pub gamma: f64,
    /// `Δ e^{-2qa}`: numerator of the phase arctangent.
    pub delta: f64,
    /// `h₁ e^{-4qa}`.
    pub h1: f64,
    /// `h₂ e^{-4qa}`.
    pub h2: f64,
    /// `h₃ e^{-4qa}`.
    pub h3: f64,
    h2_weight: f64,
    h3_weight: f64,
}

impl AppendixTerms {
    /// Evaluates all terms at one kinematic point.
    pub fn new(point: &KinematicPoint, system: &BarrierSystem) -> Self {
        let cav = Cavity::relativistic(point, system);
        let (delta, gamma) = cav.phase_pair();

        let KinematicPoint { energy: e, mass: m, inner_energy: ev, k, q, alpha: al, .. } = *point;
        let a2 = al * al;
        let kq = k * k + q * q;
        let x = q * system.width();
        let kl = k * system.separation();
        let kl2 = 2.0 * kl;
        let qa2 = 2.0 * x;
        let (s2kl, c2kl) = kl2.sin_cos();
        let (skl, ckl) = kl.sin_cos();

        let damp = cav.damping;
        let sh2 = cav.sh * cav.sh;
        let ch4 = (cav.ch * cav.ch) * (cav.ch * cav.ch);
        let c2x = 0.5 * (1.0 + damp * damp);
        let s2x = -0.5 * (-4.0 * x).exp_m1();
        let s4x = -0.5 * (-8.0 * x).exp_m1();
        let opa = 1.0 + a2;
        let oma = 1.0 - a2;

        let brace_delta = 2.0 * opa * (opa * e * q * q * kl2 * s2kl - 4.0 * a2 * m * kq * c2kl) * sh2
            - 4.0 * a2 * m * kq * (opa * damp + (3.0 - a2) * c2x)
            + k * k * qa2 * ev * (opa * opa * c2kl - (1.0 - 6.0 * a2 + a2 * a2)) * s2x;
        let brace_gamma = -4.0 * al * oma * k * k * qa2 * ev * c2x
            + 2.0 * opa * (opa * e * q * q * kl2 * c2kl + 4.0 * a2 * m * kq * s2kl) * sh2
            + (4.0 * al * (1.0 - 3.0 * a2) * m * kq - opa * opa * k * k * qa2 * ev * s2kl) * s2x;
        let h1 = delta * brace_delta + gamma * brace_gamma;

        let h2_terms = [
            0.5 * al * oma * s2kl * s2x * s2x,
            a2 * ckl * ckl * s4x,
            al * oma * s2kl * sh2 * c2x,
            oma * oma * skl * skl * sh2 * s2x,
        ];
        let a4 = a2 * a2;
        let h3_terms = [
            8.0 * a4 * ch4,
            (1.0 + 6.0 * a4 + a4 * a4 - (1.0 - a4) * (1.0 - a4) * c2kl) * sh2 * sh2,
            a2 * (oma * oma + opa * opa * c2kl) * s2x * s2x,
            2.0 * al * oma * opa * opa * s2kl * sh2 * s2x,
        ];
        let h2: f64 = h2_terms.iter().sum();
        let h3 = h3_terms.iter().sum::<f64>() / (8.0 * a4);
        let h2_weight = h2_terms.iter().map(|t| t.abs()).sum();
        let h3_weight = h3_terms.iter().map(|t| t.abs()).sum::<f64>() / (8.0 * a4);
        Self { gamma, delta, h1, h2, h3, h2_weight, h3_weight }
    }

    /// `τ_i` from the `h₂/h₃` ratio.
    pub fn interference_delay(&self, point: &KinematicPoint) -> f64 {
        let al = point.alpha;
        point.mass / (point.k * point.k) * (1.0 + al * al) / (4.0 * al * al * al) * self.h2 / self.h3
    }

    /// Rounding bound on [`Self::interference_delay`] from the spread of the summed terms.
    fn interference_rounding(&self, point: &KinematicPoint) -> f64 {
        let al = point.alpha;
        let pref = point.mass / (point.k * point.k) * (1.0 + al * al) / (4.0 * al * al * al);
        let ratio = (self.h2 / self.h3).abs();
        32.0 * f64::EPSILON * pref * (self.h2_weight + ratio * self.h3_weight) / self.h3.abs()
    }
}

/// Phase time from the analytic energy derivative of the transmission phase.
pub fn phase_time_closed(energy: f64, system: &BarrierSystem) -> Result<f64> {
    let point = KinematicPoint::new(energy, system)?;
    Ok(phase_time_at(&point, system, &AppendixTerms::new(&point, system)))
}

fn phase_time_at(point: &KinematicPoint, system: &BarrierSystem, terms: &AppendixTerms) -> f64 {
    let KinematicPoint { energy: e, k, q, .. } = *point;
    let norm = terms.gamma * terms.gamma + terms.delta * terms.delta;
    system.separation() * e / k - terms.h1 / (k * k * q * q * norm)
}

/// Self-interference delay.
///
/// Evaluates `-(m/k²) Im R` and the `h₂/h₃` form; a disagreement beyond
/// `1e-8 m/k²` (plus the rounding bound of the polynomial sums) is reported
/// as [`Error::Inconsistent`]. Returns the `Im R` value.
pub fn self_interference_delay(energy: f64, system: &BarrierSystem) -> Result<f64> {
    let point = KinematicPoint::new(energy, system)?;
    let terms = AppendixTerms::new(&point, system);
    interference_at(&point, system, &terms)
}

fn interference_at(
    point: &KinematicPoint,
    system: &BarrierSystem,
    terms: &AppendixTerms,
) -> Result<f64> {
    let scale = point.mass / (point.k * point.k);
    let from_r = -scale * Cavity::relativistic(point, system).reflection().im;
    let from_terms = terms.interference_delay(point);
    let tol = 1e-8 * scale + terms.interference_rounding(point);
    if !((from_r - from_terms).abs() <= tol) {
        return Err(Error::Inconsistent {
            quantity: "self-interference delay",
            first: from_r,
            second: from_terms,
        });
    }
    Ok(from_r)
}

/// Dwell time `τ_p - τ_i`.
pub fn dwell_time(energy: f64, system: &BarrierSystem) -> Result<f64> {
    let r = time_report(energy, system)?;
    Ok(r.tau_d)
}

/// All time scales at one energy.
pub fn time_report(energy: f64, system: &BarrierSystem) -> Result<TimeReport> {
    let point = KinematicPoint::new(energy, system)?;
    let terms = AppendixTerms::new(&point, system);
    let tau_p = phase_time_at(&point, system, &terms);
    let tau_i = interference_at(&point, system, &terms)?;
    let span = system.span();
    Ok(TimeReport {
        tau_p,
        tau_i,
        tau_d: tau_p - tau_i,
        t_free: span / point.group_velocity(),
        t_light: span,
    })
}

/// Saturated times for `qa → ∞`; they depend on neither `a` nor `l`.
///
/// `t_free` and `t_light` still refer to the actual geometry.
pub fn opaque_limit_times(energy: f64, system: &BarrierSystem) -> Result<TimeReport> {
    let p = KinematicPoint::new(energy, system)?;
    let factor = 2.0 * p.alpha / (1.0 + p.alpha * p.alpha);
    let k2 = p.k * p.k;
    let q2 = p.q * p.q;
    let span = system.span();
    Ok(TimeReport {
        tau_p: factor * (k2 + q2) / k2 * p.mass / q2,
        tau_i: factor * p.mass / k2,
        tau_d: factor * p.mass / q2,
        t_free: span / p.group_velocity(),
        t_light: span,
    })
}

/// Schrödinger counterpart at kinetic energy `E_kin`.
///
/// Uses `k = √(2m E_kin)`, `q = √(2m (V0 - E_kin))` and `α = k/q` in the same
/// amplitude structure; the phase time is differentiated numerically.
pub fn nonrelativistic_times(kinetic: f64, system: &BarrierSystem) -> Result<TimeReport> {
    let v0 = system.v0();
    if !(kinetic > 0.0 && kinetic < v0) {
        return Err(Error::OutOfWindow { kinetic, v0 });
    }
    let m = system.mass();
    let (a, l) = (system.width(), system.separation());
    let cavity_at = |e: f64| {
        let k = (2.0 * m * e).sqrt();
        let q = (2.0 * m * (v0 - e)).sqrt();
        Cavity::new(k, q, k / q, a, l)
    };
    let centre = cavity_at(kinetic);
    let reference = centre.principal_phase();
    let phase = |e: f64| Ok(unwrap_near(cavity_at(e).principal_phase(), reference));
    let margin = kinetic.min(v0 - kinetic);
    let tau_p = central_richardson(phase, kinetic, RELATIVE_STEP * kinetic, margin)?.value;
    let tau_i = -m / (centre.k * centre.k) * centre.reflection().im;
    let span = system.span();
    Ok(TimeReport {
        tau_p,
        tau_i,
        tau_d: tau_p - tau_i,
        t_free: span * m / centre.k,
        t_light: span,
    })
}
