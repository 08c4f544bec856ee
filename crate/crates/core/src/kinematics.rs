//! Parameter validation and the elementary quantities `k`, `q` and `α`.
//!
//! All quantities are in natural units (`ħ = c = 1`). The rest energy `m` is
//! fixed to one by [`BarrierSystem::new`] but carried explicitly so that the
//! nonrelativistic limit can be approached by raising it.

#[allow(unused_imports)] // inherent methods take over once std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Two identical barriers of height `V0` and width `a`, separated by `l`.
///
/// The potential is nonzero on `0 < z < a` and `a + l < z < 2a + l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSystem {
    mass: f64,
    v0: f64,
    a: f64,
    l: f64,
}

impl BarrierSystem {
    /// Unit rest energy.
    pub fn new(v0: f64, a: f64, l: f64) -> Result<Self> {
        Self::with_mass(1.0, v0, a, l)
    }

    /// Arbitrary rest energy `mass`.
    pub fn with_mass(mass: f64, v0: f64, a: f64, l: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter { name: "mass", value: mass });
        }
        if !(v0 > 0.0 && v0.is_finite()) {
            return Err(Error::InvalidParameter { name: "V0", value: v0 });
        }
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter { name: "a", value: a });
        }
        if !(l >= 0.0 && l.is_finite()) {
            return Err(Error::InvalidParameter { name: "l", value: l });
        }
        Ok(Self { mass, v0, a, l })
    }

    /// Same system with a different barrier width.
    pub fn with_width(&self, a: f64) -> Result<Self> {
        Self::with_mass(self.mass, self.v0, a, self.l)
    }

    /// Same system with a different separation.
    pub fn with_separation(&self, l: f64) -> Result<Self> {
        Self::with_mass(self.mass, self.v0, self.a, l)
    }

    /// Rest energy `m`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Barrier height `V0`.
    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// Barrier width `a`.
    pub fn width(&self) -> f64 {
        self.a
    }

    /// Inter-barrier separation `l`.
    pub fn separation(&self) -> f64 {
        self.l
    }

    /// Extent `2a + l` of the region where the potential is switched on.
    pub fn span(&self) -> f64 {
        2.0 * self.a + self.l
    }
}

/// Scattering regime of an `(E, V0)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `E > m` and `E - m < V0 < E + m`: real decay constant inside the barriers.
    EvanescentParticle,
    /// `V0 <= E - m`: oscillatory interior, classified but not computed.
    AboveBarrier,
    /// `V0 >= E + m`: pair-production regime where the one-particle picture fails.
    Supercritical,
    /// `E <= m`: no propagating incident wave.
    BelowThreshold,
}

impl Regime {
    /// Human readable reason used in error messages.
    pub fn message(&self) -> &'static str {
        match self {
            Regime::EvanescentParticle => "Evanescent particle regime",
            Regime::AboveBarrier => "Above-barrier regime: V0 ≤ E − m",
            Regime::Supercritical => "Supercritical regime: V0 ≥ E + m",
            Regime::BelowThreshold => "Below threshold: E ≤ m",
        }
    }
}

/// Classifies `(E, V0)` for the given system. Total: every input gets exactly one tag.
pub fn classify_regime(energy: f64, system: &BarrierSystem) -> Regime {
    let m = system.mass;
    let v0 = system.v0;
    // negated comparisons send NaN to BelowThreshold
    if !(energy > m) {
        Regime::BelowThreshold
    } else if v0 >= energy + m {
        Regime::Supercritical
    } else if v0 <= energy - m {
        Regime::AboveBarrier
    } else {
        Regime::EvanescentParticle
    }
}

fn regime_error(energy: f64, system: &BarrierSystem, regime: Regime) -> Error {
    Error::Regime { regime, energy, v0: system.v0 }
}

/// Free wavenumber `k = sqrt(E² - m²)`.
pub fn wavenumber_k(energy: f64, system: &BarrierSystem) -> Result<f64> {
    let m = system.mass;
    if !(energy > m) {
        return Err(regime_error(energy, system, Regime::BelowThreshold));
    }
    // factored to keep E - m exact close to threshold
    Ok(((energy - m) * (energy + m)).sqrt())
}

/// Evanescent decay constant `q = sqrt(m² - (E - V0)²)`.
pub fn decay_q(energy: f64, system: &BarrierSystem) -> Result<f64> {
    let m = system.mass;
    let v0 = system.v0;
    // same comparisons as `classify_regime`, so both agree at the window edges
    if v0 >= energy + m {
        return Err(regime_error(energy, system, Regime::Supercritical));
    }
    if !(v0 > energy - m) {
        return Err(regime_error(energy, system, Regime::AboveBarrier));
    }
    let eps = energy - v0;
    Ok(((m - eps) * (m + eps)).max(0.0).sqrt())
}

/// `α = (k/q)·(E - V0 + m)/(E + m)`.
pub fn alpha(energy: f64, system: &BarrierSystem) -> Result<f64> {
    Ok(KinematicPoint::new(energy, system)?.alpha)
}

/// Derived kinematics at one total energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicPoint {
    /// Total energy `E`.
    pub energy: f64,
    /// Rest energy `m`.
    pub mass: f64,
    /// `E - V0`.
    pub inner_energy: f64,
    /// Free wavenumber.
    pub k: f64,
    /// Decay constant inside the barriers.
    pub q: f64,
    /// Spinor ratio `α`.
    pub alpha: f64,
}

impl KinematicPoint {
    /// Fails unless `(E, V0)` is in the evanescent particle regime.
    pub fn new(energy: f64, system: &BarrierSystem) -> Result<Self> {
        let regime = classify_regime(energy, system);
        if regime != Regime::EvanescentParticle {
            return Err(regime_error(energy, system, regime));
        }
        let k = wavenumber_k(energy, system)?;
        let q = decay_q(energy, system)?;
        let m = system.mass;
        let inner_energy = energy - system.v0;
        let alpha = (k / q) * (inner_energy + m) / (energy + m);
        Ok(Self { energy, mass: m, inner_energy, k, q, alpha })
    }

    /// Free Dirac group velocity `k/E`.
    pub fn group_velocity(&self) -> f64 {
        self.k / self.energy
    }

    /// Lower/upper component ratio of the free spinor, `k/(E + m)`.
    pub fn free_spinor_ratio(&self) -> f64 {
        self.k / (self.energy + self.mass)
    }

    /// Flux `2k/(E + m)` carried by the unit incident spinor.
    pub fn incident_flux(&self) -> f64 {
        2.0 * self.free_spinor_ratio()
    }
}
