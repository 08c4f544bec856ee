//! Independent numerical solution of the scattering problem.
//!
//! Nothing here uses the closed forms. A piecewise-constant potential is split
//! into segments, each mode is written in a local basis that never exceeds 1
//! in magnitude inside its segment (`e^{-q(z-z_j)}` and `e^{q(z-z_{j+1})}` for
//! evanescent pieces), and continuity of both nonzero spinor components at
//! every interface is imposed as one dense linear system. Phase times come from
//! finite differences of `arg t`, dwell times from quadrature of `ψ†ψ`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods take over once std is linked
use num_traits::Float;

use crate::amplitudes::{unwrap_near, RegionCoefficients};
use crate::diff::{central_richardson, RELATIVE_STEP};
use crate::error::{Error, Result};
use crate::kinematics::{BarrierSystem, KinematicPoint};
use crate::linalg::solve_in_place;
use crate::quad::{adaptive_simpson, Quadrature};
use crate::Complex64;

/// Relative tolerance of the dwell-time quadrature.
pub const DWELL_TOLERANCE: f64 = 1e-9;

/// Interface offset used when sampling fields away from the kinks.
pub const KINK_OFFSET: f64 = 1e-6;

/// Constant-potential slab.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// Potential energy inside the slab.
    pub potential: f64,
    /// Thickness, `≥ 0`.
    pub width: f64,
}

/// Slabs between two field-free half-spaces, the first starting at `z = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    /// Particle mass.
    pub mass: f64,
    /// Slabs in order of increasing `z`.
    pub segments: Vec<Segment>,
}

impl Profile {
    /// Barrier, gap, barrier.
    pub fn double_barrier(system: &BarrierSystem) -> Self {
        let barrier = Segment { potential: system.v0(), width: system.width() };
        let gap = Segment { potential: 0.0, width: system.separation() };
        Self { mass: system.mass(), segments: vec![barrier, gap, barrier] }
    }

    /// A single barrier of the given width.
    pub fn single_barrier(mass: f64, v0: f64, width: f64) -> Self {
        Self { mass, segments: vec![Segment { potential: v0, width }] }
    }

    /// Interface positions `z_0 = 0, ..., z_n`.
    pub fn interfaces(&self) -> Vec<f64> {
        let mut z = vec![0.0];
        let mut acc = 0.0;
        for s in &self.segments {
            acc += s.width;
            z.push(acc);
        }
        z
    }
}

/// Solution pair inside one constant-potential region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// `e^{±ik(z-z_j)}` with lower/upper spinor ratio `±ratio`.
    Propagating {
        /// Wavenumber.
        k: f64,
        /// `k / (E - V + m)`.
        ratio: f64,
    },
    /// `e^{-q(z-z_j)}`, `e^{q(z-z_{j+1})}` with lower/upper ratio `±i·ratio`.
    Evanescent {
        /// Decay constant.
        q: f64,
        /// `q / (E - V + m)`.
        ratio: f64,
    },
}

impl Mode {
    /// Mode pair at energy `E` in potential `V`.
    pub fn new(energy: f64, potential: f64, mass: f64) -> Result<Self> {
        let eps = energy - potential;
        if eps + mass == 0.0 {
            return Err(Error::Singular);
        }
        let d = (eps - mass) * (eps + mass);
        Ok(if d > 0.0 {
            let k = d.sqrt();
            Mode::Propagating { k, ratio: k / (eps + mass) }
        } else {
            let q = (-d).sqrt();
            Mode::Evanescent { q, ratio: q / (eps + mass) }
        })
    }

    /// `[[upper(c1), upper(c2)], [lower(c1), lower(c2)]]` at `offset` from the
    /// region start; `width` anchors the growing evanescent mode.
    pub fn basis(&self, offset: f64, width: f64) -> [[Complex64; 2]; 2] {
        match *self {
            Mode::Propagating { k, ratio } => {
                let p = Complex64::from_polar(1.0, k * offset);
                let m = p.conj();
                [[p, m], [p * ratio, -m * ratio]]
            }
            Mode::Evanescent { q, ratio } => {
                let p = Complex64::new((-q * offset).exp(), 0.0);
                let m = Complex64::new((q * (offset - width)).exp(), 0.0);
                let i = Complex64::new(0.0, ratio);
                [[p, m], [p * i, -m * i]]
            }
        }
    }
}

/// 2×2 map from local coefficients on the left of an interface to those on its right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceMatrix(pub [[Complex64; 2]; 2]);

impl InterfaceMatrix {
    /// Interface after a left region of width `left_width`, followed by a right region of width `right_width`.
    pub fn across(left: &Mode, left_width: f64, right: &Mode, right_width: f64) -> Result<Self> {
        let l = left.basis(left_width, left_width);
        let r = right.basis(0.0, right_width);
        let det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
        if det.norm() == 0.0 {
            return Err(Error::Singular);
        }
        let inv = [[r[1][1] / det, -r[0][1] / det], [-r[1][0] / det, r[0][0] / det]];
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = inv[i][0] * l[0][j] + inv[i][1] * l[1][j];
            }
        }
        Ok(Self(out))
    }

    /// Matrix product `self · rhs`.
    pub fn then(&self, rhs: &Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self(out)
    }

    /// Applies the map to a coefficient pair.
    pub fn apply(&self, c: [Complex64; 2]) -> [Complex64; 2] {
        let m = self.0;
        [m[0][0] * c[0] + m[0][1] * c[1], m[1][0] * c[0] + m[1][1] * c[1]]
    }

    /// Determinant.
    pub fn det(&self) -> Complex64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

/// Stationary state for a unit incident wave from the left.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSolution {
    /// Total energy.
    pub energy: f64,
    /// Interface positions.
    pub interfaces: Vec<f64>,
    /// Mode pair per region, outer half-spaces included.
    pub modes: Vec<Mode>,
    /// Local coefficient pair per region; region 0 is `(1, R)`, the last `(t, 0)`.
    pub coefficients: Vec<[Complex64; 2]>,
}

/// Density and flux at one position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Position.
    pub z: f64,
    /// `ψ†ψ`.
    pub psi_dag_psi: f64,
    /// `ψ†α_z ψ`.
    pub j: f64,
}

/// Solves the continuity system for a profile.
pub fn solve(profile: &Profile, energy: f64) -> Result<LocalSolution> {
    let outside = Mode::new(energy, 0.0, profile.mass)?;
    if !matches!(outside, Mode::Propagating { .. }) {
        return Err(Error::InvalidParameter { name: "E", value: energy });
    }
    let n = profile.segments.len();
    let mut modes = vec![outside];
    for s in &profile.segments {
        modes.push(Mode::new(energy, s.potential, profile.mass)?);
    }
    modes.push(outside);
    let widths: Vec<f64> = core::iter::once(0.0)
        .chain(profile.segments.iter().map(|s| s.width))
        .chain(core::iter::once(0.0))
        .collect();

    // unknowns: R, (c1, c2) per segment, t
    let size = 2 * n + 2;
    let mut matrix = vec![Complex64::new(0.0, 0.0); size * size];
    let mut rhs = vec![Complex64::new(0.0, 0.0); size];
    for iface in 0..=n {
        let left = modes[iface].basis(widths[iface], widths[iface]);
        let right = modes[iface + 1].basis(0.0, widths[iface + 1]);
        for comp in 0..2 {
            let row = 2 * iface + comp;
            let at = |col: usize| row * size + col;
            if iface == 0 {
                rhs[row] = -left[comp][0];
                matrix[at(0)] = left[comp][1];
            } else {
                let base = 2 * iface - 1;
                matrix[at(base)] = left[comp][0];
                matrix[at(base + 1)] = left[comp][1];
            }
            if iface == n {
                matrix[at(size - 1)] = -right[comp][0];
            } else {
                let base = 2 * iface + 1;
                matrix[at(base)] = -right[comp][0];
                matrix[at(base + 1)] = -right[comp][1];
            }
        }
    }
    solve_in_place(&mut matrix, &mut rhs)?;

    let zero = Complex64::new(0.0, 0.0);
    let mut coefficients = vec![[Complex64::new(1.0, 0.0), rhs[0]]];
    for j in 0..n {
        coefficients.push([rhs[2 * j + 1], rhs[2 * j + 2]]);
    }
    coefficients.push([rhs[size - 1], zero]);
    Ok(LocalSolution { energy, interfaces: profile.interfaces(), modes, coefficients })
}

impl LocalSolution {
    /// Reflection amplitude.
    pub fn reflection(&self) -> Complex64 {
        self.coefficients[0][1]
    }

    /// Transmitted amplitude at the right edge, `t = T e^{ikL}`.
    pub fn local_transmission(&self) -> Complex64 {
        self.coefficients[self.coefficients.len() - 1][0]
    }

    /// Coefficient of `e^{ikz}` in the right half-space.
    pub fn transmission(&self) -> Complex64 {
        let k = self.outer_k();
        let end = self.interfaces[self.interfaces.len() - 1];
        self.local_transmission() * Complex64::from_polar(1.0, -k * end)
    }

    fn outer_k(&self) -> f64 {
        match self.modes[0] {
            Mode::Propagating { k, .. } => k,
            Mode::Evanescent { .. } => unreachable!("outer region is always propagating"),
        }
    }

    /// Index of the region containing `z`; slabs own their left edge.
    pub fn region_of(&self, z: f64) -> usize {
        let last = self.interfaces.len();
        if z < self.interfaces[0] {
            return 0;
        }
        for j in 1..last {
            if z < self.interfaces[j] {
                return j;
            }
        }
        last
    }

    /// Upper and lower nonzero spinor components, evaluated with region `region`'s basis.
    pub fn spinor_in(&self, region: usize, z: f64) -> (Complex64, Complex64) {
        let start = if region == 0 { 0.0 } else { self.interfaces[region - 1] };
        let width = if region == 0 || region == self.interfaces.len() {
            0.0
        } else {
            self.interfaces[region] - start
        };
        let b = self.modes[region].basis(z - start, width);
        let c = self.coefficients[region];
        (b[0][0] * c[0] + b[0][1] * c[1], b[1][0] * c[0] + b[1][1] * c[1])
    }

    /// Density and flux at `z`.
    pub fn sample(&self, z: f64) -> FieldSample {
        let (up, low) = self.spinor_in(self.region_of(z), z);
        FieldSample { z, psi_dag_psi: up.norm_sqr() + low.norm_sqr(), j: 2.0 * (up.conj() * low).re }
    }

    /// Flux carried by the unit incident wave.
    pub fn incident_flux(&self) -> f64 {
        match self.modes[0] {
            Mode::Propagating { ratio, .. } => 2.0 * ratio,
            Mode::Evanescent { .. } => unreachable!("outer region is always propagating"),
        }
    }

    /// `∫ψ†ψ dz` over every slab, integrated slab by slab.
    pub fn interior_norm(&self, rel_tol: f64) -> Result<Quadrature> {
        let mut total = Quadrature { value: 0.0, error: 0.0, evaluations: 0 };
        for region in 1..self.interfaces.len() {
            let (lo, hi) = (self.interfaces[region - 1], self.interfaces[region]);
            if hi <= lo {
                continue;
            }
            let part = adaptive_simpson(
                |z| {
                    let (u, l) = self.spinor_in(region, z);
                    u.norm_sqr() + l.norm_sqr()
                },
                lo,
                hi,
                rel_tol,
            )?;
            total.value += part.value;
            total.error += part.error;
            total.evaluations += part.evaluations;
        }
        Ok(total)
    }
}

/// Region coefficients of the double barrier from the linear solve, in the
/// same normalisation as the closed forms.
pub fn tm_solve(energy: f64, system: &BarrierSystem) -> Result<RegionCoefficients> {
    KinematicPoint::new(energy, system)?;
    let sol = solve(&Profile::double_barrier(system), energy)?;
    let (q, k) = match (sol.modes[1], sol.modes[0]) {
        (Mode::Evanescent { q, .. }, Mode::Propagating { k, .. }) => (q, k),
        _ => unreachable!("regime checked above"),
    };
    let (a, l) = (system.width(), system.separation());
    let c = &sol.coefficients;
    let t = sol.transmission();
    if t == Complex64::new(0.0, 0.0) {
        return Err(Error::Underflow);
    }
    Ok(RegionCoefficients {
        r: sol.reflection(),
        a: c[1][0],
        b: c[1][1] * (-q * a).exp(),
        c: c[2][0] * Complex64::from_polar(1.0, -k * a),
        d: c[2][1] * Complex64::from_polar(1.0, k * a),
        f: c[3][0] * (q * (a + l)).exp(),
        g: c[3][1] * (-q * (2.0 * a + l)).exp(),
        t,
    })
}

/// Transmission amplitude of one barrier of width `width`.
pub fn single_barrier_transmission(energy: f64, mass: f64, v0: f64, width: f64) -> Result<Complex64> {
    Ok(solve(&Profile::single_barrier(mass, v0, width), energy)?.transmission())
}

/// Distance from `E` to the nearest edge of the evanescent window.
pub fn regime_margin(energy: f64, system: &BarrierSystem) -> f64 {
    let m = system.mass();
    let v0 = system.v0();
    (energy - m).min(v0 + m - energy).min(energy + m - v0)
}

/// `dφ_t/dE` by Richardson-extrapolated central differences of `arg t`.
pub fn numeric_phase_time(energy: f64, system: &BarrierSystem) -> Result<f64> {
    KinematicPoint::new(energy, system)?;
    let profile = Profile::double_barrier(system);
    let reference = solve(&profile, energy)?.local_transmission().arg();
    let phase = |e: f64| Ok(unwrap_near(solve(&profile, e)?.local_transmission().arg(), reference));
    let step = RELATIVE_STEP * energy;
    Ok(central_richardson(phase, energy, step, regime_margin(energy, system))?.value)
}

/// Dwell time `∫₀^{2a+l} ψ†ψ dz / J_inc`, with the quadrature error scaled alike.
pub fn dwell_integral(energy: f64, system: &BarrierSystem) -> Result<Quadrature> {
    dwell_integral_with(energy, system, DWELL_TOLERANCE)
}

/// [`dwell_integral`] at a chosen relative tolerance.
pub fn dwell_integral_with(energy: f64, system: &BarrierSystem, rel_tol: f64) -> Result<Quadrature> {
    KinematicPoint::new(energy, system)?;
    let sol = solve(&Profile::double_barrier(system), energy)?;
    let norm = sol.interior_norm(rel_tol)?;
    let flux = sol.incident_flux();
    Ok(Quadrature { value: norm.value / flux, error: norm.error / flux, ..norm })
}

/// Density and flux at the given positions.
pub fn flux_profile(energy: f64, system: &BarrierSystem, z: &[f64]) -> Result<Vec<FieldSample>> {
    KinematicPoint::new(energy, system)?;
    let sol = solve(&Profile::double_barrier(system), energy)?;
    Ok(z.iter().map(|&z| sol.sample(z)).collect())
}

/// `per_region` positions in each of the five regions, kept [`KINK_OFFSET`]
/// away from the interfaces. The half-spaces are sampled over one span
/// (at least 1) beyond the structure.
pub fn sample_positions(system: &BarrierSystem, per_region: usize) -> Vec<f64> {
    let (a, l) = (system.width(), system.separation());
    let span = system.span();
    let outer = span.max(1.0);
    let edges = [(-outer, 0.0), (0.0, a), (a, a + l), (a + l, span), (span, span + outer)];
    let mut out = Vec::with_capacity(5 * per_region);
    for (lo, hi) in edges {
        let (lo, hi) = if hi - lo > 2.0 * KINK_OFFSET {
            (lo + KINK_OFFSET, hi - KINK_OFFSET)
        } else {
            let mid = 0.5 * (lo + hi);
            (mid, mid)
        };
        for i in 0..per_region {
            let f = if per_region == 1 { 0.5 } else { i as f64 / (per_region - 1) as f64 };
            out.push(lo + (hi - lo) * f);
        }
    }
    out
}
