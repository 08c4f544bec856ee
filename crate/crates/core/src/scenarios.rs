//! Parameter sweeps, resonance search and the canonical figure datasets.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // inherent methods take over once std is linked
use num_traits::Float;

use crate::amplitudes::{scatter, PhaseBranch};
use crate::error::{Error, Result};
use crate::kinematics::{classify_regime, BarrierSystem, Regime};
use crate::minimize::golden_section;
use crate::times::{nonrelativistic_times, opaque_limit_times, time_report};

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Barrier width `a`.
    Width,
    /// Barrier separation `l`.
    Separation,
    /// Total energy `E`.
    Energy,
}

impl SweepAxis {
    /// Short name used in configuration files and plot labels.
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Width => "a",
            SweepAxis::Separation => "l",
            SweepAxis::Energy => "E",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "width" | "width_a" => Ok(SweepAxis::Width),
            "l" | "separation" | "separation_l" => Ok(SweepAxis::Separation),
            "E" | "energy" | "energy_E" => Ok(SweepAxis::Energy),
            _ => Err(Error::InvalidSweep("unknown sweep axis")),
        }
    }
}

/// A uniform one-parameter grid with everything else held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    /// Swept parameter.
    pub axis: SweepAxis,
    /// First grid value.
    pub lo: f64,
    /// Last grid value.
    pub hi: f64,
    /// Number of grid points, `≥ 2`.
    pub points: usize,
    /// Energy, ignored when sweeping `E`.
    pub energy: f64,
    /// Barrier system; the swept field is overwritten per point.
    pub system: BarrierSystem,
    /// Add the Schrödinger phase time at `E_kin = E - m`.
    pub include_nr: bool,
    /// Add the opaque-limit `τ_p` and `τ_d`.
    pub include_opaque: bool,
}

impl SweepSpec {
    /// Grid value at `index`; the endpoints are hit exactly.
    pub fn value(&self, index: usize) -> f64 {
        if index + 1 == self.points {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * index as f64 / (self.points - 1) as f64
    }

    /// All grid values.
    pub fn grid(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }

    /// Energy and system at one grid point.
    pub fn point(&self, index: usize) -> Result<(f64, BarrierSystem)> {
        let v = self.value(index);
        Ok(match self.axis {
            SweepAxis::Width => (self.energy, self.system.with_width(v)?),
            SweepAxis::Separation => (self.energy, self.system.with_separation(v)?),
            SweepAxis::Energy => (v, self.system),
        })
    }

    /// Checks the grid shape and that every point is in the evanescent window.
    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) {
            return Err(Error::InvalidSweep("range must be finite"));
        }
        if !(self.lo < self.hi) {
            return Err(Error::InvalidSweep("range needs lo < hi"));
        }
        if self.points < 2 {
            return Err(Error::InvalidSweep("at least 2 points are required"));
        }
        for index in 0..self.points {
            let (energy, system) = self.point(index)?;
            let regime = classify_regime(energy, &system);
            if regime != Regime::EvanescentParticle {
                return Err(Error::SweepPoint { index, value: self.value(index), regime });
            }
            if self.include_nr {
                let kinetic = energy - system.mass();
                if !(kinetic < system.v0()) {
                    return Err(Error::OutOfWindow { kinetic, v0: system.v0() });
                }
            }
        }
        Ok(())
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Value of the swept parameter.
    pub swept: f64,
    /// Phase time.
    pub tau_p: f64,
    /// Dwell time.
    pub tau_d: f64,
    /// Self-interference delay.
    pub tau_i: f64,
    /// Free traversal time of `2a + l`.
    pub t_free: f64,
    /// Light traversal time of `2a + l`.
    pub t_light: f64,
    /// `|T|²`.
    pub t2: f64,
    /// Transmission phase, continued along the grid after [`unwrap_phases`].
    pub phi_t: f64,
    /// Schrödinger phase time, when requested.
    pub tau_p_nr: Option<f64>,
    /// Opaque-limit `(τ_p, τ_d)`, when requested.
    pub opaque: Option<(f64, f64)>,
}

/// Rows of a sweep in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepDataset {
    /// The sweep that produced the rows.
    pub spec: SweepSpec,
    /// One row per grid point.
    pub rows: Vec<SweepRow>,
}

/// Evaluates one grid point with the phase on the principal branch.
///
/// Rows are independent, so callers may evaluate them in any order or in
/// parallel and finish with [`unwrap_phases`].
pub fn evaluate_row(spec: &SweepSpec, index: usize) -> Result<SweepRow> {
    let (energy, system) = spec.point(index)?;
    evaluate_point(spec.value(index), energy, &system, spec.include_nr, spec.include_opaque)
}

/// One row at an arbitrary point; `swept` is stored as given.
pub fn evaluate_point(
    swept: f64,
    energy: f64,
    system: &BarrierSystem,
    include_nr: bool,
    include_opaque: bool,
) -> Result<SweepRow> {
    let times = time_report(energy, system)?;
    let s = scatter(energy, system)?;
    let tau_p_nr = if include_nr {
        Some(nonrelativistic_times(energy - system.mass(), system)?.tau_p)
    } else {
        None
    };
    let opaque = if include_opaque {
        let o = opaque_limit_times(energy, system)?;
        Some((o.tau_p, o.tau_d))
    } else {
        None
    };
    Ok(SweepRow {
        swept,
        tau_p: times.tau_p,
        tau_d: times.tau_d,
        tau_i: times.tau_i,
        t_free: times.t_free,
        t_light: times.t_light,
        t2: s.mag_t2,
        phi_t: s.phi_t,
        tau_p_nr,
        opaque,
    })
}

/// Continues `phi_t` along the rows; the first row stays on the principal branch.
pub fn unwrap_phases(rows: &mut [SweepRow]) {
    let mut branch = PhaseBranch::new();
    for row in rows {
        row.phi_t = branch.follow(row.phi_t);
    }
}

/// Validates and evaluates a sweep sequentially.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepDataset> {
    spec.validate()?;
    let mut rows = (0..spec.points).map(|i| evaluate_row(spec, i)).collect::<Result<Vec<_>>>()?;
    unwrap_phases(&mut rows);
    Ok(SweepDataset { spec: *spec, rows })
}

/// The five canonical figure datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Width sweep at `E = 1.8`, `V0 = 1.5`.
    Fig2A,
    /// Width sweep at `E = 1.46`, `V0 = 2.19`.
    Fig2B,
    /// Width sweep at `E = 1.01`, `V0 = 0.018`, close to the Schrödinger limit.
    Fig2C,
    /// Separation sweep at `a = 0.7`.
    Fig3A,
    /// Separation sweep at `a = 3.0`.
    Fig3B,
}

/// Grid size of every canonical figure.
pub const FIGURE_POINTS: usize = 600;

impl Figure {
    /// All figures in order.
    pub const ALL: [Figure; 5] = [Figure::Fig2A, Figure::Fig2B, Figure::Fig2C, Figure::Fig3A, Figure::Fig3B];

    /// Identifier such as `2A`.
    pub fn id(&self) -> &'static str {
        match self {
            Figure::Fig2A => "2A",
            Figure::Fig2B => "2B",
            Figure::Fig2C => "2C",
            Figure::Fig3A => "3A",
            Figure::Fig3B => "3B",
        }
    }

    /// Canonical sweep.
    pub fn spec(&self) -> SweepSpec {
        let width_sweep = |energy: f64, v0: f64| SweepSpec {
            axis: SweepAxis::Width,
            lo: 0.01,
            hi: 6.0,
            points: FIGURE_POINTS,
            energy,
            system: BarrierSystem::new(v0, 0.01, 0.7).expect("valid figure system"),
            include_nr: true,
            include_opaque: true,
        };
        let separation_sweep = |a: f64| SweepSpec {
            axis: SweepAxis::Separation,
            lo: 0.01,
            hi: 10.0,
            points: FIGURE_POINTS,
            energy: 1.8,
            system: BarrierSystem::new(1.5, a, 0.01).expect("valid figure system"),
            include_nr: false,
            include_opaque: true,
        };
        match self {
            Figure::Fig2A => width_sweep(1.8, 1.5),
            Figure::Fig2B => width_sweep(1.46, 2.19),
            Figure::Fig2C => width_sweep(1.01, 0.018),
            Figure::Fig3A => separation_sweep(0.7),
            Figure::Fig3B => separation_sweep(3.0),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim_start_matches("fig").trim_start_matches("Fig");
        Figure::ALL
            .iter()
            .copied()
            .find(|f| f.id().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidSweep("unknown figure, expected one of 2A 2B 2C 3A 3B"))
    }
}

/// Dataset of a canonical figure.
pub fn figure_dataset(figure: Figure) -> Result<SweepDataset> {
    run_sweep(&figure.spec())
}

/// A refined minimum of `|R|²` in the separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    /// Separation at the minimum.
    pub l: f64,
    /// `|R|` there.
    pub r_abs: f64,
    /// Phase time there.
    pub tau_p: f64,
    /// Dwell time there.
    pub tau_d: f64,
}

/// Scan points used by [`find_resonances`].
pub const RESONANCE_SCAN_POINTS: usize = 4000;

/// Strict local minima of `|R|²` over `l ∈ [lo, hi]`, refined to `1e-10` in `l`.
///
/// With `a = 0` the reflection vanishes identically and no strict minimum
/// exists, so the list is empty.
pub fn find_resonances(system: &BarrierSystem, energy: f64, l_range: (f64, f64)) -> Result<Vec<Resonance>> {
    let (lo, hi) = l_range;
    if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidSweep("separation range needs 0 ≤ lo < hi"));
    }
    let r2 = |l: f64| -> Result<f64> {
        Ok(scatter(energy, &system.with_separation(l)?)?.mag_r2)
    };
    let n = RESONANCE_SCAN_POINTS;
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let values = grid.iter().map(|&l| r2(l)).collect::<Result<Vec<_>>>()?;

    let mut out = Vec::new();
    for i in 1..n - 1 {
        if values[i] < values[i - 1] && values[i] < values[i + 1] {
            let (l, _) = golden_section(|l| r2(l).unwrap_or(f64::INFINITY), grid[i - 1], grid[i + 1], 1e-10);
            let sys = system.with_separation(l)?;
            let t = time_report(energy, &sys)?;
            out.push(Resonance { l, r_abs: r2(l)?.sqrt(), tau_p: t.tau_p, tau_d: t.tau_d });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dwell_integral;

    fn local_maxima(rows: &[SweepRow]) -> usize {
        rows.windows(3).filter(|w| w[1].tau_p > w[0].tau_p && w[1].tau_p > w[2].tau_p).count()
    }

    #[test]
    fn two_point_sweep() {
        let spec = SweepSpec { points: 2, ..Figure::Fig3A.spec() };
        let d = run_sweep(&spec).unwrap();
        assert_eq!(d.rows.len(), 2);
        assert_eq!(d.rows[0].swept, 0.01);
        assert_eq!(d.rows[1].swept, 10.0);
        let principal = scatter(1.8, &spec.system.with_separation(0.01).unwrap()).unwrap().phi_t;
        assert_eq!(d.rows[0].phi_t, principal);
    }

    #[test]
    fn rejects_bad_specs() {
        let base = Figure::Fig2A.spec();
        assert!(run_sweep(&SweepSpec { points: 1, ..base }).is_err());
        assert!(run_sweep(&SweepSpec { lo: 2.0, hi: 1.0, ..base }).is_err());
        let energy_sweep = SweepSpec { axis: SweepAxis::Energy, lo: 1.5, hi: 3.0, points: 11, include_nr: false, ..base };
        match run_sweep(&energy_sweep) {
            Err(Error::SweepPoint { index, value, regime }) => {
                // V0 <= E - m first happens at E = 2.55
                assert_eq!(regime, Regime::AboveBarrier);
                assert_eq!(index, 7);
                assert!((value - 2.55).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rows_satisfy_winful_by_construction() {
        let d = figure_dataset(Figure::Fig2B).unwrap();
        assert_eq!(d.rows.len(), FIGURE_POINTS);
        for r in &d.rows {
            assert!((r.tau_d - (r.tau_p - r.tau_i)).abs() <= 1e-12 * r.tau_p.abs());
        }
    }

    #[test]
    fn spot_rows_match_quadrature() {
        let spec = Figure::Fig3A.spec();
        let d = run_sweep(&spec).unwrap();
        for i in (0..spec.points).step_by(150) {
            let (e, s) = spec.point(i).unwrap();
            let q = dwell_integral(e, &s).unwrap().value;
            assert!((q / d.rows[i].tau_d - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn width_sweep_saturates() {
        let d = figure_dataset(Figure::Fig2A).unwrap();
        let last = d.rows.last().unwrap();
        let (tp, td) = last.opaque.unwrap();
        assert!((tp - 1.47087).abs() < 1e-5);
        assert!((td - 1.04596).abs() < 1e-5);
        // the approach is exponential in qa; at a = 6 it is close to, not below, 1e-4
        assert!((last.tau_p / tp - 1.0).abs() < 2e-4);
        assert!((last.tau_d / td - 1.0).abs() < 2e-4);
        let wider = time_report(1.8, &d.spec.system.with_width(7.0).unwrap()).unwrap();
        assert!((wider.tau_p / tp - 1.0).abs() < 1e-4);
        assert!((wider.tau_d / td - 1.0).abs() < 1e-4);
    }

    #[test]
    fn separation_sweep_shows_resonances_and_growth() {
        let d = figure_dataset(Figure::Fig3A).unwrap();
        assert!(local_maxima(&d.rows) >= 2);
        // least-squares slope of off-resonance rows for l in [2, 10]
        let pts: Vec<(f64, f64)> =
            d.rows.iter().filter(|r| r.swept >= 2.0 && r.t2 < 0.5).map(|r| (r.swept, r.tau_p)).collect();
        assert!(pts.len() > 50);
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        assert!(sxy > 0.0);
    }

    #[test]
    fn thick_barriers_keep_peaks_near_saturation() {
        let d = figure_dataset(Figure::Fig3B).unwrap();
        let (tp, _) = d.rows[0].opaque.unwrap();
        let mut values: Vec<f64> = d.rows.iter().map(|r| r.tau_p).collect();
        values.sort_by(f64::total_cmp);
        // lower quartile: the off-resonance floor between peaks
        let baseline = values[values.len() / 4];
        assert!((baseline / tp - 1.0).abs() < 0.05);
        assert!(values[values.len() - 1] > 2.0 * baseline);
    }

    #[test]
    fn schrodinger_limit_figure() {
        let d = figure_dataset(Figure::Fig2C).unwrap();
        for r in &d.rows {
            assert!((r.tau_p / r.tau_p_nr.unwrap() - 1.0).abs() < 0.01, "a = {}", r.swept);
        }
    }

    #[test]
    fn superluminal_before_saturation() {
        for fig in [Figure::Fig2A, Figure::Fig2B] {
            let d = figure_dataset(fig).unwrap();
            assert!(d.rows.iter().any(|r| {
                let (tp, _) = r.opaque.unwrap();
                r.tau_p < r.t_light && r.t2 > 1e-12 && (r.tau_p / tp - 1.0).abs() > 0.01
            }));
        }
    }

    #[test]
    fn deterministic() {
        let spec = Figure::Fig3B.spec();
        assert_eq!(run_sweep(&spec).unwrap(), run_sweep(&spec).unwrap());
    }

    #[test]
    fn phase_is_continuous_along_sweep() {
        let d = figure_dataset(Figure::Fig3A).unwrap();
        for w in d.rows.windows(2) {
            assert!((w[1].phi_t - w[0].phi_t).abs() < core::f64::consts::FRAC_PI_2);
        }
    }

    #[test]
    fn resonances_equalize_times() {
        let sys = BarrierSystem::new(1.5, 0.7, 0.7).unwrap();
        let res = find_resonances(&sys, 1.8, (0.01, 10.0)).unwrap();
        assert!(res.len() >= 2);
        for r in &res {
            assert!(r.r_abs < 1e-6);
            assert!((r.tau_p - r.tau_d).abs() < 1e-6 * r.tau_p);
        }
    }

    #[test]
    fn no_resonances_without_barriers() {
        let sys = BarrierSystem::new(1.5, 0.0, 0.7).unwrap();
        assert!(find_resonances(&sys, 1.8, (0.01, 10.0)).unwrap().is_empty());
    }

    #[test]
    fn opaque_barriers_flatten_peaks() {
        let a = 25.0 / 0.91f64.sqrt();
        let spec = SweepSpec { system: BarrierSystem::new(1.5, a, 0.01).unwrap(), ..Figure::Fig3A.spec() };
        let d = run_sweep(&spec).unwrap();
        let (tp, _) = d.rows[0].opaque.unwrap();
        let max = d.rows.iter().map(|r| r.tau_p).fold(f64::MIN, f64::max);
        assert!((max - tp) / tp < 0.01);
    }

    #[test]
    fn figure_ids_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.id().parse::<Figure>().unwrap(), f);
        }
        assert!("4A".parse::<Figure>().is_err());
    }
}
