//! Closed forms against the numerical oracle on random points.

use dirac_tunneling::oracle::{dwell_integral, flux_profile, numeric_phase_time, sample_positions, tm_solve};
use dirac_tunneling::{
    phase_time_closed, region_coefficients, scatter, time_report, AppendixTerms, BarrierSystem, Complex64,
    KinematicPoint,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliResult;

/// Largest deviation seen for one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub points: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("verify: {} random points, seed {}\n", self.points, self.seed);
        for c in &self.checks {
            out += &format!(
                "{:<34} max deviation {:>9.2e}  tolerance {:>7.0e}  {}\n",
                c.name,
                c.max_deviation,
                c.tolerance,
                if c.passed() { "ok" } else { "FAIL" }
            );
        }
        out
    }
}

/// E ∈ (1, 3), V0 uniform in the evanescent window, a ∈ (0, 30), l ∈ (0, 10).
pub fn random_points(points: usize, seed: u64) -> Vec<(f64, BarrierSystem)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(points);
    while out.len() < points {
        let e = 1.0 + 2.0 * rng.gen_range(f64::EPSILON..1.0);
        let v0 = (e - 1.0) + 2.0 * rng.gen_range(f64::EPSILON..1.0);
        let a = 30.0 * rng.gen_range(f64::EPSILON..1.0);
        let l = 10.0 * rng.gen_range(f64::EPSILON..1.0);
        if let Ok(s) = BarrierSystem::new(v0, a, l) {
            if KinematicPoint::new(e, &s).is_ok() {
                out.push((e, s));
            }
        }
    }
    out
}

fn rel(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / y.norm()
}

pub fn run_verification(points: usize, seed: u64) -> CliResult<VerifyReport> {
    let mut dev = [0.0f64; 6];
    for (e, s) in random_points(points, seed) {
        let p = KinematicPoint::new(e, &s)?;
        let sol = scatter(e, &s)?;
        dev[0] = dev[0].max((sol.mag_t2 + sol.mag_r2 - 1.0).abs());

        let c = region_coefficients(e, &s)?;
        let o = tm_solve(e, &s)?;
        for (x, y) in [(c.t, o.t), (c.r, o.r), (c.c, o.c), (c.d, o.d)] {
            dev[1] = dev[1].max(rel(x, y));
        }

        let closed = phase_time_closed(e, &s)?;
        dev[2] = dev[2].max((closed / numeric_phase_time(e, &s)? - 1.0).abs());

        let report = time_report(e, &s)?;
        dev[3] = dev[3].max((dwell_integral(e, &s)?.value / report.tau_d - 1.0).abs());

        let terms = AppendixTerms::new(&p, &s);
        dev[4] = dev[4].max((terms.interference_delay(&p) - report.tau_i).abs() * p.k * p.k / p.mass);

        let j_inc = p.incident_flux();
        let j: Vec<f64> = flux_profile(e, &s, &sample_positions(&s, 20))?.iter().map(|f| f.j).collect();
        let mean = j.iter().sum::<f64>() / j.len() as f64;
        let sd = (j.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / j.len() as f64).sqrt();
        dev[5] = dev[5].max(sd / j_inc);
    }
    let names = [
        ("unitarity |T|²+|R|²-1", 1e-12),
        ("amplitudes vs linear solve (rel)", 1e-10),
        ("phase time vs finite difference", 1e-6),
        ("dwell time vs density integral", 1e-6),
        ("interference delay, two forms", 1e-8),
        ("flux spread / incident flux", 1e-10),
    ];
    let checks = names
        .iter()
        .zip(dev)
        .map(|(&(name, tolerance), max_deviation)| Check { name, max_deviation, tolerance })
        .collect();
    Ok(VerifyReport { points, seed, checks })
}
