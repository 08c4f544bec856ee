//! Multi-threaded sweeps.
//!
//! Grid points are independent and evaluated with rayon; phase unwrapping,
//! the only order-dependent step, runs afterwards over the sorted grid.

use dirac_tunneling::scenarios::{evaluate_row, unwrap_phases};
use dirac_tunneling::{Result, SweepDataset, SweepSpec};
use rayon::prelude::*;

pub fn run_sweep_parallel(spec: &SweepSpec) -> Result<SweepDataset> {
    spec.validate()?;
    let mut rows = (0..spec.points).into_par_iter().map(|i| evaluate_row(spec, i)).collect::<Result<Vec<_>>>()?;
    unwrap_phases(&mut rows);
    Ok(SweepDataset { spec: *spec, rows })
}
