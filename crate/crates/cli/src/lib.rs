//! Command-line driver for `dirac-tunneling`: configuration, CSV files,
//! gnuplot scripts and the oracle cross-check.

pub mod config;
pub mod csv;
pub mod error;
pub mod plot;
pub mod sweep;
pub mod verify;

use std::io::Write;
use std::path::Path;

use dirac_tunneling::scenarios::evaluate_point;
use dirac_tunneling::{find_resonances, SweepRow};

use crate::config::{Command, Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::plot::PlotLayout;

fn write_to(out: &Option<std::path::PathBuf>, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn emit_rows(config: &RunConfig, rows: &[SweepRow], layout: PlotLayout, stdout: &mut dyn Write) -> CliResult<()> {
    write_to(&config.out, stdout, &csv::to_string(rows)?)?;
    if config.format == Format::PlotScript {
        let csv_path = config.out.as_deref().expect("validated: plot-script has --out");
        plot::emit_plot_script(csv_path, &layout, &plot::script_path_for(csv_path))?;
    }
    Ok(())
}

/// Executes a validated configuration, writing tabular output to `stdout`
/// unless an output file was given.
pub fn execute(config: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match &config.command {
        Command::Point { energy, system, include_nr, include_opaque } => {
            let row = evaluate_point(*energy, *energy, system, *include_nr, *include_opaque)?;
            write_to(&config.out, stdout, &csv::to_string(&[row])?)
        }
        Command::Sweep(spec) => {
            let data = sweep::run_sweep_parallel(spec)?;
            emit_rows(config, &data.rows, PlotLayout::for_axis(spec.axis), stdout)
        }
        Command::Figure(figure) => {
            let data = sweep::run_sweep_parallel(&figure.spec())?;
            emit_rows(config, &data.rows, PlotLayout::for_figure(*figure), stdout)
        }
        Command::Resonances { energy, system, range } => {
            let found = find_resonances(system, *energy, *range)?;
            let mut text = String::from("l,r_abs,tau_p,tau_d\n");
            for r in found {
                let vals = [r.l, r.r_abs, r.tau_p, r.tau_d].map(csv::format_value);
                text += &vals.join(",");
                text.push('\n');
            }
            write_to(&config.out, stdout, &text)
        }
        Command::Verify { points, seed } => {
            let report = verify::run_verification(*points, *seed)?;
            write_to(&None, stdout, &report.render())?;
            if report.passed() {
                Ok(())
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
                Err(CliError::Verification(failed.join(", ")))
            }
        }
    }
}

/// Parses `args` and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = config::parse_config(args)?;
    execute(&config, stdout)
}

/// Reads a CSV written by this crate.
pub fn read_csv(path: &Path) -> CliResult<csv::Table> {
    csv::Table::read(path)
}
