//! gnuplot scripts for sweep CSV files.
//!
//! The script plots the time columns against the swept parameter and writes
//! a PNG next to the CSV. Saturated times become dashed horizontal lines, or
//! dashed curves when they vary along the sweep (energy sweeps).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use dirac_tunneling::{Figure, SweepAxis};

use crate::csv::{format_value, Table};
use crate::error::{CliError, CliResult};

/// Title and axis labelling of one plot.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotLayout {
    pub title: String,
    pub x_label: String,
    /// Logarithmic time axis, for resonance peaks many times the baseline.
    pub log_y: bool,
}

impl PlotLayout {
    pub fn for_axis(axis: SweepAxis) -> Self {
        let x_label = match axis {
            SweepAxis::Width => "barrier width a",
            SweepAxis::Separation => "separation l",
            SweepAxis::Energy => "energy E",
        };
        Self { title: format!("sweep of {}", axis.name()), x_label: x_label.into(), log_y: false }
    }

    pub fn for_figure(figure: Figure) -> Self {
        let spec = figure.spec();
        let sys = spec.system;
        let (title, log_y) = match spec.axis {
            SweepAxis::Width => (format!("E = {}, V0 = {}, l = {}", spec.energy, sys.v0(), sys.separation()), false),
            _ => (format!("E = {}, V0 = {}, a = {}", spec.energy, sys.v0(), sys.width()), true),
        };
        Self { title: format!("{figure}: {title}"), log_y, ..Self::for_axis(spec.axis) }
    }
}

fn quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

/// Script text for a CSV whose columns are given by `table`.
pub fn plot_script(csv_name: &str, table: &Table, layout: &PlotLayout) -> String {
    let has = |c: &str| table.columns.iter().any(|x| x == c);
    let png = Path::new(csv_name).with_extension("png");
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script for {csv_name}");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set output {}", quote(&png.to_string_lossy()));
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set title {}", quote(&layout.title));
    let _ = writeln!(s, "set xlabel {}", quote(&layout.x_label));
    let _ = writeln!(s, "set ylabel 'time (units of 1/m)'");
    let _ = writeln!(s, "set key top left");
    if layout.log_y {
        let _ = writeln!(s, "set logscale y");
    }
    // constant along a and l sweeps, energy dependent otherwise
    let opaque = match (table.column("tau_p_opaque"), table.column("tau_d_opaque")) {
        (Some(tp), Some(td)) if !tp.is_empty() => Some((tp, td)),
        _ => None,
    };
    let constant = |v: &[f64]| v.iter().all(|x| *x == v[0]);
    let flat = opaque.as_ref().map(|(tp, td)| constant(tp) && constant(td));
    if let (Some((tp, td)), Some(true)) = (&opaque, flat) {
        let (tp, td) = (tp[0], td[0]);
        let _ = writeln!(s, "tau_p_opaque = {}", format_value(tp));
        let _ = writeln!(s, "tau_d_opaque = {}", format_value(td));
    }

    let file = quote(csv_name);
    let mut curves = vec![
        format!("{file} using 'swept':'tau_p' with lines lw 2 title 'phase time'"),
        "'' using 'swept':'tau_d' with lines lw 2 title 'dwell time'".to_string(),
    ];
    if has("tau_p_nr") {
        curves.push("'' using 'swept':'tau_p_nr' with lines dt 3 title 'phase time, Schrödinger'".into());
    }
    curves.push("'' using 'swept':'t_free' with lines lc 'gray' title 'free traversal'".into());
    curves.push("'' using 'swept':'t_light' with lines lc 'black' title 'light traversal'".into());
    match flat {
        Some(true) => {
            curves.push("tau_p_opaque with lines dt 2 lc 'black' title 'saturated phase time'".into());
            curves.push("tau_d_opaque with lines dt 2 lc 'gray' title 'saturated dwell time'".into());
        }
        Some(false) => {
            curves.push("'' using 'swept':'tau_p_opaque' with lines dt 2 lc 'black' title 'saturated phase time'".into());
            curves.push("'' using 'swept':'tau_d_opaque' with lines dt 2 lc 'gray' title 'saturated dwell time'".into());
        }
        None => {}
    }
    let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    s
}

/// Writes the script for an existing CSV file; the script refers to the CSV by file name.
pub fn emit_plot_script(csv_path: &Path, layout: &PlotLayout, script_path: &Path) -> CliResult<()> {
    let table = Table::read(csv_path)?;
    let name = csv_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    std::fs::write(script_path, plot_script(&name, &table, layout)).map_err(|e| CliError::io(script_path, e))
}

/// `fig.csv` → `fig.gp`.
pub fn script_path_for(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("gp")
}

#[cfg(test)]
mod tests {
    use super::*;
    use dirac_tunneling::{run_sweep, SweepSpec};

    fn table_for(figure: Figure) -> Table {
        let rows = run_sweep(&SweepSpec { points: 3, ..figure.spec() }).unwrap().rows;
        Table::parse(&crate::csv::to_string(&rows).unwrap()).unwrap()
    }

    #[test]
    fn width_figure_script() {
        let s = plot_script("fig2a.csv", &table_for(Figure::Fig2A), &PlotLayout::for_figure(Figure::Fig2A));
        for col in ["'tau_p'", "'tau_d'", "'tau_p_nr'", "'t_free'", "'t_light'"] {
            assert!(s.contains(col), "{col}");
        }
        assert_eq!(s.matches("dt 2").count(), 2);
        assert!(s.contains("tau_p_opaque = 1.47087101354e0"));
        assert!(s.contains("set xlabel 'barrier width a'"));
        assert!(s.contains("set output 'fig2a.png'"));
    }

    #[test]
    fn separation_figure_label() {
        let s = plot_script("fig3a.csv", &table_for(Figure::Fig3A), &PlotLayout::for_figure(Figure::Fig3A));
        assert!(s.contains("set xlabel 'separation l'"));
        assert!(!s.contains("tau_p_nr"));
    }

    #[test]
    fn missing_csv_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let e = emit_plot_script(&dir.path().join("absent.csv"), &PlotLayout::for_axis(SweepAxis::Width), &dir.path().join("x.gp"))
            .unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }
}
