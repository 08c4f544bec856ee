use std::path::Path;
use std::process::{Command, Output};

use dirac_tunneling_cli::csv::Table;

fn dtunnel(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtunnel")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn point_prints_header_and_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtunnel(&["point", "--E", "1.8", "--V0", "1.5", "--a", "0.7", "--l", "0.7"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = Table::parse(&stdout(&o)).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.column("swept").unwrap()[0], 1.8);
    let r = &table.rows[0];
    // tau_d = tau_p - tau_i to printed precision
    assert!((r[2] - (r[1] - r[3])).abs() < 1e-10);
}

#[test]
fn supercritical_point_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtunnel(&["point", "--E", "1.8", "--V0", "3.0", "--a", "0.7", "--l", "0.7"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Supercritical regime: V0 ≥ E + m"));
    assert!(o.stdout.is_empty());
}

#[test]
fn figure_2c_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtunnel(&["figure", "2C", "--out", "fig2c.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = Table::read(&dir.path().join("fig2c.csv")).unwrap();
    assert_eq!(t.rows.len(), 600);
    let rel = t.column("tau_p").unwrap();
    let nr = t.column("tau_p_nr").unwrap();
    assert!(rel.iter().zip(&nr).all(|(r, n)| (r / n - 1.0).abs() < 0.01));
}

#[test]
fn figure_2a_last_row_near_saturation() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtunnel(&["figure", "2A", "--out", "fig2a.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let t = Table::read(&dir.path().join("fig2a.csv")).unwrap();
    let tau_p = *t.column("tau_p").unwrap().last().unwrap();
    let opaque = t.column("tau_p_opaque").unwrap()[0];
    assert!((opaque - 1.47087).abs() < 1e-5);
    // at a = 6 the remaining exponential tail is 1.1e-4
    assert!((tau_p / opaque - 1.0).abs() < 2e-4);
}

#[test]
fn plot_script_next_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtunnel(&["figure", "3A", "--format", "plot-script", "--out", "fig3a.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let script = std::fs::read_to_string(dir.path().join("fig3a.gp")).unwrap();
    assert!(script.contains("set xlabel 'separation l'"));
    assert!(script.contains("'fig3a.csv' using 'swept':'tau_p'"));
    assert_eq!(script.matches("dt 2").count(), 2);
}

#[test]
fn sweep_matches_figure_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = dtunnel(&["figure", "3B"], dir.path());
    let b = dtunnel(
        &["sweep", "--axis", "l", "--lo", "0.01", "--hi", "10", "--points", "600", "--E", "1.8", "--V0", "1.5", "--a", "3.0", "--opaque"],
        dir.path(),
    );
    assert_eq!(b.status.code(), Some(0), "{}", stderr(&b));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "# width sweep\naxis=a\nlo=0.5\nhi=1.5\npoints=3\nE=1.8\nV0=1.5\nl=0.7\n").unwrap();
    let o = dtunnel(&["sweep", "--config", "run.cfg", "--points", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = Table::parse(&stdout(&o)).unwrap();
    assert_eq!(t.column("swept").unwrap(), vec![0.5, 0.75, 1.0, 1.25, 1.5]);
}

#[test]
fn unknown_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "E=1.8\nV0=1.5\na=0.7\nl=0.7\nwidth=3\n").unwrap();
    let o = dtunnel(&["point", "--config", "bad.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key 'width'"));
}

#[test]
fn io_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtunnel(&["point", "--config", "missing.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = dtunnel(&["figure", "2A", "--out", "no/such/dir/x.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn resonances_listing() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtunnel(&["resonances", "--E", "1.8", "--V0", "1.5", "--a", "0.7", "--lo", "0.01", "--hi", "10"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = Table::parse(&stdout(&o)).unwrap();
    assert_eq!(t.columns, ["l", "r_abs", "tau_p", "tau_d"]);
    assert!(t.rows.len() >= 2);
    for r in &t.rows {
        assert!((r[2] - r[3]).abs() < 1e-6 * r[2]);
    }
}

#[test]
fn verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtunnel(&["verify"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(!text.contains("FAIL"));
}

#[test]
fn help_and_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(dtunnel(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(dtunnel(&["point", "--bogus", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(dtunnel(&["figure", "9Z"], dir.path()).status.code(), Some(2));
}
