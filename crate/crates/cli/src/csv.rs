//! CSV output of sweep datasets.
//!
//! Header `swept,tau_p,tau_d,tau_i,t_free,t_light,T2[,tau_p_nr][,tau_p_opaque,tau_d_opaque]`,
//! values in scientific notation with 12 significant digits, LF line endings.

use std::io::Write;
use std::path::Path;

use dirac_tunneling::SweepRow;

use crate::error::{CliError, CliResult};

pub const BASE_COLUMNS: [&str; 7] = ["swept", "tau_p", "tau_d", "tau_i", "t_free", "t_light", "T2"];

pub fn columns(has_nr: bool, has_opaque: bool) -> Vec<&'static str> {
    let mut cols = BASE_COLUMNS.to_vec();
    if has_nr {
        cols.push("tau_p_nr");
    }
    if has_opaque {
        cols.extend(["tau_p_opaque", "tau_d_opaque"]);
    }
    cols
}

pub fn row_values(row: &SweepRow) -> Vec<f64> {
    let mut v = vec![row.swept, row.tau_p, row.tau_d, row.tau_i, row.t_free, row.t_light, row.t2];
    v.extend(row.tau_p_nr);
    if let Some((tp, td)) = row.opaque {
        v.extend([tp, td]);
    }
    v
}

pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

fn writer<W: Write>(out: W) -> ::csv::Writer<W> {
    ::csv::WriterBuilder::new().terminator(::csv::Terminator::Any(b'\n')).from_writer(out)
}

/// Header plus one line per row. The optional columns follow the first row.
pub fn write_rows<W: Write>(out: W, rows: &[SweepRow]) -> CliResult<()> {
    let first = rows.first().ok_or_else(|| CliError::Format("refusing to write an empty dataset".into()))?;
    let mut w = writer(out);
    let fail = |e: ::csv::Error| CliError::Format(format!("csv output: {e}"));
    w.write_record(columns(first.tau_p_nr.is_some(), first.opaque.is_some())).map_err(fail)?;
    for row in rows {
        w.write_record(row_values(row).into_iter().map(format_value)).map_err(fail)?;
    }
    w.flush().map_err(|e| CliError::Format(format!("csv output: {e}")))?;
    Ok(())
}

pub fn to_string(rows: &[SweepRow]) -> CliResult<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("ASCII output"))
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> CliResult<()> {
    let text = to_string(rows)?;
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Numeric table read back from a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut reader = ::csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let bad = |e: ::csv::Error| CliError::Format(format!("csv input: {e}"));
        let columns = reader.headers().map_err(bad)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(bad)?;
            let row = record
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| CliError::Format(format!("csv input: not a number: '{f}'"))))
                .collect::<CliResult<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }
}
