//! Command-line and config-file parsing.
//!
//! A config file holds one `key=value` per line; `#` starts a comment. Keys
//! are the long flag names (`E`, `V0`, `a`, `l`, `mass`, `axis`, ...). Flags
//! given on the command line win over file entries, and keys the chosen
//! command does not use are rejected.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirac_tunneling::{BarrierSystem, Figure, KinematicPoint, SweepAxis, SweepSpec};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "dtunnel", version, about = "Tunneling times of a Dirac particle through two rectangular barriers")]
pub struct Cli {
    /// key=value file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SystemArgs {
    /// total energy in units of the rest energy
    #[arg(long = "E")]
    pub energy: Option<f64>,
    /// barrier height
    #[arg(long = "V0")]
    pub v0: Option<f64>,
    /// barrier width
    #[arg(long)]
    pub a: Option<f64>,
    /// separation between the barriers
    #[arg(long)]
    pub l: Option<f64>,
    /// particle mass (default 1)
    #[arg(long)]
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ColumnArgs {
    /// add the Schrödinger phase time column
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub nr: Option<bool>,
    /// add the opaque-limit tau_p and tau_d columns
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub opaque: Option<bool>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv, or plot-script for CSV plus a gnuplot script next to it
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Times at one energy, printed as a CSV header and one row
    Point {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        columns: ColumnArgs,
    },
    /// Uniform sweep of a, l or E
    Sweep {
        #[command(flatten)]
        system: SystemArgs,
        /// swept parameter: a, l or E
        #[arg(long)]
        axis: Option<String>,
        /// first grid value
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        /// last grid value
        #[arg(long)]
        hi: Option<f64>,
        /// number of grid points (at least 2)
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        columns: ColumnArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Canonical dataset of a figure: 2A, 2B, 2C, 3A or 3B
    Figure {
        /// figure id (or `figure` key in the config file)
        id: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minima of |R|² in the separation l
    Resonances {
        #[command(flatten)]
        system: SystemArgs,
        /// lower end of the l range
        #[arg(long)]
        lo: Option<f64>,
        /// upper end of the l range
        #[arg(long)]
        hi: Option<f64>,
        /// output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check closed forms against the numerical oracle on random points
    Verify {
        /// number of random points (default 200)
        #[arg(long)]
        points: Option<usize>,
        /// RNG seed (default 2009)
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    PlotScript,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, false)
    }
}

/// Fully validated request.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Point { energy: f64, system: BarrierSystem, include_nr: bool, include_opaque: bool },
    Sweep(SweepSpec),
    Figure(Figure),
    Resonances { energy: f64, system: BarrierSystem, range: (f64, f64) },
    Verify { points: usize, seed: u64 },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Point { .. } => "point",
            Command::Sweep(_) => "sweep",
            Command::Figure(_) => "figure",
            Command::Resonances { .. } => "resonances",
            Command::Verify { .. } => "verify",
        }
    }
}

pub const DEFAULT_VERIFY_POINTS: usize = 200;
pub const DEFAULT_VERIFY_SEED: u64 = 2009;

/// Entries of a config file, with the line each came from.
#[derive(Debug, Default)]
pub struct FileEntries(BTreeMap<String, (String, usize)>);

impl FileEntries {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
            let key = key.trim().to_string();
            if map.insert(key.clone(), (value.trim().to_string(), n + 1)).is_some() {
                return Err(CliError::Usage(format!("config line {}: duplicate key '{key}'", n + 1)));
            }
        }
        Ok(Self(map))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Flag value if given, else the file entry. The file entry is consumed either way.
    fn take<T: FromStr>(&mut self, key: &str, flag: Option<T>) -> CliResult<Option<T>> {
        let entry = self.0.remove(key);
        if flag.is_some() {
            return Ok(flag);
        }
        match entry {
            None => Ok(None),
            Some((value, line)) => value
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config line {line}: invalid value '{value}' for key '{key}'"))),
        }
    }

    fn finish(self, command: &str) -> CliResult<()> {
        match self.0.into_iter().next() {
            None => Ok(()),
            Some((key, (_, line))) => {
                Err(CliError::Usage(format!("config line {line}: unknown key '{key}' for command '{command}'")))
            }
        }
    }
}

fn require<T>(key: &str, value: Option<T>) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing required key '{key}'")))
}

struct SystemValues {
    energy: Option<f64>,
    v0: f64,
    a: Option<f64>,
    l: Option<f64>,
    mass: f64,
}

fn system_values(args: SystemArgs, file: &mut FileEntries) -> CliResult<SystemValues> {
    Ok(SystemValues {
        energy: file.take("E", args.energy)?,
        v0: require("V0", file.take("V0", args.v0)?)?,
        a: file.take("a", args.a)?,
        l: file.take("l", args.l)?,
        mass: file.take("mass", args.mass)?.unwrap_or(1.0),
    })
}

fn columns(args: ColumnArgs, file: &mut FileEntries) -> CliResult<(bool, bool)> {
    Ok((
        file.take("nr", args.nr)?.unwrap_or(false),
        file.take("opaque", args.opaque)?.unwrap_or(false),
    ))
}

fn output(args: OutputArgs, file: &mut FileEntries) -> CliResult<(Option<PathBuf>, Format)> {
    Ok((file.take("out", args.out)?, file.take("format", args.format)?.unwrap_or_default()))
}

/// Parses argv (program name first) and an optional `--config` file.
pub fn parse_config<I, T>(args: I) -> CliResult<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let mut file = match &cli.config {
        Some(path) => FileEntries::read(path)?,
        None => FileEntries::default(),
    };
    let config = build(cli.command, &mut file)?;
    file.finish(config.command.name())?;
    validate(&config)?;
    Ok(config)
}

fn build(args: CommandArgs, file: &mut FileEntries) -> CliResult<RunConfig> {
    let stdout = |command| RunConfig { command, out: None, format: Format::Csv };
    Ok(match args {
        CommandArgs::Point { system, columns: cols } => {
            let v = system_values(system, file)?;
            let (include_nr, include_opaque) = columns(cols, file)?;
            let system = BarrierSystem::with_mass(v.mass, v.v0, require("a", v.a)?, require("l", v.l)?)?;
            stdout(Command::Point { energy: require("E", v.energy)?, system, include_nr, include_opaque })
        }
        CommandArgs::Sweep { system, axis, lo, hi, points, columns: cols, output: out } => {
            let v = system_values(system, file)?;
            let axis: String = require("axis", file.take("axis", axis)?)?;
            let axis: SweepAxis = axis.parse()?;
            let lo = require("lo", file.take("lo", lo)?)?;
            let hi = require("hi", file.take("hi", hi)?)?;
            let points = require("points", file.take("points", points)?)?;
            let (include_nr, include_opaque) = columns(cols, file)?;
            let (out, format) = output(out, file)?;
            // the swept field is overwritten per grid point, so it may be omitted
            let a = if axis == SweepAxis::Width { v.a.unwrap_or(lo) } else { require("a", v.a)? };
            let l = if axis == SweepAxis::Separation { v.l.unwrap_or(lo) } else { require("l", v.l)? };
            let energy = if axis == SweepAxis::Energy { v.energy.unwrap_or(lo) } else { require("E", v.energy)? };
            let system = BarrierSystem::with_mass(v.mass, v.v0, a.max(0.0), l.max(0.0))?;
            let spec = SweepSpec { axis, lo, hi, points, energy, system, include_nr, include_opaque };
            RunConfig { command: Command::Sweep(spec), out, format }
        }
        CommandArgs::Figure { id, output: out } => {
            let id: String = require("figure", file.take("figure", id)?)?;
            let (out, format) = output(out, file)?;
            RunConfig { command: Command::Figure(id.parse()?), out, format }
        }
        CommandArgs::Resonances { system, lo, hi, out } => {
            let v = system_values(system, file)?;
            let lo = require("lo", file.take("lo", lo)?)?;
            let hi = require("hi", file.take("hi", hi)?)?;
            let out = file.take("out", out)?;
            let system = BarrierSystem::with_mass(v.mass, v.v0, require("a", v.a)?, v.l.unwrap_or(lo).max(0.0))?;
            let energy = require("E", v.energy)?;
            RunConfig { command: Command::Resonances { energy, system, range: (lo, hi) }, out, format: Format::Csv }
        }
        CommandArgs::Verify { points, seed } => stdout(Command::Verify {
            points: file.take("points", points)?.unwrap_or(DEFAULT_VERIFY_POINTS),
            seed: file.take("seed", seed)?.unwrap_or(DEFAULT_VERIFY_SEED),
        }),
    })
}

fn validate(config: &RunConfig) -> CliResult<()> {
    if config.format == Format::PlotScript && config.out.is_none() {
        return Err(CliError::Usage("format plot-script needs --out for the CSV file".into()));
    }
    match &config.command {
        Command::Point { energy, system, .. } => {
            KinematicPoint::new(*energy, system)?;
        }
        Command::Sweep(spec) => spec.validate()?,
        Command::Figure(_) => {}
        Command::Resonances { energy, system, range } => {
            KinematicPoint::new(*energy, system)?;
            if !(range.0 >= 0.0 && range.0 < range.1) {
                return Err(CliError::Usage("resonance range needs 0 ≤ lo < hi".into()));
            }
        }
        Command::Verify { points, .. } => {
            if *points == 0 {
                return Err(CliError::Usage("verify needs at least one point".into()));
            }
        }
    }
    Ok(())
}
