//! Command-line front end: configuration, dispatch and CSV output.

pub mod config;
pub mod run;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Arg, ArgAction};

pub use config::{parse_config, Command, RunConfig, KEYS};
pub use table::{read_csv, Cell, ResultTable};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] shellconf_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    /// 1 for configuration problems, 2 for numerical or output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(e) if is_input_error(e) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
        }
    }
}

fn is_input_error(e: &shellconf_core::Error) -> bool {
    use shellconf_core::Error as E;
    matches!(e, E::Geometry(_) | E::GridSpec(_) | E::Invalid(_) | E::TooManyStates { .. })
}

/// Argument parser; every configuration key is also a `--key=value` flag.
pub fn cli() -> clap::Command {
    let mut cmd = clap::Command::new("shellconf")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Hydrogen-like atoms in spherical cavities and shells")
        .arg(
            Arg::new("command")
                .required(true)
                .value_parser(Command::ALL.map(|c| c.name()))
                .help("what to compute"),
        )
        .arg(Arg::new("config").long("config").value_name("FILE").value_parser(clap::value_parser!(PathBuf)).help("key=value configuration file"))
        .arg(Arg::new("out").long("out").value_name("PATH").value_parser(clap::value_parser!(PathBuf)).help("write CSV here instead of stdout"))
        .arg(Arg::new("reproducible").long("reproducible").action(ArgAction::SetTrue).help("omit the timestamp from the provenance trailer"));
    for (key, default, help) in KEYS {
        cmd = cmd.arg(
            Arg::new(*key)
                .long(*key)
                .require_equals(true)
                .value_name("VALUE")
                .help(format!("{help} [default: {}]", if default.is_empty() { "none" } else { default })),
        );
    }
    cmd
}

/// Parsed command line.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub config: RunConfig,
    pub out: Option<PathBuf>,
    pub reproducible: bool,
}

pub fn parse_invocation(matches: &clap::ArgMatches) -> Result<Invocation, CliError> {
    let command = Command::parse(matches.get_one::<String>("command").expect("required"))?;
    let overrides: Vec<(String, String)> = KEYS
        .iter()
        .filter_map(|(k, _, _)| matches.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
        .collect();
    let config = parse_config(command, matches.get_one::<PathBuf>("config").map(PathBuf::as_path), &overrides)?;
    Ok(Invocation {
        config,
        out: matches.get_one::<PathBuf>("out").cloned(),
        reproducible: matches.get_flag("reproducible"),
    })
}

/// Runs the command and appends the provenance trailer.
pub fn execute(inv: &Invocation) -> Result<ResultTable, CliError> {
    let mut table = run::run(&inv.config)?;
    let g = &inv.config.grid;
    table.provenance.push(format!("shellconf {} command={}", env!("CARGO_PKG_VERSION"), inv.config.command));
    table.provenance.push(format!("model={}", inv.config.model));
    table.provenance.push(format!("grid n_points={} map_scale={} truncation={}", g.n_points, g.map_scale, g.r_max_truncation));
    for (k, v) in &inv.config.echo {
        table.provenance.push(format!("{k}={v}"));
    }
    if !inv.reproducible {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        table.provenance.push(format!("generated_unix={secs}"));
    }
    Ok(table)
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = parse_invocation(&matches).and_then(|inv| {
        let table = execute(&inv)?;
        match &inv.out {
            Some(path) => table.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?)),
            None => table.write_csv(std::io::stdout().lock()),
        }
    });
    match result {
        Ok(()) => 0,
        // a closed downstream pipe (e.g. `| head`) is not a failure
        Err(CliError::Io(msg)) if msg.contains("Broken pipe") => 0,
        Err(e) => {
            eprintln!("shellconf: {e}");
            e.exit_code()
        }
    }
}
