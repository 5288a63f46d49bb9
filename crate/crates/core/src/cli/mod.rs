//! Experiment runner behind the `dualcirc` binary.
//!
//! Every subcommand prints (or writes with `--out`) one JSON document carrying
//! `schema_version`, `experiment`, `params` and the results. With `--assert`
//! a failed numerical check exits with status 1; usage and input errors exit
//! with status 2 and leave no output file behind.

mod commands;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::gates::{named_gate, read_gate, Gate};
use crate::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const GATE_NAMES: [&str; 5] = ["identity", "swap", "cz", "fourier", "kicked-ising"];

#[derive(Debug, Parser)]
#[command(name = "dualcirc", version, about = "Entanglement growth and dual unitarity experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Exit with status 1 if any numerical check fails.
    #[arg(long = "assert", global = true)]
    pub assert: bool,

    /// Override the experiment's main tolerance.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Also report entropies in bits (display only; checks run in nats).
    #[arg(long, global = true)]
    pub bits: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relay of an exact zigzag through a brickwork circuit.
    Zigzag(commands::ZigzagArgs),
    /// Separating product states of the self-dual kicked Ising chain.
    KickedIsing(commands::KickedIsingArgs),
    /// Cut entropies and replica purities of a solvable MPS.
    Mps(commands::MpsArgs),
    /// Mean fidelity of the Choi output state with the maximally mixed state.
    HaarFidelity(commands::HaarFidelityArgs),
    /// Haar moments of the Choi output state against Catalan numbers.
    Catalan(commands::CatalanArgs),
    /// Mean fidelity of a Haar two-qudit marginal with the maximally mixed state.
    StateFidelity(commands::StateFidelityArgs),
    /// Dual-unitarity defects and the four-party audit on two Bell pairs.
    AuditGate(commands::AuditArgs),
    /// Nearest dual-unitary gate.
    ProjectDual(commands::ProjectArgs),
    /// Entanglement deficit against dual-unitarity defect along a perturbation.
    ScanEpsDelta(commands::ScanArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Zigzag(_) => "zigzag",
            Command::KickedIsing(_) => "kicked-ising",
            Command::Mps(_) => "mps",
            Command::HaarFidelity(_) => "haar-fidelity",
            Command::Catalan(_) => "catalan",
            Command::StateFidelity(_) => "state-fidelity",
            Command::AuditGate(_) => "audit-gate",
            Command::ProjectDual(_) => "project-dual",
            Command::ScanEpsDelta(_) => "scan-eps-delta",
        }
    }

    fn supports_csv(&self) -> bool {
        match self {
            Command::Zigzag(_) | Command::KickedIsing(_) | Command::ScanEpsDelta(_) => true,
            Command::HaarFidelity(_) | Command::StateFidelity(_) | Command::Catalan(_) => true,
            Command::Mps(_) | Command::AuditGate(_) | Command::ProjectDual(_) => false,
        }
    }
}

/// Gate selection shared by several subcommands.
#[derive(Debug, Clone, Args, Serialize)]
pub struct GateArgs {
    /// A gate name (identity, swap, cz, fourier, kicked-ising) or a gate file.
    #[arg(long, default_value = "swap")]
    pub gate: String,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Kicked-Ising coupling.
    #[arg(long = "J")]
    #[serde(rename = "J")]
    pub j: Option<f64>,
    /// Kicked-Ising transverse kick.
    #[arg(long)]
    pub b: Option<f64>,
    /// Kicked-Ising longitudinal field.
    #[arg(long)]
    pub h: Option<f64>,
}

impl GateArgs {
    pub fn load(&self) -> Result<Gate> {
        let kicked = if self.j.is_some() || self.b.is_some() || self.h.is_some() {
            let quarter = std::f64::consts::FRAC_PI_4;
            Some((self.j.unwrap_or(quarter), self.b.unwrap_or(quarter), self.h.unwrap_or(0.0)))
        } else {
            None
        };
        load_gate(&self.gate, self.q, kicked)
    }
}

/// A named gate, or a gate file when `source` is not one of the names.
pub fn load_gate(source: &str, q: usize, kicked: Option<(f64, f64, f64)>) -> Result<Gate> {
    if GATE_NAMES.contains(&source) {
        return named_gate(source, q, kicked);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(Error::InvalidParameter(format!(
            "--gate '{source}' is neither a known name ({}) nor an existing file",
            GATE_NAMES.join(", ")
        )));
    }
    read_gate(path)
}

/// Result of one subcommand before formatting.
pub struct Outcome {
    pub json: serde_json::Value,
    pub csv: Option<String>,
    pub pass: bool,
}

/// Common JSON header: schema version, experiment name, parameters and seed.
fn envelope<P: Serialize>(experiment: &str, params: &P, seed: Option<u64>) -> Result<serde_json::Map<String, serde_json::Value>> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    m.insert("experiment".into(), experiment.into());
    m.insert("params".into(), serde_json::to_value(params)?);
    m.insert("seed".into(), seed.map_or(serde_json::Value::Null, Into::into));
    Ok(m)
}

/// Writes `text` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::InvalidParameter(format!("--out {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let res = (|| -> Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    })();
    if res.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    res
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let ctx = commands::Ctx { tolerance: cli.tolerance, bits: cli.bits };
    match &cli.command {
        Command::Zigzag(a) => commands::zigzag(a, &ctx),
        Command::KickedIsing(a) => commands::kicked_ising(a, &ctx),
        Command::Mps(a) => commands::mps(a, &ctx),
        Command::HaarFidelity(a) => commands::haar_fidelity(a, &ctx),
        Command::Catalan(a) => commands::catalan_cmd(a, &ctx),
        Command::StateFidelity(a) => commands::state_fidelity(a, &ctx),
        Command::AuditGate(a) => commands::audit_gate(a, &ctx),
        Command::ProjectDual(a) => commands::project_dual(a, &ctx),
        Command::ScanEpsDelta(a) => commands::scan_eps_delta(a, &ctx),
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if cli.format == Format::Csv && !cli.command.supports_csv() {
        eprintln!("error: --format csv is not available for {}", cli.command.name());
        return EXIT_USAGE;
    }
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t > 0.0) {
            eprintln!("error: --tolerance must be positive, got {t}");
            return EXIT_USAGE;
        }
    }
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = match cli.format {
        Format::Json => match serde_json::to_string_pretty(&outcome.json) {
            Ok(s) => s + "\n",
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        },
        Format::Csv => outcome.csv.unwrap_or_default(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &text) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    if cli.assert && !outcome.pass {
        eprintln!("assertion failed: {} checks did not pass", cli.command.name());
        return EXIT_ASSERT;
    }
    EXIT_OK
}
