use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vcdsim::config::{RawConfig, ScenarioConfig};
use vcdsim::error::{Error, Result};
use vcdsim::io::{self as files, SummaryDoc};
use vcdsim::report::Report;
use vcdsim::scenario;

#[derive(Parser)]
#[command(name = "vcdsim", version, about = "Vehicular collision-detection simulator over an SDN backhaul")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Flat key = value config file.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. --set seed=4. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic trace CSV.
    Synth {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Choose RSU sites greedily and write the RSU CSV.
    PlaceRsus {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run one simulation; writes records.csv, summary.json, topology.json.
    Run {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output directory; overrides the `output` key.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Refine detector placement; writes refine_log.csv, best_placement.txt.
    Refine {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Aggregate summary.json files into one CSV table.
    Report {
        #[arg(required = true)]
        summaries: Vec<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn load(args: &ConfigArgs) -> Result<ScenarioConfig> {
    let mut raw = match &args.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    for o in &args.overrides {
        raw.set(o)?;
    }
    ScenarioConfig::from_raw(&raw)
}

fn emit<F>(out: Option<&Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => files::create_with(path, |w| f(w)),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush().map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth { cfg, out } => {
            let cfg = load(&cfg)?;
            let trace = scenario::load_trace(&cfg)?;
            emit(out.as_deref(), |w| files::emit_trace(w, &trace))
        }
        Command::PlaceRsus { cfg, out } => {
            let cfg = load(&cfg)?;
            let trace = scenario::load_trace(&cfg)?;
            let rsus = scenario::load_rsus(&cfg, &trace)?;
            emit(out.as_deref(), |w| files::write_rsus(w, &rsus))
        }
        Command::Run { cfg, out } => {
            let cfg = load(&cfg)?;
            let dir = out.unwrap_or_else(|| cfg.output.clone());
            let written = scenario::run_to_dir(&cfg, &dir)?;
            if let Some(s) = &written.summary {
                println!(
                    "{}: generated {} success {} late {} lost {} uncovered {}",
                    s.meta.placement, s.generated, s.success, s.late, s.lost, s.uncovered
                );
            }
            Ok(())
        }
        Command::Refine { cfg, out } => {
            let cfg = load(&cfg)?;
            let dir = out.unwrap_or_else(|| cfg.output.clone());
            let written = scenario::refine_to_dir(&cfg, &dir)?;
            println!("best placement: {}", written.best.unwrap_or_default());
            Ok(())
        }
        Command::Report { summaries, out } => {
            let mut docs = Vec::with_capacity(summaries.len());
            for path in &summaries {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                let doc = SummaryDoc::from_json(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
                docs.push(doc);
            }
            let report = Report::aggregate(&docs);
            emit(out.as_deref(), |w| report.write_csv(w))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vcdsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
