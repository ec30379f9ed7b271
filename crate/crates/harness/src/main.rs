use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sotea_harness::netstats::run_netstats;
use sotea_harness::orchestrate::run_experiment;
use sotea_harness::presets::{preset, preset_text, PRESETS};
use sotea_harness::snapshot::run_snapshot;
use sotea_harness::{verify, ExperimentSpec, HarnessError, Result};

/// Panmictic, cellular and self-organizing-topology evolutionary
/// algorithms on NK landscapes.
#[derive(Parser)]
#[command(name = "sotea", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory.
    #[arg(long, global = true, env = "SOTEA_OUT", default_value = "out")]
    out: PathBuf,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Master seed, replacing the one in the spec.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every sweep point and replication; write per-run, aggregate and
    /// summary CSVs plus a manifest.
    Run {
        /// Spec file (TOML, or JSON with a .json extension) or preset name.
        spec: String,
    },
    /// Path length, mean degree and degree distribution against M.
    Netstats { spec: String },
    /// Export the network of replication 0 at one generation.
    Snapshot {
        spec: String,
        #[arg(long)]
        generation: u64,
    },
    /// Run the oracle self-checks.
    Verify,
    /// Print a bundled spec file, or list them without a name.
    Preset { name: Option<String> },
}

fn load(arg: &str, seed: Option<u64>) -> Result<ExperimentSpec> {
    let path = Path::new(arg);
    let mut spec = if !path.exists() && preset_text(arg).is_some() {
        preset(arg)?
    } else {
        ExperimentSpec::load(path)?
    };
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    Ok(spec)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { spec } => {
            let spec = load(&spec, cli.seed)?;
            let outcome = run_experiment(&spec, &cli.out, cli.workers)?;
            println!("wrote {}", outcome.dir.display());
        }
        Command::Netstats { spec } => {
            let spec = load(&spec, cli.seed)?;
            let outcome = run_netstats(&spec, &cli.out, cli.workers)?;
            print!("{}", outcome.table_csv());
            print!("{}", outcome.fits_csv());
            if let Some(dir) = outcome.dir {
                println!("wrote {}", dir.display());
            }
        }
        Command::Snapshot { spec, generation } => {
            let spec = load(&spec, cli.seed)?;
            for dir in run_snapshot(&spec, &cli.out, generation)? {
                println!("wrote {}", dir.display());
            }
        }
        Command::Verify => {
            let checks = verify::run_all();
            print!("{}", verify::report(&checks));
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(HarnessError::VerifyFailed(failed));
            }
        }
        Command::Preset { name: None } => {
            for (name, _) in PRESETS {
                println!("{name}");
            }
        }
        Command::Preset { name: Some(name) } => match preset_text(&name) {
            Some(text) => print!("{text}"),
            None => return Err(HarnessError::InvalidSpec(format!("no preset named {name:?}"))),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
