use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use unsharp_cli::{
    parse_experiment, run_experiment, serialize_results, CliError, ExperimentConfig, ReportFormat,
};

#[derive(Parser)]
#[command(
    name = "unsharp",
    about = "Simulate sequential unsharp measurements of photon polarization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute exact distributions and correlations for an experiment file.
    Exact {
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the exact analysis plus Monte Carlo sampling.
    Simulate {
        config: PathBuf,
        /// Override `sampling.shots` from the file.
        #[arg(long)]
        shots: Option<u64>,
        /// Override `sampling.seed` from the file.
        #[arg(long)]
        seed: Option<u64>,
        /// Override `sampling.shards` from the file.
        #[arg(long)]
        shards: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check an experiment file against the schema and the optical
    /// cross-check without producing a report.
    Validate { config: PathBuf },
    /// Write ready-to-run example experiment files.
    Demo {
        /// Directory for the generated files.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(format: Format) -> Self {
        match format {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exact { config, out, format } => {
            let config = load_config(&config)?;
            let report = run_experiment(&config, false)?;
            emit(&serialize_results(&report, format.into()), out.as_deref())
        }
        Command::Simulate {
            config,
            shots,
            seed,
            shards,
            out,
            format,
        } => {
            let mut config = load_config(&config)?;
            if let Some(shots) = shots {
                config.sampling.shots = shots;
            }
            if let Some(seed) = seed {
                config.sampling.seed = seed;
            }
            if let Some(shards) = shards {
                if shards < 1 {
                    return Err(CliError::Range("--shards must be at least 1".into()));
                }
                config.sampling.shards = shards;
            }
            let report = run_experiment(&config, true)?;
            emit(&serialize_results(&report, format.into()), out.as_deref())
        }
        Command::Validate { config } => {
            let parsed = load_config(&config)?;
            run_experiment(&parsed, false)?;
            println!(
                "ok: {} measurement level(s), selection {}",
                parsed.levels(),
                selection_name(&parsed)
            );
            Ok(())
        }
        Command::Demo { dir } => write_demos(&dir),
    }
}

fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    parse_experiment(&text)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn selection_name(config: &ExperimentConfig) -> &'static str {
    use unsharp_core::SelectionSpec;
    match config.selection {
        SelectionSpec::None => "none",
        SelectionSpec::Postselect(_) => "postselect",
        SelectionSpec::Reselect => "reselect",
    }
}

const DEMO_POSTSELECTION: &str = r#"{
  "initial_state": { "alpha": [1.0, 0.0], "beta": [0.0, 0.0] },
  "settings": [
    { "bloch": [1.0, 0.0, 0.0], "eta": 0.1 }
  ],
  "selection": {
    "mode": "postselect",
    "final_state": {
      "alpha": [0.09983341664682815, 0.0],
      "beta": [0.9950041652780258, 0.0]
    }
  },
  "sampling": { "shots": 100000, "seed": 7, "shards": 4 },
  "outputs": { "subsets": [[1]], "emit_distribution": true }
}
"#;

const DEMO_RESELECTION: &str = r#"{
  "initial_state": {
    "alpha": [0.7071067811865476, 0.0],
    "beta": [0.7071067811865476, 0.0]
  },
  "settings": [
    { "bloch": [0.0, 0.0, 1.0], "eta": 0.05 },
    { "bloch": [0.0, 0.0, 1.0], "eta": 0.05 }
  ],
  "selection": { "mode": "reselect" },
  "sampling": { "shots": 10000000, "seed": 7, "shards": 8 },
  "outputs": { "subsets": [[1, 2]], "emit_distribution": true }
}
"#;

fn write_demos(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let demos = [
        ("demo_postselection.json", DEMO_POSTSELECTION),
        ("demo_reselection.json", DEMO_RESELECTION),
    ];
    for (name, text) in demos {
        let path = dir.join(name);
        // Check the shipped text against the schema before writing it.
        parse_experiment(text)?;
        std::fs::write(&path, text)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
