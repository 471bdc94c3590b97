//! `lab`: run, validate and list weighted convolution algebra experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lab_core::experiments::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "lab", version, about = "Weighted Orlicz convolution algebra experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment listed in the config and write CSV + JSON sidecar.
    Run {
        config: PathBuf,
        /// Directory for `<config stem>.csv` and `.json` when the config has no `output`.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print the catalog of groups, Young functions, weights and experiments.
    ListCatalog,
    /// Validate a config without running it.
    Check { config: PathBuf },
}

const EXIT_CONTRACT: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn load(path: &Path) -> Result<ExperimentConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let config = ExperimentConfig::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    config.validate().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(config)
}

fn run(path: &Path, out_dir: &Path) -> Result<u8, String> {
    let config = load(path)?;
    let report = experiments::run(&config).map_err(|e| e.to_string())?;
    let (csv, json) = match &config.output {
        Some(o) => {
            let csv = PathBuf::from(&o.csv);
            let json = o.json.as_ref().map(PathBuf::from).unwrap_or_else(|| csv.with_extension("json"));
            (csv, json)
        }
        None => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
            (out_dir.join(format!("{stem}.csv")), out_dir.join(format!("{stem}.json")))
        }
    };
    for p in [&csv, &json] {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        }
    }
    fs::write(&csv, report.to_csv()).map_err(|e| format!("{}: {e}", csv.display()))?;
    fs::write(&json, report.sidecar_json()).map_err(|e| format!("{}: {e}", json.display()))?;
    let failures = report.hard_failures();
    eprintln!(
        "{} rows, {} hard failures, {} warnings -> {}",
        report.rows.len(),
        failures,
        report.soft_warnings(),
        csv.display()
    );
    for r in report.rows.iter().filter(|r| r.verdict == experiments::Verdict::Fail) {
        eprintln!("FAIL {}.{}: {} vs {:?}", r.experiment.as_str(), r.name, r.value, r.bound);
    }
    Ok(if failures > 0 { EXIT_CONTRACT } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListCatalog => {
            for e in experiments::catalog() {
                if e.params.is_empty() {
                    println!("{:<11} {}", e.section, e.kind);
                } else {
                    println!("{:<11} {:<18} {}", e.section, e.kind, e.params);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Check { config } => match load(&config) {
            Ok(c) => {
                println!("ok {}", c.param_hash());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_CONFIG)
            }
        },
        Command::Run { config, out_dir } => match run(&config, &out_dir) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_CONFIG)
            }
        },
    }
}
