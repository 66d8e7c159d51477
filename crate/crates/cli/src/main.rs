use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pt_lattice_cli::config::{load_config, Overrides, RunConfig};
use pt_lattice_cli::sweep::{all_scenarios, run_sweep};
use pt_lattice_cli::{execute, CliError};

#[derive(Parser)]
#[command(name = "pt-lattice", version, about = "Gain-loss subsystems embedded in a hard-wall lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One run; without arguments reproduces the reference configuration
    Run {
        /// JSON config; flags override its values
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Independent runs in parallel, one subdirectory each plus index.json
    Sweep {
        /// JSON array of run configs
        #[arg(long, conflicts_with = "all_scenarios")]
        config: Option<PathBuf>,
        /// Run scenarios 1..=4 built from the flags below
        #[arg(long)]
        all_scenarios: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn run(config: Option<PathBuf>, overrides: Overrides) -> Result<i32, CliError> {
    let (mut cfg, source) = match &config {
        Some(path) => {
            let (cfg, text) = load_config(path)?;
            (cfg, Some(text))
        }
        None => (RunConfig::default(), None),
    };
    cfg.apply(&overrides);
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let report = execute(&cfg, source.as_deref(), &out)?;
    let s = &report.summary;
    if let Some(t) = s.blow_up_time {
        eprintln!("numerical blow-up at t = {t}; partial output in {}", out.display());
    } else {
        match s.breakdown_time {
            Some(t) => println!("breakdown time {t} (epsilon {}); output in {}", s.epsilon, out.display()),
            None => {
                println!("no breakdown before t = {} (epsilon {}); output in {}", cfg.t_final, s.epsilon, out.display())
            }
        }
    }
    Ok(report.exit_code())
}

fn sweep(config: Option<PathBuf>, all: bool, overrides: Overrides) -> Result<i32, CliError> {
    let configs = if all {
        let mut base = RunConfig::default();
        base.apply(&overrides);
        all_scenarios(&base)
    } else {
        let path =
            config.ok_or_else(|| CliError::config("", None, "sweep needs --config or --all-scenarios".into()))?;
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        let mut configs: Vec<RunConfig> =
            serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.clone(), source: e })?;
        for c in &mut configs {
            c.apply(&Overrides { out: None, ..overrides.clone() });
        }
        configs
    };
    let out = overrides.out.unwrap_or_else(|| PathBuf::from("sweep_out"));
    let index = run_sweep(&configs, &out)?;
    for r in &index.runs {
        match &r.error {
            Some(e) => eprintln!("{}: {e}", r.name),
            None => println!("{}: {}", r.name, r.status),
        }
    }
    println!("{} runs, index in {}", index.runs.len(), out.join("index.json").display());
    Ok(index.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, overrides } => run(config, overrides),
        Command::Sweep { config, all_scenarios, overrides } => sweep(config, all_scenarios, overrides),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
