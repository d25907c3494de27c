use std::path::PathBuf;
use std::process::ExitCode;

use cantor_lab::config::ExperimentConfig;
use cantor_lab::presets::preset_text;
use cantor_lab::{execute, ConfigError, LabError, Output, Task, CONFIG_FILE};
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "cantor-lab",
    version,
    about = "Brownian zeros on generalized Cantor sets"
)]
struct Cli {
    /// Experiment config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in config: paper-dichotomy, figure1, figure3.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (overrides the config).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Every enabled stage followed by the report.
    Run,
    /// Regime verdicts per spec.
    Classify,
    /// Interval tree dump.
    Build,
    /// Z/Y moments with oracle values.
    Moments,
    /// Balanced-address counts and the exponential bound.
    Census,
    /// LIL ratio profiles.
    Lil,
    /// Cut-probability sweep.
    Cuts,
    /// Series, conditional-sum and first-moment bound tables.
    Bounds,
    /// One sampled path per spec.
    Paths,
    /// Summary of the outputs in the run directory.
    Report,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, LabError> {
    let text = match (&cli.preset, &cli.config) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::Invalid("use either --preset or --config".into()).into())
        }
        (Some(p), None) => preset_text(p)?.to_string(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Invalid(format!("{}: {e}", path.display())))?,
        (None, None) => {
            let saved = cli.out.join(CONFIG_FILE);
            std::fs::read_to_string(&saved).map_err(|_| {
                ConfigError::Invalid(format!(
                    "no --config or --preset, and no {} in the run directory",
                    CONFIG_FILE
                ))
            })?
        }
    };
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let task = match cli.cmd {
        Cmd::Run => Task::All,
        Cmd::Classify => Task::Stage(Output::Classify),
        Cmd::Build => Task::Stage(Output::Tree),
        Cmd::Moments => Task::Stage(Output::Moments),
        Cmd::Census => Task::Stage(Output::Census),
        Cmd::Lil => Task::Stage(Output::Lil),
        Cmd::Cuts => Task::Stage(Output::Cuts),
        Cmd::Bounds => Task::Stage(Output::Bounds),
        Cmd::Paths => Task::Stage(Output::Paths),
        Cmd::Report => Task::Report,
    };
    let result = load(&cli).and_then(|cfg| execute(cfg, &cli.out, task));
    match result {
        Ok(m) => {
            for o in &m.outputs {
                println!("{}", cli.out.join(o).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
