//! Scenario runner: binds TOML configs to the simulation campaigns with
//! reproducible seeds, structured outputs, and provenance reporting.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use glv_core::analyses::{run_scenario, write_campaign};
use glv_core::config::{
    default_config_toml, load_config, provenance_report, ScenarioConfig, SCENARIOS,
};
use glv_core::exec::ExecMode;
use glv_core::{GlvError, Result};

#[derive(Parser)]
#[command(
    name = "glv",
    about = "Simulator of airborne plant stress signalling with green leaf volatiles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Profile {
    /// Desk-scale campaign sizes: minutes on a laptop core.
    #[default]
    Desk,
    /// Full-scale settings where they differ (alarm-map snapshots at the
    /// 1/3/6/10 hour marks).
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the scenario named in the config and write its artifacts.
    Run {
        /// Config file; the shipped default when omitted.
        config: Option<PathBuf>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for campaign cells; defaults to all cores.
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory; defaults to $GLV_OUTPUT_ROOT/<scenario> or
        /// ./out/<scenario>.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dotted-path config override, repeatable (e.g. --set wind.regime=directed).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long, value_enum, default_value_t = Profile::Desk)]
        profile: Profile,
        /// Also write per-cell c_v trajectory dumps for sweep and map campaigns.
        #[arg(long)]
        dump_cells: bool,
    },
    /// Check a config without simulating; print values with provenance tags.
    Validate {
        /// Config file; the shipped default when omitted.
        config: Option<PathBuf>,
    },
    /// List the runnable scenario names.
    ListScenarios,
}

fn parse_overrides(set: &[String]) -> Result<Vec<(String, String)>> {
    set.iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| GlvError::Config(format!("--set needs KEY=VALUE, got {kv:?}")))
        })
        .collect()
}

fn config_text(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => Ok(std::fs::read_to_string(p)?),
        None => Ok(default_config_toml().to_string()),
    }
}

fn profile_overrides(profile: Profile) -> Vec<(String, String)> {
    match profile {
        Profile::Desk => Vec::new(),
        Profile::Full => vec![
            (
                "campaigns.alarm_map.snapshot_times_s".into(),
                "[3600.0, 10800.0, 21600.0, 36000.0]".into(),
            ),
            ("campaigns.alarm_map.horizon_s".into(), "36000.0".into()),
        ],
    }
}

fn out_dir(out: &Option<PathBuf>, cfg: &ScenarioConfig) -> PathBuf {
    match out {
        Some(p) => p.clone(),
        None => {
            let root = std::env::var_os("GLV_OUTPUT_ROOT")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("out"));
            root.join(&cfg.scenario)
        }
    }
}

fn cmd_run(
    config: &Option<PathBuf>,
    seed: Option<u64>,
    workers: Option<usize>,
    out: &Option<PathBuf>,
    set: &[String],
    profile: Profile,
    dump_cells: bool,
) -> Result<()> {
    let mut overrides = profile_overrides(profile);
    overrides.extend(parse_overrides(set)?);
    if let Some(s) = seed {
        overrides.push(("master_seed".into(), s.to_string()));
    }
    let cfg = load_config(&config_text(config)?, &overrides)?;
    cfg.validate()?;

    #[cfg(feature = "parallel")]
    if let Some(n) = workers {
        if n == 0 {
            return Err(GlvError::Config("--workers must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| GlvError::Config(format!("worker pool: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;

    let dir = out_dir(out, &cfg);
    let started = Instant::now();
    let run = run_scenario(&cfg, ExecMode::Parallel, dump_cells)?;
    let wall = started.elapsed().as_secs_f64();
    let written = write_campaign(&cfg, &run, &dir, wall)?;
    print!("{}", run.summary);
    println!("wall time: {wall:.2} s");
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_validate(config: &Option<PathBuf>) -> Result<()> {
    let cfg = ScenarioConfig::from_toml_str(&config_text(config)?)?;
    let problems = cfg.problems();
    println!("{:<48} {:>24}  provenance", "parameter", "value");
    for entry in provenance_report(&cfg) {
        println!("{:<48} {:>24}  {}", entry.key, entry.value, entry.provenance);
    }
    if problems.is_empty() {
        println!("\nconfig ok: scenario {:?}, master seed {}", cfg.scenario, cfg.master_seed);
    } else {
        println!("\n{} problem(s):", problems.len());
        for p in &problems {
            println!("  - {p}");
        }
    }
    Ok(())
}

fn run_cli(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run { config, seed, workers, out, set, profile, dump_cells } => {
            cmd_run(config, *seed, *workers, out, set, *profile, *dump_cells)
        }
        Command::Validate { config } => cmd_validate(config),
        Command::ListScenarios => {
            for s in SCENARIOS {
                println!("{s}");
            }
            Ok(())
        }
    }
}

fn exit_code(err: &GlvError) -> u8 {
    match err {
        GlvError::Config(_) | GlvError::Parameter(_) | GlvError::Domain(_) | GlvError::Geometry(_) => 2,
        GlvError::Numeric(_) => 3,
        GlvError::Io(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cli(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
