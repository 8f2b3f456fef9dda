use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hetcache::analysis::{gap_sweep, sweep_csv, worst_case_bruteforce};
use hetcache::converse::theorem1_bound;
use hetcache::format::sig;
use hetcache::model::{DemandClass, PlacementSpec, DEFAULT_ENUMERATION_CAP};
use hetcache::scenario::{Mode, ScenarioFile};
use hetcache::scheme2::{
    achievable_bound, deliver, integer_splits, max_alpha_load_exact, place_split,
    with_default_file_bits, SplitParams,
};
use hetcache::verify::{check_decodability, run_verification};

#[derive(Parser)]
#[command(
    name = "hetcache",
    version,
    about = "Coded caching with common and group-unique files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Converse lower bound and its minimizing split.
    Bound(ScenarioArg),
    /// Achievable load of the split scheme, optimized over the split.
    Achievable(ScenarioArg),
    /// Achievable and converse over a memory grid, as CSV.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst-case demand search and decoding for one split.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Split to simulate; by default the integer split with the smallest worst-case load.
        #[arg(long)]
        beta: Option<f64>,
        /// Writes the worst demand's transmission as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs every simulation suite and reports JSON on stdout.
    Verify {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Split to verify; by default every integer split.
        #[arg(long)]
        beta: Option<f64>,
    },
}

enum Failure {
    Verify(String),
    Input(anyhow::Error),
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Input(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<hetcache::Error> for Failure {
    fn from(e: hetcache::Error) -> Self {
        Failure::Input(e.into())
    }
}

type CliResult<T> = Result<T, Failure>;

fn load_scenario(path: &Path) -> CliResult<ScenarioFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Io)?;
    let scenario = ScenarioFile::from_json(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Input)?;
    scenario
        .validate()
        .map_err(|e| Failure::Input(anyhow!(e)))?;
    Ok(scenario)
}

fn require_simulate(scenario: &ScenarioFile, command: &str) -> CliResult<()> {
    if scenario.mode != Mode::Simulate {
        return Err(Failure::Input(anyhow!(
            "{command} requires \"mode\": \"simulate\""
        )));
    }
    Ok(())
}

fn write_output(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Io)
}

fn to_json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn cmd_bound(scenario: &ScenarioFile) -> CliResult<String> {
    let b = theorem1_bound(&scenario.system)?;
    Ok(format!(
        "theorem1_bound {}\nbeta_star {}\nconvex {}\n",
        sig(b.value),
        sig(b.beta),
        b.convex
    ))
}

fn cmd_achievable(scenario: &ScenarioFile) -> CliResult<String> {
    let a = achievable_bound(&scenario.system)?;
    Ok(format!(
        "achievable {}\nbeta_star {}\nalpha_star {}\n",
        sig(a.value),
        sig(a.beta),
        a.alpha
    ))
}

fn cmd_sweep(scenario: &ScenarioFile, out: Option<&Path>) -> CliResult<String> {
    let grid = scenario.grid().map_err(|e| Failure::Input(anyhow!(e)))?;
    let csv = sweep_csv(&gap_sweep(&scenario.system, &grid)?);
    match out {
        Some(path) => write_output(path, &csv).map(|_| String::new()),
        None => Ok(csv),
    }
}

fn chosen_split(scenario: &ScenarioFile, beta: Option<f64>) -> CliResult<SplitParams> {
    let cfg = &scenario.system;
    if let Some(beta) = beta {
        return Ok(SplitParams::new(cfg, beta)?);
    }
    let mut best: Option<(SplitParams, _)> = None;
    for split in integer_splits(cfg) {
        let (t_c, t_u) = split.require_integer()?;
        let (_, load) = max_alpha_load_exact(cfg, t_c, t_u)?;
        if best.as_ref().is_none_or(|(_, b)| load < *b) {
            best = Some((split, load));
        }
    }
    best.map(|(s, _)| s).ok_or_else(|| {
        Failure::Input(anyhow!(
            "no split of M = {} has integer t_c and t_u",
            cfg.memory
        ))
    })
}

fn cmd_simulate(
    scenario: &ScenarioFile,
    seed: u64,
    beta: Option<f64>,
    out: Option<&Path>,
) -> CliResult<String> {
    require_simulate(scenario, "simulate")?;
    let split = chosen_split(scenario, beta)?;
    let (t_c, t_u) = split.require_integer()?;
    let cfg = with_default_file_bits(&scenario.system, &split)?;
    let worst = worst_case_bruteforce(&cfg, split.beta, DemandClass::All, DEFAULT_ENUMERATION_CAP)?;
    let (alpha_star, formula_max) = max_alpha_load_exact(&cfg, t_c, t_u)?;
    let decoding = check_decodability(&cfg, &split, &[seed])?;
    if let Some(path) = out {
        let tx = deliver(&cfg, &place_split(&cfg, &split)?, &worst.demand, &split)?;
        let dump = json!({
            "demand": worst.demand,
            "total_load": tx.total_load.to_string(),
            "messages": tx.dump(),
        });
        write_output(path, &to_json(&dump))?;
    }
    let report = json!({
        "beta": sig(split.beta),
        "t_c": t_c,
        "t_u": t_u,
        "file_bits": cfg.file_bits,
        "seed": seed,
        "formula_max": formula_max.to_string(),
        "formula_alpha": alpha_star,
        "worst_case": worst,
        "decodability": decoding,
    });
    Ok(to_json(&report))
}

fn cmd_verify(scenario: &ScenarioFile, seed: u64, beta: Option<f64>) -> CliResult<String> {
    require_simulate(scenario, "verify")?;
    let cfg = &scenario.system;
    let fixture = scenario
        .placement
        .as_deref()
        .map(PlacementSpec::from_entries)
        .transpose()?;
    let splits = match (beta, &fixture) {
        (Some(beta), _) => vec![SplitParams::new(cfg, beta)?],
        (None, Some(_)) => Vec::new(),
        (None, None) => integer_splits(cfg),
    };
    let report = run_verification(cfg, &splits, &[seed], fixture.as_ref())?;
    let text = to_json(&report);
    match report.first_failure() {
        Some(detail) => {
            print!("{text}");
            Err(Failure::Verify(detail))
        }
        None => Ok(text),
    }
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Bound(s) => cmd_bound(&load_scenario(&s.scenario)?),
        Command::Achievable(s) => cmd_achievable(&load_scenario(&s.scenario)?),
        Command::Sweep { scenario, out } => {
            cmd_sweep(&load_scenario(&scenario.scenario)?, out.as_deref())
        }
        Command::Simulate {
            scenario,
            seed,
            beta,
            out,
        } => {
            let s = load_scenario(&scenario.scenario)?;
            cmd_simulate(&s, seed.unwrap_or(s.seed), beta, out.as_deref())
        }
        Command::Verify {
            scenario,
            seed,
            beta,
        } => {
            let s = load_scenario(&scenario.scenario)?;
            cmd_verify(&s, seed.unwrap_or(s.seed), beta)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match &failure {
                Failure::Verify(detail) => eprintln!("verification failed: {detail}"),
                Failure::Input(e) | Failure::Io(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
