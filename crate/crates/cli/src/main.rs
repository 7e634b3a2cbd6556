use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsurplus::harness::{
    decoherence_sweep, parse_state_spec, render_report, run_scenario, state_info, Format, HarnessError, SCENARIOS,
};

#[derive(Parser)]
#[command(name = "qsurplus", version, about = "Quantum information and surplus knowledge of small quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report I_Q, K_Q and classification for a JSON state spec.
    Info {
        file: PathBuf,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Run a named scenario.
    Scenario {
        name: String,
        /// Scenario parameter as key=value; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Random-phase ensembles averaged over many trials.
    Sweep {
        #[arg(long)]
        a1_sq: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Fraction of [0, 2pi) the phases are drawn from.
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Print scenario names and descriptions.
    ListScenarios,
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>, HarnessError> {
    let mut params = BTreeMap::new();
    for item in raw {
        let Some((key, value)) = item.split_once('=') else {
            return Err(HarnessError::BadParameter { key: item.clone(), reason: "expected key=value".into() });
        };
        let value: f64 = value.trim().parse().map_err(|_| HarnessError::BadParameter {
            key: key.to_string(),
            reason: format!("`{value}` is not a number"),
        })?;
        params.insert(key.trim().to_string(), value);
    }
    Ok(params)
}

fn run(command: Command) -> Result<String, (i32, String)> {
    let harness = |e: HarnessError| (e.exit_code(), e.to_string());
    match command {
        Command::Info { file, format } => {
            let text = std::fs::read_to_string(&file).map_err(|e| (1, format!("{}: {e}", file.display())))?;
            let spec = parse_state_spec(&text).map_err(harness)?;
            Ok(render_report(&state_info(&spec), format))
        }
        Command::Scenario { name, params, seed, format } => {
            let params = parse_params(&params).map_err(harness)?;
            let result = run_scenario(&name, &params, seed).map_err(harness)?;
            Ok(render_report(&result, format))
        }
        Command::Sweep { a1_sq, n, trials, seed, spread, format } => {
            let stats = decoherence_sweep(a1_sq, n, trials, seed, spread).map_err(harness)?;
            Ok(render_report(&stats, format))
        }
        Command::ListScenarios => {
            let width = SCENARIOS.iter().map(|(name, _)| name.len()).max().unwrap_or(0);
            Ok(SCENARIOS.iter().map(|(name, about)| format!("{name:width$}  {about}\n")).collect())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code as u8)
        }
    }
}
