use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use prc::model::{ModelRing, StreamElem};
use prc::pradical::{height, HeightStatus, DEFAULT_HEIGHT_BOUND};
use prc::tower::ModelTower;
use prc::verify::{run_all, run_scenario, status_exit_code, CheckStatus, Report, ScenarioParams};

/// Exit code for malformed input, distinct from check outcomes.
const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "prc", version, about = "Checks for p-radical closures of Nagata-type DVRs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification scenario (or `all`).
    Verify {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        mu: u32,
        #[arg(long, default_value_t = 1)]
        nu: u32,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 64)]
        precision: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Height of a rule-defined element over R_mu.
    Height {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        mu: u32,
        #[arg(long, default_value_t = DEFAULT_HEIGHT_BOUND)]
        bound: u32,
    },
    /// Numerical invariants (e, f, n) of a tower given as JSON.
    Invariants {
        #[arg(long)]
        tower: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(INPUT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

/// Writes to stdout; a closed pipe (`prc ... | head`) is not an error.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Verify { scenario, p, mu, nu, depth, precision, seed, format } => {
            let params = ScenarioParams { p, mu, nu, depth, precision, seed };
            let reports: Vec<Report> = if scenario == "all" {
                run_all(&params).map_err(|e| e.to_string())?
            } else {
                vec![run_scenario(&scenario, &params).map_err(|e| e.to_string())?]
            };
            match format {
                Format::Json if reports.len() == 1 => emit(&format!("{}\n", reports[0].to_json())),
                Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&reports).expect("reports serialize"))),
                Format::Text => reports.iter().for_each(|r| emit(&r.to_text())),
            }
            let worst = reports.iter().map(Report::overall).max().unwrap_or(CheckStatus::Pass);
            Ok(status_exit_code(worst) as u8)
        }
        Command::Height { rule, p, mu, bound } => {
            let ring = ModelRing::new(p, mu).map_err(|e| e.to_string())?;
            let b = StreamElem::from_json(&rule, p).map_err(|e| e.to_string())?;
            let h = height(&b, &ring, bound);
            emit(&format!("{}\n", serde_json::to_string_pretty(&h).expect("height results serialize")));
            Ok(if h.status == HeightStatus::Unknown { 2 } else { 0 })
        }
        Command::Invariants { tower } => {
            let t = ModelTower::from_json(&tower).map_err(|e| e.to_string())?;
            match t.invariants() {
                Ok(inv) => {
                    emit(&format!("{}\n", serde_json::to_string_pretty(&inv).expect("invariants serialize")));
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(1)
                }
            }
        }
    }
}
