use clap::Parser;
use floqsim_harness::{config, run_experiment, HarnessError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Floquet-Bacon-Shor code simulator: run one configured experiment and
/// write its JSON result document.
#[derive(Parser)]
#[command(name = "floqsim", version)]
struct Cli {
    /// Experiment: encode-fidelity, fbs-memory, pauli-gates,
    /// rotation-sweep, cnot-bell, lqpt-cnot, bs-memory, bs-gates, or
    /// error-budget
    experiment: String,
    /// TOML config file (flat key = value)
    #[arg(long)]
    config: PathBuf,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Shot budget override
    #[arg(long)]
    shots: Option<u64>,
    /// Result path
    #[arg(long, default_value = "results.json")]
    out: PathBuf,
    /// Also write the point series as CSV next to the JSON
    #[arg(long)]
    csv: bool,
}

fn run(cli: &Cli) -> Result<(), HarnessError> {
    let kind = config::ExperimentKind::from_name(&cli.experiment)?;
    let raw = config::load_raw(&cli.config)?;
    let cfg = config::resolve(kind, &raw, cli.seed, cli.shots)?;
    let doc = run_experiment(&cfg)?;
    doc.write_json(&cli.out)?;
    if cli.csv {
        doc.write_csv(&cli.out.with_extension("csv"))?;
    }

    let headline: Vec<String> = doc
        .summary
        .iter()
        .map(|(k, v)| format!("{k}={v:.6}"))
        .collect();
    println!(
        "{} seed={} {} -> {}",
        doc.experiment,
        doc.seed,
        if headline.is_empty() {
            format!("points={}", doc.points.len())
        } else {
            headline.join(" ")
        },
        cli.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
