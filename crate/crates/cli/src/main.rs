use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use clusteragg_cli::{compare, plots, tune, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "clusteragg", version, about = "Aggregate base clusterings by solving a weighted independent set problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write report.json plus artifacts.
    Run {
        config: PathBuf,
        /// Override a config key, e.g. `--set shots=500 --set backend.1.seed=3`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Render SVG figures from a saved report.
    Plots {
        report: PathBuf,
        /// Output directory; defaults to the report's directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate backends across two or more reports.
    Compare {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Tune the adiabatic pulse on the config's overlap graph.
    Tune {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run { config, overrides } => {
            let cfg = RunConfig::load(&config, &overrides)?;
            let report = clusteragg_cli::run(&cfg)?;
            for b in &report.backends {
                println!(
                    "{:<20} modal {}  best {} (weight {:.3}, valid {})",
                    b.name, b.modal, b.best.bitstring, b.best.weight, b.best.valid
                );
            }
            match &report.selected {
                Some(s) => println!(
                    "selected {} from {}: {} clusters, weight {:.3}",
                    s.bitstring, s.backend, s.n_clusters, s.weight
                ),
                None => println!("no backend produced an independent set"),
            }
            println!("report: {}", cfg.output_dir.join(clusteragg_cli::report::REPORT_FILE).display());
        }
        Command::Plots { report, out } => {
            for p in plots::render(&report, out.as_deref())? {
                println!("{}", p.display());
            }
        }
        Command::Compare { reports, out } => {
            print!("{}", compare::compare(&reports, &out)?);
        }
        Command::Tune { config, overrides } => {
            let cfg = RunConfig::load(&config, &overrides)?;
            let out = tune::tune(&cfg)?;
            let b = out.tuning.result.best;
            println!(
                "best omega {:.4} delta0 {:.4} T {:.1} ns: score {:.4}, rescored {:.4}",
                b.omega, b.delta0, b.t_ns, out.tuning.result.best_score, out.tuning.final_score
            );
            println!("trace: {}", out.trace_file.display());
            println!("result: {}", out.result_file.display());
        }
    }
    Ok(())
}
