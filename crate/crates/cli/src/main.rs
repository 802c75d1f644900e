use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use varlab_cli::{catalog, report_suite, resolve_out_dir, run, write_report, ExperimentConfig, Overrides};

#[derive(Parser)]
#[command(name = "lab", about = "Monte Carlo laboratory for invariant random projective varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a JSON config and write its report.
    Run {
        config: PathBuf,
        /// Override the sample budget.
        #[arg(long)]
        samples: Option<u64>,
        /// Override the RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for report files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker thread count (results do not depend on it).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Summarize all reports found in a directory.
    Report { dir: PathBuf },
    /// Print the experiment catalog.
    List,
}

// Exit codes: 0 all records pass, 1 numerical failure, 2 config/usage error.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, samples, seed, out, workers } => {
            let parsed = match ExperimentConfig::from_file(&config) {
                Ok(c) => c,
                Err(err) => {
                    eprintln!("config error: {err:#}");
                    return ExitCode::from(2);
                }
            };
            let effective = Overrides { samples, seed, workers }.apply(parsed);
            let report = match run(&effective) {
                Ok(r) => r,
                Err(err) => {
                    eprintln!("config error: {err:#}");
                    return ExitCode::from(2);
                }
            };
            let dir = resolve_out_dir(&effective, out.as_deref());
            if let Err(err) = write_report(&report, &dir) {
                eprintln!("output error: {err:#}");
                return ExitCode::from(2);
            }
            print!("{}", varlab_cli::render_text(&report));
            println!("report written to {}", dir.display());
            if report.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Report { dir } => match report_suite(&dir) {
            Ok(summary) => {
                print!("{}", summary.table);
                if summary.all_pass() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(err) => {
                eprintln!("report error: {err:#}");
                ExitCode::from(2)
            }
        },
        Command::List => {
            print!("{}", catalog());
            ExitCode::SUCCESS
        }
    }
}
