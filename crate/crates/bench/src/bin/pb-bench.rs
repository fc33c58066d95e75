use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use pb_bench::{parse_config, run_benchmark_in, verify, BenchConfig, BenchError};

#[derive(Parser)]
#[command(
    name = "pb-bench",
    version,
    about = "Fixed vs adaptive inner tolerance Newton-Krylov benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured strategy and write CSV telemetry plus a summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `out_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the assembled operator A1 in MatrixMarket format.
        #[arg(long)]
        dump_matrix: Option<PathBuf>,
    },
    /// Cross-check the sparse solver against the dense Newton oracle.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the default configuration.
    PrintDefaults,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<(), BenchError> {
    match command {
        Command::Run {
            config,
            out,
            dump_matrix,
        } => {
            let cfg = parse_config(&config)?;
            let out_dir = out.unwrap_or_else(|| cfg.out_dir.clone());
            if let Some(path) = dump_matrix {
                pb_bench::runner::dump_matrix(&cfg, &path)?;
            }
            let start = Instant::now();
            let outcome = run_benchmark_in(&cfg, &out_dir)?;
            print!("{}", outcome.summary.to_text());
            println!("wall_time_s: {:.3}", start.elapsed().as_secs_f64());
            println!("output: {}", out_dir.display());
            Ok(())
        }
        Command::Verify { config } => {
            let cfg = parse_config(&config)?;
            let report = verify(&cfg)?;
            for (kind, d) in &report.max_diffs {
                println!("{kind}: max |p_sparse - p_dense| = {d:.3e}");
            }
            if let Some(&(kind, d)) = report
                .max_diffs
                .iter()
                .find(|(_, d)| *d > pb_bench::ORACLE_AGREEMENT_TOL)
            {
                return Err(BenchError::Disagreement {
                    strategy: kind.name().to_string(),
                    max_diff: d,
                    limit: pb_bench::ORACLE_AGREEMENT_TOL,
                });
            }
            println!("oracle agreement: ok");
            Ok(())
        }
        Command::PrintDefaults => {
            print!("{}", BenchConfig::default().to_config_string());
            Ok(())
        }
    }
}
