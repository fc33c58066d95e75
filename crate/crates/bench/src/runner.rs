use std::fs;
use std::path::Path;

use pb_core::{assemble, solve, write_matrix_market, DiscreteSystem64, SolveReport64, Termination};

use crate::config::BenchConfig;
use crate::report::{history_csv, ComparisonSummary, StrategySummary};
use crate::{display_path, oracle, BenchError, StrategyKind};

/// Everything a benchmark run produced.
#[derive(Debug, Clone)]
pub struct BenchOutcome {
    pub summary: ComparisonSummary,
    pub reports: Vec<(StrategyKind, SolveReport64)>,
}

/// Runs every configured strategy on one assembled system and writes
/// `<out_dir>/<strategy>.csv` and `<out_dir>/summary.txt`.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<ComparisonSummary, BenchError> {
    run_benchmark_in(cfg, &cfg.out_dir).map(|o| o.summary)
}

pub fn run_benchmark_in(cfg: &BenchConfig, out_dir: &Path) -> Result<BenchOutcome, BenchError> {
    cfg.validate()?;
    let sys = build_system(cfg)?;
    fs::create_dir_all(out_dir).map_err(|e| BenchError::io(format!("creating {}", display_path(out_dir)), e))?;

    let newton = cfg.newton();
    let mut reports = Vec::with_capacity(cfg.strategies.len());
    for &kind in &cfg.strategies {
        let report = solve(&sys, &newton, &cfg.strategy(kind)).map_err(|e| BenchError::Solver {
            strategy: kind.name().to_string(),
            message: e.to_string(),
        })?;
        let path = out_dir.join(format!("{}.csv", kind.name()));
        fs::write(&path, history_csv(&report))
            .map_err(|e| BenchError::io(format!("writing {}", display_path(&path)), e))?;
        reports.push((kind, report));
    }

    let runs = reports
        .iter()
        .map(|(k, r)| StrategySummary::from_report(*k, r))
        .collect();
    let mut summary = ComparisonSummary::new(cfg.nx, cfg.ny, runs);

    let mut disagreement = None;
    if cfg.oracle {
        let dense = oracle::oracle_solve(cfg)?;
        let mut worst: f64 = 0.0;
        for (kind, report) in &reports {
            let d = oracle::max_abs_diff(&report.final_p, &dense);
            if d > oracle::ORACLE_AGREEMENT_TOL && disagreement.is_none() {
                disagreement = Some(BenchError::Disagreement {
                    strategy: kind.name().to_string(),
                    max_diff: d,
                    limit: oracle::ORACLE_AGREEMENT_TOL,
                });
            }
            worst = worst.max(d);
        }
        summary.oracle_max_diff = Some(worst);
    }

    let path = out_dir.join("summary.txt");
    fs::write(&path, summary.to_text()).map_err(|e| BenchError::io(format!("writing {}", display_path(&path)), e))?;

    for (kind, report) in &reports {
        if matches!(report.reason, Termination::InnerFailure | Termination::Overflow) {
            return Err(BenchError::Solver {
                strategy: kind.name().to_string(),
                message: format!("terminated with {}", report.reason),
            });
        }
    }
    if let Some(e) = disagreement {
        return Err(e);
    }
    Ok(BenchOutcome { summary, reports })
}

pub fn build_system(cfg: &BenchConfig) -> Result<DiscreteSystem64, BenchError> {
    Ok(assemble(&cfg.grid()?, &cfg.problem()?))
}

/// Dumps `A1` of the configured problem in MatrixMarket format.
pub fn dump_matrix(cfg: &BenchConfig, path: &Path) -> Result<(), BenchError> {
    let sys = build_system(cfg)?;
    let file = fs::File::create(path).map_err(|e| BenchError::io(format!("creating {}", display_path(path)), e))?;
    write_matrix_market(sys.a1(), std::io::BufWriter::new(file))
        .map_err(|e| BenchError::io(format!("writing {}", display_path(path)), e))
}
