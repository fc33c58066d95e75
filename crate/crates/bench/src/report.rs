//! CSV telemetry and the plain-text comparison summary.
//!
//! Floats are written with 17 significant digits so every `f64` round-trips.

use std::fmt::Write as _;

use pb_core::{SolveReport64, Termination};

use crate::StrategyKind;

pub const CSV_HEADER: &str = "k,residual_norm,step_norm,inner_tol,inner_iters,inner_converged";

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// One CSV row per outer iteration, preceded by [`CSV_HEADER`].
pub fn history_csv(report: &SolveReport64) -> String {
    let mut s = String::with_capacity(64 * (report.history.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in &report.history {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.k,
            fmt_float(r.residual_norm),
            fmt_float(r.step_norm),
            fmt_float(r.inner_tol),
            r.inner_iters,
            r.inner_converged
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategySummary {
    pub strategy: StrategyKind,
    pub outer_iterations: usize,
    pub total_inner_iterations: usize,
    pub final_residual_norm: f64,
    pub reason: Termination,
    pub converged: bool,
}

impl StrategySummary {
    pub fn from_report(strategy: StrategyKind, report: &SolveReport64) -> Self {
        StrategySummary {
            strategy,
            outer_iterations: report.outer_iterations(),
            total_inner_iterations: report.total_inner_iters,
            final_residual_norm: report.final_residual_norm,
            reason: report.reason,
            converged: report.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSummary {
    pub nx: usize,
    pub ny: usize,
    pub runs: Vec<StrategySummary>,
    /// Adaptive over fixed total inner iterations. `None` unless both ran
    /// and the fixed run did some inner work.
    pub inner_iteration_ratio: Option<f64>,
    /// Largest `|p_sparse - p_dense|` over all strategies when the oracle
    /// was enabled.
    pub oracle_max_diff: Option<f64>,
}

impl ComparisonSummary {
    pub fn new(nx: usize, ny: usize, runs: Vec<StrategySummary>) -> Self {
        let ratio = inner_ratio(&runs);
        ComparisonSummary {
            nx,
            ny,
            runs,
            inner_iteration_ratio: ratio,
            oracle_max_diff: None,
        }
    }

    pub fn run(&self, kind: StrategyKind) -> Option<&StrategySummary> {
        self.runs.iter().find(|r| r.strategy == kind)
    }

    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "nx: {}", self.nx);
        let _ = writeln!(s, "ny: {}", self.ny);
        let _ = writeln!(s, "unknowns: {}", self.nx * self.ny);
        for r in &self.runs {
            let name = r.strategy.name();
            let _ = writeln!(s, "{name}.outer_iterations: {}", r.outer_iterations);
            let _ = writeln!(s, "{name}.total_inner_iterations: {}", r.total_inner_iterations);
            let _ = writeln!(s, "{name}.final_residual_norm: {}", fmt_float(r.final_residual_norm));
            let _ = writeln!(s, "{name}.reason: {}", r.reason);
            let _ = writeln!(s, "{name}.converged: {}", r.converged);
        }
        if let Some(ratio) = self.inner_iteration_ratio {
            let _ = writeln!(s, "inner_iteration_ratio: {}", fmt_float(ratio));
        }
        if let Some(d) = self.oracle_max_diff {
            let _ = writeln!(s, "oracle_max_diff: {}", fmt_float(d));
        }
        s
    }
}

/// Adaptive over fixed total inner iterations.
pub fn inner_ratio(runs: &[StrategySummary]) -> Option<f64> {
    let total = |kind| {
        runs.iter()
            .find(|r| r.strategy == kind)
            .map(|r| r.total_inner_iterations)
    };
    match (total(StrategyKind::Adaptive), total(StrategyKind::Fixed)) {
        (Some(a), Some(f)) if f > 0 && a > 0 => Some(a as f64 / f as f64),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pb_core::IterationRecord;

    fn report() -> SolveReport64 {
        SolveReport64 {
            history: vec![IterationRecord {
                k: 0,
                residual_norm: 0.1,
                step_norm: 2.5,
                inner_tol: 1e-1,
                inner_iters: 4,
                inner_converged: true,
            }],
            final_p: vec![],
            final_residual_norm: 1e-11,
            converged: true,
            reason: Termination::ResidualTol,
            total_inner_iters: 4,
        }
    }

    #[test]
    fn csv_layout() {
        let csv = history_csv(&report());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "0,1.0000000000000001e-1,2.5000000000000000e0,1.0000000000000001e-1,4,true"
        );
        let parsed: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(parsed, 0.1);
    }

    #[test]
    fn summary_text() {
        let fixed = StrategySummary {
            total_inner_iterations: 8,
            ..StrategySummary::from_report(StrategyKind::Fixed, &report())
        };
        let adaptive = StrategySummary::from_report(StrategyKind::Adaptive, &report());
        let s = ComparisonSummary::new(4, 4, vec![fixed, adaptive]);
        assert_eq!(s.inner_iteration_ratio, Some(0.5));
        let text = s.to_text();
        assert!(text.contains("fixed.total_inner_iterations: 8\n"));
        assert!(text.contains("adaptive.reason: ResidualTol\n"));
        assert!(text.ends_with("inner_iteration_ratio: 5.0000000000000000e-1\n"));
        for line in text.lines() {
            assert!(line.contains(": "), "{line}");
        }
    }

    #[test]
    fn ratio_needs_both_runs() {
        let only = vec![StrategySummary::from_report(StrategyKind::Fixed, &report())];
        assert_eq!(inner_ratio(&only), None);
    }
}
