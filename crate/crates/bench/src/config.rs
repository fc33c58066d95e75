//! Flat `key = value` benchmark configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key is
//! optional; unknown or repeated keys are rejected.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use pb_core::{ForcingStrategy, Grid64, InitialGuess, NewtonConfig, ProblemSpec64, ToleranceMode};

use crate::{display_path, BenchError};

/// Largest grid for which the dense oracle may be enabled.
pub const ORACLE_MAX_CELLS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    /// Fixed inner tolerance.
    Fixed,
    /// Power-of-ten inner tolerance schedule.
    Adaptive,
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Fixed => "fixed",
            StrategyKind::Adaptive => "adaptive",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "fixed" => Some(StrategyKind::Fixed),
            "adaptive" => Some(StrategyKind::Adaptive),
            _ => None,
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub nx: usize,
    pub ny: usize,
    /// `[xmin, xmax, ymin, ymax]`
    pub bounds: [f64; 4],
    pub eps_quadrants: [f64; 4],
    pub k: f64,
    pub max_iter: usize,
    pub tol_residual: f64,
    pub tol_step: f64,
    pub fixed_eta: f64,
    pub forcing_floor: f64,
    pub forcing_stride: u32,
    pub strategies: Vec<StrategyKind>,
    pub out_dir: PathBuf,
    pub oracle: bool,
    pub seed: u64,
    pub initial_guess: InitialGuess,
    pub inner_tol_mode: ToleranceMode,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            nx: 64,
            ny: 64,
            bounds: [-1.0, 1.0, -1.0, 1.0],
            eps_quadrants: [1.0, 100.0, 1.0, 100.0],
            k: 1.0,
            max_iter: 15,
            tol_residual: 1e-10,
            tol_step: 1e-10,
            fixed_eta: 1e-15,
            forcing_floor: 1e-15,
            forcing_stride: 1,
            strategies: vec![StrategyKind::Fixed, StrategyKind::Adaptive],
            out_dir: PathBuf::from("./out"),
            oracle: false,
            seed: 0,
            initial_guess: InitialGuess::Zero,
            inner_tol_mode: ToleranceMode::Relative,
        }
    }
}

pub fn parse_config(path: &Path) -> Result<BenchConfig, BenchError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| BenchError::io(format!("reading {}", display_path(path)), e))?;
    parse_config_named(&text, &display_path(path))
}

pub fn parse_config_str(text: &str) -> Result<BenchConfig, BenchError> {
    parse_config_named(text, "<config>")
}

fn parse_config_named(text: &str, name: &str) -> Result<BenchConfig, BenchError> {
    let mut cfg = BenchConfig::default();
    let mut seen = HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| BenchError::Parse {
            path: name.to_string(),
            line: lineno + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        cfg.set(key, value).map_err(err)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("cannot parse `{value}` for `{key}`"))
}

impl BenchConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "nx" => self.nx = num(key, value)?,
            "ny" => self.ny = num(key, value)?,
            "xmin" => self.bounds[0] = num(key, value)?,
            "xmax" => self.bounds[1] = num(key, value)?,
            "ymin" => self.bounds[2] = num(key, value)?,
            "ymax" => self.bounds[3] = num(key, value)?,
            "eps_q1" => self.eps_quadrants[0] = num(key, value)?,
            "eps_q2" => self.eps_quadrants[1] = num(key, value)?,
            "eps_q3" => self.eps_quadrants[2] = num(key, value)?,
            "eps_q4" => self.eps_quadrants[3] = num(key, value)?,
            "k" => self.k = num(key, value)?,
            "max_iter" => self.max_iter = num(key, value)?,
            "tol_residual" => self.tol_residual = num(key, value)?,
            "tol_step" => self.tol_step = num(key, value)?,
            "fixed_eta" => self.fixed_eta = num(key, value)?,
            "forcing_floor" => self.forcing_floor = num(key, value)?,
            "forcing_stride" => self.forcing_stride = num(key, value)?,
            "strategies" => {
                let mut list = Vec::new();
                for item in value.split(',').map(str::trim) {
                    let kind = StrategyKind::parse(item)
                        .ok_or_else(|| format!("unknown strategy `{item}` (expected fixed or adaptive)"))?;
                    if list.contains(&kind) {
                        return Err(format!("strategy `{item}` listed twice"));
                    }
                    list.push(kind);
                }
                self.strategies = list;
            }
            "out_dir" => self.out_dir = PathBuf::from(value),
            "oracle" => self.oracle = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "initial_guess" => {
                self.initial_guess = match value {
                    "zero" => InitialGuess::Zero,
                    "boundary_blend" => InitialGuess::BoundaryBlend,
                    _ => {
                        return Err(format!(
                            "unknown initial_guess `{value}` (expected zero or boundary_blend)"
                        ))
                    }
                }
            }
            "inner_tol_mode" => {
                self.inner_tol_mode = match value {
                    "relative" => ToleranceMode::Relative,
                    "absolute" => ToleranceMode::Absolute,
                    _ => {
                        return Err(format!(
                            "unknown inner_tol_mode `{value}` (expected relative or absolute)"
                        ))
                    }
                }
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.nx == 0 {
            return Err(BenchError::invalid("nx", "must be at least 1"));
        }
        if self.ny == 0 {
            return Err(BenchError::invalid("ny", "must be at least 1"));
        }
        let [xmin, xmax, ymin, ymax] = self.bounds;
        if !(xmin.is_finite() && xmax.is_finite() && xmax > xmin) {
            return Err(BenchError::invalid(
                "xmax",
                format!("need xmin < xmax, got [{xmin}, {xmax}]"),
            ));
        }
        if !(ymin.is_finite() && ymax.is_finite() && ymax > ymin) {
            return Err(BenchError::invalid(
                "ymax",
                format!("need ymin < ymax, got [{ymin}, {ymax}]"),
            ));
        }
        for (q, eps) in self.eps_quadrants.iter().enumerate() {
            if !(eps.is_finite() && *eps > 0.0) {
                let key = ["eps_q1", "eps_q2", "eps_q3", "eps_q4"][q];
                return Err(BenchError::invalid(key, format!("must be positive, got {eps}")));
            }
        }
        if !(self.k.is_finite() && self.k >= 0.0) {
            return Err(BenchError::invalid("k", format!("must be nonnegative, got {}", self.k)));
        }
        if self.max_iter == 0 {
            return Err(BenchError::invalid("max_iter", "must be at least 1"));
        }
        for (key, v) in [("tol_residual", self.tol_residual), ("tol_step", self.tol_step)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(BenchError::invalid(key, format!("must be positive, got {v}")));
            }
        }
        for (key, v) in [("fixed_eta", self.fixed_eta), ("forcing_floor", self.forcing_floor)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(BenchError::invalid(key, format!("must lie in (0, 1), got {v}")));
            }
        }
        if self.forcing_stride == 0 {
            return Err(BenchError::invalid("forcing_stride", "must be at least 1"));
        }
        if self.strategies.is_empty() {
            return Err(BenchError::invalid("strategies", "at least one strategy required"));
        }
        if self.oracle && self.cells() > ORACLE_MAX_CELLS {
            return Err(BenchError::invalid(
                "oracle",
                format!(
                    "dense oracle limited to {ORACLE_MAX_CELLS} cells, grid has {}",
                    self.cells()
                ),
            ));
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.nx.saturating_mul(self.ny)
    }

    pub fn grid(&self) -> Result<Grid64, BenchError> {
        Grid64::new(self.nx, self.ny, self.bounds).map_err(|e| BenchError::invalid("grid", e.to_string()))
    }

    pub fn problem(&self) -> Result<ProblemSpec64, BenchError> {
        ProblemSpec64::new(self.eps_quadrants, self.k).map_err(|e| BenchError::invalid("problem", e.to_string()))
    }

    pub fn newton(&self) -> NewtonConfig<f64> {
        NewtonConfig {
            max_iter: self.max_iter,
            tol_residual: self.tol_residual,
            tol_step: self.tol_step,
            initial_guess: self.initial_guess,
            inner_tol_mode: self.inner_tol_mode,
            inner_max_iter: None,
        }
    }

    pub fn strategy(&self, kind: StrategyKind) -> ForcingStrategy<f64> {
        match kind {
            StrategyKind::Fixed => ForcingStrategy::Fixed(self.fixed_eta),
            StrategyKind::Adaptive => ForcingStrategy::PowerOfTen {
                floor: self.forcing_floor,
                stride: self.forcing_stride,
            },
        }
    }

    /// The config in the same `key = value` format `parse_config` reads.
    pub fn to_config_string(&self) -> String {
        let [xmin, xmax, ymin, ymax] = self.bounds;
        let [e1, e2, e3, e4] = self.eps_quadrants;
        let strategies: Vec<&str> = self.strategies.iter().map(|s| s.name()).collect();
        let guess = match self.initial_guess {
            InitialGuess::Zero => "zero",
            InitialGuess::BoundaryBlend => "boundary_blend",
        };
        let mode = match self.inner_tol_mode {
            ToleranceMode::Relative => "relative",
            ToleranceMode::Absolute => "absolute",
        };
        let lines = [
            format!("nx = {}", self.nx),
            format!("ny = {}", self.ny),
            format!("xmin = {xmin:?}"),
            format!("xmax = {xmax:?}"),
            format!("ymin = {ymin:?}"),
            format!("ymax = {ymax:?}"),
            format!("eps_q1 = {e1:?}"),
            format!("eps_q2 = {e2:?}"),
            format!("eps_q3 = {e3:?}"),
            format!("eps_q4 = {e4:?}"),
            format!("k = {:?}", self.k),
            format!("max_iter = {}", self.max_iter),
            format!("tol_residual = {:e}", self.tol_residual),
            format!("tol_step = {:e}", self.tol_step),
            format!("fixed_eta = {:e}", self.fixed_eta),
            format!("forcing_floor = {:e}", self.forcing_floor),
            format!("forcing_stride = {}", self.forcing_stride),
            format!("strategies = {}", strategies.join(",")),
            format!("out_dir = {}", self.out_dir.display()),
            format!("oracle = {}", self.oracle),
            format!("seed = {}", self.seed),
            format!("initial_guess = {guess}"),
            format!("inner_tol_mode = {mode}"),
        ];
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}
