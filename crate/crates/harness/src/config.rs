//! Experiment configuration, read from TOML.
//!
//! ```toml
//! [game]
//! n = 20
//! L = 10
//! seed = 0
//! cap = 500.0
//!
//! [topology]
//! kind = "linear"
//!
//! [solver]
//! beta = 0.9
//! # alpha = 0.1        # omitted: tuned by grid search
//! schedule = "fixed"   # or "diminishing"
//! max_iters = 200
//! gap_tolerance = 0.0
//!
//! [output]
//! path = "trace.csv"
//! ```
//!
//! Every key is optional; missing keys take the defaults shown. The remaining
//! tables are `[tuner]`, `[init]` and `[reference]`.

use std::path::{Path, PathBuf};

use nag_core::CournotRanges;
use nag_network::TopologyKind;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub game: GameConfig,
    pub topology: TopologyConfig,
    pub solver: SolverSettings,
    pub tuner: TunerConfig,
    pub init: InitConfig,
    pub reference: ReferenceConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameConfig {
    pub n: usize,
    #[serde(rename = "L")]
    pub locations: usize,
    pub seed: u64,
    pub cap: f64,
    pub linear_cost_range: [f64; 2],
    pub quadratic_cost_range: [f64; 2],
    pub price_intercept_range: [f64; 2],
}

impl Default for GameConfig {
    fn default() -> Self {
        let r = CournotRanges::default();
        Self {
            n: 20,
            locations: 10,
            seed: 0,
            cap: 500.0,
            linear_cost_range: r.linear_cost.into(),
            quadratic_cost_range: r.quadratic_cost.into(),
            price_intercept_range: r.price_intercept.into(),
        }
    }
}

impl GameConfig {
    pub fn ranges(&self) -> CournotRanges {
        CournotRanges {
            linear_cost: self.linear_cost_range.into(),
            quadratic_cost: self.quadratic_cost_range.into(),
            price_intercept: self.price_intercept_range.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologyConfig {
    pub kind: String,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        Self {
            kind: TopologyKind::Linear.name().to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// Constant `α` with relaxation `β`.
    #[default]
    Fixed,
    /// `α_k = alpha / (k + 1)`; `alpha` plays the role of `alpha0`.
    Diminishing,
}

impl Schedule {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fixed => "fixed",
            Self::Diminishing => "diminishing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    /// Tuned over the tuner's grid when absent.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub schedule: Schedule,
    pub max_iters: usize,
    pub gap_tolerance: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            alpha: None,
            beta: 0.9,
            schedule: Schedule::Fixed,
            max_iters: 200,
            gap_tolerance: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TunerConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Search interval for `alpha0` of the diminishing schedule.
    pub baseline_alpha_min: f64,
    pub baseline_alpha_max: f64,
    pub grid_size: usize,
    pub refinement_rounds: usize,
    /// The tuning objective is the gap at this iteration.
    pub horizon: usize,
    pub betas: Vec<f64>,
}

impl Default for TunerConfig {
    fn default() -> Self {
        Self {
            alpha_min: 1e-3,
            alpha_max: 1.0,
            baseline_alpha_min: 1e-2,
            baseline_alpha_max: 10.0,
            grid_size: 25,
            refinement_rounds: 2,
            horizon: 200,
            betas: vec![0.8, 0.85, 0.9, 0.95, 1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    /// Projection of the zero vector onto each action set.
    #[default]
    Zero,
    /// Uniform feasible point drawn from `init.seed`.
    Random,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitConfig {
    pub kind: InitKind,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceConfig {
    pub tolerance: f64,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        Self {
            tolerance: nag_oracle::REFERENCE_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: PathBuf::from("trace.csv"),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub topology: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub iters: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.game.seed = seed;
        }
        if let Some(kind) = &o.topology {
            self.topology.kind = kind.clone();
        }
        if let Some(alpha) = o.alpha {
            self.solver.alpha = Some(alpha);
        }
        if let Some(beta) = o.beta {
            self.solver.beta = beta;
        }
        if let Some(iters) = o.iters {
            self.solver.max_iters = iters;
        }
        if let Some(out) = &o.out {
            self.output.path = out.clone();
        }
    }

    pub fn topology_kind(&self) -> Result<TopologyKind> {
        Ok(self.topology.kind.parse::<TopologyKind>()?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        let g = &self.game;
        if g.n < 2 {
            return bad(format!("game.n must be at least 2, got {}", g.n));
        }
        if g.locations < 1 {
            return bad("game.L must be at least 1".into());
        }
        if !(g.cap > 0.0 && g.cap.is_finite()) {
            return bad(format!("game.cap must be positive, got {}", g.cap));
        }
        g.ranges().validate()?;
        self.topology_kind()?;

        let s = &self.solver;
        if !(s.beta > 0.0 && s.beta <= 1.0) {
            return bad(format!("solver.beta must lie in (0, 1], got {}", s.beta));
        }
        if let Some(alpha) = s.alpha {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return bad(format!("solver.alpha must be positive, got {alpha}"));
            }
        }
        if !(s.gap_tolerance >= 0.0) {
            return bad(format!(
                "solver.gap_tolerance must be nonnegative, got {}",
                s.gap_tolerance
            ));
        }

        let t = &self.tuner;
        for (name, lo, hi) in [
            ("alpha", t.alpha_min, t.alpha_max),
            ("baseline_alpha", t.baseline_alpha_min, t.baseline_alpha_max),
        ] {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return bad(format!(
                    "tuner.{name}_min/max must satisfy 0 < min < max, got [{lo}, {hi}]"
                ));
            }
        }
        if t.grid_size < 3 {
            return bad(format!(
                "tuner.grid_size must be at least 3, got {}",
                t.grid_size
            ));
        }
        if t.horizon == 0 {
            return bad("tuner.horizon must be positive".into());
        }
        check_betas(&t.betas)?;

        if !(self.reference.tolerance > 0.0) {
            return bad(format!(
                "reference.tolerance must be positive, got {}",
                self.reference.tolerance
            ));
        }
        let path = &self.output.path;
        if path.as_os_str().is_empty() {
            return bad("output.path is empty".into());
        }
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            if !parent.is_dir() {
                return bad(format!(
                    "output directory {} does not exist",
                    parent.display()
                ));
            }
        }
        Ok(())
    }

    /// `key: value` pairs echoed into trace headers.
    pub fn echo(&self) -> Vec<(String, String)> {
        let g = &self.game;
        let s = &self.solver;
        let range = |r: [f64; 2]| format!("[{}, {}]", fmt_float(r[0]), fmt_float(r[1]));
        vec![
            ("game.n".into(), g.n.to_string()),
            ("game.L".into(), g.locations.to_string()),
            ("game.seed".into(), g.seed.to_string()),
            ("game.cap".into(), fmt_float(g.cap)),
            ("game.linear_cost_range".into(), range(g.linear_cost_range)),
            (
                "game.quadratic_cost_range".into(),
                range(g.quadratic_cost_range),
            ),
            (
                "game.price_intercept_range".into(),
                range(g.price_intercept_range),
            ),
            ("topology.kind".into(), self.topology.kind.clone()),
            (
                "solver.alpha".into(),
                s.alpha.map_or_else(|| "tuned".to_string(), fmt_float),
            ),
            ("solver.beta".into(), fmt_float(s.beta)),
            ("solver.schedule".into(), s.schedule.name().into()),
            ("solver.max_iters".into(), s.max_iters.to_string()),
            ("solver.gap_tolerance".into(), fmt_float(s.gap_tolerance)),
            (
                "init.kind".into(),
                format!("{:?}", self.init.kind).to_lowercase(),
            ),
            ("init.seed".into(), self.init.seed.to_string()),
            (
                "reference.tolerance".into(),
                fmt_float(self.reference.tolerance),
            ),
        ]
    }

    /// A sibling of `output.path` with `suffix` appended to the file stem.
    pub fn derived_path(&self, suffix: &str) -> PathBuf {
        let path = &self.output.path;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let ext = path.extension().map(|e| e.to_string_lossy().into_owned());
        let name = match ext {
            Some(ext) => format!("{stem}-{suffix}.{ext}"),
            None => format!("{stem}-{suffix}"),
        };
        path.with_file_name(name)
    }
}

pub fn check_betas(betas: &[f64]) -> Result<()> {
    if betas.is_empty() {
        return Err(HarnessError::Config("beta list is empty".into()));
    }
    if let Some(b) = betas.iter().find(|&&b| !(b > 0.0 && b <= 1.0)) {
        return Err(HarnessError::Config(format!(
            "every beta must lie in (0, 1], got {b}"
        )));
    }
    Ok(())
}

/// Scientific notation with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}
