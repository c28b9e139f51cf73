//! A configured instance: game, network, reference equilibrium and start point.

use nag_core::{CournotParams, GameInstance, MonotonicityConstants, UniformStream};
use nag_network::{build_topology, TopologyKind, WeightMatrix};
use nag_oracle::{solve_reference, ReferenceSolution};
use nag_solver::{
    run_algorithm1, run_diminishing_baseline, theory_constants, ConvergenceTrace, RunStatus,
    SolverConfig, TheoryConstants,
};

use crate::config::{fmt_float, ExperimentConfig, InitKind};
use crate::error::Result;
use crate::fit::FLOOR_FACTOR;
use crate::tuner::{tune_step, TuneResult};

#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub kind: TopologyKind,
    pub game: GameInstance,
    pub weights: WeightMatrix,
    pub constants: MonotonicityConstants,
    pub reference: ReferenceSolution,
    pub x0: Vec<f64>,
}

impl Experiment {
    pub fn build(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let g = &config.game;
        let game =
            CournotParams::random_in(g.n, g.locations, g.seed, g.cap, &g.ranges())?.game()?;
        let constants = game.monotonicity_constants()?;
        let reference = solve_reference(&game, config.reference.tolerance)?;
        let x0 = match config.init.kind {
            InitKind::Zero => game.project(&vec![0.0; game.stacked_len()])?,
            InitKind::Random => game.random_feasible(&mut UniformStream::new(config.init.seed))?,
        };
        let kind = config.topology_kind()?;
        let weights = WeightMatrix::from_edges(&build_topology(kind, g.n)?)?;
        Ok(Self {
            config: config.clone(),
            kind,
            game,
            weights,
            constants,
            reference,
            x0,
        })
    }

    /// The same game and start point on another network.
    pub fn with_topology(&self, kind: TopologyKind) -> Result<Self> {
        let weights = WeightMatrix::from_edges(&build_topology(kind, self.game.num_players())?)?;
        let mut config = self.config.clone();
        config.topology.kind = kind.name().to_string();
        Ok(Self {
            config,
            kind,
            weights,
            ..self.clone()
        })
    }

    pub fn sigma(&self) -> f64 {
        self.weights.sigma()
    }

    /// Gaps at or below this are dominated by the reference error.
    pub fn gap_floor(&self) -> f64 {
        FLOOR_FACTOR * self.reference.error_bound
    }

    /// The linear-rate certificate for fixed steps, when defined.
    pub fn theory(&self, alpha: f64, beta: f64) -> Option<TheoryConstants> {
        theory_constants(
            alpha,
            beta,
            self.constants.mu,
            self.constants.lipschitz,
            self.sigma(),
        )
        .ok()
    }

    pub fn run_fixed(&self, alpha: f64, beta: f64, iters: usize) -> Result<ConvergenceTrace> {
        let config = SolverConfig::fixed(alpha, beta, iters)
            .with_gap_tolerance(self.config.solver.gap_tolerance);
        Ok(run_algorithm1(
            &self.game,
            &self.weights,
            &config,
            &self.x0,
            Some(&self.reference.x_star),
        )?)
    }

    /// `α_k = alpha0/(k + 1)` with `β = 1`.
    pub fn run_baseline(&self, alpha0: f64, iters: usize) -> Result<ConvergenceTrace> {
        Ok(run_diminishing_baseline(
            &self.game,
            &self.weights,
            alpha0,
            iters,
            &self.x0,
            Some(&self.reference.x_star),
        )?)
    }

    /// Diminishing schedule with an arbitrary `β`.
    pub fn run_diminishing(
        &self,
        alpha0: f64,
        beta: f64,
        iters: usize,
    ) -> Result<ConvergenceTrace> {
        let config = SolverConfig {
            beta,
            ..SolverConfig::diminishing(alpha0, iters)
                .with_gap_tolerance(self.config.solver.gap_tolerance)
        };
        Ok(run_algorithm1(
            &self.game,
            &self.weights,
            &config,
            &self.x0,
            Some(&self.reference.x_star),
        )?)
    }

    /// `α` minimizing the gap at the tuner horizon for fixed `β`.
    pub fn tune_fixed(&self, beta: f64) -> Result<TuneResult> {
        let t = &self.config.tuner;
        tune_step(
            t.alpha_min,
            t.alpha_max,
            t.grid_size,
            t.refinement_rounds,
            |alpha| horizon_gap(self.run_fixed(alpha, beta, t.horizon)),
        )
    }

    /// `alpha0` minimizing the diminishing baseline's gap at the tuner horizon.
    pub fn tune_baseline(&self) -> Result<TuneResult> {
        let t = &self.config.tuner;
        tune_step(
            t.baseline_alpha_min,
            t.baseline_alpha_max,
            t.grid_size,
            t.refinement_rounds,
            |a0| horizon_gap(self.run_baseline(a0, t.horizon)),
        )
    }

    /// Like [`Experiment::tune_baseline`] with relaxation `beta`.
    pub fn tune_diminishing(&self, beta: f64) -> Result<TuneResult> {
        let t = &self.config.tuner;
        tune_step(
            t.baseline_alpha_min,
            t.baseline_alpha_max,
            t.grid_size,
            t.refinement_rounds,
            |a0| horizon_gap(self.run_diminishing(a0, beta, t.horizon)),
        )
    }

    /// Instance-level header lines shared by every trace of this experiment.
    pub fn header(&self) -> Vec<(String, String)> {
        let mut h = self.config.echo();
        h.extend([
            ("topology.sigma".to_string(), fmt_float(self.sigma())),
            ("game.mu".to_string(), fmt_float(self.constants.mu)),
            (
                "game.lipschitz".to_string(),
                fmt_float(self.constants.lipschitz),
            ),
            (
                "reference.residual".to_string(),
                fmt_float(self.reference.residual),
            ),
            (
                "reference.error_bound".to_string(),
                fmt_float(self.reference.error_bound),
            ),
        ]);
        h
    }
}

fn horizon_gap(trace: Result<ConvergenceTrace>) -> f64 {
    match trace {
        Ok(t) if t.status != RunStatus::Diverged => t.final_gap().unwrap_or(f64::INFINITY),
        _ => f64::INFINITY,
    }
}
