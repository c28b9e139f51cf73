use crate::state::SolverState;

/// One row of a convergence trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    /// `‖x^k − x*‖`, when a reference equilibrium is known.
    pub gap: Option<f64>,
    /// `‖V^k − 1(x̄^k)ᵀ‖_F`.
    pub consensus_error: f64,
    /// `‖X^k − X*‖_F²`, when a reference equilibrium is known.
    pub zeta1: Option<f64>,
    /// `‖V^k − 1(x̄^k)ᵀ‖_F²`.
    pub zeta2: f64,
    /// Natural residual, recorded only when no reference is supplied.
    pub residual: Option<f64>,
}

impl TraceRecord {
    /// `ζ^k`, when both components are available.
    pub fn zeta(&self) -> Option<[f64; 2]> {
        self.zeta1.map(|z1| [z1, self.zeta2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Gap (or residual) reached the tolerance.
    Converged,
    /// Ran `max_iters` steps without meeting the tolerance.
    MaxIterations,
    /// Gap grew by more than `DIVERGENCE_FACTOR` over its running minimum,
    /// or became non-finite.
    Diverged,
}

impl RunStatus {
    pub fn name(self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxIterations => "max_iterations",
            Self::Diverged => "diverged",
        }
    }
}

/// Per-iteration history of a solver run. Holds `iterations + 1` records.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub records: Vec<TraceRecord>,
    /// `α_k` used for the step from iterate `k` to `k + 1`.
    pub step_sizes: Vec<f64>,
    pub status: RunStatus,
    pub final_state: SolverState,
}

impl ConvergenceTrace {
    pub fn iterations(&self) -> usize {
        self.records.len() - 1
    }

    pub fn last(&self) -> &TraceRecord {
        self.records
            .last()
            .expect("trace always holds the initial record")
    }

    pub fn final_gap(&self) -> Option<f64> {
        self.last().gap
    }

    /// Gap at iteration `k`, if recorded.
    pub fn gap_at(&self, k: usize) -> Option<f64> {
        self.records.get(k).and_then(|r| r.gap)
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.gap).collect()
    }
}
