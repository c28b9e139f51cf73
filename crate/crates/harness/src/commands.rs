//! The `run`, `compare`, `beta-sweep`, `bounds` and `spectral` commands.
//!
//! Each command returns a report whose `Display` form is what the CLI prints.

use std::fmt;
use std::path::PathBuf;

use nag_core::CournotParams;
use nag_network::{build_topology, is_connected, TopologyKind, WeightMatrix};
use nag_solver::{prop2_bounds, theory_constants, ConvergenceTrace, RunStatus};
use rayon::prelude::*;

use crate::config::{check_betas, fmt_float, ExperimentConfig, Schedule};
use crate::error::{HarnessError, Result};
use crate::experiment::Experiment;
use crate::fit::tail_rate;
use crate::trace_file::TraceFile;

/// Iterations covered by the summary's rate fit.
pub const FIT_SPAN: usize = 150;

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub method: &'static str,
    pub topology: TopologyKind,
    pub path: PathBuf,
    pub alpha: f64,
    pub alpha_tuned: bool,
    pub beta: f64,
    pub status: RunStatus,
    pub iterations: usize,
    pub final_gap: f64,
    /// Geometric factor over the last [`FIT_SPAN`] iterations.
    pub rate: Option<f64>,
    /// `ρ(M)` for fixed steps.
    pub rho: Option<f64>,
    pub trace: TraceFile,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} on {} network -> {}",
            self.method,
            self.topology,
            self.path.display()
        )?;
        let how = if self.alpha_tuned { " (tuned)" } else { "" };
        writeln!(f, "  alpha {:.6e}{how}, beta {}", self.alpha, self.beta)?;
        writeln!(
            f,
            "  status {} after {} iterations",
            self.status.name(),
            self.iterations
        )?;
        writeln!(f, "  final gap {:.6e}", self.final_gap)?;
        match self.rate {
            Some(r) => writeln!(f, "  fitted rate (last {FIT_SPAN} iterations) {r:.6}")?,
            None => writeln!(f, "  fitted rate unavailable")?,
        }
        if let Some(rho) = self.rho {
            let verdict = if rho < 1.0 {
                "certified"
            } else {
                "outside the certified region"
            };
            writeln!(f, "  certificate rho(M) {rho:.12} ({verdict})")?;
        }
        Ok(())
    }
}

/// Runs the configured solver and writes `output.path`.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    let exp = Experiment::build(config)?;
    let report = run_experiment(&exp, config.output.path.clone())?;
    fail_on_divergence(&report)?;
    Ok(report)
}

/// Runs the configured solver on a prepared experiment and writes `path`.
pub fn run_experiment(exp: &Experiment, path: PathBuf) -> Result<RunReport> {
    let s = &exp.config.solver;
    match s.schedule {
        Schedule::Fixed => {
            let (alpha, tuned) = match s.alpha {
                Some(a) => (a, false),
                None => (exp.tune_fixed(s.beta)?.alpha, true),
            };
            let trace = exp.run_fixed(alpha, s.beta, s.max_iters)?;
            finish(exp, "algorithm1", trace, alpha, tuned, s.beta, path)
        }
        Schedule::Diminishing => {
            let (alpha0, tuned) = match s.alpha {
                Some(a) => (a, false),
                None => (exp.tune_diminishing(s.beta)?.alpha, true),
            };
            let trace = exp.run_diminishing(alpha0, s.beta, s.max_iters)?;
            finish(exp, "diminishing", trace, alpha0, tuned, s.beta, path)
        }
    }
}

fn finish(
    exp: &Experiment,
    method: &'static str,
    trace: ConvergenceTrace,
    alpha: f64,
    alpha_tuned: bool,
    beta: f64,
    path: PathBuf,
) -> Result<RunReport> {
    let theory = if method == "algorithm1" {
        exp.theory(alpha, beta)
    } else {
        None
    };
    let mut header = exp.header();
    header.extend([
        ("run.method".to_string(), method.to_string()),
        ("run.alpha".to_string(), fmt_float(alpha)),
        ("run.alpha_tuned".to_string(), alpha_tuned.to_string()),
        ("run.beta".to_string(), fmt_float(beta)),
        ("run.status".to_string(), trace.status.name().to_string()),
        (
            "theory.rho".to_string(),
            theory.map_or_else(|| "n/a".to_string(), |t| fmt_float(t.rho)),
        ),
        (
            "theory.rate_bound".to_string(),
            theory.map_or_else(|| "n/a".to_string(), |t| fmt_float(t.rate_bound)),
        ),
    ]);
    let file = TraceFile::from_trace(header, &trace);
    file.write(&path)?;
    let gaps = trace.gaps();
    Ok(RunReport {
        method,
        topology: exp.kind,
        path,
        alpha,
        alpha_tuned,
        beta,
        status: trace.status,
        iterations: trace.iterations(),
        final_gap: trace.final_gap().unwrap_or(f64::NAN),
        rate: tail_rate(&gaps, FIT_SPAN, exp.gap_floor()),
        rho: theory.map(|t| t.rho),
        trace: file,
    })
}

fn fail_on_divergence(report: &RunReport) -> Result<()> {
    if report.status == RunStatus::Diverged {
        return Err(HarnessError::Numerical(format!(
            "{} diverged after {} iterations (trace written to {})",
            report.method,
            report.iterations,
            report.path.display()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub algorithm1: RunReport,
    pub baseline: RunReport,
    pub summary_path: PathBuf,
}

impl CompareReport {
    /// Baseline final gap over Algorithm 1's.
    pub fn ratio(&self) -> f64 {
        self.baseline.final_gap / self.algorithm1.final_gap
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.algorithm1)?;
        write!(f, "{}", self.baseline)?;
        writeln!(f, "baseline / algorithm1 final gap: {:.3e}", self.ratio())?;
        writeln!(f, "summary -> {}", self.summary_path.display())
    }
}

/// Fixed-step Algorithm 1 against the diminishing-step baseline on one
/// instance, network and start point.
pub fn compare(config: &ExperimentConfig) -> Result<CompareReport> {
    let exp = Experiment::build(config)?;
    compare_experiment(&exp)
}

pub fn compare_experiment(exp: &Experiment) -> Result<CompareReport> {
    let cfg = &exp.config;
    let s = &cfg.solver;
    let (alpha, tuned) = match s.alpha {
        Some(a) => (a, false),
        None => (exp.tune_fixed(s.beta)?.alpha, true),
    };
    let alpha0 = exp.tune_baseline()?.alpha;

    let fixed = exp.run_fixed(alpha, s.beta, s.max_iters)?;
    let algorithm1 = finish(
        exp,
        "algorithm1",
        fixed,
        alpha,
        tuned,
        s.beta,
        cfg.derived_path("algorithm1"),
    )?;
    let diminishing = exp.run_baseline(alpha0, s.max_iters)?;
    let baseline = finish(
        exp,
        "baseline",
        diminishing,
        alpha0,
        true,
        1.0,
        cfg.derived_path("baseline"),
    )?;
    fail_on_divergence(&algorithm1)?;
    fail_on_divergence(&baseline)?;

    let summary_path = cfg.derived_path("compare");
    let mut text = String::new();
    for (k, v) in exp.header() {
        text.push_str(&format!("# {k}: {v}\n"));
    }
    text.push_str("method,alpha,beta,iterations,final_gap,fitted_rate\n");
    for r in [&algorithm1, &baseline] {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.method,
            fmt_float(r.alpha),
            fmt_float(r.beta),
            r.iterations,
            fmt_float(r.final_gap),
            fmt_float(r.rate.unwrap_or(f64::NAN)),
        ));
    }
    std::fs::write(&summary_path, text).map_err(|e| HarnessError::io(&summary_path, e))?;
    Ok(CompareReport {
        algorithm1,
        baseline,
        summary_path,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub alpha: f64,
    /// Gap at the tuner horizon.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub horizon: usize,
    pub rows: Vec<SweepRow>,
    pub path: PathBuf,
}

impl SweepReport {
    /// Row with the smallest gap.
    pub fn best(&self) -> &SweepRow {
        let mut best = &self.rows[0];
        for r in &self.rows {
            if r.gap < best.gap {
                best = r;
            }
        }
        best
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>8}  {:>14}  {:>14}",
            "beta",
            "alpha",
            format!("gap@{}", self.horizon)
        )?;
        for r in &self.rows {
            writeln!(f, "{:>8}  {:>14.6e}  {:>14.6e}", r.beta, r.alpha, r.gap)?;
        }
        let b = self.best();
        writeln!(
            f,
            "best beta {} (alpha {:.6e}, gap {:.6e})",
            b.beta, b.alpha, b.gap
        )?;
        writeln!(f, "table -> {}", self.path.display())
    }
}

/// For each `β`, tunes `α` to minimize the gap at the tuner horizon.
pub fn beta_sweep(config: &ExperimentConfig, betas: &[f64]) -> Result<SweepReport> {
    check_betas(betas)?;
    let exp = Experiment::build(config)?;
    beta_sweep_experiment(&exp, betas)
}

pub fn beta_sweep_experiment(exp: &Experiment, betas: &[f64]) -> Result<SweepReport> {
    check_betas(betas)?;
    let rows = betas
        .par_iter()
        .map(|&beta| {
            let t = exp.tune_fixed(beta)?;
            Ok(SweepRow {
                beta,
                alpha: t.alpha,
                gap: t.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let horizon = exp.config.tuner.horizon;
    let path = exp.config.derived_path("beta-sweep");
    let mut text = String::new();
    for (k, v) in exp.header() {
        text.push_str(&format!("# {k}: {v}\n"));
    }
    text.push_str(&format!("# tuner.horizon: {horizon}\n"));
    text.push_str("beta,alpha,gap\n");
    for r in &rows {
        text.push_str(&format!(
            "{},{},{}\n",
            fmt_float(r.beta),
            fmt_float(r.alpha),
            fmt_float(r.gap)
        ));
    }
    std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
    Ok(SweepReport {
        horizon,
        rows,
        path,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub beta: f64,
    pub alpha_max: f64,
    pub rho: f64,
    pub rate_bound: f64,
}

impl BoundsRow {
    pub fn certified(&self) -> bool {
        self.rho < 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub mu: f64,
    pub lipschitz: f64,
    pub sigma: f64,
    pub beta_max: f64,
    pub unit_beta_certified: bool,
    pub rows: Vec<BoundsRow>,
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "mu {:.6e}, L {:.6e}, sigma {:.6}",
            self.mu, self.lipschitz, self.sigma
        )?;
        writeln!(f, "beta_max {:.6e}", self.beta_max)?;
        writeln!(f, "rho and rate_bound evaluated at alpha = alpha_max(beta)")?;
        writeln!(
            f,
            "{:>14}  {:>14}  {:>20}  {:>20}  certified",
            "beta", "alpha_max", "rho", "rate_bound"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>14.6e}  {:>14.6e}  {:>20.16}  {:>20.16}  {}",
                r.beta,
                r.alpha_max,
                r.rho,
                r.rate_bound,
                if r.certified() { "yes" } else { "no" }
            )?;
        }
        if self.unit_beta_certified {
            writeln!(f, "beta = 1 is certified for 0 < alpha < alpha_max(1)")
        } else {
            writeln!(
                f,
                "beta = 1 is not certified: choose beta <= {:.6e}",
                self.beta_max
            )
        }
    }
}

/// Fractions of `beta_max` sampled by [`bounds`].
pub const BETA_FRACTIONS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

/// Certified step sizes for `(μ, L, σ)`; `ρ` and the rate bound are evaluated
/// at `(β, alpha_max(β))`.
pub fn bounds(mu: f64, lipschitz: f64, sigma: f64) -> Result<BoundsReport> {
    let region = prop2_bounds(mu, lipschitz, sigma)?;
    let mut betas: Vec<f64> = BETA_FRACTIONS.iter().map(|f| f * region.beta_max).collect();
    if region.beta_max >= 1.0 {
        betas.push(1.0);
    }
    let rows = betas
        .into_iter()
        .map(|beta| {
            let alpha_max = region.alpha_max(beta);
            let t = theory_constants(alpha_max, beta, mu, lipschitz, sigma)?;
            Ok(BoundsRow {
                beta,
                alpha_max,
                rho: t.rho,
                rate_bound: t.rate_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundsReport {
        mu,
        lipschitz,
        sigma,
        beta_max: region.beta_max,
        unit_beta_certified: region.unit_beta_certified(),
        rows,
    })
}

/// `(μ, L, σ)` of the configured game and network.
pub fn derived_constants(config: &ExperimentConfig) -> Result<(f64, f64, f64)> {
    config.validate()?;
    let g = &config.game;
    let game = CournotParams::random_in(g.n, g.locations, g.seed, g.cap, &g.ranges())?.game()?;
    let c = game.monotonicity_constants()?;
    let w = WeightMatrix::from_edges(&build_topology(config.topology_kind()?, g.n)?)?;
    Ok((c.mu, c.lipschitz, w.sigma()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub kind: TopologyKind,
    pub nodes: usize,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub connected: bool,
    /// Off-diagonal weight `0.5 / max degree`.
    pub weight: f64,
    pub sigma: f64,
}

impl fmt::Display for SpectralReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "topology {} with {} nodes, {} edges",
            self.kind, self.nodes, self.edges
        )?;
        writeln!(
            f,
            "degree {}..{}, connected: {}",
            self.min_degree, self.max_degree, self.connected
        )?;
        writeln!(f, "edge weight {:.6e}", self.weight)?;
        writeln!(f, "sigma {}", fmt_float(self.sigma))
    }
}

pub fn spectral(kind: TopologyKind, n: usize) -> Result<SpectralReport> {
    let edges = build_topology(kind, n)?;
    let degrees = edges.degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let w = WeightMatrix::from_edges(&edges)?;
    Ok(SpectralReport {
        kind,
        nodes: n,
        edges: edges.num_edges(),
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree,
        connected: is_connected(&edges),
        weight: 0.5 / max_degree as f64,
        sigma: w.sigma(),
    })
}
