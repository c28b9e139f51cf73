//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nag_core::{build_cournot, CournotParams, FeasibleSet, GameInstance, UniformStream};
use nag_harness::commands::{beta_sweep_experiment, run_experiment};
use nag_harness::fit::{geometric_rate, monotone_after};
use nag_harness::{Experiment, ExperimentConfig};
use nag_network::{build_topology, TopologyKind, WeightMatrix};
use nag_oracle::brute_force_project;
use nag_solver::{prop2_bounds, run_algorithm1_with, theory_constants, SolverConfig};
use nalgebra::Matrix2;

type Outcome = Result<String, String>;

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "aggregate conservation",
            limit: Some(Duration::from_secs(10)),
            check: conservation,
        },
        Criterion {
            id: 2,
            name: "linear convergence",
            limit: Some(Duration::from_secs(30)),
            check: linear_convergence,
        },
        Criterion {
            id: 3,
            name: "topology ordering",
            limit: Some(Duration::from_secs(60)),
            check: topology_ordering,
        },
        Criterion {
            id: 4,
            name: "certificate soundness",
            limit: None,
            check: certificate,
        },
        Criterion {
            id: 5,
            name: "closed-form spectral radius",
            limit: None,
            check: closed_form_radius,
        },
        Criterion {
            id: 6,
            name: "projection oracle equivalence",
            limit: None,
            check: projection,
        },
        Criterion {
            id: 7,
            name: "gradient consistency",
            limit: None,
            check: gradient,
        },
        Criterion {
            id: 8,
            name: "consensus contraction",
            limit: None,
            check: contraction,
        },
        Criterion {
            id: 9,
            name: "baseline inferiority",
            limit: None,
            check: baseline,
        },
        Criterion {
            id: 10,
            name: "determinism",
            limit: None,
            check: determinism,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.check)();
        let elapsed = start.elapsed();
        if let (Ok(detail), Some(limit)) = (&outcome, c.limit) {
            if elapsed > limit {
                outcome = Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS  [{:>2}] {}: {detail} ({elapsed:.2?})", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL  [{:>2}] {}: {detail} ({elapsed:.2?})", c.id, c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn weights(kind: TopologyKind, n: usize) -> WeightMatrix {
    WeightMatrix::from_edges(&build_topology(kind, n).unwrap()).unwrap()
}

fn default_experiment() -> Result<Experiment, String> {
    Experiment::build(&ExperimentConfig::default()).map_err(|e| e.to_string())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn conservation() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..10u64 {
        let game = build_cournot(20, 10, seed, 500.0).map_err(|e| e.to_string())?;
        let kind = TopologyKind::ALL[seed as usize % 3];
        let w = weights(kind, 20);
        let x0 = game
            .random_feasible(&mut UniformStream::new(100 + seed))
            .map_err(|e| e.to_string())?;
        let p = game.dim();
        run_algorithm1_with(
            &game,
            &w,
            &SolverConfig::fixed(0.1, 0.9, 300),
            &x0,
            None,
            |state| {
                for (sv, sx) in state.column_sums(p) {
                    worst = worst.max((sv - sx).abs() / (1.0 + sx.abs()));
                }
            },
        )
        .map_err(|e| e.to_string())?;
    }
    ensure(worst <= 1e-8, || {
        format!("max |Σv − Σx|/(1+|Σx|) = {worst:e}")
    })?;
    Ok(format!(
        "10 instances × 300 steps, max relative deviation {worst:.2e}"
    ))
}

fn linear_convergence() -> Outcome {
    let exp = default_experiment()?;
    let sweep = beta_sweep_experiment(&exp, &exp.config.tuner.betas).map_err(|e| e.to_string())?;
    let best = *sweep.best();
    let trace = exp
        .run_fixed(best.alpha, best.beta, 200)
        .map_err(|e| e.to_string())?;
    let gaps = trace.gaps();
    let gap200 = gaps[200];
    let rate =
        geometric_rate(&gaps, 50..=200, exp.gap_floor()).ok_or("rate fit has too few points")?;
    let monotone = monotone_after(&gaps, 20);
    ensure(gap200 <= 1e-3, || format!("gap at 200 = {gap200:e}"))?;
    ensure(rate < 0.97, || format!("fitted rate {rate}"))?;
    ensure(monotone, || "gap increases after iteration 20".into())?;
    Ok(format!(
        "beta {} alpha {:.4e}: gap200 {gap200:.3e}, rate(50-200) {rate:.4}, monotone after 20",
        best.beta, best.alpha
    ))
}

fn topology_ordering() -> Outcome {
    let base = default_experiment()?;
    let mut sigmas = Vec::new();
    let mut rates = Vec::new();
    for kind in [
        TopologyKind::Complete,
        TopologyKind::Log,
        TopologyKind::Linear,
    ] {
        let exp = base.with_topology(kind).map_err(|e| e.to_string())?;
        let tuned = exp
            .tune_fixed(exp.config.solver.beta)
            .map_err(|e| e.to_string())?;
        let trace = exp
            .run_fixed(tuned.alpha, exp.config.solver.beta, 200)
            .map_err(|e| e.to_string())?;
        let rate = geometric_rate(&trace.gaps(), 50..=200, exp.gap_floor())
            .ok_or("rate fit has too few points")?;
        sigmas.push(exp.sigma());
        rates.push(rate);
    }
    ensure(sigmas[0] < sigmas[1] && sigmas[1] < sigmas[2], || {
        format!("sigma order violated: {sigmas:?}")
    })?;
    ensure(rates[0] < rates[1] && rates[1] < rates[2], || {
        format!("rate order violated: {rates:?}")
    })?;
    Ok(format!(
        "sigma complete/log/linear {:.4}/{:.4}/{:.4}, rates {:.4}/{:.4}/{:.4}",
        sigmas[0], sigmas[1], sigmas[2], rates[0], rates[1], rates[2]
    ))
}

fn certificate() -> Outcome {
    let exp = default_experiment()?;
    let c = exp.constants;
    let mut details = Vec::new();
    for kind in TopologyKind::ALL {
        let exp = exp.with_topology(kind).map_err(|e| e.to_string())?;
        let region = prop2_bounds(c.mu, c.lipschitz, exp.sigma()).map_err(|e| e.to_string())?;
        let beta = 0.5 * region.beta_max;
        let alpha = 0.5 * region.alpha_max(beta);
        let t = theory_constants(alpha, beta, c.mu, c.lipschitz, exp.sigma())
            .map_err(|e| e.to_string())?;
        ensure(t.rho < t.rate_bound && t.rate_bound < 1.0, || {
            format!("{kind}: rho {} rate_bound {}", t.rho, t.rate_bound)
        })?;
        let trace = exp.run_fixed(alpha, beta, 500).map_err(|e| e.to_string())?;
        ensure(trace.iterations() == 500, || {
            format!("{kind}: stopped after {}", trace.iterations())
        })?;
        let mut worst: f64 = 0.0;
        for pair in trace.records.windows(2) {
            let bound = t.apply(pair[0].zeta().ok_or("missing zeta")?);
            let next = pair[1].zeta().ok_or("missing zeta")?;
            for j in 0..2 {
                ensure(next[j] <= bound[j] * (1.0 + 1e-8), || {
                    format!(
                        "{kind}, k = {}: zeta {next:?} exceeds M zeta {bound:?}",
                        pair[0].iteration
                    )
                })?;
                if bound[j] > 0.0 {
                    worst = worst.max(next[j] / bound[j]);
                }
            }
        }
        details.push(format!("{kind} rho {:.9} max ratio {worst:.6}", t.rho));
    }
    Ok(details.join("; "))
}

fn closed_form_radius() -> Outcome {
    let mut rng = UniformStream::new(5);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mu = rng.uniform(0.05, 5.0);
        let l = mu * rng.uniform(0.75, 30.0);
        let sigma = rng.uniform(0.0, 0.999);
        let beta = rng.uniform(1e-3, 1.0);
        let alpha = rng.uniform(1e-3, 1.0) * mu / (4.0 * l * l);
        let t = theory_constants(alpha, beta, mu, l, sigma).map_err(|e| e.to_string())?;
        let m = Matrix2::new(t.m[0][0], t.m[0][1], t.m[1][0], t.m[1][1]);
        let eig = m
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        worst = worst.max((t.rho - eig).abs());
    }
    ensure(worst <= 1e-12, || format!("max |rho − eig| = {worst:e}"))?;
    Ok(format!("1000 tuples, max deviation {worst:.2e}"))
}

fn random_set(rng: &mut UniformStream) -> Option<FeasibleSet> {
    let dim = 2 + (rng.next_u64() % 2) as usize;
    let mut lower = Vec::with_capacity(dim);
    let mut upper = Vec::with_capacity(dim);
    for _ in 0..dim {
        let l = if rng.unit() < 0.2 {
            f64::NEG_INFINITY
        } else {
            rng.uniform(-3.0, 1.0)
        };
        let u = if rng.unit() < 0.2 {
            f64::INFINITY
        } else {
            l.max(-3.0) + rng.uniform(0.0, 4.0)
        };
        lower.push(l);
        upper.push(u);
    }
    let set = if rng.unit() < 0.2 {
        FeasibleSet::boxed(lower, upper)
    } else {
        let normal: Vec<f64> = (0..dim)
            .map(|_| {
                if rng.unit() < 0.15 {
                    0.0
                } else {
                    rng.uniform(-2.0, 2.0)
                }
            })
            .collect();
        FeasibleSet::with_hyperplane(lower, upper, normal, rng.uniform(-2.0, 2.0))
    };
    set.ok()
}

fn projection() -> Outcome {
    let mut rng = UniformStream::new(99);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    while checked < 10_000 {
        let Some(set) = random_set(&mut rng) else {
            continue;
        };
        let y: Vec<f64> = (0..set.dim()).map(|_| rng.uniform(-6.0, 6.0)).collect();
        let fast = set.project(&y).map_err(|e| e.to_string())?;
        let slow = brute_force_project(&set, &y).map_err(|e| e.to_string())?;
        let dev = fast
            .iter()
            .zip(&slow)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ensure(dev <= 1e-9, || {
            format!("set {set:?}, y {y:?}: {fast:?} vs {slow:?}")
        })?;
        worst = worst.max(dev);
        checked += 1;
    }

    let set = CournotParams::random(20, 10, 0, 500.0)
        .and_then(|p| p.action_set(0))
        .map_err(|e| e.to_string())?;
    let mut slack: f64 = f64::INFINITY;
    for k in 0..1000 {
        let y: Vec<f64> = (0..20).map(|_| rng.uniform(-600.0, 600.0)).collect();
        // pairs at distances of order 1e-3, 1 and 1e2, plus independent draws
        let scale = [1e-3, 1.0, 100.0, 0.0][k % 4];
        let y2: Vec<f64> = if scale > 0.0 {
            y.iter()
                .map(|v| v + scale * rng.uniform(-1.0, 1.0))
                .collect()
        } else {
            (0..20).map(|_| rng.uniform(-600.0, 600.0)).collect()
        };
        let d_in = norm(&y.iter().zip(&y2).map(|(a, b)| a - b).collect::<Vec<_>>());
        let (p1, p2) = (
            set.project(&y).map_err(|e| e.to_string())?,
            set.project(&y2).map_err(|e| e.to_string())?,
        );
        let d_out = norm(&p1.iter().zip(&p2).map(|(a, b)| a - b).collect::<Vec<_>>());
        ensure(d_out <= d_in + 1e-12, || {
            format!("expansion: {d_out} > {d_in}")
        })?;
        slack = slack.min(d_in + 1e-12 - d_out);
    }
    Ok(format!(
        "10^4 cases max deviation {worst:.2e}; 10^3 Cournot pairs nonexpansive (min margin {slack:.2e})"
    ))
}

fn fd_gradient(game: &GameInstance, i: usize, x: &[f64], z: &[f64], h: f64) -> Vec<f64> {
    let n = game.num_players() as f64;
    let f = |x: &[f64], z: &[f64]| game.cost(i, x, z).unwrap();
    (0..x.len())
        .map(|j| {
            let (mut xp, mut xm) = (x.to_vec(), x.to_vec());
            xp[j] += h;
            xm[j] -= h;
            let (mut zp, mut zm) = (z.to_vec(), z.to_vec());
            zp[j] += h;
            zm[j] -= h;
            (f(&xp, z) - f(&xm, z)) / (2.0 * h) + (f(x, &zp) - f(x, &zm)) / (2.0 * h) / n
        })
        .collect()
}

fn gradient() -> Outcome {
    let game = build_cournot(20, 10, 0, 500.0).map_err(|e| e.to_string())?;
    let mut rng = UniformStream::new(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let i = (rng.next_u64() % 20) as usize;
        let x: Vec<f64> = (0..20).map(|_| rng.uniform(0.0, 50.0)).collect();
        let z: Vec<f64> = (0..20).map(|_| rng.uniform(0.0, 50.0)).collect();
        let exact = game
            .coordinate_gradient(i, &x, &z)
            .map_err(|e| e.to_string())?;
        let fd = fd_gradient(&game, i, &x, &z, 1e-6);
        let err: Vec<f64> = exact.iter().zip(&fd).map(|(a, b)| a - b).collect();
        worst = worst.max(norm(&err) / norm(&exact).max(1.0));
    }
    ensure(worst <= 1e-6, || format!("max relative error {worst:e}"))?;
    Ok(format!("1000 points, max relative error {worst:.2e}"))
}

fn contraction() -> Outcome {
    let mut rng = UniformStream::new(8);
    let mut details = Vec::new();
    for kind in TopologyKind::ALL {
        let w = weights(kind, 20);
        let sigma = w.sigma();
        for _ in 0..1000 {
            let v: Vec<f64> = (0..20).map(|_| rng.uniform(-100.0, 100.0)).collect();
            let mean = v.iter().sum::<f64>() / 20.0;
            let dev: Vec<f64> = v.iter().map(|x| x - mean).collect();
            let mixed = w.mix(&v, 1);
            let mixed_dev: Vec<f64> = mixed.iter().map(|x| x - mean).collect();
            let (lhs, rhs) = (norm(&mixed_dev), sigma * norm(&dev) + 1e-12);
            ensure(lhs <= rhs, || format!("{kind}: {lhs} > {rhs}"))?;
        }
        details.push(format!("{kind} sigma {sigma:.4}"));
    }
    Ok(format!("1000 vectors each: {}", details.join(", ")))
}

fn baseline() -> Outcome {
    let exp = default_experiment()?;
    let beta = exp.config.solver.beta;
    let tuned = exp.tune_fixed(beta).map_err(|e| e.to_string())?;
    let alpha0 = exp.tune_baseline().map_err(|e| e.to_string())?.alpha;
    let fixed = exp
        .run_fixed(tuned.alpha, beta, 200)
        .map_err(|e| e.to_string())?;
    let dim = exp.run_baseline(alpha0, 200).map_err(|e| e.to_string())?;
    let (g_fixed, g_base) = (
        fixed.gap_at(200).ok_or("short trace")?,
        dim.gap_at(200).ok_or("short trace")?,
    );
    let ratio = g_base / g_fixed;
    ensure(ratio >= 10.0, || {
        format!("baseline {g_base:e} vs algorithm {g_fixed:e}")
    })?;
    Ok(format!(
        "gap200 algorithm {g_fixed:.3e} (alpha {:.4e}), baseline {g_base:.3e} (alpha0 {alpha0:.4e}), ratio {ratio:.1}",
        tuned.alpha
    ))
}

fn determinism() -> Outcome {
    let dirs = [
        tempfile::tempdir().map_err(|e| e.to_string())?,
        tempfile::tempdir().map_err(|e| e.to_string())?,
    ];
    let mut contents = Vec::new();
    for dir in &dirs {
        let mut cfg = ExperimentConfig::default();
        cfg.output.path = dir.path().join("trace.csv");
        let exp = Experiment::build(&cfg).map_err(|e| e.to_string())?;
        run_experiment(&exp, cfg.output.path.clone()).map_err(|e| e.to_string())?;
        contents.push(std::fs::read(&cfg.output.path).map_err(|e| e.to_string())?);
    }
    ensure(contents[0] == contents[1], || "trace files differ".into())?;
    Ok(format!(
        "two runs produced identical {}-byte traces",
        contents[0].len()
    ))
}
