mod figures;
mod fmt;
mod strategy;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use halfline::monotone::lower_bound_threshold;
use halfline::montecarlo::{simulate_detection_time, SimConfig};
use halfline::submonotone::{heuristic_t1, heuristic_t2, solve_optimal, SolverConfig};
use halfline::trajectory::{
    competitive_ratio_at, competitive_ratio_sup, expected_detection_time, first_passage,
};
use halfline::{Exec, Mp, Placement, Real};
use serde_json::{json, Value};

use crate::fmt::sig9;
use crate::strategy::{parse_optimize, parse_submonotone, StrategyChoice};

#[derive(Parser)]
#[command(name = "halfline", version, about = "Search on a half-line with unreliable detection")]
struct Cli {
    /// Print JSON instead of key=value lines
    #[arg(long, global = true)]
    json: bool,
    /// Accuracy target: series truncation, and bisection width for lower-bound
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// No warnings or progress on stderr
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
#[command(group(ArgGroup::new("strategy").required(true)))]
struct StrategyArgs {
    /// Monotone strategy with turning points b^i
    #[arg(long, group = "strategy", value_name = "B")]
    geometric: Option<f64>,
    /// Monotone strategy with the best base for p
    #[arg(long, group = "strategy")]
    optimal_monotone: bool,
    /// t=<t>,beta=<b>,gammas=<g1:...:gt>
    #[arg(long, group = "strategy", value_parser = parse_submonotone, value_name = "PARAMS")]
    submonotone: Option<StrategyChoice>,
    /// t=<t>: solve for the best t-hop strategy first
    #[arg(long, group = "strategy", value_parser = parse_optimize, value_name = "PARAMS")]
    optimize: Option<StrategyChoice>,
}

impl StrategyArgs {
    fn choice(&self) -> StrategyChoice {
        if let Some(b) = self.geometric {
            StrategyChoice::Geometric(b)
        } else if self.optimal_monotone {
            StrategyChoice::OptimalMonotone
        } else {
            self.submonotone
                .clone()
                .or_else(|| self.optimize.clone())
                .expect("clap enforces one strategy")
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Expected detection time and ratio at a placement, or the worst case over placements
    #[command(group(ArgGroup::new("target").required(true)))]
    Eval {
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, group = "target")]
        d: Option<f64>,
        /// Worst ratio over all placements
        #[arg(long, group = "target")]
        sup: bool,
        /// Also run this many Monte Carlo trials at d
        #[arg(long, value_name = "TRIALS", requires = "d")]
        mc: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Rounds scanned by --sup
        #[arg(long, default_value_t = 20_000)]
        rounds: usize,
    },
    /// Best t-hop strategy for p
    Optimize {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        t: usize,
        /// Closed-form strategy with beta = 1/(1-p) (t = 1 or 2)
        #[arg(long)]
        heuristic: bool,
    },
    /// Smallest ratio at which the truncated lower-bound system has a monotone solution
    LowerBound {
        #[arg(long)]
        p: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        ell: u64,
    },
    /// Monte Carlo estimate of the expected detection time
    Simulate {
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Run on the calling thread only
        #[arg(long)]
        sequential: bool,
    },
    /// Write the CSV data of every figure
    Figures {
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Comma-separated subset, e.g. fig2,fig10left
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, default_value_t = 0.01)]
        p_min: f64,
        #[arg(long, default_value_t = 0.99)]
        p_max: f64,
        #[arg(long, default_value_t = 0.005)]
        p_step: f64,
    },
}

enum Failure {
    Usage(String),
    Domain(halfline::Error),
    Partial(usize),
    Io(std::io::Error),
}

impl From<halfline::Error> for Failure {
    fn from(e: halfline::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// `key=value` pairs on one line, or a JSON object.
struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, v: Value) {
        if self.json {
            println!("{v}");
            return;
        }
        let Value::Object(map) = v else {
            println!("{v}");
            return;
        };
        let line: Vec<String> = map
            .iter()
            .map(|(k, v)| format!("{k}={}", plain(v)))
            .collect();
        println!("{}", line.join(" "));
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => sig9(n.as_f64().unwrap()),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(plain).collect::<Vec<_>>().join(":"),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn to_f64s(xs: &[Mp]) -> Vec<f64> {
    xs.iter().map(Real::to_f64).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = Out { json: cli.json };
    if !(cli.tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    match cli.cmd {
        Cmd::Eval {
            strategy,
            p,
            d,
            sup,
            mc,
            seed,
            rounds,
        } => {
            let s = strategy.choice().build(p)?;
            if sup {
                let rep = competitive_ratio_sup(&s, p, rounds, 1e-10)?;
                out.emit(json!({
                    "sup": rep.ratio,
                    "d": rep.d,
                    "round": rep.round,
                    "interval": rep.interval,
                    "rounds_evaluated": rep.rounds_evaluated,
                }));
                return Ok(());
            }
            let d = Placement::new(d.expect("clap enforces --d or --sup"))?;
            let sample = competitive_ratio_at(&s, p, d)?;
            let expected = expected_detection_time(&s, p, d, cli.tol)?;
            let mut v = json!({
                "d": sample.d,
                "expected_time": expected,
                "ratio": p * expected / sample.d,
            });
            if let Some(trials) = mc {
                let sim = simulate_detection_time(&s, p, d, &SimConfig::new(trials, seed))?;
                v["mc_mean"] = json!(sim.mean);
                v["mc_std_error"] = json!(sim.std_error);
            }
            out.emit(v);
        }
        Cmd::Optimize { p, t, heuristic } => {
            let pm = Mp::new(p);
            if heuristic {
                let h = match t {
                    1 => heuristic_t1(&pm)?,
                    2 => heuristic_t2(&pm)?,
                    _ => {
                        return Err(Failure::Usage(format!(
                            "--heuristic needs t = 1 or 2, got {t}"
                        )))
                    }
                };
                out.emit(json!({
                    "t": t,
                    "R": h.r.to_f64(),
                    "beta": h.params.beta().to_f64(),
                    "gammas": to_f64s(h.params.gammas()),
                }));
                return Ok(());
            }
            let sol = solve_optimal(&pm, t, &SolverConfig::default())?;
            out.emit(json!({
                "t": t,
                "R": sol.r.to_f64(),
                "beta": sol.params.beta().to_f64(),
                "gammas": to_f64s(sol.params.gammas()),
                "interval_ratios": to_f64s(&sol.report.per_interval),
                "spread": sol.feasibility.spread.to_f64(),
                "last_gap": sol.feasibility.last_gap.to_f64(),
                "residual": sol.report.closure_residual.to_f64(),
            }));
        }
        Cmd::LowerBound { p, ell } => {
            let th = lower_bound_threshold(p, ell as usize, cli.tol)?;
            out.emit(json!({
                "p": th.p,
                "ell": th.ell,
                "threshold": th.threshold,
                "target": th.target,
                "gap": th.gap,
            }));
        }
        Cmd::Simulate {
            strategy,
            p,
            d,
            trials,
            seed,
            sequential,
        } => {
            let s = strategy.choice().build(p)?;
            let d = Placement::new(d)?;
            let mut cfg = SimConfig::new(trials, seed);
            if sequential {
                cfg.exec = Exec::Sequential;
            }
            let sim = simulate_detection_time(&s, p, d, &cfg)?;
            out.emit(json!({
                "mean": sim.mean,
                "std_error": sim.std_error,
                "trials": sim.trials,
                "mean_crossings": sim.mean_crossings,
                "first_passage": first_passage(&s, d)?,
            }));
        }
        Cmd::Figures {
            out: dir,
            only,
            p_min,
            p_max,
            p_step,
        } => {
            if !(0.0 < p_min && p_min <= p_max && p_max < 1.0 && p_step > 0.0) {
                return Err(Failure::Usage(
                    "need 0 < p-min <= p-max < 1 and p-step > 0".into(),
                ));
            }
            let ids: Vec<&str> = if only.is_empty() {
                figures::FIGURE_IDS.to_vec()
            } else {
                let mut ids = Vec::new();
                for id in &only {
                    match figures::FIGURE_IDS.iter().find(|f| **f == id.as_str()) {
                        Some(f) => ids.push(*f),
                        None => return Err(Failure::Usage(format!("unknown figure '{id}'"))),
                    }
                }
                ids
            };
            let grid = figures::grid(p_min, p_max, p_step);
            let rep = figures::write_figures(&ids, &grid, &dir, Exec::default())?;
            if !cli.quiet {
                for e in &rep.errors {
                    eprintln!("warning: {e}");
                }
            }
            out.emit(json!({
                "files": rep.written,
                "points": grid.len(),
                "empty_cells": rep.empty_cells,
            }));
            if rep.empty_cells > 0 {
                return Err(Failure::Partial(rep.empty_cells));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Partial(n)) => {
            eprintln!("error: {n} cells left empty");
            ExitCode::from(4)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
