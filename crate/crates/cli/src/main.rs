//! `oco`: run experiments, evaluate traces, enumerate interval covers and
//! print regret bounds.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adaptive_oco::harness::{
    fmt12, load_trace, read_comparators, run_experiment, write_outputs, Algorithm, ExperimentConfig, StepSize,
};
use adaptive_oco::intervals::{cover, IntervalSystem};
use adaptive_oco::metrics::{
    bound_c, bound_c_prime, bound_thm3, bound_thm4, bound_thm5, bound_thm7, ComparatorPolicy, Metric,
};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "oco", version, about = "Adaptive and dynamic regret experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment; exits with status 1 if any bound check fails.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        algorithm: Option<String>,
        /// `auto` or a positive step size (ogd only).
        #[arg(long)]
        eta: Option<String>,
        #[arg(long, alias = "rounds")]
        horizon: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the trace output path.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Overrides the report output path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate metrics on a trace file, printing `metric,value` lines.
    Evaluate {
        #[arg(long)]
        trace: PathBuf,
        /// Metric name, repeatable; `all` selects every metric that needs no extra argument.
        #[arg(long, required = true)]
        metric: Vec<String>,
        #[arg(long)]
        tau: Option<usize>,
        /// `minimizers`, `piecewise-constant` or a comparator CSV file.
        #[arg(long, default_value = "minimizers")]
        comparator: String,
    },
    /// Print the greedy cover of `[from, to]` as `start end level` lines.
    Cover {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Horizon bounding the dense system; defaults to `to`.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Evaluate a regret bound.
    Bounds {
        #[arg(long, value_parser = ["3", "4", "5", "7"])]
        theorem: String,
        #[arg(long, alias = "rounds")]
        horizon: Option<usize>,
        #[arg(long)]
        tau: Option<usize>,
        /// Interval start (theorem 5).
        #[arg(long)]
        from: Option<usize>,
        /// Interval end (theorem 5).
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        path_length: f64,
        #[arg(long, default_value_t = 1.0)]
        diameter: f64,
        #[arg(long, default_value_t = 1.0)]
        lipschitz: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Dgc,
    Gc,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { config, algorithm, eta, horizon, seed, trace, report } => {
            let mut cfg = ExperimentConfig::load(&config)
                .with_context(|| format!("loading {}", config.display()))?;
            if let Some(a) = algorithm {
                cfg.algorithm = a.parse::<Algorithm>()?;
            }
            if let Some(e) = eta {
                cfg.eta = e.parse::<StepSize>()?;
            }
            if let Some(h) = horizon {
                cfg.horizon = h;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(t) = trace {
                cfg.trace = t;
            }
            if let Some(r) = report {
                cfg.report = r;
            }
            run(&cfg)
        }
        Command::Evaluate { trace, metric, tau, comparator } => {
            evaluate(&trace, &metric, tau, &comparator)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cover { system, from, to, horizon } => {
            let system = match system {
                SystemArg::Dgc => IntervalSystem::Dense { horizon: horizon.unwrap_or(to) },
                SystemArg::Gc => IntervalSystem::Geometric,
            };
            for interval in cover(from, to, system)? {
                println!("{} {} {}", interval.start(), interval.end(), interval.level());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { theorem, horizon, tau, from, to, path_length, diameter, lipschitz } => {
            if !(diameter > 0.0 && lipschitz > 0.0 && path_length >= 0.0) {
                bail!("need D > 0, G > 0 and a nonnegative path length");
            }
            let need_horizon = || horizon.context("--horizon is required");
            let (name, value) = match theorem.as_str() {
                "3" => {
                    let horizon = need_horizon()?;
                    let tau = tau.unwrap_or(horizon);
                    if tau == 0 || tau > horizon {
                        bail!("--tau must lie in [1, horizon]");
                    }
                    println!("c,{}", fmt12(bound_c(horizon, horizon)));
                    ("thm3", bound_thm3(tau, horizon, diameter, lipschitz))
                }
                "4" => {
                    let horizon = need_horizon()?;
                    println!("c,{}", fmt12(bound_c(horizon, horizon)));
                    ("thm4", bound_thm4(horizon, path_length, diameter, lipschitz))
                }
                "5" => {
                    let (Some(r), Some(s)) = (from, to) else {
                        bail!("theorem 5 needs --from and --to");
                    };
                    if r == 0 || r > s {
                        bail!("need 1 <= from <= to");
                    }
                    println!("c_prime,{}", fmt12(bound_c_prime(s)));
                    ("thm5", bound_thm5(s + 1 - r, s, path_length, diameter, lipschitz))
                }
                _ => ("thm7", bound_thm7(need_horizon()?, path_length, diameter, lipschitz)),
            };
            println!("{name},{}", fmt12(value));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let experiment = run_experiment(cfg)?;
    write_outputs(cfg, &experiment)?;
    let bound_rows = experiment.report.rows.iter().filter(|r| r.bound.is_some()).count();
    println!("trace,{}", cfg.trace.display());
    println!("report,{}", cfg.report.display());
    println!("bound_checks,{bound_rows}");
    let violations: Vec<_> = experiment.report.violations().collect();
    if violations.is_empty() {
        println!("status,pass");
        return Ok(ExitCode::SUCCESS);
    }
    println!("status,fail");
    for row in violations {
        eprintln!("violated: {}", row.to_csv());
    }
    Ok(ExitCode::from(1))
}

fn evaluate(path: &Path, metrics: &[String], tau: Option<usize>, comparator: &str) -> Result<()> {
    let file = load_trace(path).with_context(|| format!("loading {}", path.display()))?;
    let policy = match comparator {
        "minimizers" => ComparatorPolicy::Minimizers,
        "piecewise-constant" => ComparatorPolicy::PiecewiseConstant,
        other => {
            let f = std::fs::File::open(other).with_context(|| format!("opening comparator file {other}"))?;
            ComparatorPolicy::Explicit(read_comparators(std::io::BufReader::new(f))?)
        }
    };
    let mut selected = Vec::new();
    for name in metrics {
        if name == "all" {
            selected.extend(Metric::ALL.into_iter().filter(|m| *m != Metric::SaRegret || tau.is_some()));
        } else {
            selected.push(name.parse::<Metric>()?);
        }
    }
    for metric in selected {
        let value = metric.evaluate(&file.trace, tau, &policy)?;
        println!("{},{}", metric.name(), fmt12(value));
    }
    Ok(())
}
