//! Experiment runner: environments, configuration, trace files and reports.

mod checks;
mod config;
mod environments;
mod format;
mod report;
mod trace_io;

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter};
use std::path::Path;

pub use checks::{lemma1_checks, thm2_check, thm3_checks, thm4_check, thm5_checks, thm7_check, BoundCheck};
pub use config::{Algorithm, EnvironmentSpec, ExperimentConfig, PolicyName, StepSize};
pub use environments::build_environment;
pub use format::{fmt12, format_sig};
pub use report::{Report, ReportRow, REPORT_HEADER};
pub use trace_io::{read_trace, write_trace, TraceFile};

use crate::ader::Ader;
use crate::combined::{Aoa, Aod};
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::game::{run_game, OnlineLearner, RunTrace};
use crate::metrics::{ComparatorPolicy, Metric, WindowTable};
use crate::ogd::{static_step_size, Ogd};
use crate::point::Point;

/// Largest horizon for which every interval start is checked against the
/// interval bound; longer runs check a strided subset of starts.
pub const FULL_INTERVAL_CHECK_LIMIT: usize = 512;

/// A finished run and its report.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub trace: RunTrace,
    pub report: Report,
}

impl Experiment {
    pub fn trace_file(&self) -> TraceFile {
        TraceFile { trace: self.trace.clone(), algorithm: self.algorithm.to_string(), seed: self.seed }
    }
}

/// Instantiates the configured learner for `env`.
pub fn build_learner(config: &ExperimentConfig, env: &Environment) -> Result<Box<dyn OnlineLearner>> {
    let domain = env.domain().clone();
    let (g, horizon) = (env.lipschitz(), env.horizon());
    Ok(match config.algorithm {
        Algorithm::Ogd => {
            let eta = match config.eta {
                StepSize::Auto => static_step_size(domain.diameter(), g, horizon)?,
                StepSize::Fixed(eta) => eta,
            };
            Box::new(Ogd::new(domain, eta)?)
        }
        Algorithm::Ader => Box::new(Ader::new(domain, g, horizon)?),
        Algorithm::Aod => Box::new(Aod::new(domain, g, horizon)?),
        Algorithm::Aoa => Box::new(Aoa::new(domain, g)?),
    })
}

/// Reads a comparator sequence: one row of comma-separated coordinates per
/// round. Blank lines, `#` comments and a non-numeric header are skipped.
pub fn read_comparators(input: impl BufRead) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = line.split(',').map(|x| x.trim().parse()).collect();
        match parsed {
            Ok(coords) => out.push(Point::new(coords).map_err(|e| Error::Trace { line: i + 1, message: e.to_string() })?),
            Err(_) if out.is_empty() => continue,
            Err(_) => {
                return Err(Error::Trace { line: i + 1, message: format!("not a comparator row: '{line}'") })
            }
        }
    }
    Ok(out)
}

/// Resolves the configured comparator policies.
pub fn comparator_policies(config: &ExperimentConfig) -> Result<Vec<ComparatorPolicy>> {
    config
        .comparators
        .iter()
        .map(|p| match p {
            PolicyName::Minimizers => Ok(ComparatorPolicy::Minimizers),
            PolicyName::PiecewiseConstant => Ok(ComparatorPolicy::PiecewiseConstant),
            PolicyName::File => {
                let path = config
                    .comparator_file
                    .as_ref()
                    .ok_or_else(|| Error::Config("comparator_file is not set".into()))?;
                Ok(ComparatorPolicy::Explicit(read_comparators(BufReader::new(File::open(path)?))?))
            }
        })
        .collect()
}

/// Runs the configured experiment and evaluates its report.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment> {
    config.validate()?;
    let env = build_environment(&config.environment, config.horizon, config.seed)?;
    let mut learner = build_learner(config, &env)?;
    let trace = run_game(learner.as_mut(), &env)?;
    let policies = comparator_policies(config)?;
    let report = build_report(&trace, config, &policies)?;
    Ok(Experiment { algorithm: config.algorithm, seed: config.seed, trace, report })
}

/// Window lengths reported as `sa_regret` rows: powers of two and `T`.
pub fn reported_window_lengths(horizon: usize) -> Vec<usize> {
    let mut taus: Vec<usize> = std::iter::successors(Some(1usize), |t| t.checked_mul(2))
        .take_while(|&t| t <= horizon)
        .collect();
    if taus.last() != Some(&horizon) {
        taus.push(horizon);
    }
    taus
}

/// Keeps the row with the least slack in each group.
fn tightest<K: Ord>(checks: Vec<BoundCheck>, key: impl Fn(&BoundCheck) -> K) -> Vec<BoundCheck> {
    let mut groups: BTreeMap<K, BoundCheck> = BTreeMap::new();
    for c in checks {
        let k = key(&c);
        match groups.get(&k) {
            Some(existing) if existing.slack() <= c.slack() => {}
            _ => {
                groups.insert(k, c);
            }
        }
    }
    groups.into_values().collect()
}

fn build_report(trace: &RunTrace, config: &ExperimentConfig, policies: &[ComparatorPolicy]) -> Result<Report> {
    let mut report = Report::default();
    let default_policy = ComparatorPolicy::Minimizers;
    for metric in [
        Metric::CumulativeLoss,
        Metric::StaticRegret,
        Metric::RestrictedDynamicRegret,
        Metric::WeakAdaptiveRegret,
        Metric::MaxSegmentRegret,
        Metric::FunctionVariation,
    ] {
        report.push(ReportRow::metric(metric.name(), "-", metric.evaluate(trace, None, &default_policy)?));
    }
    for tau in reported_window_lengths(trace.horizon()) {
        let value = Metric::SaRegret.evaluate(trace, Some(tau), &default_policy)?;
        report.push(ReportRow::metric(Metric::SaRegret.name(), format!("tau={tau}"), value));
    }
    for policy in policies {
        for metric in [Metric::DynamicRegret, Metric::PathLength, Metric::SquaredPathLength] {
            report.push(ReportRow::metric(metric.name(), policy.name(), metric.evaluate(trace, None, policy)?));
        }
    }

    let mut checks = Vec::new();
    match config.algorithm {
        Algorithm::Ogd => {
            if config.eta == StepSize::Auto {
                checks.push(thm2_check(trace));
            }
        }
        Algorithm::Ader => {
            for policy in policies {
                checks.push(thm7_check(trace, policy)?);
            }
        }
        Algorithm::Aod => {
            checks.extend(thm3_checks(trace));
            for policy in policies {
                checks.push(thm4_check(trace, policy)?);
            }
            // worst prefix per covering level
            checks.extend(tightest(lemma1_checks(trace)?, |c| c.span));
        }
        Algorithm::Aoa => {
            let horizon = trace.horizon();
            let table = WindowTable::new(trace);
            let stride = horizon.div_ceil(FULL_INTERVAL_CHECK_LIMIT);
            for policy in policies {
                let all = thm5_checks(trace, policy, &table, (1..=horizon).step_by(stride))?;
                // worst interval per length
                checks.extend(tightest(all, |c| c.span));
            }
        }
    }
    for c in checks {
        report.push(c.into());
    }
    Ok(report)
}

/// Writes the trace and report files named in the configuration.
pub fn write_outputs(config: &ExperimentConfig, experiment: &Experiment) -> Result<()> {
    for path in [&config.trace, &config.report] {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
    }
    let mut out = BufWriter::new(File::create(&config.trace)?);
    write_trace(&mut out, &experiment.trace_file())?;
    let mut out = BufWriter::new(File::create(&config.report)?);
    experiment.report.write_csv(&mut out)?;
    Ok(())
}

/// Loads a trace file from disk.
pub fn load_trace(path: &Path) -> Result<TraceFile> {
    read_trace(BufReader::new(File::open(path)?))
}
