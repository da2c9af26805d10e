//! Plain-text trace files.
//!
//! ```text
//! # oco-trace v1 D=1 G=1 T=3
//! # domain=box lower=0 upper=1 loss=distance scale=1 segments=1;3 algorithm=aod seed=7
//! t,action_0,loss,theta_0,minimizer_0,n_active_experts
//! 1,0,0.25,0.25,0.25,2
//! ...
//! ```
//!
//! `theta` holds the distance target or the linear slope. Floats use the
//! shortest representation that parses back to the same value, so metrics
//! computed from a reloaded trace are bit-identical to the original.

use std::io::{BufRead, Write};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::game::{RoundRecord, RunTrace};
use crate::loss::Loss;
use crate::point::Point;

const MAGIC: &str = "# oco-trace v1";

/// A trace together with the provenance recorded in its metadata line.
#[derive(Debug, Clone)]
pub struct TraceFile {
    pub trace: RunTrace,
    pub algorithm: String,
    pub seed: u64,
}

enum Family {
    Distance { scale: f64 },
    Linear { offset: f64 },
}

fn family(trace: &RunTrace) -> Result<Family> {
    let first = &trace.rounds[0].loss;
    let fam = match first {
        Loss::Distance { scale, .. } => Family::Distance { scale: *scale },
        Loss::Linear { offset, .. } => Family::Linear { offset: *offset },
    };
    let uniform = trace.rounds.iter().all(|r| match (&r.loss, &fam) {
        (Loss::Distance { scale, .. }, Family::Distance { scale: s }) => scale == s,
        (Loss::Linear { offset, .. }, Family::Linear { offset: o }) => offset == o,
        _ => false,
    });
    if !uniform {
        return Err(Error::Argument(
            "trace files need one loss family with a shared scale or offset".into(),
        ));
    }
    Ok(fam)
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

pub fn write_trace(out: &mut impl Write, file: &TraceFile) -> Result<()> {
    let trace = &file.trace;
    if trace.rounds.is_empty() {
        return Err(Error::Argument("cannot write an empty trace".into()));
    }
    let d = trace.domain.dim();
    writeln!(out, "{MAGIC} D={} G={} T={}", trace.diameter(), trace.lipschitz, trace.horizon())?;
    let domain = match &trace.domain {
        Domain::Box { lower, upper } => format!("domain=box lower={} upper={}", join(lower), join(upper)),
        Domain::Ball { radius, dim } => format!("domain=ball radius={radius} dim={dim}"),
    };
    let loss = match family(trace)? {
        Family::Distance { scale } => format!("loss=distance scale={scale}"),
        Family::Linear { offset } => format!("loss=linear offset={offset}"),
    };
    let segments: Vec<String> = trace.segment_starts.iter().map(usize::to_string).collect();
    writeln!(
        out,
        "# {domain} {loss} segments={} algorithm={} seed={}",
        segments.join(";"),
        file.algorithm,
        file.seed
    )?;
    let mut header = vec!["t".to_string()];
    header.extend((0..d).map(|i| format!("action_{i}")));
    header.push("loss".into());
    header.extend((0..d).map(|i| format!("theta_{i}")));
    header.extend((0..d).map(|i| format!("minimizer_{i}")));
    header.push("n_active_experts".into());
    writeln!(out, "{}", header.join(","))?;
    for (i, r) in trace.rounds.iter().enumerate() {
        let theta = match &r.loss {
            Loss::Distance { target, .. } => target,
            Loss::Linear { slope, .. } => slope,
        };
        let minimizer = r.minimizer.clone().unwrap_or_else(|| r.loss.minimizer(&trace.domain));
        let mut row = vec![(i + 1).to_string()];
        row.extend(r.action.coords().iter().map(f64::to_string));
        row.push(r.loss_value.to_string());
        row.extend(theta.coords().iter().map(f64::to_string));
        row.extend(minimizer.coords().iter().map(f64::to_string));
        row.push(r.active_experts.to_string());
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::Trace { line, message: message.into() }
}

fn key_values(line: usize, text: &str) -> Result<Vec<(&str, &str)>> {
    text.split_whitespace()
        .map(|kv| kv.split_once('=').ok_or_else(|| bad(line, format!("expected key=value, got '{kv}'"))))
        .collect()
}

fn lookup<'a>(line: usize, pairs: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    pairs
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| bad(line, format!("missing '{key}'")))
}

fn number<T: std::str::FromStr>(line: usize, text: &str) -> Result<T> {
    text.parse().map_err(|_| bad(line, format!("not a number: '{text}'")))
}

fn numbers(line: usize, text: &str) -> Result<Vec<f64>> {
    text.split(';').map(|x| number(line, x)).collect()
}

pub fn read_trace(input: impl BufRead) -> Result<TraceFile> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next_line = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, Ok(text))) => Ok((n, text)),
            Some((_, Err(e))) => Err(e.into()),
            None => Err(bad(0, format!("missing {what}"))),
        }
    };

    let (n, header) = next_line("header")?;
    let rest = header
        .strip_prefix(MAGIC)
        .ok_or_else(|| bad(n, "not an oco-trace v1 file"))?;
    let pairs = key_values(n, rest)?;
    let lipschitz: f64 = number(n, lookup(n, &pairs, "G")?)?;
    let horizon: usize = number(n, lookup(n, &pairs, "T")?)?;

    let (n, meta) = next_line("metadata")?;
    let meta = meta.strip_prefix('#').ok_or_else(|| bad(n, "expected metadata comment"))?;
    let pairs = key_values(n, meta)?;
    let domain = match lookup(n, &pairs, "domain")? {
        "box" => Domain::boxed(numbers(n, lookup(n, &pairs, "lower")?)?, numbers(n, lookup(n, &pairs, "upper")?)?),
        "ball" => Domain::ball(number(n, lookup(n, &pairs, "dim")?)?, number(n, lookup(n, &pairs, "radius")?)?),
        other => return Err(bad(n, format!("unknown domain '{other}'"))),
    }
    .map_err(|e| bad(n, e.to_string()))?;
    let family = match lookup(n, &pairs, "loss")? {
        "distance" => Family::Distance { scale: number(n, lookup(n, &pairs, "scale")?)? },
        "linear" => Family::Linear { offset: number(n, lookup(n, &pairs, "offset")?)? },
        other => return Err(bad(n, format!("unknown loss family '{other}'"))),
    };
    let segment_starts = lookup(n, &pairs, "segments")?
        .split(';')
        .map(|s| number(n, s))
        .collect::<Result<Vec<usize>>>()?;
    let algorithm = lookup(n, &pairs, "algorithm")?.to_string();
    let seed = number(n, lookup(n, &pairs, "seed")?)?;

    let d = domain.dim();
    let width = 3 + 3 * d;
    let (n, columns) = next_line("column header")?;
    if columns.split(',').count() != width {
        return Err(bad(n, format!("expected {width} columns for dimension {d}")));
    }

    let mut rounds = Vec::with_capacity(horizon);
    for (n, text) in lines {
        let text = text?;
        if text.is_empty() {
            continue;
        }
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != width {
            return Err(bad(n, format!("expected {width} fields, got {}", fields.len())));
        }
        let t: usize = number(n, fields[0])?;
        if t != rounds.len() + 1 {
            return Err(bad(n, format!("round {t} out of order")));
        }
        let vector = |range: std::ops::Range<usize>| -> Result<Point> {
            let v = fields[range].iter().map(|x| number(n, x)).collect::<Result<Vec<f64>>>()?;
            Point::new(v).map_err(|e| bad(n, e.to_string()))
        };
        let action = vector(1..1 + d)?;
        let loss_value: f64 = number(n, fields[1 + d])?;
        let theta = vector(2 + d..2 + 2 * d)?;
        let minimizer = vector(2 + 2 * d..2 + 3 * d)?;
        let active_experts = number(n, fields[2 + 3 * d])?;
        let loss = match family {
            Family::Distance { scale } => Loss::distance(theta, scale),
            Family::Linear { offset } => Loss::linear(theta, offset),
        }
        .map_err(|e| bad(n, e.to_string()))?;
        rounds.push(RoundRecord {
            action,
            loss_value,
            loss,
            minimizer: Some(minimizer),
            comparator: None,
            experts: Vec::new(),
            active_experts,
        });
    }
    if rounds.len() != horizon {
        return Err(bad(0, format!("header declares T={horizon} but {} rounds follow", rounds.len())));
    }
    if segment_starts.first() != Some(&1) || segment_starts.last().is_some_and(|&s| s > horizon) {
        return Err(bad(2, "segment starts must begin at 1 and lie within the horizon"));
    }
    Ok(TraceFile { trace: RunTrace { domain, lipschitz, segment_starts, rounds }, algorithm, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Environment;
    use crate::game::run_game;
    use crate::ogd::Ogd;

    fn sample() -> TraceFile {
        let losses = [0.25, 0.8, 1.0 / 3.0]
            .iter()
            .map(|&t| Loss::distance(Point::scalar(t), 1.0).unwrap())
            .collect();
        let domain = Domain::interval(0.0, 1.0).unwrap();
        let env = Environment::new(domain.clone(), losses, 7).unwrap().with_segments(vec![1, 3]).unwrap();
        let mut ogd = Ogd::new(domain, 0.37).unwrap();
        TraceFile { trace: run_game(&mut ogd, &env).unwrap(), algorithm: "ogd".into(), seed: 7 }
    }

    #[test]
    fn round_trip_is_exact() {
        let file = sample();
        let mut buf = Vec::new();
        write_trace(&mut buf, &file).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# oco-trace v1 D=1 G=1 T=3\n"));
        assert!(text.contains("t,action_0,loss,theta_0,minimizer_0,n_active_experts\n"));
        let back = read_trace(buf.as_slice()).unwrap();
        assert_eq!(back.algorithm, "ogd");
        assert_eq!(back.seed, 7);
        assert_eq!(back.trace.segment_starts, vec![1, 3]);
        for (a, b) in back.trace.rounds.iter().zip(&file.trace.rounds) {
            assert_eq!(a.action, b.action);
            assert_eq!(a.loss_value.to_bits(), b.loss_value.to_bits());
            assert_eq!(a.loss, b.loss);
            assert_eq!(a.minimizer, b.minimizer);
        }
        let mut again = Vec::new();
        write_trace(&mut again, &back).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn malformed_rows_name_the_line() {
        let mut buf = Vec::new();
        write_trace(&mut buf, &sample()).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("\n2,", "\n3,");
        match read_trace(text.as_bytes()) {
            Err(Error::Trace { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_trace("hello\n".as_bytes()), Err(Error::Trace { line: 1, .. })));
    }
}
