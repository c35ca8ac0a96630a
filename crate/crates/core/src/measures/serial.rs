//! Plain-text measure records.
//!
//! ```text
//! periodic: 2 3
//! markov: F=1,2 P=0.5,0.5;0.5,0.5 pi=0.5,0.5
//! mixture: 0.5 periodic: 2
//! mixture: 0.5 markov: F=1,2 P=0.5,0.5;0.5,0.5 pi=0.5,0.5
//! ```
//!
//! A bare `periodic:` or `markov:` record is a one-component mixture.

use std::fmt::Write as _;

use crate::arith::Word;
use crate::diagram::Diagram;
use crate::error::{Error, Result};

use super::{Component, MarkovMeasure, MixtureMeasure, PeriodicMeasure};

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad {} entry '{}'", what, x))))
        .collect()
}

fn parse_component(rec: &str, diagram: &Diagram) -> Result<Component> {
    let (kind, body) = rec.split_once(':').ok_or_else(|| Error::Parse(format!("missing ':' in '{}'", rec)))?;
    match kind.trim() {
        "periodic" => {
            let cycle: Word = body.trim().parse()?;
            Ok(PeriodicMeasure::new(&cycle, diagram)?.into())
        }
        "markov" => {
            let (mut f, mut p, mut pi) = (None, None, None);
            for field in body.split_whitespace() {
                let (key, val) = field.split_once('=').ok_or_else(|| Error::Parse(format!("bad field '{}'", field)))?;
                match key {
                    "F" => f = Some(parse_list::<usize>(val, "F")?),
                    "P" => p = Some(val.split(';').map(|r| parse_list::<f64>(r, "P")).collect::<Result<Vec<_>>>()?),
                    "pi" => pi = Some(parse_list::<f64>(val, "pi")?),
                    _ => return Err(Error::Parse(format!("unknown field '{}'", key))),
                }
            }
            let f = f.ok_or_else(|| Error::Parse("markov record needs F=".into()))?;
            let p = p.ok_or_else(|| Error::Parse("markov record needs P=".into()))?;
            let m = match pi {
                Some(pi) => MarkovMeasure::with_stationary(f, p, pi, diagram)?,
                None => MarkovMeasure::new(f, p, diagram)?,
            };
            Ok(m.into())
        }
        other => Err(Error::Parse(format!("unknown measure kind '{}'", other))),
    }
}

/// Parses one bare record or a block of `mixture:` lines.
pub fn parse_measure(text: &str, diagram: &Diagram) -> Result<MixtureMeasure> {
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    if lines.is_empty() {
        return Err(Error::Parse("empty measure description".into()));
    }
    if lines.len() == 1 && !lines[0].starts_with("mixture:") {
        return Ok(MixtureMeasure::single(parse_component(lines[0], diagram)?));
    }
    let mut comps = Vec::new();
    for line in lines {
        let rest = line
            .strip_prefix("mixture:")
            .ok_or_else(|| Error::Parse(format!("expected a mixture line, got '{}'", line)))?
            .trim();
        let (a, rec) = rest.split_once(char::is_whitespace).ok_or_else(|| Error::Parse(format!("bad mixture line '{}'", line)))?;
        let a: f64 = a.parse().map_err(|_| Error::Parse(format!("bad weight '{}'", a)))?;
        comps.push((a, parse_component(rec.trim(), diagram)?));
    }
    MixtureMeasure::new(comps)
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn format_component(c: &Component) -> String {
    match c {
        Component::Periodic(p) => format!("periodic: {}", p.cycle()),
        Component::Markov(m) => {
            let rows: Vec<String> = m.matrix().iter().map(|r| join(r)).collect();
            format!("markov: F={} P={} pi={}", join(m.states()), rows.join(";"), join(m.stationary()))
        }
    }
}

pub fn format_measure(mu: &MixtureMeasure) -> String {
    let comps = mu.components();
    if comps.len() == 1 && comps[0].0 == 1.0 {
        return format_component(&comps[0].1) + "\n";
    }
    let mut out = String::new();
    for (a, c) in comps {
        let _ = writeln!(out, "mixture: {} {}", a, format_component(c));
    }
    out
}
