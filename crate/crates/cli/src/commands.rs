use std::fmt::Write as _;

use abshift::entropy::{block_entropy, diagram_spectral_radius, language_growth_entropy};
use abshift::generic::{
    auto_schedule, birkhoff_check, count_prefixes, generic_prefix, report_for_schedule, SaturationBudget,
    ScheduleOptions, Selector,
};
use abshift::measures::{
    delta_sweep, ergodic_approximation, format_measure, parry_measure, parse_measure, periodic_measure, Component,
};
use abshift::{Diagram, MixtureMeasure, Params, VertexId, Word};
use serde_json::json;

use crate::config::RunConfig;
use crate::output::Output;
use crate::CliError;

const MEASURE_DEPTH: usize = 12;

fn params(cfg: &RunConfig) -> Result<Params, CliError> {
    Ok(Params::parse(&cfg.alpha, &cfg.beta, cfg.tol)?)
}

fn build(cfg: &RunConfig, default_depth: usize) -> Result<Diagram, CliError> {
    Ok(Diagram::build(&params(cfg)?, cfg.depth.unwrap_or(default_depth))?)
}

fn bad(msg: String) -> CliError {
    CliError::Validation(msg)
}

fn parse_ids(s: &str) -> Result<Vec<VertexId>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad(format!("bad vertex id {:?}", x))))
        .collect()
}

fn atom(s: &str, d: &Diagram) -> Result<Component, CliError> {
    let (kind, body) = s.split_once(':').ok_or_else(|| bad(format!("measure {:?} needs kind:body", s)))?;
    Ok(match kind.trim() {
        "parry" => {
            let ids = if body.trim() == "base" { d.base_ids() } else { parse_ids(body)? };
            parry_measure(&ids, d)?.into()
        }
        "periodic" => {
            let cycle: Word = body.trim().parse()?;
            periodic_measure(&cycle, d)?.into()
        }
        other => return Err(bad(format!("unknown measure kind {:?}", other))),
    })
}

/// `--measure` grammar: `@FILE`, or `+`-separated terms `[weight*]kind:body`.
fn measure(cfg: &RunConfig, d: &Diagram) -> Result<MixtureMeasure, CliError> {
    let text = cfg.measure.as_deref().unwrap_or("parry:base").trim();
    if let Some(path) = text.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("measure file {}: {}", path, e)))?;
        return Ok(parse_measure(&text, d)?);
    }
    let mut parts = Vec::new();
    for term in text.split('+') {
        let (w, body) = match term.split_once('*') {
            Some((w, body)) => (w.trim().parse::<f64>().map_err(|_| bad(format!("bad weight in {:?}", term)))?, body),
            None => (1.0, term),
        };
        parts.push((w, atom(body, d)?));
    }
    Ok(MixtureMeasure::new(parts)?)
}

pub fn alphabet(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = params(cfg)?;
    let rows: Vec<(usize, String, String)> =
        p.partition().iter().enumerate().map(|(i, iv)| (i + 1, iv.lo.to_string(), iv.hi.to_string())).collect();
    let mut text = format!("k = {} ({:?})\n", p.k(), p.mode());
    for (j, lo, hi) in &rows {
        let _ = writeln!(text, "I_{} = ({}, {})", j, lo, hi);
    }
    Ok(Output {
        command: "alphabet",
        json: json!({
            "alpha": cfg.alpha, "beta": cfg.beta, "k": p.k(), "exact": p.alpha().is_exact(),
            "intervals": rows.iter().map(|(j, lo, hi)| json!({"j": j, "lo": lo, "hi": hi})).collect::<Vec<_>>(),
        }),
        csv_header: "j,lo,hi".into(),
        csv_rows: rows.iter().map(|(j, lo, hi)| format!("{},{},{}", j, lo, hi)).collect(),
        text,
    })
}

pub fn orbit(cfg: &RunConfig, x: &str, nudge: bool) -> Result<Output, CliError> {
    let p = params(cfg)?;
    let n = cfg.n.unwrap_or(20);
    let mut start = p.parse_point(x)?;
    let word = match p.itinerary(&start, n) {
        Err(abshift::Error::Boundary { .. }) if nudge => {
            start = start.add(&p.quantum());
            p.itinerary(&start, n)?
        }
        r => r?,
    };
    let mut points = Vec::with_capacity(n);
    let mut cur = start.clone();
    for &j in word.symbols() {
        points.push(cur.to_string());
        cur = p.branch_affine(j, &cur);
    }
    let mut text = format!("x = {}\nitinerary {}\n", start, word.compact());
    for (i, (pt, s)) in points.iter().zip(word.symbols()).enumerate() {
        let _ = writeln!(text, "{:>3} {} {}", i, s, pt);
    }
    Ok(Output {
        command: "orbit",
        json: json!({"x": start.to_string(), "n": n, "itinerary": word.compact(), "orbit": points}),
        csv_header: "step,symbol,x".into(),
        csv_rows: points.iter().zip(word.symbols()).enumerate().map(|(i, (pt, s))| format!("{},{},{}", i, s, pt)).collect(),
        text,
    })
}

pub fn diagram(cfg: &RunConfig) -> Result<Output, CliError> {
    let d = build(cfg, 8)?;
    let rows: Vec<serde_json::Value> = d
        .vertices()
        .iter()
        .map(|v| {
            json!({
                "id": v.id, "label": v.label, "lo": v.interval.lo.to_string(), "hi": v.interval.hi.to_string(),
                "depth": v.depth, "succ": d.arrows(v.id),
            })
        })
        .collect();
    let csv_rows = d
        .vertices()
        .iter()
        .map(|v| {
            let succ: Vec<String> = d.arrows(v.id).iter().map(|c| c.to_string()).collect();
            format!("{},{},{},{},{},{}", v.id, v.label, v.interval.lo, v.interval.hi, v.depth, succ.join(" "))
        })
        .collect();
    Ok(Output {
        command: "diagram",
        json: json!({"depth": d.depth_built(), "vertices": rows, "unreachable_from_core": d.irreducibility_warnings()}),
        csv_header: "id,label,lo,hi,depth,succ".into(),
        csv_rows,
        text: d.export(),
    })
}

pub fn language(cfg: &RunConfig, count_only: bool) -> Result<Output, CliError> {
    let n = cfg.n.unwrap_or(4);
    let d = Diagram::build(&params(cfg)?, cfg.depth.unwrap_or(n).max(n))?;
    let count = d.language_count(n)?;
    if count_only {
        return Ok(Output {
            command: "language",
            json: json!({"n": n, "count": count.to_string()}),
            csv_header: "n,count".into(),
            csv_rows: vec![format!("{},{}", n, count)],
            text: format!("#L_{} = {}\n", n, count),
        });
    }
    if count > 1 << 20 {
        return Err(CliError::Budget(format!("{} words of length {}; use --count", count, n)));
    }
    let words: Vec<String> = d.language(n)?.iter().map(Word::compact).collect();
    Ok(Output {
        command: "language",
        json: json!({"n": n, "count": words.len(), "words": words}),
        csv_header: "word".into(),
        csv_rows: words.clone(),
        text: words.iter().map(|w| format!("{}\n", w)).collect(),
    })
}

pub fn entropy(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = params(cfg)?;
    let n = cfg.n.unwrap_or(14);
    let d = Diagram::build(&p, cfg.depth.unwrap_or(n).max(n))?;
    let growth = language_growth_entropy(&d, n)?;
    let spectral = diagram_spectral_radius(&d)?.ln();
    let mut rows: Vec<(String, usize, f64)> = growth.iter().map(|&(m, h)| ("growth".to_string(), m, h)).collect();
    rows.push(("spectral".into(), d.depth_built(), spectral));
    if cfg.measure.is_some() {
        let mu = measure(cfg, &d)?;
        for m in 1..=cfg.m.unwrap_or(4) {
            rows.push(("block".into(), m, block_entropy(&mu, m)?));
        }
        rows.push(("affine".into(), 0, mu.entropy()));
    }
    let text = rows.iter().map(|(k, m, h)| format!("{} {} {:.6}\n", k, m, h)).collect::<String>()
        + &format!("log beta {:.6}\n", p.log_beta());
    Ok(Output {
        command: "entropy",
        json: json!({
            "log_beta": p.log_beta(),
            "estimates": rows.iter().map(|(k, m, h)| json!({"kind": k, "n": m, "value": h})).collect::<Vec<_>>(),
        }),
        csv_header: "kind,n,value".into(),
        csv_rows: rows.iter().map(|(k, m, h)| format!("{},{},{:.12}", k, m, h)).collect(),
        text,
    })
}

pub fn parry(cfg: &RunConfig, vertices: Option<&str>) -> Result<Output, CliError> {
    let d = build(cfg, 8)?;
    let ids = match vertices {
        Some(s) => parse_ids(s)?,
        None => d.base_ids(),
    };
    let m = parry_measure(&ids, &d)?;
    let h = m.entropy_rate();
    let matrix = m.matrix();
    let mut text = format!("vertices {:?}\nentropy {:.12}\nperron root {:.12}\n", m.states(), h, h.exp());
    for (i, row) in matrix.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| format!("{:.6}", x)).collect();
        let _ = writeln!(text, "{} pi {:.6} P {}", m.states()[i], m.stationary()[i], cells.join(" "));
    }
    Ok(Output {
        command: "parry",
        json: json!({
            "vertices": m.states(), "labels": m.labels(), "entropy": h, "perron_root": h.exp(),
            "pi": m.stationary(), "P": matrix, "record": format_measure(&MixtureMeasure::single(m.clone())).trim(),
        }),
        csv_header: "vertex,label,pi".into(),
        csv_rows: (0..m.num_states()).map(|i| format!("{},{},{:.12}", m.states()[i], m.labels()[i], m.stationary()[i])).collect(),
        text,
    })
}

pub fn approx(cfg: &RunConfig) -> Result<Output, CliError> {
    let d = build(cfg, MEASURE_DEPTH)?;
    let mu = measure(cfg, &d)?;
    let depth = cfg.m.unwrap_or(8);
    let delta = cfg.delta.unwrap_or(0.01);
    let a = ergodic_approximation(&mu, cfg.eps.unwrap_or(0.06), delta, depth, &d)?;
    let sweep = delta_sweep(&mu, delta, depth, 5, &d)?;
    let record = format_measure(&MixtureMeasure::single(a.rho.clone()));
    let mut text = format!(
        "delta {}\nD_{} {:.6}\nh(mu) {:.6}\nh(rho) {:.6}\nvertices {:?}\nsweep:\n",
        a.report.delta, depth, a.report.distance, a.report.h_mu, a.report.h_rho, a.vertices
    );
    for s in &sweep {
        let _ = writeln!(text, "  delta {:.6e} D {:.6} gap {:.6}", s.delta, s.distance, s.entropy_gap);
    }
    text.push_str(&record);
    Ok(Output {
        command: "approx",
        json: json!({"report": a.report, "vertices": a.vertices, "sweep": sweep, "rho": record.trim()}),
        csv_header: "delta,distance,entropy_gap".into(),
        csv_rows: sweep.iter().map(|s| format!("{:e},{:.12},{:.12}", s.delta, s.distance, s.entropy_gap)).collect(),
        text,
    })
}

fn budget(cfg: &RunConfig) -> SaturationBudget {
    let eps = cfg.eps.unwrap_or(0.2);
    SaturationBudget {
        epsilon: eps,
        depth: cfg.m.unwrap_or(1),
        blocks: cfg.levels.unwrap_or(2),
        target_len: cfg.target.unwrap_or(2000),
        tolerance: cfg.tolerance.unwrap_or(eps),
        seed: cfg.seed,
        options: ScheduleOptions { delta: cfg.delta.unwrap_or(0.01), ..ScheduleOptions::default() },
        ..SaturationBudget::default()
    }
}

fn selector(s: &str, seed: u64) -> Result<Selector, CliError> {
    match s {
        "random" => Ok(Selector::Random(seed)),
        "extreme" => Ok(Selector::Extreme),
        i => i.parse().map(Selector::Fixed).map_err(|_| bad(format!("bad selector {:?}", i))),
    }
}

pub fn generic(cfg: &RunConfig, sel: &str) -> Result<Output, CliError> {
    let d = build(cfg, MEASURE_DEPTH)?;
    let mu = measure(cfg, &d)?;
    let b = budget(cfg);
    let s = auto_schedule(&mu, b.epsilon, b.blocks, b.depth, &d, &b.options)?;
    let k = s.levels_until(b.target_len).len();
    let prefix = generic_prefix(&s, selector(sel, cfg.seed)?, k, &d)?;
    let checks = birkhoff_check(&prefix.word, &mu, &s, s.depth, k)?;
    let count = count_prefixes(&s, k)?;
    let invariants = s.check();
    let mut text = s.to_text();
    for c in &invariants {
        let _ = writeln!(text, "check {} {} {} {}", c.name, c.index, if c.holds { "ok" } else { "FAIL" }, c.detail);
    }
    let _ = writeln!(text, "levels {} N {} exponent {:.6} target {:.6}", k, count.end, count.exponent, count.target);
    for c in &checks {
        let _ = writeln!(text, "k {} N {} deviation {:.6} bound {:.6} cumulative {:.6}", c.k, c.end, c.deviation, c.bound, c.cumulative);
    }
    let _ = writeln!(text, "prefix {}", prefix.word.compact());
    Ok(Output {
        command: "generic",
        json: json!({
            "schedule": s.to_text(), "invariants": invariants, "count": count, "checkpoints": checks,
            "prefix": prefix.word.compact(), "admissible": prefix.is_admissible(&d),
        }),
        csv_header: "k,N,n,eps,bound,deviation,cumulative,within".into(),
        csv_rows: checks
            .iter()
            .map(|c| format!("{},{},{},{},{:.6},{:.6},{:.6},{}", c.k, c.end, c.n, c.eps, c.bound, c.deviation, c.cumulative, c.within))
            .collect(),
        text,
    })
}

pub fn saturate(cfg: &RunConfig) -> Result<Output, CliError> {
    let d = build(cfg, MEASURE_DEPTH)?;
    let mu = measure(cfg, &d)?;
    let b = budget(cfg);
    let s = auto_schedule(&mu, b.epsilon, b.blocks, b.depth, &d, &b.options)?;
    let r = report_for_schedule(&mu, &s, &d, &b)?;
    let csv = r.to_csv();
    let mut lines = csv.lines();
    let header = lines.next().unwrap_or_default().to_string();
    Ok(Output {
        command: "saturate",
        json: serde_json::to_value(&r).map_err(|e| bad(e.to_string()))?,
        csv_header: header,
        csv_rows: lines.map(str::to_string).collect(),
        text: r.to_text(),
    })
}
