//! Text, CSV and JSON rendering of tables and reports.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::homology::{on_vanishing_frontier, BettiTable, HomologyDim, HomologyTable, OrbitDim};
use crate::ENGINE_VERSION;

use super::config::RunConfig;

/// Grid with columns `t` and rows `j`, entry `dim H_t,tc+j`. Zeros on a
/// vanishing frontier print as `0`, other zeros as `-`; rows after the last
/// nonzero one are dropped. Rows whose offset is a multiple of `c` (the
/// Betti rows of the Veronese ring) are marked.
pub fn homology_diagram(table: &HomologyTable) -> String {
    let c = table.params.c();
    let p = table.field.characteristic();
    let t_max = table.entries.keys().map(|k| k.0).max().unwrap_or(0);
    let offset = |&(t, d): &(usize, u32)| d - t as u32 * c;
    let last_row = table
        .entries
        .iter()
        .filter(|(_, &v)| v != 0)
        .map(|(k, _)| offset(k))
        .max()
        .unwrap_or(0);
    let cell = |t: usize, j: u32| -> String {
        match table.get(t, t as u32 * c + j) {
            Some(0) if on_vanishing_frontier(&table.params, p, t, j) => "0".into(),
            Some(0) | None => "-".into(),
            Some(v) => v.to_string(),
        }
    };
    let width = (0..=t_max)
        .flat_map(|t| (0..=last_row).map(move |j| (t, j)))
        .map(|(t, j)| cell(t, j).len())
        .chain(std::iter::once(t_max.to_string().len()))
        .max()
        .unwrap_or(1);
    let label = last_row.to_string().len().max(1);
    let mut out = String::new();
    let _ = write!(out, "{:>label$} |", "");
    for t in 0..=t_max {
        let _ = write!(out, " {t:>width$}");
    }
    out.push('\n');
    let _ = writeln!(out, "{}", "-".repeat(label + 2 + (width + 1) * (t_max + 1)));
    for j in 0..=last_row {
        let _ = write!(out, "{j:>label$} |");
        for t in 0..=t_max {
            let _ = write!(out, " {:>width$}", cell(t, j));
        }
        if j % c == 0 {
            out.push_str("  <-");
        }
        out.push('\n');
    }
    out
}

pub fn homology_csv(table: &HomologyTable) -> String {
    let mut out = String::from("t,d,dim\n");
    for (&(t, d), v) in &table.entries {
        let _ = writeln!(out, "{t},{d},{v}");
    }
    out
}

pub fn homology_records(table: &HomologyTable) -> Value {
    Value::Array(
        table
            .entries
            .iter()
            .map(|(&(t, d), &dim)| json!({ "t": t, "d": d, "dim": dim }))
            .collect(),
    )
}

fn orbit_label(o: &OrbitDim) -> String {
    let coords: Vec<String> = o.representative.iter().map(|x| x.to_string()).collect();
    format!("({})", coords.join(","))
}

pub fn homology_dim_text(h: &HomologyDim, c: u32) -> String {
    let mut out = format!("dim H_{}(m^{c})_{} = {}\n", h.t, h.d, h.dim);
    if !h.support.is_empty() {
        out.push_str("support:\n");
        for o in &h.support {
            let _ = writeln!(out, "  orbit {} size {}: {}", orbit_label(o), o.size, o.dim);
        }
    }
    out
}

pub fn homology_dim_json(h: &HomologyDim) -> Value {
    let support: Vec<Value> = h
        .support
        .iter()
        .map(|o| json!({ "orbit": o.representative, "size": o.size, "dim": o.dim }))
        .collect();
    json!([{ "t": h.t, "d": h.d, "dim": h.dim, "support": support }])
}

/// Betti grid: columns `i`, rows `j - i`.
pub fn betti_diagram(table: &BettiTable) -> String {
    let i_max = table.max_i();
    let rows: Vec<u32> = table
        .entries
        .iter()
        .filter(|(_, &v)| v != 0)
        .map(|(&(i, j), _)| j - i as u32)
        .collect();
    let last_row = rows.iter().copied().max().unwrap_or(0);
    let cell = |i: usize, r: u32| match table.entries.get(&(i, r + i as u32)) {
        Some(&v) if v != 0 => v.to_string(),
        _ => "-".into(),
    };
    let width = (0..=i_max)
        .flat_map(|i| (0..=last_row).map(move |r| (i, r)))
        .map(|(i, r)| cell(i, r).len())
        .chain(std::iter::once(i_max.to_string().len()))
        .max()
        .unwrap_or(1);
    let label = last_row.to_string().len().max(1);
    let mut out = String::new();
    let _ = write!(out, "{:>label$} |", "");
    for i in 0..=i_max {
        let _ = write!(out, " {i:>width$}");
    }
    out.push('\n');
    let _ = writeln!(out, "{}", "-".repeat(label + 2 + (width + 1) * (i_max + 1)));
    for r in 0..=last_row {
        let _ = write!(out, "{r:>label$} |");
        for i in 0..=i_max {
            let _ = write!(out, " {:>width$}", cell(i, r));
        }
        out.push('\n');
    }
    out
}

pub fn betti_csv(table: &BettiTable) -> String {
    let mut out = String::from("i,j,beta\n");
    for (&(i, j), v) in &table.entries {
        let _ = writeln!(out, "{i},{j},{v}");
    }
    out
}

pub fn betti_records(table: &BettiTable) -> Value {
    Value::Array(
        table
            .entries
            .iter()
            .map(|(&(i, j), &beta)| json!({ "i": i, "j": j, "beta": beta }))
            .collect(),
    )
}

/// `{query, result, meta}`.
pub fn envelope(config: &RunConfig, query: Value, result: Value, elapsed_ms: u128) -> String {
    let mut q = serde_json::to_value(config).expect("config serializes");
    if let (Value::Object(base), Value::Object(extra)) = (&mut q, query) {
        base.extend(extra);
    }
    let doc = json!({
        "query": q,
        "result": result,
        "meta": {
            "char_policy": config.field.policy_name(),
            "primes_used": config.field.primes_used(),
            "elapsed_ms": elapsed_ms,
            "engine_version": ENGINE_VERSION,
            "seed": config.seed,
        }
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json");
    s.push('\n');
    s
}
