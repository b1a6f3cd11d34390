//! One function per subcommand. Each returns the report and its exit code.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use fibtree::cnn::{self, CnnTemplate, Realization};
use fibtree::entropy::{entropy_with, evaluate_subsystems, EntropyConfig, SymbolClass};
use fibtree::lattice::{LatticeConfig, RootType, DEFAULT_DEPTH_CAP};
use fibtree::shift::{gamma_sequence, viability_prune, GammaTable, MarkovFibSpec};
use fibtree::{entropy_empirical, Error};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::document::SpecDocument;
use crate::error::CliError;
use crate::report::RunReport;

/// How entropies are displayed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Units {
    pub log2: bool,
}

impl Units {
    pub fn scale(self, nats: f64) -> f64 {
        if self.log2 {
            nats / std::f64::consts::LN_2
        } else {
            nats
        }
    }

    pub fn name(self) -> &'static str {
        if self.log2 {
            "bits"
        } else {
            "nats"
        }
    }
}

pub struct Outcome {
    pub report: RunReport,
    pub code: i32,
}

fn ok(command: &str, digest: Option<String>, body: String, results: Value) -> Outcome {
    Outcome {
        report: RunReport {
            command: command.to_string(),
            spec_digest: digest,
            body,
            results,
        },
        code: 0,
    }
}

fn class_name(c: SymbolClass) -> &'static str {
    match c {
        SymbolClass::Dead => "dead",
        SymbolClass::Inessential => "inessential",
        SymbolClass::Essential => "essential",
    }
}

fn render_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn count(command: &str, doc: &SpecDocument, depth: usize, root: RootType, units: Units) -> Result<Outcome, CliError> {
    if depth == 0 {
        return Err(CliError::Input("--depth must be at least 1".into()));
    }
    if depth > DEFAULT_DEPTH_CAP {
        return Err(Error::DepthCap {
            requested: depth,
            cap: DEFAULT_DEPTH_CAP,
        }
        .into());
    }
    let spec = doc.to_spec()?;
    let t = gamma_sequence(&spec, depth);
    let labels = spec.alphabet().labels();
    let mut header = vec!["n".to_string()];
    header.extend(labels.iter().cloned());
    header.push(format!("ln(ln gamma_n)/n [{}]", units.name()));
    header.push(format!("ln(sum ln gamma_i,n)/n [{}]", units.name()));
    let mut rows = vec![header];
    let mut json_rows = Vec::new();
    for n in 1..=depth {
        let counts: Vec<String> = (0..spec.k()).map(|s| t.get(root, s, n).to_string()).collect();
        let est = entropy_empirical(&spec, n).ok().map(|(a, b)| (units.scale(a), units.scale(b)));
        let mut row = vec![n.to_string()];
        row.extend(counts.iter().cloned());
        match est {
            Some((a, b)) => row.extend([format!("{a:.10}"), format!("{b:.10}")]),
            None => row.extend(["-".to_string(), "-".to_string()]),
        }
        rows.push(row);
        json_rows.push(json!({
            "n": n,
            "counts": counts,
            "estimators": est.map(|(a, b)| vec![a, b]),
        }));
    }
    let body = format!("block counts, root {}\n{}", root.name(), render_table(&rows));
    let results = json!({
        "root": root.name(),
        "symbols": labels,
        "units": units.name(),
        "rows": json_rows,
    });
    Ok(ok(command, Some(doc.digest()), body, results))
}

pub fn entropy(
    command: &str,
    doc: &SpecDocument,
    list: bool,
    max_subsystems: u128,
    units: Units,
) -> Result<Outcome, CliError> {
    let spec = doc.to_spec()?;
    let config = EntropyConfig {
        max_subsystems,
        ..EntropyConfig::default()
    };
    let r = entropy_with(&spec, &config)?;
    let a = spec.alphabet();
    let classes: Vec<String> = (0..spec.k())
        .map(|s| format!("{} {}", a.label(s), class_name(r.classification.class(s))))
        .collect();
    let witness = r.witness.as_ref().map_or("none".to_string(), |w| w.describe(a));
    let mut body = String::new();
    writeln!(body, "entropy: {:.10} {}", units.scale(r.value), units.name()).unwrap();
    writeln!(body, "spectral radius: {:.10}", r.spectral_radius).unwrap();
    writeln!(body, "classes: {}", classes.join(", ")).unwrap();
    writeln!(body, "witness: {witness}").unwrap();
    writeln!(body, "simple subsystems: {}", r.subsystem_count).unwrap();
    let mut listed = Vec::new();
    if list {
        let evaluations = evaluate_subsystems(&spec, &r.classification, &config)?;
        let mut rows = Vec::new();
        for (i, ev) in evaluations.iter().enumerate() {
            rows.push(vec![
                format!("{}", i + 1),
                ev.subsystem.describe(a),
                format!("rho = {:.10}", ev.spectral_radius),
            ]);
            listed.push(json!({"subsystem": ev.subsystem.describe(a), "spectral_radius": ev.spectral_radius}));
        }
        body.push_str(&render_table(&rows));
    }
    let results = json!({
        "entropy": units.scale(r.value),
        "units": units.name(),
        "spectral_radius": r.spectral_radius,
        "classes": (0..spec.k()).map(|s| json!({"symbol": a.label(s), "class": class_name(r.classification.class(s))})).collect::<Vec<_>>(),
        "witness": r.witness.as_ref().map(|w| w.describe(a)),
        "subsystem_count": r.subsystem_count,
        "subsystems": if list { Value::Array(listed) } else { Value::Null },
    });
    Ok(ok(command, Some(doc.digest()), body, results))
}

/// Compares the closed recursion against both brute-force oracles. The hook
/// may alter the recursion's table before comparison.
pub fn verify(
    command: &str,
    doc: &SpecDocument,
    naive_depth: usize,
    dp_depth: usize,
    fault: Option<&dyn Fn(&mut GammaTable)>,
) -> Result<Outcome, CliError> {
    let raw = doc.to_raw_spec()?;
    let spec = match viability_prune(&raw) {
        Ok((s, _)) => s,
        Err(Error::EmptyShift) => {
            let body = "empty shift: no symbol survives pruning\nresult: PASS (vacuous)\n".to_string();
            return Ok(ok(command, Some(doc.digest()), body, json!({"empty_shift": true, "pass": true, "cells": []})));
        }
        Err(e) => return Err(e.into()),
    };
    let height = naive_depth.max(dp_depth);
    if height == 0 {
        return Err(CliError::Input("at least one oracle depth must be positive".into()));
    }
    let mut table = gamma_sequence(&spec, height);
    if let Some(f) = fault {
        f(&mut table);
    }
    verify_table(command, doc, &spec, &table, naive_depth, dp_depth)
}

fn verify_table(
    command: &str,
    doc: &SpecDocument,
    spec: &MarkovFibSpec,
    table: &GammaTable,
    naive_depth: usize,
    dp_depth: usize,
) -> Result<Outcome, CliError> {
    let cfg = LatticeConfig::default();
    let a = spec.alphabet();
    let (mut passed, mut failed, mut skipped) = (0usize, 0usize, 0usize);
    let mut first_failure: Option<String> = None;
    let mut rows = vec![vec![
        "root".to_string(),
        "symbol".into(),
        "n".into(),
        "recursion".into(),
        "dp".into(),
        "naive".into(),
        "status".into(),
    ]];
    let mut cells = Vec::new();
    let show = |r: &Option<Result<BigUint, Error>>| match r {
        None => "-".to_string(),
        Some(Ok(v)) => v.to_string(),
        Some(Err(Error::WorkCap { .. })) => "work cap".to_string(),
        Some(Err(Error::DepthCap { .. })) => "depth cap".to_string(),
        Some(Err(e)) => e.to_string(),
    };
    for root in RootType::ALL {
        for s in 0..spec.k() {
            for n in 1..=table.height() {
                let g = table.get(root, s, n);
                let dp = (n <= dp_depth).then(|| cfg.count_colorings_dp(spec, root, n, s));
                let naive = (n <= naive_depth).then(|| cfg.enumerate_colorings_naive(spec, root, n, s));
                let compared: Vec<&BigUint> = [&dp, &naive]
                    .into_iter()
                    .filter_map(|r| r.as_ref().and_then(|r| r.as_ref().ok()))
                    .collect();
                let status = if compared.is_empty() {
                    skipped += 1;
                    "SKIP"
                } else if compared.iter().all(|&v| v == g) {
                    passed += 1;
                    "PASS"
                } else {
                    failed += 1;
                    "FAIL"
                };
                let cell = vec![
                    root.name().to_string(),
                    a.label(s).to_string(),
                    n.to_string(),
                    g.to_string(),
                    show(&dp),
                    show(&naive),
                    status.to_string(),
                ];
                if status == "FAIL" && first_failure.is_none() {
                    first_failure = Some(format!(
                        "root {} symbol {} height {n}: recursion {g}, dp {}, naive {}",
                        cell[0], cell[1], cell[4], cell[5]
                    ));
                }
                cells.push(json!({
                    "root": cell[0], "symbol": cell[1], "n": n, "recursion": cell[3],
                    "dp": cell[4], "naive": cell[5], "status": status,
                }));
                rows.push(cell);
            }
        }
    }
    let mut body = render_table(&rows);
    writeln!(body, "cells: {} passed, {failed} failed, {skipped} skipped", passed).unwrap();
    if let Some(f) = &first_failure {
        writeln!(body, "first mismatch: {f}").unwrap();
    }
    let pass = failed == 0;
    writeln!(body, "result: {}", if pass { "PASS" } else { "FAIL" }).unwrap();
    let results = json!({
        "empty_shift": false,
        "pass": pass,
        "first_mismatch": first_failure,
        "cells": cells,
    });
    let mut out = ok(command, Some(doc.digest()), body, results);
    if !pass {
        out.code = 3;
    }
    Ok(out)
}

pub fn cnn_classify(command: &str, t: CnnTemplate, units: Units) -> Result<Outcome, CliError> {
    let b = cnn::admissible_patterns(&t)?;
    let e = cnn::cnn_entropy(&t)?;
    let listing: Vec<String> = b.ordered(&t).iter().map(|p| p.to_string()).collect();
    let realization = cnn::realizable(&b);
    let crit = cnn::critical_a(t.a1, t.a2, t.z);
    let mut body = String::new();
    writeln!(body, "template: a = {}, a1 = {}, a2 = {}, z = {}", t.a, t.a1, t.a2, t.z).unwrap();
    writeln!(body, "region: {}", e.region).unwrap();
    writeln!(body, "patterns ({}):", listing.len()).unwrap();
    for p in &listing {
        writeln!(body, "  {p}").unwrap();
    }
    let real = match realization {
        Some(r) => format!("yes ({r})"),
        None => "no".to_string(),
    };
    writeln!(body, "separation property: {real}").unwrap();
    writeln!(body, "entropy (formula): {:.10} {}", units.scale(e.formula), units.name()).unwrap();
    writeln!(body, "entropy (machinery): {:.10} {}", units.scale(e.machinery), units.name()).unwrap();
    writeln!(body, "critical a at z = {}: {}", t.z, crit).unwrap();
    let results = json!({
        "template": {"a": t.a, "a1": t.a1, "a2": t.a2, "z": t.z},
        "region": [e.region.p, e.region.q],
        "patterns": listing,
        "realizable": realization.is_some(),
        "realization": realization.map(|r| match r { Realization::Inv1 => "Inv1", Realization::Inv2 => "Inv2" }),
        "entropy_formula": units.scale(e.formula),
        "entropy_machinery": units.scale(e.machinery),
        "units": units.name(),
        "critical_a": crit,
    });
    Ok(ok(command, None, body, results))
}

pub struct PhaseArgs<'a> {
    pub a1: f64,
    pub a2: f64,
    pub a_range: (f64, f64),
    pub z_range: (f64, f64),
    pub step: f64,
    pub out: &'a Path,
}

pub fn phase_diagram(command: &str, args: &PhaseArgs<'_>, units: Units) -> Result<Outcome, CliError> {
    let d = cnn::phase_diagram(args.a1, args.a2, args.a_range, args.z_range, args.step)?;
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", args.out.display()));
    let file = File::create(args.out).map_err(io)?;
    let mut w = BufWriter::new(file);
    cnn::write_phase_csv(&d.rows, &mut w).map_err(io)?;
    std::io::Write::flush(&mut w).map_err(io)?;

    let zero = d.rows.iter().filter(|r| r.entropy == 0.0).count();
    let golden = d.rows.iter().filter(|r| (r.entropy - fibtree::LN_GOLDEN).abs() <= 1e-10).count();
    let other = d.rows.len() - zero - golden;
    let regions: Vec<String> = d.regions().iter().map(|r| r.to_string()).collect();
    let mut body = String::new();
    writeln!(body, "wrote {} rows to {}", d.rows.len(), args.out.display()).unwrap();
    writeln!(body, "boundary points skipped: {}", d.skipped.len()).unwrap();
    writeln!(body, "distinct regions: {} {}", regions.len(), regions.join(" ")).unwrap();
    writeln!(
        body,
        "entropy census: {zero} at 0, {golden} at {:.10} {}, {other} other",
        units.scale(fibtree::LN_GOLDEN),
        units.name()
    )
    .unwrap();
    let holds = other == 0;
    writeln!(body, "dichotomy: {}", if holds { "holds" } else { "VIOLATED" }).unwrap();
    let results = json!({
        "rows": d.rows.len(),
        "skipped": d.skipped.len(),
        "regions": regions,
        "entropy_census": {"zero": zero, "ln_golden": golden, "other": other},
        "dichotomy": holds,
        "out": args.out.display().to_string(),
    });
    let mut outcome = ok(command, None, body, results);
    if !holds {
        outcome.code = 3;
    }
    Ok(outcome)
}
