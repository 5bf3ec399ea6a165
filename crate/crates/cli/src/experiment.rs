//! `polypart experiment`: suites measuring each bound's empirical ratio
//! across a size ladder.

use std::collections::BTreeMap;
use std::fs;
use std::time::Instant;

use polypart::algebra::{format_rational, to_f64};
use polypart::incidence::{
    audit_curve_bounds, audit_szemeredi_trotter_with, count_incidences_curves, generate_circle_instance,
    generate_conic_instance, generate_extremal_grid, generate_random_line_instance, st_bound_ratio, StAuditConfig,
};
use polypart::io::{records_to_csv, tree_svg, ExperimentRecord};
use polypart::spantree::{build_low_crossing_tree_with, crossing_number, grid_points, random_points, TreeConfig};
use polypart::{AuditReport, Rational};
use rayon::prelude::*;

use crate::commands::crossing_mode;
use crate::params::{emit, get_usize, header, parse_params, rational};
use crate::{CliError, ExperimentArgs, Mode};

pub const SUITES: [&str; 4] = ["st", "curves", "tree2d", "tree3d"];

/// Coordinates of random tree instances lie in `[0, 2^20)`.
const TREE_BITS: u32 = 20;

/// Crossing-ratio ceilings applied to tree rows without fallback edges.
const RATIO_CAP_2D: f64 = 12.0;
const RATIO_CAP_3D: f64 = 20.0;

struct Plan {
    suite: String,
    kind: String,
    sizes: Vec<usize>,
    seeds: usize,
    base_seed: u64,
    c: usize,
    r: Option<Rational>,
    eps: Rational,
    mode: Option<Mode>,
    samples: usize,
    svg: bool,
}

pub fn run(args: &ExperimentArgs) -> Result<(), CliError> {
    let plan = plan(args)?;
    let jobs: Vec<(usize, u64)> = plan
        .sizes
        .iter()
        .flat_map(|&s| (0..plan.seeds as u64).map(move |i| (s, i)))
        .collect();
    let rows: Vec<(ExperimentRecord, Option<String>)> = jobs
        .par_iter()
        .map(|&(size, i)| {
            let seed = plan.base_seed.wrapping_add(i);
            let start = Instant::now();
            let mut row = run_row(&plan, size, seed);
            row.0.runtime_ms = Some(start.elapsed().as_millis());
            row
        })
        .collect();

    if let (Some(dir), true) = (&args.svg, plan.svg) {
        fs::create_dir_all(dir).map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
        for (rec, svg) in &rows {
            if let Some(svg) = svg {
                emit(Some(&dir.join(format!("{}.svg", rec.instance))), svg)?;
            }
        }
    }
    let records: Vec<ExperimentRecord> = rows.into_iter().map(|(r, _)| r).collect();
    let csv = records_to_csv(&records, &header(&config(&plan)), args.timing)
        .map_err(|e| CliError::failed("csv", e.to_string()))?;
    emit(args.common.out.as_deref(), &csv)?;

    let failed: Vec<String> = records
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{}: {}", r.instance, r.failed_checks.join(";")))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::failed(failed.join(", "), format!("{} of {} rows failed", failed.len(), records.len())))
    }
}

fn plan(args: &ExperimentArgs) -> Result<Plan, CliError> {
    let suite = args.suite.as_str();
    if !SUITES.contains(&suite) {
        return Err(CliError::usage(format!(
            "unknown suite {suite:?}; expected one of {}",
            SUITES.join(", ")
        )));
    }
    let params = parse_params(&args.params, &["sizes", "seeds", "kind", "c"], None)?;
    let pick = |flag: &Option<String>, key: &str| -> Result<Option<String>, CliError> {
        match (flag, params.get(key)) {
            (Some(_), Some(_)) => Err(CliError::usage(format!("{key} given both as flag and parameter"))),
            (Some(v), None) | (None, Some(v)) => Ok(Some(v.clone())),
            (None, None) => Ok(None),
        }
    };
    let sizes_text = pick(&args.sizes, "sizes")?.unwrap_or_else(|| {
        match suite {
            "st" | "tree2d" => "64,256,1024",
            "curves" => "4,6,8",
            _ => "64,128",
        }
        .to_string()
    });
    let sizes: Vec<usize> = sizes_text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("sizes must be a comma-separated list of integers, got {sizes_text:?}")))?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(CliError::usage("sizes must be positive"));
    }
    let seeds = match pick(&args.seeds.map(|s| s.to_string()), "seeds")? {
        Some(s) => get_usize(&BTreeMap::from([("seeds".to_string(), s)]), "seeds", None)?,
        None => 1,
    };
    if seeds == 0 {
        return Err(CliError::usage("seeds must be positive"));
    }
    let kind = pick(&args.kind, "kind")?.unwrap_or_else(|| if suite == "curves" { "circle" } else { "random" }.to_string());
    let kinds: &[&str] = match suite {
        "st" => &["random", "grid"],
        "curves" => &["circle", "conic"],
        _ => &["random", "grid"],
    };
    if !kinds.contains(&kind.as_str()) {
        return Err(CliError::usage(format!(
            "suite {suite} takes kind {}, got {kind:?}",
            kinds.join(" or ")
        )));
    }
    let c = match pick(&args.c.map(|c| c.to_string()), "c")? {
        Some(v) => get_usize(&BTreeMap::from([("c".to_string(), v)]), "c", None)?,
        None => TreeConfig::default().c,
    };
    if c < 2 {
        return Err(CliError::usage("c must be at least 2"));
    }
    let r = args.r.as_deref().map(|s| rational("r", s)).transpose()?;
    let eps = rational("eps", &args.eps)?;
    if args.samples == 0 {
        return Err(CliError::usage("--samples must be positive"));
    }
    Ok(Plan {
        suite: suite.to_string(),
        kind,
        sizes,
        seeds,
        base_seed: args.common.seed,
        c,
        r,
        eps,
        mode: args.mode,
        samples: args.samples,
        svg: suite.starts_with("tree"),
    })
}

fn config(plan: &Plan) -> BTreeMap<String, String> {
    let mut c = BTreeMap::new();
    let mut set = |k: &str, v: String| {
        c.insert(k.to_string(), v);
    };
    set("command", "experiment".to_string());
    set("suite", plan.suite.clone());
    set("kind", plan.kind.clone());
    set(
        "sizes",
        plan.sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
    );
    set("seeds", plan.seeds.to_string());
    set("seed", plan.base_seed.to_string());
    set("eps", format_rational(&plan.eps));
    if let Some(r) = &plan.r {
        set("r", format_rational(r));
    }
    if plan.suite.starts_with("tree") {
        set("c", plan.c.to_string());
        set(
            "mode",
            match plan.mode {
                Some(Mode::Exact) => "exact",
                Some(Mode::Sampled) => "sampled",
                None => "auto",
            }
            .to_string(),
        );
        set("samples", plan.samples.to_string());
    }
    c
}

fn run_row(plan: &Plan, size: usize, seed: u64) -> (ExperimentRecord, Option<String>) {
    let mut rec = ExperimentRecord {
        suite: plan.suite.clone(),
        instance: format!("{}-{}-{}-s{}", plan.suite, plan.kind, size, seed),
        kind: plan.kind.clone(),
        n: size,
        seed,
        ..ExperimentRecord::default()
    };
    let result = match plan.suite.as_str() {
        "st" => st_row(plan, size, seed, &mut rec).map(|()| None),
        "curves" => curves_row(plan, size, seed, &mut rec).map(|()| None),
        "tree2d" => tree_row(plan, 2, size, seed, &mut rec),
        _ => tree_row(plan, 3, size, seed, &mut rec),
    };
    match result {
        Ok(svg) => {
            rec.pass = rec.failed_checks.is_empty();
            (rec, svg)
        }
        Err(e) => {
            rec.pass = false;
            rec.failed_checks.push(format!("error: {e}"));
            (rec, None)
        }
    }
}

fn record_audit(rec: &mut ExperimentRecord, report: &AuditReport) {
    rec.failed_checks.extend(report.failures().map(|e| e.name.clone()));
}

/// Reads `key=value` words from the audit's partition note.
fn note_value(report: &AuditReport, key: &str) -> Option<String> {
    report.notes.iter().find_map(|n| {
        n.split_whitespace()
            .find_map(|w| w.strip_prefix(key).and_then(|v| v.strip_prefix('=')).map(str::to_string))
    })
}

fn st_row(plan: &Plan, size: usize, seed: u64, rec: &mut ExperimentRecord) -> polypart::Result<()> {
    let (points, lines) = match plan.kind.as_str() {
        "grid" => generate_extremal_grid(size)?,
        _ => generate_random_line_instance(size, size, seed)?,
    };
    rec.m = Some(points.len());
    rec.n = lines.len();
    let cfg = StAuditConfig {
        r: plan.r.clone(),
        eps: plan.eps.clone(),
        seed,
        ..StAuditConfig::default()
    };
    let report = audit_szemeredi_trotter_with(&points, &lines, &cfg)?;
    rec.incidences = Some(polypart::incidence::count_incidences_lines(&points, &lines));
    rec.bound_ratio = Some(to_f64(&st_bound_ratio(&points, &lines)?));
    rec.degree = note_value(&report, "total_degree").and_then(|v| v.parse().ok());
    rec.cells = note_value(&report, "cells").and_then(|v| v.parse().ok());
    record_audit(rec, &report);
    Ok(())
}

fn curves_row(plan: &Plan, size: usize, seed: u64, rec: &mut ExperimentRecord) -> polypart::Result<()> {
    let (points, curves) = match plan.kind.as_str() {
        "conic" => generate_conic_instance(size, size, seed)?,
        _ => generate_circle_instance(size)?,
    };
    rec.m = Some(points.len());
    rec.n = curves.len();
    rec.incidences = Some(count_incidences_curves(&points, &curves));
    let report = audit_curve_bounds(&points, &curves);
    record_audit(rec, &report);
    Ok(())
}

fn tree_row(plan: &Plan, d: usize, size: usize, seed: u64, rec: &mut ExperimentRecord) -> polypart::Result<Option<String>> {
    let points = if plan.kind == "grid" {
        let side = (size as f64).powf(1.0 / d as f64).round() as usize;
        if side.pow(d as u32) != size {
            return Err(polypart::Error::InvalidParameter(format!(
                "grid size {size} is not a perfect power of {d}"
            )));
        }
        grid_points(side, d)
    } else {
        random_points(size, d, TREE_BITS, seed)
    };
    let tc = TreeConfig {
        c: plan.c,
        eps: plan.eps.clone(),
        ..TreeConfig::default()
    };
    let build = build_low_crossing_tree_with(&points, seed, &tc)?;
    if build.tree.validate().is_err() {
        rec.failed_checks.push("tree_valid".to_string());
    }
    let fallback = build.fallback_edge_count();
    rec.fallback_edges = Some(fallback);
    rec.degree = build.log.iter().map(|l| l.total_degree).max();
    rec.cells = build.log.first().map(|l| l.cells);

    let exact_limit = if d == 2 { 512 } else { 128 };
    let mode = plan
        .mode
        .unwrap_or(if size <= exact_limit { Mode::Exact } else { Mode::Sampled });
    let mode = crossing_mode(mode, plan.samples, seed).map_err(|_| polypart::Error::InvalidParameter("samples".into()))?;
    let report = crossing_number(&build.tree, mode)?;
    rec.max_crossing = Some(report.max_crossings);
    rec.crossing_mode = Some(if report.is_lower_bound() { "sampled" } else { "exact" }.to_string());
    let scale = (size as f64).powf(1.0 - 1.0 / d as f64);
    let ratio = report.max_crossings as f64 / scale;
    rec.crossing_ratio = Some(ratio);
    let cap = if d == 2 { RATIO_CAP_2D } else { RATIO_CAP_3D };
    if fallback == 0 && ratio > cap {
        rec.failed_checks.push("crossing_ratio".to_string());
    }
    if d == 2 && plan.kind == "grid" && 4 * report.max_crossings * report.max_crossings < size {
        rec.failed_checks.push("grid_lower_bound".to_string());
    }
    Ok(plan.svg.then(|| tree_svg(&build.tree, Some(&report.witness))))
}
