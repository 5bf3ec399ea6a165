//! The single-instance subcommands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use polypart::algebra::format_rational;
use polypart::incidence::{
    audit_curve_bounds, audit_szemeredi_trotter_with, count_incidences_curves, count_incidences_lines,
    dual_incidence_count, random_lines_near, st_bound_ratio, StAuditConfig,
};
use polypart::io::{partition_to_text, read_tree, tree_svg, write_crossing_report, write_tree};
use polypart::partition::{audit_partition, build_partition_with, PartitionConfig};
use polypart::spantree::{build_low_crossing_tree_with, crossing_number, CrossingMode, TreeConfig};
use polypart::{AuditReport, Rational};

use crate::params::{emit, header, load_instance, rational, read_text};
use crate::{AuditArgs, CliError, CrossingsArgs, IncidencesArgs, Mode, PartitionArgs, TreeArgs};

fn base_config(command: &str, input: &Path, seed: u64) -> BTreeMap<String, String> {
    let mut c = BTreeMap::new();
    c.insert("command".to_string(), command.to_string());
    c.insert("input".to_string(), input.display().to_string());
    c.insert("seed".to_string(), seed.to_string());
    c
}

fn set(config: &mut BTreeMap<String, String>, key: &str, value: impl ToString) {
    config.insert(key.to_string(), value.to_string());
}

pub fn partition(args: &PartitionArgs) -> Result<(), CliError> {
    let inst = load_instance(&args.input)?;
    let r = rational("r", &args.r)?;
    let eps = rational("eps", &args.eps)?;
    let mut config = base_config("partition", &args.input, args.common.seed);
    set(&mut config, "r", format_rational(&r));
    set(&mut config, "eps", format_rational(&eps));
    let pr = build_partition_with(&inst.points, &r, &eps, args.common.seed, &PartitionConfig::default())
        .map_err(|e| CliError::from_core("partition", e))?;
    emit(args.common.out.as_deref(), &partition_to_text(&pr, &header(&config)))
}

pub fn incidences(args: &IncidencesArgs) -> Result<(), CliError> {
    let inst = load_instance(&args.input)?;
    let mut config = base_config("incidences", &args.input, args.common.seed);
    let mut out = String::new();
    if let Some(lines) = &inst.lines {
        let i = count_incidences_lines(&inst.points, lines);
        let (dual, shear) = dual_incidence_count(&inst.points, lines, args.common.seed)
            .map_err(|e| CliError::from_core("dual_incidences", e))?;
        set(&mut config, "family", "lines");
        for h in header(&config) {
            let _ = writeln!(out, "# {h}");
        }
        let _ = writeln!(out, "points {}", inst.points.len());
        let _ = writeln!(out, "lines {}", lines.len());
        let _ = writeln!(out, "incidences {i}");
        let _ = writeln!(out, "dual_incidences {dual}");
        let _ = writeln!(out, "dual_shear {}", format_rational(&shear));
        if !inst.points.is_empty() && !lines.is_empty() {
            let ratio = st_bound_ratio(&inst.points, lines).map_err(|e| CliError::from_core("ratio", e))?;
            let _ = writeln!(out, "bound_ratio ~{:.6}", polypart::algebra::to_f64(&ratio));
        }
        emit(args.common.out.as_deref(), &out)?;
        if dual != i {
            return Err(CliError::failed("dual_incidences", format!("primal {i} but dual {dual}")));
        }
        Ok(())
    } else if let Some(curves) = &inst.curves {
        set(&mut config, "family", "curves");
        for h in header(&config) {
            let _ = writeln!(out, "# {h}");
        }
        let _ = writeln!(out, "points {}", inst.points.len());
        let _ = writeln!(out, "curves {}", curves.len());
        let _ = writeln!(out, "k {} c {} b {}", curves.k, curves.c, curves.b);
        let _ = writeln!(out, "incidences {}", count_incidences_curves(&inst.points, curves));
        emit(args.common.out.as_deref(), &out)
    } else {
        Err(CliError::usage("instance has neither lines nor curves"))
    }
}

pub fn tree(args: &TreeArgs) -> Result<(), CliError> {
    let inst = load_instance(&args.input)?;
    let eps = rational("eps", &args.eps)?;
    let mut config = base_config("tree", &args.input, args.common.seed);
    set(&mut config, "c", args.c);
    set(&mut config, "eps", format_rational(&eps));
    let tc = TreeConfig {
        c: args.c,
        eps,
        ..TreeConfig::default()
    };
    let build = build_low_crossing_tree_with(&inst.points, args.common.seed, &tc)
        .map_err(|e| CliError::from_core("tree", e))?;
    build
        .tree
        .validate()
        .map_err(|e| CliError::failed("tree_valid", e.to_string()))?;
    if let Some(svg) = &args.svg {
        emit(Some(svg), &tree_svg(&build.tree, None))?;
    }
    emit(args.common.out.as_deref(), &write_tree(&build.tree, Some(&build), &config))
}

pub fn crossing_mode(mode: Mode, samples: usize, seed: u64) -> Result<CrossingMode, CliError> {
    match mode {
        Mode::Exact => Ok(CrossingMode::Exact),
        Mode::Sampled if samples == 0 => Err(CliError::usage("--samples must be positive")),
        Mode::Sampled => Ok(CrossingMode::Sampled { count: samples, seed }),
    }
}

pub fn crossings(args: &CrossingsArgs) -> Result<(), CliError> {
    let tree = read_tree(&read_text(&args.input)?).map_err(|e| CliError::usage(format!("{}: {e}", args.input.display())))?;
    let mode = crossing_mode(args.mode, args.samples, args.common.seed)?;
    let mut config = base_config("crossings", &args.input, args.common.seed);
    set(&mut config, "mode", if args.mode == Mode::Exact { "exact" } else { "sampled" });
    if args.mode == Mode::Sampled {
        set(&mut config, "samples", args.samples);
    }
    let report = crossing_number(&tree, mode).map_err(|e| CliError::from_core("crossings", e))?;
    if let Some(svg) = &args.svg {
        emit(Some(svg), &tree_svg(&tree, Some(&report.witness)))?;
    }
    emit(args.common.out.as_deref(), &write_crossing_report(&report, &config))
}

pub fn audit(args: &AuditArgs) -> Result<(), CliError> {
    let inst = load_instance(&args.input)?;
    let eps = rational("eps", &args.eps)?;
    let r: Option<Rational> = args.r.as_deref().map(|s| rational("r", s)).transpose()?;
    let seed = args.common.seed;
    let mut config = base_config("audit", &args.input, seed);
    set(&mut config, "eps", format_rational(&eps));
    if let Some(r) = &r {
        set(&mut config, "r", format_rational(r));
    }
    let report: AuditReport = if let Some(lines) = &inst.lines {
        set(&mut config, "family", "lines");
        let cfg = StAuditConfig {
            r,
            eps,
            seed,
            ..StAuditConfig::default()
        };
        audit_szemeredi_trotter_with(&inst.points, lines, &cfg).map_err(|e| CliError::from_core("partition", e))?
    } else if let Some(curves) = &inst.curves {
        set(&mut config, "family", "curves");
        audit_curve_bounds(&inst.points, curves)
    } else {
        let r = r.ok_or_else(|| CliError::usage("--r is required for an instance without lines or curves"))?;
        set(&mut config, "family", "points");
        set(&mut config, "lines", args.lines);
        let pr = build_partition_with(&inst.points, &r, &eps, seed, &PartitionConfig::default())
            .map_err(|e| CliError::from_core("partition", e))?;
        let lines = if inst.dim() == 2 && args.lines > 0 {
            random_lines_near(&inst.points, args.lines, seed).map_err(|e| CliError::from_core("lines", e))?
        } else {
            Vec::new()
        };
        audit_partition(&pr, &inst.points, &r, &lines)
    };
    let mut text = String::new();
    for h in header(&config) {
        let _ = writeln!(text, "# {h}");
    }
    text.push_str(&report.to_csv());
    emit(args.common.out.as_deref(), &text)?;
    let failed: Vec<&str> = report.failures().map(|e| e.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::failed(failed.join(", "), "audit entries exceed their bounds"))
    }
}
