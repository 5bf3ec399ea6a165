//! File formats: instances, partitions, trees, crossing reports, experiment
//! CSV and SVG figures.
//!
//! Every writer is deterministic: maps are ordered, floats are printed with a
//! fixed number of digits and exact values are written as rational strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{format_rational, parse_rational, to_f64, Line, MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::incidence::{CurveSet, LineSet};
use crate::partition::PartitionResult;
use crate::spantree::{CrossingMode, CrossingReport, GeoTree, Hyperplane, TreeBuild};

pub const INSTANCE_FORMAT: &str = "polypart-instance/1";
pub const TREE_FORMAT: &str = "polypart-tree/1";
pub const CROSSING_FORMAT: &str = "polypart-crossing/1";
pub const EXPERIMENT_SCHEMA: &str = "1";

/// A point set with optional lines or curves.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub kind: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, String>,
    pub points: Vec<Point>,
    pub lines: Option<LineSet>,
    pub curves: Option<CurveSet>,
}

impl Instance {
    pub fn new(kind: impl Into<String>, points: Vec<Point>) -> Self {
        Instance {
            kind: kind.into(),
            seed: None,
            params: BTreeMap::new(),
            points,
            lines: None,
            curves: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Point::dim)
    }
}

/// An integer written as a JSON number when it fits in `i64`, otherwise as
/// a decimal string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Num(i64),
    Str(String),
}

impl JsonInt {
    fn from_big(x: &BigInt) -> Self {
        i64::try_from(x).map_or_else(|_| JsonInt::Str(x.to_string()), JsonInt::Num)
    }

    fn to_big(&self) -> Result<BigInt> {
        match self {
            JsonInt::Num(n) => Ok(BigInt::from(*n)),
            JsonInt::Str(s) => s.trim().parse().map_err(|_| Error::parse(format!("bad integer {s:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CurvesJson {
    k: usize,
    c: usize,
    b: u32,
    polys: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    format: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default)]
    params: BTreeMap<String, String>,
    dim: usize,
    points: Vec<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    lines: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    curves: Option<CurvesJson>,
}

/// `[num_1, den_1, ..., num_d, den_d]`.
fn point_to_json(p: &Point) -> Vec<JsonInt> {
    p.coords()
        .iter()
        .flat_map(|c| [JsonInt::from_big(c.numer()), JsonInt::from_big(c.denom())])
        .collect()
}

fn point_from_json(v: &[JsonInt], dim: usize) -> Result<Point> {
    if v.len() != 2 * dim {
        return Err(Error::parse(format!("point needs {} integers, got {}", 2 * dim, v.len())));
    }
    let coords = v
        .chunks(2)
        .map(|c| {
            let den = c[1].to_big()?;
            if den == BigInt::from(0) {
                return Err(Error::parse("zero denominator"));
            }
            Ok(Rational::new(c[0].to_big()?, den))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Point::new(coords))
}

pub fn points_to_json(points: &[Point]) -> serde_json::Value {
    serde_json::to_value(points.iter().map(point_to_json).collect::<Vec<_>>()).expect("serialisable")
}

pub fn write_instance(inst: &Instance) -> String {
    let doc = InstanceJson {
        format: INSTANCE_FORMAT.to_string(),
        kind: inst.kind.clone(),
        seed: inst.seed,
        params: inst.params.clone(),
        dim: inst.dim(),
        points: inst.points.iter().map(point_to_json).collect(),
        lines: inst.lines.as_ref().map_or_else(Vec::new, |ls| {
            ls.lines()
                .iter()
                .map(|l| l.coeffs().map(format_rational))
                .collect()
        }),
        curves: inst.curves.as_ref().map(|cs| CurvesJson {
            k: cs.k,
            c: cs.c,
            b: cs.b,
            polys: cs.curves().iter().map(MultiPoly::to_fixture).collect(),
        }),
    };
    to_json_text(&doc)
}

pub fn read_instance(text: &str) -> Result<Instance> {
    let doc: InstanceJson = serde_json::from_str(text)?;
    if doc.format != INSTANCE_FORMAT {
        return Err(Error::parse(format!("unknown instance format {:?}", doc.format)));
    }
    let points = doc
        .points
        .iter()
        .map(|p| point_from_json(p, doc.dim))
        .collect::<Result<Vec<_>>>()?;
    let lines = if doc.lines.is_empty() {
        None
    } else {
        let ls = doc
            .lines
            .iter()
            .map(|[a, b, c]| Line::new(parse_rational(a)?, parse_rational(b)?, parse_rational(c)?))
            .collect::<Result<Vec<_>>>()?;
        Some(LineSet::new(ls))
    };
    let curves = match doc.curves {
        None => None,
        Some(c) => {
            let polys = c
                .polys
                .iter()
                .map(|f| MultiPoly::parse_fixture(2, f))
                .collect::<Result<Vec<_>>>()?;
            Some(CurveSet::new(polys, c.k, c.c, c.b)?)
        }
    };
    Ok(Instance {
        kind: doc.kind,
        seed: doc.seed,
        params: doc.params,
        points,
        lines,
        curves,
    })
}

/// Pretty JSON with each row of a list of lists on one line.
fn to_json_text<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("serialisable");
    let mut out = String::new();
    write_json(&value, 0, &mut out);
    out.push('\n');
    out
}

fn write_json(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String(k.clone()));
                write_json(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", "  ".repeat(indent));
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                if x.is_array() {
                    out.push_str(&x.to_string());
                } else {
                    write_json(x, indent + 1, out);
                }
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", "  ".repeat(indent));
        }
        other => out.push_str(&other.to_string()),
    }
}

fn sign_char(s: i8) -> char {
    match s {
        1 => '+',
        -1 => '-',
        _ => '0',
    }
}

/// Text form of a partition: a `#` header, the factors in fixture format
/// and one sign string per point.
pub fn partition_to_text(pr: &PartitionResult, header: &[String]) -> String {
    let mut out = String::from("# polypart partition\n");
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "dim {}", pr.dim);
    let _ = writeln!(out, "points {}", pr.num_points());
    let _ = writeln!(out, "r {}", format_rational(&pr.r));
    let _ = writeln!(out, "eps {}", format_rational(&pr.eps));
    let _ = writeln!(out, "planned_rounds {}", pr.planned_rounds);
    let _ = writeln!(out, "rounds {}", pr.rounds());
    let _ = writeln!(out, "total_degree {}", pr.total_degree);
    let _ = writeln!(out, "max_cell_size {}", pr.max_cell_size());
    let _ = writeln!(out, "cells {}", pr.cells.len());
    let _ = writeln!(out, "boundary {}", pr.boundary_points.len());
    for line in &pr.log {
        let _ = writeln!(out, "log {line}");
    }
    for (j, f) in pr.factors.iter().enumerate() {
        let _ = writeln!(out, "factor {} degree {} sets {}", j + 1, f.degree(), pr.round_sets[j]);
        out.push_str(&f.to_fixture());
        out.push_str("end\n");
    }
    out.push_str("signs\n");
    for (i, s) in pr.point_signs.iter().enumerate() {
        let txt: String = s.iter().map(|&x| sign_char(x)).collect();
        let _ = writeln!(out, "{i} {txt}");
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    format: String,
    #[serde(default)]
    config: BTreeMap<String, String>,
    dim: usize,
    points: Vec<Vec<JsonInt>>,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    levels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    fallback_edges: Vec<usize>,
}

pub fn write_tree(tree: &GeoTree, build: Option<&TreeBuild>, config: &BTreeMap<String, String>) -> String {
    let doc = TreeJson {
        format: TREE_FORMAT.to_string(),
        config: config.clone(),
        dim: tree.dim(),
        points: tree.points.iter().map(point_to_json).collect(),
        edges: tree.edges.iter().map(|&(u, v)| [u, v]).collect(),
        levels: build.map_or_else(Vec::new, |b| b.log.iter().map(|l| l.to_string()).collect()),
        fallback_edges: build.map_or_else(Vec::new, |b| {
            b.levels.iter().flat_map(|l| l.fallback_edges.iter().copied()).collect()
        }),
    };
    to_json_text(&doc)
}

pub fn read_tree(text: &str) -> Result<GeoTree> {
    let doc: TreeJson = serde_json::from_str(text)?;
    if doc.format != TREE_FORMAT {
        return Err(Error::parse(format!("unknown tree format {:?}", doc.format)));
    }
    let points = doc
        .points
        .iter()
        .map(|p| point_from_json(p, doc.dim))
        .collect::<Result<Vec<_>>>()?;
    GeoTree::new(points, doc.edges.iter().map(|e| (e[0], e[1])).collect())
}

pub fn hyperplane_to_json(h: &Hyperplane) -> serde_json::Value {
    json!({
        "normal": h.normal.iter().map(format_rational).collect::<Vec<_>>(),
        "offset": format_rational(&h.offset),
    })
}

pub fn write_crossing_report(r: &CrossingReport, config: &BTreeMap<String, String>) -> String {
    let (mode, samples, seed) = match r.mode {
        CrossingMode::Exact => ("exact", None, None),
        CrossingMode::Sampled { count, seed } => ("sampled", Some(count), Some(seed)),
    };
    let doc = json!({
        "format": CROSSING_FORMAT,
        "config": config,
        "mode": mode,
        "samples": samples,
        "sample_seed": seed,
        "max_crossings": r.max_crossings,
        "lower_bound": r.is_lower_bound(),
        "candidates_examined": r.candidates_examined,
        "witness": hyperplane_to_json(&r.witness),
    });
    to_json_text(&doc)
}

/// One experiment row. Exact quantities are written as rationals; derived
/// real-valued ratios get a `~` prefix.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentRecord {
    pub suite: String,
    pub instance: String,
    pub kind: String,
    pub n: usize,
    pub m: Option<usize>,
    pub seed: u64,
    pub incidences: Option<usize>,
    pub bound_ratio: Option<f64>,
    pub max_crossing: Option<usize>,
    pub crossing_ratio: Option<f64>,
    pub crossing_mode: Option<String>,
    pub degree: Option<u32>,
    pub cells: Option<usize>,
    pub fallback_edges: Option<usize>,
    pub runtime_ms: Option<u128>,
    pub pass: bool,
    pub failed_checks: Vec<String>,
}

const COLUMNS: [&str; 17] = [
    "schema",
    "suite",
    "instance",
    "kind",
    "n",
    "m",
    "seed",
    "incidences",
    "bound_ratio",
    "max_crossing",
    "crossing_ratio",
    "crossing_mode",
    "degree",
    "cells",
    "fallback_edges",
    "pass",
    "failed_checks",
];

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(String::new, ToString::to_string)
}

fn approx(x: &Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("~{v:.6}"))
}

/// CSV with a `#` header of config lines. The runtime column is present only
/// when `timing` is set, since wall-clock times differ between runs.
pub fn records_to_csv(records: &[ExperimentRecord], header: &[String], timing: bool) -> Result<String> {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut cols: Vec<&str> = COLUMNS.to_vec();
    if timing {
        cols.insert(cols.len() - 2, "runtime_ms");
    }
    w.write_record(&cols).map_err(csv_err)?;
    for r in records {
        let mut row = vec![
            EXPERIMENT_SCHEMA.to_string(),
            r.suite.clone(),
            r.instance.clone(),
            r.kind.clone(),
            r.n.to_string(),
            opt(&r.m),
            r.seed.to_string(),
            opt(&r.incidences),
            approx(&r.bound_ratio),
            opt(&r.max_crossing),
            approx(&r.crossing_ratio),
            opt(&r.crossing_mode),
            opt(&r.degree),
            opt(&r.cells),
            opt(&r.fallback_edges),
            r.pass.to_string(),
            r.failed_checks.join(";"),
        ];
        if timing {
            row.insert(row.len() - 2, opt(&r.runtime_ms));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::parse(e.to_string()))?;
    out.push_str(&String::from_utf8(bytes).expect("utf-8"));
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::parse(e.to_string())
}

/// Static SVG of the points (first two coordinates), the tree edges and the
/// witness line clipped to the bounding box.
pub fn tree_svg(tree: &GeoTree, witness: Option<&Hyperplane>) -> String {
    let pts: Vec<(f64, f64)> = tree
        .points
        .iter()
        .map(|p| {
            let c = p.coords();
            (to_f64(&c[0]), c.get(1).map_or(0.0, to_f64))
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let size = 800.0;
    let pad = 20.0;
    let map = |x: f64, y: f64| {
        (
            pad + (x - x0) / span * (size - 2.0 * pad),
            size - pad - (y - y0) / span * (size - 2.0 * pad),
        )
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for &(u, v) in &tree.edges {
        let (ax, ay) = map(pts[u].0, pts[u].1);
        let (bx, by) = map(pts[v].0, pts[v].1);
        let _ = writeln!(
            out,
            r#"<line x1="{ax:.3}" y1="{ay:.3}" x2="{bx:.3}" y2="{by:.3}" stroke="black" stroke-width="1"/>"#
        );
    }
    for &(x, y) in &pts {
        let (cx, cy) = map(x, y);
        let _ = writeln!(out, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="2.5" fill="steelblue"/>"#);
    }
    if let Some(h) = witness.filter(|h| h.normal.len() == 2) {
        let (a, b, c) = (to_f64(&h.normal[0]), to_f64(&h.normal[1]), to_f64(&h.offset));
        if let Some(((px, py), (qx, qy))) = clip_line(a, b, c, (x0, y0, x0 + span, y0 + span)) {
            let (ax, ay) = map(px, py);
            let (bx, by) = map(qx, qy);
            let _ = writeln!(
                out,
                r#"<line x1="{ax:.3}" y1="{ay:.3}" x2="{bx:.3}" y2="{by:.3}" stroke="crimson" stroke-width="1.5"/>"#
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

type Seg = ((f64, f64), (f64, f64));

/// The part of `a x + b y + c = 0` inside the box, if any.
fn clip_line(a: f64, b: f64, c: f64, bx: (f64, f64, f64, f64)) -> Option<Seg> {
    let (x0, y0, x1, y1) = bx;
    let mut hits: Vec<(f64, f64)> = Vec::new();
    if b != 0.0 {
        for x in [x0, x1] {
            let y = -(a * x + c) / b;
            if (y0..=y1).contains(&y) {
                hits.push((x, y));
            }
        }
    }
    if a != 0.0 {
        for y in [y0, y1] {
            let x = -(b * y + c) / a;
            if (x0..=x1).contains(&x) {
                hits.push((x, y));
            }
        }
    }
    hits.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    hits.dedup();
    match hits.as_slice() {
        [p, .., q] => Some((*p, *q)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use crate::incidence::{generate_circle_instance, generate_extremal_grid};
    use crate::spantree::crossing_number;

    #[test]
    fn instance_round_trip() {
        let (pts, lines) = generate_extremal_grid(2).unwrap();
        let mut inst = Instance::new("extremal-grid", pts);
        inst.params.insert("k".into(), "2".into());
        inst.lines = Some(lines);
        let text = write_instance(&inst);
        assert_eq!(read_instance(&text).unwrap(), inst);
        assert_eq!(write_instance(&read_instance(&text).unwrap()), text);

        let (pts, curves) = generate_circle_instance(3).unwrap();
        let mut inst = Instance::new("circle", pts);
        inst.curves = Some(curves);
        let text = write_instance(&inst);
        assert_eq!(read_instance(&text).unwrap(), inst);
    }

    #[test]
    fn big_and_fractional_coordinates() {
        let big = Rational::new(BigInt::from(10).pow(30), BigInt::from(7));
        let inst = Instance::new("custom", vec![Point::new(vec![big, rat(-1, 3)])]);
        let text = write_instance(&inst);
        assert!(text.contains("\"1000000000000000000000000000000\""));
        assert_eq!(read_instance(&text).unwrap(), inst);
        assert!(read_instance("{\"format\":\"other\"}").is_err());
        let bad = text.replace("\"dim\": 2", "\"dim\": 3");
        assert!(read_instance(&bad).is_err());
    }

    #[test]
    fn tree_round_trip_and_svg() {
        let pts = vec![Point::from_ints(&[0, 0]), Point::from_ints(&[2, 0]), Point::from_ints(&[1, 2])];
        let tree = GeoTree::new(pts, vec![(0, 1), (0, 2)]).unwrap();
        let text = write_tree(&tree, None, &BTreeMap::new());
        assert_eq!(read_tree(&text).unwrap(), tree);
        let r = crossing_number(&tree, CrossingMode::Exact).unwrap();
        let svg = tree_svg(&tree, Some(&r.witness));
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 3);
        let report = write_crossing_report(&r, &BTreeMap::new());
        assert!(report.contains("\"max_crossings\": 2"));
    }

    #[test]
    fn csv_marks_ratios() {
        let rec = ExperimentRecord {
            suite: "st".into(),
            instance: "random-64-0".into(),
            kind: "random".into(),
            n: 64,
            m: Some(64),
            incidences: Some(80),
            bound_ratio: Some(0.5),
            runtime_ms: Some(12),
            pass: true,
            ..Default::default()
        };
        let csv = records_to_csv(std::slice::from_ref(&rec), &["seed 0".into()], false).unwrap();
        assert_eq!(
            csv,
            "# seed 0\nschema,suite,instance,kind,n,m,seed,incidences,bound_ratio,max_crossing,crossing_ratio,crossing_mode,degree,cells,fallback_edges,pass,failed_checks\n1,st,random-64-0,random,64,64,0,80,~0.500000,,,,,,,true,\n"
        );
        let timed = records_to_csv(&[rec], &[], true).unwrap();
        assert!(timed.starts_with("schema,") && timed.contains(",runtime_ms,pass,"));
    }

    #[test]
    fn partition_text() {
        let pts: Vec<Point> = [(-1, -1), (1, -1), (-1, 1), (1, 1)].iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect();
        let pr = crate::partition::build_partition(&pts, &int(4), &int(0), 1).unwrap();
        let text = partition_to_text(&pr, &["seed 1".into()]);
        assert!(text.starts_with("# polypart partition\n# seed 1\ndim 2\npoints 4\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("factor ")).count(), pr.rounds());
        assert_eq!(text.split("signs\n").nth(1).unwrap().lines().count(), 4);
    }
}
