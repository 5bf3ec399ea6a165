//! `polypart gen`: instance generators.

use std::collections::BTreeMap;

use polypart::incidence::{
    generate_circle_instance, generate_conic_instance, generate_extremal_grid, generate_random_line_instance,
};
use polypart::io::{write_instance, Instance};
use polypart::spantree::random_points;
use polypart::Point;

use crate::params::{emit, get_usize, parse_params};
use crate::{CliError, GenArgs};

pub const KINDS: [&str; 6] = ["grid", "random", "circle", "extremal-grid", "random-lines", "conic"];

pub fn run(args: &GenArgs) -> Result<(), CliError> {
    let allowed: &[&str] = match args.kind.as_str() {
        "grid" => &["shape", "side", "d"],
        "random" => &["n", "d", "bits"],
        "circle" => &["g"],
        "extremal-grid" => &["k"],
        "random-lines" => &["m", "n"],
        "conic" => &["g", "count"],
        other => {
            return Err(CliError::usage(format!(
                "unknown kind {other:?}; expected one of {}",
                KINDS.join(", ")
            )))
        }
    };
    let positional = (args.kind == "grid").then_some("shape");
    let params = parse_params(&args.params, allowed, positional)?;
    let inst = make_instance(&args.kind, &params, args.common.seed)?;
    emit(args.common.out.as_deref(), &write_instance(&inst))
}

/// Builds the instance and records every parameter, defaults included.
pub fn make_instance(kind: &str, params: &BTreeMap<String, String>, seed: u64) -> Result<Instance, CliError> {
    let core = |e| CliError::from_core("gen", e);
    let mut used = BTreeMap::new();
    let mut take = |key: &str, default: Option<usize>| -> Result<usize, CliError> {
        let v = get_usize(params, key, default)?;
        used.insert(key.to_string(), v.to_string());
        Ok(v)
    };
    let mut inst = match kind {
        "grid" => {
            let sides = grid_shape(params)?;
            let shape = sides.iter().map(usize::to_string).collect::<Vec<_>>().join("x");
            used.insert("shape".to_string(), shape);
            Instance::new(kind, grid(&sides))
        }
        "random" => {
            let n = take("n", None)?;
            let d = take("d", Some(2))?;
            let bits = take("bits", Some(16))?;
            if n == 0 || !(1..=3).contains(&d) || !(1..=40).contains(&bits) {
                return Err(CliError::usage("random needs n >= 1, d in 1..=3 and bits in 1..=40"));
            }
            Instance::new(kind, random_points(n, d, bits as u32, seed))
        }
        "circle" => {
            let (points, curves) = generate_circle_instance(take("g", None)?).map_err(core)?;
            let mut inst = Instance::new(kind, points);
            inst.curves = Some(curves);
            inst
        }
        "extremal-grid" => {
            let (points, lines) = generate_extremal_grid(take("k", None)?).map_err(core)?;
            let mut inst = Instance::new(kind, points);
            inst.lines = Some(lines);
            inst
        }
        "random-lines" => {
            let m = take("m", None)?;
            let n = take("n", Some(m))?;
            let (points, lines) = generate_random_line_instance(m, n, seed).map_err(core)?;
            let mut inst = Instance::new(kind, points);
            inst.lines = Some(lines);
            inst
        }
        "conic" => {
            let g = take("g", None)?;
            let count = take("count", Some(g))?;
            let (points, curves) = generate_conic_instance(g, count, seed).map_err(core)?;
            let mut inst = Instance::new(kind, points);
            inst.curves = Some(curves);
            inst
        }
        other => return Err(CliError::usage(format!("unknown kind {other:?}"))),
    };
    inst.seed = Some(seed);
    inst.params = used;
    Ok(inst)
}

/// `shape=AxB[xC]`, or `side` and `d`.
fn grid_shape(params: &BTreeMap<String, String>) -> Result<Vec<usize>, CliError> {
    let sides: Vec<usize> = match params.get("shape") {
        Some(s) => {
            if params.contains_key("side") || params.contains_key("d") {
                return Err(CliError::usage("give either a shape like 4x4 or side and d"));
            }
            s.split(['x', 'X'])
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::usage(format!("bad grid shape {s:?}; expected e.g. 4x4")))?
        }
        None => {
            let side = get_usize(params, "side", None)?;
            let d = get_usize(params, "d", Some(2))?;
            vec![side; d]
        }
    };
    if sides.is_empty() || sides.len() > 3 || sides.contains(&0) {
        return Err(CliError::usage("grid needs 1 to 3 positive side lengths"));
    }
    Ok(sides)
}

/// Integer grid `{0..a-1} x {0..b-1} x ...` in lexicographic order.
pub fn grid(sides: &[usize]) -> Vec<Point> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for &s in sides {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..s as i64).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.iter().map(|c| Point::from_ints(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(words: &[&str]) -> BTreeMap<String, String> {
        words
            .iter()
            .map(|w| {
                let (k, v) = w.split_once('=').unwrap();
                (k.to_string(), v.to_string())
            })
            .collect()
    }

    #[test]
    fn grids() {
        let inst = make_instance("grid", &p(&["shape=4x4"]), 0).unwrap();
        assert_eq!(inst.points.len(), 16);
        assert_eq!(inst.points[5], Point::from_ints(&[1, 1]));
        let inst = make_instance("grid", &p(&["side=3", "d=3"]), 0).unwrap();
        assert_eq!(inst.points.len(), 27);
        assert_eq!(inst.params["shape"], "3x3x3");
        assert!(make_instance("grid", &p(&["shape=4y4"]), 0).is_err());
        assert!(make_instance("grid", &p(&["shape=0x4"]), 0).is_err());
    }

    #[test]
    fn extremal_grid() {
        let inst = make_instance("extremal-grid", &p(&["k=2"]), 0).unwrap();
        assert_eq!(inst.points.len(), 16);
        assert_eq!(inst.lines.unwrap().len(), 8);
        assert!(matches!(
            make_instance("extremal-grid", &p(&["k=0"]), 0),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn defaults_are_recorded() {
        let inst = make_instance("random", &p(&["n=10"]), 3).unwrap();
        assert_eq!(inst.params["d"], "2");
        assert_eq!(inst.params["bits"], "16");
        assert_eq!(inst.seed, Some(3));
    }
}
