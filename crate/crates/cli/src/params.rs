//! Parameter parsing and output helpers shared by the subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use polypart::algebra::parse_rational;
use polypart::io::{read_instance, Instance};
use polypart::Rational;

use crate::CliError;

/// `key=value` words; a bare word is stored under `positional`.
pub fn parse_params(words: &[String], allowed: &[&str], positional: Option<&str>) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for w in words {
        let (k, v) = match w.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
            None => match positional {
                Some(p) => (p.to_string(), w.trim().to_string()),
                None => return Err(CliError::usage(format!("expected key=value, got {w:?}"))),
            },
        };
        if !allowed.contains(&k.as_str()) {
            return Err(CliError::usage(format!(
                "unknown parameter {k:?}; expected one of {}",
                allowed.join(", ")
            )));
        }
        if out.insert(k.clone(), v).is_some() {
            return Err(CliError::usage(format!("parameter {k:?} given twice")));
        }
    }
    Ok(out)
}

pub fn get_usize(params: &BTreeMap<String, String>, key: &str, default: Option<usize>) -> Result<usize, CliError> {
    match params.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| CliError::usage(format!("{key} must be a non-negative integer, got {v:?}"))),
        None => default.ok_or_else(|| CliError::usage(format!("missing parameter {key}"))),
    }
}

pub fn rational(name: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|_| CliError::usage(format!("--{name} must be a rational such as 3 or 1/20, got {s:?}")))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let text = read_text(path)?;
    read_instance(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Writes to the file, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `key=value` lines echoing the run configuration.
pub fn header(config: &BTreeMap<String, String>) -> Vec<String> {
    config.iter().map(|(k, v)| format!("{k}={v}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params() {
        let words: Vec<String> = ["4x4", "d=2"].iter().map(|s| s.to_string()).collect();
        let p = parse_params(&words, &["shape", "d"], Some("shape")).unwrap();
        assert_eq!(p["shape"], "4x4");
        assert_eq!(get_usize(&p, "d", None).unwrap(), 2);
        assert!(get_usize(&p, "n", None).is_err());
        assert_eq!(get_usize(&p, "n", Some(5)).unwrap(), 5);
        assert!(parse_params(&words, &["d"], None).is_err());
        let dup: Vec<String> = ["d=1", "d=2"].iter().map(|s| s.to_string()).collect();
        assert!(parse_params(&dup, &["d"], None).is_err());
    }
}
