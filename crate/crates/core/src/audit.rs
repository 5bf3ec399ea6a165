//! Named inequality checks.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::algebra::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    pub name: String,
    pub observed: Rational,
    pub bound: Rational,
    pub pass: bool,
}

/// A list of `observed <= bound` checks plus free-form notes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&mut self, name: impl Into<String>, observed: Rational, bound: Rational) -> bool {
        let pass = observed <= bound;
        self.entries.push(AuditEntry {
            name: name.into(),
            observed,
            bound,
            pass,
        });
        pass
    }

    pub fn check_int(&mut self, name: impl Into<String>, observed: impl Into<BigInt>, bound: impl Into<BigInt>) -> bool {
        self.check(
            name,
            Rational::from_integer(observed.into()),
            Rational::from_integer(bound.into()),
        )
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn extend(&mut self, other: AuditReport) {
        self.entries.extend(other.entries);
        self.notes.extend(other.notes);
    }

    /// CSV with columns `check_name,observed,bound,pass`; notes become
    /// leading `#` comment lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        out.push_str("check_name,observed,bound,pass\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                e.name,
                format_rational(&e.observed),
                format_rational(&e.bound),
                e.pass
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn pass_iff_observed_at_most_bound() {
        let mut r = AuditReport::new();
        assert!(r.check("eq", rat(3, 2), rat(3, 2)));
        assert!(!r.check("over", rat(2, 1), rat(3, 2)));
        assert!(r.check_int("ints", 4, 9));
        assert!(!r.all_pass());
        assert_eq!(r.failures().count(), 1);
        r.note("seed 7");
        assert_eq!(
            r.to_csv(),
            "# seed 7\ncheck_name,observed,bound,pass\neq,3/2,3/2,true\nover,2,3/2,false\nints,4,9,true\n"
        );
    }
}
