//! Verification reports with pass/fail/skipped entries.

use std::fmt::Write as _;

use serde::Serialize;

pub const SCHEMA: &str = "gpdcentre/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub check_id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub facts: Vec<(String, String)>,
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { schema: SCHEMA, command: command.into(), ..Default::default() }
    }

    /// Records a check; `Err` carries the witness.
    pub fn check(&mut self, id: impl Into<String>, outcome: std::result::Result<(), String>) -> bool {
        let ok = outcome.is_ok();
        let (status, witness) = match outcome {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        self.push(Entry { check_id: id.into(), status, witness });
        ok
    }

    pub fn pass(&mut self, id: impl Into<String>) {
        self.check(id, Ok(()));
    }

    pub fn fail(&mut self, id: impl Into<String>, witness: impl Into<String>) {
        self.check(id, Err(witness.into()));
    }

    pub fn skip(&mut self, id: impl Into<String>) {
        self.push(Entry { check_id: id.into(), status: Status::Skipped, witness: None });
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl ToString) {
        self.facts.push((key.into(), value.to_string()));
    }

    fn push(&mut self, e: Entry) {
        match e.status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Skipped => self.summary.skipped += 1,
        }
        self.entries.push(e);
    }

    /// Appends another report's entries under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for (k, v) in other.facts {
            self.facts.push((format!("{prefix}.{k}"), v));
        }
        for mut e in other.entries {
            e.check_id = format!("{prefix}.{}", e.check_id);
            self.push(e);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    /// The first failing entry, if any.
    pub fn first_failure(&self) -> Option<&Entry> {
        self.entries.iter().find(|e| e.status == Status::Fail)
    }

    pub fn status_of(&self, id: &str) -> Option<Status> {
        self.entries.iter().find(|e| e.check_id == id).map(|e| e.status)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} ({})", self.command, self.schema);
        for (k, v) in &self.facts {
            let _ = writeln!(s, "{k} = {v}");
        }
        for e in &self.entries {
            let tag = match e.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            match &e.witness {
                Some(w) => {
                    let _ = writeln!(s, "[{tag}] {}: {w}", e.check_id);
                }
                None => {
                    let _ = writeln!(s, "[{tag}] {}", e.check_id);
                }
            }
        }
        let _ = writeln!(
            s,
            "summary: {} pass, {} fail, {} skipped",
            self.summary.pass, self.summary.fail, self.summary.skipped
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_present_iff_fail() {
        let mut r = Report::new("x");
        r.pass("a");
        r.fail("b", "counterexample");
        r.skip("c");
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, skipped: 1 });
        for e in &r.entries {
            assert_eq!(e.witness.is_some(), e.status == Status::Fail);
        }
        let json = r.to_json();
        assert!(json.contains("\"schema\": \"gpdcentre/1\""));
        assert!(json.contains("\"status\": \"skipped\""));
        assert!(!r.all_pass());
    }
}
