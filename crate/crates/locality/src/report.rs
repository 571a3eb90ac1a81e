//! Structured verdicts.
//!
//! A clause verdict records the truth value of one statement (`pass`/`fail`)
//! or that it was not evaluated (`na`). `consistent` records whether the
//! checked statement as a whole holds: for an equivalence that means all
//! evaluated clauses agree, for a validator that every clause passed.
//! Clauses named `pre:*` are preconditions; an unmet one makes the whole
//! report not-applicable.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Na,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Clause {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub theorem: String,
    pub clauses: Vec<Clause>,
    pub consistent: bool,
    pub timing_ms: u64,
}

/// Aggregate result of a report; the CLI maps it to an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::NotApplicable => 2,
        }
    }
}

pub const PRE: &str = "pre:";

impl Report {
    pub fn new(theorem: &str) -> Report {
        Report { theorem: theorem.to_string(), clauses: Vec::new(), consistent: true, timing_ms: 0 }
    }

    pub fn push(&mut self, name: &str, verdict: Verdict, witness: Value) -> Verdict {
        self.clauses.push(Clause { name: name.to_string(), verdict, witness });
        verdict
    }

    pub fn check(&mut self, name: &str, ok: bool, witness: Value) -> bool {
        self.push(name, Verdict::from_bool(ok), if ok { Value::Null } else { witness });
        ok
    }

    /// Record a truth value without treating `false` as a failure of the report.
    pub fn value(&mut self, name: &str, v: bool) -> bool {
        self.push(name, Verdict::from_bool(v), Value::Null);
        v
    }

    pub fn na(&mut self, name: &str, why: &str) {
        self.push(name, Verdict::Na, Value::String(why.to_string()));
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn verdict_of(&self, name: &str) -> Option<Verdict> {
        self.clause(name).map(|c| c.verdict)
    }

    /// True iff every clause passed.
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn preconditions_met(&self) -> bool {
        self.clauses.iter().filter(|c| c.name.starts_with(PRE)).all(|c| c.verdict == Verdict::Pass)
    }

    pub fn outcome(&self) -> Outcome {
        if !self.consistent {
            Outcome::Fail
        } else if !self.preconditions_met() {
            Outcome::NotApplicable
        } else {
            Outcome::Pass
        }
    }

    /// Report with the timing field zeroed, for comparisons across runs.
    pub fn without_timing(&self) -> Report {
        Report { timing_ms: 0, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Wall-clock stopwatch that stamps a report.
pub struct Timer(Instant);

impl Timer {
    pub fn start() -> Timer {
        Timer(Instant::now())
    }

    pub fn finish(self, mut r: Report) -> Report {
        r.timing_ms = self.0.elapsed().as_millis() as u64;
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_order_is_fixed() {
        let mut r = Report::new("t");
        r.check("a", true, Value::Null);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"theorem":"t","clauses":[{"name":"a","verdict":"pass","witness":null}],"consistent":true,"timing_ms":0}"#
        );
        assert_eq!(Report::from_json(&s).unwrap(), r);
    }

    #[test]
    fn outcome_rules() {
        let mut r = Report::new("t");
        r.na("pre:hyp", "missing");
        assert_eq!(r.outcome(), Outcome::NotApplicable);
        r.consistent = false;
        assert_eq!(r.outcome(), Outcome::Fail);
        let mut ok = Report::new("t");
        ok.value("clause", false);
        assert_eq!(ok.outcome(), Outcome::Pass);
    }
}
