//! Executable claims: each binds a statement about the constructions to a
//! check, an expected JSON value and a cost class.
//!
//! Expected values are plain data. A check produces an observed JSON value;
//! the comparison looks only at the keys present in `expected`, so checks may
//! report extra context (witnesses, timings of sub-steps) alongside.

mod catalog;
mod context;
mod report;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub use catalog::{catalog, CRITERIA};
pub use context::Context;
pub use report::{junit_xml, json_report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostClass {
    Seconds,
    Minutes,
    Hours,
}

impl FromStr for CostClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<CostClass> {
        match s {
            "seconds" => Ok(CostClass::Seconds),
            "minutes" => Ok(CostClass::Minutes),
            "hours" => Ok(CostClass::Hours),
            other => Err(Error::domain(format!("unknown cost class '{other}'"))),
        }
    }
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// A published value (table entry or stated count).
    Published,
    /// Follows from elementary counting.
    Trivial,
    /// Computed here by an independent method.
    Derived,
}

/// How observed values are compared with expected ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Every expected key must match exactly.
    Exact,
    /// Every expected number is a lower bound for the observed one.
    AtLeast,
}

pub type Check = fn(&Context) -> Result<Value>;

pub struct Claim {
    pub id: &'static str,
    /// Acceptance criterion this claim belongs to, 1-based.
    pub criterion: u32,
    pub description: &'static str,
    /// The statement being checked, in words.
    pub statement: &'static str,
    pub expected: Value,
    pub basis: Basis,
    pub cost: CostClass,
    pub comparison: Comparison,
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail {
        /// First mismatching entry: path, expected and observed values.
        counterexample: Value,
    },
    Skipped {
        reason: String,
    },
    Error {
        message: String,
    },
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail { .. } => "fail",
            Status::Skipped { .. } => "skipped",
            Status::Error { .. } => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub criterion: Option<u32>,
    #[serde(flatten)]
    pub status: Status,
    pub expected: Value,
    pub observed: Value,
    pub basis: Option<Basis>,
    pub runtime_ms: u64,
}

impl ClaimResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimFilter {
    All,
    /// Claims of exactly this cost class.
    Cost(CostClass),
    Ids(Vec<String>),
}

impl FromStr for ClaimFilter {
    type Err = Error;

    /// `all`, a cost class, or a comma-separated list of ids.
    fn from_str(s: &str) -> Result<ClaimFilter> {
        let s = s.trim();
        if s == "all" {
            return Ok(ClaimFilter::All);
        }
        if let Ok(c) = s.parse() {
            return Ok(ClaimFilter::Cost(c));
        }
        let ids: Vec<String> = s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect();
        if ids.is_empty() {
            return Err(Error::domain("empty claim filter"));
        }
        Ok(ClaimFilter::Ids(ids))
    }
}

impl fmt::Display for ClaimFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimFilter::All => write!(f, "all"),
            ClaimFilter::Cost(c) => write!(f, "{}", serde_json::to_value(c).unwrap().as_str().unwrap()),
            ClaimFilter::Ids(ids) => write!(f, "{}", ids.join(",")),
        }
    }
}

/// Compares `observed` against `expected`; `None` when they agree, otherwise
/// the first disagreement as `{path, expected, observed}`.
pub fn compare(expected: &Value, observed: &Value, how: Comparison) -> Option<Value> {
    fn walk(path: &str, e: &Value, o: &Value, how: Comparison) -> Option<Value> {
        let mismatch = || Some(serde_json::json!({"path": path, "expected": e, "observed": o}));
        match (e, o) {
            (Value::Object(em), Value::Object(om)) => em.iter().find_map(|(k, ev)| match om.get(k) {
                Some(ov) => walk(&format!("{path}/{k}"), ev, ov, how),
                None => Some(serde_json::json!({"path": format!("{path}/{k}"), "expected": ev, "observed": null})),
            }),
            (Value::Array(ea), Value::Array(oa)) => {
                if ea.len() != oa.len() {
                    return Some(serde_json::json!({
                        "path": path,
                        "expected_len": ea.len(),
                        "observed_len": oa.len(),
                        "first_missing": ea.iter().find(|x| !oa.contains(x)),
                        "first_unexpected": oa.iter().find(|x| !ea.contains(x)),
                    }));
                }
                ea.iter()
                    .zip(oa)
                    .enumerate()
                    .find_map(|(i, (ev, ov))| walk(&format!("{path}/{i}"), ev, ov, how))
            }
            (Value::Number(en), Value::Number(on)) if how == Comparison::AtLeast => {
                match (en.as_f64(), on.as_f64()) {
                    (Some(a), Some(b)) if b >= a => None,
                    _ => mismatch(),
                }
            }
            _ if e == o => None,
            _ => mismatch(),
        }
    }
    walk("", expected, observed, how)
}

fn run_one(claim: &Claim, ctx: &Context) -> ClaimResult {
    let start = Instant::now();
    let outcome = (claim.check)(ctx);
    let runtime_ms = start.elapsed().as_millis() as u64;
    let (status, observed) = match outcome {
        Ok(observed) => match compare(&claim.expected, &observed, claim.comparison) {
            None => (Status::Pass, observed),
            Some(counterexample) => (Status::Fail { counterexample }, observed),
        },
        Err(Error::Capacity { operation, n, limit, .. }) => (
            Status::Skipped {
                reason: format!("capacity: {operation} at n = {n} exceeds {limit}"),
            },
            Value::Null,
        ),
        Err(e) => (Status::Error { message: e.to_string() }, Value::Null),
    };
    ClaimResult {
        id: claim.id.to_string(),
        criterion: Some(claim.criterion),
        status,
        expected: claim.expected.clone(),
        observed,
        basis: Some(claim.basis),
        runtime_ms,
    }
}

/// Runs the selected claims, one cost class after another, in parallel
/// within a class. Unknown ids are reported as errors. Results are sorted
/// by id.
pub fn run_claims(filter: &ClaimFilter, ctx: &Context) -> Vec<ClaimResult> {
    let all = catalog();
    let mut results = Vec::new();
    let selected: Vec<&Claim> = match filter {
        ClaimFilter::All => all.iter().collect(),
        ClaimFilter::Cost(c) => all.iter().filter(|cl| cl.cost == *c).collect(),
        ClaimFilter::Ids(ids) => {
            let wanted: BTreeSet<&str> = ids.iter().map(String::as_str).collect();
            for id in &wanted {
                if !all.iter().any(|c| c.id == *id) {
                    results.push(ClaimResult {
                        id: id.to_string(),
                        criterion: None,
                        status: Status::Error {
                            message: format!("unknown claim id '{id}'"),
                        },
                        expected: Value::Null,
                        observed: Value::Null,
                        basis: None,
                        runtime_ms: 0,
                    });
                }
            }
            all.iter().filter(|c| wanted.contains(c.id)).collect()
        }
    };
    for cost in [CostClass::Seconds, CostClass::Minutes, CostClass::Hours] {
        let batch: Vec<&Claim> = selected.iter().copied().filter(|c| c.cost == cost).collect();
        results.par_extend(batch.par_iter().map(|c| run_one(c, ctx)));
    }
    results.sort_by(|a, b| a.id.cmp(&b.id));
    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn comparison_reports_first_mismatch() {
        let e = json!({"a": 1, "b": [1, 2]});
        assert_eq!(compare(&e, &json!({"a": 1, "b": [1, 2], "extra": 0}), Comparison::Exact), None);
        let miss = compare(&e, &json!({"a": 1, "b": [1, 3]}), Comparison::Exact).unwrap();
        assert_eq!(miss, json!({"path": "/b/1", "expected": 2, "observed": 3}));
        assert!(compare(&e, &json!({"b": [1, 2]}), Comparison::Exact).is_some());
        assert_eq!(compare(&json!({"x": 6}), &json!({"x": 7}), Comparison::AtLeast), None);
        assert!(compare(&json!({"x": 6}), &json!({"x": 5}), Comparison::AtLeast).is_some());
    }

    #[test]
    fn filters_parse() {
        assert_eq!("all".parse::<ClaimFilter>().unwrap(), ClaimFilter::All);
        assert_eq!("seconds".parse::<ClaimFilter>().unwrap(), ClaimFilter::Cost(CostClass::Seconds));
        assert_eq!(
            "APN-M3, U1-M3".parse::<ClaimFilter>().unwrap(),
            ClaimFilter::Ids(vec!["APN-M3".into(), "U1-M3".into()])
        );
        assert!(",".parse::<ClaimFilter>().is_err());
    }

    #[test]
    fn unknown_ids_do_not_stop_the_run() {
        let ctx = Context::new();
        let r = run_claims(&"U1-M3,NOPE".parse().unwrap(), &ctx);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].id, "NOPE");
        assert_eq!(r[0].status.name(), "error");
        assert!(r[1].passed(), "{:?}", r[1]);
    }

    #[test]
    fn catalog_covers_every_criterion() {
        let claims = catalog();
        let ids: BTreeSet<&str> = claims.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), claims.len(), "duplicate ids");
        let covered: BTreeSet<u32> = claims.iter().map(|c| c.criterion).collect();
        let listed: BTreeSet<u32> = CRITERIA.iter().map(|(k, _)| *k).collect();
        assert_eq!(covered, listed);
        for (k, name) in CRITERIA {
            assert!(ids.contains(name), "criterion {k} has no claim named {name}");
        }
    }
}
