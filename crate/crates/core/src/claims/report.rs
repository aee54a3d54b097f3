//! Machine-readable run reports.

use serde_json::{json, Value};

use super::{ClaimResult, Status};

pub fn json_report(results: &[ClaimResult]) -> Value {
    let count = |name: &str| results.iter().filter(|r| r.status.name() == name).count();
    json!({
        "summary": {
            "total": results.len(),
            "pass": count("pass"),
            "fail": count("fail"),
            "skipped": count("skipped"),
            "error": count("error"),
        },
        "results": results,
    })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn junit_xml(results: &[ClaimResult]) -> String {
    let count = |name: &str| results.iter().filter(|r| r.status.name() == name).count();
    let total_ms: u64 = results.iter().map(|r| r.runtime_ms).sum();
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out += &format!(
        "<testsuite name=\"apnlab-claims\" tests=\"{}\" failures=\"{}\" errors=\"{}\" skipped=\"{}\" time=\"{:.3}\">\n",
        results.len(),
        count("fail"),
        count("error"),
        count("skipped"),
        total_ms as f64 / 1000.0
    );
    for r in results {
        out += &format!(
            "  <testcase classname=\"claims\" name=\"{}\" time=\"{:.3}\"",
            escape(&r.id),
            r.runtime_ms as f64 / 1000.0
        );
        match &r.status {
            Status::Pass => out += "/>\n",
            Status::Fail { counterexample } => {
                out += &format!(
                    ">\n    <failure message=\"{}\"/>\n  </testcase>\n",
                    escape(&counterexample.to_string())
                );
            }
            Status::Skipped { reason } => {
                out += &format!(">\n    <skipped message=\"{}\"/>\n  </testcase>\n", escape(reason));
            }
            Status::Error { message } => {
                out += &format!(">\n    <error message=\"{}\"/>\n  </testcase>\n", escape(message));
            }
        }
    }
    out += "</testsuite>\n";
    out
}
