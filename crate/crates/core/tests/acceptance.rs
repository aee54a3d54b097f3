//! One line per acceptance criterion, from the claim registry.
//!
//! A criterion passes when every claim filed under it passes. The process
//! fails if a claim errors, or if a criterion fails that is not listed in
//! `KNOWN_FAILURES`; those are still printed as FAIL with their
//! counterexample.

use std::process::ExitCode;

use apnlab::claims::{catalog, run_claims, ClaimFilter, Context, Status, CRITERIA};

/// Claims whose expected value cannot be met as stated.
const KNOWN_FAILURES: [(&str, &str); 2] = [
    (
        "PERMPOLY",
        "X^6 + X^3 + X, the (3, 1, 1) case, takes only 5 values on GF(8)",
    ),
    (
        "F0/F1-REGIONS-SMOKE",
        "the region of F itself is reached only from the thickness-0 space, so thickness {2, 9} gives 5 and 7",
    ),
];

fn main() -> ExitCode {
    let ctx = Context::new();
    let results = run_claims(&ClaimFilter::All, &ctx);
    let claims = catalog();
    let mut unexpected = Vec::new();
    for (k, name) in CRITERIA {
        let mine: Vec<_> = results.iter().filter(|r| r.criterion == Some(k)).collect();
        let ok = !mine.is_empty() && mine.iter().all(|r| r.passed());
        let ms: u64 = mine.iter().map(|r| r.runtime_ms).sum();
        println!("{:>2} {:<16} {} ({ms} ms)", k, name, if ok { "PASS" } else { "FAIL" });
        for r in &mine {
            if mine.len() > 1 {
                println!("     {:<22} {}", r.id, r.status.name().to_uppercase());
            }
            match &r.status {
                Status::Pass => {}
                Status::Fail { counterexample } => {
                    let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == r.id);
                    println!("     {}: {counterexample}", r.id);
                    match known {
                        Some((_, why)) => println!("     known: {why}"),
                        None => unexpected.push(r.id.clone()),
                    }
                }
                Status::Skipped { reason } => {
                    println!("     {}: skipped, {reason}", r.id);
                    unexpected.push(r.id.clone());
                }
                Status::Error { message } => {
                    println!("     {}: error, {message}", r.id);
                    unexpected.push(r.id.clone());
                }
            }
        }
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    println!("{passed}/{} claims pass ({} criteria)", claims.len(), CRITERIA.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
