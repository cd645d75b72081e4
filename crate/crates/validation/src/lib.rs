//! Minimal runner for pass/fail criteria: each criterion runs in isolation,
//! panics count as failures, and every result is printed on one line.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

fn panic_message(e: &(dyn std::any::Any + Send)) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

pub fn evaluate(c: &Criterion) -> Outcome {
    catch_unwind(AssertUnwindSafe(c.run))
        .unwrap_or_else(|e| Outcome::new(false, format!("panicked: {}", panic_message(&*e))))
}

pub fn format_line(c: &Criterion, o: &Outcome) -> String {
    format!(
        "criterion {:>2} {} {}: {}",
        c.id,
        if o.pass { "PASS" } else { "FAIL" },
        c.name,
        o.detail
    )
}

/// Runs the criteria whose ids appear in `filter` (all when empty) and
/// returns the number of failures.
pub fn run(criteria: &[Criterion], filter: &[String]) -> usize {
    let mut failed = 0;
    for c in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| *f == c.id.to_string()) {
            continue;
        }
        let o = evaluate(c);
        if !o.pass {
            failed += 1;
        }
        println!("{}", format_line(c, &o));
    }
    if failed > 0 {
        println!("acceptance: {failed} criterion(s) failed");
    } else {
        println!("acceptance: all criteria passed");
    }
    failed
}

/// Entry point for harness-less test targets. Positional arguments select
/// criteria by id; flags passed by the test runner are ignored.
pub fn main_with(criteria: &[Criterion]) -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if run(criteria, &filter) == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
