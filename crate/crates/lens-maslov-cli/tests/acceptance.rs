//! Runs the full table of guaranteed values — the same checks behind the
//! `reproduce` subcommand — and asserts every one passes within its stated
//! runtime budget. One line per check, so a red run says exactly which
//! guarantee broke and what value came out instead.

use lens_maslov_cli::criteria;

#[test]
fn every_guaranteed_value_reproduces() {
    let outcomes = criteria::run_all();
    let mut failures = Vec::new();
    for o in &outcomes {
        let verdict = match (o.pass, o.within_budget()) {
            (true, true) => "pass",
            (true, false) => "FAIL (over budget)",
            (false, _) => "FAIL",
        };
        let budget = match o.budget {
            Some(b) => format!("budget {b:?}"),
            None => "no budget".to_string(),
        };
        println!("{verdict}  {:<24} {:>9.2?} ({budget})  {}", o.name, o.elapsed, o.value);
        if !o.pass || !o.within_budget() {
            failures.push(o.name);
        }
    }
    assert!(failures.is_empty(), "guarantees failed: {}", failures.join(", "));
}
