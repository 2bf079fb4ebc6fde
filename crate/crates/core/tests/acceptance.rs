//! Acceptance suite: runs every quantitative criterion the toolkit commits
//! to and prints one pass/fail line per criterion.
//!
//! Run with `cargo test -p coulosc --test acceptance -- --nocapture` to see
//! the lines on success as well.

use coulosc::checks::{run_all, CheckConfig};

#[test]
fn acceptance_criteria() {
    let outcomes = run_all(&CheckConfig::default());
    let mut failed = Vec::new();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<28}  {}", o.id, o.details);
        if !o.passed {
            failed.push(o.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
