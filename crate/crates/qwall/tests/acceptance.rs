//! Acceptance checklist, one pass/fail line per criterion.

use qwall::acceptance;

#[test]
fn acceptance_criteria() {
    let reports = acceptance::run_all();
    let mut all_passed = true;
    for r in &reports {
        println!("{}", r.line());
        all_passed &= r.passed;
    }
    assert!(all_passed, "at least one acceptance criterion failed");
}
