#[path = "support/golden.rs"]
mod support;

#[test]
fn golden_outputs_match() {
    let outcomes = support::run_all();
    assert!(outcomes.len() >= 10, "expected at least 10 golden cases");
    let failures: Vec<String> = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().err().map(|e| format!("{}: {e}", o.name)))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
