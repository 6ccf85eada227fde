//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. The underlying checks live in `quiverdepth::suite` and are the
//! same ones `quiverdepth paper-suite` runs.

use quiverdepth::suite::run_item;

fn run_criterion(criterion: &str, item_ids: &[&str]) {
    let mut failures = Vec::new();
    for id in item_ids {
        let item = run_item(id).unwrap_or_else(|| panic!("unknown suite item '{id}'"));
        println!(
            "criterion {criterion}: {} {} ({} ms): {}",
            if item.passed { "PASS" } else { "FAIL" },
            item.id,
            item.millis,
            item.detail
        );
        if !item.passed {
            failures.push(format!("{}: {}", item.id, item.detail));
        }
    }
    assert!(
        failures.is_empty(),
        "criterion {criterion} failed: {}",
        failures.join("; ")
    );
}

#[test]
fn criterion_01_top_subalgebra_depth_three() {
    run_criterion(
        "1",
        &[
            "sec4-top-linear-n2",
            "sec4-top-linear-n3",
            "sec4-top-linear-n4",
            "sec4-top-kronecker",
            "sec4-top-tree",
        ],
    );
}

#[test]
fn criterion_02_arrow_subalgebra_depth_four() {
    run_criterion(
        "2",
        &[
            "sec5-arrow-linear-n2",
            "sec5-arrow-linear-n3",
            "sec5-arrow-kronecker",
        ],
    );
}

#[test]
fn criterion_03_depth_table_is_independent_of_n() {
    run_criterion("3", &["sec6-diagonal-table", "sec6-arrow-table"]);
}

#[test]
fn criterion_04_jordan_cases() {
    // The J_3 item asserts the recorded lower bound (at_least 6 with
    // cutoff 5, witnessed by a B-B failure at the tensor cube). The exact
    // engine computation certifies depth 5 instead (see the unit test
    // jordan_three_depth_and_dimensions for the hand-checked Krull-Schmidt
    // decomposition), so this criterion fails and is expected to fail
    // until the recorded value is corrected.
    run_criterion("4", &["sec6-jordan-j2", "sec6-jordan-j3-bound"]);
}

#[test]
fn criterion_05_tensor_square_decomposition() {
    run_criterion("5", &["sec5-tensor-square-summands"]);
}

#[test]
fn criterion_06_tensor_square_corner_formula() {
    run_criterion("6", &["sec4-tensor-square-corners"]);
}

#[test]
fn criterion_07_direct_product_depth() {
    run_criterion("7", &["sec3-product-depth"]);
}

#[test]
fn criterion_08_triangular_corner_lemma() {
    run_criterion("8", &["sec3-corner-lemma"]);
}

#[test]
fn criterion_09_quotient_monotonicity() {
    run_criterion(
        "9",
        &["sec3-quotient-monotone-t3", "sec3-quotient-monotone-t4"],
    );
}

#[test]
fn criterion_10_indecomposability() {
    run_criterion("10", &["sec5-indecomposable-ends"]);
}

#[test]
fn criterion_11_property_suites() {
    run_criterion(
        "11",
        &[
            "prop-inadd-randomized",
            "prop-flag-implications",
            "prop-obstruction-agreement",
            "prop-radical-agreement",
        ],
    );
}

#[test]
fn triangular_bound_inequalities() {
    run_criterion("3.x", &["sec3-triangular-bound"]);
}
