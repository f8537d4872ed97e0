use rootsigma_core::root_datum::fixtures;
use rootsigma_core::verify::{run_suite, SuiteOptions};

#[test]
fn doubled_a2_full_suite() {
    let d = fixtures::doubled_a2();
    let certs = run_suite(&d.to_raw(), "doubled_a2", &SuiteOptions::default());
    for c in &certs {
        assert!(c.passed(), "{:?}", c);
    }
    let sandwich = certs.iter().find(|c| c.lemma == "sandwich").unwrap();
    assert!(sandwich.universe > 0 && sandwich.universe <= 36 * 36 * 36);
}
