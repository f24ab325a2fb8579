//! Randomised property suites, 200 cases each.

mod support;

use proptest::prelude::*;
use proptest::test_runner::TestRunner;

fn check<S: Strategy>(strategy: S, property: impl Fn(&S::Value) -> Result<(), TestCaseError>) {
    let mut runner = TestRunner::new(support::config());
    if let Err(e) = runner.run(&strategy, |v| property(&v)) {
        panic!("{e}");
    }
}

#[test]
fn smith_contract() {
    check(support::smith_case(), support::smith_contract);
}

#[test]
fn lattice_points_match_a_box_scan() {
    check(support::lattice_case(), |p| support::lattice_points_match_a_box_scan(p));
}

#[test]
fn duality_is_an_involution_on_reflexive_polytopes() {
    check(support::reflexive_case(), support::duality_is_an_involution_on_reflexive_polytopes);
}

#[test]
fn dual_of_small_polytopes() {
    check(support::small_polytope_case(), |p| support::dual_of_small_polytopes(p));
}

#[test]
fn index_divides_along_faces() {
    check(support::map_case(), support::index_divides_along_faces);
}

#[test]
fn fibred_form_evaluates_like_the_restriction() {
    check(support::fibred_case(), support::fibred_form_evaluates_like_the_restriction);
}
