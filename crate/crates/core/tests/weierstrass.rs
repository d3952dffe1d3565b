use quartix_core::strata;
use quartix_core::weierstrass::{hyperflex_form_seeded, point_flex_type, FlexType};
use quartix_core::{Field, TernaryQuartic};

#[test]
fn counts_do_not_depend_on_the_seed() {
    let f = strata::builtin_model("Psi").unwrap();
    for seed in [1, 2, 0xdead_beef] {
        let r = hyperflex_form_seeded(&f, seed).unwrap();
        assert_eq!((r.hyperflex_count, r.flex_count), (12, 12), "seed {seed}");
    }
}

#[test]
fn z1_member_with_eight_hyperflexes() {
    let f = strata::z1_model(&Field::rationals().from_i64(3)).unwrap();
    let r = hyperflex_form_seeded(&f, 5).unwrap();
    assert_eq!(r.hyperflex_count, 8);
    assert_eq!(r.flex_count, 16);
}

#[test]
fn generic_curve_has_24_ordinary_flexes() {
    let f = TernaryQuartic::parse("X^4 + 2Y^4 + 3Z^4 + X^2YZ - XY^3 + 5YZ^3", &Field::rationals()).unwrap();
    let r = hyperflex_form_seeded(&f, 9).unwrap();
    assert_eq!((r.hyperflex_count, r.flex_count), (0, 24));
    assert!(r.warnings.is_empty());
}

#[test]
fn flex_type_of_points() {
    let q = Field::rationals();
    let f = TernaryQuartic::parse("X^4 + Y^4 + Z^4 + 3(X^2Z^2 + X^2Y^2 + Y^2Z^2)", &q).unwrap();
    // a smooth point away from the flexes on an affine chart
    let g = TernaryQuartic::parse("Y Z^3 - X^4 - Y^4", &q).unwrap();
    assert_eq!(point_flex_type(&g, &[q.zero(), q.zero(), q.one()]).unwrap(), FlexType::Hyperflex);
    let h = TernaryQuartic::parse("Y Z^3 - X^3 Z - Y^4", &q).unwrap();
    assert_eq!(point_flex_type(&h, &[q.zero(), q.zero(), q.one()]).unwrap(), FlexType::Flex);
    let k = TernaryQuartic::parse("Y Z^3 - X^2 Z^2 - Y^4", &q).unwrap();
    assert_eq!(point_flex_type(&k, &[q.zero(), q.zero(), q.one()]).unwrap(), FlexType::Ordinary);
    assert!(point_flex_type(&f, &[q.one(), q.one(), q.one()]).is_err());
}

// Tower arithmetic makes these take minutes on one core.
#[test]
#[ignore]
fn pi_has_seven_hyperflexes() {
    let f = strata::builtin_model("Pi1").unwrap();
    assert_eq!(hyperflex_form_seeded(&f, 1).unwrap().hyperflex_count, 7);
}

#[test]
#[ignore]
fn omega_has_nine_hyperflexes() {
    let f = strata::builtin_model("Omega1").unwrap();
    assert_eq!(hyperflex_form_seeded(&f, 1).unwrap().hyperflex_count, 9);
}
