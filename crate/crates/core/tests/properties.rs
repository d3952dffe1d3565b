use proptest::prelude::*;
use quartix_core::covariants::{binary_quartic_sigma_psi, binary_quartic_sigma_psi_transvectant, hessian};
use quartix_core::invariants::{dixmier_ohno, weighted_equal};
use quartix_core::poly::Vars;
use quartix_core::{Field, FieldElement, LinearMap3, MultiPoly, TernaryQuartic, UniPoly};

fn q() -> Field {
    Field::rationals()
}

fn quartic_from(field: &Field, c: &[i64]) -> Option<TernaryQuartic> {
    let mut terms = Vec::new();
    let mut k = 0;
    for i in 0..=4u32 {
        for j in 0..=4 - i {
            terms.push(([i, j, 4 - i - j], field.from_i64(c[k])));
            k += 1;
        }
    }
    TernaryQuartic::from_coefficients(field, terms).ok()
}

fn quartic() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 15).prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
}

fn matrix() -> impl Strategy<Value = [[i64; 3]; 3]> {
    prop::array::uniform3(prop::array::uniform3(-3i64..=3))
}

fn uni(field: &Field, c: &[i64]) -> UniPoly {
    UniPoly::new(field, c.iter().map(|&x| field.from_i64(x)).collect())
}

fn trivariate(field: &Field, c: &[i64]) -> MultiPoly {
    let vars = Vars::new(&["X", "Y", "Z"]);
    let mut p = MultiPoly::zero(field, &vars);
    for (k, &a) in c.iter().enumerate() {
        let e = vec![(k % 3) as u32, ((k / 3) % 3) as u32, (k / 9) as u32];
        p.add_term(e, field.from_i64(a));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mixed_partials_commute(c in prop::collection::vec(-9i64..=9, 27)) {
        let p = trivariate(&q(), &c);
        let d = |a: usize, b: usize| p.derive(a).unwrap().derive(b).unwrap();
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert_eq!(d(2, 0), d(0, 2));
    }

    #[test]
    fn resultant_is_multiplicative(a in prop::collection::vec(-6i64..=6, 1..5), b in prop::collection::vec(-6i64..=6, 1..5), h in prop::collection::vec(-6i64..=6, 1..5)) {
        let f = q();
        let (a, b, h) = (uni(&f, &a), uni(&f, &b), uni(&f, &h));
        prop_assume!(!a.is_zero() && !b.is_zero() && !h.is_zero());
        prop_assert_eq!(a.mul(&b).resultant(&h), &a.resultant(&h) * &b.resultant(&h));
    }

    #[test]
    fn gcd_divides_and_contains_common_factor(a in prop::collection::vec(-6i64..=6, 1..5), b in prop::collection::vec(-6i64..=6, 1..5), c in prop::collection::vec(-6i64..=6, 1..4)) {
        let f = q();
        let (a, b, c) = (uni(&f, &a), uni(&f, &b), uni(&f, &c));
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (ac, bc) = (a.mul(&c), b.mul(&c));
        let g = ac.gcd(&bc);
        prop_assert!(ac.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(bc.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(g.div_rem(&c.monic()).unwrap().1.is_zero());
    }

    #[test]
    fn substitution_is_a_right_action(c in quartic(), g in matrix(), h in matrix()) {
        let f = q();
        let quart = quartic_from(&f, &c).unwrap();
        let (g, h) = (LinearMap3::from_integers(&f, g), LinearMap3::from_integers(&f, h));
        prop_assume!(!g.det().is_zero() && !h.det().is_zero());
        let lhs = quart.transform(&g).unwrap().transform(&h).unwrap();
        let rhs = quart.transform(&g.compose(&h)).unwrap();
        prop_assert_eq!(lhs.poly(), rhs.poly());
    }

    #[test]
    fn hessian_is_covariant(c in quartic(), g in matrix()) {
        let f = q();
        let quart = quartic_from(&f, &c).unwrap();
        let g = LinearMap3::from_integers(&f, g);
        prop_assume!(!g.det().is_zero());
        let lhs = hessian(&quart.transform(&g).unwrap()).poly().clone();
        let rhs = hessian(&quart).poly().substitute_linear(&g).unwrap().scale(&g.det().pow(2));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sigma_psi_closed_forms_match_transvectants(c in prop::array::uniform5(-20i64..=20)) {
        let f = q();
        let coeffs: [FieldElement; 5] = std::array::from_fn(|k| f.from_i64(c[k]));
        let vars = Vars::new(&["x", "y"]);
        let mut p = MultiPoly::zero(&f, &vars);
        for (k, a) in coeffs.iter().enumerate() {
            p.add_term(vec![4 - k as u32, k as u32], a.clone());
        }
        prop_assert_eq!(binary_quartic_sigma_psi(&coeffs), binary_quartic_sigma_psi_transvectant(&p).unwrap());
    }

    #[test]
    fn repeated_roots_kill_the_binary_discriminant(r in -30i64..=30, quad in prop::array::uniform3(-30i64..=30), p in prop::sample::select(vec![0u64, 10007, 65521])) {
        let f = if p == 0 { q() } else { Field::prime(p).unwrap() };
        // (x - r y)^2 (a x^2 + b x y + c y^2)
        let sq = uni(&f, &[r * r, -2 * r, 1]);
        let rest = uni(&f, &[quad[2], quad[1], quad[0]]);
        let prod = sq.mul(&rest);
        let coeffs: [FieldElement; 5] = std::array::from_fn(|k| prod.coeff(4 - k));
        let (s, ps) = binary_quartic_sigma_psi(&coeffs);
        prop_assert!((&s.pow(3) - &(&f.from_i64(27) * &ps.pow(2))).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn invariants_are_homogeneous(c in quartic(), n in -4i64..=4, d in 1i64..=3) {
        prop_assume!(n != 0);
        let f = q();
        let quart = quartic_from(&f, &c).unwrap();
        let l = f.from_ratio(n, d).unwrap();
        let v = dixmier_ohno(&quart).unwrap();
        let w = dixmier_ohno(&quart.scale(&l).unwrap()).unwrap();
        let expected = v.weighted_scale(&l);
        prop_assert_eq!(w.values(), expected.values());
    }

    #[test]
    fn invariants_are_gl3_invariant(c in quartic(), g in matrix()) {
        let f = q();
        let quart = quartic_from(&f, &c).unwrap();
        let g = LinearMap3::from_integers(&f, g);
        prop_assume!(!g.det().is_zero());
        let v = dixmier_ohno(&quart).unwrap();
        let w = dixmier_ohno(&quart.transform(&g).unwrap()).unwrap();
        // weight 3k picks up det^(4k)
        let det = g.det();
        let scaled: Vec<FieldElement> = v.values().iter().zip(quartix_core::invariants::WEIGHTS).map(|(x, wt)| x * &det.pow(4 * wt as u64 / 3)).collect();
        prop_assert_eq!(w.values().to_vec(), scaled);
        prop_assert!(weighted_equal(&v, &w).unwrap());
    }

    #[test]
    fn invariants_over_a_prime_field(c in quartic(), g in matrix()) {
        let f = Field::prime(1000003).unwrap();
        let quart = quartic_from(&f, &c).unwrap();
        let g = LinearMap3::from_integers(&f, g);
        prop_assume!(!g.det().is_zero());
        let v = dixmier_ohno(&quart).unwrap();
        let w = dixmier_ohno(&quart.transform(&g).unwrap()).unwrap();
        prop_assert!(weighted_equal(&v, &w).unwrap());
    }
}
