use proptest::prelude::*;

use jordanlab::albert::{AlbertElement, JordanElement, Octonion};
use jordanlab::assoc::{circle, AssocPoly, Generator, Word};
use jordanlab::lift::{s_error, LiftTable};
use jordanlab::magma::{gamma, jmul, JPoly, JTerm};
use jordanlab::parse::{parse_assoc, parse_jordan};
use jordanlab::{int, Rational};

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..3, 1..6).prop_map(|v| Word::from_letters(v.into_iter().map(Generator)))
}

fn assoc_poly() -> impl Strategy<Value = AssocPoly> {
    prop::collection::vec((word(), -4i64..=4), 1..4)
        .prop_map(|ts| AssocPoly::from_terms(ts.into_iter().map(|(w, c)| (w, int(c)))))
}

fn term() -> impl Strategy<Value = JTerm> {
    let leaf = (0u8..3).prop_map(|g| JTerm::leaf(Generator(g)));
    leaf.prop_recursive(4, 12, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| JTerm::mul(&a, &b)))
}

fn jordan_poly() -> impl Strategy<Value = JPoly> {
    prop::collection::vec((term(), -3i64..=3), 1..4)
        .prop_map(|ts| JPoly::from_terms(ts.into_iter().map(|(t, c)| (t, int(c)))))
}

fn octonion() -> impl Strategy<Value = Octonion> {
    prop::array::uniform8(-3i64..=3).prop_map(Octonion::from_ints)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn involution_is_an_anti_automorphism(a in assoc_poly(), b in assoc_poly()) {
        prop_assert_eq!(a.involute().involute(), a.clone());
        prop_assert_eq!((&a * &b).involute(), &b.involute() * &a.involute());
    }

    #[test]
    fn circle_product_satisfies_jordan_identity(a in assoc_poly(), b in assoc_poly()) {
        let a2 = circle(&a, &a);
        prop_assert_eq!(circle(&circle(&a2, &b), &a), circle(&a2, &circle(&b, &a)));
        prop_assert_eq!(circle(&a, &b), circle(&b, &a));
    }

    #[test]
    fn gamma_is_multiplicative(f in jordan_poly(), g in jordan_poly()) {
        prop_assert_eq!(gamma(&jmul(&f, &g)), circle(&gamma(&f), &gamma(&g)));
    }

    #[test]
    fn canonical_form_is_idempotent(t in term(), u in term()) {
        prop_assert_eq!(t.canonical(), t.clone());
        prop_assert_eq!(t.canonical().canonical(), t.canonical());
        prop_assert_eq!(JTerm::mul(&t, &u), JTerm::mul(&u, &t));
    }

    #[test]
    fn s_errors_lie_in_the_kernel(f in jordan_poly()) {
        let mut table = LiftTable::new();
        let e = s_error(&mut table, &f).unwrap();
        prop_assert!(gamma(&e).is_zero());
    }

    #[test]
    fn printing_round_trips(f in jordan_poly(), p in assoc_poly()) {
        prop_assert_eq!(parse_jordan(&f.to_string()).unwrap(), f);
        prop_assert_eq!(parse_assoc(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn parser_never_panics(s in "[xyz0-9()*+/^,;~{}\\[\\] -]{0,24}") {
        let _ = parse_jordan(&s);
        let _ = parse_assoc(&s);
    }

    #[test]
    fn octonion_norm_is_multiplicative(a in octonion(), b in octonion()) {
        prop_assert_eq!(a.mul(&b).norm(), a.norm() * b.norm());
        prop_assert_eq!(a.mul(&a).mul(&b), a.mul(&a.mul(&b)));
    }

    #[test]
    fn albert_product_commutes(c in prop::collection::vec(-2i64..=2, 54)) {
        let a = AlbertElement::from_coordinates(&c[..27].iter().map(|&v| int(v)).collect::<Vec<Rational>>());
        let b = AlbertElement::from_coordinates(&c[27..].iter().map(|&v| int(v)).collect::<Vec<Rational>>());
        prop_assert_eq!(a.circle(&b), b.circle(&a));
    }
}
