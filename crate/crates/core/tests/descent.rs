mod support;

use proptest::prelude::*;
use qdc_core::covering::{construct_cover, is_symmetric, MonodromySpec};
use qdc_core::fibered::*;
use qdc_core::isomorphy::are_conjugate;
use qdc_core::{fixtures, AffineAutomorphism, CoveringMap, Error, Rational, RationalMatrix};

fn translation_cover() -> CoveringMap {
    construct_cover(&fixtures::t1p::<Rational>(), &MonodromySpec::trivial(2).with(1, vec![1, 0])).unwrap().remove(0)
}

fn check_contract(f: &AffineAutomorphism, p: &CoveringMap) -> Descent<Rational> {
    let d = descend_automorphism(f, p).unwrap();
    assert!(d.commutes(f));
    validate_affine(&d.descended).unwrap();
    assert!(is_symmetric(p.source(), &d.quotient_map).unwrap().is_some());
    if let Some(factor) = &d.factor {
        assert_eq!(p.then(factor).unwrap().phi(), d.quotient_map.phi());
    }
    // descending again through the identity changes nothing
    let again = descend_automorphism(&d.descended, &CoveringMap::identity(d.quotient())).unwrap();
    assert_eq!(again.descended.map(), d.descended.map());
    assert_eq!(again.quotient_map.degree(), 1);
    d
}

#[test]
fn deck_translation_descends_trivially() {
    let p = translation_cover();
    let decks: Vec<_> = automorphisms_with_derivative(p.source(), &RationalMatrix::identity())
        .into_iter()
        .filter(|f| !f.is_identity_map())
        .filter(|f| (0..f.map().len()).all(|e| p.image(f.image(e)) == p.image(e)))
        .collect();
    assert!(!decks.is_empty());
    for f in decks {
        let d = check_contract(&f, &p);
        assert_eq!(order_of(&d.descended), Order::Finite(1));
        assert!(are_conjugate(d.quotient(), p.target()).is_some());
        assert_eq!(d.quotient_map.degree(), 2);
    }
}

#[test]
fn half_turn_descends_to_the_torus_half_turn() {
    let p = translation_cover();
    let minus = RationalMatrix::from_ints(-1, 0, 0, -1);
    let turns: Vec<_> = automorphisms_with_derivative(p.source(), &minus)
        .into_iter()
        .filter(|f| (0..f.map().len()).any(|e| p.image(f.image(e)) != p.image(e)))
        .collect();
    assert!(!turns.is_empty());
    for f in turns {
        let d = check_contract(&f, &p);
        assert!(are_conjugate(d.quotient(), &fixtures::t1p()).is_some());
        assert_eq!(order_of(&d.descended), Order::Finite(2));
    }
}

#[test]
fn parabolic_maps_have_no_flag_model() {
    let two_squares = fixtures::t2x1p::<Rational>();
    for a in [RationalMatrix::from_ints(1, 2, 0, 1), RationalMatrix::from_ints(1, 1, 0, 1)] {
        assert!(automorphisms_with_derivative(&two_squares, &a).is_empty());
    }
    let t = fixtures::t1p::<Rational>();
    let shear = AffineAutomorphism::new(t.clone(), (0..t.num_flags()).collect(), RationalMatrix::from_ints(1, 1, 0, 1));
    assert!(matches!(validate_affine(&shear), Err(Error::DerivativeMismatch { .. })));
    assert_eq!(order_of(&shear), Order::Infinite);
}

#[test]
fn stretching_is_refused() {
    let p = translation_cover();
    let f = AffineAutomorphism::new(
        p.source().clone(),
        (0..p.source().num_flags()).collect(),
        RationalMatrix::from_ints(2, 0, 0, 2),
    );
    assert!(descend_automorphism(&f, &p).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn every_symmetry_descends(c in support::torus_covers()) {
        for a in [RationalMatrix::identity(), RationalMatrix::from_ints(-1, 0, 0, -1)] {
            for f in automorphisms_with_derivative(c.source(), &a) {
                let d = check_contract(&f, &c);
                prop_assert!(d.quotient_map.degree() >= c.degree());
                prop_assert!(matches!(order_of(&f), Order::Finite(_)));
            }
        }
    }
}
