#![allow(dead_code)]

pub mod oracle;
pub mod subgroups;

use proptest::prelude::*;
use qdc_core::covering::{construct_cover, MonodromySpec};
use qdc_core::{fixtures, CoveringMap, Rational, RationalMatrix, Surface};

/// Connected square-tiled surfaces with up to `max` squares.
pub fn origamis(max: usize) -> impl Strategy<Value = Surface> {
    (1..=max)
        .prop_flat_map(|n| {
            let ids: Vec<usize> = (0..n).collect();
            (Just(ids.clone()).prop_shuffle(), Just(ids).prop_shuffle())
        })
        .prop_map(|(r, u)| fixtures::origami::<Rational>(&r, &u))
        .prop_filter("connected", |s| s.is_connected())
}

fn perm(d: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..d).collect::<Vec<usize>>()).prop_shuffle()
}

/// Connected covers of the punctured square torus of degree at most 3,
/// from random sheet permutations on its three edges.
pub fn torus_covers() -> impl Strategy<Value = CoveringMap> {
    (1..=3usize)
        .prop_flat_map(|d| (Just(d), perm(d), perm(d), perm(d)))
        .prop_map(|(d, a, b, c)| {
            let spec = MonodromySpec::trivial(d).with(0, a).with(1, b).with(2, c);
            construct_cover(&fixtures::t1p::<Rational>(), &spec).expect("permutations are valid")
        })
        .prop_filter("connected", |comps| comps.len() == 1)
        .prop_map(|mut comps| comps.pop().unwrap())
}

pub fn sl2_and_stretch() -> Vec<RationalMatrix> {
    vec![
        RationalMatrix::diag(Rational::from_integer(2.into()), Rational::new(1.into(), 2.into())),
        RationalMatrix::from_ints(1, 1, 0, 1),
        RationalMatrix::from_ints(1, 0, 1, 1),
        RationalMatrix::diag(Rational::from_integer(3.into()), Rational::new(1.into(), 3.into())),
        RationalMatrix::from_ints(2, 1, 1, 1),
    ]
}

/// Positive-determinant matrices with small entries.
pub fn matrices() -> impl Strategy<Value = RationalMatrix> {
    (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3, 1i64..=3)
        .prop_map(|(a, b, c, d, den)| {
            let r = |n: i64| Rational::new(n.into(), den.into());
            RationalMatrix::new(r(a), r(b), r(c), r(d))
        })
        .prop_filter("orientation preserving", |m| m.det() > Rational::from_integer(0.into()))
}
