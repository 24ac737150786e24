mod support;

use std::collections::BTreeMap;

use num_rational::Ratio;
use proptest::prelude::*;
use qdc_core::isomorphy::{are_conjugate, canonical_form, symmetry_group};
use qdc_core::refine::{refine, RefineStep};
use qdc_core::{
    fixtures, ExactField, HalfTranslationSurface, Matrix2, Rational, RationalVector, Surface, VertexStatus,
};

fn gauss_bonnet<T: ExactField>(s: &HalfTranslationSurface<T>) -> bool {
    let lhs: i64 = s.cone_angle_multiples().iter().map(|&a| 2 - a as i64).sum();
    let chi = s.vertices().len() as i64 - s.num_edges() as i64 + s.faces().len() as i64;
    lhs == 2 * chi
}

fn singular_angles(s: &Surface) -> BTreeMap<u32, usize> {
    let mut out = BTreeMap::new();
    for v in 0..s.vertices().len() {
        if s.status(v) != VertexStatus::Filled {
            *out.entry(s.angle_multiple(v)).or_default() += 1;
        }
    }
    out
}

fn script() -> impl Strategy<Value = Vec<(u8, usize, i64)>> {
    prop::collection::vec((0u8..3, 0usize..64, 1i64..7), 1..4)
}

/// Turns raw draws into a script that is valid on `s` step by step.
fn apply(s: &Surface, raw: &[(u8, usize, i64)]) -> Surface {
    let mut cur = s.clone();
    for &(kind, pick, k) in raw {
        let step = match kind {
            0 => RefineStep::SplitEdge { edge: pick % cur.num_flags(), t: Rational::new(k.into(), 7.into()) },
            1 => {
                let face = &cur.faces()[pick % cur.faces().len()];
                let pts = cur.face_positions(face[0]);
                let n = Rational::from_integer((pts.len() as i64).into());
                let sum = pts.iter().fold(RationalVector::zero(), |a, p| a + p.clone());
                RefineStep::SplitFace { face: face[0], point: RationalVector::new(sum.x / n.clone(), sum.y / n) }
            }
            _ => {
                let face = &cur.faces()[pick % cur.faces().len()];
                if face.len() < 4 {
                    continue;
                }
                RefineStep::InsertChord { face: face[0], from: 0, to: 2 }
            }
        };
        cur = match refine(&cur, &[step]) {
            Ok((r, _)) => r,
            Err(qdc_core::Error::ChordIsExistingEdge { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
    }
    cur
}

#[test]
fn fixtures_satisfy_gauss_bonnet() {
    for s in [
        fixtures::t1p::<Rational>(),
        fixtures::t2x1p(),
        fixtures::t2x2p(),
        fixtures::l3p(),
        fixtures::pillowcase(),
        fixtures::t1p_half_periods(),
    ] {
        s.validate().unwrap();
        assert!(gauss_bonnet(&s), "{:?}", s.name());
    }
}

#[test]
fn fixed_width_scalars_agree() {
    let small = fixtures::l3p::<Ratio<i64>>();
    let big = fixtures::l3p::<Rational>();
    assert_eq!(canonical_form(&small).encoding, canonical_form(&big).encoding);
    assert_eq!(small.cone_angle_multiples(), big.cone_angle_multiples());
    let m = qdc_core::commensurate::maximal_quotient(&fixtures::t1p::<Ratio<i128>>()).unwrap();
    assert_eq!(m.quotient().area(), Ratio::new(1, 2));
    assert!(gauss_bonnet(m.quotient()));
}

#[test]
fn conjugacy_is_an_equivalence() {
    let all = [
        fixtures::t1p::<Rational>(),
        fixtures::t2x1p(),
        fixtures::origami(&[0, 1], &[1, 0]),
        fixtures::l3p(),
        fixtures::pillowcase(),
        fixtures::t1p_half_periods(),
    ];
    for a in &all {
        let w = are_conjugate(a, a).unwrap();
        assert_eq!(w.validate().unwrap().degree, 1);
        for b in &all {
            let ab = are_conjugate(a, b);
            assert_eq!(ab.is_some(), are_conjugate(b, a).is_some());
            for c in &all {
                if let (Some(x), Some(y)) = (&ab, are_conjugate(b, c)) {
                    assert_eq!(x.then(&y).unwrap().validate().unwrap().degree, 1);
                }
            }
        }
    }
    // a quarter turn relates the horizontal and vertical two-square tori
    let rot = Matrix2::<Rational>::from_ints(0, -1, 1, 0);
    assert!(are_conjugate(&all[1].matrix_act(&rot).unwrap(), &all[2]).is_some());
    assert!(are_conjugate(&all[1], &all[2]).is_none());
}

#[test]
fn big_torus_symmetries() {
    assert_eq!(symmetry_group(&fixtures::t2x2p::<Rational>()).len(), 8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linear_action(s in support::origamis(4), m in support::matrices()) {
        let t = s.matrix_act(&m).unwrap();
        t.validate().unwrap();
        prop_assert_eq!(t.area(), s.area() * m.det());
        prop_assert_eq!(t.cone_angle_multiples(), s.cone_angle_multiples());
        prop_assert!(gauss_bonnet(&t));
    }

    #[test]
    fn refinement_keeps_the_topology(s in support::origamis(3), raw in script()) {
        let r = apply(&s, &raw);
        r.validate().unwrap();
        prop_assert!(gauss_bonnet(&r));
        prop_assert_eq!(r.orbifold_euler_characteristic(), s.orbifold_euler_characteristic());
        prop_assert_eq!(r.genus(), s.genus());
        prop_assert_eq!(r.area(), s.area());
        prop_assert_eq!(singular_angles(&r), singular_angles(&s));
    }

    #[test]
    fn canonical_form_ignores_labels(s in support::origamis(3), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = (0..s.num_flags()).collect();
        perm.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let r = s.relabel(&perm).unwrap();
        let minus = Matrix2::<Rational>::from_ints(-1, 0, 0, -1);
        let c = canonical_form(&s).encoding;
        prop_assert_eq!(&canonical_form(&r).encoding, &c);
        prop_assert_eq!(&canonical_form(&s.matrix_act(&minus).unwrap()).encoding, &c);
        prop_assert_eq!(canonical_form(&canonical_form(&s).realization).encoding, c);
    }

    #[test]
    fn chords_are_invisible(s in support::origamis(3), pick in 0usize..64) {
        let e = pick % s.num_flags();
        let (r, _) = refine(&s, &[RefineStep::SplitEdge { edge: e, t: Rational::new(1.into(), 2.into()) }]).unwrap();
        prop_assert!(are_conjugate(&r, &s).is_none());
        let quad = r.faces().iter().find(|f| f.len() == 4).unwrap()[0];
        let cut = (0..4)
            .find_map(|from| refine(&r, &[RefineStep::InsertChord { face: quad, from, to: (from + 2) % 4 }]).ok())
            .expect("a quadrilateral has a diagonal");
        prop_assert_eq!(canonical_form(&cut.0).encoding, canonical_form(&r).encoding);
    }
}
