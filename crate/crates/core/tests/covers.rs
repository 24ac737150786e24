mod support;

use proptest::prelude::*;
use qdc_core::covering::*;
use qdc_core::isomorphy::are_conjugate;
use qdc_core::refine::RefineStep;
use qdc_core::{fixtures, CoveringMap, Rational, Surface, VertexStatus};

fn gauss_bonnet(s: &Surface) -> bool {
    let lhs: i64 = s.cone_angle_multiples().iter().map(|&a| 2 - a as i64).sum();
    let chi = s.vertices().len() as i64 - s.num_edges() as i64 + s.faces().len() as i64;
    lhs == 2 * chi
}

fn multiplicative(c: &CoveringMap) -> bool {
    let d = Rational::from_integer(c.degree().into());
    c.source().area() == c.target().area() * d.clone()
        && c.source().orbifold_euler_characteristic() == c.target().orbifold_euler_characteristic() * d
}

fn horizontal() -> CoveringMap {
    let spec = MonodromySpec::trivial(2).with(1, vec![1, 0]);
    construct_cover(&fixtures::t1p::<Rational>(), &spec).unwrap().remove(0)
}

fn vertical() -> CoveringMap {
    let spec = MonodromySpec::trivial(2).with(0, vec![1, 0]);
    construct_cover(&fixtures::t1p::<Rational>(), &spec).unwrap().remove(0)
}

#[test]
fn cover_counts_match_subgroup_counts() {
    for d in 1..=3 {
        let covers = enumerate_covers(&fixtures::t1p::<Rational>(), d, DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(covers.len(), support::subgroups::index_classes(d), "degree {d}");
    }
    assert_eq!(support::subgroups::index_classes(2), 3);
}

#[test]
fn pillowcase_double_covers_include_the_torus() {
    let covers = enumerate_covers(&fixtures::pillowcase::<Rational>(), 2, DEFAULT_MAX_DEGREE).unwrap();
    let torus = covers
        .iter()
        .find(|c| are_conjugate(c.source(), &fixtures::t1p_half_periods()).is_some())
        .expect("the half-turn double cover is listed");
    let src = torus.source();
    assert_eq!(src.genus(), 1);
    assert_eq!(src.puncture_count(), 1);
    assert_eq!(src.statuses().iter().filter(|&&s| s == VertexStatus::Filled).count(), 3);
}

#[test]
fn enumerated_covers_are_multiplicative() {
    for base in [fixtures::t1p::<Rational>(), fixtures::pillowcase()] {
        assert!(gauss_bonnet(&base));
        for d in 1..=3 {
            for c in enumerate_covers(&base, d, DEFAULT_MAX_DEGREE).unwrap() {
                assert_eq!(c.validate().unwrap().degree, d);
                assert!(multiplicative(&c));
                assert!(gauss_bonnet(c.source()));
            }
        }
    }
}

#[test]
fn degree_cap() {
    let t = fixtures::t1p::<Rational>();
    assert!(matches!(enumerate_covers(&t, 7, DEFAULT_MAX_DEGREE), Err(qdc_core::Error::DegreeCapExceeded { .. })));
}

#[test]
fn horizontal_times_vertical_is_the_big_torus() {
    let comps = fiber_product(&horizontal(), &vertical()).unwrap();
    assert_eq!(comps.len(), 1);
    let c = &comps[0];
    assert!(are_conjugate(&c.surface, &fixtures::t2x2p()).is_some());
    assert_eq!(c.proj1.validate().unwrap().degree * 2, 4);
    assert_eq!(c.proj2.validate().unwrap().degree * 2, 4);
}

#[test]
fn fiber_products_account_for_every_sheet() {
    let p = horizontal();
    let id = CoveringMap::identity(p.target());
    for (a, b) in [(horizontal(), vertical()), (p.clone(), p.clone()), (p.clone(), id)] {
        let comps = fiber_product(&a, &b).unwrap();
        let total: usize = comps.iter().map(|c| c.proj1.validate().unwrap().degree * a.degree()).sum();
        assert_eq!(total, a.degree() * b.degree());
        for c in &comps {
            c.proj2.validate().unwrap();
            assert_eq!(c.proj1.then(&a).unwrap().phi(), c.proj2.then(&b).unwrap().phi());
        }
    }
    let pp = fiber_product(&p, &p).unwrap();
    assert_eq!(pp.len(), 2);
    assert!(pp.iter().all(|c| c.proj1.degree() == 1));
    let pid = fiber_product(&p, &CoveringMap::identity(p.target())).unwrap();
    assert_eq!(pid.len(), 1);
    assert!(are_conjugate(&pid[0].surface, p.source()).is_some());
}

#[test]
fn fiber_product_needs_a_common_base() {
    let q = CoveringMap::identity(&fixtures::pillowcase::<Rational>());
    assert_eq!(fiber_product(&horizontal(), &q).err(), Some(qdc_core::Error::TargetMismatch));
}

#[test]
fn coverings_compose() {
    let big = fixtures::t2x2p::<Rational>();
    let mid = fixtures::t2x1p::<Rational>();
    let small = fixtures::t1p::<Rational>();
    assert!(!find_coverings(&big, &mid).is_empty());
    assert!(!find_coverings(&mid, &small).is_empty());
    assert!(!find_coverings(&big, &small).is_empty());
    assert!(find_coverings(&small, &mid).is_empty());
    let half = find_coverings(&fixtures::t1p_half_periods::<Rational>(), &fixtures::pillowcase());
    assert!(!half.is_empty());
    assert!(half.iter().all(|c| c.degree() == 2));
    for c in find_coverings(&mid, &small) {
        assert_eq!(c.validate().unwrap().degree, 2);
    }
}

#[test]
fn refined_covers_keep_their_degree() {
    let p = horizontal();
    let r = refine_cover(&p, &[RefineStep::SplitEdge { edge: 0, t: Rational::new(1.into(), 3.into()) }]).unwrap();
    assert_eq!(r.validate().unwrap().degree, 2);
    assert_eq!(r.source().vertices().len(), p.source().vertices().len() + 2);
    let spec = MonodromySpec::trivial(3).with(0, vec![1, 2, 0]);
    let c = construct_cover(&fixtures::t1p::<Rational>(), &spec).unwrap().remove(0);
    let centre = qdc_core::RationalVector::new(Rational::new(2.into(), 3.into()), Rational::new(1.into(), 3.into()));
    let r = refine_cover(&c, &[RefineStep::SplitFace { face: 0, point: centre }]).unwrap();
    assert_eq!(r.validate().unwrap().degree, 3);
    assert_eq!(r.source().vertices().len(), c.source().vertices().len() + 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lifts_push_forward_to_the_base(c in support::torus_covers()) {
        let report = c.validate().unwrap();
        prop_assert!(multiplicative(&c));
        prop_assert!(gauss_bonnet(c.source()));
        prop_assert_eq!(report.degree, c.degree());
        let pushed = is_symmetric(c.source(), &c).unwrap().expect("lifts are symmetric");
        prop_assert!(are_conjugate(&pushed, c.target()).is_some());
    }

    #[test]
    fn symmetry_survives_the_linear_action(c in support::torus_covers(), m in support::matrices()) {
        let src = c.source().matrix_act(&m).unwrap();
        let tgt = c.target().matrix_act(&m).unwrap();
        let moved = CoveringMap::new(src.clone(), tgt, c.phi().to_vec());
        prop_assert!(is_symmetric(&src, &moved).unwrap().is_some());
        moved.validate().unwrap();
    }
}
