use super::*;
use crate::arith::{q, qi};
use crate::complex::{Affine, PlMap, StarContraction};
use proptest::prelude::*;

fn p(c: &[i64]) -> Point {
    c.iter().map(|&x| qi(x)).collect()
}

fn unit_square() -> PolyhedralCurrent {
    PolyhedralCurrent::from_pieces(
        2,
        2,
        [(1, vec![p(&[0, 0]), p(&[1, 0]), p(&[1, 1])]), (1, vec![p(&[0, 0]), p(&[1, 1]), p(&[0, 1])])],
    )
}

fn coord(i: usize, n: usize) -> PlFunction {
    PlFunction::coordinate(i, n)
}

#[test]
fn cancellation_and_doubling() {
    let s = vec![p(&[0, 0]), p(&[1, 0])];
    let rev = vec![p(&[1, 0]), p(&[0, 0])];
    assert!(PolyhedralCurrent::from_pieces(1, 2, [(1, s.clone()), (1, rev)]).is_zero());
    let twice = PolyhedralCurrent::from_pieces(1, 2, [(1, s.clone()), (1, s.clone())]);
    assert_eq!(twice.pieces(), &[Piece { theta: 2, vertices: s }]);
}

#[test]
fn overlapping_segments() {
    let t = PolyhedralCurrent::from_pieces(1, 1, [(1, vec![p(&[0]), p(&[2])]), (1, vec![p(&[1]), p(&[3])])]);
    let expect = [Piece { theta: 1, vertices: vec![p(&[0]), p(&[1])] },
        Piece { theta: 2, vertices: vec![p(&[1]), p(&[2])] },
        Piece { theta: 1, vertices: vec![p(&[2]), p(&[3])] }];
    assert_eq!(t.pieces(), &expect[..]);
}

#[test]
fn reduction_forgets_the_triangulation() {
    let other = PolyhedralCurrent::from_pieces(
        2,
        2,
        [(1, vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]), (1, vec![p(&[1, 0]), p(&[1, 1]), p(&[0, 1])])],
    );
    assert_eq!(unit_square(), other);
    let again = PolyhedralCurrent::from_pieces(2, 2, unit_square().raw());
    assert_eq!(again, unit_square());
}

#[test]
fn square_boundary_and_green() {
    let b = unit_square().boundary();
    assert_eq!(b.pieces().len(), 4);
    assert!(b.boundary().is_zero());
    let w = TestForm::new(coord(1, 2), vec![coord(0, 2)]);
    assert_eq!(b.evaluate(&w).unwrap(), qi(-1));
    // locality: π constant
    let w0 = TestForm::new(coord(1, 2), vec![PlFunction::constant(qi(3), 2)]);
    assert_eq!(b.evaluate(&w0).unwrap(), qi(0));
    assert_eq!(unit_square().mass(), 1.0);
}

#[test]
fn point_evaluation() {
    let t = PolyhedralCurrent::point(p(&[2, 5])).sub(&PolyhedralCurrent::point(p(&[7, 1])));
    assert_eq!(t.evaluate(&TestForm::new(coord(0, 2), vec![])).unwrap(), qi(-5));
    let seg = PolyhedralCurrent::simplex(vec![p(&[0, 0]), p(&[3, 4])]);
    assert_eq!(seg.boundary(), PolyhedralCurrent::point(p(&[3, 4])).sub(&PolyhedralCurrent::point(p(&[0, 0]))));
}

#[test]
fn masses() {
    assert_eq!(PolyhedralCurrent::zero(1, 2).mass(), 0.0);
    assert!(PolyhedralCurrent::zero(1, 2).support().is_empty());
    let seg = PolyhedralCurrent::from_pieces(1, 1, [(2, vec![p(&[0]), p(&[1])])]);
    assert_eq!(seg.mass(), 2.0);
    let tri = PolyhedralCurrent::simplex(vec![p(&[0, 0, 0]), p(&[1, 0, 0]), p(&[0, 1, 0])]);
    assert_eq!(volume2(&tri.pieces()[0].vertices), q(1, 4));
    assert_eq!(tri.mass(), 0.5);
}

#[test]
fn pushforward_examples() {
    let seg = PolyhedralCurrent::simplex(vec![p(&[0, 0]), p(&[1, 0])]);
    assert_eq!(seg.pushforward(&PlMap::identity(2)).unwrap(), seg);
    assert!(unit_square().pushforward(&PlMap::constant(&p(&[1, 1]), 2)).unwrap().is_zero());
    let doubled = seg.pushforward(&PlMap::scaling(&qi(2), 2)).unwrap();
    assert_eq!(doubled.mass(), 2.0);
    // a fold x ↦ |x| sends [−1,1] to a cancelling pair
    let fold = PlMap { components: vec![PlFunction::Max(vec![Affine::coordinate(0, 1), Affine::new(vec![qi(-1)], qi(0))])] };
    let line = PolyhedralCurrent::simplex(vec![p(&[-1]), p(&[1])]);
    assert!(line.pushforward(&fold).unwrap().is_zero());
}

#[test]
fn restriction_examples() {
    let seg = PolyhedralCurrent::simplex(vec![p(&[0]), p(&[1])]);
    let g = coord(0, 1);
    let (lo, hi) = seg.restrict(&g, &q(1, 3)).unwrap();
    assert!((lo.mass() - 1.0 / 3.0).abs() < 1e-12);
    assert!((hi.mass() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(lo.add(&hi), seg);
    let (a, b) = seg.restrict(&g, &qi(-1)).unwrap();
    assert!(a.is_zero() && b == seg);
    let (a, b) = seg.restrict(&g, &qi(2)).unwrap();
    assert!(b.is_zero() && a == seg);
    assert_eq!(seg.restrict(&g, &qi(1)), Err(crate::Error::NonGeneric { piece: 0, vertex: 1 }));
    let r = generic_level(&seg, &g, &qi(1)).unwrap();
    assert!(r != qi(1) && r != qi(0));
}

#[test]
fn product_with_interval() {
    let pt = PolyhedralCurrent::point(p(&[3]));
    let prism = pt.product_interval();
    assert_eq!(prism, PolyhedralCurrent::simplex(vec![p(&[3, 0]), p(&[3, 1])]));
    assert!(PolyhedralCurrent::zero(1, 2).product_interval().is_zero());
    let seg = PolyhedralCurrent::simplex(vec![p(&[0]), p(&[1])]);
    let lhs = seg.product_interval().boundary();
    let rhs = seg.slice_at(&qi(1)).sub(&seg.slice_at(&qi(0))).sub(&seg.boundary().product_interval());
    assert_eq!(lhs, rhs);
}

#[test]
fn cones() {
    let region = vec![vec![p(&[-2, -2]), p(&[3, -2]), p(&[-2, 3])], vec![p(&[3, -2]), p(&[3, 3]), p(&[-2, 3])]];
    let h = StarContraction::new(region, vec![q(1, 2), q(1, 2)], 0).unwrap();
    let t = PolyhedralCurrent::point(p(&[1, 0])).sub(&PolyhedralCurrent::point(p(&[0, 0])));
    let s = t.cone(&h).unwrap();
    assert_eq!(s.pieces().len(), 2);
    assert_eq!(s.boundary(), t.neg());
    assert!(PolyhedralCurrent::zero(1, 2).cone(&h).unwrap().is_zero());
    let b = unit_square().boundary();
    let s = b.cone(&h).unwrap();
    assert_eq!(s.boundary(), b.neg());
    assert!((s.mass() - 1.0).abs() < 1e-12);
    assert!(s.diameter2_with(&[]) <= b.diameter2_with(core::slice::from_ref(&h.center)));
    assert!(unit_square().cone(&h).is_err());
    assert!(PolyhedralCurrent::point(p(&[0, 0])).cone(&h).is_err());
}

#[test]
fn trivial_equicontinuity() {
    let t = unit_square();
    let f = PlFunction::Max(vec![Affine::coordinate(0, 2), Affine::coordinate(1, 2)]);
    let pi = vec![coord(0, 2), coord(1, 2)];
    let (l, r) = equicontinuity_bound(&t, &f, &pi, &pi, 1.0).unwrap();
    assert_eq!((l, r), (0.0, 0.0));
    let zero = PlFunction::constant(qi(0), 2);
    let other = vec![coord(1, 2), coord(0, 2)];
    let (l, r) = equicontinuity_bound(&t, &zero, &pi, &other, 0.0).unwrap();
    assert_eq!((l, r), (0.0, 0.0));
    let (l, r) = equicontinuity_bound(&t, &f, &pi, &other, 1.0).unwrap();
    assert!(l <= r + 1e-9, "{l} > {r}");
}

#[test]
fn simplicial_coordinates_of_a_loop() {
    let c = crate::complex::MetricComplex::new(
        2,
        vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        Default::default(),
    )
    .unwrap();
    let t = PolyhedralCurrent::simplex(vec![p(&[0, 0]), p(&[1, 0])])
        .add(&PolyhedralCurrent::simplex(vec![p(&[1, 0]), p(&[0, 1])]))
        .add(&PolyhedralCurrent::simplex(vec![p(&[0, 1]), p(&[0, 0])]));
    let co = t.simplicial_coordinates(&c).unwrap();
    assert_eq!(co, vec![BigIntHelper::from(1), BigIntHelper::from(-1), BigIntHelper::from(1)]);
    let half = PolyhedralCurrent::simplex(vec![p(&[0, 0]), vec![q(1, 2), qi(0)]]);
    assert!(half.simplicial_coordinates(&c).is_none());
}

#[test]
fn simplicial_coordinates_across_the_other_diagonal() {
    // the complex splits the square along (0,0)-(1,1); the current along the other diagonal
    let c = crate::complex::MetricComplex::new(
        2,
        vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1]), p(&[1, 1])],
        vec![vec![0, 1, 3], vec![0, 2, 3]],
        Default::default(),
    )
    .unwrap();
    let t = PolyhedralCurrent::from_pieces(
        2,
        2,
        [(2, vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]), (2, vec![p(&[1, 0]), p(&[1, 1]), p(&[0, 1])])],
    );
    let co = t.simplicial_coordinates(&c).unwrap();
    assert_eq!(co, vec![BigIntHelper::from(2), BigIntHelper::from(-2)]);
    let lower = PolyhedralCurrent::simplex(vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]);
    assert!(lower.simplicial_coordinates(&c).is_none());
}

use num_bigint::BigInt as BigIntHelper;

fn arb_point() -> impl Strategy<Value = Point> {
    proptest::collection::vec(-3i64..4, 2).prop_map(|v| v.into_iter().map(qi).collect())
}

fn arb_current(k: usize) -> impl Strategy<Value = PolyhedralCurrent> {
    proptest::collection::vec((-2i64..3, proptest::collection::vec(arb_point(), k + 1)), 1..4)
        .prop_map(move |ts| PolyhedralCurrent::from_pieces(k, 2, ts))
}

fn arb_affine() -> impl Strategy<Value = Affine> {
    (-2i64..3, -2i64..3, -2i64..3).prop_map(|(a, b, c)| Affine::new(vec![qi(a), qi(b)], qi(c)))
}

fn arb_function() -> impl Strategy<Value = PlFunction> {
    prop_oneof![
        arb_affine().prop_map(PlFunction::Affine),
        proptest::collection::vec(arb_affine(), 2..3).prop_map(PlFunction::Max),
        proptest::collection::vec(arb_affine(), 2..3).prop_map(PlFunction::Min),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn boundary_squares_to_zero(t in arb_current(2)) {
        prop_assert!(t.boundary().boundary().is_zero());
    }

    #[test]
    fn stokes(t in (1usize..3).prop_flat_map(arb_current), f in arb_function(), pi in proptest::collection::vec(arb_function(), 2)) {
        let k = t.degree();
        let w = TestForm::new(f, pi[..k - 1].to_vec());
        prop_assert_eq!(t.boundary().evaluate(&w).unwrap(), t.evaluate(&w.exterior(2)).unwrap());
    }

    #[test]
    fn reduction_is_sound(raw in proptest::collection::vec((-2i64..3, proptest::collection::vec(arb_point(), 3)), 1..4), f in arb_function(), a in arb_function(), b in arb_function()) {
        let w = TestForm::new(f, vec![a, b]);
        let mut direct = Q::zero();
        for (theta, v) in &raw {
            if geometry::is_nondegenerate(v) {
                let single = PolyhedralCurrent::from_pieces(2, 2, [(*theta, v.clone())]);
                direct += single.evaluate(&w).unwrap();
            }
        }
        let t = PolyhedralCurrent::from_pieces(2, 2, raw);
        prop_assert_eq!(t.evaluate(&w).unwrap(), direct);
        prop_assert_eq!(PolyhedralCurrent::from_pieces(2, 2, t.raw()), t);
    }

    #[test]
    fn pushforward_is_dual(t in arb_current(1), f in arb_function(), a in arb_function(), m in proptest::collection::vec(-2i64..3, 4)) {
        let map = PlMap::affine(&vec![vec![qi(m[0]), qi(m[1])], vec![qi(m[2]), qi(m[3])]], &[qi(1), qi(0)]);
        let image = t.pushforward(&map).unwrap();
        let arc = alloc::sync::Arc::new(map.clone());
        let pull = |g: &PlFunction| PlFunction::Pullback { outer: alloc::boxed::Box::new(g.clone()), inner: arc.clone() };
        let lhs = image.evaluate(&TestForm::new(f.clone(), vec![a.clone()])).unwrap();
        let rhs = t.evaluate(&TestForm::new(pull(&f), vec![pull(&a)])).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(image.boundary(), t.boundary().pushforward(&map).unwrap());
    }

    #[test]
    fn subadditive_mass(s in arb_current(2), t in arb_current(2)) {
        prop_assert!(s.add(&t).mass() <= s.mass() + t.mass() + 1e-9);
    }

    #[test]
    fn restriction_parts_sum(t in arb_current(2), g in arb_function(), r in -4i64..5) {
        let level = generic_level(&t, &g, &q(r, 2)).unwrap();
        let (lo, hi) = t.restrict(&g, &level).unwrap();
        prop_assert_eq!(lo.add(&hi), t.clone());
        prop_assert!((lo.mass() + hi.mass() - t.mass()).abs() < 1e-9);
    }
}
