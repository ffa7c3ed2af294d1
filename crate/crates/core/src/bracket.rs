//! The chain-to-current map [σ] = σ_#⟦Δᵏ⟧ and its effect on homology generators.
use crate::arith::Q;
use crate::chains::{AffineSimplex, LipschitzChain};
use crate::currents::{PolyhedralCurrent, TestForm};
use crate::{Error, Result};
use alloc::vec::Vec;

/// Σ a_σ·[σ] as a reduced current in ℚⁿ. Degenerate terms vanish.
pub fn bracket(chain: &LipschitzChain, ambient_dim: usize) -> PolyhedralCurrent {
    PolyhedralCurrent::from_pieces(chain.degree(), ambient_dim, chain.terms().map(|(s, a)| (a, s.vertices().to_vec())))
}

/// Σ θⱼ[xⱼ] ↦ Σ θⱼ·(point xⱼ)
pub fn bracket_inverse_deg0(current: &PolyhedralCurrent) -> Result<LipschitzChain> {
    if current.degree() != 0 {
        return Err(Error::Precondition("inverse bracket needs a 0-current".into()));
    }
    Ok(LipschitzChain::from_terms(
        0,
        current.pieces().iter().map(|p| (p.theta, AffineSimplex::point(p.vertices[0].clone()))),
    ))
}

/// Brackets of cycle generators and the matrix of their values on the
/// detecting forms (row per generator, column per form).
pub fn induced_on_generators(
    generators: &[LipschitzChain],
    forms: &[TestForm],
    ambient_dim: usize,
) -> Result<(Vec<PolyhedralCurrent>, Vec<Vec<Q>>)> {
    let mut currents = Vec::with_capacity(generators.len());
    let mut pairing = Vec::with_capacity(generators.len());
    for (i, g) in generators.iter().enumerate() {
        if !g.is_cycle() {
            return Err(Error::Precondition(alloc::format!("generator {i} is not a cycle")));
        }
        let t = bracket(g, ambient_dim);
        pairing.push(forms.iter().map(|w| t.evaluate(w)).collect::<Result<Vec<_>>>()?);
        currents.push(t);
    }
    Ok((currents, pairing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qi;
    use crate::complex::{PlFunction, PlMap};
    use crate::geometry::Point;
    use crate::linalg;
    use alloc::vec;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Point {
        c.iter().map(|&x| qi(x)).collect()
    }

    fn triangle_loop() -> LipschitzChain {
        LipschitzChain::simplex(vec![p(&[0, 0]), p(&[1, 0])])
            .add(&LipschitzChain::simplex(vec![p(&[1, 0]), p(&[0, 1])]))
            .add(&LipschitzChain::simplex(vec![p(&[0, 1]), p(&[0, 0])]))
    }

    #[test]
    fn degenerate_and_plain_simplices() {
        let constant = LipschitzChain::simplex(vec![p(&[1, 1]); 3]);
        assert!(bracket(&constant, 2).is_zero());
        let edge = LipschitzChain::simplex(vec![p(&[0, 0]), p(&[3, 4])]);
        let t = bracket(&edge, 2);
        assert_eq!(t, PolyhedralCurrent::simplex(vec![p(&[0, 0]), p(&[3, 4])]));
        assert_eq!(t.mass(), 5.0);
    }

    #[test]
    fn degree_zero_round_trip() {
        let t = PolyhedralCurrent::from_pieces(0, 2, [(3, vec![p(&[1, 2])]), (-2, vec![p(&[0, 5])])]);
        let c = bracket_inverse_deg0(&t).unwrap();
        assert_eq!(c.coefficient(&AffineSimplex::point(p(&[1, 2]))), 3);
        assert_eq!(c.coefficient(&AffineSimplex::point(p(&[0, 5]))), -2);
        assert_eq!(bracket(&c, 2), t);
        assert!(bracket_inverse_deg0(&PolyhedralCurrent::zero(0, 2)).unwrap().is_zero());
        assert!(bracket_inverse_deg0(&PolyhedralCurrent::zero(1, 2)).is_err());
    }

    #[test]
    fn circle_generator_pairs_with_area() {
        let w = TestForm::new(PlFunction::coordinate(1, 2), vec![PlFunction::coordinate(0, 2)]);
        let (currents, m) = induced_on_generators(&[triangle_loop()], &[w], 2).unwrap();
        assert!(currents[0].is_cycle());
        assert_eq!(m, vec![vec![Q::new((-1).into(), 2.into())]]);
        let (c, m) = induced_on_generators(&[], &[], 2).unwrap();
        assert!(c.is_empty() && m.is_empty());
        let open = LipschitzChain::simplex(vec![p(&[0, 0]), p(&[1, 0])]);
        assert!(induced_on_generators(&[open], &[], 2).is_err());
    }

    #[test]
    fn pairing_detects_independence() {
        let square = |x: i64| {
            let pts = [p(&[x, 0]), p(&[x + 1, 0]), p(&[x + 1, 1]), p(&[x, 1])];
            (0..4).fold(LipschitzChain::zero(1), |c, i| c.add(&LipschitzChain::simplex(vec![pts[i].clone(), pts[(i + 1) % 4].clone()])))
        };
        let forms: Vec<TestForm> = [0, 3]
            .iter()
            .map(|&x| {
                let f = PlFunction::Max(vec![
                    crate::complex::Affine::constant(qi(0), 2),
                    crate::complex::Affine::new(vec![qi(-1), qi(0)], qi(x + 2)),
                ]);
                TestForm::new(f, vec![PlFunction::coordinate(1, 2)])
            })
            .collect();
        let (_, m) = induced_on_generators(&[square(0), square(3)], &forms, 2).unwrap();
        assert!(!linalg::det(&m).is_zero());
    }

    fn arb_chain(k: usize) -> impl Strategy<Value = LipschitzChain> {
        let pt = proptest::collection::vec(-3i64..4, 2).prop_map(|v| v.into_iter().map(qi).collect::<Point>());
        proptest::collection::vec((-2i64..3, proptest::collection::vec(pt, k + 1)), 1..4)
            .prop_map(move |ts| LipschitzChain::from_terms(k, ts.into_iter().map(|(a, v)| (a, AffineSimplex::new(v)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn chain_map(c in (1usize..3).prop_flat_map(arb_chain)) {
            prop_assert_eq!(bracket(&c, 2).boundary(), bracket(&c.boundary(), 2));
        }

        #[test]
        fn subdivision_invariance(c in arb_chain(2)) {
            prop_assert_eq!(bracket(&c.subdivide(), 2), bracket(&c, 2));
        }

        #[test]
        fn naturality(c in arb_chain(1), m in proptest::collection::vec(-2i64..3, 4)) {
            let map = PlMap::affine(&vec![vec![qi(m[0]), qi(m[1])], vec![qi(m[2]), qi(m[3])]], &[qi(0), qi(1)]);
            prop_assert_eq!(bracket(&c.pushforward(&map, 0).unwrap(), 2), bracket(&c, 2).pushforward(&map).unwrap());
        }
    }
}
