//! Singular Lipschitz chains realized by affine simplices: boundary, barycentric
//! subdivision, push-forward, prism operator and equality in the subdivision limit.
use crate::complex::{AffineMap, Homotopy, MetricComplex, PlMap};
use crate::geometry::{self, sort_with_sign, Point, Polytope};
use crate::{Error, Result};
use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Affine map of the standard simplex given by its ordered vertex images;
/// degenerate images are allowed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineSimplex {
    vertices: Vec<Point>,
}

impl AffineSimplex {
    pub fn new(vertices: Vec<Point>) -> Self {
        assert!(!vertices.is_empty(), "a simplex needs a vertex");
        AffineSimplex { vertices }
    }

    pub fn point(p: Point) -> Self {
        AffineSimplex { vertices: vec![p] }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Restriction to the facet opposite vertex i.
    pub fn facet(&self, i: usize) -> AffineSimplex {
        let mut v = self.vertices.clone();
        v.remove(i);
        AffineSimplex { vertices: v }
    }

    pub fn barycenter(&self) -> Point {
        geometry::barycenter(&self.vertices)
    }

    pub fn is_degenerate(&self) -> bool {
        !geometry::is_nondegenerate(&self.vertices)
    }

    /// The simplex p·σ = [p, v₀, …, v_k].
    pub fn cone_from(&self, p: &Point) -> AffineSimplex {
        let mut v = vec![p.clone()];
        v.extend(self.vertices.iter().cloned());
        AffineSimplex { vertices: v }
    }

    /// Vertices sorted, with the sign of the sorting permutation (0 when a
    /// vertex repeats).
    pub fn canonical(&self) -> (i64, AffineSimplex) {
        let mut v = self.vertices.clone();
        let s = sort_with_sign(&mut v);
        (s as i64, AffineSimplex { vertices: v })
    }

    pub fn chart(&self) -> AffineMap {
        AffineMap::from_simplex(&self.vertices)
    }

    /// The composite φ∘σ when φ is affine on the image of σ.
    pub fn compose(&self, map: &PlMap) -> Result<Option<AffineSimplex>> {
        let k = self.dim();
        if k > 0 {
            let cells = map.refine(&self.chart(), vec![Polytope::standard_simplex(k)])?;
            if cells.len() > 1 {
                return Ok(None);
            }
        }
        let v = self.vertices.iter().map(|p| map.eval(p)).collect::<Result<_>>()?;
        Ok(Some(AffineSimplex { vertices: v }))
    }
}

/// ℤ-linear combination of affine simplices of one degree, tagged with the
/// number of subdivisions applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzChain {
    degree: usize,
    level: usize,
    terms: BTreeMap<AffineSimplex, i64>,
}

impl LipschitzChain {
    pub fn zero(degree: usize) -> Self {
        LipschitzChain { degree, level: 0, terms: BTreeMap::new() }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (i64, AffineSimplex)>) -> Self {
        let mut c = Self::zero(degree);
        for (a, s) in terms {
            c.add_term(a, s);
        }
        c
    }

    pub fn simplex(vertices: Vec<Point>) -> Self {
        let d = vertices.len() - 1;
        Self::from_terms(d, [(1, AffineSimplex::new(vertices))])
    }

    pub fn point(p: Point) -> Self {
        Self::from_terms(0, [(1, AffineSimplex::point(p))])
    }

    pub fn with_level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AffineSimplex, i64)> {
        self.terms.iter().map(|(s, &a)| (s, a))
    }

    pub fn coefficient(&self, s: &AffineSimplex) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, a: i64, s: AffineSimplex) {
        assert_eq!(s.dim(), self.degree, "term of the wrong degree");
        if a == 0 {
            return;
        }
        match self.terms.entry(s) {
            Entry::Vacant(e) => {
                e.insert(a);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += a;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    /// Term-wise sum; the level tag of the result is the larger one.
    pub fn add(&self, other: &LipschitzChain) -> LipschitzChain {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut c = self.clone();
        c.level = self.level.max(other.level);
        for (s, a) in other.terms() {
            c.add_term(a, s.clone());
        }
        c
    }

    pub fn scale(&self, k: i64) -> LipschitzChain {
        let mut c = LipschitzChain { degree: self.degree, level: self.level, terms: BTreeMap::new() };
        for (s, a) in self.terms() {
            c.add_term(a * k, s.clone());
        }
        c
    }

    pub fn neg(&self) -> LipschitzChain {
        self.scale(-1)
    }

    pub fn sub(&self, other: &LipschitzChain) -> LipschitzChain {
        self.add(&other.neg())
    }

    /// Sum of the coefficients.
    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    /// b σ = Σ (−1)ⁱ σ|facet i; zero in degree 0.
    pub fn boundary(&self) -> LipschitzChain {
        if self.degree == 0 {
            return LipschitzChain { degree: 0, level: self.level, terms: BTreeMap::new() };
        }
        let mut c = LipschitzChain { degree: self.degree - 1, level: self.level, terms: BTreeMap::new() };
        for (s, a) in self.terms() {
            for i in 0..=self.degree {
                c.add_term(if i % 2 == 0 { a } else { -a }, s.facet(i));
            }
        }
        c
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().is_zero()
    }

    /// Barycentric subdivision sd(σ) = b_σ·sd(bσ), sd(point) = point.
    pub fn subdivide(&self) -> LipschitzChain {
        let mut c = LipschitzChain { degree: self.degree, level: self.level + 1, terms: BTreeMap::new() };
        for (s, a) in self.terms() {
            for (b, t) in subdivide_simplex(s) {
                c.add_term(a * b, t);
            }
        }
        c
    }

    pub fn subdivide_times(&self, m: usize) -> LipschitzChain {
        (0..m).fold(self.clone(), |c, _| c.subdivide())
    }

    /// Cone p·c: prepends p to every term.
    pub fn cone_from(&self, p: &Point) -> LipschitzChain {
        LipschitzChain::from_terms(self.degree + 1, self.terms().map(|(s, a)| (a, s.cone_from(p)))).with_level(self.level)
    }

    /// Subdivision homotopy D with b∘D + D∘b = 1 − sd: Dσ = b_σ·(σ − D bσ) in
    /// positive degree, D = 0 on points.
    pub fn subdivision_homotopy(&self) -> LipschitzChain {
        let mut out = LipschitzChain::zero(self.degree + 1).with_level(self.level);
        if self.degree == 0 {
            return out;
        }
        for (s, a) in self.terms() {
            let single = LipschitzChain::from_terms(self.degree, [(1, s.clone())]);
            let inner = single.sub(&single.boundary().subdivision_homotopy());
            out = out.add(&inner.cone_from(&s.barycenter()).scale(a));
        }
        out.with_level(self.level)
    }

    /// Terms with sorted vertices and orientation sign; repeated-vertex terms dropped.
    pub fn canonical(&self) -> LipschitzChain {
        let mut c = LipschitzChain { degree: self.degree, level: self.level, terms: BTreeMap::new() };
        for (s, a) in self.terms() {
            let (sign, t) = s.canonical();
            c.add_term(a * sign, t);
        }
        c
    }

    /// Push-forward φ∘σ, subdividing the whole chain until φ is affine on every
    /// term (at most `budget` extra levels).
    pub fn pushforward(&self, map: &PlMap, budget: usize) -> Result<LipschitzChain> {
        let mut c = self.clone();
        for _ in 0..=budget {
            let mut out = LipschitzChain { degree: c.degree, level: c.level, terms: BTreeMap::new() };
            let mut ok = true;
            for (s, a) in c.terms() {
                match s.compose(map)? {
                    Some(t) => out.add_term(a, t),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(out);
            }
            c = c.subdivide();
        }
        Err(Error::SubdivisionBudget(budget))
    }

    /// Prism operator: P(σ) = Σ (−1)ⁱ [h₀v₀, …, h₀vᵢ, h₁vᵢ, …, h₁v_k], so that
    /// b P + P b = h₁# − h₀#. The homotopy ends must be affine on each term.
    pub fn prism(&self, h: &Homotopy) -> Result<LipschitzChain> {
        let mut out = LipschitzChain::zero(self.degree + 1).with_level(self.level);
        for (s, a) in self.terms() {
            if s.compose(&h.start)?.is_none() || s.compose(&h.end)?.is_none() {
                return Err(Error::SubdivisionBudget(0));
            }
            for (sign, verts) in h.prism_images(s.vertices())? {
                out.add_term(a * sign, AffineSimplex::new(verts));
            }
        }
        Ok(out)
    }

    /// Chain whose boundary is this cycle, by the prism of the straight-line
    /// contraction to `center`. Degree-0 cycles must have coefficient sum 0.
    pub fn cone_fill(&self, center: &Point) -> Result<LipschitzChain> {
        if !self.is_cycle() {
            return Err(Error::Precondition("cone fill of a non-cycle".into()));
        }
        let n = self.coefficient_sum();
        if self.degree == 0 && n != 0 {
            return Err(Error::Precondition("degree-0 cycle with nonzero augmentation".into()));
        }
        let dim = center.len();
        let h = Homotopy { start: PlMap::identity(dim), end: PlMap::constant(center, dim) };
        let mut fill = self.prism(&h)?.neg();
        if self.degree % 2 == 1 && n != 0 {
            let constant = AffineSimplex::new(vec![center.clone(); self.degree + 2]);
            fill.add_term(n, constant);
        }
        Ok(fill)
    }

    /// Minimal closed faces of `complex` carrying the terms, subdividing terms
    /// that straddle several faces (at most `budget` times).
    pub fn image(&self, complex: &MetricComplex, budget: usize) -> Result<BTreeSet<Vec<usize>>> {
        let mut out = BTreeSet::new();
        for (s, _) in self.terms() {
            carrier_faces(s, complex, budget, &mut out)?;
        }
        Ok(out)
    }

    /// Every vertex of every term.
    pub fn vertex_points(&self) -> BTreeSet<Point> {
        self.terms.keys().flat_map(|s| s.vertices.iter().cloned()).collect()
    }
}

fn carrier_faces(s: &AffineSimplex, complex: &MetricComplex, budget: usize, out: &mut BTreeSet<Vec<usize>>) -> Result<()> {
    if let Some(f) = complex.common_face(s.vertices()) {
        out.insert(f);
        return Ok(());
    }
    if budget == 0 {
        return Err(Error::SubdivisionBudget(0));
    }
    for (_, t) in subdivide_simplex(s) {
        carrier_faces(&t, complex, budget - 1, out)?;
    }
    Ok(())
}

/// Signed terms of the barycentric subdivision of one simplex.
pub fn subdivide_simplex(s: &AffineSimplex) -> Vec<(i64, AffineSimplex)> {
    if s.dim() == 0 {
        return vec![(1, s.clone())];
    }
    let b = s.barycenter();
    let mut out: Vec<(i64, AffineSimplex)> = Vec::new();
    for i in 0..=s.dim() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for (c, t) in subdivide_simplex(&s.facet(i)) {
            out.push((sign * c, t.cone_from(&b)));
        }
    }
    out
}

/// Whether two chains agree after subdividing both to a common level plus
/// `extra`, comparing canonical forms.
pub fn equal_in_limit(c: &LipschitzChain, d: &LipschitzChain, extra: usize) -> bool {
    if c.degree() != d.degree() {
        return false;
    }
    let top = c.level().max(d.level()) + extra;
    let a = c.subdivide_times(top - c.level()).canonical();
    let b = d.subdivide_times(top - d.level()).canonical();
    a.terms == b.terms
}

/// Affine chain of a simplicial chain, sorted-vertex orientation.
pub fn from_simplicial(complex: &MetricComplex, k: usize, coeffs: &[BigInt]) -> LipschitzChain {
    let mut c = LipschitzChain::zero(k);
    for (face, a) in complex.faces(k).iter().zip(coeffs) {
        let a = a.to_i64().expect("coefficient fits in i64");
        c.add_term(a, AffineSimplex::new(complex.points(face)));
    }
    c
}

/// Simplicial coordinates of a chain whose canonical terms are faces of the
/// complex, or None.
pub fn to_simplicial(complex: &MetricComplex, c: &LipschitzChain) -> Option<Vec<BigInt>> {
    let k = c.degree();
    let mut out = vec![BigInt::from(0); complex.faces(k).len()];
    for (s, a) in c.canonical().terms() {
        let idx: Vec<usize> = s.vertices().iter().map(|p| complex.vertex_index(p)).collect::<Option<_>>()?;
        let (sign, sorted) = {
            let mut v = idx.clone();
            let sg = sort_with_sign(&mut v);
            (sg as i64, v)
        };
        let pos = complex.face_index(&sorted)?;
        out[pos] += BigInt::from(a * sign);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qi};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Point {
        c.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn edge_boundary_and_loop() {
        let e = LipschitzChain::simplex(vec![p(&[0, 0]), p(&[1, 0])]);
        let expect = LipschitzChain::point(p(&[1, 0])).sub(&LipschitzChain::point(p(&[0, 0])));
        assert_eq!(e.boundary(), expect);
        let tri = LipschitzChain::simplex(vec![p(&[0, 0]), p(&[1, 0])])
            .add(&LipschitzChain::simplex(vec![p(&[1, 0]), p(&[0, 1])]))
            .add(&LipschitzChain::simplex(vec![p(&[0, 1]), p(&[0, 0])]));
        assert!(tri.boundary().is_zero());
        assert!(LipschitzChain::point(p(&[0])).boundary().is_zero());
    }

    #[test]
    fn subdividing_an_edge() {
        let e = LipschitzChain::simplex(vec![p(&[0]), p(&[2])]);
        let sd = e.subdivide().canonical();
        assert_eq!(sd.level(), 1);
        let expect = LipschitzChain::simplex(vec![p(&[0]), p(&[1])]).add(&LipschitzChain::simplex(vec![p(&[1]), p(&[2])]));
        assert_eq!(sd.terms, expect.terms);
        let pt = LipschitzChain::point(p(&[3]));
        assert_eq!(pt.subdivide().terms, pt.terms);
        assert_eq!(pt.subdivide().level(), 1);
        assert!(equal_in_limit(&e, &expect.clone().with_level(1), 2));
        assert!(!equal_in_limit(&e, &expect, 2));
        assert!(equal_in_limit(&e, &e.subdivide(), 2));
        let extra = e.add(&LipschitzChain::simplex(vec![p(&[5]), p(&[7])]));
        assert!(!equal_in_limit(&e, &extra, 2));
    }

    #[test]
    fn subdivision_homotopy_identity() {
        let s = LipschitzChain::simplex(vec![p(&[0, 0]), p(&[3, 0]), p(&[0, 3])]);
        let d = s.subdivision_homotopy();
        let lhs = d.boundary().add(&s.boundary().subdivision_homotopy());
        let rhs = s.sub(&s.subdivide());
        assert_eq!(lhs.terms, rhs.terms);
    }

    #[test]
    fn pushforward_identity_and_constant() {
        let s = LipschitzChain::simplex(vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]);
        assert_eq!(s.pushforward(&PlMap::identity(2), 0).unwrap(), s);
        let c = s.pushforward(&PlMap::constant(&p(&[4, 4]), 2), 0).unwrap();
        assert!(c.terms().all(|(t, _)| t.is_degenerate()));
    }

    #[test]
    fn cone_over_a_point() {
        let x = LipschitzChain::point(p(&[1, 1]));
        let h = Homotopy { start: PlMap::identity(2), end: PlMap::constant(&p(&[0, 0]), 2) };
        let pr = x.prism(&h).unwrap();
        assert_eq!(pr, LipschitzChain::simplex(vec![p(&[1, 1]), p(&[0, 0])]));
        assert_eq!(pr.boundary(), LipschitzChain::point(p(&[0, 0])).sub(&x));
    }

    #[test]
    fn constant_homotopy_prism_is_degenerate() {
        let e = LipschitzChain::simplex(vec![p(&[0]), p(&[1])]);
        let h = Homotopy { start: PlMap::identity(1), end: PlMap::identity(1) };
        let pr = e.prism(&h).unwrap();
        assert!(pr.terms().all(|(t, _)| t.is_degenerate()));
        assert!(pr.boundary().add(&e.boundary().prism(&h).unwrap()).is_zero());
    }

    #[test]
    fn image_of_subdivision_matches() {
        let c = crate::complex::MetricComplex::new(
            2,
            vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            Default::default(),
        )
        .unwrap();
        assert!(LipschitzChain::zero(1).image(&c, 0).unwrap().is_empty());
        let e = LipschitzChain::simplex(vec![p(&[0, 0]), p(&[1, 0])]);
        assert_eq!(e.image(&c, 0).unwrap().into_iter().collect::<Vec<_>>(), vec![vec![0, 1]]);
        let loop_ = from_simplicial(&c, 1, &[BigInt::from(1), BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(loop_.image(&c, 0).unwrap(), loop_.subdivide().image(&c, 0).unwrap());
        assert!(loop_.is_cycle());
        let back = to_simplicial(&c, &loop_).unwrap();
        assert_eq!(back, vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]);
        // a chord leaves the complex
        let chord = LipschitzChain::simplex(vec![p(&[0, 0]), vec![q(1, 2), q(1, 2)]]);
        assert!(chord.image(&c, 2).is_err());
    }

    fn arb_point(dim: usize) -> impl Strategy<Value = Point> {
        proptest::collection::vec(-4i64..5, dim).prop_map(|v| v.into_iter().map(|x| q(x, 2)).collect())
    }

    fn arb_chain(k: usize) -> impl Strategy<Value = LipschitzChain> {
        proptest::collection::vec((-3i64..4, proptest::collection::vec(arb_point(3), k + 1)), 1..4).prop_map(move |ts| {
            LipschitzChain::from_terms(k, ts.into_iter().map(|(a, v)| (a, AffineSimplex::new(v))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn boundary_squares_to_zero(c in (1usize..4).prop_flat_map(arb_chain)) {
            prop_assert!(c.boundary().boundary().is_zero());
        }

        #[test]
        fn subdivision_commutes_with_boundary(c in (1usize..3).prop_flat_map(arb_chain)) {
            prop_assert_eq!(c.subdivide().boundary().terms, c.boundary().subdivide().terms);
        }

        #[test]
        fn pushforward_commutes_with_boundary(c in (1usize..3).prop_flat_map(arb_chain), a in -3i64..4, b in -3i64..4) {
            let m = vec![vec![qi(a), qi(1), qi(0)], vec![qi(0), qi(b), qi(1)]];
            let f = PlMap::affine(&m, &[qi(1), qi(0)]);
            let lhs = c.pushforward(&f, 0).unwrap().boundary();
            let rhs = c.boundary().pushforward(&f, 0).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn prism_identity(c in (0usize..3).prop_flat_map(arb_chain), x0 in arb_point(3)) {
            let h = Homotopy { start: PlMap::identity(3), end: PlMap::constant(&x0, 3) };
            let mut lhs = c.prism(&h).unwrap().boundary();
            if c.degree() > 0 {
                lhs = lhs.add(&c.boundary().prism(&h).unwrap());
            }
            let rhs = c.pushforward(&h.end, 0).unwrap().sub(&c);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cone_fill_bounds_cycles(c in (1usize..3).prop_flat_map(arb_chain), x0 in arb_point(3)) {
            let z = c.boundary();
            let fill = z.cone_fill(&x0).unwrap();
            prop_assert_eq!(fill.boundary(), z);
        }

        #[test]
        fn equal_in_limit_is_implied_by_equality(c in (1usize..3).prop_flat_map(arb_chain)) {
            prop_assert!(equal_in_limit(&c, &c.clone(), 1));
            prop_assert!(equal_in_limit(&c, &c.subdivide(), 1));
        }
    }
}
