use crate::chains::{AffineSimplex, LipschitzChain};
use crate::complex::{subdivide_points, Affine, AffineMap, BallCover, MetricComplex};
use crate::currents::{common_atoms, PolyhedralCurrent};
use crate::arith::Q;
use crate::geometry::{self, Point, Polytope};
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Which containing ball receives a term or piece in an ε-preimage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preference {
    First,
    Last,
}

/// Coefficient groups of the double complex: Lipschitz chains (vertical
/// differential b) and polyhedral currents (vertical differential ∂).
pub trait Coefficient: Clone + core::fmt::Debug + Sized {
    fn zero(degree: usize, ambient_dim: usize) -> Self;
    fn degree(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn scaled(&self, k: i64) -> Self;
    fn vertical(&self) -> Self;
    /// Total multiplicity of a 0-dimensional element.
    fn augmentation(&self) -> i64;
    fn same(&self, other: &Self) -> bool;
    /// Vertex lists of the terms or pieces; the element lies in their hulls.
    fn vertex_sets(&self) -> Vec<Vec<Point>>;
    /// Parts each lying in one ball, with that ball's index; subdivides until
    /// every part fits, at most `budget` times.
    fn assign(&self, cover: &BallCover, preference: Preference, budget: usize) -> Result<Vec<(usize, Self)>>;
    /// Independent building blocks of several elements, with the multiplicity
    /// of each element on each block.
    fn atoms(elements: &[&Self]) -> Vec<(Self, Vec<i64>)>;
    /// Vertex lists of parts that each lie in one closed face of `complex`
    /// and together make up the element.
    fn carrier_parts(&self, complex: &MetricComplex) -> Result<Vec<Vec<Point>>>;
    /// A filling of a cycle by the cone to `center`: its vertical image is
    /// `self`. 0-cycles need augmentation 0.
    fn cone_filling(&self, center: &Point) -> Result<Self>;
}

impl Coefficient for LipschitzChain {
    fn zero(degree: usize, _ambient_dim: usize) -> Self {
        LipschitzChain::zero(degree)
    }

    fn degree(&self) -> usize {
        LipschitzChain::degree(self)
    }

    fn is_zero(&self) -> bool {
        LipschitzChain::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn scaled(&self, k: i64) -> Self {
        self.scale(k)
    }

    fn vertical(&self) -> Self {
        self.boundary()
    }

    fn augmentation(&self) -> i64 {
        self.coefficient_sum()
    }

    fn same(&self, other: &Self) -> bool {
        LipschitzChain::degree(self) == LipschitzChain::degree(other) && self.terms().eq(other.terms())
    }

    fn vertex_sets(&self) -> Vec<Vec<Point>> {
        self.terms().map(|(s, _)| s.vertices().to_vec()).collect()
    }

    /// The whole chain is subdivided uniformly, so every part keeps one level.
    fn assign(&self, cover: &BallCover, preference: Preference, budget: usize) -> Result<Vec<(usize, Self)>> {
        let mut c = self.clone();
        for _ in 0..=budget {
            let mut parts: BTreeMap<usize, LipschitzChain> = BTreeMap::new();
            let mut ok = true;
            for (s, a) in c.terms() {
                match pick(cover, s.vertices(), preference) {
                    Some(i) => parts.entry(i).or_insert_with(|| LipschitzChain::zero(c.degree()).with_level(c.level())).add_term(a, s.clone()),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(parts.into_iter().filter(|(_, v)| !v.is_zero()).collect());
            }
            c = c.subdivide();
        }
        Err(Error::Cover(format!("chain terms not inside single balls after {budget} subdivisions")))
    }

    fn atoms(elements: &[&Self]) -> Vec<(Self, Vec<i64>)> {
        let n = elements.len();
        let level = elements.iter().map(|c| c.level()).max().unwrap_or(0);
        let degree = elements.first().map_or(0, |c| LipschitzChain::degree(c));
        let mut acc: BTreeMap<AffineSimplex, Vec<i64>> = BTreeMap::new();
        for (i, c) in elements.iter().enumerate() {
            for (s, a) in c.terms() {
                acc.entry(s.clone()).or_insert_with(|| vec![0; n])[i] += a;
            }
        }
        acc.into_iter()
            .map(|(s, m)| (LipschitzChain::from_terms(degree, [(1, s)]).with_level(level), m))
            .collect()
    }

    fn carrier_parts(&self, _complex: &MetricComplex) -> Result<Vec<Vec<Point>>> {
        Ok(self.vertex_sets())
    }

    fn cone_filling(&self, center: &Point) -> Result<Self> {
        self.cone_fill(center)
    }
}

impl Coefficient for PolyhedralCurrent {
    fn zero(degree: usize, ambient_dim: usize) -> Self {
        PolyhedralCurrent::zero(degree, ambient_dim)
    }

    fn degree(&self) -> usize {
        PolyhedralCurrent::degree(self)
    }

    fn is_zero(&self) -> bool {
        PolyhedralCurrent::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn scaled(&self, k: i64) -> Self {
        self.scale(k)
    }

    fn vertical(&self) -> Self {
        self.boundary()
    }

    fn augmentation(&self) -> i64 {
        PolyhedralCurrent::augmentation(self)
    }

    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn vertex_sets(&self) -> Vec<Vec<Point>> {
        self.pieces().iter().map(|p| p.vertices.clone()).collect()
    }

    fn assign(&self, cover: &BallCover, preference: Preference, budget: usize) -> Result<Vec<(usize, Self)>> {
        let mut parts: BTreeMap<usize, Vec<(i64, Vec<Point>)>> = BTreeMap::new();
        for p in self.pieces() {
            place(cover, p.theta, p.vertices.clone(), preference, budget, &mut parts)?;
        }
        let (k, n) = (PolyhedralCurrent::degree(self), self.ambient_dim());
        Ok(parts
            .into_iter()
            .map(|(i, raw)| (i, PolyhedralCurrent::from_pieces(k, n, raw)))
            .filter(|(_, t)| !t.is_zero())
            .collect())
    }

    fn atoms(elements: &[&Self]) -> Vec<(Self, Vec<i64>)> {
        common_atoms(elements).into_iter().map(|(s, m)| (PolyhedralCurrent::simplex(s), m)).collect()
    }

    /// Raw parts: the canonical form would merge pieces cut along a face.
    fn carrier_parts(&self, complex: &MetricComplex) -> Result<Vec<Vec<Point>>> {
        Ok(fit_to_complex(self, complex)?.into_iter().map(|(_, v)| v).collect())
    }

    fn cone_filling(&self, center: &Point) -> Result<Self> {
        if !self.is_cycle() {
            return Err(Error::Precondition("cone fill of a current with nonzero boundary".into()));
        }
        if PolyhedralCurrent::degree(self) == 0 && PolyhedralCurrent::augmentation(self) != 0 {
            return Err(Error::Precondition("0-cycle with nonzero augmentation".into()));
        }
        Ok(self.cone_to(center).neg())
    }
}

fn pick(cover: &BallCover, points: &[Point], preference: Preference) -> Option<usize> {
    let fits = |i: &usize| points.iter().all(|p| cover.balls[*i].contains(p));
    match preference {
        Preference::First => (0..cover.len()).find(fits),
        Preference::Last => (0..cover.len()).rev().find(fits),
    }
}

fn place(
    cover: &BallCover,
    theta: i64,
    vertices: Vec<Point>,
    preference: Preference,
    budget: usize,
    out: &mut BTreeMap<usize, Vec<(i64, Vec<Point>)>>,
) -> Result<()> {
    if let Some(i) = pick(cover, &vertices, preference) {
        out.entry(i).or_default().push((theta, vertices));
        return Ok(());
    }
    if budget == 0 || vertices.len() == 1 {
        return Err(Error::Cover(format!("piece with vertices {vertices:?} fits in no ball")));
    }
    for child in subdivide_points(&vertices) {
        place(cover, theta, child, preference, budget - 1, out)?;
    }
    Ok(())
}

/// Cuts every piece not inside one closed face along the faces of least
/// dimension whose affine hulls contain it.
pub(crate) fn fit_to_complex(t: &PolyhedralCurrent, complex: &MetricComplex) -> Result<Vec<(i64, Vec<Point>)>> {
    let k = t.degree();
    let mut raw = Vec::new();
    for p in t.pieces() {
        if k == 0 || complex.common_face(&p.vertices).is_some() {
            raw.push((p.theta, p.vertices.clone()));
            continue;
        }
        let mut parts = Vec::new();
        for d in k..=complex.dim() {
            for face in complex.faces(d) {
                let pts = complex.points(face);
                let Some(lams) = p.vertices.iter().map(|v| geometry::barycentric(v, &pts)).collect::<Option<Vec<_>>>() else {
                    continue;
                };
                parts.extend(clip_to_face(&p.vertices, &lams).into_iter().map(|s| (p.theta, s)));
            }
            if !parts.is_empty() {
                break;
            }
        }
        let whole = PolyhedralCurrent::from_pieces(k, t.ambient_dim(), [(p.theta, p.vertices.clone())]);
        if PolyhedralCurrent::from_pieces(k, t.ambient_dim(), parts.clone()) != whole {
            return Err(Error::OutsideCarrier);
        }
        raw.extend(parts);
    }
    Ok(raw)
}

/// The part of the simplex where every barycentric coordinate of the face is
/// nonnegative, as positively oriented simplices in the ambient space.
#[allow(clippy::needless_range_loop)]
fn clip_to_face(vertices: &[Point], lams: &[Vec<Q>]) -> Vec<Vec<Point>> {
    let k = vertices.len() - 1;
    let chart = AffineMap::from_simplex(vertices);
    let mut cell = Some(Polytope::standard_simplex(k));
    for i in 0..lams[0].len() {
        let base = lams[0][i].clone();
        let linear = (1..=k).map(|j| -(&lams[j][i] - &base)).collect();
        let negative = Affine::new(linear, -base);
        cell = cell.and_then(|c| c.clip(&negative.nonpositive()));
    }
    match cell {
        Some(c) if c.dim == k => c.triangulate().into_iter().map(|s| s.iter().map(|y| chart.apply(y)).collect()).collect(),
        _ => Vec::new(),
    }
}
