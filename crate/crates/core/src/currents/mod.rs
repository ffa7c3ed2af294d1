//! Polyhedral integral currents: ℤ-weighted oriented affine simplices kept in a
//! canonical reduced form.
use crate::arith::{q_to_f64, Q};
use crate::complex::{AffineMap, PlFunction};
use crate::geometry::{self, dedup_hyperplanes, Flat, Halfspace, Point, Polytope};
use crate::linalg;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{Signed, Zero};

mod ops;

pub use ops::{equicontinuity_bound, generic_level};

/// An oriented affine simplex with an integer multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Piece {
    pub vertices: Vec<Point>,
    pub theta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralCurrent {
    degree: usize,
    ambient_dim: usize,
    pieces: Vec<Piece>,
}

/// Test form (f, π₁, …, π_k).
#[derive(Clone, Debug)]
pub struct TestForm {
    pub f: PlFunction,
    pub pi: Vec<PlFunction>,
}

impl TestForm {
    pub fn new(f: PlFunction, pi: Vec<PlFunction>) -> Self {
        TestForm { f, pi }
    }

    /// The form (1, f, π) that `T` sees when ∂T is evaluated on (f, π).
    pub fn exterior(&self, dim: usize) -> TestForm {
        let mut pi = vec![self.f.clone()];
        pi.extend(self.pi.iter().cloned());
        TestForm { f: PlFunction::constant(Q::from_integer(1.into()), dim), pi }
    }
}

impl PolyhedralCurrent {
    pub fn zero(degree: usize, ambient_dim: usize) -> Self {
        PolyhedralCurrent { degree, ambient_dim, pieces: Vec::new() }
    }

    /// Reduced current of a raw list of (multiplicity, ordered vertices).
    pub fn from_pieces(degree: usize, ambient_dim: usize, raw: impl IntoIterator<Item = (i64, Vec<Point>)>) -> Self {
        let raw: Vec<Piece> = raw
            .into_iter()
            .map(|(theta, vertices)| {
                assert_eq!(vertices.len(), degree + 1, "piece of the wrong degree");
                Piece { theta, vertices }
            })
            .collect();
        PolyhedralCurrent { degree, ambient_dim, pieces: reduce(degree, raw) }
    }

    pub fn simplex(vertices: Vec<Point>) -> Self {
        let (k, n) = (vertices.len() - 1, vertices[0].len());
        Self::from_pieces(k, n, [(1, vertices)])
    }

    pub fn point(p: Point) -> Self {
        let n = p.len();
        Self::from_pieces(0, n, [(1, vec![p])])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn add(&self, other: &PolyhedralCurrent) -> PolyhedralCurrent {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let raw = self.raw().chain(other.raw());
        PolyhedralCurrent::from_pieces(self.degree, self.ambient_dim, raw)
    }

    pub fn scale(&self, k: i64) -> PolyhedralCurrent {
        PolyhedralCurrent::from_pieces(self.degree, self.ambient_dim, self.raw().map(|(t, v)| (t * k, v)))
    }

    pub fn neg(&self) -> PolyhedralCurrent {
        self.scale(-1)
    }

    pub fn sub(&self, other: &PolyhedralCurrent) -> PolyhedralCurrent {
        self.add(&other.neg())
    }

    pub(crate) fn raw(&self) -> impl Iterator<Item = (i64, Vec<Point>)> + '_ {
        self.pieces.iter().map(|p| (p.theta, p.vertices.clone()))
    }

    /// Sum of the multiplicities of a 0-current.
    pub fn augmentation(&self) -> i64 {
        assert_eq!(self.degree, 0, "augmentation of a positive-degree current");
        self.pieces.iter().map(|p| p.theta).sum()
    }

    pub fn boundary(&self) -> PolyhedralCurrent {
        if self.degree == 0 {
            return PolyhedralCurrent::zero(0, self.ambient_dim);
        }
        let mut raw = Vec::new();
        for p in &self.pieces {
            for i in 0..=self.degree {
                let mut v = p.vertices.clone();
                v.remove(i);
                raw.push((if i % 2 == 0 { p.theta } else { -p.theta }, v));
            }
        }
        PolyhedralCurrent::from_pieces(self.degree - 1, self.ambient_dim, raw)
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().is_zero()
    }

    /// T(f, π) computed exactly on the cells where f and every πᵢ are affine.
    pub fn evaluate(&self, form: &TestForm) -> crate::Result<Q> {
        if form.pi.len() != self.degree {
            return Err(crate::Error::Dimension(alloc::format!(
                "form with {} maps on a {}-current",
                form.pi.len(),
                self.degree
            )));
        }
        let mut total = Q::zero();
        for p in &self.pieces {
            if self.degree == 0 {
                total += form.f.eval(&p.vertices[0])? * Q::from_integer(p.theta.into());
                continue;
            }
            let chart = AffineMap::from_simplex(&p.vertices);
            let mut cells = vec![Polytope::standard_simplex(self.degree)];
            cells = form.f.refine(&chart, cells)?;
            for pi in &form.pi {
                cells = pi.refine(&chart, cells)?;
            }
            for cell in cells {
                let c = cell.centroid();
                let rows: Vec<Vec<Q>> =
                    form.pi.iter().map(|pi| pi.affine_on(&chart, &c).map(|a| a.linear)).collect::<crate::Result<_>>()?;
                let det = linalg::det(&rows);
                if det.is_zero() {
                    continue;
                }
                let f = form.f.affine_on(&chart, &c)?;
                let integral = cell
                    .triangulate()
                    .iter()
                    .map(|s| simplex_volume(s) * f.eval(&geometry::barycenter(s)))
                    .fold(Q::zero(), |a, b| a + b);
                total += integral * det * Q::from_integer(p.theta.into());
            }
        }
        Ok(total)
    }

    /// Σ |θ|·vol_k over the pieces.
    pub fn mass(&self) -> f64 {
        self.pieces.iter().map(|p| p.theta.unsigned_abs() as f64 * libm::sqrt(q_to_f64(&volume2(&p.vertices)))).sum()
    }

    /// Closed simplices whose union is the support.
    pub fn support(&self) -> Vec<Vec<Point>> {
        self.pieces.iter().map(|p| p.vertices.clone()).collect()
    }

    /// Squared diameter of the support together with extra points.
    pub fn diameter2_with(&self, extra: &[Point]) -> Q {
        let mut pts: Vec<&Point> = self.pieces.iter().flat_map(|p| p.vertices.iter()).collect();
        pts.extend(extra.iter());
        let mut best = Q::zero();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = geometry::dist2(pts[i], pts[j]);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }
}

/// Squared k-volume of a simplex from its Gram determinant.
pub fn volume2(vertices: &[Point]) -> Q {
    let k = vertices.len() - 1;
    if k == 0 {
        return Q::from_integer(1.into());
    }
    let f = Q::from_integer(crate::arith::factorial(k));
    linalg::gram_det(&geometry::edge_vectors(vertices)) / (&f * &f)
}

/// Unsigned volume of a full-dimensional simplex in its own coordinates.
fn simplex_volume(s: &[Point]) -> Q {
    let k = s.len() - 1;
    if k == 0 {
        return Q::from_integer(1.into());
    }
    linalg::det(&linalg::transpose(&geometry::edge_vectors(s), k)).abs() / Q::from_integer(crate::arith::factorial(k))
}

/// Canonical form: in degree 0 points with summed weights; otherwise, per
/// flat, the multiplicity function is cut by the hyperplanes across which it
/// jumps and each resulting convex region is triangulated canonically.
fn reduce(degree: usize, raw: Vec<Piece>) -> Vec<Piece> {
    if degree == 0 {
        let mut acc: BTreeMap<Point, i64> = BTreeMap::new();
        for p in raw {
            *acc.entry(p.vertices[0].clone()).or_insert(0) += p.theta;
        }
        return acc.into_iter().filter(|(_, t)| *t != 0).map(|(x, theta)| Piece { theta, vertices: vec![x] }).collect();
    }
    let mut by_flat: BTreeMap<Flat, Vec<(i64, Vec<Point>)>> = BTreeMap::new();
    for p in raw {
        if p.theta == 0 || !geometry::is_nondegenerate(&p.vertices) {
            continue;
        }
        let flat = Flat::through(&p.vertices);
        let coords: Vec<Point> = p.vertices.iter().map(|v| flat.coords(v)).collect();
        let sign = geometry::orientation(&coords) as i64;
        by_flat.entry(flat).or_default().push((p.theta * sign, coords));
    }
    let mut out = Vec::new();
    for (flat, group) in by_flat {
        for (theta, simplex) in reduce_in_flat(degree, group) {
            out.push(Piece { theta, vertices: simplex.iter().map(|y| flat.lift(y)).collect() });
        }
    }
    out.sort();
    out
}

fn reduce_in_flat(dim: usize, group: Vec<(i64, Vec<Point>)>) -> Vec<(i64, Vec<Point>)> {
    let polys: Vec<(i64, Polytope)> =
        group.into_iter().map(|(t, s)| (t, Polytope::simplex(s).expect("non-degenerate piece"))).collect();
    let planes = dedup_hyperplanes(polys.iter().flat_map(|(_, p)| p.constraints.iter().cloned()).collect::<Vec<_>>());
    // cells of the arrangement, keyed by sign vector
    let mut cells: BTreeMap<Vec<bool>, (i64, Polytope)> = BTreeMap::new();
    for (t, poly) in polys {
        for cell in geometry::cut_cells(vec![poly], &planes) {
            let c = cell.centroid();
            let signs: Vec<bool> = planes.iter().map(|h| h.slack(&c).is_positive()).collect();
            cells.entry(signs).or_insert((0, cell)).0 += t;
        }
    }
    let essential: Vec<usize> = (0..planes.len())
        .filter(|&h| {
            cells.iter().any(|(signs, (m, cell))| {
                if !has_facet_on(cell, &planes[h], dim) {
                    return false;
                }
                let mut other = signs.clone();
                other[h] = !other[h];
                cells.get(&other).map_or(0, |x| x.0) != *m
            })
        })
        .collect();
    let mut regions: BTreeMap<Vec<bool>, (i64, Vec<Point>)> = BTreeMap::new();
    for (signs, (m, cell)) in cells {
        if m == 0 {
            continue;
        }
        let key: Vec<bool> = essential.iter().map(|&h| signs[h]).collect();
        let entry = regions.entry(key).or_insert((m, Vec::new()));
        debug_assert_eq!(entry.0, m, "multiplicity jumps inside a region");
        entry.1.extend(cell.vertices);
    }
    let mut out = Vec::new();
    for (key, (m, mut verts)) in regions {
        let constraints: Vec<Halfspace> = essential
            .iter()
            .zip(&key)
            .map(|(&h, &above)| {
                let p = &planes[h];
                if above {
                    Halfspace { normal: p.normal.iter().map(|x| -x).collect(), offset: -p.offset.clone() }
                } else {
                    p.clone()
                }
            })
            .collect();
        verts.sort();
        verts.dedup();
        verts.retain(|v| {
            let tight: Vec<Vec<Q>> = constraints.iter().filter(|h| h.slack(v).is_zero()).map(|h| h.normal.clone()).collect();
            linalg::rank(&tight) == dim
        });
        let region = Polytope { dim, vertices: verts, constraints };
        for s in region.triangulate() {
            out.push((m, s));
        }
    }
    out
}

/// Common refinement of several currents of one degree: positively oriented
/// simplices with pairwise disjoint interiors, each with the multiplicity of
/// every input current on it. Simplices where all multiplicities vanish are
/// left out.
pub fn common_atoms(currents: &[&PolyhedralCurrent]) -> Vec<(Vec<Point>, Vec<i64>)> {
    let n = currents.len();
    let Some(first) = currents.first() else { return Vec::new() };
    let degree = first.degree;
    if degree == 0 {
        let mut acc: BTreeMap<Point, Vec<i64>> = BTreeMap::new();
        for (i, t) in currents.iter().enumerate() {
            for p in &t.pieces {
                acc.entry(p.vertices[0].clone()).or_insert_with(|| vec![0; n])[i] += p.theta;
            }
        }
        return acc.into_iter().filter(|(_, m)| m.iter().any(|&x| x != 0)).map(|(x, m)| (vec![x], m)).collect();
    }
    let mut by_flat: BTreeMap<Flat, Vec<(usize, i64, Polytope)>> = BTreeMap::new();
    for (i, t) in currents.iter().enumerate() {
        for p in &t.pieces {
            let flat = Flat::through(&p.vertices);
            let coords: Vec<Point> = p.vertices.iter().map(|v| flat.coords(v)).collect();
            let sign = geometry::orientation(&coords) as i64;
            let poly = Polytope::simplex(coords).expect("reduced pieces are non-degenerate");
            by_flat.entry(flat).or_default().push((i, p.theta * sign, poly));
        }
    }
    let mut out = Vec::new();
    for (flat, group) in by_flat {
        let planes = dedup_hyperplanes(group.iter().flat_map(|(_, _, p)| p.constraints.iter().cloned()).collect::<Vec<_>>());
        let mut cells: BTreeMap<Vec<bool>, (Vec<i64>, Polytope)> = BTreeMap::new();
        for (i, theta, poly) in group {
            for cell in geometry::cut_cells(vec![poly], &planes) {
                let c = cell.centroid();
                let signs: Vec<bool> = planes.iter().map(|h| h.slack(&c).is_positive()).collect();
                cells.entry(signs).or_insert_with(|| (vec![0; n], cell)).0[i] += theta;
            }
        }
        for (_, (m, cell)) in cells {
            if m.iter().all(|&x| x == 0) {
                continue;
            }
            for mut s in cell.triangulate() {
                if geometry::orientation(&s) < 0 {
                    s.swap(0, 1);
                }
                out.push((s.iter().map(|y| flat.lift(y)).collect(), m.clone()));
            }
        }
    }
    out
}

fn has_facet_on(cell: &Polytope, h: &Halfspace, dim: usize) -> bool {
    let on: Vec<Point> = cell.vertices.iter().filter(|v| h.slack(v).is_zero()).cloned().collect();
    !on.is_empty() && geometry::affine_rank(&on) == Some(dim - 1)
}

#[cfg(test)]
mod tests;
