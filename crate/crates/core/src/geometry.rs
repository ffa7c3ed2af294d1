//! Affine geometry over the rationals: flats, convex polytopes, clipping and
//! canonical triangulation.
use crate::arith::{factorial, Q};
use crate::linalg::{self, Matrix, Vector};
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Point = Vec<Q>;

pub fn midpoint(a: &[Q], b: &[Q]) -> Point {
    a.iter().zip(b).map(|(x, y)| (x + y) / Q::from_integer(BigInt::from(2))).collect()
}

pub fn barycenter(points: &[Point]) -> Point {
    let n = Q::from_integer(BigInt::from(points.len()));
    let mut c = vec![Q::zero(); points[0].len()];
    for p in points {
        for (x, y) in c.iter_mut().zip(p) {
            *x += y;
        }
    }
    c.iter().map(|x| x / &n).collect()
}

/// (1 − t)·a + t·b
pub fn lerp(a: &[Q], b: &[Q], t: &Q) -> Point {
    a.iter().zip(b).map(|(x, y)| x + (y - x) * t).collect()
}

pub fn dist2(a: &[Q], b: &[Q]) -> Q {
    linalg::norm2(&linalg::sub(a, b))
}

pub fn edge_vectors(points: &[Point]) -> Vec<Vector> {
    points[1..].iter().map(|p| linalg::sub(p, &points[0])).collect()
}

/// Dimension of the affine hull (−1 encoded as None for the empty set).
pub fn affine_rank(points: &[Point]) -> Option<usize> {
    if points.is_empty() {
        return None;
    }
    Some(linalg::rank(&edge_vectors(points)))
}

pub fn is_nondegenerate(points: &[Point]) -> bool {
    affine_rank(points) == Some(points.len() - 1)
}

/// Squared k-volume of the simplex spanned by k+1 points.
pub fn simplex_volume2(points: &[Point]) -> Q {
    let k = points.len() - 1;
    let f = Q::from_integer(factorial(k));
    linalg::gram_det(&edge_vectors(points)) / (&f * &f)
}

/// Barycentric coordinates of `x` with respect to the (possibly lower
/// dimensional) non-degenerate simplex, or None if `x` is off its affine hull.
pub fn barycentric(x: &[Q], simplex: &[Point]) -> Option<Vec<Q>> {
    let edges = edge_vectors(simplex);
    let a = linalg::transpose(&edges, x.len());
    let mu = linalg::solve(&a, &linalg::sub(x, &simplex[0]))?;
    if linalg::mat_vec(&a, &mu) != linalg::sub(x, &simplex[0]) {
        return None;
    }
    let mut lam = vec![Q::one() - mu.iter().fold(Q::zero(), |s, m| s + m)];
    lam.extend(mu);
    Some(lam)
}

pub fn from_barycentric(lam: &[Q], simplex: &[Point]) -> Point {
    let mut p = vec![Q::zero(); simplex[0].len()];
    for (l, v) in lam.iter().zip(simplex) {
        for (x, y) in p.iter_mut().zip(v) {
            *x += l * y;
        }
    }
    p
}

pub fn in_closed_simplex(x: &[Q], simplex: &[Point]) -> bool {
    barycentric(x, simplex).is_some_and(|l| l.iter().all(|v| !v.is_negative()))
}

/// Canonical description of an affine flat: RREF direction rows and the unique
/// point of the flat vanishing at the pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Flat {
    directions: Matrix,
    pivots: Vec<usize>,
    offset: Point,
}

impl Flat {
    pub fn through(points: &[Point]) -> Flat {
        let mut dirs = edge_vectors(points);
        let pivots = linalg::rref(&mut dirs);
        let mut offset = points[0].clone();
        for (row, &p) in dirs.iter().zip(&pivots) {
            let c = offset[p].clone();
            for (o, d) in offset.iter_mut().zip(row) {
                *o -= &c * d;
            }
        }
        Flat { directions: dirs, pivots, offset }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Affine coordinates of a point of the flat.
    pub fn coords(&self, x: &[Q]) -> Point {
        self.pivots.iter().map(|&p| x[p].clone()).collect()
    }

    pub fn lift(&self, y: &[Q]) -> Point {
        let mut x = self.offset.clone();
        for (c, row) in y.iter().zip(&self.directions) {
            for (o, d) in x.iter_mut().zip(row) {
                *o += c * d;
            }
        }
        x
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.lift(&self.coords(x)) == x
    }
}

/// Halfspace normal·x ≤ offset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: Q,
}

impl Halfspace {
    pub fn slack(&self, x: &[Q]) -> Q {
        linalg::dot(&self.normal, x) - &self.offset
    }

    /// Scaled so the first nonzero normal entry is ±1 with the sign kept; the
    /// hyperplane itself is identified by `hyperplane_key`.
    pub fn hyperplane_key(&self) -> Option<(Vector, Q)> {
        let lead = self.normal.iter().find(|x| !x.is_zero())?.clone();
        Some((self.normal.iter().map(|x| x / &lead).collect(), &self.offset / &lead))
    }
}

/// Distinct hyperplanes among the given ones (zero normals dropped).
pub fn dedup_hyperplanes(hs: impl IntoIterator<Item = Halfspace>) -> Vec<Halfspace> {
    let set: BTreeSet<(Vector, Q)> = hs.into_iter().filter_map(|h| h.hyperplane_key()).collect();
    set.into_iter().map(|(normal, offset)| Halfspace { normal, offset }).collect()
}

/// Full-dimensional convex polytope in ℚᵏ with its vertices and a constraint
/// list containing every facet-defining halfspace.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub dim: usize,
    pub vertices: Vec<Point>,
    pub constraints: Vec<Halfspace>,
}

impl Polytope {
    /// Full-dimensional simplex in ℚᵏ from k+1 vertices.
    pub fn simplex(vertices: Vec<Point>) -> Option<Polytope> {
        let k = vertices.len() - 1;
        if k == 0 {
            return Some(Polytope { dim: 0, vertices, constraints: Vec::new() });
        }
        let edges = edge_vectors(&vertices);
        let inv = linalg::inverse(&linalg::transpose(&edges, k))?;
        // μ = inv·(x − v0); constraints μ_i ≥ 0 and Σ μ_i ≤ 1
        let mut constraints = Vec::new();
        let mut total = vec![Q::zero(); k];
        for row in &inv {
            let off = -linalg::dot(row, &vertices[0]);
            constraints.push(Halfspace { normal: row.iter().map(|x| -x).collect(), offset: off });
            for (t, x) in total.iter_mut().zip(row) {
                *t += x;
            }
        }
        let off = Q::one() + linalg::dot(&total, &vertices[0]);
        constraints.push(Halfspace { normal: total, offset: off });
        Some(Polytope { dim: k, vertices, constraints })
    }

    pub fn standard_simplex(k: usize) -> Polytope {
        let mut vs = vec![vec![Q::zero(); k]];
        for i in 0..k {
            let mut e = vec![Q::zero(); k];
            e[i] = Q::one();
            vs.push(e);
        }
        Polytope::simplex(vs).expect("standard simplex")
    }

    pub fn centroid(&self) -> Point {
        barycenter(&self.vertices)
    }

    fn tight(&self, v: &[Q]) -> Vec<usize> {
        (0..self.constraints.len()).filter(|&i| self.constraints[i].slack(v).is_zero()).collect()
    }

    /// Part of the polytope on the side normal·x ≤ offset, if full-dimensional.
    pub fn clip(&self, h: &Halfspace) -> Option<Polytope> {
        let slack: Vec<Q> = self.vertices.iter().map(|v| h.slack(v)).collect();
        if slack.iter().all(|s| !s.is_positive()) {
            return Some(self.clone());
        }
        if slack.iter().all(|s| !s.is_negative()) {
            return None;
        }
        let tights: Vec<Vec<usize>> = self.vertices.iter().map(|v| self.tight(v)).collect();
        let mut out: Vec<Point> = Vec::new();
        for (v, s) in self.vertices.iter().zip(&slack) {
            if !s.is_positive() {
                out.push(v.clone());
            }
        }
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let (si, sj) = (&slack[i], &slack[j]);
                if !((si.is_negative() && sj.is_positive()) || (si.is_positive() && sj.is_negative())) {
                    continue;
                }
                if !self.is_edge(&tights[i], &tights[j]) {
                    continue;
                }
                let t = si / (si - sj);
                out.push(lerp(&self.vertices[i], &self.vertices[j], &t));
            }
        }
        out.sort();
        out.dedup();
        if affine_rank(&out) != Some(self.dim) {
            return None;
        }
        let mut constraints = self.constraints.clone();
        constraints.push(h.clone());
        Some(Polytope { dim: self.dim, vertices: out, constraints })
    }

    fn is_edge(&self, a: &[usize], b: &[usize]) -> bool {
        let common: Vec<Vector> =
            a.iter().filter(|i| b.contains(i)).map(|&i| self.constraints[i].normal.clone()).collect();
        self.dim == 1 || linalg::rank(&common) + 1 == self.dim
    }

    /// Pieces on both sides of the hyperplane normal·x = offset.
    pub fn split(&self, h: &Halfspace) -> (Option<Polytope>, Option<Polytope>) {
        let flipped = Halfspace { normal: h.normal.iter().map(|x| -x).collect(), offset: -h.offset.clone() };
        (self.clip(h), self.clip(&flipped))
    }

    /// Whether the hyperplane passes through the interior.
    pub fn is_cut_by(&self, h: &Halfspace) -> bool {
        let slack: Vec<Q> = self.vertices.iter().map(|v| h.slack(v)).collect();
        slack.iter().any(|s| s.is_positive()) && slack.iter().any(|s| s.is_negative())
    }

    /// Sorted vertex list; identifies the polytope.
    pub fn key(&self) -> Vec<Point> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    /// Canonical pulling triangulation from the lexicographically least vertex;
    /// simplices are positively oriented.
    pub fn triangulate(&self) -> Vec<Vec<Point>> {
        let mut verts = self.vertices.clone();
        verts.sort();
        let tights: Vec<BTreeSet<usize>> = verts.iter().map(|v| self.tight(v).into_iter().collect()).collect();
        let all: Vec<usize> = (0..verts.len()).collect();
        let mut out = Vec::new();
        for idx in self.pull(&verts, &tights, &all, self.dim) {
            let mut s: Vec<Point> = idx.iter().map(|&i| verts[i].clone()).collect();
            if self.dim >= 1 && linalg::det(&linalg::transpose(&edge_vectors(&s), self.dim)).is_negative() {
                let n = s.len();
                s.swap(n - 2, n - 1);
            }
            out.push(s);
        }
        out
    }

    fn pull(&self, verts: &[Point], tights: &[BTreeSet<usize>], face: &[usize], d: usize) -> Vec<Vec<usize>> {
        if d == 0 {
            return vec![vec![face[0]]];
        }
        let apex = face[0];
        let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in 0..self.constraints.len() {
            if tights[apex].contains(&c) {
                continue;
            }
            let sub: Vec<usize> = face.iter().copied().filter(|&i| tights[i].contains(&c)).collect();
            if sub.len() < d || sub.len() == face.len() {
                continue;
            }
            let pts: Vec<Point> = sub.iter().map(|&i| verts[i].clone()).collect();
            if affine_rank(&pts) == Some(d - 1) {
                facets.insert(sub);
            }
        }
        let mut out = Vec::new();
        for f in facets {
            for mut s in self.pull(verts, tights, &f, d - 1) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    }

    pub fn volume(&self) -> Q {
        let f = Q::from_integer(factorial(self.dim));
        self.triangulate()
            .iter()
            .map(|s| linalg::det(&linalg::transpose(&edge_vectors(s), self.dim)).abs() / &f)
            .fold(Q::zero(), |a, b| a + b)
    }

    /// Whether the interiors of two full-dimensional polytopes meet.
    pub fn interiors_meet(&self, other: &Polytope) -> bool {
        if self.dim == 0 {
            return self.vertices == other.vertices;
        }
        let mut p = self.clone();
        for h in &other.constraints {
            match p.clip(h) {
                Some(q) => p = q,
                None => return false,
            }
        }
        true
    }
}

/// Cuts every cell by every hyperplane that passes through its interior.
pub fn cut_cells(cells: Vec<Polytope>, hyperplanes: &[Halfspace]) -> Vec<Polytope> {
    let mut cells = cells;
    for h in hyperplanes {
        let mut next = Vec::with_capacity(cells.len());
        for c in cells {
            if c.is_cut_by(h) {
                let (a, b) = c.split(h);
                next.extend(a);
                next.extend(b);
            } else {
                next.push(c);
            }
        }
        cells = next;
    }
    cells
}

/// Staircase triangulation of Δᵏ × [0,1]: the simplices
/// [(0,0)…(i,0),(i,1)…(k,1)] with sign (−1)ⁱ, vertices as (index, top?).
pub fn staircase(k: usize) -> Vec<(i64, Vec<(usize, bool)>)> {
    (0..=k)
        .map(|i| {
            let mut s: Vec<(usize, bool)> = (0..=i).map(|j| (j, false)).collect();
            s.extend((i..=k).map(|j| (j, true)));
            (if i % 2 == 0 { 1 } else { -1 }, s)
        })
        .collect()
}

/// Orientation of k+1 points in ℚᵏ: sign of det(v_i − v_0).
pub fn orientation(points: &[Point]) -> i32 {
    let k = points.len() - 1;
    if k == 0 {
        return 1;
    }
    let d = linalg::det(&linalg::transpose(&edge_vectors(points), k));
    crate::arith::sign_q(&d)
}

/// Sign of the permutation that sorts `items`, or 0 if two are equal.
pub fn sort_with_sign<T: Ord>(items: &mut [T]) -> i32 {
    let mut sign = 1;
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 {
            match items[j - 1].cmp(&items[j]) {
                Ordering::Greater => {
                    items.swap(j - 1, j);
                    sign = -sign;
                    j -= 1;
                }
                Ordering::Equal => return 0,
                Ordering::Less => break,
            }
        }
    }
    if items.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qi};

    fn pt(c: &[i64]) -> Point {
        c.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn flat_coordinates_round_trip() {
        let f = Flat::through(&[pt(&[1, 1, 1]), pt(&[2, 1, 3]), pt(&[1, 2, 2])]);
        assert_eq!(f.dim(), 2);
        let x = pt(&[3, 4, 8]);
        assert!(f.contains(&x) == (f.lift(&f.coords(&x)) == x));
        let g = Flat::through(&[pt(&[2, 1, 3]), pt(&[1, 2, 2]), pt(&[1, 1, 1])]);
        assert_eq!(f, g);
    }

    #[test]
    fn square_split_and_triangulation() {
        let sq = Polytope::simplex(vec![pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])]).unwrap();
        let h = Halfspace { normal: vec![qi(1), qi(0)], offset: qi(1) };
        let (a, b) = sq.split(&h);
        let (a, b) = (a.unwrap(), b.unwrap());
        assert_eq!(a.vertices.len(), 4);
        assert_eq!(b.vertices.len(), 3);
        assert_eq!(a.volume() + b.volume(), qi(2));
        assert_eq!(b.volume(), q(1, 2));
        for s in a.triangulate() {
            assert_eq!(orientation(&s), 1);
        }
        assert_eq!(a.triangulate().len(), 2);
    }

    #[test]
    fn overlap_detection() {
        let a = Polytope::simplex(vec![pt(&[0]), pt(&[2])]).unwrap();
        let b = Polytope::simplex(vec![pt(&[1]), pt(&[3])]).unwrap();
        let c = Polytope::simplex(vec![pt(&[2]), pt(&[3])]).unwrap();
        assert!(a.interiors_meet(&b));
        assert!(!a.interiors_meet(&c));
        let t1 = Polytope::simplex(vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        let t2 = Polytope::simplex(vec![pt(&[1, 0]), pt(&[1, 1]), pt(&[0, 1])]).unwrap();
        assert!(!t1.interiors_meet(&t2));
        assert!(t1.interiors_meet(&t1));
    }

    #[test]
    fn three_dimensional_cut_keeps_volume() {
        let t = Polytope::standard_simplex(3);
        let h = Halfspace { normal: vec![qi(1), qi(1), qi(0)], offset: q(1, 2) };
        let cells = cut_cells(vec![t], &[h]);
        assert_eq!(cells.len(), 2);
        let total: Q = cells.iter().map(|c| c.volume()).fold(Q::zero(), |a, b| a + b);
        assert_eq!(total, q(1, 6));
    }

    #[test]
    fn permutation_sign() {
        let mut v = [3, 1, 2];
        assert_eq!(sort_with_sign(&mut v), 1);
        let mut w = [2, 1];
        assert_eq!(sort_with_sign(&mut w), -1);
        let mut z = [1, 1];
        assert_eq!(sort_with_sign(&mut z), 0);
    }

    #[test]
    fn barycentric_of_edge_point() {
        let s = vec![pt(&[0, 0]), pt(&[2, 2])];
        assert_eq!(barycentric(&pt(&[1, 1]), &s), Some(vec![q(1, 2), q(1, 2)]));
        assert_eq!(barycentric(&pt(&[1, 0]), &s), None);
        assert_eq!(simplex_volume2(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]), q(1, 4));
    }
}
