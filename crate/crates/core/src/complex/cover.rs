//! Open Euclidean ball covers of a complex, finite covering certificates and
//! refinement projections.
use super::MetricComplex;
use crate::arith::Q;
use crate::geometry::{self, Point};
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Point,
    pub radius: Q,
}

impl Ball {
    pub fn new(center: Point, radius: Q) -> Self {
        Ball { center, radius }
    }

    /// Ball centered at a barycentric point of a face.
    pub fn on_face(complex: &MetricComplex, face: &[usize], barycentric: &[Q], radius: Q) -> Result<Self> {
        if barycentric.len() != face.len() || barycentric.iter().any(|x| x.is_negative()) {
            return Err(Error::Dimension(format!("bad barycentric coordinates {barycentric:?}")));
        }
        if barycentric.iter().fold(Q::zero(), |a, b| a + b) != Q::one() {
            return Err(Error::Dimension("barycentric coordinates must sum to 1".into()));
        }
        Ok(Ball { center: geometry::from_barycentric(barycentric, &complex.points(face)), radius })
    }

    /// Strict containment in the open ball.
    pub fn contains(&self, x: &[Q]) -> bool {
        geometry::dist2(&self.center, x) < &self.radius * &self.radius
    }

    /// Exact certificate d(c, c′) + r ≤ r′ for self ⊆ other.
    pub fn inside(&self, other: &Ball) -> bool {
        let slack = &other.radius - &self.radius;
        !slack.is_negative() && geometry::dist2(&self.center, &other.center) <= &slack * &slack
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallCover {
    pub balls: Vec<Ball>,
}

impl BallCover {
    pub fn new(balls: Vec<Ball>) -> Self {
        BallCover { balls }
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Indices of the balls containing `x`.
    pub fn members(&self, x: &[Q]) -> Vec<usize> {
        (0..self.balls.len()).filter(|&i| self.balls[i].contains(x)).collect()
    }

    /// Whether `x` lies in every ball of the tuple.
    pub fn in_all(&self, tuple: &[usize], x: &[Q]) -> bool {
        tuple.iter().all(|&i| self.balls[i].contains(x))
    }

    /// First ball containing all the given points (hence their convex hull).
    pub fn first_containing(&self, points: &[Point]) -> Option<usize> {
        (0..self.balls.len()).find(|&i| points.iter().all(|p| self.balls[i].contains(p)))
    }

    /// Certifies that the balls cover the carrier by adaptive subdivision of
    /// every maximal simplex, down to `depth` levels.
    pub fn certify(&self, complex: &MetricComplex, depth: usize) -> Result<()> {
        for s in complex.maximal_simplices() {
            self.certify_simplex(complex.points(&s), depth)?;
        }
        Ok(())
    }

    fn certify_simplex(&self, pts: Vec<Point>, depth: usize) -> Result<()> {
        if self.first_containing(&pts).is_some() {
            return Ok(());
        }
        if let Some(p) = pts.iter().find(|p| self.members(p).is_empty()) {
            return Err(Error::Cover(format!("point {} is not covered", fmt_point(p))));
        }
        if depth == 0 {
            return Err(Error::Cover(format!(
                "simplex with vertices [{}] not certified at the subdivision budget",
                pts.iter().map(|p| fmt_point(p)).collect::<Vec<_>>().join(", ")
            )));
        }
        for child in subdivide_simplex(&pts) {
            self.certify_simplex(child, depth - 1)?;
        }
        Ok(())
    }

    /// λ for a finer cover: each of its balls goes to the first ball of
    /// `coarse` that contains it by the exact center-radius certificate.
    pub fn refinement_map(&self, coarse: &BallCover) -> Result<Vec<usize>> {
        self.balls
            .iter()
            .enumerate()
            .map(|(i, b)| coarse.balls.iter().position(|c| b.inside(c)).ok_or(Error::Refinement(i)))
            .collect()
    }

    /// Refined cover with radii `factor · min radius`, centered on the points of
    /// a lattice net of the carrier whose balls have a containing coarse ball;
    /// the net is doubled until the cover certifies.
    pub fn refine(&self, complex: &MetricComplex, factor: &Q, depth: usize) -> Result<(BallCover, Vec<usize>)> {
        if factor.is_one() {
            return Ok((self.clone(), (0..self.len()).collect()));
        }
        if !factor.is_positive() || factor > &Q::one() {
            return Err(Error::Precondition(format!("refinement factor {factor} not in (0, 1]")));
        }
        let rmin = self.balls.iter().map(|b| b.radius.clone()).min().ok_or(Error::Cover("empty cover".into()))?;
        let radius = factor * rmin;
        let mut n = 1u32;
        let mut last = None;
        for level in 0..8 {
            let fine = BallCover::new(
                lattice_points(complex, n)
                    .into_iter()
                    .map(|c| Ball::new(c, radius.clone()))
                    .filter(|b| self.balls.iter().any(|c| b.inside(c)))
                    .collect(),
            );
            let lambda = fine.refinement_map(self)?;
            match fine.certify(complex, depth + level) {
                Ok(()) => return Ok((fine, lambda)),
                Err(e) => last = Some(e),
            }
            n *= 2;
        }
        Err(last.unwrap_or(Error::Cover("refinement failed".into())))
    }
}

/// Points Σ (aᵢ/n)·wᵢ with Σ aᵢ = n over every face, without repeats.
pub fn lattice_points(complex: &MetricComplex, n: u32) -> Vec<Point> {
    let mut set = BTreeSet::new();
    for s in complex.maximal_simplices() {
        let pts = complex.points(&s);
        for comp in compositions(n, pts.len()) {
            let lam: Vec<Q> = comp.iter().map(|&a| Q::new(BigInt::from(a), BigInt::from(n))).collect();
            set.insert(geometry::from_barycentric(&lam, &pts));
        }
    }
    set.into_iter().collect()
}

fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for a in 0..=n {
        for mut rest in compositions(n - a, parts - 1) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// Edge-midpoint subdivision for dimension ≤ 2, barycentric otherwise.
pub fn subdivide_simplex(pts: &[Point]) -> Vec<Vec<Point>> {
    match pts.len() {
        1 => vec![pts.to_vec()],
        2 => {
            let m = geometry::midpoint(&pts[0], &pts[1]);
            vec![vec![pts[0].clone(), m.clone()], vec![m, pts[1].clone()]]
        }
        3 => {
            let m01 = geometry::midpoint(&pts[0], &pts[1]);
            let m12 = geometry::midpoint(&pts[1], &pts[2]);
            let m02 = geometry::midpoint(&pts[0], &pts[2]);
            vec![
                vec![pts[0].clone(), m01.clone(), m02.clone()],
                vec![m01.clone(), pts[1].clone(), m12.clone()],
                vec![m02.clone(), m12.clone(), pts[2].clone()],
                vec![m01, m12, m02],
            ]
        }
        _ => {
            let b = geometry::barycenter(pts);
            (0..pts.len())
                .map(|i| {
                    let mut s = pts.to_vec();
                    s[i] = b.clone();
                    s
                })
                .collect()
        }
    }
}

fn fmt_point(p: &[Q]) -> alloc::string::String {
    format!("({})", p.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qi};
    use alloc::collections::BTreeMap;

    fn segment() -> MetricComplex {
        MetricComplex::new(1, vec![vec![qi(0)], vec![qi(2)]], vec![vec![0, 1]], BTreeMap::new()).unwrap()
    }

    #[test]
    fn segment_cover_certifies_and_refines() {
        let x = segment();
        let cover = BallCover::new(vec![Ball::new(vec![q(1, 2)], qi(1)), Ball::new(vec![q(3, 2)], qi(1))]);
        cover.certify(&x, 3).unwrap();
        let fine = BallCover::new(
            [q(1, 4), q(3, 4), q(5, 4), q(7, 4)].into_iter().map(|c| Ball::new(vec![c], q(1, 2))).collect(),
        );
        fine.certify(&x, 3).unwrap();
        let lambda = fine.refinement_map(&cover).unwrap();
        for (i, &j) in lambda.iter().enumerate() {
            assert!(fine.balls[i].inside(&cover.balls[j]));
        }
        let (same, id) = cover.refine(&x, &qi(1), 3).unwrap();
        assert_eq!(same, cover);
        assert_eq!(id, vec![0, 1]);
        let (half, lam) = cover.refine(&x, &q(1, 2), 3).unwrap();
        half.certify(&x, 6).unwrap();
        assert_eq!(lam.len(), half.len());
    }

    #[test]
    fn gap_is_reported() {
        let x = segment();
        let cover = BallCover::new(vec![Ball::new(vec![qi(0)], q(9, 10)), Ball::new(vec![qi(2)], q(9, 10))]);
        assert!(matches!(cover.certify(&x, 4), Err(Error::Cover(_))));
    }

    #[test]
    fn refinement_error_names_the_ball() {
        let coarse = BallCover::new(vec![Ball::new(vec![qi(0)], qi(1))]);
        let fine = BallCover::new(vec![Ball::new(vec![qi(0)], q(1, 2)), Ball::new(vec![qi(1)], q(1, 2))]);
        assert_eq!(fine.refinement_map(&coarse), Err(Error::Refinement(1)));
    }
}
