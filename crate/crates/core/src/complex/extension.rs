//! McShane–Whitney Lipschitz extensions and straight-line contractions.
use super::{MetricComplex, PlFunction, PlMap};
use crate::arith::{round_f64, Surd, Q};
use crate::geometry::{self, Point};
use crate::{Error, Result};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    /// x ↦ min over samples a of f(a) + L·d(x, a)
    Inf,
    /// x ↦ max over samples a of f(a) − L·d(x, a)
    Sup,
}

/// Extension values at the vertices of a subdivided complex, exact in
/// ℚ(√d₁, √d₂, …).
#[derive(Clone, Debug)]
pub struct McShane {
    pub mesh: MetricComplex,
    pub values: Vec<Surd>,
    pub samples: Vec<(Point, Q)>,
    pub lipschitz: Q,
}

/// Extends `samples` (point, value) to the vertices of the depth-`depth`
/// barycentric subdivision of `complex`.
pub fn mcshane_extension(
    complex: &MetricComplex,
    samples: &[(Point, Q)],
    lipschitz: &Q,
    depth: usize,
    formula: Formula,
) -> Result<McShane> {
    if samples.is_empty() {
        return Err(Error::Precondition("no sample points to extend from".into()));
    }
    let l2 = lipschitz * lipschitz;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let df = &samples[i].1 - &samples[j].1;
            if &df * &df > &l2 * geometry::dist2(&samples[i].0, &samples[j].0) {
                return Err(Error::NotLipschitz { first: i, second: j });
            }
        }
    }
    let mesh = complex.subdivide(depth);
    let values = mesh.vertices().iter().map(|x| extension_value(samples, lipschitz, formula, x)).collect();
    Ok(McShane { mesh, values, samples: samples.to_vec(), lipschitz: lipschitz.clone() })
}

fn extension_value(samples: &[(Point, Q)], lipschitz: &Q, formula: Formula, x: &[Q]) -> Surd {
    let mut best: Option<Surd> = None;
    for (a, fa) in samples {
        let reach = Surd::sqrt(geometry::dist2(x, a)).scale(lipschitz);
        let v = match formula {
            Formula::Inf => Surd::rational(fa.clone()).add(&reach),
            Formula::Sup => Surd::rational(fa.clone()).sub(&reach),
        };
        best = Some(match best {
            None => v,
            Some(b) => {
                let better = match formula {
                    Formula::Inf => v.compare(&b).is_lt(),
                    Formula::Sup => v.compare(&b).is_gt(),
                };
                if better {
                    v
                } else {
                    b
                }
            }
        });
    }
    best.expect("nonempty samples")
}

impl McShane {
    /// Exact check of |F(x) − F(y)| ≤ L·d(x, y) over all vertex pairs; returns
    /// the first violating pair.
    pub fn check_lipschitz(&self) -> core::result::Result<(), (usize, usize)> {
        let verts = self.mesh.vertices();
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let reach = Surd::sqrt(geometry::dist2(&verts[i], &verts[j])).scale(&self.lipschitz);
                let diff = self.values[i].sub(&self.values[j]);
                if reach.sub(&diff).signum() < 0 || reach.add(&diff).signum() < 0 {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }

    /// Whether the extension equals the sample value at every sample that is
    /// a mesh vertex, and every sample is one.
    pub fn matches_samples(&self) -> bool {
        self.samples.iter().all(|(p, v)| {
            self.mesh.vertex_index(p).is_some_and(|i| self.values[i].as_rational().as_ref() == Some(v))
        })
    }

    pub fn value_at_vertex(&self, i: usize) -> &Surd {
        &self.values[i]
    }

    /// Interpolating PL function with values rounded to multiples of 2^-bits.
    pub fn to_pl_function(&self, bits: u32) -> PlFunction {
        let values = self
            .values
            .iter()
            .map(|v| v.as_rational().unwrap_or_else(|| round_f64(v.to_f64(), bits)))
            .collect();
        PlFunction::Mesh { complex: Arc::new(self.mesh.clone()), values }
    }
}

/// Homotopy given by straight-line interpolation between two PL maps.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub start: PlMap,
    pub end: PlMap,
}

impl Homotopy {
    pub fn at(&self, x: &[Q], t: &Q) -> Result<Point> {
        Ok(geometry::lerp(&self.start.eval(x)?, &self.end.eval(x)?, t))
    }

    /// Images of the staircase prism simplices over an ordered simplex, with
    /// their signs: (v, 0) ↦ start(v) and (v, 1) ↦ end(v).
    pub fn prism_images(&self, simplex: &[Point]) -> Result<Vec<(i64, Vec<Point>)>> {
        let bottom: Vec<Point> = simplex.iter().map(|v| self.start.eval(v)).collect::<Result<_>>()?;
        let top: Vec<Point> = simplex.iter().map(|v| self.end.eval(v)).collect::<Result<_>>()?;
        Ok(geometry::staircase(simplex.len() - 1)
            .into_iter()
            .map(|(sign, verts)| {
                (sign, verts.into_iter().map(|(i, up)| if up { top[i].clone() } else { bottom[i].clone() }).collect())
            })
            .collect())
    }
}

/// Straight-line contraction h(x, t) = (1 − t)·x + t·x₀ of a star-shaped region.
#[derive(Clone, Debug)]
pub struct StarContraction {
    pub center: Point,
    /// Closed simplices making up the region.
    pub region: Vec<Vec<Point>>,
}

impl StarContraction {
    /// Validates star-shape about `center`: for every vertex of the depth
    /// `depth` subdivision of each region simplex, the segment to the center
    /// stays in the union of the region's closed simplices.
    pub fn new(region: Vec<Vec<Point>>, center: Point, depth: usize) -> Result<Self> {
        if !region.iter().any(|s| geometry::in_closed_simplex(&center, s)) {
            return Err(Error::Geometry("center lies outside the region".into()));
        }
        for s in &region {
            let mut pieces = vec![s.clone()];
            for _ in 0..depth {
                pieces = pieces.iter().flat_map(|p| super::cover::subdivide_simplex(p)).collect();
            }
            for p in &pieces {
                for v in p {
                    if !segment_in_union(v, &center, &region) {
                        return Err(Error::Geometry(alloc::format!("segment from {v:?} to the center leaves the region")));
                    }
                }
            }
        }
        Ok(StarContraction { center, region })
    }

    /// Star contraction of faces of a complex.
    pub fn on_faces(complex: &MetricComplex, faces: &[Vec<usize>], center: Point, depth: usize) -> Result<Self> {
        Self::new(faces.iter().map(|f| complex.points(f)).collect(), center, depth)
    }

    pub fn homotopy(&self) -> Homotopy {
        let n = self.center.len();
        Homotopy { start: PlMap::identity(n), end: PlMap::constant(&self.center, n) }
    }

    pub fn at(&self, x: &[Q], t: &Q) -> Point {
        geometry::lerp(x, &self.center, t)
    }

    /// Exact check of |h(p) − h(q)| ≤ max(1, diam)·(|x − y| + |t − s|) over
    /// all pairs of prism vertices (region vertices at t = 0 and t = 1).
    pub fn lipschitz_certificate(&self) -> bool {
        let mut verts: Vec<Point> = self.region.iter().flatten().cloned().collect();
        verts.push(self.center.clone());
        verts.sort();
        verts.dedup();
        let mut diam2 = Q::zero();
        for a in &verts {
            for b in &verts {
                let d = geometry::dist2(a, b);
                if d > diam2 {
                    diam2 = d;
                }
            }
        }
        let bound = if diam2 > Q::one() { Surd::sqrt(diam2) } else { Surd::rational(Q::one()) };
        let times = [Q::zero(), Q::one()];
        for x in &verts {
            for y in &verts {
                for t in &times {
                    for s in &times {
                        let lhs = Surd::sqrt(geometry::dist2(&self.at(x, t), &self.at(y, s)));
                        let rhs = bound.mul(&Surd::sqrt(geometry::dist2(x, y)).add(&Surd::rational((t - s).abs())));
                        if rhs.sub(&lhs).signum() < 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Whether the closed segment [a, b] lies in the union of closed simplices.
pub fn segment_in_union(a: &[Q], b: &[Q], simplices: &[Vec<Point>]) -> bool {
    let mut intervals: Vec<(Q, Q)> = Vec::new();
    for s in simplices {
        if a == b {
            if geometry::in_closed_simplex(a, s) {
                return true;
            }
            continue;
        }
        let (Some(la), Some(lb)) = (geometry::barycentric(a, s), geometry::barycentric(b, s)) else { continue };
        // λ(t) = (1 − t)·la + t·lb ≥ 0 on [lo, hi]
        let (mut lo, mut hi) = (Q::zero(), Q::one());
        for (x, y) in la.iter().zip(&lb) {
            let slope = y - x;
            if slope.is_zero() {
                if x.is_negative() {
                    hi = -Q::one();
                }
            } else {
                let root = -x / &slope;
                if slope.is_positive() {
                    lo = lo.max(root);
                } else {
                    hi = hi.min(root);
                }
            }
        }
        if lo <= hi {
            intervals.push((lo, hi));
        }
    }
    if a == b {
        return false;
    }
    intervals.sort();
    let mut reach = Q::zero();
    let mut started = false;
    for (lo, hi) in intervals {
        if lo > reach || (!started && !lo.is_zero()) {
            if !started {
                return false;
            }
            break;
        }
        started = true;
        if hi > reach {
            reach = hi;
        }
    }
    started && reach >= Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qi};
    use alloc::collections::BTreeMap;

    fn segment(len: i64) -> MetricComplex {
        MetricComplex::new(1, vec![vec![qi(0)], vec![qi(len)]], vec![vec![0, 1]], BTreeMap::new()).unwrap()
    }

    #[test]
    fn distance_function_from_a_point() {
        let x = segment(2);
        let ext = mcshane_extension(&x, &[(vec![qi(0)], qi(0))], &qi(1), 2, Formula::Inf).unwrap();
        for (p, v) in ext.mesh.vertices().iter().zip(&ext.values) {
            assert_eq!(v.as_rational(), Some(p[0].clone()));
        }
        assert!(ext.check_lipschitz().is_ok());
    }

    #[test]
    fn two_point_extension_is_linear() {
        let x = segment(2);
        let samples = [(vec![qi(0)], qi(0)), (vec![qi(2)], qi(2))];
        let ext = mcshane_extension(&x, &samples, &qi(1), 3, Formula::Inf).unwrap();
        // brute-force oracle: min over the two samples on a fine grid
        for (p, v) in ext.mesh.vertices().iter().zip(&ext.values) {
            let oracle = (p[0].clone()).min(qi(2) + (qi(2) - &p[0]).abs());
            assert_eq!(v.as_rational(), Some(oracle));
        }
        assert!(ext.matches_samples());
        let sup = mcshane_extension(&x, &samples, &qi(1), 3, Formula::Sup).unwrap();
        for (a, b) in ext.values.iter().zip(&sup.values) {
            assert!(a == b);
        }
    }

    #[test]
    fn whole_complex_is_reproduced() {
        let x = segment(1);
        let samples = [(vec![qi(0)], q(1, 3)), (vec![qi(1)], q(2, 3))];
        let ext = mcshane_extension(&x, &samples, &qi(1), 0, Formula::Inf).unwrap();
        assert_eq!(ext.values[0].as_rational(), Some(q(1, 3)));
        assert_eq!(ext.values[1].as_rational(), Some(q(2, 3)));
    }

    #[test]
    fn non_lipschitz_data_is_rejected() {
        let x = segment(1);
        let samples = [(vec![qi(0)], qi(0)), (vec![qi(1)], qi(3))];
        assert_eq!(
            mcshane_extension(&x, &samples, &qi(1), 1, Formula::Inf).unwrap_err(),
            Error::NotLipschitz { first: 0, second: 1 }
        );
    }

    #[test]
    fn irrational_extension_is_lipschitz() {
        let tri = MetricComplex::new(
            2,
            vec![vec![qi(0), qi(0)], vec![qi(1), qi(0)], vec![qi(0), qi(1)]],
            vec![vec![0, 1, 2]],
            BTreeMap::new(),
        )
        .unwrap();
        let samples = [(vec![qi(0), qi(0)], qi(0)), (vec![qi(1), qi(0)], q(1, 2))];
        let ext = mcshane_extension(&tri, &samples, &qi(1), 1, Formula::Inf).unwrap();
        assert!(ext.check_lipschitz().is_ok());
        assert!(ext.matches_samples());
    }

    #[test]
    fn contraction_of_segment_and_square() {
        let seg = vec![vec![vec![qi(0)], vec![qi(1)]]];
        let h = StarContraction::new(seg, vec![qi(0)], 2).unwrap();
        assert_eq!(h.at(&[q(1, 2)], &q(1, 2)), vec![q(1, 4)]);
        assert!(h.lipschitz_certificate());
        let square = vec![
            vec![vec![qi(0), qi(0)], vec![qi(1), qi(0)], vec![qi(1), qi(1)]],
            vec![vec![qi(0), qi(0)], vec![qi(1), qi(1)], vec![qi(0), qi(1)]],
        ];
        let c = StarContraction::new(square.clone(), vec![q(1, 2), q(1, 2)], 2).unwrap();
        for s in &square {
            for v in s {
                for t in [qi(0), q(1, 3), qi(1)] {
                    let img = c.at(v, &t);
                    assert!(square.iter().any(|s| geometry::in_closed_simplex(&img, s)));
                }
                assert_eq!(c.at(v, &qi(0)), *v);
                assert_eq!(c.at(v, &qi(1)), c.center);
            }
        }
        let point = StarContraction::new(vec![vec![vec![qi(3)]]], vec![qi(3)], 0).unwrap();
        assert_eq!(point.at(&[qi(3)], &q(1, 2)), vec![qi(3)]);
    }

    #[test]
    fn circle_is_not_star_shaped() {
        let c = super::super::tests::triangle_circle();
        let faces: Vec<Vec<usize>> = c.faces(1).to_vec();
        assert!(StarContraction::on_faces(&c, &faces, vec![qi(0), qi(0)], 1).is_err());
        // an arc around a vertex is
        let arc = vec![vec![0, 1], vec![0, 2]];
        assert!(StarContraction::on_faces(&c, &arc, vec![qi(0), qi(0)], 1).is_ok());
    }
}
