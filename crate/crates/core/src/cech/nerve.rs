use super::solve::project_onto;
use crate::arith::Q;
use crate::complex::{subdivide_points, BallCover, MetricComplex};
use crate::geometry::{self, Point};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

/// Nerve of a ball cover restricted to the carrier: every listed tuple comes
/// with a witness point of the carrier inside all of its balls.
#[derive(Clone, Debug, Default)]
pub struct Nerve {
    simplices: Vec<Vec<Vec<usize>>>,
    witnesses: BTreeMap<Vec<usize>, Point>,
    undetermined: Vec<Vec<usize>>,
}

impl Nerve {
    /// Largest dimension with a simplex, or None when empty.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().rposition(|s| !s.is_empty())
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], |s| s.as_slice())
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.witnesses.contains_key(tuple)
    }

    pub fn witness(&self, tuple: &[usize]) -> Option<&Point> {
        self.witnesses.get(tuple)
    }

    /// Tuples whose intersection was neither found nor certified empty.
    pub fn undetermined(&self) -> &[Vec<usize>] {
        &self.undetermined
    }
}

enum Search {
    Found(Point),
    Empty,
    Unknown,
}

/// All tuples up to `max_dim` whose balls meet on the carrier, with witnesses
/// found by recursive subdivision to `depth`. Emptiness is certified exactly
/// by the squared distance from a center to a sub-simplex; tuples left open
/// at the budget are recorded as undetermined and excluded.
pub fn build_nerve(complex: &MetricComplex, cover: &BallCover, max_dim: usize, depth: usize) -> Nerve {
    let mut nerve = Nerve::default();
    let tops: Vec<Vec<Point>> = complex.maximal_simplices().iter().map(|s| complex.points(s)).collect();
    let mut previous: BTreeSet<Vec<usize>> = BTreeSet::new();
    for d in 0..=max_dim {
        let candidates: Vec<Vec<usize>> = if d == 0 {
            (0..cover.len()).map(|i| vec![i]).collect()
        } else {
            previous
                .iter()
                .flat_map(|t| (t[t.len() - 1] + 1..cover.len()).map(move |j| [t.as_slice(), &[j]].concat()))
                .filter(|t| (0..t.len()).all(|i| previous.contains(&[&t[..i], &t[i + 1..]].concat())))
                .collect()
        };
        let mut level = Vec::new();
        for t in candidates {
            match search_all(cover, &t, &tops, depth) {
                Search::Found(w) => {
                    nerve.witnesses.insert(t.clone(), w);
                    level.push(t);
                }
                Search::Empty => {}
                Search::Unknown => nerve.undetermined.push(t),
            }
        }
        if level.is_empty() {
            break;
        }
        previous = level.iter().cloned().collect();
        nerve.simplices.push(level);
    }
    nerve
}

fn search_all(cover: &BallCover, tuple: &[usize], tops: &[Vec<Point>], depth: usize) -> Search {
    let mut unknown = false;
    for pts in tops {
        match search(cover, tuple, pts, depth) {
            Search::Found(w) => return Search::Found(w),
            Search::Unknown => unknown = true,
            Search::Empty => {}
        }
    }
    if unknown {
        Search::Unknown
    } else {
        Search::Empty
    }
}

fn search(cover: &BallCover, tuple: &[usize], pts: &[Point], depth: usize) -> Search {
    for &i in tuple {
        let b = &cover.balls[i];
        if dist2_to_hull(&b.center, pts) >= &b.radius * &b.radius {
            return Search::Empty;
        }
    }
    let mut probes: Vec<Point> = pts.to_vec();
    probes.push(geometry::barycenter(pts));
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            probes.push(geometry::midpoint(&pts[i], &pts[j]));
        }
    }
    if let Some(w) = probes.into_iter().find(|x| cover.in_all(tuple, x)) {
        return Search::Found(w);
    }
    if depth == 0 {
        return Search::Unknown;
    }
    let mut unknown = false;
    for child in subdivide_points(pts) {
        match search(cover, tuple, &child, depth - 1) {
            Search::Found(w) => return Search::Found(w),
            Search::Unknown => unknown = true,
            Search::Empty => {}
        }
    }
    if unknown {
        Search::Unknown
    } else {
        Search::Empty
    }
}

/// Exact squared distance from a point to the convex hull of a simplex: the
/// least distance to a face whose affine hull receives the projection inside.
pub(crate) fn dist2_to_hull(x: &[Q], pts: &[Point]) -> Q {
    let n = pts.len();
    let mut best: Option<Q> = None;
    for mask in 1u32..(1 << n) {
        let face: Vec<Point> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| pts[i].clone()).collect();
        if let Some(p) = project_onto(x, &face) {
            let d = geometry::dist2(x, &p);
            if best.as_ref().is_none_or(|b| &d < b) {
                best = Some(d);
            }
        }
    }
    best.expect("vertices are faces")
}
