//! Constructive exactness: ε-preimages by assignment to balls, Φ-preimages by
//! the cone homotopy of the nerve simplex spanned by the balls containing
//! each atom, and local fillings by coning inside a tuple's intersection.
use super::{carrier_ok, normalize_tuple, CechChain, Coefficient, Preference};
use crate::complex::{Ball, BallCover, MetricComplex};
use crate::geometry::{self, Point};
use crate::arith::Q;
use crate::linalg;
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

/// Apex of the nerve cone used by `solve_phi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Apex {
    Min,
    Max,
}

/// A Čech 0-chain whose components sum to `x`; each term or piece goes to one
/// ball containing it, after subdivision where needed.
pub fn eps_preimage<A: Coefficient>(
    x: &A,
    ambient_dim: usize,
    cover: &BallCover,
    preference: Preference,
    budget: usize,
) -> Result<CechChain<A>> {
    let mut out = CechChain::zero(0, x.degree(), ambient_dim);
    for (i, part) in x.assign(cover, preference, budget)? {
        out.add_at(&[i], &part);
    }
    Ok(out)
}

/// y with Φy = x, for x with Φx = 0 (or εx = 0 in Čech degree 0).
///
/// x is written as Σ a ⊗ nₐ over independent atoms a with nerve chains nₐ
/// supported on the full simplex of balls containing a; then
/// y = Σ a ⊗ (a₀ * nₐ) for an apex a₀ of that simplex.
pub fn solve_phi<A: Coefficient>(x: &CechChain<A>, cover: &BallCover, apex: Apex) -> Result<CechChain<A>> {
    let (p, q) = (x.degree(), x.coeff_degree());
    let lift_err = |reason: &str| Error::Lift { p: p + 1, q, reason: reason.into() };
    if p == 0 {
        if !x.augment()?.is_zero() {
            return Err(lift_err("target is not in the kernel of ε"));
        }
    } else if !x.phi().is_zero() {
        return Err(lift_err("target is not a Φ-cycle"));
    }
    let (tuples, values): (Vec<&Vec<usize>>, Vec<&A>) = x.components().unzip();
    let mut y = CechChain::zero(p + 1, q, x.ambient_dim());
    for (atom, mult) in A::atoms(&values) {
        let pts: Vec<Point> = atom.vertex_sets().into_iter().flatten().collect();
        let members: BTreeSet<usize> =
            (0..cover.len()).filter(|&i| pts.iter().all(|v| cover.balls[i].contains(v))).collect();
        let apex_index = match apex {
            Apex::Min => members.first(),
            Apex::Max => members.last(),
        }
        .copied()
        .ok_or_else(|| lift_err("an atom lies in no ball"))?;
        for (tuple, &m) in tuples.iter().zip(&mult) {
            if m == 0 {
                continue;
            }
            if !tuple.iter().all(|i| members.contains(i)) {
                return Err(Error::Locality(format!("component on {tuple:?} leaves its balls")));
            }
            if tuple.contains(&apex_index) {
                continue;
            }
            let mut t = vec![apex_index];
            t.extend(tuple.iter().copied());
            y.add_at(&t, &atom.scaled(m));
        }
    }
    if !y.phi().same(x) {
        return Err(lift_err("Φ-preimage check failed"));
    }
    Ok(y)
}

/// A point of the tuple's intersection that lies in one closed face of the
/// complex together with each vertex group. Candidates are tried in a fixed
/// order: complex vertices, projections of the ball centers (of `tuple` and
/// of the `hints`) onto faces, radius-weighted points between centers, the
/// group vertices and face barycenters.
pub fn find_center(
    complex: &MetricComplex,
    cover: &BallCover,
    tuple: &[usize],
    groups: &[Vec<Point>],
    hints: &[Ball],
) -> Option<Point> {
    let admissible = |x: &Point| cover.in_all(tuple, x) && groups.iter().all(|g| carrier_ok(complex, g, x));
    let balls: Vec<&Ball> = tuple.iter().map(|&i| &cover.balls[i]).chain(hints).collect();
    let mut candidates: Vec<Point> = complex.vertices().to_vec();
    let mut anchors: Vec<Point> = balls.iter().map(|b| b.center.clone()).collect();
    for (i, a) in balls.iter().enumerate() {
        for b in &balls[i + 1..] {
            let t = &a.radius / (&a.radius + &b.radius);
            anchors.push(linalg::add(&a.center, &linalg::scale(&linalg::sub(&b.center, &a.center), &t)));
        }
    }
    for d in 0..=complex.dim() {
        for face in complex.faces(d) {
            let pts = complex.points(face);
            candidates.extend(anchors.iter().filter_map(|x| project_onto(x, &pts)));
        }
    }
    candidates.extend(groups.iter().flatten().cloned());
    for d in 1..=complex.dim() {
        candidates.extend(complex.faces(d).iter().map(|f| geometry::barycenter(&complex.points(f))));
    }
    candidates.into_iter().find(admissible)
}

/// Orthogonal projection onto the affine hull of a face, if it lands in the face.
pub(crate) fn project_onto(x: &[Q], pts: &[Point]) -> Option<Point> {
    if pts.len() == 1 {
        return Some(pts[0].clone());
    }
    let edges = geometry::edge_vectors(pts);
    let gram: Vec<Vec<Q>> = edges.iter().map(|a| edges.iter().map(|b| linalg::dot(a, b)).collect()).collect();
    let rhs: Vec<Q> = edges.iter().map(|a| linalg::dot(a, &linalg::sub(x, &pts[0]))).collect();
    let t = linalg::solve(&gram, &rhs)?;
    let first = Q::one() - t.iter().fold(Q::zero(), |s, v| s + v);
    if first.is_negative() || t.iter().any(|v| v.is_negative()) {
        return None;
    }
    let mut lam = vec![first];
    lam.extend(t);
    Some(geometry::from_barycentric(&lam, pts))
}

/// Fillings of a componentwise cycle x on a fine cover, pushed to a coarser
/// one: y with vertical(y) = λ_#x. Each fine component is coned to a point of
/// its image tuple's intersection; fails with a locality error when a
/// component admits no such point.
pub fn fill_locally<A: Coefficient>(
    x: &CechChain<A>,
    complex: &MetricComplex,
    fine: &BallCover,
    lambda: &[usize],
    coarse: &BallCover,
) -> Result<CechChain<A>> {
    let mut y = CechChain::zero(x.degree(), x.coeff_degree() + 1, x.ambient_dim());
    for (t, v) in x.components() {
        let image: Vec<usize> = t.iter().map(|&i| lambda[i]).collect();
        let Some((_, key)) = normalize_tuple(&image) else { continue };
        let parts = v.carrier_parts(complex)?;
        let hints: Vec<Ball> = t.iter().map(|&i| fine.balls[i].clone()).collect();
        let center = find_center(complex, coarse, &key, &parts, &hints)
            .ok_or_else(|| Error::Locality(format!("no cone point for the component on {t:?} in {key:?}")))?;
        y.add_at(&image, &v.cone_filling(&center)?);
    }
    if !y.vertical().same(&x.push(lambda)) {
        return Err(Error::Lift { p: x.degree(), q: x.coeff_degree() + 1, reason: "local filling check failed".into() });
    }
    Ok(y)
}
