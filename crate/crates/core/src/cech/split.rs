use crate::arith::{qi, Q};
use crate::complex::{mcshane_extension, Ball, Formula, MetricComplex};
use crate::currents::{generic_level, PolyhedralCurrent};
use crate::geometry::Point;
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

const ROUNDING_BITS: u32 = 20;

/// Splits a current carried by U ∪ V into S in U and S′ in V with S + S′ = T.
///
/// The cut is a generic level r of a PL surrogate g of the distance to the
/// part of the carrier outside V (McShane extension of zero data sampled on the
/// depth-`depth` subdivision): S = T⌊{g ≤ r}, S′ = T⌊{g > r}. Levels are tried
/// in increasing order and the first one whose pieces lie in the right balls
/// (exact vertex test) is used; the depth is raised twice before giving up.
pub fn cosheaf_split(
    t: &PolyhedralCurrent,
    complex: &MetricComplex,
    u: &Ball,
    v: &Ball,
    depth: usize,
) -> Result<(PolyhedralCurrent, PolyhedralCurrent)> {
    let (k, n) = (t.degree(), t.ambient_dim());
    if t.is_zero() {
        return Ok((PolyhedralCurrent::zero(k, n), PolyhedralCurrent::zero(k, n)));
    }
    if let Some(x) = t.pieces().iter().flat_map(|p| &p.vertices).find(|x| !u.contains(x) && !v.contains(x)) {
        return Err(Error::Splitting(format!("support point {x:?} lies outside both sets")));
    }
    let inside = |c: &PolyhedralCurrent, b: &Ball| c.pieces().iter().all(|p| p.vertices.iter().all(|x| b.contains(x)));
    let mut last_bad: Option<Point> = None;
    for d in depth..=depth + 2 {
        let mesh = complex.subdivide(d);
        let samples: Vec<(Point, Q)> =
            mesh.vertices().iter().filter(|x| !v.contains(x)).map(|x| (x.clone(), qi(0))).collect();
        if samples.is_empty() {
            if inside(t, v) {
                return Ok((PolyhedralCurrent::zero(k, n), t.clone()));
            }
            continue;
        }
        let g = mcshane_extension(complex, &samples, &qi(1), d, Formula::Inf)?.to_pl_function(ROUNDING_BITS);
        let mut values = BTreeSet::new();
        for p in t.pieces() {
            for x in &p.vertices {
                values.insert(g.eval(x)?);
            }
        }
        let values: Vec<Q> = values.into_iter().collect();
        let mut levels: Vec<Q> = alloc::vec![&values[0] - qi(1)];
        for (i, a) in values.iter().enumerate() {
            levels.push(a.clone());
            if let Some(b) = values.get(i + 1) {
                levels.push((a + b) / qi(2));
            }
        }
        levels.push(values[values.len() - 1].clone() + qi(1));
        for r in levels {
            let r = generic_level(t, &g, &r)?;
            let (low, high) = t.restrict(&g, &r)?;
            if inside(&low, u) && inside(&high, v) {
                return Ok((low, high));
            }
            last_bad = low
                .pieces()
                .iter()
                .flat_map(|p| p.vertices.iter())
                .find(|x| !u.contains(x))
                .or_else(|| high.pieces().iter().flat_map(|p| p.vertices.iter()).find(|x| !v.contains(x)))
                .cloned();
        }
    }
    Err(Error::Splitting(format!(
        "no admissible level up to depth {}; uncovered point {:?}",
        depth + 2,
        last_bad.unwrap_or_default()
    )))
}
