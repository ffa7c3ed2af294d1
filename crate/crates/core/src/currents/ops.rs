use super::{PolyhedralCurrent, TestForm};
use crate::arith::{max_denominator, q_to_f64, Q};
use crate::complex::{segment_in_union, AffineMap, MetricComplex, PlFunction, PlMap, StarContraction};
use crate::geometry::{self, Halfspace, Point, Polytope};
use crate::linalg;
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

impl PolyhedralCurrent {
    /// φ_#T: each piece is cut where φ changes affine piece, and the cells
    /// are mapped with their chart orientation.
    pub fn pushforward(&self, map: &PlMap) -> Result<PolyhedralCurrent> {
        let n = map.target_dim();
        let mut raw = Vec::new();
        for p in &self.pieces {
            if self.degree == 0 {
                raw.push((p.theta, vec![map.eval(&p.vertices[0])?]));
                continue;
            }
            let chart = AffineMap::from_simplex(&p.vertices);
            for cell in map.refine(&chart, vec![Polytope::standard_simplex(self.degree)])? {
                let local = map.affine_on(&chart, &cell.centroid())?;
                for s in cell.triangulate() {
                    raw.push((p.theta, s.iter().map(|y| local.apply(y)).collect()));
                }
            }
        }
        Ok(PolyhedralCurrent::from_pieces(self.degree, n, raw))
    }

    /// (T⌊{g ≤ r}, T⌊{g > r}). No piece vertex may have g-value r.
    pub fn restrict(&self, g: &PlFunction, r: &Q) -> Result<(PolyhedralCurrent, PolyhedralCurrent)> {
        for (i, p) in self.pieces.iter().enumerate() {
            for (j, v) in p.vertices.iter().enumerate() {
                if &g.eval(v)? == r {
                    return Err(Error::NonGeneric { piece: i, vertex: j });
                }
            }
        }
        let (mut low, mut high) = (Vec::new(), Vec::new());
        for p in &self.pieces {
            if self.degree == 0 {
                let side = if &g.eval(&p.vertices[0])? <= r { &mut low } else { &mut high };
                side.push((p.theta, p.vertices.clone()));
                continue;
            }
            let chart = AffineMap::from_simplex(&p.vertices);
            for cell in g.refine(&chart, vec![Polytope::standard_simplex(self.degree)])? {
                let level = g.affine_on(&chart, &cell.centroid())?;
                let h = Halfspace { normal: level.linear.clone(), offset: r - &level.constant };
                let parts = if cell.is_cut_by(&h) {
                    let (a, b) = cell.split(&h);
                    vec![(true, a), (false, b)]
                } else {
                    let below = !h.slack(&cell.centroid()).is_positive();
                    vec![(below, Some(cell))]
                };
                for (below, part) in parts {
                    let Some(part) = part else { continue };
                    for s in part.triangulate() {
                        let side = if below { &mut low } else { &mut high };
                        side.push((p.theta, s.iter().map(|y| chart.apply(y)).collect()));
                    }
                }
            }
        }
        Ok((
            PolyhedralCurrent::from_pieces(self.degree, self.ambient_dim, low),
            PolyhedralCurrent::from_pieces(self.degree, self.ambient_dim, high),
        ))
    }

    /// T × [0,1] in one more ambient coordinate, by the staircase prism.
    pub fn product_interval(&self) -> PolyhedralCurrent {
        let lift = |p: &Point, t: i64| {
            let mut x = p.clone();
            x.push(Q::from_integer(t.into()));
            x
        };
        let mut raw = Vec::new();
        for p in &self.pieces {
            for (sign, verts) in geometry::staircase(self.degree) {
                let v = verts.into_iter().map(|(i, top)| lift(&p.vertices[i], top as i64)).collect();
                raw.push((sign * p.theta, v));
            }
        }
        PolyhedralCurrent::from_pieces(self.degree + 1, self.ambient_dim + 1, raw)
    }

    /// T × [t] = i_t#T
    pub fn slice_at(&self, t: &Q) -> PolyhedralCurrent {
        let raw = self.raw().map(|(theta, vs)| {
            let v = vs
                .into_iter()
                .map(|mut x| {
                    x.push(t.clone());
                    x
                })
                .collect();
            (theta, v)
        });
        PolyhedralCurrent::from_pieces(self.degree, self.ambient_dim + 1, raw)
    }

    /// Cone over a cycle to the center of a star contraction, the push-forward
    /// of T × [0,1] by the contraction; ∂S = −T. A 0-cycle must have total
    /// multiplicity 0.
    pub fn cone(&self, h: &StarContraction) -> Result<PolyhedralCurrent> {
        if !self.is_cycle() {
            return Err(Error::Precondition("cone over a current with nonzero boundary".into()));
        }
        if self.degree == 0 && self.augmentation() != 0 {
            return Err(Error::Precondition("cone over a 0-cycle with nonzero augmentation".into()));
        }
        for p in &self.pieces {
            for v in &p.vertices {
                if !segment_in_union(v, &h.center, &h.region) {
                    return Err(Error::Locality("support leaves the star-shaped region".into()));
                }
            }
        }
        Ok(self.cone_to(&h.center))
    }

    /// Σ θ·(−1)ᵏ[v₀, …, v_k, x₀] without any region check.
    pub fn cone_to(&self, center: &Point) -> PolyhedralCurrent {
        let sign = if self.degree.is_multiple_of(2) { 1 } else { -1 };
        let raw = self.raw().map(|(theta, mut v)| {
            v.push(center.clone());
            (sign * theta, v)
        });
        PolyhedralCurrent::from_pieces(self.degree + 1, self.ambient_dim, raw)
    }

    /// Integer coefficients on the k-faces of `complex` (sorted-vertex
    /// orientation) when the current is exactly such a simplicial chain.
    /// Pieces merged across faces by reduction are cut apart first.
    pub fn simplicial_coordinates(&self, complex: &MetricComplex) -> Option<Vec<BigInt>> {
        let k = self.degree;
        let faces = complex.faces(k);
        // parts cut from merged pieces only cover part of a face, so each is
        // weighted by its signed volume relative to the face
        let mut weights = vec![Q::zero(); faces.len()];
        for (theta, vertices) in crate::cech::fit_to_complex(self, complex).ok()? {
            let face = complex.common_face(&vertices)?;
            if face.len() != k + 1 {
                return None;
            }
            let idx = complex.face_index(&face)?;
            let fraction = if k == 0 {
                Q::one()
            } else {
                let pts = complex.points(&face);
                let flat = geometry::Flat::through(&pts);
                let a: Vec<Point> = pts.iter().map(|x| flat.coords(x)).collect();
                let b: Vec<Point> = vertices.iter().map(|x| flat.coords(x)).collect();
                linalg::det(&geometry::edge_vectors(&b)) / linalg::det(&geometry::edge_vectors(&a))
            };
            weights[idx] += fraction * Q::from_integer(theta.into());
        }
        if !weights.iter().all(Q::is_integer) {
            return None;
        }
        let coeffs: Vec<i64> = weights.iter().map(|w| w.to_integer().try_into().ok()).collect::<Option<_>>()?;
        let rebuilt = PolyhedralCurrent::from_pieces(
            k,
            self.ambient_dim,
            faces.iter().zip(&coeffs).filter(|(_, &c)| c != 0).map(|(f, &c)| (c, complex.points(f))),
        );
        (rebuilt == *self).then(|| coeffs.into_iter().map(BigInt::from).collect())
    }

    /// Whether every piece lies in one closed simplex of `complex`.
    pub fn carried_by(&self, complex: &MetricComplex) -> bool {
        self.pieces.iter().all(|p| complex.common_face(&p.vertices).is_some())
    }
}

/// r itself if no piece vertex has g-value r, else r ± 1/N with N twice the
/// largest denominator in play, doubled until generic.
pub fn generic_level(current: &PolyhedralCurrent, g: &PlFunction, r: &Q) -> Result<Q> {
    let mut values = BTreeSet::new();
    for p in current.pieces() {
        for v in &p.vertices {
            values.insert(g.eval(v)?);
        }
    }
    if !values.contains(r) {
        return Ok(r.clone());
    }
    let mut n: BigInt = max_denominator(values.iter().chain(core::iter::once(r))) * 2;
    loop {
        let step: Q = Q::new(BigInt::one(), n.clone());
        for cand in [r + &step, r - &step] {
            if !values.contains(&cand) {
                return Ok(cand);
            }
        }
        n *= 2;
    }
}

/// Both sides of the equicontinuity estimate
/// |T(f,π) − T(f,π′)| ≤ Σᵢ ∫|f||πᵢ−πᵢ′| d‖∂T‖ + Lip(f) ∫_{f≠0} |πᵢ−πᵢ′| d‖T‖,
/// with `lip_f` a Lipschitz bound for f. Returns (left, right).
pub fn equicontinuity_bound(
    current: &PolyhedralCurrent,
    f: &PlFunction,
    pi: &[PlFunction],
    pi_prime: &[PlFunction],
    lip_f: f64,
) -> Result<(f64, f64)> {
    if pi.len() != current.degree() || pi_prime.len() != current.degree() {
        return Err(Error::Dimension("form degree does not match the current".into()));
    }
    let left = current.evaluate(&TestForm::new(f.clone(), pi.to_vec()))?
        - current.evaluate(&TestForm::new(f.clone(), pi_prime.to_vec()))?;
    let boundary = current.boundary();
    let mut right = 0.0;
    for (a, b) in pi.iter().zip(pi_prime) {
        right += mass_integral(&boundary, f, a, b, false)?;
        right += lip_f * mass_integral(current, f, a, b, true)?;
    }
    Ok((q_to_f64(&left.abs()), right))
}

/// ∫ |f|·|a − b| d‖T‖, or with `indicator` ∫_{f≠0} |a − b| d‖T‖.
fn mass_integral(current: &PolyhedralCurrent, f: &PlFunction, a: &PlFunction, b: &PlFunction, indicator: bool) -> Result<f64> {
    let k = current.degree();
    let mut total = 0.0;
    for p in current.pieces() {
        let weight = p.theta.unsigned_abs() as f64;
        if k == 0 {
            let x = &p.vertices[0];
            let d = (a.eval(x)? - b.eval(x)?).abs();
            let fx = f.eval(x)?;
            let v = if indicator { if fx.is_zero() { Q::zero() } else { d } } else { fx.abs() * d };
            total += weight * q_to_f64(&v);
            continue;
        }
        let chart = AffineMap::from_simplex(&p.vertices);
        let mut cells = vec![Polytope::standard_simplex(k)];
        for g in [f, a, b] {
            cells = g.refine(&chart, cells)?;
        }
        let mut exact = Q::zero();
        for cell in cells {
            let c = cell.centroid();
            let fa = f.affine_on(&chart, &c)?;
            let diff = a.affine_on(&chart, &c)?.sub(&b.affine_on(&chart, &c)?);
            let cut = geometry::cut_cells(vec![cell], &[fa.nonpositive(), diff.nonpositive()]);
            for sub in cut {
                let m = sub.centroid();
                let fv = fa.eval(&m);
                if indicator && fa.is_constant() && fv.is_zero() {
                    continue;
                }
                let sd = if diff.eval(&m).is_negative() { -Q::one() } else { Q::one() };
                let sf = if fv.is_negative() { -Q::one() } else { Q::one() };
                for s in sub.triangulate() {
                    let vol = super::simplex_volume(&s);
                    let dv: Vec<Q> = s.iter().map(|y| diff.eval(y) * &sd).collect();
                    if indicator {
                        let avg = dv.iter().fold(Q::zero(), |x, y| x + y) / Q::from_integer((k + 1).into());
                        exact += vol * avg;
                    } else {
                        let fvals: Vec<Q> = s.iter().map(|y| fa.eval(y) * &sf).collect();
                        exact += vol * product_average(&fvals, &dv);
                    }
                }
            }
        }
        let scale = libm::sqrt(q_to_f64(&linalg::gram_det(&chart.columns)));
        total += weight * scale * q_to_f64(&exact);
    }
    Ok(total)
}

/// Mean of u·v over a simplex for affine u, v given by vertex values:
/// (Σ uᵢvᵢ + Σuᵢ·Σvᵢ) / ((k+1)(k+2)).
fn product_average(u: &[Q], v: &[Q]) -> Q {
    let n = u.len();
    let diag = u.iter().zip(v).fold(Q::zero(), |s, (a, b)| s + a * b);
    let su = u.iter().fold(Q::zero(), |s, a| s + a);
    let sv = v.iter().fold(Q::zero(), |s, a| s + a);
    (diag + su * sv) / Q::from_integer(((n * (n + 1)) as i64).into())
}
