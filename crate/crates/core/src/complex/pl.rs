//! Piecewise-affine functions and maps, evaluated exactly on affine charts.
use super::MetricComplex;
use crate::arith::{q_to_f64, Q};
use crate::geometry::{self, dedup_hyperplanes, Halfspace, Point, Polytope};
use crate::linalg::{self, Matrix, Vector};
use crate::{Error, Result};
use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

/// x ↦ linear·x + constant
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub linear: Vector,
    pub constant: Q,
}

impl Affine {
    pub fn new(linear: Vector, constant: Q) -> Self {
        Affine { linear, constant }
    }

    pub fn constant(c: Q, dim: usize) -> Self {
        Affine { linear: vec![Q::zero(); dim], constant: c }
    }

    pub fn coordinate(i: usize, dim: usize) -> Self {
        let mut linear = vec![Q::zero(); dim];
        linear[i] = Q::one();
        Affine { linear, constant: Q::zero() }
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        linalg::dot(&self.linear, x) + &self.constant
    }

    /// y ↦ self(chart(y))
    pub fn pullback(&self, chart: &AffineMap) -> Affine {
        Affine {
            linear: chart.columns.iter().map(|c| linalg::dot(&self.linear, c)).collect(),
            constant: self.eval(&chart.origin),
        }
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        Affine { linear: linalg::sub(&self.linear, &other.linear), constant: &self.constant - &other.constant }
    }

    /// The halfspace {self ≤ 0}.
    pub fn nonpositive(&self) -> Halfspace {
        Halfspace { normal: self.linear.clone(), offset: -self.constant.clone() }
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(|x| x.is_zero())
    }
}

/// y ↦ origin + Σ yⱼ·columnsⱼ, from ℚᵏ to ℚⁿ; degenerate maps allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub origin: Point,
    pub columns: Vec<Vector>,
}

impl AffineMap {
    /// Chart of an ordered simplex over the standard simplex: eⱼ ↦ pⱼ.
    pub fn from_simplex(points: &[Point]) -> Self {
        AffineMap { origin: points[0].clone(), columns: geometry::edge_vectors(points) }
    }

    /// Map whose output coordinates are the given affine functions.
    pub fn from_components(components: &[Affine], source_dim: usize) -> Self {
        AffineMap {
            origin: components.iter().map(|c| c.constant.clone()).collect(),
            columns: (0..source_dim).map(|j| components.iter().map(|c| c.linear[j].clone()).collect()).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn apply(&self, y: &[Q]) -> Point {
        let mut x = self.origin.clone();
        for (c, col) in y.iter().zip(&self.columns) {
            if !c.is_zero() {
                for (o, d) in x.iter_mut().zip(col) {
                    *o += c * d;
                }
            }
        }
        x
    }

    pub fn then(&self, outer: &AffineMap) -> AffineMap {
        let comps: Vec<Affine> = (0..outer.origin.len())
            .map(|i| Affine {
                linear: outer.columns.iter().map(|c| c[i].clone()).collect(),
                constant: outer.origin[i].clone(),
            })
            .map(|a| a.pullback(self))
            .collect();
        AffineMap::from_components(&comps, self.source_dim())
    }
}

/// Piecewise-affine real function on the ambient space.
#[derive(Clone, Debug)]
pub enum PlFunction {
    Affine(Affine),
    Max(Vec<Affine>),
    Min(Vec<Affine>),
    /// Linear interpolation of vertex values over a simplicial complex.
    Mesh { complex: Arc<MetricComplex>, values: Vec<Q> },
    /// outer ∘ inner
    Pullback { outer: Box<PlFunction>, inner: Arc<PlMap> },
}

impl PlFunction {
    pub fn constant(c: Q, dim: usize) -> Self {
        PlFunction::Affine(Affine::constant(c, dim))
    }

    pub fn coordinate(i: usize, dim: usize) -> Self {
        PlFunction::Affine(Affine::coordinate(i, dim))
    }

    pub fn eval(&self, x: &[Q]) -> Result<Q> {
        Ok(match self {
            PlFunction::Affine(a) => a.eval(x),
            PlFunction::Max(v) => v.iter().map(|a| a.eval(x)).max().expect("nonempty max"),
            PlFunction::Min(v) => v.iter().map(|a| a.eval(x)).min().expect("nonempty min"),
            PlFunction::Mesh { complex, values } => {
                let face = complex.locate(x).ok_or(Error::OutsideCarrier)?;
                let lam = geometry::barycentric(x, &complex.points(&face)).ok_or(Error::OutsideCarrier)?;
                face.iter().zip(&lam).fold(Q::zero(), |s, (&i, l)| s + l * &values[i])
            }
            PlFunction::Pullback { outer, inner } => outer.eval(&inner.eval(x)?)?,
        })
    }

    /// Cuts chart cells until the function is affine on each.
    pub fn refine(&self, chart: &AffineMap, cells: Vec<Polytope>) -> Result<Vec<Polytope>> {
        match self {
            PlFunction::Affine(_) => Ok(cells),
            PlFunction::Max(v) | PlFunction::Min(v) => {
                let pulled: Vec<Affine> = v.iter().map(|a| a.pullback(chart)).collect();
                let mut hs = Vec::new();
                for i in 0..pulled.len() {
                    for j in i + 1..pulled.len() {
                        hs.push(pulled[i].sub(&pulled[j]).nonpositive());
                    }
                }
                Ok(geometry::cut_cells(cells, &dedup_hyperplanes(hs)))
            }
            PlFunction::Mesh { complex, .. } => {
                let pieces = mesh_pieces(complex, chart, &cells);
                let hs = pieces.iter().flat_map(|(_, lam)| lam.iter().map(|l| l.nonpositive()));
                Ok(geometry::cut_cells(cells, &dedup_hyperplanes(hs.collect::<Vec<_>>())))
            }
            PlFunction::Pullback { outer, inner } => {
                let mut out = Vec::new();
                for cell in inner.refine(chart, cells)? {
                    let c = cell.centroid();
                    let chart2 = inner.affine_on(chart, &c)?;
                    out.extend(outer.refine(&chart2, vec![cell])?);
                }
                Ok(out)
            }
        }
    }

    /// Affine expression in chart coordinates valid on the refined cell whose
    /// interior contains `y`.
    pub fn affine_on(&self, chart: &AffineMap, y: &[Q]) -> Result<Affine> {
        match self {
            PlFunction::Affine(a) => Ok(a.pullback(chart)),
            PlFunction::Max(v) | PlFunction::Min(v) => {
                let pulled = v.iter().map(|a| a.pullback(chart));
                let best = if matches!(self, PlFunction::Max(_)) {
                    pulled.max_by(|a, b| a.eval(y).cmp(&b.eval(y)))
                } else {
                    pulled.min_by(|a, b| a.eval(y).cmp(&b.eval(y)))
                };
                Ok(best.expect("nonempty"))
            }
            PlFunction::Mesh { complex, values } => {
                let cell = Polytope { dim: y.len(), vertices: vec![y.to_vec()], constraints: Vec::new() };
                for (face, lam) in mesh_pieces(complex, chart, core::slice::from_ref(&cell)) {
                    if lam.iter().all(|l| !l.eval(y).is_negative()) {
                        let mut acc = Affine::constant(Q::zero(), chart.source_dim());
                        for (l, &v) in lam.iter().zip(&face) {
                            acc.linear = linalg::add(&acc.linear, &linalg::scale(&l.linear, &values[v]));
                            acc.constant += &l.constant * &values[v];
                        }
                        return Ok(acc);
                    }
                }
                Err(Error::OutsideCarrier)
            }
            PlFunction::Pullback { outer, inner } => outer.affine_on(&inner.affine_on(chart, y)?, y),
        }
    }

    /// Exact check that the function is `bound`-Lipschitz on each simplex.
    pub fn lipschitz_at_most(&self, simplices: &[Vec<Point>], bound: &Q) -> Result<bool> {
        PlMap { components: vec![self.clone()] }.lipschitz_at_most(simplices, bound)
    }
}

/// Simplices of the mesh whose affine hull contains the chart image, maximal
/// among such, with barycentric coordinates pulled back to the chart.
fn mesh_pieces(complex: &MetricComplex, chart: &AffineMap, cells: &[Polytope]) -> Vec<(Vec<usize>, Vec<Affine>)> {
    let k = chart.source_dim();
    let mut probe = vec![chart.origin.clone()];
    for i in 0..k {
        let mut e = vec![Q::zero(); k];
        e[i] = Q::one();
        probe.push(chart.apply(&e));
    }
    let (lo, hi) = bounding_box(cells.iter().flat_map(|c| c.vertices.iter().map(|v| chart.apply(v))));
    let mut found: Vec<(Vec<usize>, Vec<Affine>)> = Vec::new();
    for d in (0..=complex.dim()).rev() {
        for face in complex.faces(d) {
            if found.iter().any(|(f, _)| face.iter().all(|v| f.contains(v))) {
                continue;
            }
            let pts = complex.points(face);
            let (flo, fhi) = bounding_box(pts.iter().cloned());
            if (0..lo.len()).any(|i| fhi[i] < lo[i] || flo[i] > hi[i]) {
                continue;
            }
            let Some(lam0) = geometry::barycentric(&probe[0], &pts) else { continue };
            let mut grads = Vec::new();
            let mut ok = true;
            for p in &probe[1..] {
                match geometry::barycentric(p, &pts) {
                    Some(l) => grads.push(linalg::sub(&l, &lam0)),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let lam = (0..face.len())
                .map(|i| Affine { linear: grads.iter().map(|g| g[i].clone()).collect(), constant: lam0[i].clone() })
                .collect();
            found.push((face.clone(), lam));
        }
    }
    found
}

fn bounding_box(points: impl Iterator<Item = Point>) -> (Point, Point) {
    let mut lo: Option<Point> = None;
    let mut hi: Option<Point> = None;
    for p in points {
        match (&mut lo, &mut hi) {
            (Some(l), Some(h)) => {
                for i in 0..p.len() {
                    if p[i] < l[i] {
                        l[i] = p[i].clone();
                    }
                    if p[i] > h[i] {
                        h[i] = p[i].clone();
                    }
                }
            }
            _ => {
                lo = Some(p.clone());
                hi = Some(p);
            }
        }
    }
    (lo.unwrap_or_default(), hi.unwrap_or_default())
}

/// Piecewise-affine map given by its coordinate functions.
#[derive(Clone, Debug)]
pub struct PlMap {
    pub components: Vec<PlFunction>,
}

impl PlMap {
    pub fn identity(dim: usize) -> Self {
        PlMap { components: (0..dim).map(|i| PlFunction::coordinate(i, dim)).collect() }
    }

    pub fn constant(p: &[Q], source_dim: usize) -> Self {
        PlMap { components: p.iter().map(|c| PlFunction::constant(c.clone(), source_dim)).collect() }
    }

    /// x ↦ matrix·x + translation
    pub fn affine(matrix: &Matrix, translation: &[Q]) -> Self {
        PlMap {
            components: matrix
                .iter()
                .zip(translation)
                .map(|(row, t)| PlFunction::Affine(Affine::new(row.clone(), t.clone())))
                .collect(),
        }
    }

    pub fn scaling(factor: &Q, dim: usize) -> Self {
        let m: Matrix = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { factor.clone() } else { Q::zero() }).collect())
            .collect();
        PlMap::affine(&m, &vec![Q::zero(); dim])
    }

    /// Simplexwise-linear map determined by images of the complex's vertices.
    pub fn from_vertex_images(complex: Arc<MetricComplex>, images: &[Point]) -> Self {
        let m = images.first().map_or(0, |p| p.len());
        PlMap {
            components: (0..m)
                .map(|j| PlFunction::Mesh { complex: complex.clone(), values: images.iter().map(|p| p[j].clone()).collect() })
                .collect(),
        }
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, x: &[Q]) -> Result<Point> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn refine(&self, chart: &AffineMap, cells: Vec<Polytope>) -> Result<Vec<Polytope>> {
        let mut cells = cells;
        for c in &self.components {
            cells = c.refine(chart, cells)?;
        }
        Ok(cells)
    }

    /// The affine map chart-then-self on the refined cell containing `y`.
    pub fn affine_on(&self, chart: &AffineMap, y: &[Q]) -> Result<AffineMap> {
        let comps: Vec<Affine> = self.components.iter().map(|c| c.affine_on(chart, y)).collect::<Result<_>>()?;
        Ok(AffineMap::from_components(&comps, chart.source_dim()))
    }

    /// outer ∘ self
    pub fn then(self: &Arc<Self>, outer: &PlMap) -> PlMap {
        PlMap {
            components: outer
                .components
                .iter()
                .map(|c| PlFunction::Pullback { outer: Box::new(c.clone()), inner: self.clone() })
                .collect(),
        }
    }

    /// Differentials (as maps out of chart coordinates) on the affine pieces
    /// over each simplex, with the chart Gram matrix.
    fn differentials(&self, simplices: &[Vec<Point>]) -> Result<Vec<(Matrix, Matrix)>> {
        let mut out = Vec::new();
        for s in simplices {
            let k = s.len() - 1;
            if k == 0 {
                continue;
            }
            let chart = AffineMap::from_simplex(s);
            let gram: Matrix =
                chart.columns.iter().map(|u| chart.columns.iter().map(|v| linalg::dot(u, v)).collect()).collect();
            for cell in self.refine(&chart, vec![Polytope::standard_simplex(k)])? {
                let a = self.affine_on(&chart, &cell.centroid())?;
                out.push((a.columns.clone(), gram.clone()));
            }
        }
        Ok(out)
    }

    /// Largest operator norm of the differential over the pieces of the map on
    /// the given simplices.
    pub fn lipschitz_on(&self, simplices: &[Vec<Point>]) -> Result<f64> {
        let mut best: f64 = 0.0;
        for (cols, gram) in self.differentials(simplices)? {
            // ‖D‖² = largest eigenvalue of G⁻¹ DᵀD, symmetrized as L⁻ᵀ DᵀD L⁻¹ numerically.
            let ginv = linalg::inverse(&gram).expect("non-degenerate simplex");
            let k = cols.len();
            let dtd: Vec<Vec<f64>> =
                (0..k).map(|i| (0..k).map(|j| q_to_f64(&linalg::dot(&cols[i], &cols[j]))).collect()).collect();
            let gi: Vec<Vec<f64>> = ginv.iter().map(|r| r.iter().map(q_to_f64).collect()).collect();
            let m = sym_product(&gi, &dtd);
            best = best.max(libm::sqrt(largest_eigenvalue(m).max(0.0)));
        }
        Ok(best)
    }

    /// Exact check ‖D‖ ≤ bound on every piece: bound²·G − DᵀD is positive semidefinite.
    pub fn lipschitz_at_most(&self, simplices: &[Vec<Point>], bound: &Q) -> Result<bool> {
        let b2 = bound * bound;
        for (cols, gram) in self.differentials(simplices)? {
            let k = cols.len();
            let m: Matrix = (0..k)
                .map(|i| (0..k).map(|j| &b2 * &gram[i][j] - linalg::dot(&cols[i], &cols[j])).collect())
                .collect();
            if !is_psd(&m) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Lipschitz constant of a map over the maximal simplices of its source complex.
pub fn lipschitz_constant(map: &PlMap, source: &MetricComplex) -> Result<f64> {
    let simplices: Vec<Vec<Point>> = source.maximal_simplices().iter().map(|s| source.points(s)).collect();
    map.lipschitz_on(&simplices)
}

/// Positive semidefiniteness via all principal minors.
pub(crate) fn is_psd(m: &Matrix) -> bool {
    let k = m.len();
    (1u32..(1 << k)).all(|mask| {
        let idx: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Matrix = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        !linalg::det(&sub).is_negative()
    })
}

/// Symmetric square root-free form: for G⁻¹ symmetric positive definite and S
/// symmetric, returns C S Cᵀ where C is the Cholesky factor of G⁻¹ (so it has
/// the eigenvalues of G⁻¹S).
#[allow(clippy::needless_range_loop)]
fn sym_product(ginv: &[Vec<f64>], s: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = ginv.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let mut v = ginv[i][j];
            for t in 0..j {
                v -= l[i][t] * l[j][t];
            }
            l[i][j] = if i == j { libm::sqrt(v.max(0.0)) } else { v / l[j][j] };
        }
    }
    // Lᵀ S L has the eigenvalues of L Lᵀ S = G⁻¹ S.
    let mut out = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let mut v = 0.0;
            for a in 0..k {
                for b in 0..k {
                    v += l[a][i] * s[a][b] * l[b][j];
                }
            }
            out[i][j] = v;
        }
    }
    out
}

/// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
fn largest_eigenvalue(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                if libm::fabs(a[p][r]) < 1e-300 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = theta.signum() / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for i in 0..n {
                    let (aip, air) = (a[i][p], a[i][r]);
                    a[i][p] = c * aip - s * air;
                    a[i][r] = s * aip + c * air;
                }
                for i in 0..n {
                    let (api, ari) = (a[p][i], a[r][i]);
                    a[p][i] = c * api - s * ari;
                    a[r][i] = s * api + c * ari;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qi};

    fn pts(c: &[&[i64]]) -> Vec<Point> {
        c.iter().map(|p| p.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn lipschitz_of_linear_maps() {
        let seg = pts(&[&[0], &[1]]);
        assert!((PlMap::identity(1).lipschitz_on(core::slice::from_ref(&seg)).unwrap() - 1.0).abs() < 1e-12);
        assert!((PlMap::scaling(&qi(3), 1).lipschitz_on(core::slice::from_ref(&seg)).unwrap() - 3.0).abs() < 1e-12);
        let tri = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(PlMap::constant(&[qi(5), qi(5)], 2).lipschitz_on(core::slice::from_ref(&tri)).unwrap(), 0.0);
        let shear = PlMap::affine(&vec![vec![qi(1), qi(1)], vec![qi(0), qi(1)]], &[qi(0), qi(0)]);
        // operator norm of [[1,1],[0,1]] is the golden ratio
        let golden = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!((shear.lipschitz_on(core::slice::from_ref(&tri)).unwrap() - golden).abs() < 1e-9);
        assert!(shear.lipschitz_at_most(core::slice::from_ref(&tri), &q(1619, 1000)).unwrap());
        assert!(!shear.lipschitz_at_most(&[tri], &q(1618, 1000)).unwrap());
    }

    #[test]
    fn max_function_pieces() {
        let f = PlFunction::Max(vec![Affine::coordinate(0, 1), Affine::constant(q(1, 2), 1)]);
        let chart = AffineMap::from_simplex(&pts(&[&[0], &[1]]));
        let cells = f.refine(&chart, vec![Polytope::standard_simplex(1)]).unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(f.eval(&[q(1, 4)]).unwrap(), q(1, 2));
        assert_eq!(f.eval(&[q(3, 4)]).unwrap(), q(3, 4));
    }

    #[test]
    fn mesh_interpolates_on_lower_dimensional_carrier() {
        let c = Arc::new(super::super::tests::triangle_circle());
        let f = PlFunction::Mesh { complex: c.clone(), values: vec![qi(0), qi(2), qi(4)] };
        assert_eq!(f.eval(&[q(1, 2), q(1, 2)]).unwrap(), qi(3));
        assert!(f.eval(&[q(1, 4), q(1, 4)]).is_err());
        // along the hypotenuse the value goes from 2 to 4
        let chart = AffineMap::from_simplex(&pts(&[&[1, 0], &[0, 1]]));
        let a = f.affine_on(&chart, &[q(1, 2)]).unwrap();
        assert_eq!(a, Affine::new(vec![qi(2)], qi(2)));
        let m = PlMap::from_vertex_images(c.clone(), &pts(&[&[0], &[3], &[3]]));
        assert!((lipschitz_constant(&m, &c).unwrap() - 3.0).abs() < 1e-12);
    }
}
