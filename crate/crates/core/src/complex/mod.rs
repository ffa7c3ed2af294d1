//! Finite geometric simplicial complexes with rational vertices and the ambient
//! Euclidean metric.
mod cover;
mod extension;
mod pl;

pub use cover::{lattice_points, subdivide_simplex as subdivide_points, Ball, BallCover};
pub use extension::{mcshane_extension, segment_in_union, Formula, Homotopy, McShane, StarContraction};
pub use pl::{lipschitz_constant, Affine, AffineMap, PlFunction, PlMap};

use crate::algebra::{ChainComplexZ, IntMatrix};
use crate::arith::{sqrt_f64, Q};
use crate::geometry::{self, Point};
use crate::{Error, Result};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Geometric simplicial complex; faces are stored as sorted vertex tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricComplex {
    ambient_dim: usize,
    vertices: Vec<Point>,
    faces: Vec<Vec<Vec<usize>>>,
    subcomplexes: BTreeMap<String, Vec<Vec<usize>>>,
}

fn close_faces(simplices: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let mut faces: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for s in simplices {
        let mut s = s.clone();
        s.sort();
        s.dedup();
        for mask in 1u64..(1 << s.len()) {
            let f: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            let d = f.len() - 1;
            if faces.len() <= d {
                faces.resize(d + 1, BTreeSet::new());
            }
            faces[d].insert(f);
        }
    }
    faces.into_iter().map(|s| s.into_iter().collect()).collect()
}

impl MetricComplex {
    pub fn new(
        ambient_dim: usize,
        vertices: Vec<Point>,
        simplices: Vec<Vec<usize>>,
        subcomplexes: BTreeMap<String, Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::InvalidComplex(alloc::format!("vertex {v:?} has wrong dimension")));
        }
        let n = vertices.len();
        let mut all = simplices;
        all.extend((0..n).map(|i| vec![i]));
        for s in &all {
            if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidComplex(alloc::format!("vertex index {bad} out of range")));
            }
            let mut t = s.clone();
            t.sort();
            t.dedup();
            if t.len() != s.len() {
                return Err(Error::InvalidComplex(alloc::format!("simplex {s:?} repeats a vertex")));
            }
            let pts: Vec<Point> = s.iter().map(|&i| vertices[i].clone()).collect();
            if !geometry::is_nondegenerate(&pts) {
                return Err(Error::InvalidComplex(alloc::format!("simplex {s:?} is degenerate")));
            }
        }
        let faces = close_faces(&all);
        let mut subs = BTreeMap::new();
        for (name, list) in subcomplexes {
            for s in &list {
                if s.iter().any(|&i| i >= n) {
                    return Err(Error::InvalidComplex(alloc::format!("subcomplex {name} uses a bad vertex")));
                }
            }
            let closed: Vec<Vec<usize>> = close_faces(&list).into_iter().flatten().collect();
            for f in &closed {
                if !faces.get(f.len() - 1).is_some_and(|l| l.binary_search(f).is_ok()) {
                    return Err(Error::InvalidComplex(alloc::format!("subcomplex {name} has a face {f:?} outside the complex")));
                }
            }
            subs.insert(name, closed);
        }
        Ok(MetricComplex { ambient_dim, vertices, faces, subcomplexes: subs })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.faces.len().saturating_sub(1)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn faces(&self, k: usize) -> &[Vec<usize>] {
        self.faces.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        self.faces.get(face.len().checked_sub(1)?)?.binary_search(&face.to_vec()).ok()
    }

    pub fn points(&self, face: &[usize]) -> Vec<Point> {
        face.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub fn subcomplex_names(&self) -> impl Iterator<Item = &String> {
        self.subcomplexes.keys()
    }

    pub fn subcomplex_faces(&self, name: &str) -> Result<&[Vec<usize>]> {
        self.subcomplexes
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::InvalidComplex(alloc::format!("no subcomplex named {name}")))
    }

    /// Indices of the subcomplex faces per degree, for `relative_complex`.
    pub fn selection(&self, name: &str) -> Result<Vec<Vec<usize>>> {
        let mut sel = vec![Vec::new(); self.faces.len()];
        for f in self.subcomplex_faces(name)? {
            sel[f.len() - 1].push(self.face_index(f).expect("closed subcomplex"));
        }
        for s in sel.iter_mut() {
            s.sort();
        }
        Ok(sel)
    }

    /// The named subcomplex as a complex in its own right (vertex order kept).
    pub fn subcomplex(&self, name: &str) -> Result<MetricComplex> {
        let faces = self.subcomplex_faces(name)?;
        let used: BTreeSet<usize> = faces.iter().flatten().copied().collect();
        let map: BTreeMap<usize, usize> = used.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let verts = used.iter().map(|&i| self.vertices[i].clone()).collect();
        let simps = faces.iter().map(|f| f.iter().map(|i| map[i]).collect()).collect();
        MetricComplex::new(self.ambient_dim, verts, simps, BTreeMap::new())
    }

    /// Faces not properly contained in another face.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 0..self.faces.len() {
            for f in &self.faces[k] {
                let covered = self.faces.get(k + 1).is_some_and(|up| up.iter().any(|g| f.iter().all(|v| g.contains(v))));
                if !covered {
                    out.push(f.clone());
                }
            }
        }
        out
    }

    /// Simplicial chain complex with the sorted-vertex orientation.
    pub fn chain_complex(&self) -> ChainComplexZ {
        let dims: Vec<usize> = self.faces.iter().map(|l| l.len()).collect();
        let mut bds = Vec::new();
        for k in 1..self.faces.len() {
            let mut m = IntMatrix::zeros(dims[k - 1], dims[k]);
            for (j, s) in self.faces[k].iter().enumerate() {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    let row = self.face_index(&f).expect("closed under faces");
                    m.set(row, j, BigInt::from(if i % 2 == 0 { 1 } else { -1 }));
                }
            }
            bds.push(m);
        }
        ChainComplexZ::new(dims, bds).expect("simplicial boundary squares to zero")
    }

    /// Smallest closed face containing `x`.
    pub fn locate(&self, x: &[Q]) -> Option<Vec<usize>> {
        self.common_face(core::slice::from_ref(&x.to_vec()))
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.locate(x).is_some()
    }

    /// Smallest closed face containing all the points, if any face does.
    pub fn common_face(&self, points: &[Point]) -> Option<Vec<usize>> {
        for s in self.maximal_simplices() {
            let pts = self.points(&s);
            let mut support = BTreeSet::new();
            let mut ok = true;
            for p in points {
                match geometry::barycentric(p, &pts) {
                    Some(l) if l.iter().all(|v| !v.is_negative()) => {
                        support.extend(l.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| s[i]));
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Some(support.into_iter().collect());
            }
        }
        None
    }

    /// Euclidean distance between two carrier points.
    pub fn distance(&self, p: &[Q], q: &[Q]) -> Result<f64> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::OutsideCarrier);
        }
        Ok(sqrt_f64(&geometry::dist2(p, q)))
    }

    pub fn diameter2(&self) -> Q {
        let mut best = Q::zero();
        for a in &self.vertices {
            for b in &self.vertices {
                let d = geometry::dist2(a, b);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// Barycentric subdivision; vertices are face barycenters.
    pub fn barycentric_subdivision(&self) -> MetricComplex {
        let mut verts = Vec::new();
        let mut id: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for level in &self.faces {
            for f in level {
                id.insert(f.clone(), verts.len());
                verts.push(geometry::barycenter(&self.points(f)));
            }
        }
        let mut simps = Vec::new();
        for top in self.maximal_simplices() {
            for flag in flags(&top) {
                simps.push(flag.iter().map(|f| id[f]).collect());
            }
        }
        let subs = self
            .subcomplexes
            .iter()
            .map(|(name, faces)| {
                let mut list = Vec::new();
                for f in faces {
                    for flag in flags(f) {
                        list.push(flag.iter().map(|g| id[g]).collect());
                    }
                }
                (name.clone(), list)
            })
            .collect();
        MetricComplex::new(self.ambient_dim, verts, simps, subs).expect("subdivision is a complex")
    }

    pub fn subdivide(&self, depth: usize) -> MetricComplex {
        let mut c = self.clone();
        for _ in 0..depth {
            c = c.barycentric_subdivision();
        }
        c
    }

    pub fn vertex_index(&self, p: &[Q]) -> Option<usize> {
        self.vertices.iter().position(|v| v.as_slice() == p)
    }
}

/// Maximal flags f₀ ⊂ f₁ ⊂ … ⊂ face of faces of a simplex, top face last.
fn flags(face: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if face.len() == 1 {
        return vec![vec![face.to_vec()]];
    }
    let mut out = Vec::new();
    for i in 0..face.len() {
        let mut sub = face.to_vec();
        sub.remove(i);
        for mut fl in flags(&sub) {
            fl.push(face.to_vec());
            out.push(fl);
        }
    }
    out
}
