//! Čech chains of ball covers with coefficients in Lipschitz chains or
//! polyhedral currents, the augmented double complex and the zig-zag
//! procedures that move homology classes between the two theories.
use crate::bracket::{bracket, bracket_inverse_deg0};
use crate::chains::LipschitzChain;
use crate::complex::{BallCover, MetricComplex};
use crate::currents::PolyhedralCurrent;
use crate::geometry::{self, Point};
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

mod coefficient;
mod nerve;
mod solve;
mod split;
mod zigzag;

pub(crate) use coefficient::fit_to_complex;
pub use coefficient::{Coefficient, Preference};
pub use nerve::{build_nerve, Nerve};
pub use solve::{eps_preimage, fill_locally, find_center, solve_phi, Apex};
pub use split::cosheaf_split;
pub use zigzag::{
    check_total_cycle, zigzag_cancel, zigzag_descend, zigzag_fill, Ladder, Staircase, Step, FillWitness,
};

/// Sorts a tuple of cover indices, returning the permutation sign, or None
/// when an index repeats (alternating convention).
pub fn normalize_tuple(tuple: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut t = tuple.to_vec();
    let sign = geometry::sort_with_sign(&mut t) as i64;
    if t.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, t))
}

/// Element of Č_p(𝒰; 𝔄_q): one coefficient per nerve p-simplex, keyed by the
/// sorted index tuple.
#[derive(Clone, Debug)]
pub struct CechChain<A> {
    degree: usize,
    coeff_degree: usize,
    ambient_dim: usize,
    components: BTreeMap<Vec<usize>, A>,
}

impl<A: Coefficient> CechChain<A> {
    pub fn zero(degree: usize, coeff_degree: usize, ambient_dim: usize) -> Self {
        CechChain { degree, coeff_degree, ambient_dim, components: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff_degree(&self) -> usize {
        self.coeff_degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &A)> {
        self.components.iter()
    }

    pub fn component(&self, tuple: &[usize]) -> Option<&A> {
        self.components.get(tuple)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Adds `value` on the tuple in the given order, i.e. sign·value on the
    /// sorted tuple; tuples with a repeated index are dropped.
    pub fn add_at(&mut self, tuple: &[usize], value: &A) {
        assert_eq!(tuple.len(), self.degree + 1, "tuple of the wrong length");
        assert_eq!(value.degree(), self.coeff_degree, "coefficient of the wrong degree");
        let Some((sign, key)) = normalize_tuple(tuple) else { return };
        let value = value.scaled(sign);
        let sum = match self.components.remove(&key) {
            Some(old) => old.plus(&value),
            None => value,
        };
        if !sum.is_zero() {
            self.components.insert(key, sum);
        }
    }

    pub fn add(&self, other: &CechChain<A>) -> CechChain<A> {
        assert_eq!((self.degree, self.coeff_degree), (other.degree, other.coeff_degree), "bidegree mismatch");
        let mut out = self.clone();
        for (t, v) in &other.components {
            out.add_at(t, v);
        }
        out
    }

    pub fn scale(&self, k: i64) -> CechChain<A> {
        let mut out = CechChain::zero(self.degree, self.coeff_degree, self.ambient_dim);
        if k != 0 {
            for (t, v) in &self.components {
                out.components.insert(t.clone(), v.scaled(k));
            }
        }
        out
    }

    pub fn neg(&self) -> CechChain<A> {
        self.scale(-1)
    }

    pub fn sub(&self, other: &CechChain<A>) -> CechChain<A> {
        self.add(&other.neg())
    }

    /// Φ(x on α₀…α_p) = Σⱼ (−1)ʲ x on α₀…α̂ⱼ…α_p; zero in Čech degree 0.
    pub fn phi(&self) -> CechChain<A> {
        if self.degree == 0 {
            return CechChain::zero(0, self.coeff_degree, self.ambient_dim);
        }
        let mut out = CechChain::zero(self.degree - 1, self.coeff_degree, self.ambient_dim);
        for (t, v) in &self.components {
            for j in 0..t.len() {
                let mut face = t.clone();
                face.remove(j);
                out.add_at(&face, &if j % 2 == 0 { v.clone() } else { v.scaled(-1) });
            }
        }
        out
    }

    /// Componentwise b or ∂; zero in coefficient degree 0.
    pub fn vertical(&self) -> CechChain<A> {
        if self.coeff_degree == 0 {
            return CechChain::zero(self.degree, 0, self.ambient_dim);
        }
        let mut out = CechChain::zero(self.degree, self.coeff_degree - 1, self.ambient_dim);
        for (t, v) in &self.components {
            out.add_at(t, &v.vertical());
        }
        out
    }

    /// ε: the sum of the components in the global group.
    pub fn augment(&self) -> Result<A> {
        if self.degree != 0 {
            return Err(Error::Precondition(format!("ε needs Čech degree 0, got {}", self.degree)));
        }
        Ok(self.components.values().fold(A::zero(self.coeff_degree, self.ambient_dim), |s, v| s.plus(v)))
    }

    /// ε′: each 0-dimensional coefficient replaced by its total multiplicity.
    pub fn augment_nerve(&self) -> Result<NerveChain> {
        if self.coeff_degree != 0 {
            return Err(Error::Precondition("ε′ needs 0-dimensional coefficients".into()));
        }
        let mut out = NerveChain::zero(self.degree);
        for (t, v) in &self.components {
            out.add_at(t, v.augmentation());
        }
        Ok(out)
    }

    /// λ_# for a refinement projection given as fine index ↦ coarse index.
    pub fn push(&self, lambda: &[usize]) -> CechChain<A> {
        let mut out = CechChain::zero(self.degree, self.coeff_degree, self.ambient_dim);
        for (t, v) in &self.components {
            let image: Vec<usize> = t.iter().map(|&i| lambda[i]).collect();
            out.add_at(&image, v);
        }
        out
    }

    /// Applies a componentwise homomorphism.
    pub fn map<B: Coefficient>(&self, coeff_degree: usize, f: impl Fn(&A) -> B) -> CechChain<B> {
        let mut out = CechChain::zero(self.degree, coeff_degree, self.ambient_dim);
        for (t, v) in &self.components {
            out.add_at(t, &f(v));
        }
        out
    }

    pub fn try_map<B: Coefficient>(&self, coeff_degree: usize, f: impl Fn(&A) -> Result<B>) -> Result<CechChain<B>> {
        let mut out = CechChain::zero(self.degree, coeff_degree, self.ambient_dim);
        for (t, v) in &self.components {
            out.add_at(t, &f(v)?);
        }
        Ok(out)
    }

    /// Equality of the represented elements.
    pub fn same(&self, other: &CechChain<A>) -> bool {
        (self.degree, self.coeff_degree) == (other.degree, other.coeff_degree)
            && self.components.len() == other.components.len()
            && self.components.iter().all(|(t, v)| other.components.get(t).is_some_and(|w| v.same(w)))
    }

    /// Checks that every component lies in the intersection of its balls,
    /// naming the first offending tuple and point.
    pub fn validate(&self, cover: &BallCover) -> Result<()> {
        for (t, v) in &self.components {
            if let Some(&i) = t.iter().find(|&&i| i >= cover.len()) {
                return Err(Error::Cover(format!("tuple {t:?} names ball {i} of a {}-ball cover", cover.len())));
            }
            for group in v.vertex_sets() {
                if let Some(p) = group.iter().find(|p| !cover.in_all(t, p)) {
                    return Err(Error::Locality(format!("component on {t:?} reaches {p:?} outside its balls")));
                }
            }
        }
        Ok(())
    }
}

impl CechChain<LipschitzChain> {
    /// Componentwise bracket.
    pub fn bracket(&self) -> CechChain<PolyhedralCurrent> {
        let n = self.ambient_dim;
        self.map(self.coeff_degree, |c| bracket(c, n))
    }

    /// Subdivides every component to the common largest level.
    pub fn level_up(&self) -> CechChain<LipschitzChain> {
        let top = self.components.values().map(|c| c.level()).max().unwrap_or(0);
        self.map(self.coeff_degree, |c| c.subdivide_times(top - c.level()))
    }
}

impl CechChain<PolyhedralCurrent> {
    /// Componentwise inverse bracket of 0-dimensional coefficients.
    pub fn bracket_inverse(&self) -> Result<CechChain<LipschitzChain>> {
        self.try_map(0, bracket_inverse_deg0)
    }
}

/// Integer chain on the nerve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveChain {
    degree: usize,
    coefficients: BTreeMap<Vec<usize>, i64>,
}

impl NerveChain {
    pub fn zero(degree: usize) -> Self {
        NerveChain { degree, coefficients: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<usize>, i64)> {
        self.coefficients.iter().map(|(t, &a)| (t, a))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn add_at(&mut self, tuple: &[usize], a: i64) {
        let Some((sign, key)) = normalize_tuple(tuple) else { return };
        let e = self.coefficients.entry(key.clone()).or_insert(0);
        *e += sign * a;
        if *e == 0 {
            self.coefficients.remove(&key);
        }
    }

    pub fn boundary(&self) -> NerveChain {
        let mut out = NerveChain::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (t, &a) in &self.coefficients {
            for j in 0..t.len() {
                let mut face = t.clone();
                face.remove(j);
                out.add_at(&face, if j % 2 == 0 { a } else { -a });
            }
        }
        out
    }

    pub fn push(&self, lambda: &[usize]) -> NerveChain {
        let mut out = NerveChain::zero(self.degree);
        for (t, &a) in &self.coefficients {
            out.add_at(&t.iter().map(|&i| lambda[i]).collect::<Vec<_>>(), a);
        }
        out
    }
}

/// Whether the points and the center lie in one closed face of `complex`.
pub(crate) fn carrier_ok(complex: &MetricComplex, group: &[Point], center: &Point) -> bool {
    let mut pts = group.to_vec();
    pts.push(center.clone());
    complex.common_face(&pts).is_some()
}
