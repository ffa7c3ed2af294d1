//! Seeded generators for the verification corpora. Every suite draws from
//! its own stream so adding cases to one suite leaves the others unchanged.
use mhom_core::arith::{q, Q};
use mhom_core::chains::{AffineSimplex, LipschitzChain};
use mhom_core::currents::PolyhedralCurrent;
use mhom_core::geometry::{self, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SuiteRng = ChaCha8Rng;

/// Generator for one named stream of a run.
pub fn stream(seed: u64, name: &str) -> SuiteRng {
    // FNV-1a keeps the stream id stable across platforms and releases
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// A rational in [lo, hi] with denominator at most `den`.
pub fn rational(rng: &mut SuiteRng, lo: i64, hi: i64, den: i64) -> Q {
    let d = rng.gen_range(1..=den);
    q(rng.gen_range(lo * d..=hi * d), d)
}

pub fn point(rng: &mut SuiteRng, dim: usize, lo: i64, hi: i64) -> Point {
    (0..dim).map(|_| rational(rng, lo, hi, 6)).collect()
}

/// Barycentric weights with a common random denominator, all positive when
/// `interior`.
pub fn barycentric(rng: &mut SuiteRng, n: usize, interior: bool) -> Vec<Q> {
    let den = rng.gen_range(n as i64 + 1..=n as i64 + 9);
    let low = interior as i64;
    let mut left = den - low * n as i64;
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        let take = if i + 1 == n { left } else { rng.gen_range(0..=left) };
        left -= take;
        w.push(q(take + low, den));
    }
    w
}

pub fn point_in(rng: &mut SuiteRng, simplex: &[Point], interior: bool) -> Point {
    geometry::from_barycentric(&barycentric(rng, simplex.len(), interior), simplex)
}

/// k + 1 affinely independent points.
pub fn nondegenerate_simplex(rng: &mut SuiteRng, dim: usize, k: usize) -> Vec<Point> {
    loop {
        let pts: Vec<Point> = (0..=k).map(|_| point(rng, dim, -2, 2)).collect();
        if geometry::is_nondegenerate(&pts) {
            return pts;
        }
    }
}

pub fn coefficient(rng: &mut SuiteRng) -> i64 {
    let a = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        a
    } else {
        -a
    }
}

/// A chain of `terms` affine simplices in R^dim, some sharing vertices and a
/// few degenerate.
pub fn chain(rng: &mut SuiteRng, degree: usize, dim: usize, terms: usize) -> LipschitzChain {
    let pool: Vec<Point> = (0..degree + 3).map(|_| point(rng, dim, -2, 2)).collect();
    let mut c = LipschitzChain::zero(degree);
    for _ in 0..terms {
        let verts = (0..=degree).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        c.add_term(coefficient(rng), AffineSimplex::new(verts));
    }
    c
}

/// A current of `pieces` nondegenerate simplices in R^dim.
pub fn current(rng: &mut SuiteRng, degree: usize, dim: usize, pieces: usize) -> PolyhedralCurrent {
    let raw: Vec<(i64, Vec<Point>)> =
        (0..pieces).map(|_| (coefficient(rng), nondegenerate_simplex(rng, dim, degree))).collect();
    PolyhedralCurrent::from_pieces(degree, dim, raw)
}

/// A finite point current with `points` atoms in R^dim.
pub fn point_current(rng: &mut SuiteRng, dim: usize, points: usize) -> PolyhedralCurrent {
    let raw: Vec<(i64, Vec<Point>)> = (0..points).map(|_| (coefficient(rng), vec![point(rng, dim, -3, 3)])).collect();
    PolyhedralCurrent::from_pieces(0, dim, raw)
}
