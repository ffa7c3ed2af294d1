//! Exact scalars: big rationals plus a small tower of real quadratic extensions.
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both down by a common power of two so they fit.
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
            let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Nearest rational with denominator 2^bits.
pub fn round_f64(x: f64, bits: u32) -> Q {
    let scale = (1u64 << bits) as f64;
    Q::new(BigInt::from(libm::round(x * scale) as i64), BigInt::from(1u64 << bits))
}

pub fn sqrt_f64(x: &Q) -> f64 {
    libm::sqrt(q_to_f64(x))
}

/// Largest denominator among the given rationals.
pub fn max_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .map(|x| x.denom().clone())
        .max()
        .unwrap_or_else(BigInt::one)
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact element of Q(√p₁, …, √pₙ) for nonnegative rationals pᵢ.
///
/// Coefficients are indexed by bitmasks over the radicands: the coefficient at
/// mask `m` multiplies the product of √pᵢ over the bits of `m`.
#[derive(Clone, Debug)]
pub struct Surd {
    radicands: Vec<Q>,
    coeffs: Vec<Q>,
}

impl Surd {
    pub fn rational(x: Q) -> Surd {
        Surd { radicands: Vec::new(), coeffs: vec![x] }
    }

    pub fn zero() -> Surd {
        Surd::rational(Q::zero())
    }

    /// √p for a nonnegative rational p.
    pub fn sqrt(p: Q) -> Surd {
        assert!(!p.is_negative(), "square root of a negative rational");
        if p.is_zero() {
            return Surd::zero();
        }
        let (n, d) = (p.numer().sqrt(), p.denom().sqrt());
        if &n * &n == *p.numer() && &d * &d == *p.denom() {
            return Surd::rational(Q::new(n, d));
        }
        Surd { radicands: vec![p], coeffs: vec![Q::zero(), Q::one()] }
    }

    fn lift_to(&self, tower: &[Q]) -> Vec<Q> {
        let pos: Vec<usize> = self
            .radicands
            .iter()
            .map(|r| tower.iter().position(|t| t == r).expect("radicand in tower"))
            .collect();
        let mut out = vec![Q::zero(); 1 << tower.len()];
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut m = 0usize;
            for (bit, &p) in pos.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    m |= 1 << p;
                }
            }
            out[m] += c;
        }
        out
    }

    fn common_tower(&self, other: &Surd) -> Vec<Q> {
        let mut tower = self.radicands.clone();
        for r in &other.radicands {
            if !tower.contains(r) {
                tower.push(r.clone());
            }
        }
        tower
    }

    pub fn add(&self, other: &Surd) -> Surd {
        let tower = self.common_tower(other);
        let a = self.lift_to(&tower);
        let b = other.lift_to(&tower);
        Surd { radicands: tower, coeffs: a.into_iter().zip(b).map(|(x, y)| x + y).collect() }
    }

    pub fn neg(&self) -> Surd {
        Surd { radicands: self.radicands.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Surd) -> Surd {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        let tower = self.common_tower(other);
        let a = self.lift_to(&tower);
        let b = other.lift_to(&tower);
        let mut out = vec![Q::zero(); a.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mut c = x * y;
                let both = i & j;
                for (bit, p) in tower.iter().enumerate() {
                    if both >> bit & 1 == 1 {
                        c *= p;
                    }
                }
                out[i ^ j] += c;
            }
        }
        Surd { radicands: tower, coeffs: out }
    }

    pub fn scale(&self, s: &Q) -> Surd {
        Surd { radicands: self.radicands.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        sign_in_tower(&self.radicands, &self.coeffs)
    }

    pub fn compare(&self, other: &Surd) -> Ordering {
        self.sub(other).signum().cmp(&0)
    }

    pub fn to_f64(&self) -> f64 {
        let roots: Vec<f64> = self.radicands.iter().map(sqrt_f64).collect();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| {
                let mut v = q_to_f64(c);
                for (bit, r) in roots.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        v *= r;
                    }
                }
                v
            })
            .sum()
    }

    /// The rational value, if all irrational parts vanish.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Surd) -> bool {
        self.sub(other).signum() == 0
    }
}

fn sign_in_tower(tower: &[Q], coeffs: &[Q]) -> i32 {
    if tower.is_empty() {
        return sign_q(&coeffs[0]);
    }
    let n = tower.len() - 1;
    let half = 1 << n;
    let (x, y) = coeffs.split_at(half);
    let lower = &tower[..n];
    let sx = sign_in_tower(lower, x);
    let sy = sign_in_tower(lower, y);
    if sy == 0 {
        return sx;
    }
    if sx == 0 || sx == sy {
        return if sx == 0 { sy } else { sx };
    }
    // Opposite signs: compare X² with p·Y².
    let xs = Surd { radicands: lower.to_vec(), coeffs: x.to_vec() };
    let ys = Surd { radicands: lower.to_vec(), coeffs: y.to_vec() };
    let d = xs.mul(&xs).sub(&ys.mul(&ys).scale(&tower[n]));
    sx * d.signum()
}

pub fn sign_q(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_squared_is_two() {
        let r = Surd::sqrt(qi(2));
        assert_eq!(r.mul(&r).as_rational(), Some(qi(2)));
    }

    #[test]
    fn nested_sign_matches_float() {
        // √2 + √3 − √10 is negative (≈ −0.016)
        let v = Surd::sqrt(qi(2)).add(&Surd::sqrt(qi(3))).sub(&Surd::sqrt(qi(10)));
        assert_eq!(v.signum(), -1);
        assert!(v.to_f64() < 0.0);
        let w = Surd::sqrt(qi(2)).add(&Surd::sqrt(qi(3))).sub(&Surd::sqrt(q(98, 10)));
        assert_eq!(w.signum(), 1);
    }

    #[test]
    fn equal_radicals_merge() {
        let a = Surd::sqrt(qi(5)).scale(&qi(2));
        let b = Surd::sqrt(qi(5)).add(&Surd::sqrt(qi(5)));
        assert!(a == b);
        assert_eq!(a.sub(&b).signum(), 0);
    }

    #[test]
    fn surd_sign_agrees_with_float_on_random_sums() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut s = Surd::zero();
            for _ in 0..3 {
                let c = q(rng.gen_range(-9..10), rng.gen_range(1..5));
                let p = qi(rng.gen_range(1..30));
                s = s.add(&Surd::sqrt(p).scale(&c));
            }
            let f = s.to_f64();
            if f.abs() > 1e-9 {
                assert_eq!(s.signum(), if f > 0.0 { 1 } else { -1 });
            }
        }
    }
}
