//! Dense linear algebra over the rationals.
use crate::arith::Q;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

pub type Vector = Vec<Q>;
pub type Matrix = Vec<Vec<Q>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(m: &[Vector]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

pub fn det(m: &[Vector]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * y;
                }
            }
        }
    }
    d
}

/// Some solution x of A x = b, or None if inconsistent.
pub fn solve(a: &[Vector], b: &[Q]) -> Option<Vector> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &c) in aug.iter().zip(&pivots) {
        x[c] = row[cols].clone();
    }
    Some(x)
}

/// Basis of the null space {x : A x = 0}, with `cols` unknowns.
pub fn nullspace(a: &[Vector], cols: usize) -> Vec<Vector> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, or None if singular.
pub fn inverse(m: &[Vector]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return if n == 0 { Some(Vec::new()) } else { None };
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Q], s: &Q) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn norm2(a: &[Q]) -> Q {
    dot(a, a)
}

/// Gram determinant of the given vectors.
pub fn gram_det(vs: &[Vector]) -> Q {
    let g: Matrix = vs.iter().map(|u| vs.iter().map(|v| dot(u, v)).collect()).collect();
    det(&g)
}

pub fn mat_vec(a: &[Vector], x: &[Q]) -> Vector {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn transpose(a: &[Vector], cols: usize) -> Matrix {
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qi;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn det_and_rank() {
        assert_eq!(det(&m(&[&[2, 1], &[1, 3]])), qi(5));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(det(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])), qi(-1));
    }

    #[test]
    fn solve_underdetermined() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = [qi(2), qi(3)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(mat_vec(&a, &x), b.to_vec());
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[qi(1), qi(2)]).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mat_vec(&a, &v).iter().all(|x| x.is_zero()));
        }
    }
}
