//! Dense row-major matrices over a [`Field`], stored as `Vec<Vec<Fe>>`.

use crate::field::{Fe, Field};

pub type Vector = Vec<Fe>;
pub type Matrix = Vec<Vec<Fe>>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Fe::ZERO; n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Fe::ONE;
    v
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| unit_vector(n, i)).collect()
}

pub fn is_zero_vector(v: &[Fe]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_vec(f: &Field, a: &[Fe], b: &[Fe]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn sub_vec(f: &Field, a: &[Fe], b: &[Fe]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn scale_vec(f: &Field, c: Fe, a: &[Fe]) -> Vector {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

/// `acc += c * v`
pub fn axpy(f: &Field, acc: &mut [Fe], c: Fe, v: &[Fe]) {
    if c.is_zero() {
        return;
    }
    for (a, &x) in acc.iter_mut().zip(v) {
        *a = f.add(*a, f.mul(c, x));
    }
}

/// Linear combination `sum_i coeffs[i] * rows[i]`.
pub fn combine(f: &Field, coeffs: &[Fe], rows: &[Vector], len: usize) -> Vector {
    let mut out = zero_vector(len);
    for (&c, row) in coeffs.iter().zip(rows) {
        axpy(f, &mut out, c, row);
    }
    out
}

pub fn sigma_vec(f: &Field, v: &[Fe]) -> Vector {
    v.iter().map(|&x| f.sigma(x)).collect()
}

pub fn transpose(m: &[Vector], ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

/// `sigma` applied entrywise, then transposed.
pub fn conj_transpose(f: &Field, m: &[Vector], ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| f.sigma(row[j])).collect())
        .collect()
}

pub fn mat_mul(f: &Field, a: &[Vector], b: &[Vector], bcols: usize) -> Matrix {
    a.iter().map(|row| combine(f, row, b, bcols)).collect()
}

/// Row vector times matrix.
pub fn vec_mat(f: &Field, v: &[Fe], m: &[Vector], ncols: usize) -> Vector {
    combine(f, v, m, ncols)
}

/// Reduced row echelon form. Zero rows are dropped; returns the pivot columns.
pub fn rref(f: &Field, mut rows: Matrix, ncols: usize) -> (Matrix, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv_nonzero(rows[r][c]);
        if inv != Fe::ONE {
            for x in rows[r].iter_mut() {
                *x = f.mul(inv, *x);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = f.neg(row[c]);
                axpy(f, row, factor, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(f: &Field, rows: Matrix, ncols: usize) -> usize {
    rref(f, rows, ncols).1.len()
}

/// Basis of `{x : m * x = 0}` (columns of `m` indexed by `x`).
pub fn right_kernel(f: &Field, m: &[Vector], ncols: usize) -> Matrix {
    let (red, pivots) = rref(f, m.to_vec(), ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = zero_vector(ncols);
        v[free] = Fe::ONE;
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = f.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

/// Basis of `{a : a * m = 0}` where `m` has `nrows` rows.
pub fn left_kernel(f: &Field, m: &[Vector], nrows: usize, ncols: usize) -> Matrix {
    debug_assert_eq!(m.len(), nrows);
    right_kernel(f, &transpose(m, ncols), nrows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_kernel() {
        let f = Field::new(3, 1, 1).unwrap();
        let m = vec![
            vec![f.from_int(1), f.from_int(2), f.from_int(0)],
            vec![f.from_int(2), f.from_int(1), f.from_int(0)],
        ];
        let (r, piv) = rref(&f, m.clone(), 3);
        assert_eq!(piv, vec![0]);
        assert_eq!(r.len(), 1);
        let ker = right_kernel(&f, &m, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &m {
                let s = row
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert!(s.is_zero());
            }
        }
        let lk = left_kernel(&f, &m, 2, 3);
        assert_eq!(lk.len(), 1);
        assert!(is_zero_vector(&vec_mat(&f, &lk[0], &m, 3)));
    }
}
