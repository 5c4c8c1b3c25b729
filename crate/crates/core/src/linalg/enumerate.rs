use super::matrix::{zero_vector, Vector};
use super::subspace::Subspace;
use crate::field::{Fe, Field};

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(q: u128, n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Every `k`-dimensional subspace of `F^n` exactly once, in canonical order.
pub fn enumerate_subspaces(f: &Field, n: usize, k: usize) -> Vec<Subspace> {
    if k > n {
        return Vec::new();
    }
    let q = f.order() as u32;
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: row i, column c > pivots[i], c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let piv = pivots.clone();
                (piv[i] + 1..n)
                    .filter(move |c| !piv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let mut digits = vec![0u32; free.len()];
        let mut exhausted = false;
        while !exhausted {
            let mut rows: Vec<Vector> = (0..k).map(|_| zero_vector(n)).collect();
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = Fe::ONE;
            }
            for (&(i, c), &d) in free.iter().zip(&digits) {
                rows[i][c] = Fe(d);
            }
            out.push(Subspace::from_rref_unchecked(n, rows, pivots.clone()));
            // odometer, last position fastest
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    exhausted = true;
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < q {
                    break;
                }
                digits[pos] = 0;
            }
        }
        if k == 0 || !next_combination(&mut pivots, n) {
            break;
        }
    }
    out.sort();
    out
}

/// All proper non-trivial subspaces of `F^n`, by dimension, in canonical order.
pub fn enumerate_proper_subspaces(f: &Field, n: usize) -> Vec<Subspace> {
    (1..n).flat_map(|k| enumerate_subspaces(f, n, k)).collect()
}

/// All `q^n` vectors of `F^n` in lexicographic field-index order.
pub fn enumerate_vectors(f: &Field, n: usize) -> impl Iterator<Item = Vector> {
    let q = f.order() as u64;
    let total = q.pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut v = zero_vector(n);
        for slot in v.iter_mut().rev() {
            *slot = Fe((idx % q) as u32);
            idx /= q;
        }
        v
    })
}
