//! Smith normal form of integer matrices.
//!
//! A sparse phase eliminates unit pivots chosen to minimize fill
//! (Markowitz cost), then the remaining block goes through dense
//! elimination. Arithmetic runs in checked `i64` and is redone in `BigInt`
//! on overflow.

use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Integer arithmetic needed by the elimination.
pub trait SnfInt: Clone + PartialEq + Debug {
    fn from_i64(v: i64) -> Self;
    fn is_zero_value(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `|self| < |other|`.
    fn abs_lt(&self, other: &Self) -> bool;
    /// `self - q * b`, `None` on overflow.
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn add(&self, b: &Self) -> Option<Self>;
    fn mul(&self, b: &Self) -> Option<Self>;
    /// Quotient rounded toward zero.
    fn quot(&self, b: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl SnfInt for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero_value(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn add(&self, b: &Self) -> Option<Self> {
        self.checked_add(*b)
    }
    fn mul(&self, b: &Self) -> Option<Self> {
        self.checked_mul(*b)
    }
    fn quot(&self, b: &Self) -> Self {
        self.wrapping_div(*b)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn add(&self, b: &Self) -> Option<Self> {
        Some(self + b)
    }
    fn mul(&self, b: &Self) -> Option<Self> {
        Some(self * b)
    }
    fn quot(&self, b: &Self) -> Self {
        self / b
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Row-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    /// per row, `(column, value)` sorted by column, no zeros
    entries: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let cols = m.first().map_or(0, Vec::len);
        let entries = m
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(c, &x)| (c, x))
                    .collect()
            })
            .collect();
        SparseIntMatrix {
            rows: m.len(),
            cols,
            entries,
        }
    }

    /// Adds `value` to entry `(r, c)`.
    pub fn add_entry(&mut self, r: usize, c: usize, value: i64) {
        let row = &mut self.entries[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                row[i].1 += value;
                if row[i].1 == 0 {
                    row.remove(i);
                }
            }
            Err(i) if value != 0 => row.insert(i, (c, value)),
            Err(_) => {}
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.entries[r]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, v) in row {
                out[r][c] = v;
            }
        }
        out
    }

    /// `self * other`, dense result.
    pub fn mul_dense(&self, other: &SparseIntMatrix) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; other.cols]; self.rows];
        for (r, row) in self.entries.iter().enumerate() {
            for &(k, a) in row {
                for &(c, b) in &other.entries[k] {
                    out[r][c] += a * b;
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnfOptions {
    /// Matrices with fewer columns skip the sparse phase.
    pub dense_below_cols: usize,
}

impl Default for SnfOptions {
    fn default() -> Self {
        SnfOptions {
            dense_below_cols: 200,
        }
    }
}

/// Rank and the nonzero invariant factors `d_1 | d_2 | ..`, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_form(m: &SparseIntMatrix) -> SmithForm {
    smith_form_with(m, SnfOptions::default())
}

pub fn smith_form_with(m: &SparseIntMatrix, opts: SnfOptions) -> SmithForm {
    if let Some(s) = run::<i64>(m, opts) {
        return s;
    }
    run::<BigInt>(m, opts).expect("BigInt arithmetic does not overflow")
}

/// Dense elimination only, on the given matrix.
pub fn smith_form_dense(m: &[Vec<i64>]) -> SmithForm {
    smith_form_with(
        &SparseIntMatrix::from_dense(m),
        SnfOptions {
            dense_below_cols: usize::MAX,
        },
    )
}

fn run<T: SnfInt>(m: &SparseIntMatrix, opts: SnfOptions) -> Option<SmithForm> {
    let mut rows: Vec<Vec<(usize, T)>> = m
        .entries
        .iter()
        .map(|r| r.iter().map(|&(c, v)| (c, T::from_i64(v))).collect())
        .collect();
    let mut units = 0usize;
    if m.cols >= opts.dense_below_cols {
        units = sparse_unit_phase(&mut rows, m.cols)?;
    }
    // compress the remainder
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: BTreeSet<usize> = live_rows
        .iter()
        .flat_map(|&r| rows[r].iter().map(|e| e.0))
        .collect();
    let col_pos: Vec<usize> = {
        let mut pos = vec![usize::MAX; m.cols];
        for (i, &c) in live_cols.iter().enumerate() {
            pos[c] = i;
        }
        pos
    };
    let mut dense = vec![vec![T::from_i64(0); live_cols.len()]; live_rows.len()];
    for (i, &r) in live_rows.iter().enumerate() {
        for (c, v) in std::mem::take(&mut rows[r]) {
            dense[i][col_pos[c]] = v;
        }
    }
    let diag = dense_snf(&mut dense)?;
    let mut factors: Vec<BigInt> = vec![BigInt::one(); units];
    let mut rest: Vec<BigInt> = diag.iter().map(|d| d.to_bigint().abs()).collect();
    rest.sort();
    factors.extend(rest);
    Some(SmithForm {
        rank: factors.len(),
        invariant_factors: factors,
    })
}

/// Eliminates unit pivots; returns how many were removed.
fn sparse_unit_phase<T: SnfInt>(rows: &mut [Vec<(usize, T)>], ncols: usize) -> Option<usize> {
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].insert(r);
        }
    }
    let mut count = 0;
    loop {
        // Markowitz cost (row_len - 1) * (col_len - 1), ties by (row, col)
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row {
                if !v.is_unit() {
                    continue;
                }
                let cost = (row.len() - 1) * (col_rows[*c].len() - 1);
                if best.is_none_or(|b| cost < b.0) {
                    best = Some((cost, r, *c));
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((_, pr, pc)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pr]);
        let u = pivot_row.iter().find(|e| e.0 == pc).unwrap().1.clone();
        for (c, _) in &pivot_row {
            col_rows[*c].remove(&pr);
        }
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in targets {
            let a = rows[r].iter().find(|e| e.0 == pc).unwrap().1.clone();
            // u = u^-1 for units
            let factor = a.mul(&u)?;
            let (merged, added, removed) = axpy_sparse(&rows[r], &factor, &pivot_row)?;
            rows[r] = merged;
            for c in added {
                col_rows[c].insert(r);
            }
            for c in removed {
                col_rows[c].remove(&r);
            }
        }
        count += 1;
    }
    Some(count)
}

/// `row - factor * pivot`, with the columns gained and lost.
#[allow(clippy::type_complexity)]
fn axpy_sparse<T: SnfInt>(
    row: &[(usize, T)],
    factor: &T,
    pivot: &[(usize, T)],
) -> Option<(Vec<(usize, T)>, Vec<usize>, Vec<usize>)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut added, mut removed) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    let zero = T::from_i64(0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            let v = zero.sub_mul(factor, &pivot[j].1)?;
            if !v.is_zero_value() {
                out.push((cj, v));
                added.push(cj);
            }
            j += 1;
        } else {
            let v = row[i].1.sub_mul(factor, &pivot[j].1)?;
            if v.is_zero_value() {
                removed.push(ci);
            } else {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some((out, added, removed))
}

/// Dense Smith normal form; returns the nonzero diagonal.
fn dense_snf<T: SnfInt>(a: &mut [Vec<T>]) -> Option<Vec<T>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero_value()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs_lt(&a[bi][bj]))
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero_value() {
                    continue;
                }
                let q = a[i][t].quot(&a[t][t]);
                for j in t..n {
                    let v = a[i][j].sub_mul(&q, &a[t][j])?;
                    a[i][j] = v;
                }
                if !a[i][t].is_zero_value() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero_value() {
                    continue;
                }
                let q = a[t][j].quot(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = row[j].sub_mul(&q, &row[t])?;
                    row[j] = v;
                }
                if !a[t][j].is_zero_value() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut pos = (t, t);
                for i in t + 1..m {
                    if !a[i][t].is_zero_value() && a[i][t].abs_lt(&a[pos.0][pos.1]) {
                        pos = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !a[t][j].is_zero_value() && a[t][j].abs_lt(&a[pos.0][pos.1]) {
                        pos = (t, j);
                    }
                }
                if pos.1 == t {
                    a.swap(t, pos.0);
                } else {
                    for row in a.iter_mut() {
                        row.swap(t, pos.1);
                    }
                }
                continue;
            }
            // the pivot must divide the whole trailing block
            let bad = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| {
                    let q = a[i][j].quot(&a[t][t]);
                    a[i][j]
                        .sub_mul(&q, &a[t][t])
                        .is_none_or(|r| !r.is_zero_value())
                })
            });
            match bad {
                Some(i) => {
                    for j in t..n {
                        let v = a[t][j].add(&a[i][j])?;
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    Some(diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn factors(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        let s = smith_form_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(s.invariant_factors, factors(&[2, 6, 12]));
        let z = smith_form_dense(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(z.rank, 0);
        let e = smith_form_dense(&[]);
        assert_eq!(e.rank, 0);
        let t = smith_form_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(t.invariant_factors, factors(&[1, 6]));
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = rng.gen_range(1..12);
            let c = rng.gen_range(1..12);
            let m: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-3..=3)).collect())
                .collect();
            let sparse = smith_form_with(
                &SparseIntMatrix::from_dense(&m),
                SnfOptions {
                    dense_below_cols: 0,
                },
            );
            assert_eq!(sparse, smith_form_dense(&m), "{m:?}");
        }
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 3;
        let m = vec![vec![big, big - 1], vec![big - 7, big + 5]];
        let s = smith_form_dense(&m);
        let det = BigInt::from(big) * BigInt::from(big + 5)
            - BigInt::from(big - 1) * BigInt::from(big - 7);
        assert_eq!(s.rank, 2);
        assert_eq!(&s.invariant_factors[0] * &s.invariant_factors[1], det.abs());
    }

    #[test]
    fn sparse_accumulation() {
        let mut m = SparseIntMatrix::new(2, 2);
        m.add_entry(0, 1, 3);
        m.add_entry(0, 1, -3);
        m.add_entry(1, 0, 1);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.to_dense(), vec![vec![0, 0], vec![1, 0]]);
    }
}
