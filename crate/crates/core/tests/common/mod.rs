//! Brute-force oracles shared by the integration tests. They work on explicit
//! vector sets and touch the library only for field arithmetic, spanning sets
//! and form evaluation.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use phan_core::forms::HermitianForm;
use phan_core::linalg::Subspace;
use phan_core::phan::PhanFamily;
use phan_core::{Fe, Field};

pub type VecSet = BTreeSet<Vec<Fe>>;

/// Every vector of `s`, by running over all coefficient tuples.
pub fn elements(f: &Field, s: &Subspace) -> VecSet {
    let n = s.ambient_dim();
    let mut out = VecSet::new();
    let k = s.dim();
    let q = f.order();
    let total = q.pow(k as u32);
    for mut idx in 0..total {
        let mut v = vec![Fe::ZERO; n];
        for b in s.basis() {
            let c = f.element(idx % q).unwrap();
            idx /= q;
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        out.insert(v);
    }
    out
}

pub fn is_zero(v: &[Fe]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn log_q(f: &Field, size: usize) -> usize {
    let (mut k, mut s) = (0, 1);
    while s < size {
        s *= f.order();
        k += 1;
    }
    assert_eq!(s, size, "set size is not a power of q");
    k
}

/// `omega` restricted to the vector set `s` has no nonzero radical vector.
pub fn nondegenerate_on(f: &Field, form: &HermitianForm, s: &VecSet) -> bool {
    !s.iter()
        .filter(|x| !is_zero(x))
        .any(|x| s.iter().all(|y| form.evaluate(f, x, y).unwrap().is_zero()))
}

/// Membership straight from the definition: transversal to every flag
/// member and non-degenerate on the first non-trivial intersection.
pub fn member(family: &PhanFamily, u: &Subspace) -> bool {
    let f = family.field();
    let n = family.dim();
    let du = u.dim();
    if du == 0 || du == n {
        return false;
    }
    let us = elements(f, u);
    family.specs().iter().all(|spec| {
        let members = spec.flag().members();
        let inter: Vec<VecSet> = members
            .iter()
            .map(|v| us.intersection(&elements(f, v)).cloned().collect())
            .collect();
        for (v, i) in members.iter().zip(&inter) {
            let di = log_q(f, i.len());
            if di != 0 && du + v.dim() - di != n {
                return false;
            }
        }
        let k = (0..members.len() - 1)
            .find(|&i| inter[i + 1].len() > 1)
            .expect("U meets V");
        nondegenerate_on(f, &spec.forms()[k], &inter[k + 1])
    })
}

pub fn subset(f: &Field, a: &Subspace, b: &Subspace) -> bool {
    elements(f, a).is_subset(&elements(f, b))
}

/// All proper non-trivial subspaces, as spans of vector subsets.
pub fn all_proper_subspaces(f: &Field, n: usize) -> Vec<Subspace> {
    let mut seen: BTreeSet<Subspace> = BTreeSet::new();
    let points: Vec<Subspace> = {
        let full = Subspace::full(n);
        elements(f, &full)
            .into_iter()
            .filter(|v| !is_zero(v))
            .map(|v| Subspace::span(f, n, &[v]).unwrap())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    };
    let mut layer: Vec<Subspace> = points.clone();
    while !layer.is_empty() && layer[0].dim() < n {
        let mut next = BTreeSet::new();
        for s in &layer {
            seen.insert(s.clone());
            for p in &points {
                let mut vs = s.basis().to_vec();
                vs.extend(p.basis().iter().cloned());
                let t = Subspace::span(f, n, &vs).unwrap();
                if t.dim() == s.dim() + 1 && t.dim() < n {
                    next.insert(t);
                }
            }
        }
        layer = next.into_iter().collect();
    }
    seen.into_iter().collect()
}

/// The oracle vertex set of a family, sorted.
pub fn oracle_vertices(family: &PhanFamily) -> Vec<Subspace> {
    let f = family.field();
    all_proper_subspaces(f, family.dim())
        .into_iter()
        .filter(|u| member(family, u))
        .collect()
}

/// Graph statistics of a rank-2 geometry: vertices, incidences, components.
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub isolated: usize,
}

impl GraphStats {
    pub fn reduced_b0(&self) -> usize {
        self.components.saturating_sub(1)
    }

    /// Cycle rank `E - V + c`.
    pub fn b1(&self) -> usize {
        self.edges + self.components - self.vertices
    }
}

pub fn graph_stats(f: &Field, verts: &[Subspace]) -> GraphStats {
    let n = verts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let sets: Vec<VecSet> = verts.iter().map(|v| elements(f, v)).collect();
    let mut edges = 0;
    let mut degree = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if verts[i].dim() < verts[j].dim() && sets[i].is_subset(&sets[j]) {
                edges += 1;
                degree[i] += 1;
                degree[j] += 1;
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let components = (0..n).filter(|&i| find(&mut parent, i) == i).count();
    GraphStats {
        vertices: n,
        edges,
        components,
        isolated: degree.iter().filter(|&&d| d == 0).count(),
    }
}

/// Smith normal form by textbook elimination over big integers. Each pass
/// moves a smallest nonzero entry of the remaining block to the corner and
/// reduces its row and column by division with remainder; once both are
/// clear the corner is a diagonal entry. The diagonal is then turned into a
/// divisibility chain by `(d_i, d_j) -> (gcd, lcm)`.
pub fn naive_snf(m: &[Vec<i64>]) -> (usize, Vec<BigInt>) {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            for r in a.iter_mut() {
                r.swap(t, bj);
            }
            let mut clear = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let qt = &a[i][t] / &a[t][t];
                    for j in t..cols {
                        let d = &qt * &a[t][j];
                        a[i][j] -= d;
                    }
                    clear &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let qt = &a[t][j] / &a[t][t];
                    for i in t..rows {
                        let d = &qt * &a[i][t];
                        a[i][j] -= d;
                    }
                    clear &= a[t][j].is_zero();
                }
            }
            if clear {
                break;
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    // divisibility chain
    let k = diag.len();
    for i in 0..k {
        for j in i + 1..k {
            let g = num_integer::Integer::gcd(&diag[i], &diag[j]);
            let l = &diag[i] / &g * &diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    (k, diag)
}

/// Count of vertices of each dimension.
pub fn counts_by_dim(verts: &[Subspace]) -> HashMap<usize, usize> {
    let mut out = HashMap::new();
    for v in verts {
        *out.entry(v.dim()).or_insert(0) += 1;
    }
    out
}
