//! Bounded search for a trivial fundamental group.
//!
//! Presentation: a spanning tree of the 1-skeleton, one generator per
//! non-tree edge, one relator per triangle. Relators of length one kill a
//! generator and relators of length two identify two generators (up to
//! inversion); these rewrites are applied until nothing changes or the
//! budget runs out. Only "trivial" is ever concluded; anything else is
//! "unknown".

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::complex::SimplicialComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pi1Status {
    Trivial,
    Unknown,
    NotApplicable,
    NotRequested,
}

/// Union-find over generators; `Some(g, inv)` means `x = g^(+-1)`, `None` means trivial.
struct Classes {
    parent: Vec<(usize, bool)>,
    trivial: Vec<bool>,
}

impl Classes {
    fn new(n: usize) -> Self {
        Classes {
            parent: (0..n).map(|i| (i, false)).collect(),
            trivial: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let (p, inv) = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, inv2) = self.find(p);
        self.parent[x] = (root, inv ^ inv2);
        (root, inv ^ inv2)
    }

    /// Letter `(g, inv)` rewritten to its root, or `None` if trivial.
    fn rewrite(&mut self, g: usize, inv: bool) -> Option<(usize, bool)> {
        let (r, i) = self.find(g);
        (!self.trivial[r]).then_some((r, inv ^ i))
    }
}

fn reduce(word: &mut Vec<(usize, bool)>) {
    let mut out: Vec<(usize, bool)> = Vec::with_capacity(word.len());
    for &l in word.iter() {
        if out.last().is_some_and(|&(g, i)| g == l.0 && i != l.1) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    // cyclic reduction
    while out.len() >= 2 {
        let (a, b) = (out[0], out[out.len() - 1]);
        if a.0 == b.0 && a.1 != b.1 {
            out.pop();
            out.remove(0);
        } else {
            break;
        }
    }
    *word = out;
}

pub fn pi1_trivial(k: &SimplicialComplex, budget: usize) -> Pi1Status {
    let by_dim = k.simplices_by_dim();
    if by_dim.is_empty() {
        return Pi1Status::Unknown;
    }
    let vertices = &by_dim[0];
    let edges: &[Vec<usize>] = by_dim.get(1).map_or(&[], |e| e.as_slice());
    let triangles: &[Vec<usize>] = by_dim.get(2).map_or(&[], |e| e.as_slice());
    // spanning tree by BFS from the first vertex
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in edges {
        adjacency.entry(e[0]).or_default().push(e[1]);
        adjacency.entry(e[1]).or_default().push(e[0]);
    }
    let mut seen: HashMap<usize, ()> = HashMap::new();
    let mut tree: HashMap<(usize, usize), ()> = HashMap::new();
    let mut queue = VecDeque::from([vertices[0][0]]);
    seen.insert(vertices[0][0], ());
    while let Some(v) = queue.pop_front() {
        for &w in adjacency.get(&v).map_or(&[][..], |a| a.as_slice()) {
            if seen.insert(w, ()).is_none() {
                tree.insert((v.min(w), v.max(w)), ());
                queue.push_back(w);
            }
        }
    }
    if seen.len() != vertices.len() {
        return Pi1Status::Unknown;
    }
    let mut generator: HashMap<(usize, usize), usize> = HashMap::new();
    for e in edges {
        let key = (e[0], e[1]);
        if !tree.contains_key(&key) {
            let id = generator.len();
            generator.insert(key, id);
        }
    }
    if generator.is_empty() {
        return Pi1Status::Trivial;
    }
    let letter = |a: usize, b: usize| -> Option<(usize, bool)> {
        let (lo, hi, inv) = if a < b { (a, b, false) } else { (b, a, true) };
        generator.get(&(lo, hi)).map(|&g| (g, inv))
    };
    let relators: Vec<Vec<(usize, bool)>> = triangles
        .iter()
        .map(|t| {
            [letter(t[0], t[1]), letter(t[1], t[2]), letter(t[2], t[0])]
                .into_iter()
                .flatten()
                .collect()
        })
        .collect();
    let mut classes = Classes::new(generator.len());
    let mut alive = generator.len();
    for _ in 0..budget {
        let mut changed = false;
        for rel in &relators {
            let mut word: Vec<(usize, bool)> = rel
                .iter()
                .filter_map(|&(g, i)| classes.rewrite(g, i))
                .collect();
            reduce(&mut word);
            match word.as_slice() {
                [(g, _)] => {
                    classes.trivial[*g] = true;
                    alive -= 1;
                    changed = true;
                }
                [(a, ia), (b, ib)] if a != b => {
                    // a^ia b^ib = 1  =>  a = b^(-ib) up to the sign of a
                    classes.parent[*a] = (*b, !(ia ^ ib));
                    alive -= 1;
                    changed = true;
                }
                _ => {}
            }
            if alive == 0 {
                return Pi1Status::Trivial;
            }
        }
        if !changed {
            break;
        }
    }
    Pi1Status::Unknown
}
