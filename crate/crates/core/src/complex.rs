//! Finite abstract simplicial complexes stored by their facets.
//!
//! Vertices are indices `0..vertex_count`. Every complex contains the empty
//! simplex, so a complex without vertices is the (-1)-sphere `{{}}`.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Subspace;

pub type Simplex = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    vertex_count: usize,
    /// Sorted facets, each strictly increasing; empty when there are no vertices.
    facets: Vec<Simplex>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

fn subsets(s: &[usize]) -> impl Iterator<Item = Simplex> + '_ {
    (0u64..1 << s.len()).map(move |mask| {
        s.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// Keeps only the inclusion-maximal non-empty simplices.
fn maximal(mut simplices: Vec<Simplex>) -> Vec<Simplex> {
    for s in &mut simplices {
        s.sort_unstable();
        s.dedup();
    }
    simplices.retain(|s| !s.is_empty());
    simplices.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    simplices.dedup();
    let mut covered: HashSet<Simplex> = HashSet::new();
    let mut out = Vec::new();
    for s in simplices {
        if covered.contains(&s) {
            continue;
        }
        covered.extend(subsets(&s));
        out.push(s);
    }
    out.sort();
    out
}

impl SimplicialComplex {
    pub fn new(vertex_count: usize, simplices: Vec<Simplex>) -> Result<Self> {
        if let Some(v) = simplices.iter().flatten().find(|&&v| v >= vertex_count) {
            return Err(Error::Precondition(format!(
                "vertex {v} outside 0..{vertex_count}"
            )));
        }
        Ok(SimplicialComplex {
            vertex_count,
            facets: maximal(simplices),
        })
    }

    fn from_maximal(vertex_count: usize, simplices: Vec<Simplex>) -> Self {
        SimplicialComplex {
            vertex_count,
            facets: maximal(simplices),
        }
    }

    /// The complex `{{}}` on a vertex namespace of the given size.
    pub fn empty(vertex_count: usize) -> Self {
        SimplicialComplex {
            vertex_count,
            facets: Vec::new(),
        }
    }

    /// One full simplex on `0..=d`.
    pub fn simplex(d: usize) -> Self {
        SimplicialComplex {
            vertex_count: d + 1,
            facets: vec![(0..=d).collect()],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Vertices lying in some simplex.
    pub fn vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.facets.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Dimension, `-1` for `{{}}`.
    pub fn dim(&self) -> isize {
        self.facets
            .iter()
            .map(|f| f.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        self.facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn purity_and_dimension(&self) -> (bool, isize) {
        (self.is_pure(), self.dim())
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.is_empty() || self.facets.iter().any(|f| is_subset(&s, f))
    }

    /// All non-empty simplices by dimension, each list sorted.
    pub fn simplices_by_dim(&self) -> Vec<Vec<Simplex>> {
        let d = self.dim();
        if d < 0 {
            return Vec::new();
        }
        let mut sets: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); d as usize + 1];
        for f in &self.facets {
            for s in subsets(f).filter(|s| !s.is_empty()) {
                sets[s.len() - 1].insert(s);
            }
        }
        sets.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// All simplices including the empty one.
    pub fn all_simplices(&self) -> Vec<Simplex> {
        let mut out = vec![Vec::new()];
        out.extend(self.simplices_by_dim().into_iter().flatten());
        out
    }

    /// `f_0, f_1, ..`.
    pub fn face_counts(&self) -> Vec<usize> {
        self.simplices_by_dim().iter().map(Vec::len).collect()
    }

    /// Unreduced Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.face_counts()
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// `{t : t & s = {}, t | s in K}`.
    pub fn link(&self, s: &[usize]) -> Result<SimplicialComplex> {
        let mut s = s.to_vec();
        s.sort_unstable();
        if !self.contains(&s) {
            return Err(Error::SimplexNotInComplex);
        }
        let pieces = self
            .facets
            .iter()
            .filter(|f| is_subset(&s, f))
            .map(|f| f.iter().copied().filter(|v| !s.contains(v)).collect())
            .collect();
        Ok(SimplicialComplex::from_maximal(self.vertex_count, pieces))
    }

    /// Closure of the star of `v`: every simplex lying in a simplex through `v`.
    pub fn star_closure(&self, v: usize) -> Result<SimplicialComplex> {
        if !self.contains(&[v]) {
            return Err(Error::SimplexNotInComplex);
        }
        let facets = self
            .facets
            .iter()
            .filter(|f| f.contains(&v))
            .cloned()
            .collect();
        Ok(SimplicialComplex {
            vertex_count: self.vertex_count,
            facets,
        })
    }

    /// The join; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let shift = self.vertex_count;
        let left: Vec<Simplex> = if self.facets.is_empty() {
            vec![Vec::new()]
        } else {
            self.facets.clone()
        };
        let right: Vec<Simplex> = if other.facets.is_empty() {
            vec![Vec::new()]
        } else {
            other.facets.clone()
        };
        let mut facets = Vec::with_capacity(left.len() * right.len());
        for a in &left {
            for b in &right {
                facets.push(
                    a.iter()
                        .copied()
                        .chain(b.iter().map(|v| v + shift))
                        .collect(),
                );
            }
        }
        SimplicialComplex::from_maximal(shift + other.vertex_count, facets)
    }

    /// Join of two complexes on disjoint vertex sets of one namespace.
    pub fn join_disjoint(&self, other: &SimplicialComplex) -> Result<SimplicialComplex> {
        let mine: HashSet<usize> = self.vertices().into_iter().collect();
        if other.vertices().iter().any(|v| mine.contains(v)) {
            return Err(Error::Precondition(
                "joined complexes share a vertex".into(),
            ));
        }
        let left: Vec<Simplex> = if self.facets.is_empty() {
            vec![Vec::new()]
        } else {
            self.facets.clone()
        };
        let right: Vec<Simplex> = if other.facets.is_empty() {
            vec![Vec::new()]
        } else {
            other.facets.clone()
        };
        let mut facets = Vec::with_capacity(left.len() * right.len());
        for a in &left {
            for b in &right {
                facets.push(a.iter().chain(b).copied().collect());
            }
        }
        Ok(SimplicialComplex::from_maximal(
            self.vertex_count.max(other.vertex_count),
            facets,
        ))
    }

    /// Join with a point `apex`, which must be a fresh vertex of the namespace.
    pub fn cone_with(&self, apex: usize) -> Result<SimplicialComplex> {
        if apex >= self.vertex_count || self.vertices().contains(&apex) {
            return Err(Error::Precondition("apex must be an unused vertex".into()));
        }
        if self.facets.is_empty() {
            return Ok(SimplicialComplex {
                vertex_count: self.vertex_count,
                facets: vec![vec![apex]],
            });
        }
        let facets = self
            .facets
            .iter()
            .map(|f| f.iter().copied().chain([apex]).collect())
            .collect();
        Ok(SimplicialComplex::from_maximal(self.vertex_count, facets))
    }

    /// Simplices all of whose vertices lie in `keep`.
    pub fn induced(&self, keep: &[usize]) -> SimplicialComplex {
        let keep: HashSet<usize> = keep.iter().copied().collect();
        let pieces = self
            .facets
            .iter()
            .map(|f| f.iter().copied().filter(|v| keep.contains(v)).collect())
            .collect();
        SimplicialComplex::from_maximal(self.vertex_count, pieces)
    }

    /// Simplices common to both complexes (same vertex namespace).
    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut pieces = Vec::new();
        for a in &self.facets {
            for b in &other.facets {
                pieces.push(
                    a.iter()
                        .copied()
                        .filter(|v| b.binary_search(v).is_ok())
                        .collect(),
                );
            }
        }
        SimplicialComplex::from_maximal(self.vertex_count.max(other.vertex_count), pieces)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.facets.iter().all(|f| other.contains(f))
    }

    /// Same simplices, ignoring the namespace size.
    pub fn same_simplices(&self, other: &SimplicialComplex) -> bool {
        self.facets == other.facets
    }

    /// Header line with the vertex count, then one facet per line.
    pub fn export_facets(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count);
        for f in &self.facets {
            let line: Vec<String> = f.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Inverse of [`SimplicialComplex::export_facets`].
    pub fn import_facets(text: &str) -> Result<SimplicialComplex> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing vertex count".into()))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex count {header:?}")))?;
        let mut facets = Vec::new();
        for (i, line) in lines.enumerate() {
            let s = line
                .split_whitespace()
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("line {}: bad vertex {x:?}", i + 2)))
                })
                .collect::<Result<Simplex>>()?;
            facets.push(s);
        }
        SimplicialComplex::new(n, facets)
    }
}

/// Chains of `vertices` under strict inclusion; vertex `i` is `vertices[i]`.
pub fn order_complex(f: &Field, vertices: &[Subspace]) -> SimplicialComplex {
    let n = vertices.len();
    // covers[i]: indices j with vertices[i] < vertices[j] and nothing strictly between
    let above: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    vertices[i].dim() < vertices[j].dim()
                        && vertices[i].is_subspace_of(f, &vertices[j])
                })
                .collect()
        })
        .collect();
    let covers: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            above[i]
                .iter()
                .copied()
                .filter(|&j| {
                    !above[i]
                        .iter()
                        .any(|&m| m != j && above[m].binary_search(&j).is_ok())
                })
                .collect()
        })
        .collect();
    let has_lower: HashSet<usize> = covers.iter().flatten().copied().collect();
    let mut facets = Vec::new();
    let mut stack: Vec<Simplex> = (0..n)
        .filter(|i| !has_lower.contains(i))
        .map(|i| vec![i])
        .collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        if covers[top].is_empty() {
            facets.push(chain);
            continue;
        }
        for &j in &covers[top] {
            let mut next = chain.clone();
            next.push(j);
            stack.push(next);
        }
    }
    SimplicialComplex::from_maximal(n, facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fe;
    use crate::linalg::matrix::unit_vector;

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn order_complex_examples() {
        let f = Field::new(3, 1, 1).unwrap();
        let pts: Vec<Subspace> = (0..3)
            .map(|i| Subspace::point(&f, &unit_vector(3, i)).unwrap())
            .collect();
        let k = order_complex(&f, &pts);
        assert_eq!(k.facets(), &[vec![0], vec![1], vec![2]]);
        let chain = vec![
            pts[0].clone(),
            Subspace::span(&f, 3, &[unit_vector(3, 0), unit_vector(3, 1)]).unwrap(),
        ];
        assert_eq!(order_complex(&f, &chain).facets(), &[vec![0, 1]]);
        let line = Subspace::span(&f, 3, &[vec![Fe(1), Fe(1), Fe(0)], unit_vector(3, 2)]).unwrap();
        let mixed = vec![pts[0].clone(), pts[2].clone(), line];
        assert_eq!(order_complex(&f, &mixed).facets(), &[vec![0], vec![1, 2]]);
    }

    #[test]
    fn link_examples() {
        let s = SimplicialComplex::simplex(2);
        let l = s.link(&[0, 1, 2]).unwrap();
        assert_eq!(l.dim(), -1);
        let t = hollow_triangle();
        assert_eq!(t.link(&[0]).unwrap().facets(), &[vec![1], vec![2]]);
        assert_eq!(t.link(&[0, 1, 2]), Err(Error::SimplexNotInComplex));
        assert_eq!(t.link(&[]).unwrap(), t);
    }

    #[test]
    fn star_examples() {
        let k = SimplicialComplex::new(4, vec![vec![0, 1], vec![1, 2], vec![3]]).unwrap();
        assert_eq!(k.star_closure(3).unwrap().facets(), &[vec![3]]);
        let st = k.star_closure(1).unwrap();
        assert_eq!(st.facets().len(), 2);
        // cone identity
        let link = k.link(&[1]).unwrap();
        assert_eq!(link.cone_with(1).unwrap(), st);
        assert!(k.star_closure(5).is_err());
    }

    #[test]
    fn join_examples() {
        let s0 = SimplicialComplex::new(2, vec![vec![0], vec![1]]).unwrap();
        let square = s0.join(&s0);
        assert_eq!(square.dim(), 1);
        assert_eq!(square.facets().len(), 4);
        let pt = SimplicialComplex::simplex(0);
        let t = hollow_triangle();
        assert_eq!(pt.join(&t).dim(), t.dim() + 1);
        assert_eq!(SimplicialComplex::empty(0).join(&t).facets(), t.facets());
    }

    #[test]
    fn purity_examples() {
        assert_eq!(
            SimplicialComplex::simplex(3).purity_and_dimension(),
            (true, 3)
        );
        let k = SimplicialComplex::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        assert_eq!(k.purity_and_dimension(), (false, 1));
    }

    #[test]
    fn faces_and_euler() {
        let t = hollow_triangle();
        assert_eq!(t.face_counts(), vec![3, 3]);
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(SimplicialComplex::simplex(3).euler_characteristic(), 1);
        // expanding to all simplices and re-extracting facets is the identity
        let all = t.all_simplices();
        assert_eq!(SimplicialComplex::new(3, all).unwrap(), t);
    }

    #[test]
    fn induced_and_intersection() {
        let k = SimplicialComplex::simplex(3);
        assert_eq!(k.induced(&[0, 2]).facets(), &[vec![0, 2]]);
        let a = SimplicialComplex::new(4, vec![vec![0, 1, 2]]).unwrap();
        let b = SimplicialComplex::new(4, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(a.intersection(&b).facets(), &[vec![1, 2]]);
        assert!(a.intersection(&b).is_subcomplex_of(&a));
        assert!(!b.is_subcomplex_of(&a));
    }

    #[test]
    fn export_round_trip() {
        let t = hollow_triangle();
        let text = t.export_facets();
        assert!(text.starts_with("3\n"));
        assert_eq!(SimplicialComplex::import_facets(&text).unwrap(), t);
    }
}
