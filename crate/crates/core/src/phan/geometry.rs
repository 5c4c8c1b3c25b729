use std::collections::BTreeMap;

use rayon::prelude::*;

use super::spec::{PhanFamily, PhanSpec};
use crate::error::{Error, Result};
use crate::linalg::{enumerate_proper_subspaces, is_transversal, Subspace};

/// Least `i` in `0..=t` with `U & V_{i+1} != 0`.
pub fn k_of(spec: &PhanSpec, u: &Subspace) -> Result<usize> {
    if u.is_zero() {
        return Err(Error::Precondition(
            "k is undefined for the zero space".into(),
        ));
    }
    let f = spec.field();
    for i in 0..=spec.t() {
        if !u.meets_trivially(f, spec.flag().member(i + 1))? {
            return Ok(i);
        }
    }
    unreachable!("V_(t+1) = V meets every nonzero subspace")
}

/// Membership in the geometry of `spec`, with `k_U` when it is a member.
pub fn member_k(spec: &PhanSpec, u: &Subspace) -> Option<usize> {
    if u.is_zero() || u.is_full() || u.ambient_dim() != spec.dim() {
        return None;
    }
    let f = spec.field();
    if !is_transversal(f, u, spec.flag()).ok()? {
        return None;
    }
    let k = k_of(spec, u).ok()?;
    let piece = u.intersect(f, spec.flag().member(k + 1)).ok()?;
    spec.forms()[k]
        .is_nondegenerate(f, &piece)
        .ok()?
        .then_some(k)
}

pub fn is_member(spec: &PhanSpec, u: &Subspace) -> bool {
    member_k(spec, u).is_some()
}

pub fn is_family_member(family: &PhanFamily, u: &Subspace) -> bool {
    family.specs().iter().all(|s| is_member(s, u))
}

/// The vertices of the intersection of a family's geometries, in canonical
/// order, each with its `k` value per spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryVertexSet {
    ambient: usize,
    vertices: Vec<Subspace>,
    k_values: Vec<Vec<usize>>,
}

impl GeometryVertexSet {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `k_U` for vertex `index` in spec `spec`.
    pub fn k_value(&self, index: usize, spec: usize) -> usize {
        self.k_values[index][spec]
    }

    pub fn index_of(&self, u: &Subspace) -> Option<usize> {
        self.vertices.binary_search(u).ok()
    }

    pub fn contains(&self, u: &Subspace) -> bool {
        self.index_of(u).is_some()
    }

    /// Vertex counts keyed by dimension.
    pub fn counts_by_dimension(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for v in &self.vertices {
            *out.entry(v.dim()).or_insert(0) += 1;
        }
        out
    }

    pub fn into_vertices(self) -> Vec<Subspace> {
        self.vertices
    }
}

/// All proper non-trivial subspaces lying in every geometry of the family.
pub fn vertices(family: &PhanFamily) -> GeometryVertexSet {
    let candidates = enumerate_proper_subspaces(family.field(), family.dim());
    let found: Vec<(Subspace, Vec<usize>)> = candidates
        .into_par_iter()
        .filter_map(|u| {
            let ks = family
                .specs()
                .iter()
                .map(|s| member_k(s, &u))
                .collect::<Option<Vec<_>>>()?;
            Some((u, ks))
        })
        .collect();
    let mut found = found;
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let (vertices, k_values) = found.into_iter().unzip();
    GeometryVertexSet {
        ambient: family.dim(),
        vertices,
        k_values,
    }
}
