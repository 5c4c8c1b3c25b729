use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::{self, combine, is_zero_vector, left_kernel, rref, Matrix, Vector};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// A subspace of `F_q^ambient`, stored by its reduced row-echelon basis.
///
/// Equality is equality of canonical bases. The ordering (used for every
/// deterministic enumeration) is by dimension, then pivot columns, then the
/// basis entries in field-index order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    pivots: Vec<usize>,
    basis: Matrix,
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then(self.dim().cmp(&other.dim()))
            .then_with(|| self.pivots.cmp(&other.pivots))
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch(format!(
            "subspaces of F^{} and F^{}",
            a.ambient, b.ambient
        )));
    }
    Ok(())
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            pivots: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            pivots: (0..ambient).collect(),
            basis: matrix::identity(ambient),
        }
    }

    /// Span of `vectors`, each of length `ambient`.
    pub fn span(f: &Field, ambient: usize, vectors: &[Vector]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in F^{ambient}",
                v.len()
            )));
        }
        let (basis, pivots) = rref(f, vectors.to_vec(), ambient);
        Ok(Subspace {
            ambient,
            pivots,
            basis,
        })
    }

    /// Wraps rows already in reduced echelon form.
    pub(crate) fn from_rref_unchecked(ambient: usize, basis: Matrix, pivots: Vec<usize>) -> Self {
        Subspace {
            ambient,
            pivots,
            basis,
        }
    }

    pub fn point(f: &Field, v: &[Fe]) -> Result<Self> {
        if is_zero_vector(v) {
            return Err(Error::Precondition("a point needs a nonzero vector".into()));
        }
        Subspace::span(f, v.len(), &[v.to_vec()])
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Coordinates of `v` with respect to the canonical basis, or `None` if
    /// `v` is not in the subspace.
    pub fn coordinates(&self, f: &Field, v: &[Fe]) -> Option<Vector> {
        if v.len() != self.ambient {
            return None;
        }
        let coords: Vector = self.pivots.iter().map(|&p| v[p]).collect();
        let back = combine(f, &coords, &self.basis, self.ambient);
        (back == v).then_some(coords)
    }

    pub fn contains_vector(&self, f: &Field, v: &[Fe]) -> bool {
        self.coordinates(f, v).is_some()
    }

    /// Vector with the given coordinates in the canonical basis.
    pub fn vector_from_coordinates(&self, f: &Field, coords: &[Fe]) -> Vector {
        combine(f, coords, &self.basis, self.ambient)
    }

    pub fn is_subspace_of(&self, f: &Field, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && self.basis.iter().all(|v| other.contains_vector(f, v))
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        check_ambient(self, other)?;
        let rows: Matrix = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(f, self.ambient, &rows)
    }

    /// `dim(self + other)` without building the sum.
    pub fn sum_dim(&self, f: &Field, other: &Subspace) -> Result<usize> {
        check_ambient(self, other)?;
        let rows: Matrix = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(matrix::rank(f, rows, self.ambient))
    }

    pub fn intersect(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        check_ambient(self, other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        // (a, b) with a*A + b*B = 0 gives a*A in both
        let stacked: Matrix = self.basis.iter().chain(&other.basis).cloned().collect();
        let ker = left_kernel(f, &stacked, stacked.len(), self.ambient);
        let vectors: Vec<Vector> = ker
            .iter()
            .map(|k| combine(f, &k[..self.dim()], &self.basis, self.ambient))
            .collect();
        Subspace::span(f, self.ambient, &vectors)
    }

    pub fn intersection_dim(&self, f: &Field, other: &Subspace) -> Result<usize> {
        Ok(self.dim() + other.dim() - self.sum_dim(f, other)?)
    }

    pub fn meets_trivially(&self, f: &Field, other: &Subspace) -> Result<bool> {
        Ok(self.sum_dim(f, other)? == self.dim() + other.dim())
    }

    /// Expresses `sub` (a subspace of `self`) in coordinates of the canonical
    /// basis of `self`, as a subspace of `F^{dim self}`.
    pub fn to_local(&self, f: &Field, sub: &Subspace) -> Result<Subspace> {
        let mut coords = Vec::with_capacity(sub.dim());
        for v in &sub.basis {
            coords.push(
                self.coordinates(f, v)
                    .ok_or(Error::NotContained("subspace", "the ambient subspace"))?,
            );
        }
        Subspace::span(f, self.dim(), &coords)
    }

    /// Inverse of [`Subspace::to_local`].
    pub fn from_local(&self, f: &Field, local: &Subspace) -> Result<Subspace> {
        if local.ambient != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "local subspace of F^{} inside a {}-dimensional space",
                local.ambient,
                self.dim()
            )));
        }
        let vectors: Vec<Vector> = local
            .basis
            .iter()
            .map(|c| self.vector_from_coordinates(f, c))
            .collect();
        Subspace::span(f, self.ambient, &vectors)
    }

    /// All normalized nonzero vectors (one per point) in canonical order.
    pub fn points(&self, f: &Field) -> Vec<Subspace> {
        super::enumerate::enumerate_subspaces(f, self.dim(), 1)
            .into_iter()
            .map(|local| {
                self.from_local(f, &local)
                    .expect("local point lies in the subspace")
            })
            .collect()
    }
}

/// `A` and `B` are opposite when `V = A (+) B`.
pub fn is_opposite(f: &Field, a: &Subspace, b: &Subspace) -> Result<bool> {
    check_ambient(a, b)?;
    Ok(a.dim() + b.dim() == a.ambient && a.sum_dim(f, b)? == a.ambient)
}

/// A chain `{0} = V_0 < V_1 < .. < V_{t+1} = V` with strict inclusions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Flag {
    members: Vec<Subspace>,
}

impl Flag {
    pub fn new(f: &Field, members: Vec<Subspace>) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::InvalidFlag("a flag needs at least {0} and V".into()));
        }
        let ambient = members[0].ambient;
        if !members[0].is_zero() {
            return Err(Error::InvalidFlag(
                "first member must be the zero space".into(),
            ));
        }
        if !members.last().unwrap().is_full() {
            return Err(Error::InvalidFlag(
                "last member must be the whole space".into(),
            ));
        }
        for (i, w) in members.windows(2).enumerate() {
            check_ambient(&w[0], &w[1])?;
            if w[0].dim() >= w[1].dim() || !w[0].is_subspace_of(f, &w[1]) {
                return Err(Error::InvalidFlag(format!(
                    "member {i} is not strictly contained in member {}",
                    i + 1
                )));
            }
        }
        debug_assert!(members.iter().all(|m| m.ambient == ambient));
        Ok(Flag { members })
    }

    /// Flag `{0} < inner.. < V`.
    pub fn from_inner(f: &Field, ambient: usize, inner: Vec<Subspace>) -> Result<Self> {
        let mut members = Vec::with_capacity(inner.len() + 2);
        members.push(Subspace::zero(ambient));
        members.extend(inner);
        members.push(Subspace::full(ambient));
        Flag::new(f, members)
    }

    pub fn trivial(ambient: usize) -> Self {
        Flag {
            members: vec![Subspace::zero(ambient), Subspace::full(ambient)],
        }
    }

    /// The standard full flag `<e_1> < <e_1, e_2> < ..`.
    pub fn standard_chamber(ambient: usize) -> Self {
        let members = (0..=ambient)
            .map(|k| {
                Subspace::from_rref_unchecked(
                    ambient,
                    (0..k).map(|i| matrix::unit_vector(ambient, i)).collect(),
                    (0..k).collect(),
                )
            })
            .collect();
        Flag { members }
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Subspace {
        &self.members[i]
    }

    /// `t`, where the flag is `V_0 < .. < V_{t+1}`.
    pub fn t(&self) -> usize {
        self.members.len() - 2
    }

    pub fn ambient_dim(&self) -> usize {
        self.members[0].ambient
    }

    /// Whether `c` is comparable with every member.
    pub fn is_incident(&self, f: &Field, c: &Subspace) -> bool {
        self.members
            .iter()
            .all(|b| c.is_subspace_of(f, b) || b.is_subspace_of(f, c))
    }
}

/// `A` is transversal to `F` if every member `B` has `A & B = 0` or `A + B = V`.
pub fn is_transversal(f: &Field, a: &Subspace, flag: &Flag) -> Result<bool> {
    for b in flag.members() {
        let s = a.sum_dim(f, b)?;
        if s != a.ambient && s != a.dim() + b.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How complements are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplementPolicy {
    /// Greedy extension by the canonical basis of the enclosing space.
    Greedy,
    /// Random vectors drawn from a seeded generator.
    Random(u64),
}

/// A complement `C` of `a` inside `within`: `a (+) C = within`.
///
/// Greedy over the canonical basis of `within`, so deterministic.
pub fn complement(f: &Field, a: &Subspace, within: &Subspace) -> Result<Subspace> {
    if !a.is_subspace_of(f, within) {
        return Err(Error::NotContained("subspace", "the enclosing space"));
    }
    let mut current = a.clone();
    let mut chosen = Vec::new();
    for v in within.basis() {
        if current.dim() == within.dim() {
            break;
        }
        if !current.contains_vector(f, v) {
            chosen.push(v.clone());
            current = current.sum(f, &Subspace::span(f, a.ambient, &[v.clone()])?)?;
        }
    }
    Subspace::span(f, a.ambient, &chosen)
}

/// A complement built from random vectors of `within`.
pub fn random_complement<R: Rng>(
    f: &Field,
    a: &Subspace,
    within: &Subspace,
    rng: &mut R,
) -> Result<Subspace> {
    if !a.is_subspace_of(f, within) {
        return Err(Error::NotContained("subspace", "the enclosing space"));
    }
    let q = f.order();
    let mut current = a.clone();
    let mut chosen: Vec<Vector> = Vec::new();
    while current.dim() < within.dim() {
        let coeffs: Vector = (0..within.dim())
            .map(|_| Fe(rng.gen_range(0..q) as u32))
            .collect();
        let v = within.vector_from_coordinates(f, &coeffs);
        if !current.contains_vector(f, &v) {
            current = current.sum(f, &Subspace::span(f, a.ambient, &[v.clone()])?)?;
            chosen.push(v);
        }
    }
    Subspace::span(f, a.ambient, &chosen)
}

pub fn complement_with(
    f: &Field,
    a: &Subspace,
    within: &Subspace,
    policy: ComplementPolicy,
    salt: u64,
) -> Result<Subspace> {
    match policy {
        ComplementPolicy::Greedy => complement(f, a, within),
        ComplementPolicy::Random(seed) => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(
                seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15),
            );
            random_complement(f, a, within, &mut rng)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::unit_vector;

    fn e(n: usize, i: usize) -> Vector {
        unit_vector(n, i)
    }

    #[test]
    fn lattice_examples() {
        let f = Field::new(2, 1, 1).unwrap();
        let a = Subspace::span(&f, 3, &[e(3, 0), e(3, 1)]).unwrap();
        let b = Subspace::span(&f, 3, &[e(3, 1), e(3, 2)]).unwrap();
        assert_eq!(
            a.intersect(&f, &b).unwrap(),
            Subspace::span(&f, 3, &[e(3, 1)]).unwrap()
        );
        assert_eq!(a.intersect(&f, &a).unwrap(), a);
        assert_eq!(a.sum(&f, &Subspace::zero(3)).unwrap(), a);
        assert!(a.sum(&f, &Subspace::zero(4)).is_err());
    }

    #[test]
    fn opposite_examples() {
        let f = Field::new(3, 1, 1).unwrap();
        let a = Subspace::span(&f, 3, &[e(3, 0)]).unwrap();
        let b = Subspace::span(&f, 3, &[e(3, 1), e(3, 2)]).unwrap();
        assert!(is_opposite(&f, &a, &b).unwrap());
        assert!(!is_opposite(&f, &b, &b).unwrap());
        assert!(is_opposite(&f, &Subspace::zero(3), &Subspace::full(3)).unwrap());
    }

    #[test]
    fn transversal_examples() {
        let f = Field::new(3, 1, 1).unwrap();
        let a = Subspace::span(&f, 3, &[e(3, 0)]).unwrap();
        assert!(is_transversal(&f, &a, &Flag::trivial(3)).unwrap());
        let b = Subspace::span(&f, 3, &[e(3, 0), e(3, 1)]).unwrap();
        let flag = Flag::from_inner(&f, 3, vec![b]).unwrap();
        assert!(!is_transversal(&f, &a, &flag).unwrap());
        assert!(is_transversal(&f, &Subspace::full(3), &flag).unwrap());
    }

    #[test]
    fn complement_examples() {
        let f = Field::new(2, 1, 1).unwrap();
        let v = Subspace::full(3);
        assert_eq!(complement(&f, &v, &v).unwrap(), Subspace::zero(3));
        assert_eq!(complement(&f, &Subspace::zero(3), &v).unwrap(), v);
        let a = Subspace::span(&f, 3, &[e(3, 0)]).unwrap();
        let c = complement(&f, &a, &v).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(is_opposite(&f, &a, &c).unwrap());
        let b = Subspace::span(&f, 3, &[e(3, 1)]).unwrap();
        assert!(matches!(
            complement(&f, &a, &b),
            Err(Error::NotContained(..))
        ));
    }

    #[test]
    fn flag_validation() {
        let f = Field::new(2, 1, 1).unwrap();
        let a = Subspace::span(&f, 3, &[e(3, 0)]).unwrap();
        let b = Subspace::span(&f, 3, &[e(3, 1), e(3, 2)]).unwrap();
        assert!(Flag::from_inner(&f, 3, vec![a.clone(), b]).is_err());
        assert!(Flag::from_inner(&f, 3, vec![a.clone(), a]).is_err());
        assert_eq!(Flag::standard_chamber(3).t(), 2);
    }

    #[test]
    fn local_coordinates_round_trip() {
        let f = Field::new(5, 1, 1).unwrap();
        let u = Subspace::span(
            &f,
            4,
            &[
                vec![Fe(1), Fe(2), Fe(0), Fe(3)],
                vec![Fe(0), Fe(1), Fe(4), Fe(4)],
            ],
        )
        .unwrap();
        for w in crate::linalg::enumerate_subspaces(&f, 2, 1) {
            let global = u.from_local(&f, &w).unwrap();
            assert!(global.is_subspace_of(&f, &u));
            assert_eq!(u.to_local(&f, &global).unwrap(), w);
        }
    }
}
