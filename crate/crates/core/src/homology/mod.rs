//! Integral reduced homology through Smith normal form, sphericity at the
//! homology level, and the Cohen-Macaulay link sweep.

mod pi1;
pub mod snf;

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
pub use pi1::{pi1_trivial, Pi1Status};
pub use snf::{
    smith_form, smith_form_dense, smith_form_with, SmithForm, SnfOptions, SparseIntMatrix,
};

/// Rewriting rounds granted to the fundamental-group check.
pub const PI1_BUDGET: usize = 64;

/// `d_k : C_k -> C_{k-1}` for `k = 0..=dim`, where `d_0` is the augmentation
/// onto `C_{-1} = Z`. Rows and columns follow the sorted simplex lists.
pub fn boundary_matrices(k: &SimplicialComplex) -> Vec<SparseIntMatrix> {
    let by_dim = k.simplices_by_dim();
    let mut out = Vec::with_capacity(by_dim.len());
    if by_dim.is_empty() {
        return out;
    }
    let mut aug = SparseIntMatrix::new(1, by_dim[0].len());
    for c in 0..by_dim[0].len() {
        aug.add_entry(0, c, 1);
    }
    out.push(aug);
    for d in 1..by_dim.len() {
        let index: HashMap<&Simplex, usize> = by_dim[d - 1]
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let mut m = SparseIntMatrix::new(by_dim[d - 1].len(), by_dim[d].len());
        for (c, s) in by_dim[d].iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                m.add_entry(index[&face], c, if i % 2 == 0 { 1 } else { -1 });
            }
        }
        out.push(m);
    }
    out
}

fn bigint_lists<S: Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = v
        .iter()
        .map(|l| l.iter().map(BigInt::to_string).collect())
        .collect();
    strings.serialize(s)
}

/// Reduced Betti numbers and torsion in degrees `-1..=dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub dimension: isize,
    pub face_counts: Vec<usize>,
    /// entry `i` is degree `i - 1`
    pub reduced_betti: Vec<usize>,
    /// entry `i` is degree `i - 1`; invariant factors greater than one
    #[serde(serialize_with = "bigint_lists")]
    pub torsion: Vec<Vec<BigInt>>,
    pub euler_characteristic: i64,
    /// `sum (-1)^i b~_i = chi - 1`
    pub euler_consistent: bool,
}

impl HomologyReport {
    pub fn betti(&self, degree: isize) -> usize {
        usize::try_from(degree + 1)
            .ok()
            .and_then(|i| self.reduced_betti.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn torsion_in(&self, degree: isize) -> &[BigInt] {
        usize::try_from(degree + 1)
            .ok()
            .and_then(|i| self.torsion.get(i))
            .map_or(&[], Vec::as_slice)
    }

    /// All reduced homology vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.reduced_betti.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }
}

pub fn reduced_homology(k: &SimplicialComplex) -> HomologyReport {
    reduced_homology_with(k, SnfOptions::default())
}

pub fn reduced_homology_with(k: &SimplicialComplex, opts: SnfOptions) -> HomologyReport {
    let boundaries = boundary_matrices(k);
    let forms: Vec<SmithForm> = boundaries
        .par_iter()
        .map(|m| smith_form_with(m, opts))
        .collect();
    let dim = k.dim();
    let face_counts = k.face_counts();
    // chain group sizes in degrees -1..=dim
    let mut sizes = vec![1usize];
    sizes.extend(face_counts.iter().copied());
    // rank of d_k leaving degree k, for k = -1..=dim+1
    let rank_out = |deg: usize| -> usize {
        if deg == 0 {
            0
        } else {
            forms.get(deg - 1).map_or(0, |s| s.rank)
        }
    };
    let mut reduced_betti = Vec::with_capacity(sizes.len());
    let mut torsion = Vec::with_capacity(sizes.len());
    for (i, &size) in sizes.iter().enumerate() {
        reduced_betti.push(size - rank_out(i) - rank_out(i + 1));
        torsion.push(forms.get(i).map_or_else(Vec::new, SmithForm::torsion));
    }
    let euler_characteristic = k.euler_characteristic();
    let alternating: i64 = reduced_betti
        .iter()
        .enumerate()
        .map(|(i, &b)| if i % 2 == 1 { b as i64 } else { -(b as i64) })
        .sum();
    HomologyReport {
        dimension: dim,
        face_counts,
        reduced_betti,
        torsion,
        euler_characteristic,
        euler_consistent: alternating == euler_characteristic - 1,
    }
}

/// Homology-level certificate for "wedge of `d`-spheres".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphericityVerdict {
    pub target_dimension: isize,
    /// reduced homology vanishes in every degree other than `d`
    pub homology_concentrated: bool,
    pub torsion_free_top: bool,
    pub nonempty: bool,
    pub sphere_count: usize,
    pub pi1: Pi1Status,
    pub spherical: bool,
}

pub fn verdict_from_report(
    k: &SimplicialComplex,
    report: &HomologyReport,
    d: isize,
    check_pi1: bool,
) -> SphericityVerdict {
    let homology_concentrated = (0..report.reduced_betti.len())
        .map(|i| i as isize - 1)
        .filter(|&deg| deg != d)
        .all(|deg| report.betti(deg) == 0 && report.torsion_in(deg).is_empty());
    let torsion_free_top = report.torsion_in(d).is_empty();
    let pi1 = if !check_pi1 {
        Pi1Status::NotRequested
    } else if d < 2 {
        Pi1Status::NotApplicable
    } else {
        pi1_trivial(k, PI1_BUDGET)
    };
    SphericityVerdict {
        target_dimension: d,
        homology_concentrated,
        torsion_free_top,
        nonempty: !k.facets().is_empty(),
        sphere_count: report.betti(d),
        pi1,
        spherical: homology_concentrated && torsion_free_top,
    }
}

pub fn sphericity_verdict(k: &SimplicialComplex, d: isize, check_pi1: bool) -> SphericityVerdict {
    verdict_from_report(k, &reduced_homology(k), d, check_pi1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmReport {
    pub dimension: isize,
    pub simplices_checked: usize,
    pub passed: bool,
    /// simplices (the empty one included) whose link is not spherical of the forced dimension
    pub failures: Vec<Simplex>,
}

/// Every link `lk(s)`, the empty simplex included, must be
/// `(d - |s|)`-spherical at the homology level.
pub fn cohen_macaulay_check(k: &SimplicialComplex) -> Result<CmReport> {
    let (pure, d) = k.purity_and_dimension();
    if !pure {
        return Err(Error::NotPure);
    }
    let simplices = k.all_simplices();
    let mut failures: Vec<Simplex> = simplices
        .par_iter()
        .filter(|s| {
            let link = k.link(s).expect("simplex of k");
            !sphericity_verdict(&link, d - s.len() as isize, false).spherical
        })
        .cloned()
        .collect();
    failures.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(CmReport {
        dimension: d,
        simplices_checked: simplices.len(),
        passed: failures.is_empty(),
        failures,
    })
}
