//! The filtration `Y_0 <= Y_1 <= .. <= Y_n = Gamma` and the per-stage
//! checks that make the sphericity argument go through.
//!
//! `Y_0 = {W : W, <W, p> in Gamma}` and `Y_i` adds the members of dimension
//! `n + 1 - i`. For each added `U` with closed star `A_U` in `Y_i` and
//! `B = Y_{i-1}`, a stage checks:
//!
//! * (a) `A_U & A_U'` lies in `B` for `U != U'`;
//! * (b) `A_U` is the cone from `U` over its link;
//! * (c) `A_U & B` is the join of `Y_{i-1}^{<U}` and `Y_{i-1}^{>U}` and is
//!   `(n-2)`-spherical;
//! * (d) `Y_{i-1}^{>U} = Gamma^{>U}`, and `Y_{i-1}^{<U} = Y_0^{<U}` equals the
//!   intersection geometry of the restricted family on `U`.
//!
//! Reduced homology then has to add up:
//! `b_{n-1}(Y_i) = b_{n-1}(Y_{i-1}) + sum_U b_{n-2}(A_U & B)`.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{order_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::forms::find_nonisotropic_pair;
use crate::homology::{reduced_homology, verdict_from_report};
use crate::linalg::Subspace;
use crate::phan::io::describe_subspace;
use crate::phan::{is_family_member, vertices, DeltaBranch, DeltaContext, PhanFamily};

/// What each check certifies in place of the topological statement it stands for.
pub const SURROGATES: &[&str] = &[
    "a: pairwise intersections of closed stars lie in Y_(i-1), compared simplex by simplex",
    "b: each closed star equals the cone from its vertex over the link (structural; stands in for contractibility)",
    "c: star-intersection equals the join of the below and above sets and has reduced homology concentrated in degree n-2, torsion-free",
    "d: above set equals Gamma above U; below set equals Y_0 below U and the vertex set of the restricted family",
    "y0: Y_0 is acyclic over the integers and closed under U -> <U, p> (stands in for the deformation retractions)",
    "mv: reduced Betti numbers in degree n-1 add up stage by stage as the Mayer-Vietoris sequence predicts",
];

/// The first point non-isotropic for the top form of every spec.
pub fn choose_pivot(family: &PhanFamily) -> Result<Subspace> {
    let f = family.field();
    let tops: Vec<_> = family
        .specs()
        .iter()
        .map(|s| s.top_form().clone())
        .collect();
    match find_nonisotropic_pair(f, &tops)? {
        Some((v, _)) => Subspace::point(f, &v),
        None => Err(Error::NotFound(
            "no point is non-isotropic for every top form".into(),
        )),
    }
}

#[derive(Clone, Debug)]
pub struct FiltrationState {
    family: PhanFamily,
    p: Subspace,
    gamma: Vec<Subspace>,
    complex: SimplicialComplex,
    /// `stages[i]` lists the vertex indices of `Y_i`, sorted
    stages: Vec<Vec<usize>>,
}

impl FiltrationState {
    pub fn family(&self) -> &PhanFamily {
        &self.family
    }

    pub fn pivot(&self) -> &Subspace {
        &self.p
    }

    pub fn gamma(&self) -> &[Subspace] {
        &self.gamma
    }

    /// Order complex of `Gamma`; vertex `i` is `gamma()[i]`.
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn stage(&self, i: usize) -> &[usize] {
        &self.stages[i]
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    pub fn stage_subspaces(&self, i: usize) -> Vec<Subspace> {
        self.stages[i]
            .iter()
            .map(|&v| self.gamma[v].clone())
            .collect()
    }

    pub fn stage_complex(&self, i: usize) -> SimplicialComplex {
        self.complex.induced(&self.stages[i])
    }
}

pub fn build_filtration(family: &PhanFamily, p: &Subspace) -> Result<FiltrationState> {
    let f = family.field();
    if p.dim() != 1 || p.ambient_dim() != family.dim() {
        return Err(Error::Precondition("the pivot must be a point of V".into()));
    }
    let gamma = vertices(family).into_vertices();
    let complex = order_complex(f, &gamma);
    let n = family.n();
    let mut y0 = Vec::new();
    for (i, w) in gamma.iter().enumerate() {
        if is_family_member(family, &w.sum(f, p)?) {
            y0.push(i);
        }
    }
    let mut stages = vec![y0];
    for i in 1..=n {
        let mut next: Vec<usize> = stages[i - 1].clone();
        next.extend((0..gamma.len()).filter(|&v| gamma[v].dim() == n + 1 - i));
        next.sort_unstable();
        next.dedup();
        stages.push(next);
    }
    Ok(FiltrationState {
        family: family.clone(),
        p: p.clone(),
        gamma,
        complex,
        stages,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCheck {
    pub vertex: String,
    pub cone: bool,
    pub join_equal: bool,
    pub intersection_spherical: bool,
    pub intersection_sphere_count: usize,
    pub above_equal: bool,
    pub below_equal_y0: bool,
    /// `None` when the restricted family is not defined because nothing lies below `U`
    pub below_equal_restriction: Option<bool>,
    pub branches: Vec<DeltaBranch>,
    pub witnesses: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub added_dimension: usize,
    pub added: usize,
    pub pairwise_in_base: bool,
    pub pairwise_witness: Option<String>,
    pub vertices: Vec<VertexCheck>,
    pub betti_before: usize,
    pub betti_after: usize,
    pub intersection_sum: usize,
    pub mayer_vietoris_balanced: bool,
    pub passed: bool,
}

fn below(gamma: &[Subspace], set: &[usize], u: &Subspace, f: &crate::field::Field) -> Vec<usize> {
    set.iter()
        .copied()
        .filter(|&v| gamma[v].dim() < u.dim() && gamma[v].is_subspace_of(f, u))
        .collect()
}

fn above(gamma: &[Subspace], set: &[usize], u: &Subspace, f: &crate::field::Field) -> Vec<usize> {
    set.iter()
        .copied()
        .filter(|&v| gamma[v].dim() > u.dim() && u.is_subspace_of(f, &gamma[v]))
        .collect()
}

/// Checks stage `i` (`1 <= i <= n`). `ctx` is `None` when the restricted
/// families cannot be formed (the pivot is degenerate), which fails check (d).
pub fn verify_stage(
    state: &FiltrationState,
    i: usize,
    ctx: Option<&DeltaContext>,
) -> Result<StageReport> {
    let n = state.family.n();
    if i == 0 || i > n {
        return Err(Error::Precondition(format!("stage {i} outside 1..={n}")));
    }
    let f = state.family.field();
    let gamma = &state.gamma;
    let prev = &state.stages[i - 1];
    let prev_set: HashSet<usize> = prev.iter().copied().collect();
    let added: Vec<usize> = state.stages[i]
        .iter()
        .copied()
        .filter(|v| !prev_set.contains(v))
        .collect();
    let yi = state.stage_complex(i);
    let base = state.stage_complex(i - 1);
    let all: Vec<usize> = (0..gamma.len()).collect();

    let stars: Vec<SimplicialComplex> = added
        .iter()
        .map(|&u| yi.star_closure(u))
        .collect::<Result<_>>()?;

    // (a)
    let mut pairwise_witness = None;
    'outer: for a in 0..added.len() {
        for b in a + 1..added.len() {
            let meet = stars[a].intersection(&stars[b]);
            if !meet.is_subcomplex_of(&base) {
                pairwise_witness = Some(format!(
                    "{} and {}",
                    describe_subspace(f, &gamma[added[a]]),
                    describe_subspace(f, &gamma[added[b]])
                ));
                break 'outer;
            }
        }
    }

    let target = n as isize - 2;
    let y0 = &state.stages[0];
    let checks: Vec<VertexCheck> = added
        .par_iter()
        .zip(stars.par_iter())
        .map(|(&u, star)| {
            let us = &gamma[u];
            let mut witnesses = Vec::new();
            // (b)
            let link = yi.link(&[u]).expect("vertex of Y_i");
            let cone = star.facets().iter().all(|fct| fct.contains(&u))
                && link.cone_with(u).is_ok_and(|c| c.same_simplices(star));
            if !cone {
                witnesses.push("closed star is not a cone over the link".to_string());
            }
            // (c)
            let meet = star.intersection(&base);
            let below_prev = below(gamma, prev, us, f);
            let above_prev = above(gamma, prev, us, f);
            let join = base
                .induced(&below_prev)
                .join_disjoint(&base.induced(&above_prev))
                .expect("disjoint by dimension");
            let join_equal = join.same_simplices(&meet);
            if !join_equal {
                witnesses
                    .push("star intersection differs from the join of below and above".to_string());
            }
            let report = reduced_homology(&meet);
            let verdict = verdict_from_report(&meet, &report, target, false);
            if !verdict.spherical {
                witnesses.push(format!(
                    "star intersection is not {target}-spherical: betti {:?}",
                    report.reduced_betti
                ));
            }
            // (d)
            let above_gamma = above(gamma, &all, us, f);
            let above_equal = above_prev == above_gamma;
            if !above_equal {
                witnesses.push("above set differs from Gamma above U".to_string());
            }
            let below_y0 = below(gamma, y0, us, f);
            let below_equal_y0 = below_prev == below_y0;
            if !below_equal_y0 {
                witnesses.push("below set differs from Y_0 below U".to_string());
            }
            let mut branches = Vec::new();
            let below_equal_restriction = match ctx {
                None => {
                    witnesses
                        .push("restricted family unavailable: pivot is degenerate".to_string());
                    Some(false)
                }
                Some(ctx) => match ctx.restrict(us) {
                    Ok(d) => {
                        branches = d.branches().to_vec();
                        let mut got = d.ambient_vertices().expect("local vertices lift");
                        got.sort();
                        let want: Vec<Subspace> =
                            below_y0.iter().map(|&v| gamma[v].clone()).collect();
                        let eq = got == want;
                        if !eq {
                            witnesses.push(format!(
                                "restricted family has {} vertices, Y_0 below U has {}",
                                got.len(),
                                want.len()
                            ));
                        }
                        Some(eq)
                    }
                    Err(Error::Precondition(msg))
                        if msg.contains("no members below") || msg.contains("U is a point") =>
                    {
                        if !below_y0.is_empty() {
                            witnesses.push(
                                "nothing below U in Gamma, yet Y_0 below U is nonempty".to_string(),
                            );
                        }
                        None
                    }
                    Err(e) => {
                        witnesses.push(format!("restricted family failed: {e}"));
                        Some(false)
                    }
                },
            };
            let passed = cone
                && join_equal
                && verdict.spherical
                && above_equal
                && below_equal_y0
                && below_equal_restriction.unwrap_or(below_y0.is_empty());
            VertexCheck {
                vertex: describe_subspace(f, us),
                cone,
                join_equal,
                intersection_spherical: verdict.spherical,
                intersection_sphere_count: verdict.sphere_count,
                above_equal,
                below_equal_y0,
                below_equal_restriction,
                branches,
                witnesses,
                passed,
            }
        })
        .collect();

    let top = n as isize - 1;
    let betti_before = reduced_homology(&base).betti(top);
    let betti_after = reduced_homology(&yi).betti(top);
    let intersection_sum: usize = checks.iter().map(|c| c.intersection_sphere_count).sum();
    let mayer_vietoris_balanced = betti_after == betti_before + intersection_sum;
    let passed =
        pairwise_witness.is_none() && checks.iter().all(|c| c.passed) && mayer_vietoris_balanced;
    Ok(StageReport {
        stage: i,
        added_dimension: n + 1 - i,
        added: added.len(),
        pairwise_in_base: pairwise_witness.is_none(),
        pairwise_witness,
        vertices: checks,
        betti_before,
        betti_after,
        intersection_sum,
        mayer_vietoris_balanced,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Y0Report {
    pub size: usize,
    pub acyclic: bool,
    pub reduced_betti: Vec<usize>,
    /// `U -> <U, p>` maps `Y_0` into itself
    pub closed_under_join_with_pivot: bool,
    /// the members of `Y_0` containing `p` form a cone with apex `p`
    pub pivot_cone: bool,
    pub witness: Option<String>,
    pub passed: bool,
}

pub fn verify_y0_contractible(state: &FiltrationState) -> Result<Y0Report> {
    let f = state.family.field();
    let y0 = &state.stages[0];
    let set: HashSet<usize> = y0.iter().copied().collect();
    let index = |s: &Subspace| state.gamma.binary_search(s).ok();
    let mut witness = None;
    let mut closed = true;
    for &v in y0 {
        let joined = state.gamma[v].sum(f, &state.p)?;
        if !index(&joined).is_some_and(|j| set.contains(&j)) {
            closed = false;
            witness = Some(format!(
                "<U, p> leaves Y_0 for U = {}",
                describe_subspace(f, &state.gamma[v])
            ));
            break;
        }
    }
    let through_p: Vec<usize> = y0
        .iter()
        .copied()
        .filter(|&v| state.p.is_subspace_of(f, &state.gamma[v]))
        .collect();
    let pivot_cone = match index(&state.p) {
        Some(apex) if set.contains(&apex) => {
            let sub = state.complex.induced(&through_p);
            sub.facets().iter().all(|fct| fct.contains(&apex))
        }
        _ => {
            if witness.is_none() {
                witness = Some("the pivot is not a vertex of Y_0".into());
            }
            false
        }
    };
    let report = reduced_homology(&state.stage_complex(0));
    let acyclic = report.is_acyclic();
    if !acyclic && witness.is_none() {
        witness = Some(format!(
            "Y_0 has reduced Betti numbers {:?}",
            report.reduced_betti
        ));
    }
    Ok(Y0Report {
        size: y0.len(),
        acyclic,
        reduced_betti: report.reduced_betti,
        closed_under_join_with_pivot: closed,
        pivot_cone,
        witness,
        passed: acyclic && closed && pivot_cone,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub pivot: String,
    pub pivot_valid: bool,
    pub stage_sizes: Vec<usize>,
    pub y0: Y0Report,
    pub stages: Vec<StageReport>,
    /// `b_{n-1}(Y_0)` plus the stage contributions
    pub predicted_sphere_count: usize,
    /// `b_{n-1}(Gamma)` from a direct homology run
    pub direct_sphere_count: usize,
    pub counts_agree: bool,
    pub surrogates: Vec<String>,
    pub passed: bool,
}

/// Builds the filtration from `p` and runs every check.
pub fn verify_filtration(family: &PhanFamily, p: &Subspace) -> Result<FiltrationReport> {
    let f = family.field();
    let state = build_filtration(family, p)?;
    // the pivot is already known to be a point, so failure here means it is isotropic
    let ctx = DeltaContext::new(family, p).ok();
    let pivot_valid = ctx.is_some();
    let y0 = verify_y0_contractible(&state)?;
    let n = family.n();
    let stages = (1..=n)
        .map(|i| verify_stage(&state, i, ctx.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let top = n as isize - 1;
    let predicted_sphere_count = reduced_homology(&state.stage_complex(0)).betti(top)
        + stages.iter().map(|s| s.intersection_sum).sum::<usize>();
    let direct_sphere_count = reduced_homology(state.complex()).betti(top);
    let counts_agree = predicted_sphere_count == direct_sphere_count;
    let passed = pivot_valid && y0.passed && stages.iter().all(|s| s.passed) && counts_agree;
    Ok(FiltrationReport {
        pivot: describe_subspace(f, p),
        pivot_valid,
        stage_sizes: state.stages.iter().map(Vec::len).collect(),
        y0,
        stages,
        predicted_sphere_count,
        direct_sphere_count,
        counts_agree,
        surrogates: SURROGATES.iter().map(|s| s.to_string()).collect(),
        passed,
    })
}

/// A point isotropic for the top form of some spec, for negative controls.
pub fn degenerate_pivot(family: &PhanFamily) -> Option<Subspace> {
    let f = family.field();
    Subspace::full(family.dim())
        .points(f)
        .into_iter()
        .find(|p| {
            family.specs().iter().any(|s| {
                !s.top_form()
                    .is_nonisotropic(f, &p.basis()[0])
                    .unwrap_or(true)
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fe, Field};
    use crate::phan::PhanSpec;

    #[test]
    fn pivot_examples() {
        let f = Field::new(5, 1, 1).unwrap();
        let fam = PhanFamily::single(PhanSpec::standard(&f, 3));
        let p = choose_pivot(&fam).unwrap();
        assert_eq!(p.basis()[0], vec![Fe::ONE, Fe::ZERO, Fe::ZERO]);
        let f9 = Field::new(3, 2, 2).unwrap();
        assert!(choose_pivot(&PhanFamily::single(PhanSpec::standard(&f9, 3))).is_ok());
    }

    #[test]
    fn filtration_shape() {
        let f = Field::new(5, 1, 1).unwrap();
        let fam = PhanFamily::single(PhanSpec::standard(&f, 3));
        let p = choose_pivot(&fam).unwrap();
        let state = build_filtration(&fam, &p).unwrap();
        assert_eq!(state.stage(2).len(), state.gamma().len());
        let y0 = state.stage_subspaces(0);
        for w in state.gamma() {
            if p.is_subspace_of(&f, w) {
                assert!(y0.contains(w));
            }
        }
        for i in 1..state.stage_count() {
            assert!(state
                .stage(i - 1)
                .iter()
                .all(|v| state.stage(i).contains(v)));
            for &v in state.stage(i) {
                if !state.stage(i - 1).contains(&v) {
                    assert_eq!(state.gamma()[v].dim(), 3 - i);
                }
            }
        }
    }

    #[test]
    fn t0_filtration_passes() {
        let f = Field::new(5, 1, 1).unwrap();
        let fam = PhanFamily::single(PhanSpec::standard(&f, 3));
        let p = choose_pivot(&fam).unwrap();
        let r = verify_filtration(&fam, &p).unwrap();
        assert!(r.passed, "{r:#?}");
        assert!(r.direct_sphere_count > 0);
    }

    #[test]
    fn degenerate_pivot_fails_with_witness() {
        let f = Field::new(5, 1, 1).unwrap();
        let fam = PhanFamily::single(PhanSpec::standard(&f, 3));
        let p = degenerate_pivot(&fam).unwrap();
        let r = verify_filtration(&fam, &p).unwrap();
        assert!(!r.passed);
        assert!(!r.pivot_valid);
        let witnessed = r.y0.witness.is_some()
            || r.stages.iter().any(|s| {
                s.pairwise_witness.is_some() || s.vertices.iter().any(|v| !v.witnesses.is_empty())
            });
        assert!(witnessed);
    }
}
