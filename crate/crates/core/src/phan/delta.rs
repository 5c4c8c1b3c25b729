use serde::Serialize;

use super::geometry::{member_k, vertices};
use super::residue::{below_spec, localize_form};
use super::spec::{PhanFamily, PhanSpec};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::forms::{extend_forms_with, project_form, HermitianForm};
use crate::linalg::{ComplementPolicy, Subspace};

/// How the base of the flag `{<V_i, p> & U}` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaCase {
    /// `<V_k, p> & U` is a point; it becomes the first flag member.
    OneDimensional,
    /// `<V_k, p> & U = 0` and the projected form is non-degenerate on `<V_{k+1}, p> & U`.
    Nondegenerate,
    /// `<V_k, p> & U = 0` and the projected form has a one-dimensional radical `R`,
    /// inserted as an extra flag member.
    Radical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaBranch {
    pub spec: usize,
    pub k: usize,
    pub l: usize,
    pub case: DeltaCase,
}

/// Extended and projected forms of a family for a fixed point `p`.
#[derive(Clone, Debug)]
pub struct DeltaContext {
    family: PhanFamily,
    p: Subspace,
    projected: Vec<Vec<HermitianForm>>,
    filler: Fe,
}

impl DeltaContext {
    pub fn new(family: &PhanFamily, p: &Subspace) -> Result<Self> {
        DeltaContext::with_policy(family, p, ComplementPolicy::Greedy)
    }

    pub fn with_policy(
        family: &PhanFamily,
        p: &Subspace,
        policy: ComplementPolicy,
    ) -> Result<Self> {
        let f = family.field();
        if p.dim() != 1 || p.ambient_dim() != family.dim() {
            return Err(Error::Precondition("p must be a point of V".into()));
        }
        let mut projected = Vec::with_capacity(family.m());
        for spec in family.specs() {
            let ext = extend_forms_with(f, spec.flag(), spec.forms(), p, policy)?;
            projected.push(
                ext.iter()
                    .map(|w| project_form(f, w, p))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(DeltaContext {
            family: family.clone(),
            p: p.clone(),
            projected,
            filler: Fe::ONE,
        })
    }

    /// Gram entry used for the form on one-dimensional flag members; must be
    /// nonzero and fixed by sigma.
    pub fn with_filler(mut self, c: Fe) -> Result<Self> {
        let f = self.family.field();
        if c.is_zero() || !f.is_sigma_fixed(c) {
            return Err(Error::Precondition(
                "filler must be a nonzero sigma-fixed element".into(),
            ));
        }
        self.filler = c;
        Ok(self)
    }

    pub fn point(&self) -> &Subspace {
        &self.p
    }

    /// Projected extended forms `omega_i^p` of spec `j`.
    pub fn projected_forms(&self, j: usize) -> &[HermitianForm] {
        &self.projected[j]
    }

    /// Specs on `U` whose intersection geometry is `{W < U : W, <W, p> in the family}`.
    pub fn restrict(&self, u: &Subspace) -> Result<DeltaRestriction> {
        let f = self.family.field();
        if self.p.is_subspace_of(f, u) {
            return Err(Error::Precondition("p lies in U".into()));
        }
        let mut specs: Vec<PhanSpec> = Vec::new();
        let mut branches = Vec::new();
        for (j, spec) in self.family.specs().iter().enumerate() {
            let below = below_spec(spec, u)?;
            if u.dim() < 2 || vertices(&PhanFamily::single(below.clone())).is_empty() {
                return Err(Error::Precondition(format!(
                    "spec {j} has no members below U"
                )));
            }
            let (delta, branch) = self.delta_spec(f, j, spec, u)?;
            branches.push(branch);
            for s in [below, delta] {
                if !specs.contains(&s) {
                    specs.push(s);
                }
            }
        }
        Ok(DeltaRestriction {
            u: u.clone(),
            family: PhanFamily::new(specs)?,
            branches,
        })
    }

    fn delta_spec(
        &self,
        f: &Field,
        j: usize,
        spec: &PhanSpec,
        u: &Subspace,
    ) -> Result<(PhanSpec, DeltaBranch)> {
        let k = member_k(spec, u).ok_or(Error::NotMember)?;
        let t = spec.t();
        let g: Vec<Subspace> = (0..=t + 1)
            .map(|i| spec.flag().member(i).sum(f, &self.p)?.intersect(f, u))
            .collect::<Result<_>>()?;
        let l = (0..=t + 1)
            .find(|&i| &g[i] == u)
            .expect("<V_(t+1), p> & U = U");
        if l <= k {
            return Err(Error::Precondition("U is a point".into()));
        }
        let proj = &self.projected[j];
        let (base, case) = if g[k].dim() == 1 {
            (Some(g[k].clone()), DeltaCase::OneDimensional)
        } else {
            let r = proj[k].radical(f, &g[k + 1])?;
            match r.dim() {
                0 => (None, DeltaCase::Nondegenerate),
                1 => (Some(r), DeltaCase::Radical),
                d => {
                    return Err(Error::Precondition(format!(
                        "projected radical of dimension {d}"
                    )))
                }
            }
        };
        let mut members = vec![Subspace::zero(u.dim())];
        let mut forms = Vec::new();
        if let Some(b) = base {
            let local = u.to_local(f, &b)?;
            forms.push(HermitianForm::new(
                f,
                local.clone(),
                vec![vec![self.filler]],
            )?);
            members.push(local);
        }
        for i in k..l {
            members.push(u.to_local(f, &g[i + 1])?);
            forms.push(localize_form(f, &proj[i], u, &g[i + 1])?);
        }
        let delta = PhanSpec::collapsed(f, members, forms)?;
        Ok((
            delta,
            DeltaBranch {
                spec: j,
                k,
                l,
                case,
            },
        ))
    }
}

/// A family on `U` (in local coordinates) with per-spec branch diagnostics.
#[derive(Clone, Debug)]
pub struct DeltaRestriction {
    u: Subspace,
    family: PhanFamily,
    branches: Vec<DeltaBranch>,
}

impl DeltaRestriction {
    pub fn space(&self) -> &Subspace {
        &self.u
    }

    pub fn family(&self) -> &PhanFamily {
        &self.family
    }

    pub fn branches(&self) -> &[DeltaBranch] {
        &self.branches
    }

    pub fn to_ambient(&self, f: &Field, local: &Subspace) -> Result<Subspace> {
        self.u.from_local(f, local)
    }

    /// The vertices of the intersection geometry, as subspaces of `V`.
    pub fn ambient_vertices(&self) -> Result<Vec<Subspace>> {
        let f = self.family.field();
        let mut out = vertices(&self.family)
            .vertices()
            .iter()
            .map(|w| self.to_ambient(f, w))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }
}

pub fn delta_restriction(
    family: &PhanFamily,
    p: &Subspace,
    u: &Subspace,
) -> Result<DeltaRestriction> {
    DeltaContext::new(family, p)?.restrict(u)
}
