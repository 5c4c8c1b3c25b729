use super::geometry::member_k;
use super::spec::{PhanFamily, PhanSpec};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::HermitianForm;
use crate::linalg::{Quotient, Subspace, Vector};

/// `form` restricted to `s`, a subspace of `u`, in the local coordinates of `u`.
pub(crate) fn localize_form(
    f: &Field,
    form: &HermitianForm,
    u: &Subspace,
    s: &Subspace,
) -> Result<HermitianForm> {
    let local = u.to_local(f, s)?;
    let images: Vec<Vector> = local
        .basis()
        .iter()
        .map(|c| u.vector_from_coordinates(f, c))
        .collect();
    form.pull_back(f, local, &images)
}

/// The geometry below a member `U`, realized on `F^{dim U}` through the
/// canonical basis of `U`.
#[derive(Clone, Debug)]
pub struct ResidueBelow {
    u: Subspace,
    family: PhanFamily,
}

impl ResidueBelow {
    pub fn space(&self) -> &Subspace {
        &self.u
    }

    pub fn family(&self) -> &PhanFamily {
        &self.family
    }

    /// The spec when the residue was taken for a single spec.
    pub fn spec(&self) -> &PhanSpec {
        &self.family.specs()[0]
    }

    /// A subspace of the residue's space, as a subspace of `V`.
    pub fn to_ambient(&self, f: &Field, local: &Subspace) -> Result<Subspace> {
        self.u.from_local(f, local)
    }
}

/// Spec on `U` with flag `{V_i & U}` for `k_U <= i <= t+1` and the forms
/// `omega_i` restricted to `U & V_{i+1}`.
pub(crate) fn below_spec(spec: &PhanSpec, u: &Subspace) -> Result<PhanSpec> {
    let k = member_k(spec, u).ok_or(Error::NotMember)?;
    let f = spec.field();
    let mut members = Vec::new();
    for i in k..=spec.t() + 1 {
        members.push(u.to_local(f, &spec.flag().member(i).intersect(f, u)?)?);
    }
    let mut forms = Vec::new();
    for i in k..=spec.t() {
        let piece = spec.flag().member(i + 1).intersect(f, u)?;
        forms.push(localize_form(f, &spec.forms()[i], u, &piece)?);
    }
    PhanSpec::collapsed(f, members, forms)
}

pub fn residue_below(spec: &PhanSpec, u: &Subspace) -> Result<ResidueBelow> {
    Ok(ResidueBelow {
        u: u.clone(),
        family: PhanFamily::single(below_spec(spec, u)?),
    })
}

/// Residue below `U` for every spec of the family; requires `U` in all geometries.
pub fn family_residue_below(family: &PhanFamily, u: &Subspace) -> Result<ResidueBelow> {
    let specs = family
        .specs()
        .iter()
        .map(|s| below_spec(s, u))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidueBelow {
        u: u.clone(),
        family: PhanFamily::new(specs)?,
    })
}

/// The geometry above a member `U`, realized on `V/U` through a fixed
/// quotient section; quotient vectors are coordinates in that section.
#[derive(Clone, Debug)]
pub struct ResidueAbove {
    quotient: Quotient,
    family: PhanFamily,
}

impl ResidueAbove {
    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn family(&self) -> &PhanFamily {
        &self.family
    }

    pub fn spec(&self) -> &PhanSpec {
        &self.family.specs()[0]
    }

    /// Preimage in `V` of a subspace of `V/U`.
    pub fn to_ambient(&self, f: &Field, local: &Subspace) -> Result<Subspace> {
        self.quotient.lift_subspace(f, local)
    }
}

/// Spec on `V/U` with flag `{V_i + U}` for `0 <= i <= k_U + 1`.
///
/// `omega_i` is evaluated on representatives in the section
/// `W = (U & V_{k+1})^perp` taken inside `V_{k+1}` for `omega_k`; `W` is a
/// complement of `U` and contains `V_k`.
fn above_spec(spec: &PhanSpec, u: &Subspace, coords: &Quotient) -> Result<PhanSpec> {
    let k = member_k(spec, u).ok_or(Error::NotMember)?;
    let f = spec.field();
    let piece = u.intersect(f, spec.flag().member(k + 1))?;
    let w = spec.forms()[k].perp(f, &piece)?;
    let own = Quotient::with_section(f, coords.space(), u, w)?;
    let mut members = Vec::new();
    for i in 0..=k + 1 {
        members.push(coords.push_subspace(f, &spec.flag().member(i).sum(f, u)?)?);
    }
    let mut forms = Vec::new();
    for i in 0..=k {
        let domain = members[i + 1].clone();
        let images = domain
            .basis()
            .iter()
            .map(|c| own.lift(f, &own.push(f, &coords.lift(f, c)?)?))
            .collect::<Result<Vec<_>>>()?;
        forms.push(spec.forms()[i].pull_back(f, domain, &images)?);
    }
    PhanSpec::collapsed(f, members, forms)
}

pub fn residue_above(spec: &PhanSpec, u: &Subspace) -> Result<ResidueAbove> {
    family_residue_above(&PhanFamily::single(spec.clone()), u)
}

pub fn family_residue_above(family: &PhanFamily, u: &Subspace) -> Result<ResidueAbove> {
    let f = family.field();
    let quotient = Quotient::new(f, &Subspace::full(family.dim()), u)?;
    let specs = family
        .specs()
        .iter()
        .map(|s| above_spec(s, u, &quotient))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidueAbove {
        quotient,
        family: PhanFamily::new(specs)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fe;
    use crate::linalg::enumerate_proper_subspaces;
    use crate::phan::geometry::{is_member, vertices};

    #[test]
    fn point_residue_is_empty() {
        let f = Field::new(5, 1, 1).unwrap();
        let s = PhanSpec::standard(&f, 3);
        let p = Subspace::point(&f, &[Fe::ONE, Fe::ZERO, Fe::ZERO]).unwrap();
        let r = residue_below(&s, &p).unwrap();
        assert_eq!(r.spec().dim(), 1);
        assert!(vertices(r.family()).is_empty());
    }

    #[test]
    fn hyperplane_residue_above_is_empty() {
        let f = Field::new(5, 1, 1).unwrap();
        let s = PhanSpec::standard(&f, 3);
        let plane = enumerate_proper_subspaces(&f, 3)
            .into_iter()
            .find(|u| u.dim() == 2 && is_member(&s, u))
            .unwrap();
        let r = residue_above(&s, &plane).unwrap();
        assert_eq!(r.spec().dim(), 1);
        assert!(vertices(r.family()).is_empty());
    }

    #[test]
    fn non_member_rejected() {
        let f = Field::new(5, 1, 1).unwrap();
        let s = PhanSpec::standard(&f, 2);
        let iso = Subspace::point(&f, &[Fe::ONE, f.from_int(2)]).unwrap();
        assert!(matches!(residue_below(&s, &iso), Err(Error::NotMember)));
        assert!(matches!(residue_above(&s, &iso), Err(Error::NotMember)));
    }

    #[test]
    fn t0_residues_match_literal_sets() {
        let f = Field::new(5, 1, 1).unwrap();
        let s = PhanSpec::standard(&f, 3);
        let family = PhanFamily::single(s.clone());
        let gamma = vertices(&family);
        for u in gamma.vertices() {
            let below = residue_below(&s, u).unwrap();
            let mut got: Vec<_> = vertices(below.family())
                .vertices()
                .iter()
                .map(|x| below.to_ambient(&f, x).unwrap())
                .collect();
            got.sort();
            let want: Vec<_> = gamma
                .vertices()
                .iter()
                .filter(|x| x.dim() < u.dim() && x.is_subspace_of(&f, u))
                .cloned()
                .collect();
            assert_eq!(got, want);

            let above = residue_above(&s, u).unwrap();
            let mut got: Vec<_> = vertices(above.family())
                .vertices()
                .iter()
                .map(|x| above.to_ambient(&f, x).unwrap())
                .collect();
            got.sort();
            let want: Vec<_> = gamma
                .vertices()
                .iter()
                .filter(|x| x.dim() > u.dim() && u.is_subspace_of(&f, x))
                .cloned()
                .collect();
            assert_eq!(got, want);
        }
    }
}
