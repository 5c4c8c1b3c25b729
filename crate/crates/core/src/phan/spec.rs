use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::forms::HermitianForm;
use crate::linalg::{Flag, Subspace};

/// A flag `V_0 < .. < V_{t+1}` with forms `omega_i` on `V_{i+1}`, `Rad(omega_i) = V_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhanSpec {
    field: Field,
    flag: Flag,
    forms: Vec<HermitianForm>,
}

impl PhanSpec {
    /// Checks radicals and that every form has a non-isotropic vector.
    pub fn new(field: &Field, flag: Flag, forms: Vec<HermitianForm>) -> Result<Self> {
        let spec = PhanSpec::with_radicals_checked(field, flag, forms)?;
        for (index, form) in spec.forms.iter().enumerate() {
            if !form.admits_nonisotropic(field) {
                return Err(Error::NoNonIsotropic { index });
            }
        }
        Ok(spec)
    }

    /// Checks domains and radicals only; used for specs derived from valid ones.
    pub(crate) fn with_radicals_checked(
        field: &Field,
        flag: Flag,
        forms: Vec<HermitianForm>,
    ) -> Result<Self> {
        if forms.len() != flag.t() + 1 {
            return Err(Error::InvalidSpec(format!(
                "a flag with t = {} needs {} forms, got {}",
                flag.t(),
                flag.t() + 1,
                forms.len()
            )));
        }
        for (i, form) in forms.iter().enumerate() {
            if form.domain() != flag.member(i + 1) {
                return Err(Error::InvalidSpec(format!(
                    "form {i} is not defined on flag member {}",
                    i + 1
                )));
            }
            let rad = form.radical(field, form.domain())?;
            if &rad != flag.member(i) {
                return Err(Error::RadicalMismatch {
                    index: i,
                    expected: flag.member(i).dim(),
                    found: rad.dim(),
                });
            }
        }
        Ok(PhanSpec {
            field: field.clone(),
            flag,
            forms,
        })
    }

    /// Builds from a member list starting at `{0}` and ending at `V`, where
    /// `forms[j]` lives on `members[j + 1]`. A member equal to its
    /// predecessor is dropped together with the form defined on it.
    pub(crate) fn collapsed(
        field: &Field,
        members: Vec<Subspace>,
        forms: Vec<HermitianForm>,
    ) -> Result<Self> {
        if members.len() != forms.len() + 1 {
            return Err(Error::InvalidSpec("member and form counts disagree".into()));
        }
        let mut kept = vec![members[0].clone()];
        let mut kept_forms = Vec::with_capacity(forms.len());
        for (m, w) in members.into_iter().skip(1).zip(forms) {
            if &m != kept.last().unwrap() {
                kept.push(m);
                kept_forms.push(w);
            }
        }
        let flag = Flag::new(field, kept)?;
        PhanSpec::with_radicals_checked(field, flag, kept_forms)
    }

    /// `t = 0` with the standard form `sum x_i sigma(y_i)`.
    pub fn standard(field: &Field, dim: usize) -> Self {
        let full = Subspace::full(dim);
        PhanSpec {
            field: field.clone(),
            flag: Flag::trivial(dim),
            forms: vec![HermitianForm::standard(full)],
        }
    }

    /// `t = 0` with a diagonal form; entries must be sigma-fixed and nonzero.
    pub fn diagonal(field: &Field, diag: &[Fe]) -> Result<Self> {
        let full = Subspace::full(diag.len());
        let form = HermitianForm::diagonal(field, full, diag)?;
        PhanSpec::new(field, Flag::trivial(diag.len()), vec![form])
    }

    /// `t = n` on the standard chamber, `omega_i = x_{i+1} sigma(y_{i+1})` on `V_{i+1}`.
    pub fn chamber(field: &Field, dim: usize) -> Self {
        let flag = Flag::standard_chamber(dim);
        let forms = (0..dim)
            .map(|i| {
                let k = i + 1;
                let mut diag = vec![Fe::ZERO; k];
                diag[i] = Fe::ONE;
                HermitianForm::diagonal(field, flag.member(k).clone(), &diag)
                    .expect("fixed diagonal")
            })
            .collect();
        PhanSpec {
            field: field.clone(),
            flag,
            forms,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn flag(&self) -> &Flag {
        &self.flag
    }

    pub fn forms(&self) -> &[HermitianForm] {
        &self.forms
    }

    pub fn t(&self) -> usize {
        self.flag.t()
    }

    /// Dimension of the ambient space, `n + 1`.
    pub fn dim(&self) -> usize {
        self.flag.ambient_dim()
    }

    /// The form defined on the whole space.
    pub fn top_form(&self) -> &HermitianForm {
        self.forms.last().expect("at least one form")
    }

    /// Whether the flag is a full chamber (`t = n`).
    pub fn is_chamber(&self) -> bool {
        self.t() + 1 == self.dim()
    }
}

/// `m >= 1` specs over one field and one ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhanFamily {
    field: Field,
    dim: usize,
    specs: Vec<PhanSpec>,
}

impl PhanFamily {
    pub fn new(specs: Vec<PhanSpec>) -> Result<Self> {
        let Some(first) = specs.first() else {
            return Err(Error::InvalidSpec(
                "a family needs at least one spec".into(),
            ));
        };
        let field = first.field.clone();
        let dim = first.dim();
        for (j, s) in specs.iter().enumerate() {
            if s.field != field {
                return Err(Error::InvalidSpec(format!(
                    "spec {j} is over a different field"
                )));
            }
            if s.dim() != dim {
                return Err(Error::InvalidSpec(format!(
                    "spec {j} has ambient dimension {}, expected {dim}",
                    s.dim()
                )));
            }
        }
        Ok(PhanFamily { field, dim, specs })
    }

    pub fn single(spec: PhanSpec) -> Self {
        PhanFamily {
            field: spec.field.clone(),
            dim: spec.dim(),
            specs: vec![spec],
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim.saturating_sub(1)
    }

    pub fn m(&self) -> usize {
        self.specs.len()
    }

    pub fn specs(&self) -> &[PhanSpec] {
        &self.specs
    }

    pub fn bound(&self) -> BoundVerdict {
        let chambers = self.specs.iter().all(PhanSpec::is_chamber);
        BoundVerdict::evaluate(
            self.n(),
            self.field.order() as u64,
            self.m(),
            self.field.sigma_order(),
            chambers,
        )
    }
}

/// The field-size bound under which the geometries are known to be spherical.
///
/// `2^n m < q` for `sigma = id`, `2^(n-1) (sqrt(q)+1) m < q` otherwise; when
/// every flag is a full chamber all forms have rank one and the factor
/// `2` resp. `sqrt(q)+1` drops to `1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub n: usize,
    pub q: u64,
    pub m: usize,
    pub sigma_order: u8,
    pub chambers: bool,
    pub lhs: u128,
    pub satisfied: bool,
    pub inequality: String,
}

impl BoundVerdict {
    pub fn evaluate(n: usize, q: u64, m: usize, sigma_order: u8, chambers: bool) -> Self {
        let (lhs, inequality) = if chambers {
            let e = n.saturating_sub(1);
            let lhs = (1u128 << e) * m as u128;
            (lhs, format!("2^{e}*m = 2^{e}*{m} = {lhs} < {q}"))
        } else if sigma_order == 1 {
            let lhs = (1u128 << n) * m as u128;
            (lhs, format!("2^n*m = 2^{n}*{m} = {lhs} < {q}"))
        } else {
            let e = n.saturating_sub(1);
            let r = (q as f64).sqrt().round() as u128;
            let lhs = (1u128 << e) * (r + 1) * m as u128;
            (
                lhs,
                format!("2^(n-1)*(sqrt(q)+1)*m = 2^{e}*{}*{m} = {lhs} < {q}", r + 1),
            )
        };
        BoundVerdict {
            n,
            q,
            m,
            sigma_order,
            chambers,
            lhs,
            satisfied: lhs < q as u128,
            inequality,
        }
    }

    /// The inequality with its truth value, e.g. `2^n*m = 2^2*1 = 4 < 4 is false`.
    pub fn describe(&self) -> String {
        format!("{} is {}", self.inequality, self.satisfied)
    }
}
