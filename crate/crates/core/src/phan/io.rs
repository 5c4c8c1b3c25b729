//! The `phan-spec/1` family file format.
//!
//! ```json
//! {
//!   "schema": "phan-spec/1",
//!   "field": {"p": 3, "e": 2, "sigma_order": 2},
//!   "dim": 3,
//!   "specs": [
//!     {"flag": [], "forms": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]}
//!   ]
//! }
//! ```
//!
//! `flag` lists the inner members `V_1 .. V_t`, each as a list of spanning
//! row vectors; `{0}` and `V` are implicit. `forms[i]` is the Gram matrix
//! of `omega_i` with respect to the reduced row-echelon basis of `V_{i+1}`.
//! A field element is either a coefficient array (lowest degree first,
//! length at most `e`) or a bare integer in `0..p` naming a prime-field
//! element.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::spec::{PhanFamily, PhanSpec};
use crate::error::{Error, Result};
use crate::field::{Fe, Field, FieldParams};
use crate::forms::HermitianForm;
use crate::linalg::{Flag, Matrix, Subspace};

pub const SCHEMA: &str = "phan-spec/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawElement {
    Int(u64),
    Coeffs(Vec<u32>),
}

type RawMatrix = Vec<Vec<RawElement>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub flag: Vec<RawMatrix>,
    pub forms: Vec<RawMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFamily {
    pub schema: String,
    pub field: FieldParams,
    pub dim: usize,
    pub specs: Vec<RawSpec>,
}

fn element(f: &Field, raw: &RawElement, at: &dyn Fn() -> String) -> Result<Fe> {
    match raw {
        RawElement::Int(n) if *n < f.characteristic() as u64 => Ok(f.from_int(*n as i64)),
        RawElement::Int(n) => Err(Error::Parse(format!(
            "{}: integer {n} is not below p = {}",
            at(),
            f.characteristic()
        ))),
        RawElement::Coeffs(c) => f
            .from_coeffs(c)
            .map_err(|e| Error::Parse(format!("{}: {e}", at()))),
    }
}

fn matrix(f: &Field, raw: &RawMatrix, cols: Option<usize>, at: &str) -> Result<Matrix> {
    raw.iter()
        .enumerate()
        .map(|(r, row)| {
            if let Some(c) = cols {
                if row.len() != c {
                    return Err(Error::Parse(format!(
                        "{at}[{r}]: expected {c} entries, found {}",
                        row.len()
                    )));
                }
            }
            row.iter()
                .enumerate()
                .map(|(c, x)| element(f, x, &|| format!("{at}[{r}][{c}]")))
                .collect()
        })
        .collect()
}

fn spec_from_raw(f: &Field, dim: usize, raw: &RawSpec, j: usize) -> Result<PhanSpec> {
    let mut inner = Vec::with_capacity(raw.flag.len());
    for (i, m) in raw.flag.iter().enumerate() {
        let at = format!("specs[{j}].flag[{i}]");
        let rows = matrix(f, m, Some(dim), &at)?;
        inner.push(Subspace::span(f, dim, &rows)?);
    }
    let flag = Flag::from_inner(f, dim, inner)
        .map_err(|e| Error::Parse(format!("specs[{j}].flag: {e}")))?;
    if raw.forms.len() != flag.t() + 1 {
        return Err(Error::Parse(format!(
            "specs[{j}].forms: a flag with {} inner members needs {} forms, found {}",
            flag.t(),
            flag.t() + 1,
            raw.forms.len()
        )));
    }
    let mut forms = Vec::with_capacity(raw.forms.len());
    for (i, g) in raw.forms.iter().enumerate() {
        let at = format!("specs[{j}].forms[{i}]");
        let k = flag.member(i + 1).dim();
        if g.len() != k {
            return Err(Error::Parse(format!(
                "{at}: expected {k} rows, found {}",
                g.len()
            )));
        }
        let gram = matrix(f, g, Some(k), &at)?;
        forms.push(
            HermitianForm::new(f, flag.member(i + 1).clone(), gram)
                .map_err(|e| Error::InvalidSpec(format!("{at}: {e}")))?,
        );
    }
    PhanSpec::new(f, flag, forms).map_err(|e| Error::InvalidSpec(format!("specs[{j}]: {e}")))
}

pub fn family_from_raw(raw: &RawFamily) -> Result<PhanFamily> {
    if raw.schema != SCHEMA {
        return Err(Error::Parse(format!(
            "schema: expected \"{SCHEMA}\", found \"{}\"",
            raw.schema
        )));
    }
    let f = Field::from_params(raw.field).map_err(|e| Error::Parse(format!("field: {e}")))?;
    if raw.dim == 0 {
        return Err(Error::Parse("dim: must be at least 1".into()));
    }
    if raw.specs.is_empty() {
        return Err(Error::Parse("specs: at least one spec is required".into()));
    }
    let specs = raw
        .specs
        .iter()
        .enumerate()
        .map(|(j, s)| spec_from_raw(&f, raw.dim, s, j))
        .collect::<Result<_>>()?;
    PhanFamily::new(specs)
}

/// Parses a family file; syntax errors carry line and column.
pub fn parse_family(text: &str) -> Result<PhanFamily> {
    let raw: RawFamily = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    family_from_raw(&raw)
}

fn raw_matrix(f: &Field, m: &[Vec<Fe>]) -> RawMatrix {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|&x| RawElement::Coeffs(f.coeffs(x)))
                .collect()
        })
        .collect()
}

pub fn family_to_raw(family: &PhanFamily) -> RawFamily {
    let f = family.field();
    let specs = family
        .specs()
        .iter()
        .map(|s| {
            let t = s.t();
            RawSpec {
                flag: s.flag().members()[1..=t]
                    .iter()
                    .map(|m| raw_matrix(f, m.basis()))
                    .collect(),
                forms: s.forms().iter().map(|w| raw_matrix(f, w.gram())).collect(),
            }
        })
        .collect();
    RawFamily {
        schema: SCHEMA.into(),
        field: f.params(),
        dim: family.dim(),
        specs,
    }
}

/// Canonical serialization: coefficient arrays, reduced echelon flags.
pub fn family_to_json(family: &PhanFamily) -> String {
    serde_json::to_string_pretty(&family_to_raw(family)).expect("plain data serializes")
}

/// Compact text form of a subspace, e.g. `<(1 0 2), (0 1 1)>`; elements of
/// extension fields print as coefficient lists `[c0 c1 ..]`.
pub fn describe_subspace(f: &Field, s: &Subspace) -> String {
    let elem = |x: Fe| -> String {
        if f.degree() == 1 {
            x.index().to_string()
        } else {
            let c: Vec<String> = f.coeffs(x).iter().map(u32::to_string).collect();
            format!("[{}]", c.join(" "))
        }
    };
    let rows: Vec<String> = s
        .basis()
        .iter()
        .map(|r| {
            format!(
                "({})",
                r.iter().map(|&x| elem(x)).collect::<Vec<_>>().join(" ")
            )
        })
        .collect();
    format!("<{}>", rows.join(", "))
}

/// SHA-256 of the canonical serialization, hex encoded.
pub fn family_digest(family: &PhanFamily) -> String {
    hex::encode(Sha256::digest(family_to_json(family).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = Field::new(3, 2, 2).unwrap();
        let fam =
            PhanFamily::new(vec![PhanSpec::standard(&f, 3), PhanSpec::chamber(&f, 3)]).unwrap();
        let text = family_to_json(&fam);
        assert_eq!(parse_family(&text).unwrap(), fam);
        assert_eq!(
            family_digest(&fam),
            family_digest(&parse_family(&text).unwrap())
        );
    }

    #[test]
    fn bare_integers_accepted() {
        let text = r#"{"schema":"phan-spec/1","field":{"p":5,"e":1,"sigma_order":1},"dim":2,
            "specs":[{"flag":[],"forms":[[[1,0],[0,2]]]}]}"#;
        let fam = parse_family(text).unwrap();
        assert_eq!(fam.specs()[0].top_form().gram()[1][1], Fe(2));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_family("{\n  \"schema\": ,\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn non_hermitian_named() {
        let text = r#"{"schema":"phan-spec/1","field":{"p":5,"e":1,"sigma_order":1},"dim":2,
            "specs":[{"flag":[],"forms":[[[1,1],[0,2]]]}]}"#;
        let err = parse_family(text).unwrap_err().to_string();
        assert!(
            err.contains("specs[0].forms[0]") && err.contains("hermitian"),
            "{err}"
        );
    }

    #[test]
    fn radical_violation_names_index() {
        let text = r#"{"schema":"phan-spec/1","field":{"p":3,"e":1,"sigma_order":1},"dim":2,
            "specs":[{"flag":[[[1,0]]],"forms":[[[1]],[[1,0],[0,1]]]}]}"#;
        let err = parse_family(text).unwrap_err().to_string();
        assert!(err.contains("form 1 has radical"), "{err}");
    }

    #[test]
    fn bad_entries_located() {
        let text = r#"{"schema":"phan-spec/1","field":{"p":3,"e":1,"sigma_order":1},"dim":2,
            "specs":[{"flag":[],"forms":[[[1,0],[0,7]]]}]}"#;
        let err = parse_family(text).unwrap_err().to_string();
        assert!(err.contains("specs[0].forms[0][1][1]"), "{err}");
    }
}
