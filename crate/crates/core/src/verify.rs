//! Random instance generators and the property suites run by `lemma-tests`.
//!
//! Every suite is deterministic for a given seed and records each failing
//! instance as a one-line witness.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::forms::{extend_forms_with, project_form, HermitianForm};
use crate::linalg::matrix::Matrix;
use crate::linalg::{ComplementPolicy, Decomposition, Flag, Quotient, Subspace};
use crate::phan::io::describe_subspace;
use crate::phan::{
    family_residue_above, family_residue_below, is_family_member, residue_above, residue_below,
    vertices, DeltaCase, DeltaContext, PhanFamily, PhanSpec,
};

pub fn random_element<R: Rng>(f: &Field, rng: &mut R) -> Fe {
    f.element(rng.gen_range(0..f.order()))
        .expect("index below q")
}

pub fn random_vector<R: Rng>(f: &Field, n: usize, rng: &mut R) -> Vec<Fe> {
    (0..n).map(|_| random_element(f, rng)).collect()
}

/// A uniformly random hermitian matrix; possibly degenerate.
pub fn random_hermitian<R: Rng>(f: &Field, k: usize, rng: &mut R) -> Matrix {
    let fixed = f.fixed_elements();
    let mut g = vec![vec![Fe::ZERO; k]; k];
    for i in 0..k {
        g[i][i] = *fixed.choose(rng).expect("0 is fixed");
        for j in i + 1..k {
            g[i][j] = random_element(f, rng);
            g[j][i] = f.sigma(g[i][j]);
        }
    }
    g
}

/// Random subspace of `within` with the given dimension.
pub fn random_subspace<R: Rng>(
    f: &Field,
    within: &Subspace,
    dim: usize,
    rng: &mut R,
) -> Result<Subspace> {
    extend_randomly(f, &Subspace::zero(within.ambient_dim()), within, dim, rng)
}

fn extend_randomly<R: Rng>(
    f: &Field,
    start: &Subspace,
    within: &Subspace,
    dim: usize,
    rng: &mut R,
) -> Result<Subspace> {
    if dim > within.dim() || start.dim() > dim {
        return Err(Error::Precondition(format!(
            "no subspace of dimension {dim} between the given spaces"
        )));
    }
    let mut s = start.clone();
    while s.dim() < dim {
        let coords = random_vector(f, within.dim(), rng);
        let v = within.vector_from_coordinates(f, &coords);
        let grown = s.sum(f, &Subspace::span(f, s.ambient_dim(), &[v])?)?;
        if grown.dim() == s.dim() + 1 {
            s = grown;
        }
    }
    Ok(s)
}

/// Random flag `0 < V_1 < .. < V_t < V` in `F_q^dim`.
pub fn random_flag<R: Rng>(f: &Field, dim: usize, t: usize, rng: &mut R) -> Result<Flag> {
    if t + 1 > dim {
        return Err(Error::Precondition(format!(
            "a flag in dimension {dim} has at most {} inner members",
            dim - 1
        )));
    }
    let mut dims: Vec<usize> = (1..dim).collect();
    dims.shuffle(rng);
    dims.truncate(t);
    dims.sort_unstable();
    let full = Subspace::full(dim);
    let mut inner = Vec::with_capacity(t);
    let mut last = Subspace::zero(dim);
    for d in dims {
        last = extend_randomly(f, &last, &full, d, rng)?;
        inner.push(last.clone());
    }
    Flag::from_inner(f, dim, inner)
}

/// A form on `domain` whose radical is exactly `radical`, built by pulling a
/// non-degenerate hermitian matrix back along `domain -> domain / radical`.
pub fn random_form_with_radical<R: Rng>(
    f: &Field,
    domain: &Subspace,
    radical: &Subspace,
    rng: &mut R,
) -> Result<HermitianForm> {
    let quotient = Quotient::new(f, domain, radical)?;
    let r = quotient.dim();
    let local = Subspace::full(r);
    loop {
        let h = HermitianForm::new(f, local.clone(), random_hermitian(f, r, rng))?;
        if !h.is_nondegenerate(f, &local)? {
            continue;
        }
        let images = domain
            .basis()
            .iter()
            .map(|b| quotient.push(f, b))
            .collect::<Result<Vec<_>>>()?;
        return h.pull_back(f, domain.clone(), &images);
    }
}

/// A valid spec with a random flag of `t` inner members and random forms.
pub fn random_spec<R: Rng>(f: &Field, dim: usize, t: usize, rng: &mut R) -> Result<PhanSpec> {
    for _ in 0..1000 {
        let flag = random_flag(f, dim, t, rng)?;
        let forms = (0..=t)
            .map(|i| random_form_with_radical(f, flag.member(i + 1), flag.member(i), rng))
            .collect::<Result<Vec<_>>>()?;
        match PhanSpec::new(f, flag, forms) {
            Ok(s) => return Ok(s),
            Err(Error::NoNonIsotropic { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotFound("no valid spec in 1000 draws".into()))
}

/// Points of `V` non-isotropic for the top form of every spec.
pub fn valid_pivots(family: &PhanFamily) -> Vec<Subspace> {
    let f = family.field();
    Subspace::full(family.dim())
        .points(f)
        .into_iter()
        .filter(|p| {
            family.specs().iter().all(|s| {
                s.top_form()
                    .is_nonisotropic(f, &p.basis()[0])
                    .unwrap_or(false)
            })
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub instances: usize,
    pub counters: BTreeMap<String, usize>,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            ..Default::default()
        }
    }

    fn bump(&mut self, key: &str) {
        *self.counters.entry(key.into()).or_default() += 1;
    }

    fn fail(&mut self, witness: String) {
        self.failures.push(witness);
    }

    fn finish(mut self) -> Self {
        self.passed = self.failures.is_empty() && self.instances > 0;
        self
    }
}

fn fields(list: &[(u32, u32, u8)]) -> Vec<Field> {
    list.iter()
        .map(|&(p, e, s)| Field::new(p, e, s).expect("valid field"))
        .collect()
}

/// Extension of flag forms to `V`: on every instance and under both the
/// greedy and a seeded random complement policy, `ext_i` restricts to
/// `omega_i` on `V_{i+1}`, has radical `V_i`, is non-degenerate on `p`, and
/// all `ext_i` share `p^perp`.
pub fn extension_suite(seed: u64, count: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = fields(&[(3, 1, 1), (2, 2, 2), (2, 2, 1), (5, 1, 1)]);
    let mut report = SuiteReport::new("extension");
    while report.instances < count {
        let f = &fs[report.instances % fs.len()];
        let dim = rng.gen_range(2..=4);
        let t = rng.gen_range(0..dim);
        let spec = random_spec(f, dim, t, &mut rng)?;
        let pivots = valid_pivots(&PhanFamily::single(spec.clone()));
        let Some(p) = pivots.choose(&mut rng) else {
            continue;
        };
        report.instances += 1;
        for policy in [
            ComplementPolicy::Greedy,
            ComplementPolicy::Random(rng.gen()),
        ] {
            let tag = format!(
                "q={} dim={dim} t={t} policy={policy:?} p={}",
                f.order(),
                describe_subspace(f, p)
            );
            let ext = match extend_forms_with(f, spec.flag(), spec.forms(), p, policy) {
                Ok(e) => e,
                Err(e) => {
                    report.fail(format!("{tag}: {e}"));
                    continue;
                }
            };
            report.bump(if policy == ComplementPolicy::Greedy {
                "greedy"
            } else {
                "random"
            });
            let full = Subspace::full(dim);
            let first_perp = ext[0].perp(f, p)?;
            for (i, w) in ext.iter().enumerate() {
                if &w.restrict(f, spec.flag().member(i + 1))? != &spec.forms()[i] {
                    report.fail(format!("{tag}: ext_{i} does not restrict to omega_{i}"));
                }
                if &w.radical(f, &full)? != spec.flag().member(i) {
                    report.fail(format!("{tag}: ext_{i} has the wrong radical"));
                }
                if !w.is_nondegenerate(f, p)? {
                    report.fail(format!("{tag}: p is degenerate for ext_{i}"));
                }
                if w.perp(f, p)? != first_perp {
                    report.fail(format!("{tag}: p^perp differs for ext_{i}"));
                }
            }
        }
    }
    Ok(report.finish())
}

/// For a form `omega` on `V`, a point `p` non-degenerate for it and `W`
/// meeting `p` trivially, the projection of `Rad(omega|<W,p>)` onto `W`
/// along `p` equals `Rad(omega^p|W)`.
pub fn projection_suite(seed: u64, count: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = fields(&[(3, 1, 1), (2, 2, 2)]);
    let dim = 4;
    let full = Subspace::full(dim);
    let mut report = SuiteReport::new("projection");
    while report.instances < count {
        let f = &fs[report.instances % fs.len()];
        let form = HermitianForm::new(f, full.clone(), random_hermitian(f, dim, &mut rng))?;
        let p = random_subspace(f, &full, 1, &mut rng)?;
        if !form.is_nondegenerate(f, &p)? {
            continue;
        }
        let w = random_subspace(f, &full, rng.gen_range(1..dim), &mut rng)?;
        if !w.meets_trivially(f, &p)? {
            continue;
        }
        report.instances += 1;
        let wp = w.sum(f, &p)?;
        let rad = form.radical(f, &wp)?;
        let split = Decomposition::new(f, vec![p.clone(), w.clone()])?;
        let projected = rad
            .basis()
            .iter()
            .map(|v| split.project(f, v, 1))
            .collect::<Result<Vec<_>>>()?;
        let lhs = Subspace::span(f, dim, &projected)?;
        let rhs = project_form(f, &form, &p)?.radical(f, &w)?;
        if rhs.dim() > 0 {
            report.bump("nonzero_radical");
        }
        if lhs != rhs {
            report.fail(format!(
                "q={} W={} p={}: {} vs {}",
                f.order(),
                describe_subspace(f, &w),
                describe_subspace(f, &p),
                describe_subspace(f, &lhs),
                describe_subspace(f, &rhs)
            ));
        }
    }
    Ok(report.finish())
}

/// Small families used by the exhaustive suites: dimension at most 4, `q <= 5`.
pub fn test_families(seed: u64) -> Result<Vec<(String, PhanFamily)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f3 = Field::new(3, 1, 1)?;
    let f4 = Field::new(2, 2, 2)?;
    let f5 = Field::new(5, 1, 1)?;
    let mut out = vec![
        (
            "F3^3 standard".to_string(),
            PhanFamily::single(PhanSpec::standard(&f3, 3)),
        ),
        (
            "F3^3 chamber".to_string(),
            PhanFamily::single(PhanSpec::chamber(&f3, 3)),
        ),
        (
            "F4^3 hermitian".to_string(),
            PhanFamily::single(PhanSpec::standard(&f4, 3)),
        ),
        (
            "F5^3 standard".to_string(),
            PhanFamily::single(PhanSpec::standard(&f5, 3)),
        ),
        (
            "F3^4 standard".to_string(),
            PhanFamily::single(PhanSpec::standard(&f3, 4)),
        ),
        (
            "F3^4 chamber".to_string(),
            PhanFamily::single(PhanSpec::chamber(&f3, 4)),
        ),
    ];
    for t in 1..=2 {
        out.push((
            format!("F3^4 random t={t}"),
            PhanFamily::single(random_spec(&f3, 4, t, &mut rng)?),
        ));
    }
    out.push((
        "F5^3 m=2".to_string(),
        PhanFamily::new(vec![
            PhanSpec::standard(&f5, 3),
            random_spec(&f5, 3, 1, &mut rng)?,
        ])?,
    ));
    out.push((
        "F4^3 random t=1".to_string(),
        PhanFamily::single(random_spec(&f4, 3, 1, &mut rng)?),
    ));
    Ok(out)
}

fn literal_below(gamma: &[Subspace], f: &Field, u: &Subspace) -> Vec<Subspace> {
    gamma
        .iter()
        .filter(|w| w.dim() < u.dim() && w.is_subspace_of(f, u))
        .cloned()
        .collect()
}

fn literal_above(gamma: &[Subspace], f: &Field, u: &Subspace) -> Vec<Subspace> {
    gamma
        .iter()
        .filter(|w| w.dim() > u.dim() && u.is_subspace_of(f, w))
        .cloned()
        .collect()
}

fn lifted(
    local: Vec<Subspace>,
    lift: impl Fn(&Subspace) -> Result<Subspace>,
) -> Result<Vec<Subspace>> {
    let mut out = local.iter().map(lift).collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Residues below and above every member, for single specs and for families.
pub fn residue_suite(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("residues");
    for (name, family) in test_families(seed)? {
        let f = family.field();
        let gamma = vertices(&family).into_vertices();
        for u in &gamma {
            report.instances += 1;
            let tag = format!("{name} U={}", describe_subspace(f, u));
            let below = family_residue_below(&family, u)?;
            let got = lifted(vertices(below.family()).into_vertices(), |w| {
                below.to_ambient(f, w)
            })?;
            if got != literal_below(&gamma, f, u) {
                report.fail(format!("{tag}: family residue below differs"));
            }
            let above = family_residue_above(&family, u)?;
            let got = lifted(vertices(above.family()).into_vertices(), |w| {
                above.to_ambient(f, w)
            })?;
            if got != literal_above(&gamma, f, u) {
                report.fail(format!("{tag}: family residue above differs"));
            }
        }
        for spec in family.specs() {
            let single = PhanFamily::single(spec.clone());
            let gamma = vertices(&single).into_vertices();
            for u in &gamma {
                report.instances += 1;
                let tag = format!("{name} single U={}", describe_subspace(f, u));
                let below = residue_below(spec, u)?;
                let got = lifted(vertices(below.family()).into_vertices(), |w| {
                    below.to_ambient(f, w)
                })?;
                if got != literal_below(&gamma, f, u) {
                    report.fail(format!("{tag}: residue below differs"));
                }
                let above = residue_above(spec, u)?;
                let got = lifted(vertices(above.family()).into_vertices(), |w| {
                    above.to_ambient(f, w)
                })?;
                if got != literal_above(&gamma, f, u) {
                    report.fail(format!("{tag}: residue above differs"));
                }
            }
        }
    }
    Ok(report.finish())
}

/// Restricted families: for every member `U` not containing `p`, the
/// geometry of the restricted family is `{W < U : W, <W, p> in Gamma}`.
/// Runs up to `pivots_per_family` pivots per test family.
pub fn restriction_suite(seed: u64, pivots_per_family: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("restriction");
    for (name, family) in test_families(seed)? {
        let f = family.field();
        let gamma = vertices(&family).into_vertices();
        let mut pivots = valid_pivots(&family);
        pivots.shuffle(&mut rng);
        pivots.truncate(pivots_per_family);
        for p in &pivots {
            let ctx = DeltaContext::new(&family, p)?;
            for u in gamma.iter().filter(|u| !p.is_subspace_of(f, u)) {
                let tag = format!(
                    "{name} p={} U={}",
                    describe_subspace(f, p),
                    describe_subspace(f, u)
                );
                let mut oracle: Vec<Subspace> = literal_below(&gamma, f, u)
                    .into_iter()
                    .filter(|w| w.sum(f, p).is_ok_and(|s| is_family_member(&family, &s)))
                    .collect();
                oracle.sort();
                match ctx.restrict(u) {
                    Ok(d) => {
                        report.instances += 1;
                        for b in d.branches() {
                            report.bump(match b.case {
                                DeltaCase::OneDimensional => "one_dimensional",
                                DeltaCase::Nondegenerate => "nondegenerate",
                                DeltaCase::Radical => "radical",
                            });
                            if b.l <= family.specs()[b.spec].t() {
                                report.bump("truncated");
                            }
                        }
                        if d.family().m() > 2 * family.m() {
                            report.fail(format!("{tag}: {} specs", d.family().m()));
                        }
                        if d.ambient_vertices()? != oracle {
                            report.fail(format!(
                                "{tag}: restricted geometry differs from the oracle"
                            ));
                        }
                    }
                    Err(Error::Precondition(msg)) if msg.contains("no members below") => {
                        report.bump("empty_below");
                        if !oracle.is_empty() {
                            report.fail(format!(
                                "{tag}: refused although the oracle set is nonempty"
                            ));
                        }
                    }
                    Err(e) => report.fail(format!("{tag}: {e}")),
                }
            }
        }
    }
    Ok(report.finish())
}

/// Every suite with its default size.
pub fn all_suites(seed: u64) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        extension_suite(seed, 120)?,
        projection_suite(seed, 120)?,
        residue_suite(seed)?,
        restriction_suite(seed, 3)?,
    ])
}
