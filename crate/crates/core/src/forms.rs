//! Sigma-hermitian forms on subspaces of `F_q^n`.
//!
//! A form is stored with its domain `D` and its Gram matrix with respect to
//! the canonical basis of `D`, so `omega(x, y) = c(x) G sigma(c(y))^T` where
//! `c` reads coordinates off the pivot columns. Conventions: linear in the
//! first argument, sigma-semilinear in the second, and
//! `omega(y, x) = sigma(omega(x, y))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::matrix::{self, conj_transpose, left_kernel, mat_mul, sub_vec, Matrix, Vector};
use crate::linalg::{complement_with, ComplementPolicy, Decomposition, Flag, Subspace};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct HermitianForm {
    domain: Subspace,
    gram: Matrix,
}

impl HermitianForm {
    pub fn new(f: &Field, domain: Subspace, gram: Matrix) -> Result<Self> {
        let k = domain.dim();
        if gram.len() != k || gram.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch(format!(
                "gram matrix must be {k}x{k} for a {k}-dimensional domain"
            )));
        }
        for i in 0..k {
            for j in i..k {
                if gram[j][i] != f.sigma(gram[i][j]) {
                    return Err(Error::NotHermitian { row: j, col: i });
                }
            }
        }
        Ok(HermitianForm { domain, gram })
    }

    pub fn zero(domain: Subspace) -> Self {
        let k = domain.dim();
        HermitianForm {
            domain,
            gram: vec![matrix::zero_vector(k); k],
        }
    }

    /// The standard form `sum x_i sigma(y_i)` on `domain`'s canonical basis.
    pub fn standard(domain: Subspace) -> Self {
        let k = domain.dim();
        HermitianForm {
            domain,
            gram: matrix::identity(k),
        }
    }

    /// Diagonal form; entries must be fixed by sigma.
    pub fn diagonal(f: &Field, domain: Subspace, diag: &[Fe]) -> Result<Self> {
        let k = diag.len();
        let mut gram = vec![matrix::zero_vector(k); k];
        for (i, &d) in diag.iter().enumerate() {
            gram[i][i] = d;
        }
        HermitianForm::new(f, domain, gram)
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    fn coords(&self, f: &Field, x: &[Fe]) -> Result<Vector> {
        self.domain.coordinates(f, x).ok_or(Error::OutsideDomain)
    }

    fn eval_coords(&self, f: &Field, cx: &[Fe], cy: &[Fe]) -> Fe {
        let mut acc = Fe::ZERO;
        for (i, &a) in cx.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut row = Fe::ZERO;
            for (j, &b) in cy.iter().enumerate() {
                row = f.add(row, f.mul(self.gram[i][j], f.sigma(b)));
            }
            acc = f.add(acc, f.mul(a, row));
        }
        acc
    }

    pub fn evaluate(&self, f: &Field, x: &[Fe], y: &[Fe]) -> Result<Fe> {
        let cx = self.coords(f, x)?;
        let cy = self.coords(f, y)?;
        Ok(self.eval_coords(f, &cx, &cy))
    }

    /// Gram matrix of the restriction to `s`, in `s`'s canonical basis.
    pub fn gram_on(&self, f: &Field, s: &Subspace) -> Result<Matrix> {
        let c: Matrix = s
            .basis()
            .iter()
            .map(|v| self.coords(f, v))
            .collect::<Result<_>>()?;
        let cg = mat_mul(f, &c, &self.gram, self.domain.dim());
        Ok(mat_mul(
            f,
            &cg,
            &conj_transpose(f, &c, self.domain.dim()),
            s.dim(),
        ))
    }

    pub fn restrict(&self, f: &Field, s: &Subspace) -> Result<HermitianForm> {
        Ok(HermitianForm {
            domain: s.clone(),
            gram: self.gram_on(f, s)?,
        })
    }

    /// `{x in s : omega(x, y) = 0 for all y in s}`.
    pub fn radical(&self, f: &Field, s: &Subspace) -> Result<Subspace> {
        let g = self.gram_on(f, s)?;
        let ker = left_kernel(f, &g, s.dim(), s.dim());
        let vectors: Vec<Vector> = ker
            .iter()
            .map(|c| s.vector_from_coordinates(f, c))
            .collect();
        Subspace::span(f, s.ambient_dim(), &vectors)
    }

    pub fn is_nondegenerate(&self, f: &Field, s: &Subspace) -> Result<bool> {
        let g = self.gram_on(f, s)?;
        Ok(matrix::rank(f, g, s.dim()) == s.dim())
    }

    /// `{x in domain : omega(x, s) = 0 for all s in s}`.
    pub fn perp(&self, f: &Field, s: &Subspace) -> Result<Subspace> {
        let k = self.domain.dim();
        let cs: Matrix = s
            .basis()
            .iter()
            .map(|v| self.coords(f, v))
            .collect::<Result<_>>()?;
        // a * G * sigma(cs)^T = 0
        let m = mat_mul(f, &self.gram, &conj_transpose(f, &cs, k), s.dim());
        let ker = left_kernel(f, &m, k, s.dim());
        let vectors: Vec<Vector> = ker
            .iter()
            .map(|c| self.domain.vector_from_coordinates(f, c))
            .collect();
        Subspace::span(f, self.domain.ambient_dim(), &vectors)
    }

    pub fn is_nonisotropic(&self, f: &Field, v: &[Fe]) -> Result<bool> {
        Ok(!self.evaluate(f, v, v)?.is_zero())
    }

    /// Whether some vector `v` has `omega(v, v) != 0`.
    ///
    /// A form all of whose vectors are isotropic is zero unless `sigma = id`
    /// in characteristic two, where it is alternating (zero diagonal).
    pub fn admits_nonisotropic(&self, f: &Field) -> bool {
        let nonzero = self.gram.iter().flatten().any(|x| !x.is_zero());
        if f.sigma_order() == 1 && f.characteristic() == 2 {
            (0..self.gram.len()).any(|i| !self.gram[i][i].is_zero())
        } else {
            nonzero
        }
    }

    /// Change of domain along a linear map: the form `(x, y) -> omega(g(x), g(y))`
    /// where `g` is given on the basis of `new_domain` by `images`.
    pub(crate) fn pull_back(
        &self,
        f: &Field,
        new_domain: Subspace,
        images: &[Vector],
    ) -> Result<HermitianForm> {
        let k = new_domain.dim();
        let coords: Matrix = images
            .iter()
            .map(|v| self.coords(f, v))
            .collect::<Result<_>>()?;
        let mut gram = vec![matrix::zero_vector(k); k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = self.eval_coords(f, &coords[i], &coords[j]);
            }
        }
        Ok(HermitianForm {
            domain: new_domain,
            gram,
        })
    }
}

/// Extends each `omega_i` (domain `V_{i+1}`, radical `V_i`) to a form on all
/// of `V` along the decomposition `V = C_1 (+) .. (+) C_{t+1} (+) p`, where
/// `C_i` complements `V_{i-1}` in `V_i` and `C_{t+1}` complements `V_t` in
/// `p^perp` (for `omega_t`):
///
/// `ext_i(x, y) = sum_{i <= j <= t} omega_j(pr_{C_{j+1}} x, pr_{C_{j+1}} y) + omega_t(pr_p x, pr_p y)`.
pub fn extend_forms(
    f: &Field,
    flag: &Flag,
    forms: &[HermitianForm],
    p: &Subspace,
) -> Result<Vec<HermitianForm>> {
    extend_forms_with(f, flag, forms, p, ComplementPolicy::Greedy)
}

pub fn extend_forms_with(
    f: &Field,
    flag: &Flag,
    forms: &[HermitianForm],
    p: &Subspace,
    policy: ComplementPolicy,
) -> Result<Vec<HermitianForm>> {
    let t = flag.t();
    if forms.len() != t + 1 {
        return Err(Error::InvalidSpec(format!(
            "{} forms for a flag with t = {t}",
            forms.len()
        )));
    }
    for (i, form) in forms.iter().enumerate() {
        if form.domain() != flag.member(i + 1) {
            return Err(Error::InvalidSpec(format!(
                "form {i} is not defined on V_{}",
                i + 1
            )));
        }
        let rad = form.radical(f, form.domain())?;
        if &rad != flag.member(i) {
            return Err(Error::RadicalMismatch {
                index: i,
                expected: flag.member(i).dim(),
                found: rad.dim(),
            });
        }
    }
    if p.dim() != 1 {
        return Err(Error::Precondition("p must be one-dimensional".into()));
    }
    let top = &forms[t];
    if !top.is_nondegenerate(f, p)? {
        return Err(Error::Degenerate);
    }
    let n = flag.ambient_dim();

    let mut summands = Vec::with_capacity(t + 2);
    for i in 1..=t {
        summands.push(complement_with(
            f,
            flag.member(i - 1),
            flag.member(i),
            policy,
            i as u64,
        )?);
    }
    let p_perp = top.perp(f, p)?;
    summands.push(complement_with(
        f,
        flag.member(t),
        &p_perp,
        policy,
        (t + 1) as u64,
    )?);
    summands.push(p.clone());
    let decomposition = Decomposition::new(f, summands)?;
    if decomposition.ambient().dim() != n {
        return Err(Error::InvalidDecomposition(
            "complements do not span V".into(),
        ));
    }

    // components of every standard basis vector in each summand
    let basis = matrix::identity(n);
    let comps: Vec<Vec<Vector>> = basis
        .iter()
        .map(|e| decomposition.components(f, e))
        .collect::<Result<_>>()?;

    let mut partial = vec![vec![matrix::zero_vector(n); n]; t + 2];
    // partial[j] holds omega_j on C_{j+1}, j <= t; partial[t+1] holds omega_t on p
    for j in 0..=t + 1 {
        let form = if j <= t { &forms[j] } else { top };
        for a in 0..n {
            for b in 0..n {
                partial[j][a][b] = form.evaluate(f, &comps[a][j], &comps[b][j])?;
            }
        }
    }
    let full = Subspace::full(n);
    let mut out = Vec::with_capacity(t + 1);
    for i in 0..=t {
        let mut gram = partial[t + 1].clone();
        for part in &partial[i..=t] {
            for a in 0..n {
                for b in 0..n {
                    gram[a][b] = f.add(gram[a][b], part[a][b]);
                }
            }
        }
        out.push(HermitianForm::new(f, full.clone(), gram)?);
    }
    Ok(out)
}

/// `omega^p(v, w) = omega(pr(v), pr(w))` with `pr` the projection onto
/// `p^perp` along `p`. `omega` must be defined on the whole space.
pub fn project_form(f: &Field, form: &HermitianForm, p: &Subspace) -> Result<HermitianForm> {
    if !form.domain().is_full() {
        return Err(Error::Precondition(
            "projection needs a form on the whole space".into(),
        ));
    }
    if p.dim() != 1 {
        return Err(Error::Precondition("p must be one-dimensional".into()));
    }
    let pv = &p.basis()[0];
    let pp = form.evaluate(f, pv, pv)?;
    if pp.is_zero() {
        return Err(Error::Degenerate);
    }
    let inv = f.inv_nonzero(pp);
    let n = form.domain().ambient_dim();
    let projected: Vec<Vector> = matrix::identity(n)
        .iter()
        .map(|e| {
            let c = f.mul(form.evaluate(f, e, pv)?, inv);
            Ok(sub_vec(f, e, &matrix::scale_vec(f, c, pv)))
        })
        .collect::<Result<_>>()?;
    form.pull_back(f, Subspace::full(n), &projected)
}

/// Projection onto `p^perp` along `p`, for a form non-degenerate on `p`.
pub fn project_along(f: &Field, form: &HermitianForm, p: &Subspace, v: &[Fe]) -> Result<Vector> {
    let pv = &p.basis()[0];
    let pp = form.evaluate(f, pv, pv)?;
    if pp.is_zero() {
        return Err(Error::Degenerate);
    }
    let c = f.mul(form.evaluate(f, v, pv)?, f.inv_nonzero(pp));
    Ok(sub_vec(f, v, &matrix::scale_vec(f, c, pv)))
}

/// Two independent vectors of the common domain, non-isotropic for every form.
///
/// Search order: standard basis vectors of the domain first (as far as they
/// lie in it), then the remaining points in canonical order.
pub fn find_nonisotropic_pair(
    f: &Field,
    forms: &[HermitianForm],
) -> Result<Option<(Vector, Vector)>> {
    let Some(first) = forms.first() else {
        return Err(Error::Precondition("no forms given".into()));
    };
    let domain = first.domain().clone();
    if forms.iter().any(|w| w.domain() != &domain) {
        return Err(Error::Precondition("forms must share a domain".into()));
    }
    let good = |v: &[Fe]| -> Result<bool> {
        for w in forms {
            if !w.is_nonisotropic(f, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut candidates: Vec<Vector> = Vec::new();
    let n = domain.ambient_dim();
    for i in 0..n {
        let e = matrix::unit_vector(n, i);
        if domain.contains_vector(f, &e) {
            candidates.push(e);
        }
    }
    let standard: Vec<Subspace> = candidates
        .iter()
        .map(|v| Subspace::point(f, v))
        .collect::<Result<_>>()?;
    for pt in domain.points(f) {
        if !standard.contains(&pt) {
            candidates.push(pt.basis()[0].clone());
        }
    }
    let mut found: Option<Vector> = None;
    for v in candidates {
        if !good(&v)? {
            continue;
        }
        match &found {
            None => found = Some(v),
            Some(u) => return Ok(Some((u.clone(), v))),
        }
    }
    Ok(None)
}

/// Number of points `<v>` of `s` with `omega(v, v) = 0`.
pub fn count_isotropic_points(f: &Field, form: &HermitianForm, s: &Subspace) -> Result<usize> {
    let mut count = 0;
    for pt in s.points(f) {
        if !form.is_nonisotropic(f, &pt.basis()[0])? {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::unit_vector;
    use crate::linalg::{enumerate_subspaces, enumerate_vectors};

    fn fe(f: &Field, n: i64) -> Fe {
        f.from_int(n)
    }

    #[test]
    fn evaluate_examples() {
        let f = Field::new(5, 1, 1).unwrap();
        let w = HermitianForm::standard(Subspace::full(2));
        let zero = vec![Fe::ZERO, Fe::ZERO];
        let y = vec![fe(&f, 3), fe(&f, 4)];
        assert_eq!(w.evaluate(&f, &zero, &y).unwrap(), Fe::ZERO);
        let a = vec![fe(&f, 1), fe(&f, 1)];
        let b = vec![fe(&f, 1), fe(&f, -1)];
        assert_eq!(w.evaluate(&f, &a, &b).unwrap(), Fe::ZERO);

        let f4 = Field::new(2, 2, 2).unwrap();
        let h = HermitianForm::standard(Subspace::full(2));
        for x in enumerate_vectors(&f4, 2) {
            let direct = f4.add(f4.mul(x[0], f4.sigma(x[0])), f4.mul(x[1], f4.sigma(x[1])));
            assert_eq!(h.evaluate(&f4, &x, &x).unwrap(), direct);
        }
    }

    #[test]
    fn outside_domain_rejected() {
        let f = Field::new(3, 1, 1).unwrap();
        let d = Subspace::span(&f, 2, &[unit_vector(2, 0)]).unwrap();
        let w = HermitianForm::standard(d);
        assert_eq!(
            w.evaluate(&f, &unit_vector(2, 1), &unit_vector(2, 0)),
            Err(Error::OutsideDomain)
        );
    }

    #[test]
    fn non_hermitian_rejected() {
        let f = Field::new(3, 1, 1).unwrap();
        let g = vec![vec![Fe::ONE, Fe::ONE], vec![Fe::ZERO, Fe::ONE]];
        assert!(matches!(
            HermitianForm::new(&f, Subspace::full(2), g),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn radical_examples() {
        let f = Field::new(3, 1, 1).unwrap();
        let v = Subspace::full(2);
        assert!(HermitianForm::standard(v.clone())
            .radical(&f, &v)
            .unwrap()
            .is_zero());
        assert_eq!(HermitianForm::zero(v.clone()).radical(&f, &v).unwrap(), v);
        let rank_one = HermitianForm::diagonal(&f, v.clone(), &[Fe::ONE, Fe::ZERO]).unwrap();
        assert_eq!(
            rank_one.radical(&f, &v).unwrap(),
            Subspace::point(&f, &unit_vector(2, 1)).unwrap()
        );
    }

    #[test]
    fn nondegenerate_examples() {
        let f4 = Field::new(2, 2, 2).unwrap();
        let h = HermitianForm::standard(Subspace::full(2));
        assert!(h.is_nondegenerate(&f4, &Subspace::zero(2)).unwrap());
        let w = f4.generator_x();
        let iso = Subspace::point(&f4, &[Fe::ONE, w]).unwrap();
        assert!(!h.is_nondegenerate(&f4, &iso).unwrap());
        for pt in enumerate_subspaces(&f4, 2, 1) {
            let v = &pt.basis()[0];
            assert_eq!(
                h.is_nondegenerate(&f4, &pt).unwrap(),
                !h.evaluate(&f4, v, v).unwrap().is_zero()
            );
        }
    }

    #[test]
    fn perp_examples() {
        let f = Field::new(5, 1, 1).unwrap();
        let v = Subspace::full(3);
        let w = HermitianForm::standard(v.clone());
        assert_eq!(w.perp(&f, &Subspace::zero(3)).unwrap(), v);
        assert_eq!(
            HermitianForm::zero(v.clone())
                .perp(&f, &Subspace::full(3))
                .unwrap(),
            v
        );
        for k in 0..=3 {
            for s in enumerate_subspaces(&f, 3, k).iter().step_by(5) {
                assert_eq!(w.perp(&f, s).unwrap().dim(), 3 - s.dim());
            }
        }
    }

    #[test]
    fn isotropic_counts() {
        let f5 = Field::new(5, 1, 1).unwrap();
        let v = Subspace::full(2);
        assert_eq!(
            count_isotropic_points(&f5, &HermitianForm::zero(v.clone()), &v).unwrap(),
            6
        );
        assert_eq!(
            count_isotropic_points(&f5, &HermitianForm::standard(v.clone()), &v).unwrap(),
            2
        );
        let f4 = Field::new(2, 2, 2).unwrap();
        assert_eq!(
            count_isotropic_points(&f4, &HermitianForm::standard(v.clone()), &v).unwrap(),
            3
        );
    }

    #[test]
    fn nonisotropic_pair_examples() {
        let f5 = Field::new(5, 1, 1).unwrap();
        let v = Subspace::full(2);
        let w = HermitianForm::diagonal(&f5, v.clone(), &[fe(&f5, 2), fe(&f5, 3)]).unwrap();
        let (a, b) = find_nonisotropic_pair(&f5, &[w]).unwrap().unwrap();
        assert_eq!((a, b), (unit_vector(2, 0), unit_vector(2, 1)));
    }

    #[test]
    fn admits_nonisotropic_matches_exhaustive_search() {
        for (p, e, s) in [(2, 1, 1), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 2, 2)] {
            let f = Field::new(p, e, s).unwrap();
            let v = Subspace::full(2);
            let fixed = f.fixed_elements();
            for &a in &fixed {
                for &d in &fixed {
                    for b in f.elements() {
                        let g = vec![vec![a, b], vec![f.sigma(b), d]];
                        let w = HermitianForm::new(&f, v.clone(), g).unwrap();
                        let exhaustive = enumerate_vectors(&f, 2)
                            .any(|x| !w.evaluate(&f, &x, &x).unwrap().is_zero());
                        assert_eq!(
                            w.admits_nonisotropic(&f),
                            exhaustive,
                            "{f:?} {a:?} {b:?} {d:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn projection_form_basics() {
        let f = Field::new(3, 1, 1).unwrap();
        let v = Subspace::full(3);
        let w = HermitianForm::standard(v.clone());
        let p = Subspace::point(&f, &[Fe::ONE, Fe::ONE, Fe::ZERO]).unwrap();
        let wp = project_form(&f, &w, &p).unwrap();
        let pv = &p.basis()[0];
        for x in enumerate_vectors(&f, 3) {
            assert_eq!(wp.evaluate(&f, pv, &x).unwrap(), Fe::ZERO);
        }
        let perp = w.perp(&f, &p).unwrap();
        for x in perp.points(&f) {
            for y in perp.points(&f) {
                let (x, y) = (&x.basis()[0], &y.basis()[0]);
                assert_eq!(
                    wp.evaluate(&f, x, y).unwrap(),
                    w.evaluate(&f, x, y).unwrap()
                );
            }
        }
        let iso = Subspace::point(&f, &[Fe::ONE, Fe::ONE, Fe::ONE]).unwrap();
        assert_eq!(project_form(&f, &w, &iso), Err(Error::Degenerate));
    }

    #[test]
    fn extension_trivial_flag_is_identity() {
        let f = Field::new(5, 1, 1).unwrap();
        let v = Subspace::full(3);
        let w = HermitianForm::standard(v.clone());
        let p = Subspace::point(&f, &unit_vector(3, 0)).unwrap();
        let ext = extend_forms(&f, &Flag::trivial(3), &[w.clone()], &p).unwrap();
        assert_eq!(ext, vec![w]);
    }
}
