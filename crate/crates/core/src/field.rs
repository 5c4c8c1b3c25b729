//! Finite fields `F_q`, `q = p^e`, together with a designated automorphism of
//! order one or two.
//!
//! Elements are stored by index: the coefficient vector `(c_0, .., c_{e-1})`
//! of the reduced polynomial `c_0 + c_1 x + .. + c_{e-1} x^{e-1}` read as the
//! base-`p` integer `c_0 + c_1 p + ..`. Index order is the canonical element
//! order used by every enumeration in the crate; zero is index 0 and one is
//! index 1.
//!
//! The extension is defined by the lexicographically least monic irreducible
//! polynomial of degree `e`, where polynomials `x^e + a_{e-1} x^{e-1} + .. + a_0`
//! are compared by the base-`p` integer `a_0 + a_1 p + .. + a_{e-1} p^{e-1}`.
//! For `F_4` this is `x^2 + x + 1`, for `F_9` it is `x^2 + 1`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order this crate will construct.
pub const MAX_ORDER: usize = 1 << 16;

/// Orders up to this bound get a full addition table.
const ADD_TABLE_LIMIT: usize = 1024;

/// A field element, identified by its canonical index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field description as it appears in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub e: u32,
    pub sigma_order: u8,
}

struct Inner {
    p: u32,
    e: u32,
    q: usize,
    sigma_order: u8,
    /// Monic modulus, lowest coefficient first, length e + 1.
    modulus: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1).
    exp: Vec<u32>,
    /// log[a] for a != 0.
    log: Vec<u32>,
    sigma: Vec<u32>,
}

/// A finite field with a designated automorphism `sigma`.
///
/// Cheap to clone; all clones share the same tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.e == other.0.e
                && self.0.sigma_order == other.0.sigma_order)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}(p={}, e={}, sigma_order={})",
            self.0.q, self.0.p, self.0.e, self.0.sigma_order
        )
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two polynomials over F_p and reduce modulo a monic `modulus`.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for deg in (e..2 * e).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for k in 0..e {
            let sub = c * modulus[k] as u64 % p as u64;
            let idx = deg - e + k;
            prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(e);
    prod.into_iter().map(|c| c as u32).collect()
}

fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    // b is monic
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - db;
        if lead != 0 {
            for (k, &bk) in b.iter().enumerate() {
                let sub = (lead as u64 * bk as u64 % p as u64) as u32;
                a[shift + k] = (a[shift + k] + p - sub) % p;
            }
        }
        a.pop();
    }
    a
}

fn digits(mut index: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((index % p as u64) as u32);
        index /= p as u64;
    }
    out
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let e = poly.len() - 1;
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut factor = digits(low, p, d);
            factor.push(1);
            if poly_rem(poly.to_vec(), &factor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(e);
    for low in 0..count {
        let mut poly = digits(low, p, e as usize);
        poly.push(1);
        if poly[0] != 0 && is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// Builds `F_{p^e}` with `sigma` the identity (`sigma_order = 1`) or the
    /// involution `x -> x^{sqrt q}` (`sigma_order = 2`).
    pub fn new(p: u32, e: u32, sigma_order: u8) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidField(
                "extension degree must be at least 1".into(),
            ));
        }
        match sigma_order {
            1 => {}
            2 if e % 2 == 0 => {}
            2 => return Err(Error::OddDegreeInvolution(e)),
            other => {
                return Err(Error::InvalidField(format!(
                    "sigma_order must be 1 or 2, got {other}"
                )))
            }
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q as usize <= MAX_ORDER)
            .ok_or_else(|| {
                Error::InvalidField(format!(
                    "p^e = {p}^{e} exceeds the supported order {MAX_ORDER}"
                ))
            })? as usize;

        let modulus = least_irreducible(p, e);
        let encode = |coeffs: &[u32]| -> u32 {
            coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| acc * p as u64 + c as u64) as u32
        };
        let decode = |i: usize| digits(i as u64, p, e as usize);

        // primitive element: smallest index whose powers reach every unit
        let mut exp = Vec::new();
        for cand in 1..q {
            let g = decode(cand);
            let mut powers = Vec::with_capacity(q - 1);
            let mut cur = decode(1);
            let mut seen = vec![false; q];
            let mut ok = true;
            for _ in 0..q - 1 {
                let idx = encode(&cur);
                if seen[idx as usize] {
                    ok = false;
                    break;
                }
                seen[idx as usize] = true;
                powers.push(idx);
                cur = poly_mul_mod(&cur, &g, &modulus, p);
            }
            if ok {
                exp = powers;
                break;
            }
        }
        if q == 2 {
            exp = vec![1];
        }
        let mut log = vec![0u32; q];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();

        let add_digits = |a: usize, b: usize| -> u32 {
            let da = decode(a);
            let db = decode(b);
            let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            encode(&sum)
        };
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = decode(a).iter().map(|&x| (p - x) % p).collect();
                encode(&d)
            })
            .collect();
        let add = if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; q * q];
            for a in 0..q {
                for b in a..q {
                    let s = add_digits(a, b);
                    t[a * q + b] = s;
                    t[b * q + a] = s;
                }
            }
            t
        } else {
            Vec::new()
        };

        let frob_power = if sigma_order == 2 {
            (p as u64).pow(e / 2)
        } else {
            1
        };
        let sigma: Vec<u32> = (0..q)
            .map(|a| {
                if a == 0 || frob_power == 1 {
                    a as u32
                } else {
                    let l = log[a] as u64 * frob_power % (q as u64 - 1);
                    doubled[l as usize]
                }
            })
            .collect();

        Ok(Field(Arc::new(Inner {
            p,
            e,
            q,
            sigma_order,
            modulus,
            add,
            neg,
            exp: doubled,
            log,
            sigma,
        })))
    }

    pub fn from_params(params: FieldParams) -> Result<Field> {
        Field::new(params.p, params.e, params.sigma_order)
    }

    pub fn params(&self) -> FieldParams {
        FieldParams {
            p: self.0.p,
            e: self.0.e,
            sigma_order: self.0.sigma_order,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> usize {
        self.0.q
    }

    pub fn sigma_order(&self) -> u8 {
        self.0.sigma_order
    }

    /// Monic defining polynomial, lowest coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// `sqrt(q)` when `q` is a square.
    pub fn sqrt_order(&self) -> Option<usize> {
        if self.0.e % 2 == 0 {
            Some((self.0.p as usize).pow(self.0.e / 2))
        } else {
            None
        }
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The class of `x` (as `x^1`) for extensions, `1` otherwise.
    pub fn generator_x(&self) -> Fe {
        if self.0.e > 1 {
            Fe(self.0.p)
        } else {
            Fe::ONE
        }
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.0;
        if inner.e == 1 {
            return Fe(((a.0 as u64 + b.0 as u64) % inner.p as u64) as u32);
        }
        if !inner.add.is_empty() {
            return Fe(inner.add[a.index() * inner.q + b.index()]);
        }
        let p = inner.p as u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fe(out as u32)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.index()])
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let inner = &*self.0;
        Fe(inner.exp[(inner.log[a.index()] + inner.log[b.index()]) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of an element known to be nonzero.
    pub(crate) fn inv_nonzero(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero());
        let inner = &*self.0;
        let l = inner.log[a.index()] as usize;
        let n = inner.q - 1;
        Fe(inner.exp[(n - l) % n])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if k == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let inner = &*self.0;
        let l = inner.log[a.index()] as u64 * (k % (inner.q as u64 - 1)) % (inner.q as u64 - 1);
        Fe(inner.exp[l as usize])
    }

    pub fn sigma(&self, a: Fe) -> Fe {
        Fe(self.0.sigma[a.index()])
    }

    pub fn is_sigma_fixed(&self, a: Fe) -> bool {
        self.sigma(a) == a
    }

    /// All `q` elements in canonical order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.0.q as u32).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (1..self.0.q as u32).map(Fe)
    }

    /// Elements fixed by `sigma`, in canonical order.
    pub fn fixed_elements(&self) -> Vec<Fe> {
        self.elements()
            .filter(|&a| self.is_sigma_fixed(a))
            .collect()
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        let inner = &*self.0;
        if coeffs.len() > inner.e as usize {
            return Err(Error::InvalidField(format!(
                "element has {} coefficients, field degree is {}",
                coeffs.len(),
                inner.e
            )));
        }
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= inner.p {
                return Err(Error::InvalidField(format!(
                    "coefficient {c} is not reduced mod {}",
                    inner.p
                )));
            }
            idx = idx * inner.p as u64 + c as u64;
        }
        Ok(Fe(idx as u32))
    }

    /// Coefficient vector of length `e`, lowest degree first.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(a.0 as u64, self.0.p, self.0.e as usize)
    }

    pub fn element(&self, index: usize) -> Result<Fe> {
        if index < self.0.q {
            Ok(Fe(index as u32))
        } else {
            Err(Error::InvalidField(format!(
                "element index {index} out of range for q = {}",
                self.0.q
            )))
        }
    }

    /// `a * sigma(a)`.
    pub fn norm(&self, a: Fe) -> Fe {
        self.mul(a, self.sigma(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f2 = Field::new(2, 1, 1).unwrap();
        assert_eq!(f2.order(), 2);
        assert!(f2.elements().all(|a| f2.sigma(a) == a));

        let f4 = Field::new(2, 2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let w = f4.generator_x();
        assert_eq!(f4.sigma(w), f4.mul(w, w));

        assert!(matches!(
            Field::new(3, 1, 2),
            Err(Error::OddDegreeInvolution(1))
        ));
        assert!(matches!(Field::new(4, 1, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(2, 0, 1), Err(Error::InvalidField(_))));
    }

    #[test]
    fn field_ops_examples() {
        let f5 = Field::new(5, 1, 1).unwrap();
        assert_eq!(f5.mul(f5.from_int(2), f5.from_int(3)), Fe::ONE);
        let f7 = Field::new(7, 1, 1).unwrap();
        assert_eq!(f7.inv(f7.from_int(3)).unwrap(), f7.from_int(5));
        assert_eq!(f7.inv(Fe::ZERO), Err(Error::DivisionByZero));

        // omega^2 = omega + 1 in F_2[x]/(x^2+x+1)
        let f4 = Field::new(2, 2, 1).unwrap();
        let w = f4.generator_x();
        assert_eq!(f4.coeffs(f4.mul(w, w)), vec![1, 1]);
        assert_eq!(f4.mul(w, w), f4.add(w, Fe::ONE));
    }

    #[test]
    fn f9_modulus_and_sigma() {
        let f9 = Field::new(3, 2, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        // x -> x^3 = -x when x^2 = -1
        let x = f9.generator_x();
        assert_eq!(f9.sigma(x), f9.neg(x));
        for a in f9.elements() {
            assert_eq!(f9.sigma(f9.sigma(a)), a);
        }
    }

    #[test]
    fn enumerate_elements_examples() {
        let f2 = Field::new(2, 1, 1).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![Fe::ZERO, Fe::ONE]);
        let f4 = Field::new(2, 2, 1).unwrap();
        assert_eq!(f4.elements().count(), 4);
        let f9 = Field::new(3, 2, 1).unwrap();
        let els: std::collections::HashSet<_> = f9.elements().collect();
        assert_eq!(els.len(), 9);
        assert_eq!(f9.elements().next(), Some(Fe::ZERO));
    }

    fn all_small_fields() -> Vec<Field> {
        let mut out = Vec::new();
        for &(p, e) in &[
            (2, 1),
            (3, 1),
            (5, 1),
            (7, 1),
            (2, 2),
            (2, 3),
            (3, 2),
            (2, 4),
            (5, 2),
            (3, 3),
            (3, 4),
        ] {
            out.push(Field::new(p, e, 1).unwrap());
            if e % 2 == 0 {
                out.push(Field::new(p, e, 2).unwrap());
            }
        }
        out
    }

    #[test]
    fn sigma_is_an_involutive_automorphism_exhaustively() {
        for f in all_small_fields() {
            for a in f.elements() {
                assert_eq!(f.sigma(f.sigma(a)), a, "{f:?}");
                for b in f.elements() {
                    assert_eq!(f.sigma(f.add(a, b)), f.add(f.sigma(a), f.sigma(b)));
                    assert_eq!(f.sigma(f.mul(a, b)), f.mul(f.sigma(a), f.sigma(b)));
                }
            }
            let fixed = f.fixed_elements().len();
            match f.sigma_order() {
                2 => assert_eq!(Some(fixed), f.sqrt_order()),
                _ => assert_eq!(fixed, f.order()),
            }
        }
    }

    #[test]
    fn field_axioms_exhaustively() {
        for f in all_small_fields() {
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements().step_by(3) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn large_field_without_add_table_agrees_with_digits() {
        let f = Field::new(2, 11, 1).unwrap();
        assert_eq!(f.order(), 2048);
        let a = f.element(1234).unwrap();
        let b = f.element(777).unwrap();
        assert_eq!(f.add(a, b).index(), 1234 ^ 777);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
    }

    #[test]
    fn coefficients_round_trip() {
        let f = Field::new(3, 3, 1).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
        assert!(f.from_coeffs(&[3]).is_err());
    }
}
