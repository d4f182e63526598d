//! Exact arithmetic in `F_p` and `F_{p^r} = F_p[w]/(M(w))`.
//!
//! Elements are stored as packed base-`p` integers (`sum c_i p^i` for the
//! coefficient vector `c`), so a coefficient is a plain `u64` inside sparse
//! polynomials. The [`Field`] handle performs all arithmetic on these raw
//! representatives; [`FieldElem`] bundles a representative with its field for
//! standalone use.
//!
//! Irreducibility of `M` is not checked up front. Inversion runs the extended
//! Euclidean algorithm against `M` and reports
//! [`Error::ReducibleModulus`](crate::Error::ReducibleModulus) when it meets a
//! nontrivial gcd.

mod lucas;
mod prime;

pub use lucas::{binom_mod, binom_mod_u64};
pub use prime::is_prime;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Deref, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest `q = p^r` served by precomputed addition/multiplication tables.
const TABLE_LIMIT: u64 = 256;

/// Static description of a finite field.
pub struct FieldSpec {
    p: u64,
    r: usize,
    q: u64,
    /// Monic modulus, coefficients low to high, length `r + 1`; empty when `r == 1`.
    modulus: Vec<u64>,
    generator: char,
    tables: Option<Tables>,
    frob: FrobeniusPowers,
}

struct Tables {
    add: Vec<u8>,
    mul: Vec<u8>,
}

/// `F^j` for `j < pre + period`, where `F` is the matrix of `a -> a^p`. The
/// sequence `F^j` is eventually periodic even for a reducible modulus.
struct FrobeniusPowers {
    mats: Vec<Vec<Vec<u64>>>,
    pre: usize,
    period: usize,
}

/// Shared handle to a [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl Deref for Field {
    type Target = FieldSpec;
    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p == other.p && self.r == other.r && self.modulus == other.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            write!(f, "GF({})", self.p)
        } else {
            let m: Vec<u64> = self.modulus.clone();
            write!(f, "GF({}; mod=", self.q)?;
            write_digits_poly(f, &m, self.generator)?;
            write!(f, ")")
        }
    }
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Self::build(p, Vec::new(), 'w')
    }

    /// `F_p[w]/(M)` with `modulus` given low to high; it must be monic of
    /// degree at least 1. A degree-1 modulus yields `F_p` itself.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Field> {
        Self::build(p, modulus, 'w')
    }

    pub fn with_generator(p: u64, modulus: Vec<u64>, generator: char) -> Result<Field> {
        Self::build(p, modulus, generator)
    }

    fn build(p: u64, mut modulus: Vec<u64>, generator: char) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p >= 1 << 62 {
            return Err(Error::InvalidField(format!("{p} exceeds 2^62")));
        }
        for c in modulus.iter_mut() {
            *c %= p;
        }
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        let r = if modulus.is_empty() {
            1
        } else {
            if modulus.len() < 2 {
                return Err(Error::InvalidField("modulus must have degree >= 1".into()));
            }
            if *modulus.last().unwrap() != 1 {
                return Err(Error::InvalidField("modulus must be monic".into()));
            }
            modulus.len() - 1
        };
        if r == 1 {
            modulus.clear();
        }
        let q = (0..r)
            .try_fold(1u64, |acc, _| acc.checked_mul(p))
            .filter(|&q| q < 1 << 62)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{r} is too large")))?;
        let mut spec = FieldSpec {
            p,
            r,
            q,
            modulus,
            generator,
            tables: None,
            frob: FrobeniusPowers {
                mats: Vec::new(),
                pre: 0,
                period: 1,
            },
        };
        if r > 1 {
            spec.frob = spec.frobenius_powers();
            if q <= TABLE_LIMIT {
                spec.tables = Some(spec.build_tables());
            }
        }
        Ok(Field(Arc::new(spec)))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    pub fn elem(&self, raw: u64) -> FieldElem {
        FieldElem {
            field: self.clone(),
            raw: raw % self.q,
        }
    }

    pub fn zero_elem(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one_elem(&self) -> FieldElem {
        self.elem(1)
    }

    /// The generator `w` (equal to `0` in a prime field, where `w` is undefined).
    pub fn generator_elem(&self) -> Option<FieldElem> {
        (self.r > 1).then(|| self.elem(self.p))
    }

    pub fn ptr_eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn generator(&self) -> char {
        self.generator
    }

    fn unpack(&self, mut a: u64) -> Vec<u64> {
        let mut v = vec![0; self.r];
        for c in v.iter_mut() {
            *c = a % self.p;
            a /= self.p;
        }
        v
    }

    fn pack(&self, v: &[u64]) -> u64 {
        v.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    #[inline]
    fn mod_add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn mod_mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[inline]
    fn mod_neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            return self.mod_add(a, b);
        }
        if let Some(t) = &self.tables {
            return t.add[(a * self.q + b) as usize] as u64;
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.unpack(a), self.unpack(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(&u, &v)| self.mod_add(u, v)).collect();
        self.pack(&s)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.r == 1 {
            return self.mod_neg(a);
        }
        let x: Vec<u64> = self.unpack(a).into_iter().map(|c| self.mod_neg(c)).collect();
        self.pack(&x)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            return self.mod_add(a, self.mod_neg(b));
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            return self.mod_mul(a, b);
        }
        if let Some(t) = &self.tables {
            return t.mul[(a * self.q + b) as usize] as u64;
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.unpack(a), self.unpack(b));
        let mut prod = vec![0u64; 2 * self.r - 1];
        for (i, &u) in x.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = self.mod_add(prod[i + j], self.mod_mul(u, v));
            }
        }
        self.reduce_poly(&mut prod);
        self.pack(&prod[..self.r])
    }

    /// Reduce a coefficient vector modulo the monic modulus, in place.
    fn reduce_poly(&self, v: &mut Vec<u64>) {
        let r = self.r;
        for top in (r..v.len()).rev() {
            let c = v[top];
            if c == 0 {
                continue;
            }
            v[top] = 0;
            for i in 0..r {
                let sub = self.mod_mul(c, self.modulus[i]);
                v[top - r + i] = self.mod_add(v[top - r + i], self.mod_neg(sub));
            }
        }
        if v.len() < r {
            v.resize(r, 0);
        }
        v.truncate(r);
    }

    /// Multiplicative inverse; distinguishes zero from a non-unit.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.r == 1 {
            return Ok(mod_inverse(a, self.p).expect("prime modulus"));
        }
        self.inv_ext(a)
    }

    fn inv_ext(&self, a: u64) -> Result<u64> {
        // Extended Euclid in F_p[w] between a(w) and M(w).
        let p = self.p;
        let trim = |v: &mut Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
        };
        let mut r0 = self.modulus.clone();
        let mut r1 = self.unpack(a);
        trim(&mut r1);
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // (q, rem) = r0 / r1
            let mut rem = r0.clone();
            let d1 = r1.len() - 1;
            let lead_inv = mod_inverse(r1[d1], p).expect("nonzero mod prime");
            let mut quo = vec![0u64; rem.len().saturating_sub(d1).max(1)];
            while rem.len() > d1 {
                let top = rem.len() - 1;
                let c = self.mod_mul(rem[top], lead_inv);
                let shift = top - d1;
                quo[shift] = c;
                for (i, &b) in r1.iter().enumerate() {
                    let s = self.mod_mul(c, b);
                    rem[shift + i] = self.mod_add(rem[shift + i], self.mod_neg(s));
                }
                trim(&mut rem);
            }
            // s_next = s0 - quo * s1
            let mut prod = vec![0u64; quo.len() + s1.len()];
            for (i, &u) in quo.iter().enumerate() {
                for (j, &v) in s1.iter().enumerate() {
                    prod[i + j] = self.mod_add(prod[i + j], self.mod_mul(u, v));
                }
            }
            let len = prod.len().max(s0.len());
            let mut s_next = vec![0u64; len];
            for (i, c) in s_next.iter_mut().enumerate() {
                let x = s0.get(i).copied().unwrap_or(0);
                let y = prod.get(i).copied().unwrap_or(0);
                *c = self.mod_add(x, self.mod_neg(y));
            }
            trim(&mut s_next);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s_next);
        }
        // r0 = gcd
        if r0.len() != 1 {
            return Err(Error::ReducibleModulus {
                modulus: self.modulus_string(),
                element: self.format_raw(a),
            });
        }
        let g_inv = mod_inverse(r0[0], p).expect("nonzero");
        let mut s: Vec<u64> = s0.iter().map(|&c| self.mod_mul(c, g_inv)).collect();
        s.resize(self.r, 0);
        Ok(self.pack(&s))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: u64, k: u64) -> u64 {
        if self.r == 1 || a < self.p || k == 0 {
            return a;
        }
        let fp = &self.frob;
        let idx = if k < fp.pre as u64 {
            k as usize
        } else if fp.period > 0 {
            fp.pre + ((k - fp.pre as u64) % fp.period as u64) as usize
        } else {
            let mut x = a;
            for _ in 0..k {
                x = self.pow(x, self.p);
            }
            return x;
        };
        let m = &fp.mats[idx];
        let v = self.unpack(a);
        let out: Vec<u64> = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&v)
                    .fold(0, |acc, (&x, &y)| self.mod_add(acc, self.mod_mul(x, y)))
            })
            .collect();
        self.pack(&out)
    }

    /// Whether `a` lies in the prime subfield.
    pub fn in_prime_field(&self, a: u64) -> bool {
        a < self.p
    }

    pub fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.q)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_slow(a as u64, b as u64) as u8;
                mul[a * q + b] = self.mul_slow(a as u64, b as u64) as u8;
            }
        }
        Tables { add, mul }
    }

    fn frobenius_powers(&self) -> FrobeniusPowers {
        let r = self.r;
        // columns: image of w^i under a -> a^p
        let mut f = vec![vec![0u64; r]; r];
        for i in 0..r {
            let mut basis = vec![0u64; r];
            basis[i] = 1;
            let wi = self.pack(&basis);
            let img = self.unpack(self.pow_slow(wi, self.p));
            for (row, &c) in img.iter().enumerate() {
                f[row][i] = c;
            }
        }
        let ident: Vec<Vec<u64>> = (0..r)
            .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
            .collect();
        let mut mats = vec![ident];
        // Bounded search for the eventual cycle; the tail of a reducible
        // modulus is logarithmic in its multiplicities.
        let limit = 4 * r + 70;
        loop {
            let last = mats.last().unwrap();
            let next = self.mat_mul(&f, last);
            if let Some(pos) = mats.iter().position(|m| *m == next) {
                let pre = pos;
                let period = mats.len() - pos;
                return FrobeniusPowers { mats, pre, period };
            }
            mats.push(next);
            if mats.len() > limit {
                let pre = mats.len();
                return FrobeniusPowers {
                    mats,
                    pre,
                    period: 0,
                };
            }
        }
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn mat_mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let r = a.len();
        let mut out = vec![vec![0u64; r]; r];
        for i in 0..r {
            for k in 0..r {
                if a[i][k] == 0 {
                    continue;
                }
                for j in 0..r {
                    out[i][j] = self.mod_add(out[i][j], self.mod_mul(a[i][k], b[k][j]));
                }
            }
        }
        out
    }

    pub fn modulus_string(&self) -> String {
        let mut s = String::new();
        let _ = write_digits_poly(&mut s, &self.modulus, self.generator);
        s
    }

    /// Canonical text of a raw element: an integer in `F_p`, otherwise a
    /// polynomial in the generator.
    pub fn format_raw(&self, a: u64) -> String {
        if self.r == 1 {
            return a.to_string();
        }
        let mut s = String::new();
        let _ = write_digits_poly(&mut s, &self.unpack(a), self.generator);
        s
    }

    /// Whether the canonical text of `a` is a sum of several terms.
    pub fn is_compound(&self, a: u64) -> bool {
        self.r > 1 && self.unpack(a).iter().filter(|&&c| c != 0).count() > 1
    }
}

fn write_digits_poly<W: fmt::Write>(out: &mut W, coeffs: &[u64], var: char) -> fmt::Result {
    let mut first = true;
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !first {
            out.write_str(" + ")?;
        }
        first = false;
        match (i, c) {
            (0, c) => write!(out, "{c}")?,
            (1, 1) => write!(out, "{var}")?,
            (1, c) => write!(out, "{c}*{var}")?,
            (i, 1) => write!(out, "{var}^{i}")?,
            (i, c) => write!(out, "{c}*{var}^{i}")?,
        }
    }
    if first {
        out.write_str("0")?;
    }
    Ok(())
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

/// An element of a finite field together with its field.
#[derive(Clone)]
pub struct FieldElem {
    field: Field,
    raw: u64,
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn raw(&self) -> u64 {
        self.raw
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    fn check(&self, other: &FieldElem) {
        assert!(self.field == other.field, "field mismatch");
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.field.elem(self.field.inv(self.raw)?))
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other);
        Ok(self.field.elem(self.field.div(self.raw, other.raw)?))
    }

    pub fn frobenius(&self, k: u64) -> FieldElem {
        self.field.elem(self.field.frobenius(self.raw, k))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.field.elem(self.field.pow(self.raw, e))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw && self.field == other.field
    }
}
impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.raw.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_raw(self.raw))
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.check(rhs);
        self.field.elem(self.field.add(self.raw, rhs.raw))
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self.check(rhs);
        self.field.elem(self.field.sub(self.raw, rhs.raw))
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.check(rhs);
        self.field.elem(self.field.mul(self.raw, rhs.raw))
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.field.elem(self.field.neg(self.raw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f4() -> Field {
        Field::extension(2, vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn char_two_addition() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(&f2.one_elem() + &f2.one_elem(), f2.zero_elem());
    }

    #[test]
    fn f4_generator_squares_to_w_plus_one() {
        let f = f4();
        let w = f.generator_elem().unwrap();
        let w_plus_1 = &w + &f.one_elem();
        assert_eq!(&w * &w, w_plus_1);
        assert_eq!(w.to_string(), "w");
        assert_eq!(w_plus_1.to_string(), "w + 1");
    }

    #[test]
    fn division_in_f5() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.elem(2).checked_div(&f.elem(3)).unwrap(), f.elem(4));
        assert_eq!(
            f.elem(2).checked_div(&f.elem(0)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn frobenius_examples() {
        let f = f4();
        let w = f.generator_elem().unwrap();
        assert_eq!(w.frobenius(1), &w + &f.one_elem());
        assert_eq!(w.frobenius(0), w);
        assert_eq!(w.frobenius(2), w);
        let f7 = Field::prime(7).unwrap();
        for a in 0..7 {
            assert_eq!(f7.elem(a).frobenius(13), f7.elem(a));
        }
        // prime-subfield elements are fixed in extensions too
        assert_eq!(f.one_elem().frobenius(5), f.one_elem());
    }

    #[test]
    fn reducible_modulus_is_detected_on_division() {
        // w^2 + 1 = (w + 1)^2 over F_2
        let f = Field::extension(2, vec![1, 0, 1]).unwrap();
        let w1 = &f.generator_elem().unwrap() + &f.one_elem();
        assert!(matches!(w1.inv(), Err(Error::ReducibleModulus { .. })));
        // units still invert
        let w = f.generator_elem().unwrap();
        assert_eq!(&w.inv().unwrap() * &w, f.one_elem());
        // and the Frobenius table copes with the nilpotent
        assert_eq!(w1.frobenius(3), f.zero_elem());
    }

    #[test]
    fn large_extension_without_tables() {
        // w^7 + 2w^2 + 1 is irreducible over F_3
        let f = Field::extension(3, vec![1, 0, 2, 0, 0, 0, 0, 1]).unwrap();
        assert!(f.tables.is_none());
        let w = f.generator_elem().unwrap();
        assert_eq!(w.frobenius(7), w);
        assert_eq!(&w.inv().unwrap() * &w, f.one_elem());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Field::prime(4).is_err());
        assert!(Field::extension(3, vec![1, 1, 2]).is_err());
        assert!(Field::extension(5, vec![3]).is_err());
    }

    fn fields() -> Vec<Field> {
        vec![
            Field::prime(2).unwrap(),
            Field::prime(7).unwrap(),
            f4(),
            Field::extension(3, vec![1, 0, 1]).unwrap(), // F_9
            Field::extension(2, vec![1, 1, 0, 0, 1]).unwrap(), // F_16
            Field::extension(5, vec![1, 1, 0, 1]).unwrap(), // F_125, no tables
        ]
    }

    proptest! {
        #[test]
        fn field_axioms(idx in 0usize..6, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let f = &fields()[idx];
            let (a, b, c) = (f.elem(a), f.elem(b), f.elem(c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !a.is_zero() {
                prop_assert_eq!(&a.inv().unwrap() * &a, f.one_elem());
            }
        }

        #[test]
        fn frobenius_is_a_ring_map(idx in 0usize..6, a in any::<u64>(), b in any::<u64>(), k in 0u64..12) {
            let f = &fields()[idx];
            let (a, b) = (f.elem(a), f.elem(b));
            prop_assert_eq!((&a + &b).frobenius(k), &a.frobenius(k) + &b.frobenius(k));
            prop_assert_eq!((&a * &b).frobenius(k), &a.frobenius(k) * &b.frobenius(k));
            // repeated p-th powering
            let mut direct = a.clone();
            for _ in 0..k {
                direct = direct.pow(f.p());
            }
            prop_assert_eq!(a.frobenius(k), direct);
        }
    }
}
