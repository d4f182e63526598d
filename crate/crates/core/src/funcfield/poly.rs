use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::dense;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::{pow_binary, pow_frobenius};

static DENSE_THRESHOLD: AtomicUsize = AtomicUsize::new(1 << 14);

/// Degree below which multiplication, division and gcd switch to dense
/// coefficient vectors.
pub fn dense_threshold() -> usize {
    DENSE_THRESHOLD.load(AtomicOrdering::Relaxed)
}

pub fn set_dense_threshold(degree: usize) {
    DENSE_THRESHOLD.store(degree.max(1), AtomicOrdering::Relaxed);
}

/// A sparse polynomial in `t` over a finite field.
///
/// Terms are `(exponent, coefficient)` with strictly increasing
/// arbitrary-precision exponents and nonzero raw coefficients; the empty list
/// is zero. Objects like `t^(2^64) + t` cost two terms.
#[derive(Clone)]
pub struct FFPoly {
    field: Field,
    terms: Vec<(BigUint, u64)>,
}

impl PartialEq for FFPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.field == other.field
    }
}
impl Eq for FFPoly {}

impl Hash for FFPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl FFPoly {
    pub fn zero(field: &Field) -> Self {
        FFPoly {
            field: field.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &Field, raw: u64) -> Self {
        Self::monomial(field, raw, BigUint::zero())
    }

    /// `c * t^e`.
    pub fn monomial(field: &Field, raw: u64, e: BigUint) -> Self {
        let raw = raw % field.q();
        let terms = if raw == 0 { Vec::new() } else { vec![(e, raw)] };
        FFPoly {
            field: field.clone(),
            terms,
        }
    }

    pub fn t(field: &Field) -> Self {
        Self::monomial(field, 1, BigUint::one())
    }

    /// From arbitrary terms: sorts, merges duplicates and drops zeros.
    pub fn from_terms(field: &Field, mut terms: Vec<(BigUint, u64)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(BigUint, u64)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            let c = c % field.q();
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = field.add(last.1, c),
                _ => out.push((e, c)),
            }
            if out.last().is_some_and(|l| l.1 == 0) {
                out.pop();
            }
        }
        FFPoly { field: field.clone(), terms: out }
    }

    /// From a dense vector, low to high.
    pub fn from_dense(field: &Field, coeffs: &[u64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (BigUint::from(i), c))
            .collect();
        FFPoly { field: field.clone(), terms }
    }

    pub fn to_dense(&self) -> Option<Vec<u64>> {
        let deg = match self.terms.last() {
            None => return Some(Vec::new()),
            Some((e, _)) => e.to_usize()?,
        };
        let mut v = vec![0u64; deg + 1];
        for (e, c) in &self.terms {
            v[e.to_usize()?] = *c;
        }
        Some(v)
    }

    fn dense_degree(&self) -> Option<usize> {
        match self.terms.last() {
            None => Some(0),
            Some((e, _)) => e.to_usize().filter(|&d| d <= dense_threshold()),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &[(BigUint, u64)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1 == 1
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<&BigUint> {
        self.terms.last().map(|(e, _)| e)
    }

    /// Degree with zero mapped to 0.
    pub fn degree_or_zero(&self) -> BigUint {
        self.degree().cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> u64 {
        self.terms.last().map_or(0, |t| t.1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_zero())
    }

    pub fn constant_term(&self) -> u64 {
        match self.terms.first() {
            Some((e, c)) if e.is_zero() => *c,
            _ => 0,
        }
    }

    pub fn coeff(&self, e: &BigUint) -> u64 {
        self.terms
            .binary_search_by(|(x, _)| x.cmp(e))
            .map_or(0, |i| self.terms[i].1)
    }

    fn check(&self, other: &FFPoly) {
        assert!(self.field == other.field, "field mismatch");
    }

    fn merge(&self, other: &FFPoly, negate_other: bool) -> FFPoly {
        self.check(other);
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let b_coef = |c: u64| if negate_other { f.neg(c) } else { c };
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match ea.cmp(eb) {
                Ordering::Less => {
                    out.push((ea.clone(), *ca));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((eb.clone(), b_coef(*cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(*ca, b_coef(*cb));
                    if c != 0 {
                        out.push((ea.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(e, c)| (e.clone(), b_coef(*c))));
        FFPoly {
            field: f.clone(),
            terms: out,
        }
    }

    pub fn scale(&self, raw: u64) -> FFPoly {
        if raw == 0 {
            return FFPoly::zero(&self.field);
        }
        let f = &self.field;
        FFPoly {
            field: f.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.mul(*c, raw))).collect(),
        }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: &BigUint) -> FFPoly {
        FFPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (e + k, *c)).collect(),
        }
    }

    fn mul_impl(&self, other: &FFPoly) -> FFPoly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return FFPoly::zero(&self.field);
        }
        if let (Some(da), Some(db)) = (self.dense_degree(), other.dense_degree()) {
            let work = self.terms.len() * other.terms.len();
            if da + db <= dense_threshold() && work * 4 > da + db {
                let a = self.to_dense().unwrap();
                let b = other.to_dense().unwrap();
                return FFPoly::from_dense(&self.field, &dense::mul(&self.field, &a, &b));
            }
        }
        let f = &self.field;
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let (single, many) = if self.terms.len() == 1 {
                (self, other)
            } else {
                (other, self)
            };
            let (e0, c0) = &single.terms[0];
            return FFPoly {
                field: f.clone(),
                terms: many
                    .terms
                    .iter()
                    .map(|(e, c)| (e + e0, f.mul(*c, *c0)))
                    .collect(),
            };
        }
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                prods.push((ea + eb, f.mul(*ca, *cb)));
            }
        }
        FFPoly::from_terms(f, prods)
    }

    /// `self^(p^k)`: coefficients go through the field Frobenius and exponents
    /// are multiplied by `p^k`.
    pub fn frobenius(&self, k: u64) -> FFPoly {
        if k == 0 {
            return self.clone();
        }
        let f = &self.field;
        let pk = BigUint::from(f.p()).pow(k as u32);
        FFPoly {
            field: f.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e * &pk, f.frobenius(*c, k)))
                .collect(),
        }
    }

    /// Power via base-`p` digits and Frobenius.
    pub fn pow(&self, e: &BigUint) -> FFPoly {
        let one = FFPoly::one(&self.field);
        pow_frobenius(
            self,
            e,
            self.field.p(),
            &one,
            |a, b| a * b,
            |a, k| a.frobenius(k),
        )
    }

    /// Power by plain square-and-multiply, never using the Frobenius map.
    pub fn pow_by_squaring(&self, e: &BigUint) -> FFPoly {
        let one = FFPoly::one(&self.field);
        pow_binary(self, e, &one, |a, b| a * b)
    }

    pub fn monic(&self) -> FFPoly {
        match self.terms.last() {
            None => self.clone(),
            Some(&(_, 1)) => self.clone(),
            Some(&(_, lead)) => self.scale(self.field.inv(lead).expect("nonzero")),
        }
    }

    /// Quotient and remainder by a nonzero divisor (long division).
    pub fn divrem(&self, d: &FFPoly) -> Result<(FFPoly, FFPoly)> {
        self.check(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let (Some(_), Some(_)) = (self.dense_degree(), d.dense_degree()) {
            let (q, r) = dense::divrem(
                &self.field,
                &self.to_dense().unwrap(),
                &d.to_dense().unwrap(),
            );
            return Ok((
                FFPoly::from_dense(&self.field, &q),
                FFPoly::from_dense(&self.field, &r),
            ));
        }
        let f = &self.field;
        let dd = d.degree().unwrap().clone();
        let inv = f.inv(d.leading_coeff())?;
        let mut rem = self.clone();
        let mut quo = Vec::new();
        while let Some(top) = rem.degree() {
            if *top < dd {
                break;
            }
            let shift = top - &dd;
            let c = f.mul(rem.leading_coeff(), inv);
            let sub = d.shift(&shift).scale(c);
            quo.push((shift, c));
            rem = &rem - &sub;
        }
        Ok((FFPoly::from_terms(f, quo), rem))
    }

    /// Remainder. Uses modular exponentiation of `t` when the dividend is a
    /// sparse polynomial of huge degree and the divisor is small.
    pub fn rem(&self, d: &FFPoly) -> Result<FFPoly> {
        self.check(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.dense_degree().is_none() {
            if let Some(m) = d.to_dense().filter(|m| m.len() <= dense_threshold() + 1) {
                return Ok(self.rem_sparse_by_dense(&m));
            }
        }
        Ok(self.divrem(d)?.1)
    }

    fn rem_sparse_by_dense(&self, m: &[u64]) -> FFPoly {
        let f = &self.field;
        if m.len() == 1 {
            return FFPoly::zero(f);
        }
        let mut acc: Vec<u64> = Vec::new();
        let t = dense::rem(f, &[0, 1], m);
        for (e, c) in &self.terms {
            let mut power = vec![1u64];
            let mut base = t.clone();
            let bits = e.bits();
            for i in 0..bits {
                if e.bit(i) {
                    power = dense::mulmod(f, &power, &base, m);
                }
                if i + 1 < bits {
                    base = dense::mulmod(f, &base, &base, m);
                }
            }
            let len = acc.len().max(power.len());
            acc.resize(len, 0);
            for (i, &x) in power.iter().enumerate() {
                acc[i] = f.add(acc[i], f.mul(x, *c));
            }
        }
        dense::trim(&mut acc);
        FFPoly::from_dense(f, &acc)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, d: &FFPoly) -> Result<FFPoly> {
        if d.is_one() {
            return Ok(self.clone());
        }
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::RingMismatch(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &FFPoly) -> FFPoly {
        self.check(other);
        if self.is_one() || other.is_one() {
            return FFPoly::one(&self.field);
        }
        if let (Some(_), Some(_)) = (self.dense_degree(), other.dense_degree()) {
            let g = dense::gcd(
                &self.field,
                &self.to_dense().unwrap(),
                &other.to_dense().unwrap(),
            );
            return FFPoly::from_dense(&self.field, &g);
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// Evaluate at a field element given as a raw representative.
    pub fn eval_raw(&self, x: u64) -> u64 {
        let f = &self.field;
        self.terms.iter().fold(0, |acc, (e, c)| {
            let xe = pow_big_raw(f, x, e);
            f.add(acc, f.mul(*c, xe))
        })
    }

    pub(crate) fn write_key(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.terms.len() as u32).to_le_bytes());
        for (e, c) in &self.terms {
            let bytes = e.to_bytes_le();
            out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
            out.extend_from_slice(&bytes);
            out.extend_from_slice(&c.to_le_bytes());
        }
    }

    /// Canonical text using `var` for the indeterminate.
    pub fn format_with(&self, var: char) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let f = &self.field;
        let mut parts = Vec::with_capacity(self.terms.len());
        for (e, c) in self.terms.iter().rev() {
            let cs = f.format_raw(*c);
            let mono = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                var.to_string()
            } else {
                format!("{var}^{e}")
            };
            parts.push(if mono.is_empty() {
                cs
            } else if *c == 1 {
                mono
            } else if f.is_compound(*c) {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        parts.join(" + ")
    }
}

fn pow_big_raw(f: &Field, x: u64, e: &BigUint) -> u64 {
    let mut acc = 1;
    for i in (0..e.bits()).rev() {
        acc = f.mul(acc, acc);
        if e.bit(i) {
            acc = f.mul(acc, x);
        }
    }
    acc
}

impl fmt::Display for FFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with('t'))
    }
}

impl fmt::Debug for FFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FFPoly({self} over {})", self.field)
    }
}

impl<'a> Add<&'a FFPoly> for &'a FFPoly {
    type Output = FFPoly;
    fn add(self, rhs: &FFPoly) -> FFPoly {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a FFPoly> for &'a FFPoly {
    type Output = FFPoly;
    fn sub(self, rhs: &FFPoly) -> FFPoly {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a FFPoly> for &'a FFPoly {
    type Output = FFPoly;
    fn mul(self, rhs: &FFPoly) -> FFPoly {
        self.mul_impl(rhs)
    }
}

impl Neg for &FFPoly {
    type Output = FFPoly;
    fn neg(self) -> FFPoly {
        let f = &self.field;
        FFPoly {
            field: f.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(*c))).collect(),
        }
    }
}
