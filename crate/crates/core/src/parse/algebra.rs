//! Evaluation of expression trees in each target domain.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::syntax::Expr;
use crate::dynpoly::DynPoly;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::funcfield::{ExtElem, ExtRing, KPoly, RatFunc};
use crate::ring::{digits_base, pow_frobenius, RingElem};
use crate::twisted::TwistedPoly;

/// Work caps for evaluating untrusted text.
///
/// `expand` bounds `exponent * weight` when powering anything that is not a
/// single monomial; `products` bounds the term-by-term products of one
/// multiplication; `tau` bounds `T`-degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseLimits {
    pub expand: u64,
    pub products: u64,
    pub tau: u64,
}

impl Default for ParseLimits {
    fn default() -> Self {
        ParseLimits {
            expand: 1 << 12,
            products: 1 << 22,
            tau: crate::budget::DEFAULT_TAU_BUDGET,
        }
    }
}

/// Coefficient rings the parser can build: `K` and quotients of `K[y]`.
pub trait Scalar: RingElem {
    fn letter(ring: &Self::Ring, c: char) -> Option<Self>;
    fn term_count(&self) -> u64;
    fn is_monomial(&self) -> bool;
    /// Degree-like size used by the power guard.
    fn weight(&self) -> u64;
}

fn rat_letter(field: &Field, c: char) -> Option<RatFunc> {
    if c == 't' {
        Some(RatFunc::t(field))
    } else if c == field.generator() && field.r() > 1 {
        Some(RatFunc::constant(field, field.p()))
    } else {
        None
    }
}

fn sat(n: &BigUint) -> u64 {
    n.to_u64().unwrap_or(u64::MAX)
}

impl Scalar for RatFunc {
    fn letter(ring: &Field, c: char) -> Option<Self> {
        rat_letter(ring, c)
    }
    fn term_count(&self) -> u64 {
        (self.numerator().num_terms() + self.denominator().num_terms()) as u64
    }
    fn is_monomial(&self) -> bool {
        self.numerator().num_terms() <= 1 && self.denominator().num_terms() == 1
    }
    fn weight(&self) -> u64 {
        sat(&self.height()).max(1)
    }
}

impl Scalar for ExtElem {
    fn letter(ring: &ExtRing, c: char) -> Option<Self> {
        if c == 'y' {
            Some(ring.generator())
        } else {
            rat_letter(ring.field(), c).map(|r| ring.embed(&r))
        }
    }
    fn term_count(&self) -> u64 {
        self.poly().coeffs().iter().map(|c| c.term_count()).sum::<u64>().max(1)
    }
    fn is_monomial(&self) -> bool {
        self.as_base().is_some_and(|b| b.is_monomial())
    }
    fn weight(&self) -> u64 {
        let own = self.poly().coeffs().iter().map(|c| c.weight()).max().unwrap_or(1);
        let modulus = self.ext_ring().modulus().coeffs().iter().map(|c| c.weight()).max().unwrap_or(1);
        own.max(modulus).saturating_mul(self.ext_ring().degree() as u64)
    }
}

/// Powers are formed digit by digit in base `p`, so `a^e` has at most
/// `prod_j (weight * d_j + 1)^dims` terms for the digits `d_j` of `e`.
fn expand_guard(monomial: bool, weight: u64, dims: u32, e: &BigUint, p: u64, limit: u64) -> Result<()> {
    if monomial || e <= &BigUint::from(1u8) {
        return Ok(());
    }
    let mut needed: u128 = 1;
    for d in digits_base(e, p) {
        let factor = (weight.max(1) as u128).saturating_mul(d as u128).saturating_add(1);
        needed = needed.saturating_mul(factor.saturating_pow(dims));
        if needed > limit as u128 {
            return Err(Error::DegreeBudgetExceeded {
                needed: format!("more than {limit} terms (power expansion)"),
                budget: limit,
            });
        }
    }
    Ok(())
}

fn product_guard(a: u64, b: u64, limit: u64) -> Result<()> {
    let needed = (a as u128) * (b as u128);
    if needed > limit as u128 {
        return Err(Error::DegreeBudgetExceeded {
            needed: format!("{needed} (term products)"),
            budget: limit,
        });
    }
    Ok(())
}

pub(crate) trait Algebra {
    type V: Clone;
    fn characteristic(&self) -> u64;
    fn int(&self, n: u64) -> Self::V;
    fn var(&self, c: char, pos: usize) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V, pos: usize) -> Result<Self::V>;
    fn div(&self, a: &Self::V, b: &Self::V, pos: usize) -> Result<Self::V>;
    fn pow(&self, a: &Self::V, e: &BigUint, pos: usize) -> Result<Self::V>;
}

pub(crate) fn eval<A: Algebra>(alg: &A, e: &Expr) -> Result<A::V> {
    match e {
        Expr::Int(n) => {
            let p = BigUint::from(alg.characteristic());
            Ok(alg.int(sat(&(n % p))))
        }
        Expr::Var(c, pos) => alg.var(*c, *pos),
        Expr::Neg(a) => Ok(alg.neg(&eval(alg, a)?)),
        Expr::Sum(first, rest) => {
            let mut acc = eval(alg, first)?;
            for (neg, b) in rest {
                let v = eval(alg, b)?;
                acc = if *neg { alg.add(&acc, &alg.neg(&v)) } else { alg.add(&acc, &v) };
            }
            Ok(acc)
        }
        Expr::Product(first, rest) => {
            let mut acc = eval(alg, first)?;
            for (div, b, pos) in rest {
                let v = eval(alg, b)?;
                acc = if *div { alg.div(&acc, &v, *pos)? } else { alg.mul(&acc, &v, *pos)? };
            }
            Ok(acc)
        }
        Expr::Pow(base, exps) => {
            let mut acc = eval(alg, base)?;
            for (e, pos) in exps {
                acc = alg.pow(&acc, e, *pos)?;
            }
            Ok(acc)
        }
    }
}

fn division_error(err: Error, pos: usize) -> Error {
    match err {
        Error::DivisionByZero => Error::syntax(pos, "division by zero"),
        other => other,
    }
}

/// Elements of `K` or of `K[y]/(M)`.
pub(crate) struct ScalarAlg<'a, C: Scalar> {
    pub ring: &'a C::Ring,
    pub limits: ParseLimits,
}

impl<C: Scalar> Algebra for ScalarAlg<'_, C> {
    type V = C;
    fn characteristic(&self) -> u64 {
        C::characteristic_of(self.ring)
    }
    fn int(&self, n: u64) -> C {
        C::from_i64_in(self.ring, n as i64)
    }
    fn var(&self, c: char, pos: usize) -> Result<C> {
        C::letter(self.ring, c).ok_or(Error::UndefinedSymbol { symbol: c, pos })
    }
    fn add(&self, a: &C, b: &C) -> C {
        a.plus(b)
    }
    fn neg(&self, a: &C) -> C {
        a.negate()
    }
    fn mul(&self, a: &C, b: &C, _: usize) -> Result<C> {
        product_guard(a.term_count(), b.term_count(), self.limits.products)?;
        Ok(a.times(b))
    }
    fn div(&self, a: &C, b: &C, pos: usize) -> Result<C> {
        product_guard(a.term_count(), b.term_count(), self.limits.products)?;
        a.divide(b).map_err(|e| division_error(e, pos))
    }
    fn pow(&self, a: &C, e: &BigUint, _: usize) -> Result<C> {
        expand_guard(a.is_monomial(), a.weight(), 1, e, self.characteristic(), self.limits.expand)?;
        Ok(a.pow(e))
    }
}

fn dyn_terms<C: Scalar>(f: &DynPoly<C>) -> u64 {
    f.terms().iter().map(|(_, c)| c.term_count()).sum::<u64>().max(1)
}

/// Polynomials in one variable `var` over a scalar ring.
pub(crate) struct DynAlg<'a, C: Scalar> {
    pub ring: &'a C::Ring,
    pub var: char,
    pub limits: ParseLimits,
}

impl<C: Scalar> Algebra for DynAlg<'_, C> {
    type V = DynPoly<C>;
    fn characteristic(&self) -> u64 {
        C::characteristic_of(self.ring)
    }
    fn int(&self, n: u64) -> DynPoly<C> {
        DynPoly::constant(C::from_i64_in(self.ring, n as i64))
    }
    fn var(&self, c: char, pos: usize) -> Result<DynPoly<C>> {
        if c == self.var {
            return Ok(DynPoly::x(self.ring));
        }
        C::letter(self.ring, c)
            .map(DynPoly::constant)
            .ok_or(Error::UndefinedSymbol { symbol: c, pos })
    }
    fn add(&self, a: &DynPoly<C>, b: &DynPoly<C>) -> DynPoly<C> {
        a.add(b)
    }
    fn neg(&self, a: &DynPoly<C>) -> DynPoly<C> {
        a.neg()
    }
    fn mul(&self, a: &DynPoly<C>, b: &DynPoly<C>, _: usize) -> Result<DynPoly<C>> {
        product_guard(dyn_terms(a), dyn_terms(b), self.limits.products)?;
        Ok(a.mul(b))
    }
    fn div(&self, a: &DynPoly<C>, b: &DynPoly<C>, pos: usize) -> Result<DynPoly<C>> {
        if !b.degree().is_zero() {
            return Err(Error::syntax(pos, format!("division by a polynomial in {}", self.var)));
        }
        let inv = b.constant_term().inverse().map_err(|e| division_error(e, pos))?;
        product_guard(dyn_terms(a), inv.term_count(), self.limits.products)?;
        Ok(a.scale(&inv))
    }
    fn pow(&self, a: &DynPoly<C>, e: &BigUint, _: usize) -> Result<DynPoly<C>> {
        let monomial = a.terms().len() <= 1 && a.terms().iter().all(|(_, c)| c.is_monomial());
        let weight = a
            .terms()
            .iter()
            .map(|(_, c)| c.weight())
            .max()
            .unwrap_or(1)
            .saturating_add(sat(&a.degree()));
        expand_guard(monomial, weight, 2, e, self.characteristic(), self.limits.expand)?;
        Ok(a.pow(e))
    }
}

fn tw_terms<C: Scalar>(f: &TwistedPoly<C>) -> u64 {
    f.coeffs().iter().map(|c| c.term_count()).sum::<u64>().max(1)
}

/// Twisted polynomials in `T`.
pub(crate) struct TwistedAlg<'a, C: Scalar> {
    pub ring: &'a C::Ring,
    pub limits: ParseLimits,
}

impl<C: Scalar> TwistedAlg<'_, C> {
    fn degree_guard(&self, needed: u64) -> Result<()> {
        if needed > self.limits.tau {
            return Err(Error::TauDegreeBudgetExceeded {
                needed: needed.to_string(),
                budget: self.limits.tau,
            });
        }
        Ok(())
    }
}

impl<C: Scalar> Algebra for TwistedAlg<'_, C> {
    type V = TwistedPoly<C>;
    fn characteristic(&self) -> u64 {
        C::characteristic_of(self.ring)
    }
    fn int(&self, n: u64) -> TwistedPoly<C> {
        TwistedPoly::term(C::from_i64_in(self.ring, n as i64), 0)
    }
    fn var(&self, c: char, pos: usize) -> Result<TwistedPoly<C>> {
        if c == 'T' {
            return Ok(TwistedPoly::term(C::one_in(self.ring), 1));
        }
        C::letter(self.ring, c)
            .map(|v| TwistedPoly::term(v, 0))
            .ok_or(Error::UndefinedSymbol { symbol: c, pos })
    }
    fn add(&self, a: &TwistedPoly<C>, b: &TwistedPoly<C>) -> TwistedPoly<C> {
        a.add(b)
    }
    fn neg(&self, a: &TwistedPoly<C>) -> TwistedPoly<C> {
        a.neg()
    }
    fn mul(&self, a: &TwistedPoly<C>, b: &TwistedPoly<C>, _: usize) -> Result<TwistedPoly<C>> {
        let (da, db) = (a.degree().unwrap_or(0) as u64, b.degree().unwrap_or(0) as u64);
        self.degree_guard(da + db)?;
        // b's coefficients are raised to p^i for i up to deg a
        let twist_ok = b.coeffs().iter().all(|c| c.is_monomial()) || da <= 12;
        if !twist_ok {
            return Err(Error::TauDegreeBudgetExceeded {
                needed: format!("{da} (twist of non-monomial coefficients)"),
                budget: 12,
            });
        }
        product_guard(tw_terms(a), tw_terms(b), self.limits.products)?;
        Ok(a.mul(b))
    }
    fn div(&self, a: &TwistedPoly<C>, b: &TwistedPoly<C>, pos: usize) -> Result<TwistedPoly<C>> {
        if b.degree().unwrap_or(0) != 0 {
            return Err(Error::syntax(pos, "division by a polynomial in T"));
        }
        let inv = b.coeff(0).inverse().map_err(|e| division_error(e, pos))?;
        self.mul(a, &TwistedPoly::term(inv, 0), pos)
    }
    fn pow(&self, a: &TwistedPoly<C>, e: &BigUint, _: usize) -> Result<TwistedPoly<C>> {
        let deg = a.degree().unwrap_or(0) as u64;
        if deg == 0 {
            let c = a.coeff(0);
            expand_guard(c.is_monomial(), c.weight(), 1, e, self.characteristic(), self.limits.expand)?;
            return Ok(TwistedPoly::new(self.ring, vec![c.pow(e)]));
        }
        let monomial = a.coeffs().iter().all(|c| c.is_monomial());
        if !monomial {
            // coefficients pick up p^(T-degree) powers
            let p = C::characteristic_of(self.ring) as f64;
            let cap = (self.limits.expand as f64).ln() / p.ln();
            if e * BigUint::from(deg) > BigUint::from(cap.floor().max(1.0) as u64) {
                return Err(Error::DegreeBudgetExceeded {
                    needed: format!("{e}*{deg} (twisted power with non-monomial coefficients)"),
                    budget: self.limits.expand,
                });
            }
        }
        a.pow(e, self.limits.tau)
    }
}

pub(crate) type Bivar<C> = BTreeMap<(BigUint, BigUint), C>;

fn bivar_clean<C: Scalar>(mut m: Bivar<C>) -> Bivar<C> {
    m.retain(|_, c| !c.is_zero());
    m
}

fn bivar_terms<C: Scalar>(m: &Bivar<C>) -> u64 {
    m.values().map(|c| c.term_count()).sum::<u64>().max(1)
}

/// Polynomials in `u` and `v`.
pub(crate) struct CurveAlg<'a, C: Scalar> {
    pub ring: &'a C::Ring,
    pub limits: ParseLimits,
}

impl<C: Scalar> CurveAlg<'_, C> {
    fn constant(&self, c: C) -> Bivar<C> {
        bivar_clean(BTreeMap::from([((BigUint::zero(), BigUint::zero()), c)]))
    }

    fn mul_raw(&self, a: &Bivar<C>, b: &Bivar<C>) -> Bivar<C> {
        let mut out: Bivar<C> = BTreeMap::new();
        for ((i, j), x) in a {
            for ((k, l), y) in b {
                let key = (i + k, j + l);
                let v = x.times(y);
                match out.get_mut(&key) {
                    Some(acc) => *acc = acc.plus(&v),
                    None => {
                        out.insert(key, v);
                    }
                }
            }
        }
        bivar_clean(out)
    }
}

impl<C: Scalar> Algebra for CurveAlg<'_, C> {
    type V = Bivar<C>;
    fn characteristic(&self) -> u64 {
        C::characteristic_of(self.ring)
    }
    fn int(&self, n: u64) -> Bivar<C> {
        self.constant(C::from_i64_in(self.ring, n as i64))
    }
    fn var(&self, c: char, pos: usize) -> Result<Bivar<C>> {
        let one = C::one_in(self.ring);
        match c {
            'u' => Ok(BTreeMap::from([((BigUint::from(1u8), BigUint::zero()), one)])),
            'v' => Ok(BTreeMap::from([((BigUint::zero(), BigUint::from(1u8)), one)])),
            _ => C::letter(self.ring, c)
                .map(|s| self.constant(s))
                .ok_or(Error::UndefinedSymbol { symbol: c, pos }),
        }
    }
    fn add(&self, a: &Bivar<C>, b: &Bivar<C>) -> Bivar<C> {
        let mut out = a.clone();
        for (k, c) in b {
            match out.get_mut(k) {
                Some(acc) => *acc = acc.plus(c),
                None => {
                    out.insert(k.clone(), c.clone());
                }
            }
        }
        bivar_clean(out)
    }
    fn neg(&self, a: &Bivar<C>) -> Bivar<C> {
        a.iter().map(|(k, c)| (k.clone(), c.negate())).collect()
    }
    fn mul(&self, a: &Bivar<C>, b: &Bivar<C>, _: usize) -> Result<Bivar<C>> {
        product_guard(bivar_terms(a), bivar_terms(b), self.limits.products)?;
        Ok(self.mul_raw(a, b))
    }
    fn div(&self, a: &Bivar<C>, b: &Bivar<C>, pos: usize) -> Result<Bivar<C>> {
        let zero = (BigUint::zero(), BigUint::zero());
        if b.len() != 1 || !b.contains_key(&zero) {
            return Err(Error::syntax(pos, "division by a polynomial in u, v"));
        }
        let inv = b[&zero].inverse().map_err(|e| division_error(e, pos))?;
        self.mul(a, &self.constant(inv), pos)
    }
    fn pow(&self, a: &Bivar<C>, e: &BigUint, _: usize) -> Result<Bivar<C>> {
        let p = self.characteristic();
        if a.len() == 1 {
            let ((i, j), c) = a.iter().next().expect("one term");
            expand_guard(c.is_monomial(), c.weight(), 1, e, p, self.limits.expand)?;
            return Ok(bivar_clean(BTreeMap::from([((i * e, j * e), c.pow(e))])));
        }
        let weight = a
            .iter()
            .map(|((i, j), c)| sat(&(i + j)).saturating_add(c.weight()))
            .max()
            .unwrap_or(1);
        expand_guard(false, weight, 3, e, p, self.limits.expand)?;
        let one = self.constant(C::one_in(self.ring));
        Ok(pow_frobenius(
            a,
            e,
            p,
            &one,
            |x, y| self.mul_raw(x, y),
            |x, k| {
                let q = BigUint::from(p).pow(k as u32);
                bivar_clean(x.iter().map(|((i, j), c)| ((i * &q, j * &q), c.frobenius(k))).collect())
            },
        ))
    }
}

/// `M(y)` as a dense polynomial over `K`.
pub(crate) fn to_kpoly(field: &Field, f: &DynPoly<RatFunc>, max_degree: u64) -> Result<KPoly> {
    let d = f.degree();
    if d > BigUint::from(max_degree) {
        return Err(Error::DegreeBudgetExceeded {
            needed: d.to_string(),
            budget: max_degree,
        });
    }
    let mut coeffs = vec![RatFunc::zero(field); sat(&d) as usize + 1];
    for (e, c) in f.terms() {
        coeffs[sat(e) as usize] = c.clone();
    }
    Ok(KPoly::new(field, coeffs))
}
