//! Polynomials in the dynamical variable `x` over `K` or a quotient ring.
//!
//! Orbit points are always computed by repeated evaluation. Symbolic
//! composition and iteration are reserved for exact identity checks and are
//! capped by a degree budget.

mod additive;
mod iterate;
mod linear;

pub use additive::{
    conjugate_to_additive, roots_in_base, solve_affine_conjugacy, AdditiveConjugacy, AffineShift,
};
pub use iterate::{common_iterate, CommonIterate};
pub use linear::LinearMap;

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{log_p_exact, pow_frobenius, RingElem};

/// A sparse polynomial `sum c_e x^e` with coefficients in a [`RingElem`] ring.
///
/// Terms are kept with strictly increasing exponents and nonzero
/// coefficients.
#[derive(Clone)]
pub struct DynPoly<C: RingElem> {
    ring: C::Ring,
    terms: Vec<(BigUint, C)>,
}

impl<C: RingElem> PartialEq for DynPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.ring == other.ring
    }
}
impl<C: RingElem> Eq for DynPoly<C> {}

impl<C: RingElem> Hash for DynPoly<C> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl<C: RingElem> DynPoly<C> {
    pub fn zero(ring: &C::Ring) -> Self {
        DynPoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    /// The identity map `x`.
    pub fn x(ring: &C::Ring) -> Self {
        Self::monomial(C::one_in(ring), BigUint::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, BigUint::zero())
    }

    pub fn monomial(c: C, e: BigUint) -> Self {
        let ring = c.ring();
        let terms = if c.is_zero() { Vec::new() } else { vec![(e, c)] };
        DynPoly { ring, terms }
    }

    /// From arbitrary terms: merges equal exponents and drops zeros.
    pub fn from_terms(ring: &C::Ring, terms: impl IntoIterator<Item = (BigUint, C)>) -> Self {
        let mut map: BTreeMap<BigUint, C> = BTreeMap::new();
        for (e, c) in terms {
            match map.get_mut(&e) {
                Some(acc) => *acc = acc.plus(&c),
                None => {
                    map.insert(e, c);
                }
            }
        }
        DynPoly {
            ring: ring.clone(),
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(BigUint, C)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree, with the zero polynomial given degree 0.
    pub fn degree(&self) -> BigUint {
        self.terms.last().map(|(e, _)| e.clone()).unwrap_or_default()
    }

    /// Degree as a machine word, when it fits.
    pub fn degree_u64(&self) -> Option<u64> {
        self.degree().to_u64()
    }

    pub fn coeff(&self, e: &BigUint) -> C {
        self.terms
            .binary_search_by(|(x, _)| x.cmp(e))
            .map_or_else(|_| C::zero_in(&self.ring), |i| self.terms[i].1.clone())
    }

    pub fn leading_coeff(&self) -> C {
        self.terms
            .last()
            .map_or_else(|| C::zero_in(&self.ring), |(_, c)| c.clone())
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&BigUint::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Additive iff every exponent is a power of `p`.
    pub fn is_additive(&self) -> bool {
        let p = C::characteristic_of(&self.ring);
        self.terms.iter().all(|(e, _)| log_p_exact(e, p).is_some())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().chain(&o.terms).cloned())
    }

    pub fn neg(&self) -> Self {
        DynPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negate())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(e, c)| (e.clone(), c.times(k))),
        )
    }

    /// Product in the commutative ring `R[x]`.
    pub fn mul(&self, o: &Self) -> Self {
        if self.terms.len() == 1 || o.terms.len() == 1 {
            let (single, many) = if self.terms.len() == 1 { (self, o) } else { (o, self) };
            let (e0, c0) = &single.terms[0];
            return Self::from_terms(
                &self.ring,
                many.terms.iter().map(|(e, c)| (e + e0, c.times(c0))),
            );
        }
        let mut prods = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                prods.push((ea + eb, ca.times(cb)));
            }
        }
        Self::from_terms(&self.ring, prods)
    }

    /// `self^(p^k)` in `R[x]`: Frobenius on coefficients, exponents times `p^k`.
    pub fn frobenius(&self, k: u64) -> Self {
        let p = C::characteristic_of(&self.ring);
        let pk = BigUint::from(p).pow(k as u32);
        DynPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e * &pk, c.frobenius(k)))
                .collect(),
        }
    }

    /// Power in `R[x]` (not compositional).
    pub fn pow(&self, e: &BigUint) -> Self {
        let one = Self::constant(C::one_in(&self.ring));
        pow_frobenius(
            self,
            e,
            C::characteristic_of(&self.ring),
            &one,
            |a, b| a.mul(b),
            |a, k| a.frobenius(k),
        )
    }

    /// `f(gamma)`, with each power formed by base-`p` digits and Frobenius.
    pub fn evaluate(&self, gamma: &C) -> Result<C> {
        if gamma.ring() != self.ring {
            return Err(Error::RingMismatch(format!(
                "point {gamma} is not in {}",
                self.ring
            )));
        }
        Ok(self.eval_unchecked(gamma))
    }

    pub(crate) fn eval_unchecked(&self, gamma: &C) -> C {
        let mut acc = C::zero_in(&self.ring);
        for (e, c) in &self.terms {
            let term = if e.is_zero() {
                c.clone()
            } else {
                c.times(&gamma.pow(e))
            };
            acc = acc.plus(&term);
        }
        acc
    }

    /// `self ∘ g`, refusing results of degree above `budget`.
    pub fn compose(&self, g: &Self, budget: u64) -> Result<Self> {
        let needed = self.degree() * g.degree();
        if needed > BigUint::from(budget) {
            return Err(Error::DegreeBudgetExceeded {
                needed: needed.to_string(),
                budget,
            });
        }
        let mut acc = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            acc = acc.add(&g.pow(e).scale(c));
        }
        Ok(acc)
    }

    /// The `n`-th compositional iterate; `n = 0` gives `x`.
    pub fn iterate(&self, n: u64, budget: u64) -> Result<Self> {
        let d = self.degree();
        let mut needed = BigUint::one();
        for _ in 0..n {
            needed *= &d;
            if needed > BigUint::from(budget) {
                break;
            }
        }
        if needed > BigUint::from(budget) {
            return Err(Error::DegreeBudgetExceeded {
                needed: format!("{}^{n}", self.degree()),
                budget,
            });
        }
        let mut acc = Self::x(&self.ring);
        for _ in 0..n {
            acc = self.compose(&acc, budget)?;
        }
        Ok(acc)
    }

    /// `f^n(gamma)` by `n` successive evaluations.
    pub fn orbit_element(&self, gamma: &C, n: u64) -> Result<C> {
        let mut acc = gamma.clone();
        if acc.ring() != self.ring {
            return Err(Error::RingMismatch(format!("point {gamma} is not in {}", self.ring)));
        }
        for _ in 0..n {
            acc = self.eval_unchecked(&acc);
        }
        Ok(acc)
    }

    /// `[gamma, f(gamma), ..., f^n(gamma)]`.
    pub fn orbit(&self, gamma: &C, n: u64) -> Result<Vec<C>> {
        if gamma.ring() != self.ring {
            return Err(Error::RingMismatch(format!("point {gamma} is not in {}", self.ring)));
        }
        let mut out = Vec::with_capacity(n as usize + 1);
        out.push(gamma.clone());
        for i in 0..n as usize {
            let next = self.eval_unchecked(&out[i]);
            out.push(next);
        }
        Ok(out)
    }

    /// `mu ∘ self ∘ mu^{-1}`.
    pub fn conjugate(&self, mu: &LinearMap<C>) -> Result<Self> {
        let inv = mu.inverse()?;
        let inner = self.compose(&inv.to_dynpoly(), u64::MAX)?;
        Ok(mu.apply_poly(&inner))
    }

    /// Re-express the coefficients in another ring.
    pub fn map_coeffs<D: RingElem>(&self, ring: &D::Ring, f: impl Fn(&C) -> D) -> DynPoly<D> {
        DynPoly::from_terms(ring, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Canonical text in the variable `var`, highest degree first.
    pub fn format_with(&self, var: char) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono = if e.is_zero() {
                    String::new()
                } else if e.is_one() {
                    var.to_string()
                } else {
                    format!("{var}^{e}")
                };
                crate::funcfield::format_term(&c.to_string(), c.is_one(), c.needs_parens(), &mono)
            })
            .collect();
        parts.join(" + ")
    }
}

impl<C: RingElem> fmt::Display for DynPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with('x'))
    }
}

impl<C: RingElem> fmt::Debug for DynPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DynPoly({self} over {})", self.ring)
    }
}

#[cfg(test)]
mod tests;
