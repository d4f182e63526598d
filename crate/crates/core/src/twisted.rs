//! The twisted polynomial ring `R{T}` with `T c = c^p T`.
//!
//! `sum c_i T^i` stands for the additive polynomial `sum c_i x^(p^i)`, and
//! multiplication is composition. Iterates of additive maps stay linear in
//! `T`-degree, so huge compositional powers remain representable.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::dynpoly::DynPoly;
use crate::error::{Error, Result};
use crate::funcfield::format_term;
use crate::ring::{log_p_exact, pow_binary, pow_frobenius, RingElem};

/// Dense in `T`: `coeffs[i]` multiplies `T^i`; the last entry is nonzero.
#[derive(Clone)]
pub struct TwistedPoly<C: RingElem> {
    ring: C::Ring,
    coeffs: Vec<C>,
}

impl<C: RingElem> PartialEq for TwistedPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.ring == other.ring
    }
}
impl<C: RingElem> Eq for TwistedPoly<C> {}

impl<C: RingElem> TwistedPoly<C> {
    pub fn new(ring: &C::Ring, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TwistedPoly {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn zero(ring: &C::Ring) -> Self {
        Self::new(ring, Vec::new())
    }

    /// `T^0`, the identity map.
    pub fn identity(ring: &C::Ring) -> Self {
        Self::new(ring, vec![C::one_in(ring)])
    }

    /// `c T^k`.
    pub fn term(c: C, k: usize) -> Self {
        let ring = c.ring();
        let mut coeffs = vec![C::zero_in(&ring); k];
        coeffs.push(c);
        Self::new(&ring, coeffs)
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| C::zero_in(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `T`-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect();
        Self::new(&self.ring, coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ring, self.coeffs.iter().map(|c| c.negate()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `self * o`, realizing `self ∘ o`.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut out = vec![C::zero_in(&self.ring); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].plus(&a.times(&b.frobenius(i as u64)));
            }
        }
        Self::new(&self.ring, out)
    }

    fn frobenius_fixed(&self) -> bool {
        self.coeffs.iter().all(|c| c.frobenius(1) == *c)
    }

    /// `T`-exponents multiplied by `p^k`; the `p^k`-th power when every
    /// coefficient is fixed by Frobenius.
    fn spread(&self, k: u64) -> Self {
        let p = C::characteristic_of(&self.ring) as usize;
        let step = p.pow(k as u32);
        let mut out = vec![C::zero_in(&self.ring); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * step] = c.clone();
        }
        Self::new(&self.ring, out)
    }

    /// `self^n`, the `n`-fold composition.
    ///
    /// With Frobenius-fixed coefficients the powers commute with `T`, so
    /// `A^(p^k)` is `A` with exponents spread by `p^k` and powering goes by
    /// base-`p` digits; otherwise binary powering.
    pub fn pow(&self, n: &BigUint, tau_budget: u64) -> Result<Self> {
        let deg = self.degree().unwrap_or(0) as u64;
        let needed = n * BigUint::from(deg);
        if needed > BigUint::from(tau_budget) {
            return Err(Error::TauDegreeBudgetExceeded {
                needed: needed.to_string(),
                budget: tau_budget,
            });
        }
        let one = Self::identity(&self.ring);
        if self.is_zero() {
            return Ok(if n.is_zero() { one } else { self.clone() });
        }
        if self.frobenius_fixed() {
            let p = C::characteristic_of(&self.ring);
            Ok(pow_frobenius(self, n, p, &one, |a, b| a.mul(b), |a, k| a.spread(k)))
        } else {
            Ok(pow_binary(self, n, &one, |a, b| a.mul(b)))
        }
    }

    /// `sum c_i gamma^(p^i)` by repeated Frobenius.
    pub fn eval(&self, gamma: &C) -> C {
        let mut acc = C::zero_in(&self.ring);
        let mut g = gamma.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                g = g.frobenius(1);
            }
            if !c.is_zero() {
                acc = acc.plus(&c.times(&g));
            }
        }
        acc
    }

    pub fn to_dyn(&self) -> DynPoly<C> {
        let p = BigUint::from(C::characteristic_of(&self.ring));
        DynPoly::from_terms(
            &self.ring,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (p.pow(i as u32), c.clone())),
        )
    }

    pub fn from_dyn(f: &DynPoly<C>) -> Result<Self> {
        let p = C::characteristic_of(f.ring());
        let mut coeffs = Vec::new();
        for (e, c) in f.terms() {
            let Some(i) = log_p_exact(e, p) else {
                return Err(Error::NotAdditive(format!("{f} has the term x^{e}")));
            };
            let i = i.to_usize().expect("T-degree fits in memory");
            if coeffs.len() <= i {
                coeffs.resize(i + 1, C::zero_in(f.ring()));
            }
            coeffs[i] = c.clone();
        }
        Ok(Self::new(f.ring(), coeffs))
    }

    /// Whether `A^m B^m = B^m A^m`.
    pub fn commute_at_iterate(a: &Self, b: &Self, m: u64, tau_budget: u64) -> Result<bool> {
        let m = BigUint::from(m);
        let am = a.pow(&m, tau_budget)?;
        let bm = b.pow(&m, tau_budget)?;
        let total = am.degree().unwrap_or(0) + bm.degree().unwrap_or(0);
        if total as u64 > tau_budget {
            return Err(Error::TauDegreeBudgetExceeded {
                needed: total.to_string(),
                budget: tau_budget,
            });
        }
        Ok(am.mul(&bm) == bm.mul(&am))
    }

    /// Ascending text in `T`, e.g. `t + w*T + T^3`.
    pub fn format(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => "T".to_string(),
                    _ => format!("T^{i}"),
                };
                let paren = c.needs_parens() && !mono.is_empty();
                format_term(&c.to_string(), c.is_one(), paren, &mono)
            })
            .collect();
        parts.join(" + ")
    }
}

impl<C: RingElem> fmt::Display for TwistedPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl<C: RingElem> fmt::Debug for TwistedPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwistedPoly({self} over {})", self.ring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{binom_mod, Field};
    use crate::funcfield::{FFPoly, RatFunc};
    use proptest::prelude::*;

    type Tw = TwistedPoly<RatFunc>;

    fn f4() -> Field {
        Field::extension(2, vec![1, 1, 1]).unwrap()
    }

    fn lam_plus_tau_r(field: &Field, lam: u64, r: usize) -> Tw {
        Tw::term(RatFunc::constant(field, lam), 0).add(&Tw::term(RatFunc::one(field), r))
    }

    #[test]
    fn twist_rule() {
        let f2 = Field::prime(2).unwrap();
        let t = RatFunc::t(&f2);
        let tau = Tw::term(RatFunc::one(&f2), 1);
        assert_eq!(tau.mul(&Tw::term(t.clone(), 0)), Tw::term(t.mul(&t), 1));
        let a = Tw::identity(&f2).add(&tau);
        assert_eq!(a.mul(&a).to_dyn().to_string(), "x^4 + x");
        assert_eq!(a.to_string(), "1 + T");
    }

    #[test]
    fn binomial_iterate_formula() {
        for (p, modulus) in [(2u64, vec![1u64, 1, 1]), (3, vec![2, 2, 1])] {
            let field = Field::extension(p, modulus).unwrap();
            let lam = p; // the generator w
            let r = 2usize;
            let a = lam_plus_tau_r(&field, lam, r);
            for m in 0..=6u64 {
                let got = a.pow(&BigUint::from(m), 4096).unwrap();
                let mut expect = Tw::zero(&field);
                for i in 0..=m {
                    let c = binom_mod(&BigUint::from(m), &BigUint::from(i), p);
                    let coef = RatFunc::constant(&field, field.mul(c, field.pow(lam, i)));
                    expect = expect.add(&Tw::term(coef, r * (m - i) as usize));
                }
                assert_eq!(got, expect, "p={p} m={m}");
            }
        }
    }

    #[test]
    fn geometric_iterate() {
        let f3 = Field::prime(3).unwrap();
        let one = RatFunc::one(&f3);
        let a = Tw::new(&f3, vec![one.clone(); 3]);
        let got = a.pow(&BigUint::from(4u8), 4096).unwrap();
        assert_eq!(got, Tw::new(&f3, vec![one; 9]));
        assert_eq!(a.pow(&BigUint::zero(), 4096).unwrap(), Tw::identity(&f3));
    }

    #[test]
    fn commuting_iterates() {
        let field = f4();
        let tau = Tw::term(RatFunc::one(&field), 1);
        let g = lam_plus_tau_r(&field, 2, 2);
        assert!(!Tw::commute_at_iterate(&tau, &g, 1, 4096).unwrap());
        assert!(Tw::commute_at_iterate(&tau.pow(&BigUint::from(2u8), 4096).unwrap(), &g, 1, 4096).unwrap());
        assert!(Tw::commute_at_iterate(&tau, &g, 2, 4096).unwrap());
    }

    #[test]
    fn evaluation_and_high_iterates() {
        let field = f4();
        let t = RatFunc::t(&field);
        let g = lam_plus_tau_r(&field, 2, 2);
        assert_eq!(g.eval(&t).format_with('t'), "t^4 + w*t");
        for k in 0..=1u32 {
            let e = 4u64.pow(k);
            let gk = g.pow(&BigUint::from(e), 4096).unwrap();
            let exp = BigUint::from(2u8).pow(2 * e as u32);
            let lam_t = RatFunc::constant(&field, 2).mul(&t);
            assert_eq!(gk.eval(&t).sub(&lam_t), t.pow_big(&exp), "k={k}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f2 = Field::prime(2).unwrap();
        let tau = Tw::term(RatFunc::one(&f2), 2);
        assert!(tau.pow(&BigUint::from(2048u32), 4096).is_ok());
        assert!(tau.pow(&BigUint::from(2049u32), 4096).unwrap_err().is_budget());
    }

    #[test]
    fn not_additive() {
        let f3 = Field::prime(3).unwrap();
        let f = DynPoly::monomial(RatFunc::one(&f3), BigUint::from(2u8));
        assert!(matches!(Tw::from_dyn(&f), Err(Error::NotAdditive(_))));
    }

    fn arb_tw(p: u64, max_deg: usize) -> impl Strategy<Value = Tw> {
        prop::collection::vec(prop::collection::vec(0..p, 0..3), 0..=max_deg + 1).prop_map(
            move |cs| {
                let field = Field::prime(p).unwrap();
                let coeffs = cs
                    .iter()
                    .map(|c| RatFunc::from_poly(FFPoly::from_dense(&field, c)))
                    .collect();
                Tw::new(&field, coeffs)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_tw(3, 3), b in arb_tw(3, 3), c in arb_tw(3, 2)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        }

        #[test]
        fn multiplication_is_composition(a in arb_tw(2, 3), b in arb_tw(2, 3)) {
            let lhs = a.mul(&b).to_dyn();
            let rhs = a.to_dyn().compose(&b.to_dyn(), 1 << 12).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dyn_round_trip(a in arb_tw(5, 3)) {
            prop_assert_eq!(Tw::from_dyn(&a.to_dyn()).unwrap(), a);
        }

        #[test]
        fn power_law(a in arb_tw(3, 2), m in 0u64..5, n in 0u64..5) {
            let am = a.pow(&BigUint::from(m), 4096).unwrap();
            let an = a.pow(&BigUint::from(n), 4096).unwrap();
            prop_assert_eq!(a.pow(&BigUint::from(m + n), 4096).unwrap(), am.mul(&an));
        }

        #[test]
        fn eval_matches_dyn(a in arb_tw(3, 3), g in prop::collection::vec(0u64..3, 0..4)) {
            let field = Field::prime(3).unwrap();
            let gamma = RatFunc::from_poly(FFPoly::from_dense(&field, &g));
            prop_assert_eq!(a.eval(&gamma), a.to_dyn().evaluate(&gamma).unwrap());
        }
    }
}
