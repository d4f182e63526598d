//! The coefficient-ring abstraction shared by the dynamical and twisted
//! polynomial types, plus characteristic-p powering helpers.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Result;

/// A commutative ring of prime characteristic whose elements carry a handle to
/// the ring they live in.
///
/// Implemented by [`RatFunc`](crate::funcfield::RatFunc) (the base field
/// `K = F_q(t)`) and [`ExtElem`](crate::funcfield::ExtElem) (quotient rings
/// `K[y]/(M)`). Method names avoid the `std::ops` names so both can be in scope.
pub trait RingElem:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    type Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static;

    fn ring(&self) -> Self::Ring;
    fn zero_in(ring: &Self::Ring) -> Self;
    fn one_in(ring: &Self::Ring) -> Self;
    fn from_i64_in(ring: &Self::Ring, n: i64) -> Self;
    fn characteristic_of(ring: &Self::Ring) -> u64;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one_in(&self.ring())
    }

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn divide(&self, rhs: &Self) -> Result<Self> {
        Ok(self.times(&rhs.inverse()?))
    }

    /// `self^(p^k)`.
    fn frobenius(&self, k: u64) -> Self;

    /// Injective byte encoding of the canonical form.
    fn canonical_key(&self) -> Vec<u8>;

    /// Whether the printed form must be parenthesized as a factor.
    fn needs_parens(&self) -> bool {
        self.to_string().contains(' ')
    }

    fn characteristic(&self) -> u64 {
        Self::characteristic_of(&self.ring())
    }

    fn pow(&self, e: &BigUint) -> Self {
        let one = Self::one_in(&self.ring());
        pow_frobenius(
            self,
            e,
            self.characteristic(),
            &one,
            |a, b| a.times(b),
            |a, k| a.frobenius(k),
        )
    }

    fn pow_u64(&self, e: u64) -> Self {
        self.pow(&BigUint::from(e))
    }
}

/// Digits of `e` in base `p`, least significant first.
pub fn digits_base(e: &BigUint, p: u64) -> Vec<u64> {
    if e.is_zero() {
        return Vec::new();
    }
    if p <= 256 {
        return e
            .to_radix_le(p as u32)
            .into_iter()
            .map(u64::from)
            .collect();
    }
    let base = BigUint::from(p);
    let mut out = Vec::new();
    let mut rest = e.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&base);
        out.push(r.to_u64().expect("digit below p"));
        rest = q;
    }
    out
}

/// Plain square-and-multiply for a machine-word exponent.
pub fn pow_small<A: Clone>(base: &A, mut e: u64, one: &A, mul: impl Fn(&A, &A) -> A) -> A {
    let mut acc = one.clone();
    let mut sq = base.clone();
    let mut first = true;
    while e > 0 {
        if !first {
            sq = mul(&sq, &sq);
        }
        first = false;
        if e & 1 == 1 {
            acc = mul(&acc, &sq);
        }
        e >>= 1;
    }
    acc
}

/// Square-and-multiply for an arbitrary-precision exponent, with no use of the
/// Frobenius endomorphism.
pub fn pow_binary<A: Clone>(base: &A, e: &BigUint, one: &A, mul: impl Fn(&A, &A) -> A) -> A {
    let mut acc = one.clone();
    let bits = e.bits();
    for i in (0..bits).rev() {
        acc = mul(&acc, &acc);
        if e.bit(i) {
            acc = mul(&acc, base);
        }
    }
    acc
}

/// `base^e` in a commutative algebra of characteristic `p`, using
/// `a^(sum d_j p^j) = prod_j (a^(d_j))^(p^j)`.
///
/// Only the small powers `a^d` with `d < p` are formed by multiplication; the
/// rest is Frobenius, so sparse objects stay sparse when `e` has few nonzero
/// base-`p` digits.
pub fn pow_frobenius<A: Clone>(
    base: &A,
    e: &BigUint,
    p: u64,
    one: &A,
    mul: impl Fn(&A, &A) -> A,
    frob: impl Fn(&A, u64) -> A,
) -> A {
    if e.is_zero() {
        return one.clone();
    }
    if e.is_one() {
        return base.clone();
    }
    let digits = digits_base(e, p);
    let mut small: HashMap<u64, A> = HashMap::new();
    let mut acc: Option<A> = None;
    for (j, &d) in digits.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let a_d = small
            .entry(d)
            .or_insert_with(|| pow_small(base, d, one, &mul))
            .clone();
        let term = if j == 0 { a_d } else { frob(&a_d, j as u64) };
        acc = Some(match acc {
            None => term,
            Some(prev) => mul(&prev, &term),
        });
    }
    acc.unwrap_or_else(|| one.clone())
}

/// Whether `n` is `p^k` for some `k >= 0`; returns `k`.
pub fn log_p_exact(n: &BigUint, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let digits = digits_base(n, p);
    let top = digits.len() - 1;
    if digits[top] == 1 && digits[..top].iter().all(|&d| d == 0) {
        Some(top as u64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_match_radix() {
        let e = BigUint::from(1_000_003u64);
        for p in [2u64, 3, 5, 7, 257, 65537] {
            let d = digits_base(&e, p);
            let mut back = BigUint::zero();
            for &x in d.iter().rev() {
                back = back * p + x;
            }
            assert_eq!(back, e);
            assert!(d.iter().all(|&x| x < p));
        }
    }

    #[test]
    fn frobenius_pow_agrees_with_binary_on_integers_mod_p() {
        // In Z/pZ the Frobenius is the identity, so both routes reduce to a^e mod p.
        let p = 7u64;
        let mul = |a: &u64, b: &u64| a * b % p;
        let frob = |a: &u64, _k: u64| *a;
        for a in 0..p {
            for e in 0u64..60 {
                let e = BigUint::from(e);
                let x = pow_frobenius(&a, &e, p, &1, mul, frob);
                let y = pow_binary(&a, &e, &1, mul);
                assert_eq!(x, y, "a={a} e={e}");
            }
        }
    }

    #[test]
    fn exact_logs() {
        assert_eq!(log_p_exact(&BigUint::from(1u8), 3), Some(0));
        assert_eq!(log_p_exact(&BigUint::from(81u8), 3), Some(4));
        assert_eq!(log_p_exact(&BigUint::from(80u8), 3), None);
        assert_eq!(log_p_exact(&BigUint::zero(), 2), None);
    }
}
