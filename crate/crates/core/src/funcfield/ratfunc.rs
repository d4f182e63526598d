use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;

use super::poly::FFPoly;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::RingElem;

/// An element of `K = F_q(t)` as a reduced fraction with monic denominator.
///
/// Two equal elements always have identical stored numerators and
/// denominators, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: FFPoly,
    den: FFPoly,
}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl RatFunc {
    pub fn zero(field: &Field) -> Self {
        RatFunc {
            num: FFPoly::zero(field),
            den: FFPoly::one(field),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(FFPoly::one(field))
    }

    pub fn t(field: &Field) -> Self {
        Self::from_poly(FFPoly::t(field))
    }

    pub fn constant(field: &Field, raw: u64) -> Self {
        Self::from_poly(FFPoly::constant(field, raw))
    }

    pub fn from_i64(field: &Field, n: i64) -> Self {
        Self::constant(field, field.from_i64(n))
    }

    pub fn from_poly(num: FFPoly) -> Self {
        let den = FFPoly::one(num.field());
        RatFunc { num, den }
    }

    /// Builds and reduces `num / den`.
    pub fn new(num: FFPoly, den: FFPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: FFPoly, den: FFPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.field());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lead = den.leading_coeff();
        if lead != 1 {
            let inv = den.field().inv(lead).expect("nonzero");
            num = num.scale(inv);
            den = den.scale(inv);
        }
        RatFunc { num, den }
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn numerator(&self) -> &FFPoly {
        &self.num
    }

    pub fn denominator(&self) -> &FFPoly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether the element lies in `F_q`.
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// Raw constant value when the element lies in `F_q`.
    pub fn as_constant(&self) -> Option<u64> {
        self.is_constant().then(|| self.num.constant_term())
    }

    /// Weil height: `max(deg num, deg den)` of the reduced fraction.
    pub fn height(&self) -> BigUint {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(&self.num + &o.num);
        }
        if self.den == o.den {
            return Self::reduce(&self.num + &o.num, self.den.clone());
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::reduce(num, &self.den * &o.den)
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(&self.num * &o.num);
        }
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        // cross-cancel so that no gcd of the full products is needed
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = o.den.div_exact(&g1).unwrap();
        let c = o.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        let num = &a * &c;
        let den = &b * &d;
        let lead = den.leading_coeff();
        let inv = self.field().inv(lead).expect("nonzero");
        RatFunc {
            num: num.scale(inv),
            den: den.scale(inv),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead = self.num.leading_coeff();
        let inv = self.field().inv(lead)?;
        Ok(RatFunc {
            num: self.den.scale(inv),
            den: self.num.scale(inv),
        })
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    /// `self^(p^k)`; reducedness and monicity are preserved.
    pub fn frob(&self, k: u64) -> RatFunc {
        RatFunc {
            num: self.num.frobenius(k),
            den: self.den.frobenius(k),
        }
    }

    /// Power by base-`p` digits and Frobenius; numerator and denominator
    /// are powered separately since coprimality is preserved.
    pub fn pow_big(&self, e: &BigUint) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Power by plain square-and-multiply in `K`.
    pub fn pow_by_squaring(&self, e: &BigUint) -> RatFunc {
        crate::ring::pow_binary(self, e, &RatFunc::one(self.field()), |a, b| a.mul(b))
    }

    /// Canonical text with `t` as the variable.
    pub fn format_with(&self, var: char) -> String {
        if self.den.is_one() {
            return self.num.format_with(var);
        }
        // `*` and `/` associate left, so single terms need no parentheses
        let wrap = |p: &FFPoly| {
            let s = p.format_with(var);
            if s.contains(' ') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with('t'))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl RingElem for RatFunc {
    type Ring = Field;

    fn ring(&self) -> Field {
        self.field().clone()
    }
    fn zero_in(ring: &Field) -> Self {
        RatFunc::zero(ring)
    }
    fn one_in(ring: &Field) -> Self {
        RatFunc::one(ring)
    }
    fn from_i64_in(ring: &Field, n: i64) -> Self {
        RatFunc::from_i64(ring, n)
    }
    fn characteristic_of(ring: &Field) -> u64 {
        ring.p()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn frobenius(&self, k: u64) -> Self {
        self.frob(k)
    }
    fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.num.write_key(&mut out);
        self.den.write_key(&mut out);
        out
    }
    fn pow(&self, e: &BigUint) -> Self {
        self.pow_big(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(f: &Field, num: &[u64], den: &[u64]) -> RatFunc {
        RatFunc::new(FFPoly::from_dense(f, num), FFPoly::from_dense(f, den)).unwrap()
    }

    #[test]
    fn heights() {
        let f2 = Field::prime(2).unwrap();
        let a = RatFunc::from_poly(&FFPoly::monomial(&f2, 1, 8u32.into()) + &FFPoly::t(&f2));
        assert_eq!(a.height(), BigUint::from(8u32));
        assert_eq!(RatFunc::one(&f2).height(), BigUint::from(0u32));
        let b = rf(&f2, &[1], &[1, 0, 0, 1]);
        assert_eq!(b.height(), BigUint::from(3u32));
    }

    #[test]
    fn reduction_is_canonical() {
        let f3 = Field::prime(3).unwrap();
        let a = rf(&f3, &[1, 1], &[1]);
        let b = rf(&f3, &[2, 0, 1], &[2, 1]);
        assert_eq!(a, b);
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_eq!(
            RatFunc::zero(&f3).canonical_key(),
            rf(&f3, &[], &[1, 2]).canonical_key()
        );
        // denominator made monic
        let c = rf(&f3, &[1], &[0, 2]);
        assert_eq!(c.denominator(), &FFPoly::t(&f3));
        assert_eq!(c.numerator(), &FFPoly::constant(&f3, 2));
    }

    #[test]
    fn division_by_zero() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(RatFunc::zero(&f5).inv(), Err(Error::DivisionByZero));
        assert!(RatFunc::new(FFPoly::one(&f5), FFPoly::zero(&f5)).is_err());
    }

    fn arb(p: u64) -> impl Strategy<Value = RatFunc> {
        (
            prop::collection::vec(0..p, 0..6),
            prop::collection::vec(0..p, 1..5),
        )
            .prop_filter_map("nonzero denominator", move |(n, d)| {
                let f = Field::prime(p).unwrap();
                RatFunc::new(FFPoly::from_dense(&f, &n), FFPoly::from_dense(&f, &d)).ok()
            })
    }

    proptest! {
        #[test]
        fn field_laws(a in arb(3), b in arb(3), c in arb(3)) {
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
            prop_assert_eq!(a.sub(&b).add(&b), a.clone());
            if !b.is_zero() {
                prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
            }
        }

        #[test]
        fn height_subadditive(a in arb(5), b in arb(5)) {
            prop_assert!(a.mul(&b).height() <= a.height() + b.height());
            prop_assert!(a.add(&b).height() <= a.height() + b.height());
        }

        #[test]
        fn keys_are_injective(a in arb(2), b in arb(2)) {
            prop_assert_eq!(a == b, a.canonical_key() == b.canonical_key());
        }

        #[test]
        fn pow_routes_agree(a in arb(3), e in 0u64..30) {
            let e = BigUint::from(e);
            prop_assert_eq!(a.pow_big(&e), a.pow_by_squaring(&e));
        }
    }
}
