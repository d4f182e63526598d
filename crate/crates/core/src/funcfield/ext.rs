use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::kpoly::{format_dense, needs_parens, KPoly};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::RingElem;

#[derive(Debug)]
struct ExtInner {
    modulus: KPoly,
    /// `(y^p)^j mod M` for `j < deg M`.
    frob_basis: Vec<KPoly>,
}

/// The quotient ring `K[y]/(M(y))` for a monic `M` of degree at least 1.
///
/// `M` is not required to be irreducible; inversion reports zero divisors.
#[derive(Clone)]
pub struct ExtRing(Arc<ExtInner>);

impl PartialEq for ExtRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus == other.0.modulus
    }
}
impl Eq for ExtRing {}

impl ExtRing {
    /// Makes `modulus` monic and builds the ring.
    pub fn new(modulus: KPoly) -> Result<ExtRing> {
        match modulus.degree() {
            None | Some(0) => {
                return Err(Error::DegreeTooSmall {
                    what: "extension modulus",
                    degree: modulus.degree().map_or("-inf".into(), |d| d.to_string()),
                    min: 1,
                })
            }
            _ => {}
        }
        let modulus = modulus.monic();
        let field = modulus.field().clone();
        let s = modulus.degree().unwrap();
        let p = field.p();
        let mut yp = KPoly::one(&field);
        let mut base = KPoly::var(&field).rem(&modulus)?;
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                yp = yp.mul(&base).rem(&modulus)?;
            }
            base = base.mul(&base).rem(&modulus)?;
            e >>= 1;
        }
        let mut frob_basis = Vec::with_capacity(s);
        let mut acc = KPoly::one(&field);
        for _ in 0..s {
            frob_basis.push(acc.clone());
            acc = acc.mul(&yp).rem(&modulus)?;
        }
        Ok(ExtRing(Arc::new(ExtInner {
            modulus,
            frob_basis,
        })))
    }

    pub fn modulus(&self) -> &KPoly {
        &self.0.modulus
    }

    pub fn field(&self) -> &Field {
        self.0.modulus.field()
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.degree().unwrap()
    }

    /// The class of `y`.
    pub fn generator(&self) -> ExtElem {
        self.elem(KPoly::var(self.field()))
    }

    pub fn elem(&self, poly: KPoly) -> ExtElem {
        let poly = if poly.degree().is_some_and(|d| d >= self.degree()) {
            poly.rem(&self.0.modulus).expect("nonzero modulus")
        } else {
            poly
        };
        ExtElem {
            ring: self.clone(),
            poly,
        }
    }

    pub fn embed(&self, c: &RatFunc) -> ExtElem {
        self.elem(KPoly::constant(c.clone()))
    }
}

impl fmt::Display for ExtRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(t)[y]/({})", self.field(), self.0.modulus)
    }
}

impl fmt::Debug for ExtRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtRing({self})")
    }
}

/// An element of `K[y]/(M)`, stored as its reduced representative.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElem {
    ring: ExtRing,
    poly: KPoly,
}

impl Hash for ExtElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.poly.hash(state);
    }
}

impl ExtElem {
    pub fn ext_ring(&self) -> &ExtRing {
        &self.ring
    }

    pub fn poly(&self) -> &KPoly {
        &self.poly
    }

    /// The base-field value when the element lies in `K`.
    pub fn as_base(&self) -> Option<RatFunc> {
        match self.poly.degree() {
            None => Some(RatFunc::zero(self.ring.field())),
            Some(0) => Some(self.poly.coeff(0)),
            _ => None,
        }
    }

    fn check(&self, o: &ExtElem) {
        assert!(self.ring == o.ring, "extension ring mismatch");
    }

    pub fn add(&self, o: &ExtElem) -> ExtElem {
        self.check(o);
        self.ring.elem(self.poly.add(&o.poly))
    }

    pub fn sub(&self, o: &ExtElem) -> ExtElem {
        self.check(o);
        self.ring.elem(self.poly.sub(&o.poly))
    }

    pub fn mul(&self, o: &ExtElem) -> ExtElem {
        self.check(o);
        self.ring.elem(self.poly.mul(&o.poly))
    }

    pub fn inv(&self) -> Result<ExtElem> {
        if self.poly.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, u) = self.poly.xgcd_inverse_part(self.ring.modulus());
        if g.degree() != Some(0) {
            return Err(Error::ZeroDivisor {
                ring: self.ring.to_string(),
                element: self.to_string(),
            });
        }
        Ok(self.ring.elem(u))
    }

    fn frob_once(&self) -> ExtElem {
        let f = self.ring.field();
        let mut acc = KPoly::zero(f);
        for (j, c) in self.poly.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.ring.0.frob_basis[j].scale(&c.frob(1)));
            }
        }
        self.ring.elem(acc)
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_dense(self.poly.coeffs(), 'y', |c| c.to_string(), needs_parens);
        f.write_str(&s)
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElem({self} in {})", self.ring)
    }
}

impl RingElem for ExtElem {
    type Ring = ExtRing;

    fn ring(&self) -> ExtRing {
        self.ring.clone()
    }
    fn zero_in(ring: &ExtRing) -> Self {
        ring.elem(KPoly::zero(ring.field()))
    }
    fn one_in(ring: &ExtRing) -> Self {
        ring.elem(KPoly::one(ring.field()))
    }
    fn from_i64_in(ring: &ExtRing, n: i64) -> Self {
        ring.embed(&RatFunc::from_i64(ring.field(), n))
    }
    fn characteristic_of(ring: &ExtRing) -> u64 {
        ring.field().p()
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
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
        self.ring.elem(self.poly.neg())
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn frobenius(&self, k: u64) -> Self {
        let mut acc = self.clone();
        for _ in 0..k {
            acc = acc.frob_once();
        }
        acc
    }
    fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let s = self.ring.degree();
        for j in 0..s {
            out.extend(self.poly.coeff(j).canonical_key());
        }
        out
    }
}
