use std::fmt;

use super::DynPoly;
use crate::error::{Error, Result};
use crate::ring::RingElem;

/// `mu(x) = a*x + b` with `a` a unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearMap<C: RingElem> {
    pub a: C,
    pub b: C,
}

impl<C: RingElem> LinearMap<C> {
    pub fn new(a: C, b: C) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        a.inverse()?;
        Ok(LinearMap { a, b })
    }

    pub fn identity(ring: &C::Ring) -> Self {
        LinearMap {
            a: C::one_in(ring),
            b: C::zero_in(ring),
        }
    }

    /// The translation `tau_b(x) = x + b`.
    pub fn translation(b: C) -> Self {
        LinearMap {
            a: C::one_in(&b.ring()),
            b,
        }
    }

    pub fn apply(&self, x: &C) -> C {
        self.a.times(x).plus(&self.b)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        LinearMap {
            a: self.a.times(&other.a),
            b: self.a.times(&other.b).plus(&self.b),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let ai = self.a.inverse()?;
        Ok(LinearMap {
            b: ai.times(&self.b).negate(),
            a: ai,
        })
    }

    pub fn to_dynpoly(&self) -> DynPoly<C> {
        let ring = self.a.ring();
        DynPoly::x(&ring).scale(&self.a).add(&DynPoly::constant(self.b.clone()))
    }

    /// `self ∘ f` for a polynomial `f`.
    pub fn apply_poly(&self, f: &DynPoly<C>) -> DynPoly<C> {
        f.scale(&self.a).add(&DynPoly::constant(self.b.clone()))
    }
}

impl<C: RingElem> fmt::Display for LinearMap<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dynpoly().to_string())
    }
}
