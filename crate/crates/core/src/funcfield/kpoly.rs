use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;

use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::field::Field;

/// A dense univariate polynomial over `K = F_q(t)`, low to high, trimmed.
///
/// Used for extension moduli and for the shift polynomials of the
/// conjugate-to-additive decision; degrees stay small.
#[derive(Clone, PartialEq, Eq)]
pub struct KPoly {
    field: Field,
    coeffs: Vec<RatFunc>,
}

impl Hash for KPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl KPoly {
    pub fn zero(field: &Field) -> Self {
        KPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(RatFunc::one(field))
    }

    pub fn constant(c: RatFunc) -> Self {
        let field = c.field().clone();
        Self::new(&field, vec![c])
    }

    /// The variable itself.
    pub fn var(field: &Field) -> Self {
        Self::new(field, vec![RatFunc::zero(field), RatFunc::one(field)])
    }

    pub fn new(field: &Field, mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        KPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFunc {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> RatFunc {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(&self.field))
    }

    pub fn add(&self, o: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        KPoly::new(&self.field, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        KPoly::new(&self.field, (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> KPoly {
        KPoly::new(&self.field, self.coeffs.iter().map(RatFunc::neg).collect())
    }

    pub fn scale(&self, c: &RatFunc) -> KPoly {
        KPoly::new(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, o: &KPoly) -> KPoly {
        if self.is_zero() || o.is_zero() {
            return KPoly::zero(&self.field);
        }
        let mut out = vec![RatFunc::zero(&self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        KPoly::new(&self.field, out)
    }

    pub fn monic(&self) -> KPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn divrem(&self, d: &KPoly) -> Result<(KPoly, KPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = d.leading().inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((KPoly::zero(&self.field), self.clone()));
        }
        let mut quo = vec![RatFunc::zero(&self.field); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let c = rem[top].mul(&inv);
            let shift = top - dd;
            for (i, y) in d.coeffs.iter().enumerate() {
                rem[shift + i] = rem[shift + i].sub(&c.mul(y));
            }
            quo[shift] = c;
        }
        rem.truncate(dd);
        Ok((KPoly::new(&self.field, quo), KPoly::new(&self.field, rem)))
    }

    pub fn rem(&self, d: &KPoly) -> Result<KPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &KPoly) -> KPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// `(g, u)` with `g = gcd(self, m)` monic and `u * self = g mod m`.
    pub fn xgcd_inverse_part(&self, m: &KPoly) -> (KPoly, KPoly) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m).expect("nonzero modulus"));
        let (mut s0, mut s1) = (KPoly::zero(&self.field), KPoly::one(&self.field));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.is_zero() {
            return (r0, s0);
        }
        let inv = r0.leading().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv))
    }

    pub fn eval(&self, x: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn pow(&self, e: u64) -> KPoly {
        crate::ring::pow_small(self, e, &KPoly::one(&self.field), |a, b| a.mul(b))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> KPoly {
        let f = &self.field;
        KPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&RatFunc::from_i64(f, i as i64)))
                .collect(),
        )
    }

    /// Apply the Frobenius of `K` to every coefficient.
    pub fn frob_coeffs(&self, k: u64) -> KPoly {
        KPoly::new(&self.field, self.coeffs.iter().map(|c| c.frob(k)).collect())
    }

    /// Canonical text in the variable `var`, highest degree first.
    pub fn format_with(&self, var: char) -> String {
        format_dense(&self.coeffs, var, |c| c.to_string(), needs_parens)
    }

    pub fn exponents_big(&self) -> impl Iterator<Item = (BigUint, &RatFunc)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (BigUint::from(i), c))
    }
}

/// Whether a coefficient must be parenthesized before `*var^e`.
pub(crate) fn needs_parens(c: &RatFunc) -> bool {
    c.to_string().contains(' ')
}

pub(crate) fn format_dense<C>(
    coeffs: &[C],
    var: char,
    show: impl Fn(&C) -> String,
    paren: impl Fn(&C) -> bool,
) -> String
where
    C: crate::ring::RingElem,
{
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(format_term(&show(c), c.is_one(), paren(c), &mono));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub(crate) fn format_term(coef: &str, is_one: bool, paren: bool, mono: &str) -> String {
    // a bare summand never needs parentheses
    if mono.is_empty() {
        coef.to_string()
    } else if is_one {
        mono.to_string()
    } else if paren {
        format!("({coef})*{mono}")
    } else {
        format!("{coef}*{mono}")
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with('y'))
    }
}

impl fmt::Debug for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let f = Field::prime(3).unwrap();
        let y = KPoly::var(&f);
        let t = KPoly::constant(RatFunc::t(&f));
        let a = y.sub(&t); // y - t
        let b = y.add(&t); // y + t
        let prod = a.mul(&b);
        let (q, r) = prod.divrem(&a).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, b);
        assert_eq!(prod.gcd(&a.mul(&y)), a);
        assert_eq!(prod.eval(&RatFunc::t(&f)), RatFunc::zero(&f));
    }

    #[test]
    fn inverse_mod() {
        let f = Field::prime(2).unwrap();
        let t = RatFunc::t(&f);
        // m = y^2 + y + t
        let m = KPoly::new(&f, vec![t.clone(), RatFunc::one(&f), RatFunc::one(&f)]);
        let y = KPoly::var(&f);
        let (g, u) = y.xgcd_inverse_part(&m);
        assert_eq!(g, KPoly::one(&f));
        assert_eq!(u.mul(&y).rem(&m).unwrap(), KPoly::one(&f));
    }

    #[test]
    fn printing() {
        let f = Field::prime(2).unwrap();
        let t = RatFunc::t(&f);
        let m = KPoly::new(&f, vec![t.clone(), RatFunc::one(&f), RatFunc::one(&f)]);
        assert_eq!(m.to_string(), "y^2 + y + t");
        let n = KPoly::new(&f, vec![t.add(&RatFunc::one(&f)), t.clone()]);
        assert_eq!(n.to_string(), "t*y + t + 1");
    }
}
