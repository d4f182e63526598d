use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::OrbitPrefix;
use crate::budget::Budgets;
use crate::dynpoly::DynPoly;
use crate::error::{Error, Result};
use crate::funcfield::format_term;
use crate::ring::RingElem;

/// A nonzero plane curve `F(u, v) = 0`, stored as sparse terms
/// `c u^i v^j` sorted by `(i, j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaneCurve<C: RingElem> {
    ring: C::Ring,
    terms: Vec<((BigUint, BigUint), C)>,
}

impl<C: RingElem> PlaneCurve<C> {
    pub fn new(ring: &C::Ring, terms: impl IntoIterator<Item = ((BigUint, BigUint), C)>) -> Result<Self> {
        let mut map: BTreeMap<(BigUint, BigUint), C> = BTreeMap::new();
        for (e, c) in terms {
            match map.get_mut(&e) {
                Some(acc) => *acc = acc.plus(&c),
                None => {
                    map.insert(e, c);
                }
            }
        }
        let terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            return Err(Error::validation("curve", "the zero polynomial defines no curve"));
        }
        Ok(PlaneCurve {
            ring: ring.clone(),
            terms,
        })
    }

    /// The diagonal `u - v`.
    pub fn diagonal(ring: &C::Ring) -> Self {
        let one = C::one_in(ring);
        Self::new(
            ring,
            [
                ((BigUint::one(), BigUint::zero()), one.clone()),
                ((BigUint::zero(), BigUint::one()), one.negate()),
            ],
        )
        .expect("u - v is nonzero")
    }

    pub fn terms(&self) -> &[((BigUint, BigUint), C)] {
        &self.terms
    }

    pub fn eval(&self, u: &C, v: &C) -> C {
        let mut acc = C::zero_in(&self.ring);
        for ((i, j), c) in &self.terms {
            acc = acc.plus(&c.times(&u.pow(i)).times(&v.pow(j)));
        }
        acc
    }

    pub fn contains(&self, u: &C, v: &C) -> bool {
        self.eval(u, v).is_zero()
    }
}

impl<C: RingElem> fmt::Display for PlaneCurve<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let power = |var: char, e: &BigUint| -> Option<String> {
            if e.is_zero() {
                None
            } else if e.is_one() {
                Some(var.to_string())
            } else {
                Some(format!("{var}^{e}"))
            }
        };
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((i, j), c)| {
                let mono: Vec<String> = [power('u', i), power('v', j)].into_iter().flatten().collect();
                format_term(&c.to_string(), c.is_one(), c.needs_parens(), &mono.join("*"))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `n <= cap_n` with `(f^n(alpha), g^n(beta))` on the curve.
pub fn curve_return_set<C: RingElem>(
    f: &DynPoly<C>,
    g: &DynPoly<C>,
    (alpha, beta): (&C, &C),
    curve: &PlaneCurve<C>,
    cap_n: u64,
    budgets: &Budgets,
) -> Result<Vec<u64>> {
    let (of, og) = rayon::join(
        || OrbitPrefix::compute(f, alpha, cap_n, budgets),
        || OrbitPrefix::compute(g, beta, cap_n, budgets),
    );
    let (of, og) = (of?, og?);
    Ok((0..=cap_n as usize)
        .filter(|&n| curve.contains(&of.points[n], &og.points[n]))
        .map(|n| n as u64)
        .collect())
}
