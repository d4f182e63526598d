use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{map_degree, OrbitPrefix};
use crate::dynpoly::DynPoly;
use crate::error::Result;
use crate::funcfield::RatFunc;
use crate::heights::{height_gap_constant, rationalize, sieve_constant, HeightEstimate};

/// The height sieve for collisions of two orbits over `K`.
///
/// A collision `f^m(alpha) = g^n(beta)` forces
/// `|d^m u1 - e^n u2| < c` for the canonical heights `u1`, `u2`. The sieve
/// uses the estimates `v1`, `v2` read off the last orbit points, so it
/// admits `(m, n)` when `|d^m v1 - e^n v2| < c + d^m eps1 + e^n eps2`; this
/// is sound whatever the denominators of `u1`, `u2` are.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HeightSieve {
    pub b_f: String,
    pub b_g: String,
    #[serde(with = "crate::heights::rational_text")]
    pub c: BigRational,
    pub estimate_f: HeightEstimate,
    pub estimate_g: HeightEstimate,
    /// Rationalized canonical heights, when recognizable.
    pub u1: Option<String>,
    pub u2: Option<String>,
    #[serde(skip)]
    left: Vec<(BigRational, BigRational)>,
    #[serde(skip)]
    right: Vec<(BigRational, BigRational)>,
}

fn estimate(f: &DynPoly<RatFunc>, orbit: &OrbitPrefix<RatFunc>, b: &BigUint) -> Result<(u64, HeightEstimate)> {
    let d = map_degree(f, "height sieve")?;
    let n = orbit.cap();
    let dn = BigRational::from_integer(BigInt::from(d).pow(n as u32));
    let last = orbit.points.last().expect("prefix is nonempty");
    let h = BigRational::from_integer(BigInt::from(last.height()));
    let eps = BigRational::from_integer(BigInt::from(b.clone())) / (&dn * BigInt::from(d - 1));
    Ok((
        d,
        HeightEstimate {
            value: h / dn,
            error_bound: eps,
            iterations: n,
        },
    ))
}

fn scaled(base: u64, e: &HeightEstimate, cap: u64) -> Vec<(BigRational, BigRational)> {
    let k = BigRational::from_integer(BigInt::from(base));
    let mut s = BigRational::one();
    (0..=cap)
        .map(|_| {
            let out = (&e.value * &s, &e.error_bound * &s);
            s *= &k;
            out
        })
        .collect()
}

impl HeightSieve {
    pub fn from_prefixes(
        f: &DynPoly<RatFunc>,
        of: &OrbitPrefix<RatFunc>,
        g: &DynPoly<RatFunc>,
        og: &OrbitPrefix<RatFunc>,
        denominator_bound: u64,
    ) -> Result<Self> {
        let b_f = height_gap_constant(f)?;
        let b_g = height_gap_constant(g)?;
        let (d, estimate_f) = estimate(f, of, &b_f)?;
        let (e, estimate_g) = estimate(g, og, &b_g)?;
        Ok(HeightSieve {
            c: sieve_constant(&b_f, &b_g),
            b_f: b_f.to_string(),
            b_g: b_g.to_string(),
            u1: rationalize(&estimate_f, denominator_bound).map(|u| u.to_string()),
            u2: rationalize(&estimate_g, denominator_bound).map(|u| u.to_string()),
            left: scaled(d, &estimate_f, of.cap()),
            right: scaled(e, &estimate_g, og.cap()),
            estimate_f,
            estimate_g,
        })
    }

    pub fn admits(&self, m: u64, n: u64) -> bool {
        let (lv, le) = &self.left[m as usize];
        let (rv, re) = &self.right[n as usize];
        (lv - rv).abs() < &self.c + le + re
    }

    /// Admitted pairs in lexicographic order.
    pub fn candidates(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for m in 0..self.left.len() as u64 {
            for n in 0..self.right.len() as u64 {
                if self.admits(m, n) {
                    out.push((m, n));
                }
            }
        }
        out
    }
}
