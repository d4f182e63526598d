//! Weil and canonical heights over `F_q(t)`, rational recognition of
//! canonical heights, and the height sieve for orbit collisions.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dynpoly::DynPoly;
use crate::error::{Error, Result};
use crate::funcfield::RatFunc;

/// `h(f^N(gamma)) / d^N` together with a proven bound on its distance to the
/// canonical height.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HeightEstimate {
    #[serde(with = "rational_text")]
    pub value: BigRational,
    #[serde(with = "rational_text")]
    pub error_bound: BigRational,
    pub iterations: u64,
}

/// Serializes exact rationals as `"a/b"` strings.
pub mod rational_text {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_rational(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

fn dyn_degree(f: &DynPoly<RatFunc>) -> Result<u64> {
    let d = f.degree();
    match d.to_u64() {
        Some(d) if d >= 2 => Ok(d),
        _ => Err(Error::DegreeTooSmall {
            what: "height computations",
            degree: d.to_string(),
            min: 2,
        }),
    }
}

/// A bound `B` with `|h(f(gamma)) - d h(gamma)| <= B` for every `gamma` in `K`.
///
/// Place by place, with `c_d` the leading coefficient:
/// `log+|f(gamma)| <= max_i log+|c_i| + d log+|gamma|`, and once
/// `log|gamma| > max_{i<d} log+|c_i| + log+|1/c_d|` the leading term
/// dominates, so `log+|f(gamma)| >= d log+|gamma| - d (max_{i<d} log+|c_i| + log+|1/c_d|)`
/// everywhere. Summing over places gives `B = d * sum_i h(c_i)`.
pub fn height_gap_constant(f: &DynPoly<RatFunc>) -> Result<BigUint> {
    let d = dyn_degree(f)?;
    let total: BigUint = f.terms().iter().map(|(_, c)| c.height()).sum();
    Ok(total * d)
}

/// `h(f^N(gamma)) / d^N` with `N` minimal such that `B / (d^N (d - 1))` is at
/// most `target_error`.
///
/// Telescoping `|h(f(x)) - d h(x)| <= B` along the orbit gives
/// `|canonical(gamma) - h(f^N gamma) / d^N| <= B / (d^N (d - 1))`.
pub fn canonical_height(
    f: &DynPoly<RatFunc>,
    gamma: &RatFunc,
    target_error: &BigRational,
) -> Result<HeightEstimate> {
    let d = dyn_degree(f)?;
    if !target_error.is_positive() {
        return Err(Error::validation("targetError", "must be positive"));
    }
    let b = to_rational(&height_gap_constant(f)?);
    let dd = BigRational::from_integer(BigInt::from(d));
    let base = b / (&dd - BigRational::one());
    let mut n = 0u64;
    let mut scale = BigRational::one();
    while &base / &scale > *target_error {
        n += 1;
        scale *= &dd;
    }
    let point = f.orbit_element(gamma, n)?;
    Ok(HeightEstimate {
        value: to_rational(&point.height()) / &scale,
        error_bound: base / scale,
        iterations: n,
    })
}

fn floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// The fraction of least denominator in the closed interval `[lo, hi]`.
fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    let fl = BigRational::from_integer(floor(lo));
    if fl == *lo {
        return fl;
    }
    let next = &fl + BigRational::one();
    if next <= *hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Neighbours of `x` in the Farey sequence of order `d`.
fn farey_neighbours(x: &BigRational, d: &BigInt) -> (BigRational, BigRational) {
    let a = x.numer().clone();
    let b = x.denom().clone();
    // right neighbour c/e: b c - a e = 1, e maximal <= d
    let inv = mod_inverse(&a.mod_floor(&b), &b);
    let right_res = (-&inv).mod_floor(&b);
    let left_res = inv.mod_floor(&b);
    let largest = |res: &BigInt| -> BigInt {
        if b.is_one() {
            d.clone()
        } else {
            res + ((d - res).div_floor(&b)) * &b
        }
    };
    let e_r = largest(&right_res);
    let c_r = (BigInt::one() + &a * &e_r) / &b;
    let e_l = largest(&left_res);
    let c_l = (&a * &e_l - BigInt::one()) / &b;
    (BigRational::new(c_l, e_l), BigRational::new(c_r, e_r))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let g = a.extended_gcd(m);
    g.x.mod_floor(m)
}

/// The unique rational of denominator at most `denominator_bound` within
/// `error_bound` of the estimate; `None` if there is none or more than one.
pub fn rationalize(estimate: &HeightEstimate, denominator_bound: u64) -> Option<BigRational> {
    if denominator_bound == 0 {
        return None;
    }
    let lo = &estimate.value - &estimate.error_bound;
    let hi = &estimate.value + &estimate.error_bound;
    let x = simplest_between(&lo, &hi);
    let bound = BigInt::from(denominator_bound);
    if *x.denom() > bound {
        return None;
    }
    let (left, right) = farey_neighbours(&x, &bound);
    if left >= lo || right <= hi {
        return None;
    }
    Some(x)
}

/// All `(m, n)` within the caps with `|d^m u1 - e^n u2| < c`, in
/// lexicographic order.
///
/// For fixed `m` the admissible `n` form one contiguous run, located by
/// binary search in the increasing sequence `e^n u2`.
pub fn pruned_candidates(
    u1: &BigRational,
    u2: &BigRational,
    d: u64,
    e: u64,
    c: &BigRational,
    cap_m: u64,
    cap_n: u64,
) -> Vec<(u64, u64)> {
    let mut right: Vec<BigRational> = Vec::with_capacity(cap_n as usize + 1);
    let ee = BigRational::from_integer(BigInt::from(e));
    let mut acc = u2.clone();
    for _ in 0..=cap_n {
        right.push(acc.clone());
        acc *= &ee;
    }
    let increasing = u2.is_positive();
    let dd = BigRational::from_integer(BigInt::from(d));
    let mut left = u1.clone();
    let mut out = Vec::new();
    for m in 0..=cap_m {
        let lo = &left - c;
        let hi = &left + c;
        if increasing {
            let start = right.partition_point(|v| *v <= lo);
            for (n, v) in right.iter().enumerate().skip(start) {
                if *v >= hi {
                    break;
                }
                out.push((m, n as u64));
            }
        } else {
            for (n, v) in right.iter().enumerate() {
                if *v > lo && *v < hi {
                    out.push((m, n as u64));
                }
            }
        }
        left *= &dd;
    }
    out
}

/// The sieve constant `2 (B_f + B_g) + 1`; strictly above the proven
/// `B_f / (d - 1) + B_g / (e - 1)`, so collisions satisfy the strict bound.
pub fn sieve_constant(b_f: &BigUint, b_g: &BigUint) -> BigRational {
    to_rational(&((b_f + b_g) * 2u32 + 1u32))
}

fn factorize(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Minimal coprime `(r, s)` with `d^r = e^s`, if any.
pub fn multiplicative_dependence(d: u64, e: u64) -> Option<(u64, u64)> {
    if d < 2 || e < 2 {
        return None;
    }
    let fd = factorize(d);
    let fe = factorize(e);
    if fd.len() != fe.len() || fd.iter().zip(&fe).any(|(a, b)| a.0 != b.0) {
        return None;
    }
    let (a0, b0) = (fd[0].1, fe[0].1);
    let g = a0.gcd(&b0);
    let (r, s) = (b0 / g, a0 / g);
    fd.iter()
        .zip(&fe)
        .all(|(a, b)| r * a.1 == s * b.1)
        .then_some((r, s))
}
