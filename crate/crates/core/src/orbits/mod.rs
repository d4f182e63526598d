//! Orbit intersections, synchronized collisions, return sets on curves and
//! return-set model fitting.

mod curve;
mod fit;
mod sieve;

pub use curve::{curve_return_set, PlaneCurve};
pub use fit::{fit_return_model, ArithmeticProgression, PSet, ReturnModel};
pub use sieve::HeightSieve;

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::dynpoly::DynPoly;
use crate::error::{Error, Result};
use crate::heights::multiplicative_dependence;
use crate::ring::RingElem;

/// `[gamma, f(gamma), ..., f^cap(gamma)]` with canonical keys.
///
/// Once a key repeats the orbit is periodic and the remaining entries are
/// copied from the cycle instead of evaluated.
#[derive(Clone, Debug)]
pub struct OrbitPrefix<C: RingElem> {
    pub points: Vec<C>,
    pub keys: Vec<Vec<u8>>,
    /// `(preperiod, period)` if the orbit closed up within the prefix.
    pub cycle: Option<(u64, u64)>,
}

impl<C: RingElem> OrbitPrefix<C> {
    pub fn compute(f: &DynPoly<C>, gamma: &C, cap: u64, budgets: &Budgets) -> Result<Self> {
        if gamma.ring() != *f.ring() {
            return Err(Error::RingMismatch(format!("point {gamma} is not in {}", f.ring())));
        }
        let len = cap as usize + 1;
        let mut points: Vec<C> = Vec::with_capacity(len);
        let mut keys: Vec<Vec<u8>> = Vec::with_capacity(len);
        let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut cycle = None;
        let mut current = gamma.clone();
        while points.len() < len {
            let key = current.canonical_key();
            if key.len() as u64 > budgets.orbit_point_bytes {
                return Err(Error::OrbitPointTooLarge {
                    index: points.len() as u64,
                    bytes: key.len(),
                    budget: budgets.orbit_point_bytes,
                });
            }
            if let Some(&start) = seen.get(&key) {
                let period = points.len() - start;
                cycle = Some((start as u64, period as u64));
                while points.len() < len {
                    let i = points.len() - period;
                    points.push(points[i].clone());
                    keys.push(keys[i].clone());
                }
                break;
            }
            seen.insert(key.clone(), points.len());
            keys.push(key);
            let next = f.eval_unchecked(&current);
            points.push(std::mem::replace(&mut current, next));
        }
        Ok(OrbitPrefix { points, keys, cycle })
    }

    pub fn cap(&self) -> u64 {
        self.points.len() as u64 - 1
    }
}

/// Collision pairs `(m, n)` with `f^m(alpha) = g^n(beta)` inside the caps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReturnSet {
    pub pairs: Vec<(u64, u64)>,
    pub cap_m: u64,
    pub cap_n: u64,
    /// Every pair inside the caps was decided.
    pub exhaustive_within_caps: bool,
    /// False only when both orbits closed up and never met, so the empty
    /// answer holds without caps.
    pub caps_hit: bool,
}

impl ReturnSet {
    /// The `m = n` slice.
    pub fn diagonal(&self) -> Vec<u64> {
        self.pairs.iter().filter(|(m, n)| m == n).map(|p| p.0).collect()
    }
}

pub(crate) fn map_degree<C: RingElem>(f: &DynPoly<C>, what: &'static str) -> Result<u64> {
    let d = f.degree();
    match d.to_u64() {
        Some(d) if d >= 2 => Ok(d),
        _ => Err(Error::DegreeTooSmall {
            what,
            degree: d.to_string(),
            min: 2,
        }),
    }
}

/// Pairs from two prefixes by key join; with `prune`, only admitted pairs
/// are compared.
pub fn intersect_prefixes<C: RingElem>(
    of: &OrbitPrefix<C>,
    og: &OrbitPrefix<C>,
    prune: Option<&(dyn Fn(u64, u64) -> bool + Sync)>,
) -> ReturnSet {
    let mut pairs = Vec::new();
    match prune {
        None => {
            let mut index: HashMap<&[u8], Vec<u64>> = HashMap::new();
            for (m, k) in of.keys.iter().enumerate() {
                index.entry(k.as_slice()).or_default().push(m as u64);
            }
            for (n, k) in og.keys.iter().enumerate() {
                if let Some(ms) = index.get(k.as_slice()) {
                    pairs.extend(ms.iter().map(|&m| (m, n as u64)));
                }
            }
        }
        Some(admit) => {
            for (m, km) in of.keys.iter().enumerate() {
                for (n, kn) in og.keys.iter().enumerate() {
                    if admit(m as u64, n as u64) && km == kn {
                        pairs.push((m as u64, n as u64));
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let closed = of.cycle.is_some() && og.cycle.is_some();
    ReturnSet {
        caps_hit: !(closed && pairs.is_empty()),
        pairs,
        cap_m: of.cap(),
        cap_n: og.cap(),
        exhaustive_within_caps: true,
    }
}

/// All collisions `f^m(alpha) = g^n(beta)` with `m <= cap_m`, `n <= cap_n`.
pub fn intersect_orbits<C: RingElem>(
    f: &DynPoly<C>,
    alpha: &C,
    g: &DynPoly<C>,
    beta: &C,
    cap_m: u64,
    cap_n: u64,
    budgets: &Budgets,
) -> Result<ReturnSet> {
    map_degree(f, "orbit intersection")?;
    map_degree(g, "orbit intersection")?;
    let (of, og) = rayon::join(
        || OrbitPrefix::compute(f, alpha, cap_m, budgets),
        || OrbitPrefix::compute(g, beta, cap_n, budgets),
    );
    Ok(intersect_prefixes(&of?, &og?, None))
}

/// `n <= cap_n` with `f^(r n + a)(alpha) = g^(s n + b)(beta)`.
#[allow(clippy::too_many_arguments)]
pub fn synchronized_collisions<C: RingElem>(
    f: &DynPoly<C>,
    alpha: &C,
    g: &DynPoly<C>,
    beta: &C,
    (r, s): (u64, u64),
    (a, b): (u64, u64),
    cap_n: u64,
    budgets: &Budgets,
) -> Result<Vec<u64>> {
    if r == 0 || s == 0 {
        return Err(Error::validation("r, s", "must be at least 1"));
    }
    let cap_m = r
        .checked_mul(cap_n)
        .and_then(|x| x.checked_add(a))
        .ok_or_else(|| Error::validation("capN", "too large"))?;
    let cap_g = s
        .checked_mul(cap_n)
        .and_then(|x| x.checked_add(b))
        .ok_or_else(|| Error::validation("capN", "too large"))?;
    let (of, og) = rayon::join(
        || OrbitPrefix::compute(f, alpha, cap_m, budgets),
        || OrbitPrefix::compute(g, beta, cap_g, budgets),
    );
    let (of, og) = (of?, og?);
    Ok((0..=cap_n)
        .filter(|&n| of.keys[(r * n + a) as usize] == og.keys[(s * n + b) as usize])
        .collect())
}

/// Same-degree data `f1 = f^r`, `g1 = g^s`, `alpha1 = f^a(alpha)`,
/// `beta1 = g^b(beta)` with `deg(f)^r = deg(g)^s`.
#[derive(Clone, Debug)]
pub struct SameDegree<C: RingElem> {
    pub f1: DynPoly<C>,
    pub g1: DynPoly<C>,
    pub alpha1: C,
    pub beta1: C,
    pub r: u64,
    pub s: u64,
    pub a: u64,
    pub b: u64,
}

/// `None` when no `d^r = e^s` exists, in which case the orbits meet only
/// finitely often. Otherwise `(a, b)` are the residues mod `(r, s)` of the
/// first collision inside the caps, or `(0, 0)` if there is none.
#[allow(clippy::too_many_arguments)]
pub fn reduce_to_same_degree<C: RingElem>(
    f: &DynPoly<C>,
    alpha: &C,
    g: &DynPoly<C>,
    beta: &C,
    cap_m: u64,
    cap_n: u64,
    budgets: &Budgets,
) -> Result<Option<SameDegree<C>>> {
    let d = map_degree(f, "degree reduction")?;
    let e = map_degree(g, "degree reduction")?;
    let Some((r, s)) = multiplicative_dependence(d, e) else {
        return Ok(None);
    };
    let f1 = f.iterate(r, budgets.degree)?;
    let g1 = g.iterate(s, budgets.degree)?;
    let rs = intersect_orbits(f, alpha, g, beta, cap_m, cap_n, budgets)?;
    let (a, b) = rs.pairs.first().map_or((0, 0), |&(m, n)| (m % r, n % s));
    Ok(Some(SameDegree {
        alpha1: f.orbit_element(alpha, a)?,
        beta1: g.orbit_element(beta, b)?,
        f1,
        g1,
        r,
        s,
        a,
        b,
    }))
}

/// Outcome of checking a claimed progression of diagonal collisions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "verdict")]
pub enum ApVerdict {
    /// The data hold for every `n <= cap_n` and `f^a = g^a`.
    Confirmed,
    /// `f^(a n + b)(alpha) != g^(a n + b)(beta)` at `n`.
    RefutedData { n: u64 },
    /// The data hold but `f^a != g^a`.
    RefutedIterate,
}

/// Checks `f^(a n + b)(alpha) = g^(a n + b)(beta)` for `n <= cap_n`, then
/// whether `f^a = g^a` symbolically.
#[allow(clippy::too_many_arguments)]
pub fn ap_implies_common_iterate<C: RingElem>(
    f: &DynPoly<C>,
    g: &DynPoly<C>,
    a: u64,
    b: u64,
    alpha: &C,
    beta: &C,
    cap_n: u64,
    budgets: &Budgets,
) -> Result<ApVerdict> {
    if a == 0 {
        return Err(Error::validation("a", "must be positive"));
    }
    let hits = synchronized_collisions(f, alpha, g, beta, (a, a), (b, b), cap_n, budgets)?;
    if let Some(n) = (0..=cap_n).find(|n| !hits.contains(n)) {
        return Ok(ApVerdict::RefutedData { n });
    }
    let fa = f.iterate(a, budgets.degree)?;
    let ga = g.iterate(a, budgets.degree)?;
    Ok(if fa == ga {
        ApVerdict::Confirmed
    } else {
        ApVerdict::RefutedIterate
    })
}
