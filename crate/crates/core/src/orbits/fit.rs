use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::heights::rational_text;

pub const AP_MIN_WITNESSES: usize = 4;
pub const PSET_MIN_WITNESSES: usize = 3;

/// `{step * k + start : k >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticProgression {
    pub step: u64,
    pub start: u64,
}

impl ArithmeticProgression {
    pub fn members(&self, cap: u64) -> Vec<u64> {
        (0..)
            .map(|k| self.start + self.step * k)
            .take_while(|&x| x <= cap)
            .collect()
    }
}

/// `{a p^(r k) + b : k >= 0}` with `a = a0 / (p^r - 1)` and
/// `b = b0 / (p^r - 1)`; every member is an integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PSet {
    pub p: u64,
    pub r: u32,
    #[serde(with = "rational_text")]
    pub a: BigRational,
    #[serde(with = "rational_text")]
    pub b: BigRational,
}

impl PSet {
    /// The p-set through consecutive members `x0 < x1`.
    pub fn through(p: u64, r: u32, x0: u64, x1: u64) -> Option<PSet> {
        let q = p.checked_pow(r)?;
        let den = BigInt::from(q - 1);
        let a0 = BigInt::from(x1) - BigInt::from(x0);
        let b0 = BigInt::from(x0) * &den - &a0;
        Some(PSet {
            p,
            r,
            a: BigRational::new(a0, den.clone()),
            b: BigRational::new(b0, den),
        })
    }

    pub fn members(&self, cap: u64) -> Vec<u64> {
        let q = BigInt::from(self.p).pow(self.r);
        let mut scale = BigInt::from(1);
        let mut out = Vec::new();
        loop {
            let v = &self.a * BigRational::from_integer(scale.clone()) + &self.b;
            match v.to_integer().to_u64() {
                Some(x) if x <= cap && v.is_integer() => out.push(x),
                _ => break,
            }
            scale *= &q;
        }
        out
    }
}

/// Exceptional values plus progressions and p-sets explaining a return set
/// inside `[0, cap]`. A heuristic summary: nothing is claimed beyond `cap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReturnModel {
    pub cap: u64,
    pub exceptional: Vec<u64>,
    pub progressions: Vec<ArithmeticProgression>,
    pub p_sets: Vec<PSet>,
    pub ap_min_witnesses: usize,
    pub p_set_min_witnesses: usize,
}

impl ReturnModel {
    /// Every value the model predicts inside `[0, cap]`.
    pub fn members(&self, cap: u64) -> BTreeSet<u64> {
        let mut out: BTreeSet<u64> = self.exceptional.iter().copied().filter(|&x| x <= cap).collect();
        for ap in &self.progressions {
            out.extend(ap.members(cap));
        }
        for ps in &self.p_sets {
            out.extend(ps.members(cap));
        }
        out
    }
}

fn best_progression(data: &BTreeSet<u64>, u: u64, cap: u64) -> Option<ArithmeticProgression> {
    let mut best: Option<(usize, ArithmeticProgression)> = None;
    for step in 1..=cap / (AP_MIN_WITNESSES as u64 - 1) {
        let mut start = u;
        while start >= step && data.contains(&(start - step)) {
            start -= step;
        }
        let ap = ArithmeticProgression { step, start };
        let members = ap.members(cap);
        if members.len() < AP_MIN_WITNESSES {
            continue;
        }
        if members.iter().all(|x| data.contains(x)) && best.as_ref().is_none_or(|(n, _)| members.len() > *n) {
            best = Some((members.len(), ap));
        }
    }
    best.map(|(_, ap)| ap)
}

fn best_pset(data: &BTreeSet<u64>, uncovered: &BTreeSet<u64>, u: u64, p: u64, cap: u64) -> Option<PSet> {
    for r in 1u32.. {
        let q = match p.checked_pow(r) {
            Some(q) if q - 1 <= cap => q,
            _ => return None,
        };
        let mut best: Option<(usize, PSet)> = None;
        for &x1 in data.range(u + 1..) {
            // x2 = x1 + (x1 - u) q must fit for three witnesses
            if (x1 - u).checked_mul(q).and_then(|d| d.checked_add(x1)).is_none_or(|x2| x2 > cap) {
                break;
            }
            let Some(ps) = PSet::through(p, r, u, x1) else { continue };
            let members = ps.members(cap);
            if members.len() >= PSET_MIN_WITNESSES && members.iter().all(|x| data.contains(x)) {
                let gain = members.iter().filter(|x| uncovered.contains(x)).count();
                if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                    best = Some((gain, ps));
                }
            }
        }
        if let Some((_, ps)) = best {
            return Some(ps);
        }
    }
    None
}

/// Greedy fit of `data` (assumed exhaustive inside `[0, cap]`).
///
/// Progressions come first: for the least unexplained value, the progression
/// through it with the most members, all of which must be in the data. Then
/// p-sets starting at the least unexplained value, with `r` minimal and the
/// most newly explained members. Whatever is left is exceptional.
pub fn fit_return_model(data: &[u64], p: u64, cap: u64) -> ReturnModel {
    let data: BTreeSet<u64> = data.iter().copied().filter(|&x| x <= cap).collect();
    let mut uncovered = data.clone();
    let mut progressions = Vec::new();
    let mut rest = BTreeSet::new();
    while let Some(u) = uncovered.pop_first() {
        match best_progression(&data, u, cap) {
            Some(ap) => {
                for x in ap.members(cap) {
                    uncovered.remove(&x);
                }
                progressions.push(ap);
            }
            None => {
                rest.insert(u);
            }
        }
    }
    let mut p_sets = Vec::new();
    let mut exceptional = Vec::new();
    let mut uncovered = rest;
    while let Some(u) = uncovered.pop_first() {
        match best_pset(&data, &uncovered, u, p, cap) {
            Some(ps) => {
                for x in ps.members(cap) {
                    uncovered.remove(&x);
                }
                p_sets.push(ps);
            }
            None => exceptional.push(u),
        }
    }
    progressions.sort_by_key(|ap| (ap.start, ap.step));
    ReturnModel {
        cap,
        exceptional,
        progressions,
        p_sets,
        ap_min_witnesses: AP_MIN_WITNESSES,
        p_set_min_witnesses: PSET_MIN_WITNESSES,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::ratio;
    use proptest::prelude::*;

    #[test]
    fn powers_of_two() {
        let m = fit_return_model(&[1, 2, 4, 8, 16, 32, 64], 2, 64);
        assert!(m.progressions.is_empty());
        assert!(m.exceptional.is_empty());
        assert_eq!(m.p_sets, vec![PSet { p: 2, r: 1, a: ratio(1, 1), b: ratio(0, 1) }]);
    }

    #[test]
    fn odd_numbers() {
        let data: Vec<u64> = (3..=63).step_by(2).collect();
        let m = fit_return_model(&data, 2, 64);
        assert_eq!(m.progressions, vec![ArithmeticProgression { step: 2, start: 3 }]);
        assert!(m.p_sets.is_empty() && m.exceptional.is_empty());
    }

    #[test]
    fn repunits_base_three() {
        let m = fit_return_model(&[1, 4, 13, 40], 3, 100);
        assert_eq!(m.p_sets.len(), 1);
        let ps = &m.p_sets[0];
        assert_eq!((ps.r, ps.a.clone()), (1, BigRational::new(3.into(), 2.into())));
        assert_eq!(ps.b, BigRational::new((-1).into(), 2.into()));
        assert!(m.exceptional.is_empty());
    }

    #[test]
    fn exceptional_values() {
        let m = fit_return_model(&[0, 5, 17], 2, 64);
        assert_eq!(m.exceptional, vec![0, 5, 17]);
    }

    fn arb_model() -> impl Strategy<Value = (u64, ReturnModel)> {
        (
            prop_oneof![Just(2u64), Just(3), Just(5)],
            prop::collection::vec((1u64..=10, 0u64..40), 0..3),
            prop::collection::vec((1u32..=2, 1u64..6, 0u64..6), 0..3),
            prop::collection::vec(0u64..120, 0..4),
        )
            .prop_map(|(p, aps, psets, extra)| {
                let cap = 120;
                let progressions = aps
                    .into_iter()
                    .map(|(step, start)| ArithmeticProgression { step, start })
                    .collect();
                let p_sets = psets
                    .into_iter()
                    .filter_map(|(r, gap, x0)| PSet::through(p, r, x0, x0 + gap * (p.pow(r) - 1)))
                    .collect();
                let model = ReturnModel {
                    cap,
                    exceptional: extra,
                    progressions,
                    p_sets,
                    ap_min_witnesses: AP_MIN_WITNESSES,
                    p_set_min_witnesses: PSET_MIN_WITNESSES,
                };
                (p, model)
            })
    }

    proptest! {
        #[test]
        fn fit_round_trip((p, model) in arb_model()) {
            let data: Vec<u64> = model.members(model.cap).into_iter().collect();
            let fitted = fit_return_model(&data, p, model.cap);
            let again: Vec<u64> = fitted.members(model.cap).into_iter().collect();
            prop_assert_eq!(&again, &data);
            let refit = fit_return_model(&again, p, model.cap);
            prop_assert_eq!(refit, fitted);
        }

        #[test]
        fn pset_members_are_integral(
            p in prop_oneof![Just(2u64), Just(3), Just(5)],
            r in 1u32..3,
            x0 in 0u64..50,
            gap in 1u64..20,
        ) {
            let q = p.pow(r);
            let ps = PSet::through(p, r, x0, x0 + gap * (q - 1) + 1).unwrap();
            let members = ps.members(1 << 30);
            prop_assert_eq!(members[0], x0);
            prop_assert!(members.len() >= 2);
            for w in members.windows(3) {
                prop_assert_eq!(w[2] - w[1], (w[1] - w[0]) * q);
            }
        }
    }
}
