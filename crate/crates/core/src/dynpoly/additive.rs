//! Deciding conjugacy to additive polynomials and solving `f(d) - d = gamma`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{DynPoly, LinearMap};
use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::field::binom_mod_u64;
use crate::funcfield::{ExtElem, ExtRing, FFPoly, KPoly, RatFunc};
use crate::ring::{digits_base, log_p_exact, RingElem};

/// Outcome of [`conjugate_to_additive`].
#[derive(Clone, Debug)]
pub enum AdditiveConjugacy {
    /// `map ∘ f ∘ map^{-1} = additive` with `map = x + shift` over `K`.
    Base {
        map: LinearMap<RatFunc>,
        additive: DynPoly<RatFunc>,
    },
    /// The shift is the class of `y` in `K[y]/(M)`; `M` was not factored,
    /// so the ring may fail to be a field.
    Extension {
        ring: ExtRing,
        map: LinearMap<ExtElem>,
        additive: DynPoly<ExtElem>,
        may_not_be_field: bool,
    },
    NotConjugate,
}

/// A shift `delta` with `f(delta) - delta = gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineShift {
    Base(RatFunc),
    Extension { ring: ExtRing, delta: ExtElem },
}

fn require_degree(f: &DynPoly<RatFunc>, budget: u64) -> Result<usize> {
    let d = f.degree();
    if d < BigUint::from(2u8) {
        return Err(Error::DegreeTooSmall {
            what: "additive conjugacy",
            degree: d.to_string(),
            min: 2,
        });
    }
    match d.to_u64() {
        Some(d) if d <= budget => Ok(d as usize),
        _ => Err(Error::DegreeBudgetExceeded {
            needed: d.to_string(),
            budget,
        }),
    }
}

/// All `i <= e` with `C(e, i) != 0 mod p`, i.e. digitwise dominated by `e`.
fn lucas_support(e: u64, p: u64) -> Vec<u64> {
    let digits = digits_base(&BigUint::from(e), p);
    let mut out = vec![0u64];
    let mut place = 1u64;
    for d in digits {
        let prev = out.clone();
        for k in 1..=d {
            out.extend(prev.iter().map(|x| x + k * place));
        }
        place = place.saturating_mul(p);
    }
    out.sort_unstable();
    out
}

/// The coefficients of `f(x - b) + b` at the non-`p`-power monomials, as
/// polynomials in `b`.
fn obstruction_polys(f: &DynPoly<RatFunc>, d: usize) -> BTreeMap<u64, Vec<RatFunc>> {
    let field = f.ring().clone();
    let p = field.p();
    let mut out: BTreeMap<u64, Vec<RatFunc>> = BTreeMap::new();
    let zero = RatFunc::zero(&field);
    for (e, c) in f.terms() {
        let e = e.to_u64().expect("degree checked");
        for i in lucas_support(e, p) {
            if i > 0 && log_p_exact(&BigUint::from(i), p).is_some() {
                continue;
            }
            let binom = binom_mod_u64(e, i, p);
            let sign = if (e - i) % 2 == 0 { 1 } else { -1 };
            let k = RatFunc::from_i64(&field, binom as i64 * sign);
            let slot = out.entry(i).or_insert_with(|| vec![zero.clone(); d + 1]);
            let j = (e - i) as usize;
            slot[j] = slot[j].add(&c.mul(&k));
        }
    }
    let constant = out.entry(0).or_insert_with(|| vec![zero.clone(); d + 1]);
    constant[1] = constant[1].add(&RatFunc::one(&field));
    out
}

/// Decide whether some `lambda = x + b` makes `lambda ∘ f ∘ lambda^{-1}`
/// additive.
///
/// Scaling never changes the monomial support, so only the shift matters.
/// The admissible shifts are the common roots of the obstruction polynomials;
/// their gcd `G` is searched for roots in `K` of bounded height, and failing
/// that the root is adjoined as `y` in `K[y]/(G)`.
pub fn conjugate_to_additive(f: &DynPoly<RatFunc>, budgets: &Budgets) -> Result<AdditiveConjugacy> {
    let d = require_degree(f, budgets.degree)?;
    let field = f.ring().clone();
    if f.is_additive() {
        return Ok(AdditiveConjugacy::Base {
            map: LinearMap::identity(&field),
            additive: f.clone(),
        });
    }
    let mut g = KPoly::zero(&field);
    for (_, coeffs) in obstruction_polys(f, d) {
        g = g.gcd(&KPoly::new(&field, coeffs));
        if g.degree() == Some(0) {
            return Ok(AdditiveConjugacy::NotConjugate);
        }
    }
    if g.is_zero() {
        return Ok(AdditiveConjugacy::Base {
            map: LinearMap::identity(&field),
            additive: f.clone(),
        });
    }
    let (roots, _) = roots_in_base(&g, budgets);
    if let Some(b) = roots.into_iter().next() {
        let map = LinearMap::translation(b);
        let additive = f.conjugate(&map)?;
        debug_assert!(additive.is_additive());
        return Ok(AdditiveConjugacy::Base { map, additive });
    }
    let ring = ExtRing::new(g)?;
    let fe = f.map_coeffs(&ring, |c| ring.embed(c));
    let map = LinearMap::translation(ring.generator());
    let additive = fe.conjugate(&map)?;
    Ok(AdditiveConjugacy::Extension {
        may_not_be_field: ring.degree() > 1,
        ring,
        map,
        additive,
    })
}

/// A root of `f(x) - x - gamma` for additive `f`, searched in `K` first and
/// adjoined as `y` otherwise.
pub fn solve_affine_conjugacy(
    f: &DynPoly<RatFunc>,
    gamma: &RatFunc,
    budgets: &Budgets,
) -> Result<AffineShift> {
    let d = require_degree(f, budgets.degree)?;
    if !f.is_additive() {
        return Err(Error::NotAdditive(f.to_string()));
    }
    let field = f.ring().clone();
    let mut coeffs = vec![RatFunc::zero(&field); d + 1];
    for (e, c) in f.terms() {
        coeffs[e.to_usize().unwrap()] = c.clone();
    }
    coeffs[1] = coeffs[1].sub(&RatFunc::one(&field));
    coeffs[0] = coeffs[0].sub(gamma);
    let poly = KPoly::new(&field, coeffs);
    let (roots, _) = roots_in_base(&poly, budgets);
    if let Some(delta) = roots.into_iter().next() {
        return Ok(AffineShift::Base(delta));
    }
    let ring = ExtRing::new(poly)?;
    let delta = ring.generator();
    Ok(AffineShift::Extension { ring, delta })
}

fn root_order(a: &RatFunc, b: &RatFunc) -> std::cmp::Ordering {
    let terms = |x: &RatFunc| x.numerator().num_terms() + x.denominator().num_terms();
    (a.height(), terms(a), a.canonical_key()).cmp(&(b.height(), terms(b), b.canonical_key()))
}

/// Roots in `K` of height at most `budgets.root_height`, ordered by
/// (height, number of terms, canonical key). The flag reports whether the
/// search ran to completion within `budgets.root_nodes`.
///
/// Denominators are cleared and `b = z / g_n` substituted, making the
/// polynomial monic in `z` over `F_q[t]`; its roots are then polynomials,
/// found digit by digit in `t` with exact pruning modulo `t^(k+1)`.
pub fn roots_in_base(poly: &KPoly, budgets: &Budgets) -> (Vec<RatFunc>, bool) {
    let field = poly.field().clone();
    let Some(n) = poly.degree() else {
        return (Vec::new(), false);
    };
    if n == 0 {
        return (Vec::new(), true);
    }
    let mut roots = Vec::new();
    let mut coeffs = poly.coeffs().to_vec();
    let low = coeffs.iter().take_while(|c| c.is_zero()).count();
    if low > 0 {
        roots.push(RatFunc::zero(&field));
        coeffs.drain(..low);
    }
    let n = coeffs.len() - 1;
    let mut complete = true;
    if n == 1 {
        roots.push(coeffs[0].neg().div(&coeffs[1]).expect("nonzero leading coefficient"));
    } else if n > 1 {
        match integral_roots(&coeffs, budgets) {
            Some((found, done)) => {
                roots.extend(found);
                complete = done;
            }
            None => complete = false,
        }
    }
    let bound = BigUint::from(budgets.root_height);
    roots.retain(|r| r.height() <= bound);
    roots.sort_by(root_order);
    roots.dedup();
    (roots, complete)
}

fn integral_roots(coeffs: &[RatFunc], budgets: &Budgets) -> Option<(Vec<RatFunc>, bool)> {
    let field = coeffs[0].field().clone();
    let n = coeffs.len() - 1;
    let mut lcm = FFPoly::one(&field);
    for c in coeffs {
        let den = c.denominator();
        let g = lcm.gcd(den);
        lcm = &lcm * &den.div_exact(&g).ok()?;
    }
    let g: Vec<FFPoly> = coeffs
        .iter()
        .map(|c| {
            let scaled = c.mul(&RatFunc::from_poly(lcm.clone()));
            scaled.numerator().clone()
        })
        .collect();
    let lead = g[n].clone();
    // H(z) = z^n + sum_{i<n} g_i lead^(n-1-i) z^i
    let mut h: Vec<FFPoly> = Vec::with_capacity(n + 1);
    let mut lead_pow = FFPoly::one(&field);
    let mut pows = vec![FFPoly::one(&field)];
    for _ in 1..n {
        lead_pow = &lead_pow * &lead;
        pows.push(lead_pow.clone());
    }
    for (i, gi) in g.iter().enumerate().take(n) {
        h.push(gi * &pows[n - 1 - i]);
    }
    h.push(FFPoly::one(&field));
    let dense: Vec<Vec<u64>> = h.iter().map(|x| x.to_dense()).collect::<Option<_>>()?;
    let mut dz = 0usize;
    for (i, hi) in dense.iter().enumerate().take(n) {
        if !hi.is_empty() {
            dz = dz.max((hi.len() - 1) / (n - i));
        }
    }
    let lead_deg = lead.degree_or_zero().to_usize()?;
    dz = dz.min(budgets.root_height as usize + lead_deg);
    let mut search = Search {
        field: &field,
        h: &dense,
        nodes: 0,
        max_nodes: budgets.root_nodes,
        found: Vec::new(),
        top: dz,
    };
    let done = search.dfs(&mut Vec::new());
    let lead_rf = RatFunc::from_poly(lead);
    let roots = search
        .found
        .into_iter()
        .map(|z| {
            RatFunc::from_poly(FFPoly::from_dense(&field, &z))
                .div(&lead_rf)
                .expect("nonzero denominator")
        })
        .collect();
    Some((roots, done))
}

struct Search<'a> {
    field: &'a crate::field::Field,
    h: &'a [Vec<u64>],
    nodes: u64,
    max_nodes: u64,
    found: Vec<Vec<u64>>,
    top: usize,
}

impl Search<'_> {
    /// `H(z) mod t^len` with truncated dense arithmetic.
    fn eval_trunc(&self, z: &[u64], len: usize) -> Vec<u64> {
        let f = self.field;
        let mut acc: Vec<u64> = Vec::new();
        for hi in self.h.iter().rev() {
            let mut next = vec![0u64; len];
            for (i, &a) in acc.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in z.iter().enumerate().take(len - i) {
                    next[i + j] = f.add(next[i + j], f.mul(a, b));
                }
            }
            for (i, &c) in hi.iter().enumerate().take(len) {
                next[i] = f.add(next[i], c);
            }
            acc = next;
        }
        acc
    }

    fn dfs(&mut self, z: &mut Vec<u64>) -> bool {
        let k = z.len();
        if k > self.top {
            let full = self.eval_exact(z);
            if full {
                let mut root = z.clone();
                crate::funcfield::dense::trim(&mut root);
                self.found.push(root);
            }
            return true;
        }
        let mut complete = true;
        for c in 0..self.field.q() {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return false;
            }
            z.push(c);
            if self.eval_trunc(z, k + 1).iter().all(|&x| x == 0) {
                complete &= self.dfs(z);
            }
            z.pop();
            if !complete {
                return false;
            }
        }
        complete
    }

    fn eval_exact(&self, z: &[u64]) -> bool {
        let zp = FFPoly::from_dense(self.field, z);
        let mut acc = FFPoly::zero(self.field);
        for hi in self.h.iter().rev() {
            acc = &(&acc * &zp) + &FFPoly::from_dense(self.field, hi);
        }
        acc.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn poly(field: &Field, terms: &[(u64, RatFunc)]) -> DynPoly<RatFunc> {
        DynPoly::from_terms(field, terms.iter().map(|(e, c)| (BigUint::from(*e), c.clone())))
    }

    #[test]
    fn lucas_support_matches_binomials() {
        for p in [2u64, 3, 5] {
            for e in 0..60u64 {
                let direct: Vec<u64> = (0..=e).filter(|&i| binom_mod_u64(e, i, p) != 0).collect();
                assert_eq!(lucas_support(e, p), direct, "e={e} p={p}");
            }
        }
    }

    #[test]
    fn shift_to_additive_over_base() {
        let f = f2();
        let t = RatFunc::t(&f);
        let c = t.mul(&t).add(&t);
        let g = poly(&f, &[(2, RatFunc::one(&f)), (0, c)]);
        match conjugate_to_additive(&g, &Budgets::default()).unwrap() {
            AdditiveConjugacy::Base { map, additive } => {
                assert_eq!(map.b, t);
                assert_eq!(additive, poly(&f, &[(2, RatFunc::one(&f))]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shift_to_additive_needs_extension() {
        let f = f2();
        let g = poly(&f, &[(2, RatFunc::one(&f)), (0, RatFunc::t(&f))]);
        match conjugate_to_additive(&g, &Budgets::default()).unwrap() {
            AdditiveConjugacy::Extension { ring, additive, may_not_be_field, .. } => {
                assert_eq!(ring.modulus().to_string(), "y^2 + y + t");
                assert_eq!(additive.to_string(), "x^2");
                assert!(may_not_be_field);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn not_conjugate() {
        // x^3 + x^2 over F_2(t): the x^3 coefficient never vanishes
        let f = f2();
        let g = poly(&f, &[(3, RatFunc::one(&f)), (2, RatFunc::one(&f))]);
        assert!(matches!(
            conjugate_to_additive(&g, &Budgets::default()).unwrap(),
            AdditiveConjugacy::NotConjugate
        ));
    }

    #[test]
    fn affine_shifts() {
        let f = f2();
        let t = RatFunc::t(&f);
        let sq = poly(&f, &[(2, RatFunc::one(&f))]);
        let b = Budgets::default();
        assert_eq!(
            solve_affine_conjugacy(&sq, &t.mul(&t).add(&t), &b).unwrap(),
            AffineShift::Base(t.clone())
        );
        assert_eq!(
            solve_affine_conjugacy(&sq, &RatFunc::zero(&f), &b).unwrap(),
            AffineShift::Base(RatFunc::zero(&f))
        );
        match solve_affine_conjugacy(&sq, &t, &b).unwrap() {
            AffineShift::Extension { ring, delta } => {
                assert_eq!(ring.modulus().to_string(), "y^2 + y + t");
                assert_eq!(delta.to_string(), "y");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn roots_with_denominators() {
        // (t+1) b^2 - (t^2 + 1) b over F_3 has roots 0 and (t^2+1)/(t+1)
        let f = Field::prime(3).unwrap();
        let t = RatFunc::t(&f);
        let one = RatFunc::one(&f);
        let k = KPoly::new(&f, vec![RatFunc::zero(&f), t.mul(&t).add(&one).neg(), t.add(&one)]);
        let (roots, complete) = roots_in_base(&k, &Budgets::default());
        assert!(complete);
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[1], t.mul(&t).add(&one).div(&t.add(&one)).unwrap());
        // quadratic with two polynomial roots t and 2t + 1
        let r1 = t.clone();
        let r2 = t.add(&t).add(&one);
        let q = KPoly::new(&f, vec![r1.neg(), one.clone()]).mul(&KPoly::new(&f, vec![r2.neg(), one.clone()]));
        let (roots, _) = roots_in_base(&q, &Budgets::default());
        assert_eq!(roots, vec![r1, r2]);
    }
}
