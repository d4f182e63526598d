//! The input language: fields, elements of `K` and `K[y]/(M)`, dynamical
//! and twisted polynomials, and scenario files.
//!
//! Letters are fixed: `t` for the function-field variable, the field
//! generator (`w`) when `q` is not prime, `y` for the extension generator,
//! `x` for the dynamical variable and `T` for the twisted variable. Integer
//! literals are reduced mod `p`. Unary minus is accepted and means
//! multiplication by `p - 1`. Printing is canonical and parses back to the
//! same value.

mod algebra;
mod scenario;
mod syntax;

pub use algebra::{ParseLimits, Scalar};
pub use scenario::{parse_scenario, Ambient, MapDef, Problem, Scenario, Task};
pub use syntax::MAX_DEPTH;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use algebra::{eval, to_kpoly, Algebra, CurveAlg, DynAlg, ScalarAlg, TwistedAlg};
use syntax::Expr;

use crate::dynpoly::DynPoly;
use crate::error::{Error, Result};
use crate::field::{is_prime, Field};
use crate::funcfield::{ExtElem, ExtRing, FFPoly, RatFunc};
use crate::orbits::PlaneCurve;
use crate::twisted::TwistedPoly;

/// Where an expression is interpreted.
#[derive(Clone, Copy, Debug)]
pub enum Context<'a> {
    Base(&'a Field),
    Ext(&'a ExtRing),
}

/// A parsed value, typed by its shape and context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Poly(FFPoly),
    Rat(RatFunc),
    Ext(ExtElem),
    Dyn(DynPoly<RatFunc>),
    DynExt(DynPoly<ExtElem>),
    Twisted(TwistedPoly<RatFunc>),
    TwistedExt(TwistedPoly<ExtElem>),
}

/// The shape chosen for an expression by the letters it uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Scalar,
    Dyn,
    Twisted,
}

fn shape_of(e: &Expr) -> Result<Shape> {
    let mut letters = Vec::new();
    e.letters(&mut letters);
    let x = letters.iter().find(|(c, _)| *c == 'x');
    let t = letters.iter().find(|(c, _)| *c == 'T');
    Ok(match (x, t) {
        (Some(&(_, px)), Some(&(_, pt))) => return Err(Error::MixedVariables { pos: px.max(pt) }),
        (Some(_), None) => Shape::Dyn,
        (None, Some(_)) => Shape::Twisted,
        (None, None) => Shape::Scalar,
    })
}

fn run<A: Algebra>(alg: &A, e: &Expr) -> Result<A::V> {
    eval(alg, e)
}

/// Parses `text` in `ctx`; the result shape follows the letters used.
pub fn parse_expr(text: &str, ctx: Context<'_>) -> Result<Value> {
    parse_expr_with(text, ctx, ParseLimits::default())
}

pub fn parse_expr_with(text: &str, ctx: Context<'_>, limits: ParseLimits) -> Result<Value> {
    let e = syntax::parse(text)?;
    let shape = shape_of(&e)?;
    Ok(match (ctx, shape) {
        (Context::Base(field), Shape::Scalar) => {
            let v = run(&ScalarAlg::<RatFunc> { ring: field, limits }, &e)?;
            if v.is_poly() {
                Value::Poly(v.numerator().clone())
            } else {
                Value::Rat(v)
            }
        }
        (Context::Base(field), Shape::Dyn) => Value::Dyn(run(&DynAlg::<RatFunc> { ring: field, var: 'x', limits }, &e)?),
        (Context::Base(field), Shape::Twisted) => {
            Value::Twisted(run(&TwistedAlg::<RatFunc> { ring: field, limits }, &e)?)
        }
        (Context::Ext(ring), Shape::Scalar) => Value::Ext(run(&ScalarAlg::<ExtElem> { ring, limits }, &e)?),
        (Context::Ext(ring), Shape::Dyn) => Value::DynExt(run(&DynAlg::<ExtElem> { ring, var: 'x', limits }, &e)?),
        (Context::Ext(ring), Shape::Twisted) => {
            Value::TwistedExt(run(&TwistedAlg::<ExtElem> { ring, limits }, &e)?)
        }
    })
}

/// Canonical text; `parse_expr(print_canonical(v))` returns `v`.
pub fn print_canonical(v: &Value) -> String {
    match v {
        Value::Poly(p) => p.to_string(),
        Value::Rat(r) => r.to_string(),
        Value::Ext(e) => e.to_string(),
        Value::Dyn(f) => f.to_string(),
        Value::DynExt(f) => f.to_string(),
        Value::Twisted(f) => f.to_string(),
        Value::TwistedExt(f) => f.to_string(),
    }
}

fn reject_letter(e: &Expr, forbidden: char) -> Result<()> {
    let mut letters = Vec::new();
    e.letters(&mut letters);
    match letters.iter().find(|(c, _)| *c == forbidden) {
        Some(&(c, pos)) => Err(Error::UndefinedSymbol { symbol: c, pos }),
        None => Ok(()),
    }
}

/// An element of `K`.
pub fn parse_rat(text: &str, field: &Field) -> Result<RatFunc> {
    let e = syntax::parse(text)?;
    run(&ScalarAlg::<RatFunc> { ring: field, limits: ParseLimits::default() }, &e)
}

/// An element of `K[y]/(M)`.
pub fn parse_ext_elem(text: &str, ring: &ExtRing) -> Result<ExtElem> {
    let e = syntax::parse(text)?;
    run(&ScalarAlg::<ExtElem> { ring, limits: ParseLimits::default() }, &e)
}

/// A polynomial in `x` over `K`.
pub fn parse_dyn(text: &str, field: &Field) -> Result<DynPoly<RatFunc>> {
    let e = syntax::parse(text)?;
    shape_of(&e)?;
    run(&DynAlg::<RatFunc> { ring: field, var: 'x', limits: ParseLimits::default() }, &e)
}

/// A polynomial in `x` over `K[y]/(M)`.
pub fn parse_dyn_ext(text: &str, ring: &ExtRing) -> Result<DynPoly<ExtElem>> {
    let e = syntax::parse(text)?;
    shape_of(&e)?;
    run(&DynAlg::<ExtElem> { ring, var: 'x', limits: ParseLimits::default() }, &e)
}

/// A twisted polynomial in `T` over `K`.
pub fn parse_twisted(text: &str, field: &Field, tau_budget: u64) -> Result<TwistedPoly<RatFunc>> {
    let e = syntax::parse(text)?;
    shape_of(&e)?;
    let limits = ParseLimits { tau: tau_budget, ..ParseLimits::default() };
    run(&TwistedAlg::<RatFunc> { ring: field, limits }, &e)
}

/// A twisted polynomial in `T` over `K[y]/(M)`.
pub fn parse_twisted_ext(text: &str, ring: &ExtRing, tau_budget: u64) -> Result<TwistedPoly<ExtElem>> {
    let e = syntax::parse(text)?;
    shape_of(&e)?;
    let limits = ParseLimits { tau: tau_budget, ..ParseLimits::default() };
    run(&TwistedAlg::<ExtElem> { ring, limits }, &e)
}

/// A scalar of `ring`, rejecting `x` and `T`.
pub fn parse_scalar_in<C: Scalar>(text: &str, ring: &C::Ring) -> Result<C> {
    let e = syntax::parse(text)?;
    reject_letter(&e, 'x')?;
    reject_letter(&e, 'T')?;
    run(&ScalarAlg::<C> { ring, limits: ParseLimits::default() }, &e)
}

/// A map written in `x` or in `T`, with its twisted form when additive.
pub fn parse_map_in<C: Scalar>(
    text: &str,
    ring: &C::Ring,
    limits: ParseLimits,
) -> Result<(DynPoly<C>, Option<TwistedPoly<C>>)> {
    let e = syntax::parse(text)?;
    match shape_of(&e)? {
        Shape::Twisted => {
            let tw = run(&TwistedAlg::<C> { ring, limits }, &e)?;
            Ok((tw.to_dyn(), Some(tw)))
        }
        _ => {
            let f = run(&DynAlg::<C> { ring, var: 'x', limits }, &e)?;
            let tw = TwistedPoly::from_dyn(&f).ok();
            Ok((f, tw))
        }
    }
}

/// A plane curve `F(u, v) = 0` from the text of `F`.
pub fn parse_curve_in<C: Scalar>(text: &str, ring: &C::Ring) -> Result<PlaneCurve<C>> {
    let e = syntax::parse(text)?;
    reject_letter(&e, 'x')?;
    reject_letter(&e, 'T')?;
    let terms = run(&CurveAlg::<C> { ring, limits: ParseLimits::default() }, &e)?;
    PlaneCurve::new(ring, terms)
}

/// Largest accepted degree of an extension modulus.
pub const MAX_EXT_DEGREE: u64 = 64;

/// The ring `K[y]/(M)` from the text of `M`, a polynomial in `y` over `K`.
pub fn parse_ext_modulus(text: &str, field: &Field) -> Result<ExtRing> {
    let e = syntax::parse(text)?;
    reject_letter(&e, 'x')?;
    reject_letter(&e, 'T')?;
    let m = run(&DynAlg::<RatFunc> { ring: field, var: 'y', limits: ParseLimits::default() }, &e)?;
    if m.degree() < BigUint::from(1u8) {
        return Err(Error::validation("ext", "modulus must have degree at least 1 in y"));
    }
    ExtRing::new(to_kpoly(field, &m, MAX_EXT_DEGREE)?)
}

/// `GF(p)`, or `GF(q; mod=M)` with `M` a monic polynomial in `w` over `F_p`
/// of degree `r` where `q = p^r`.
pub fn parse_field(text: &str) -> Result<Field> {
    let lead = text.len() - text.trim_start().len();
    let body = text.trim();
    let open = body
        .strip_prefix("GF")
        .map(|s| s.trim_start())
        .and_then(|s| s.strip_prefix('('))
        .ok_or_else(|| Error::syntax(lead, "expected GF(q) or GF(q; mod=...)"))?;
    let inner_start = lead + (body.len() - open.len());
    let inner = open
        .strip_suffix(')')
        .ok_or_else(|| Error::syntax(lead + body.len(), "expected ')'"))?;
    let (q_text, mod_text) = match inner.split_once(';') {
        Some((q, m)) => (q, Some(m)),
        None => (inner, None),
    };
    let q_pos = inner_start + (q_text.len() - q_text.trim_start().len());
    let q: u64 = q_text
        .trim()
        .parse()
        .map_err(|_| Error::syntax(q_pos, "expected the field size as an integer"))?;
    let (p, r) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    let Some(mod_text) = mod_text else {
        if r > 1 {
            return Err(Error::InvalidField(format!("GF({q}) needs a modulus: GF({q}; mod=...)")));
        }
        return Field::prime(p);
    };
    let m_start = inner_start + q_text.len() + 1;
    let trimmed = mod_text.trim_start();
    let after_key = trimmed
        .strip_prefix("mod")
        .map(|s| s.trim_start())
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| Error::syntax(m_start + (mod_text.len() - trimmed.len()), "expected mod=..."))?;
    let expr_start = m_start + (mod_text.len() - after_key.len());
    let e = syntax::parse(after_key).map_err(|err| shift(err, expr_start))?;
    reject_letter(&e, 't').map_err(|err| shift(err, expr_start))?;
    let prime = Field::prime(p)?;
    let poly = run(
        &DynAlg::<RatFunc> { ring: &prime, var: 'w', limits: ParseLimits::default() },
        &e,
    )
    .map_err(|err| shift(err, expr_start))?;
    if poly.degree() != BigUint::from(r) {
        return Err(Error::InvalidField(format!(
            "modulus {} has degree {}, expected {r} for GF({q})",
            poly.format_with('w'),
            poly.degree()
        )));
    }
    let mut coeffs = vec![0u64; r as usize + 1];
    for (e, c) in poly.terms() {
        let raw = c
            .as_constant()
            .ok_or_else(|| Error::InvalidField(format!("modulus coefficient {c} is not in F_{p}")))?;
        coeffs[e.to_usize().expect("degree checked")] = raw;
    }
    Field::extension(p, coeffs)
}

pub(crate) fn shift(err: Error, by: usize) -> Error {
    match err {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + by, msg },
        Error::UndefinedSymbol { symbol, pos } => Error::UndefinedSymbol { symbol, pos: pos + by },
        Error::MixedVariables { pos } => Error::MixedVariables { pos: pos + by },
        other => other,
    }
}

/// `(p, r)` with `q = p^r` and `p` prime.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    (1..64u32).find_map(|r| {
        let root = (q as f64).powf(1.0 / r as f64).round() as u64;
        (root.saturating_sub(1)..=root + 1).find_map(|p| {
            (p >= 2 && is_prime(p) && p.checked_pow(r) == Some(q)).then_some((p, r))
        })
    })
}

#[cfg(test)]
mod tests;
