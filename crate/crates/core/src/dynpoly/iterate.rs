use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::DynPoly;
use crate::error::{Error, Result};
use crate::heights::multiplicative_dependence;
use crate::ring::RingElem;

/// Outcome of [`common_iterate`]: the least witness, if any, and every
/// candidate pair that was compared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommonIterate {
    pub witness: Option<(u64, u64)>,
    pub checked: Vec<(u64, u64)>,
}

fn small_degree<C: RingElem>(f: &DynPoly<C>, what: &'static str) -> Result<u64> {
    let d = f.degree();
    match d.to_u64() {
        Some(d) if d >= 2 => Ok(d),
        Some(_) => Err(Error::DegreeTooSmall {
            what,
            degree: d.to_string(),
            min: 2,
        }),
        None => Err(Error::DegreeBudgetExceeded {
            needed: d.to_string(),
            budget: u64::MAX,
        }),
    }
}

/// Least `(m, n)` with `m <= cap_m`, `n <= cap_n` and `f^m = g^n`.
///
/// Only pairs with `deg(f)^m = deg(g)^n` can work, so the candidates are the
/// multiples `(k r, k s)` of the minimal dependence; they come out in
/// lexicographic order.
pub fn common_iterate<C: RingElem>(
    f: &DynPoly<C>,
    g: &DynPoly<C>,
    cap_m: u64,
    cap_n: u64,
    budget: u64,
) -> Result<CommonIterate> {
    let d = small_degree(f, "common iterate search")?;
    let e = small_degree(g, "common iterate search")?;
    let mut out = CommonIterate {
        witness: None,
        checked: Vec::new(),
    };
    let Some((r, s)) = multiplicative_dependence(d, e) else {
        return Ok(out);
    };
    let mut fm = DynPoly::x(f.ring());
    let mut gn = DynPoly::x(g.ring());
    let budget_big = BigUint::from(budget);
    for k in 1u64.. {
        let (m, n) = (k * r, k * s);
        if m > cap_m || n > cap_n {
            break;
        }
        let needed = BigUint::from(d).pow(m as u32);
        if needed > budget_big {
            return Err(Error::DegreeBudgetExceeded {
                needed: format!("{d}^{m}"),
                budget,
            });
        }
        for _ in 0..r {
            fm = f.compose(&fm, budget)?;
        }
        for _ in 0..s {
            gn = g.compose(&gn, budget)?;
        }
        out.checked.push((m, n));
        if fm == gn {
            out.witness = Some((m, n));
            break;
        }
    }
    Ok(out)
}
