//! The base field `K = F_q(t)` and simple quotient rings over it.

pub(crate) mod dense;
mod ext;
mod kpoly;
mod poly;
mod ratfunc;

pub use ext::{ExtElem, ExtRing};
pub use kpoly::KPoly;
pub use poly::{dense_threshold, set_dense_threshold, FFPoly};
pub use ratfunc::RatFunc;
pub(crate) use kpoly::format_term;
