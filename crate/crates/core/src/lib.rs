//! Exact arithmetic and orbit-intersection tooling for polynomial dynamics
//! over function fields of positive characteristic.

pub mod budget;
pub mod dynpoly;
pub mod error;
pub mod field;
pub mod funcfield;
pub mod heights;
pub mod orbits;
pub mod parse;
pub mod ring;
pub mod report;
pub mod twisted;
pub mod verify;

pub use budget::Budgets;
pub use dynpoly::{DynPoly, LinearMap};
pub use error::{Error, Result};
pub use field::{Field, FieldElem, FieldSpec};
pub use funcfield::{ExtElem, ExtRing, FFPoly, KPoly, RatFunc};
pub use ring::RingElem;
pub use twisted::TwistedPoly;
pub use parse::{parse_expr, parse_scenario, print_canonical, Scenario, Task, Value};
pub use report::{run_scenario, run_verify_all, ErrorReport, Format, Outcome, Report};
pub use verify::{verify, verify_all, Status, VerifyOptions, VerifyReport};
