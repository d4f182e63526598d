//! Scenario files: `key = value` assignments, one or more per line
//! separated by `;`, with `#` comments.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::algebra::{ParseLimits, Scalar};
use super::{parse_curve_in, parse_ext_modulus, parse_field, parse_map_in, parse_scalar_in, shift};
use crate::budget::Budgets;
use crate::dynpoly::DynPoly;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::funcfield::{ExtElem, ExtRing, RatFunc};
use crate::orbits::PlaneCurve;
use crate::twisted::TwistedPoly;

pub const DEFAULT_CAP: u64 = 64;
pub const DEFAULT_DENOMINATOR: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Intersect,
    Synchronized,
    CurveReturn,
    VerifyExample,
    Heights,
    Classify,
}

impl Task {
    pub const ALL: [Task; 6] = [
        Task::Intersect,
        Task::Synchronized,
        Task::CurveReturn,
        Task::VerifyExample,
        Task::Heights,
        Task::Classify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Intersect => "intersect",
            Task::Synchronized => "synchronized",
            Task::CurveReturn => "curve-return",
            Task::VerifyExample => "verify-example",
            Task::Heights => "heights",
            Task::Classify => "classify",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Task::Intersect => &["field", "f", "g", "alpha", "beta"],
            Task::Synchronized => &["field", "f", "g", "alpha", "beta", "r", "s"],
            Task::CurveReturn => &["field", "f", "g", "alpha", "beta", "curve"],
            Task::VerifyExample => &["example"],
            Task::Heights => &["field", "f", "alpha"],
            Task::Classify => &["field", "f", "g"],
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A map as a polynomial in `x`, plus its twisted form when additive.
#[derive(Clone, Debug)]
pub struct MapDef<C: Scalar> {
    pub poly: DynPoly<C>,
    pub twisted: Option<TwistedPoly<C>>,
}

/// The maps, points and curve of a scenario over one coefficient ring.
#[derive(Clone, Debug)]
pub struct Problem<C: Scalar> {
    pub f: Option<MapDef<C>>,
    pub g: Option<MapDef<C>>,
    pub alpha: Option<C>,
    pub beta: Option<C>,
    pub curve: Option<PlaneCurve<C>>,
}

impl<C: Scalar> Default for Problem<C> {
    fn default() -> Self {
        Problem {
            f: None,
            g: None,
            alpha: None,
            beta: None,
            curve: None,
        }
    }
}

/// Where the scenario's data live.
#[derive(Clone, Debug)]
pub enum Ambient {
    /// No field was given; only `verify-example` allows this.
    Unspecified,
    Base(Field, Problem<RatFunc>),
    Ext(ExtRing, Problem<ExtElem>),
}

impl Ambient {
    pub fn field(&self) -> Option<&Field> {
        match self {
            Ambient::Unspecified => None,
            Ambient::Base(f, _) => Some(f),
            Ambient::Ext(r, _) => Some(r.field()),
        }
    }
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    /// Assignments in file order, values trimmed.
    pub entries: Vec<(String, String)>,
    pub task: Task,
    pub ambient: Ambient,
    pub cap_m: u64,
    pub cap_n: u64,
    pub r: Option<u64>,
    pub s: Option<u64>,
    pub a: u64,
    pub b: u64,
    pub example: Option<String>,
    pub p: Option<u64>,
    pub nmax: Option<u64>,
    pub denominator: u64,
    pub budgets: Budgets,
    pub pruning: bool,
}

const KEYS: [&str; 21] = [
    "field",
    "ext",
    "f",
    "g",
    "alpha",
    "beta",
    "task",
    "capM",
    "capN",
    "r",
    "s",
    "a",
    "b",
    "curve",
    "example",
    "p",
    "nmax",
    "denominator",
    "degreeBudget",
    "tauBudget",
    "pruning",
];

struct Entry {
    value: String,
    /// Byte offset of `value` in the file.
    at: usize,
}

/// Splits at `;` outside parentheses, so `GF(4; mod=...)` stays whole.
fn split_top_level(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i64;
    let mut start = 0;
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth <= 0 => {
                out.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&body[start..]);
    out
}

fn split_assignments(text: &str) -> Result<Vec<(String, Entry)>> {
    let mut out = Vec::new();
    let mut line_start = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        let mut offset = line_start;
        for piece in split_top_level(body) {
            let start = offset;
            offset += piece.len() + 1;
            if piece.trim().is_empty() {
                continue;
            }
            let Some(eq) = piece.find('=') else {
                let lead = piece.len() - piece.trim_start().len();
                return Err(Error::syntax(start + lead, "expected key = value"));
            };
            let key = piece[..eq].trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric()) {
                let lead = piece.len() - piece.trim_start().len();
                return Err(Error::syntax(start + lead, "expected a key before '='"));
            }
            let raw = &piece[eq + 1..];
            let lead = raw.len() - raw.trim_start().len();
            out.push((
                key.to_string(),
                Entry {
                    value: raw.trim().to_string(),
                    at: start + eq + 1 + lead,
                },
            ));
        }
        line_start += line.len();
    }
    Ok(out)
}

fn number(key: &str, e: &Entry) -> Result<u64> {
    e.value
        .parse()
        .map_err(|_| Error::validation(key, format!("expected a non-negative integer, got '{}'", e.value)))
}

fn boolean(key: &str, e: &Entry) -> Result<bool> {
    match e.value.as_str() {
        "true" | "on" | "yes" => Ok(true),
        "false" | "off" | "no" => Ok(false),
        other => Err(Error::validation(key, format!("expected true or false, got '{other}'"))),
    }
}

fn task(e: &Entry) -> Result<Task> {
    Task::ALL
        .into_iter()
        .find(|t| t.name() == e.value)
        .ok_or_else(|| {
            let names: Vec<&str> = Task::ALL.iter().map(|t| t.name()).collect();
            Error::validation("task", format!("unknown task '{}', expected one of {}", e.value, names.join(", ")))
        })
}

fn problem<C: Scalar>(
    ring: &C::Ring,
    map: &BTreeMap<String, Entry>,
    limits: ParseLimits,
) -> Result<Problem<C>> {
    let at = |k: &str| map.get(k);
    let parse_map = |k: &str| -> Result<Option<MapDef<C>>> {
        at(k)
            .map(|e| {
                let (poly, twisted) = parse_map_in::<C>(&e.value, ring, limits).map_err(|err| shift(err, e.at))?;
                Ok(MapDef { poly, twisted })
            })
            .transpose()
    };
    let parse_point = |k: &str| -> Result<Option<C>> {
        at(k)
            .map(|e| parse_scalar_in::<C>(&e.value, ring).map_err(|err| shift(err, e.at)))
            .transpose()
    };
    Ok(Problem {
        f: parse_map("f")?,
        g: parse_map("g")?,
        alpha: parse_point("alpha")?,
        beta: parse_point("beta")?,
        curve: at("curve")
            .map(|e| parse_curve_in::<C>(&e.value, ring).map_err(|err| shift(err, e.at)))
            .transpose()?,
    })
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let assignments = split_assignments(text)?;
    let mut map: BTreeMap<String, Entry> = BTreeMap::new();
    let mut entries = Vec::new();
    for (key, entry) in assignments {
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::validation(key, "unknown key"));
        }
        if map.contains_key(&key) {
            return Err(Error::validation(key, "assigned twice"));
        }
        entries.push((key.clone(), entry.value.clone()));
        map.insert(key, entry);
    }
    let task = task(map.get("task").ok_or_else(|| Error::validation("task", "missing"))?)?;
    for &k in task.required() {
        if !map.contains_key(k) {
            return Err(Error::validation(k, format!("required by task {task}")));
        }
    }
    let num = |k: &str| map.get(k).map(|e| number(k, e)).transpose();
    let mut budgets = Budgets::default();
    if let Some(d) = num("degreeBudget")? {
        budgets.degree = d;
    }
    if let Some(t) = num("tauBudget")? {
        budgets.tau = t;
    }
    let limits = ParseLimits {
        tau: budgets.tau,
        ..ParseLimits::default()
    };
    let ambient = match map.get("field") {
        None => Ambient::Unspecified,
        Some(fe) => {
            let field = parse_field(&fe.value).map_err(|err| shift(err, fe.at))?;
            match map.get("ext") {
                None => {
                    let pr = problem::<RatFunc>(&field, &map, limits)?;
                    Ambient::Base(field, pr)
                }
                Some(ee) => {
                    let ring = parse_ext_modulus(&ee.value, &field).map_err(|err| shift(err, ee.at))?;
                    let pr = problem::<ExtElem>(&ring, &map, limits)?;
                    Ambient::Ext(ring, pr)
                }
            }
        }
    };
    if matches!(ambient, Ambient::Unspecified) {
        if let Some(k) = ["ext", "f", "g", "alpha", "beta", "curve"].iter().find(|k| map.contains_key(**k)) {
            return Err(Error::validation(*k, "needs a field"));
        }
    }
    if task == Task::Heights && matches!(ambient, Ambient::Ext(..)) {
        return Err(Error::validation("ext", "heights are computed over K only"));
    }
    let cap_m = num("capM")?.unwrap_or(DEFAULT_CAP);
    let cap_n = num("capN")?.unwrap_or(DEFAULT_CAP);
    let denominator = num("denominator")?.unwrap_or(DEFAULT_DENOMINATOR);
    if denominator == 0 {
        return Err(Error::validation("denominator", "must be positive"));
    }
    let r = num("r")?;
    let s = num("s")?;
    if r == Some(0) || s == Some(0) {
        return Err(Error::validation(if r == Some(0) { "r" } else { "s" }, "must be positive"));
    }
    Ok(Scenario {
        entries,
        task,
        ambient,
        cap_m,
        cap_n,
        r,
        s,
        a: num("a")?.unwrap_or(0),
        b: num("b")?.unwrap_or(0),
        example: map.get("example").map(|e| e.value.clone()),
        p: num("p")?,
        nmax: num("nmax")?,
        denominator,
        budgets,
        pruning: map.get("pruning").map(|e| boolean("pruning", e)).transpose()?.unwrap_or(false),
    })
}
