//! Scenario execution and report emission.
//!
//! A report holds only exact, deterministically ordered data, so running the
//! same scenario twice yields identical bytes. Timing is attached by the
//! caller and is absent unless set.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::dynpoly::{common_iterate, conjugate_to_additive, AdditiveConjugacy, DynPoly};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::funcfield::RatFunc;
use crate::heights::{
    canonical_height, height_gap_constant, multiplicative_dependence, rationalize, sieve_constant, HeightEstimate,
};
use crate::orbits::{
    ap_implies_common_iterate, curve_return_set, fit_return_model, intersect_prefixes, map_degree,
    synchronized_collisions, ApVerdict, HeightSieve, OrbitPrefix, ReturnModel,
};
use crate::parse::{Ambient, Problem, Scalar, Scenario, Task};
use crate::ring::RingElem;
use crate::verify::{verify, verify_all, VerifyOptions, VerifyReport, DEFAULT_PMAX};

pub const TOOL: &str = "orbitp";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Iterate caps for `classify` when the scenario sets none; the default
/// orbit caps would ask for degrees far beyond any budget.
pub const CLASSIFY_CAP: u64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub tool: String,
    pub version: String,
    /// Where the scenario came from, as given by the caller.
    pub source: Option<String>,
    pub task: String,
    /// The scenario's assignments in file order.
    pub scenario: Vec<Assignment>,
    pub field: Option<String>,
    pub extension: Option<String>,
    pub budgets: Budgets,
    /// True when some answer is only known to hold inside the caps.
    pub caps_hit: bool,
    pub success: bool,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Intersect(IntersectOutcome),
    Synchronized(SynchronizedOutcome),
    CurveReturn(CurveOutcome),
    Verify(VerifyReport),
    Heights(HeightsOutcome),
    Classify(ClassifyOutcome),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IntersectOutcome {
    pub cap_m: u64,
    pub cap_n: u64,
    pub pairs: Vec<(u64, u64)>,
    /// Collisions with `m = n`.
    pub diagonal: Vec<u64>,
    pub exhaustive_within_caps: bool,
    /// Least `(r, s)` with `deg(f)^r = deg(g)^s`.
    pub degree_dependence: Option<(u64, u64)>,
    /// Heuristic fit of the diagonal inside `min(capM, capN)`.
    pub diagonal_model: ReturnModel,
    pub pruning: Option<SieveSummary>,
    /// Largest canonical encoding among the computed orbit points.
    pub max_point_bytes: u64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SieveSummary {
    pub b_f: String,
    pub b_g: String,
    pub c: String,
    pub estimate_f: HeightEstimate,
    pub estimate_g: HeightEstimate,
    pub u1: Option<String>,
    pub u2: Option<String>,
    /// Pairs admitted by the sieve and then compared.
    pub candidates: u64,
    /// Pairs inside the caps.
    pub total: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SynchronizedOutcome {
    pub r: u64,
    pub s: u64,
    pub a: u64,
    pub b: u64,
    pub cap_n: u64,
    /// `n` with `f^(r n + a)(alpha) = g^(s n + b)(beta)`.
    pub hits: Vec<u64>,
    pub model: ReturnModel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveOutcome {
    pub curve: String,
    pub cap_n: u64,
    /// `n` with `(f^n(alpha), g^n(beta))` on the curve.
    pub hits: Vec<u64>,
    pub model: ReturnModel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HeightEntry {
    pub map: String,
    pub point: String,
    pub degree: u64,
    /// `B` with `|h(f(x)) - d h(x)| <= B`.
    pub gap_constant: String,
    pub estimate: HeightEstimate,
    /// The unique fraction with denominator at most the bound inside the
    /// error interval, if there is one.
    pub rationalized: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HeightsOutcome {
    pub denominator_bound: u64,
    pub entries: Vec<HeightEntry>,
    /// Sieve constant for the pair, when `g` and `beta` are given.
    pub sieve_constant: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyOutcome {
    pub degree_f: String,
    pub degree_g: String,
    pub degree_dependence: Option<(u64, u64)>,
    pub cap_m: u64,
    pub cap_n: u64,
    /// Least `(m, n)` inside the caps with `f^m = g^n`.
    pub common_iterate: Option<(u64, u64)>,
    pub pairs_checked: Vec<(u64, u64)>,
    pub additive_f: bool,
    pub additive_g: bool,
    pub conjugacy_f: Option<String>,
    pub conjugacy_g: Option<String>,
    /// Verdict on the claimed progression `{a n + b}`, when `a` is set.
    pub progression: Option<ApVerdict>,
}

impl Report {
    fn new(scenario: Option<&Scenario>, task: &str, budgets: Budgets, caps_hit: bool, outcome: Outcome) -> Self {
        let (field, extension) = match scenario.map(|s| &s.ambient) {
            Some(Ambient::Base(f, _)) => (Some(f.to_string()), None),
            Some(Ambient::Ext(r, _)) => (Some(r.field().to_string()), Some(r.modulus().to_string())),
            _ => (None, None),
        };
        let success = match &outcome {
            Outcome::Verify(v) => v.all_passed(),
            _ => true,
        };
        Report {
            tool: TOOL.into(),
            version: VERSION.into(),
            source: None,
            task: task.into(),
            scenario: scenario
                .map(|s| {
                    s.entries
                        .iter()
                        .map(|(k, v)| Assignment {
                            key: k.clone(),
                            value: v.clone(),
                        })
                        .collect()
                })
                .unwrap_or_default(),
            field,
            extension,
            budgets,
            caps_hit,
            success,
            outcome,
            timing_ms: None,
        }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "{} {}: {}", self.tool, self.version, self.task);
        if let Some(s) = &self.source {
            let _ = writeln!(w, "source: {s}");
        }
        if let Some(f) = &self.field {
            let _ = writeln!(w, "field: {f}");
        }
        if let Some(e) = &self.extension {
            let _ = writeln!(w, "extension: {e} = 0");
        }
        for a in &self.scenario {
            if matches!(a.key.as_str(), "f" | "g" | "alpha" | "beta" | "curve" | "example") {
                let _ = writeln!(w, "{} = {}", a.key, a.value);
            }
        }
        match &self.outcome {
            Outcome::Intersect(o) => {
                let _ = writeln!(w, "caps: capM = {}, capN = {}", o.cap_m, o.cap_n);
                let _ = writeln!(w, "pairs ({}): {}", o.pairs.len(), pairs_text(&o.pairs));
                let _ = writeln!(w, "diagonal: {}", list_text(&o.diagonal));
                if let Some((r, s)) = o.degree_dependence {
                    let _ = writeln!(w, "degree dependence: deg(f)^{r} = deg(g)^{s}");
                } else {
                    let _ = writeln!(w, "degree dependence: none");
                }
                model_text(w, "diagonal model", &o.diagonal_model);
                if let Some(p) = &o.pruning {
                    let _ = writeln!(
                        w,
                        "height sieve: c = {}, B_f = {}, B_g = {}, compared {} of {} pairs",
                        p.c, p.b_f, p.b_g, p.candidates, p.total
                    );
                }
                let _ = writeln!(w, "largest orbit point: {} bytes", o.max_point_bytes);
                if let Some(n) = &o.note {
                    let _ = writeln!(w, "note: {n}");
                }
            }
            Outcome::Synchronized(o) => {
                let _ = writeln!(w, "f^({} n + {}) = g^({} n + {}) for n <= {}", o.r, o.a, o.s, o.b, o.cap_n);
                let _ = writeln!(w, "hits ({}): {}", o.hits.len(), list_text(&o.hits));
                model_text(w, "model", &o.model);
            }
            Outcome::CurveReturn(o) => {
                let _ = writeln!(w, "curve: {} = 0, n <= {}", o.curve, o.cap_n);
                let _ = writeln!(w, "hits ({}): {}", o.hits.len(), list_text(&o.hits));
                model_text(w, "model", &o.model);
            }
            Outcome::Heights(o) => {
                for e in &o.entries {
                    let _ = writeln!(
                        w,
                        "h_{}({}) ~ {} +- {} (N = {}), B = {}, rationalized (den <= {}): {}",
                        e.map,
                        e.point,
                        rational_decimal(&e.estimate.value),
                        rational_decimal(&e.estimate.error_bound),
                        e.estimate.iterations,
                        e.gap_constant,
                        o.denominator_bound,
                        e.rationalized.as_deref().unwrap_or("none")
                    );
                }
                if let Some(c) = &o.sieve_constant {
                    let _ = writeln!(w, "sieve constant: {c}");
                }
            }
            Outcome::Classify(o) => {
                let _ = writeln!(w, "degrees: {} and {}", o.degree_f, o.degree_g);
                match o.degree_dependence {
                    Some((r, s)) => {
                        let _ = writeln!(w, "degree dependence: deg(f)^{r} = deg(g)^{s}");
                    }
                    None => {
                        let _ = writeln!(w, "degree dependence: none");
                    }
                }
                match o.common_iterate {
                    Some((m, n)) => {
                        let _ = writeln!(w, "common iterate: f^{m} = g^{n}");
                    }
                    None => {
                        let _ = writeln!(w, "common iterate: none with m <= {}, n <= {}", o.cap_m, o.cap_n);
                    }
                }
                let _ = writeln!(w, "additive: f {}, g {}", o.additive_f, o.additive_g);
                if let Some(c) = &o.conjugacy_f {
                    let _ = writeln!(w, "f: {c}");
                }
                if let Some(c) = &o.conjugacy_g {
                    let _ = writeln!(w, "g: {c}");
                }
                if let Some(v) = &o.progression {
                    let _ = writeln!(w, "progression: {}", verdict_text(v));
                }
            }
            Outcome::Verify(v) => verify_text(w, v),
        }
        if self.caps_hit {
            let _ = writeln!(
                w,
                "caveat: results are exhaustive only within the caps; nothing is claimed beyond them"
            );
        }
        let _ = writeln!(w, "status: {}", if self.success { "ok" } else { "FAILED" });
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(w, "time: {ms} ms");
        }
        out
    }
}

fn list_text(xs: &[u64]) -> String {
    if xs.is_empty() {
        return "none".into();
    }
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

fn pairs_text(xs: &[(u64, u64)]) -> String {
    if xs.is_empty() {
        return "none".into();
    }
    xs.iter().map(|(m, n)| format!("({m},{n})")).collect::<Vec<_>>().join(" ")
}

fn model_text(w: &mut String, label: &str, m: &ReturnModel) {
    let mut parts = Vec::new();
    if !m.exceptional.is_empty() {
        parts.push(format!("exceptional {{{}}}", list_text(&m.exceptional)));
    }
    for ap in &m.progressions {
        parts.push(format!("{{{} k + {}}}", ap.step, ap.start));
    }
    for ps in &m.p_sets {
        parts.push(format!("{{{} {}^({} k) + {}}}", ps.a, ps.p, ps.r, ps.b));
    }
    let body = if parts.is_empty() { "empty".to_string() } else { parts.join(" u ") };
    let _ = writeln!(
        w,
        "{label} (within {}, heuristic: {} witnesses per progression, {} per p-set): {body}",
        m.cap, m.ap_min_witnesses, m.p_set_min_witnesses
    );
}

fn verdict_text(v: &ApVerdict) -> String {
    match v {
        ApVerdict::Confirmed => "confirmed".into(),
        ApVerdict::RefutedData { n } => format!("refuted by the data at n = {n}"),
        ApVerdict::RefutedIterate => "data hold but f^a != g^a".into(),
    }
}

fn verify_text(w: &mut String, v: &VerifyReport) {
    for c in &v.checks {
        let status = serde_json::to_value(c.status).ok().and_then(|s| s.as_str().map(String::from)).unwrap_or_default();
        let _ = write!(w, "{status} {} [{}] checked {}", c.identity, c.case, c.checked);
        if let Some(n) = &c.note {
            let _ = write!(w, " ({n})");
        }
        let _ = writeln!(w);
        if let Some(ce) = &c.counterexample {
            let _ = writeln!(w, "  at {}: lhs = {}", ce.at, ce.lhs);
            let _ = writeln!(w, "  at {}: rhs = {}", ce.at, ce.rhs);
        }
    }
    let _ = writeln!(w, "passed {}, failed {}, skipped {} (pmax = {})", v.passed, v.failed, v.skipped, v.pmax);
    if let Some(f) = &v.first_failure {
        let _ = writeln!(w, "first failure: {} [{}]", f.identity, f.case);
    }
}

fn rational_decimal(r: &BigRational) -> String {
    let scale = BigInt::from(10u64).pow(6);
    let scaled = (r * BigRational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled < BigInt::from(0);
    let abs = if neg { -scaled } else { scaled };
    let int = &abs / &scale;
    let frac = &abs % &scale;
    format!("{}{int}.{:0>6}", if neg { "-" } else { "" }, frac.to_string())
}

fn verify_options(budgets: Budgets, pmax: u64) -> VerifyOptions {
    VerifyOptions {
        pmax,
        budgets,
        ..VerifyOptions::default()
    }
}

/// Runs the whole identity suite.
pub fn run_verify_all(pmax: u64, budgets: Budgets) -> Result<Report> {
    let v = verify_all(&verify_options(budgets, pmax))?;
    Ok(Report::new(None, "verify-all", budgets, false, Outcome::Verify(v)))
}

fn required<'a, T>(x: &'a Option<T>, key: &str) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| Error::validation(key, "missing"))
}

fn field_char(field: &Field) -> u64 {
    field.p()
}

fn intersect<C: Scalar>(
    s: &Scenario,
    pr: &Problem<C>,
    p: u64,
) -> Result<(IntersectOutcome, bool)> {
    let f = &required(&pr.f, "f")?.poly;
    let g = &required(&pr.g, "g")?.poly;
    let d = map_degree(f, "orbit intersection")?;
    let e = map_degree(g, "orbit intersection")?;
    let (of, og) = rayon::join(
        || OrbitPrefix::compute(f, required(&pr.alpha, "alpha")?, s.cap_m, &s.budgets),
        || OrbitPrefix::compute(g, required(&pr.beta, "beta")?, s.cap_n, &s.budgets),
    );
    let (of, og) = (of?, og?);
    Ok(finish_intersect(s, &of, &og, (d, e), None, None, p))
}

fn finish_intersect<C: RingElem>(
    s: &Scenario,
    of: &OrbitPrefix<C>,
    og: &OrbitPrefix<C>,
    (d, e): (u64, u64),
    sieve: Option<&HeightSieve>,
    note: Option<String>,
    p: u64,
) -> (IntersectOutcome, bool) {
    let total = (of.cap() + 1) * (og.cap() + 1);
    let (rs, pruning) = match sieve {
        Some(sv) => {
            let admit = |m: u64, n: u64| sv.admits(m, n);
            let rs = intersect_prefixes(of, og, Some(&admit));
            let summary = SieveSummary {
                b_f: sv.b_f.clone(),
                b_g: sv.b_g.clone(),
                c: sv.c.to_string(),
                estimate_f: sv.estimate_f.clone(),
                estimate_g: sv.estimate_g.clone(),
                u1: sv.u1.clone(),
                u2: sv.u2.clone(),
                candidates: sv.candidates().len() as u64,
                total,
            };
            (rs, Some(summary))
        }
        None => (intersect_prefixes(of, og, None), None),
    };
    let diagonal = rs.diagonal();
    let cap = s.cap_m.min(s.cap_n);
    let max_point_bytes = of.keys.iter().chain(&og.keys).map(|k| k.len() as u64).max().unwrap_or(0);
    let caps_hit = rs.caps_hit;
    (
        IntersectOutcome {
            cap_m: rs.cap_m,
            cap_n: rs.cap_n,
            diagonal_model: fit_return_model(&diagonal, p, cap),
            diagonal,
            exhaustive_within_caps: rs.exhaustive_within_caps,
            degree_dependence: multiplicative_dependence(d, e),
            pairs: rs.pairs,
            pruning,
            max_point_bytes,
            note,
        },
        caps_hit,
    )
}

fn intersect_base(s: &Scenario, pr: &Problem<RatFunc>, p: u64) -> Result<(IntersectOutcome, bool)> {
    if !s.pruning {
        return intersect(s, pr, p);
    }
    let f = &required(&pr.f, "f")?.poly;
    let g = &required(&pr.g, "g")?.poly;
    let d = map_degree(f, "orbit intersection")?;
    let e = map_degree(g, "orbit intersection")?;
    let (of, og) = rayon::join(
        || OrbitPrefix::compute(f, required(&pr.alpha, "alpha")?, s.cap_m, &s.budgets),
        || OrbitPrefix::compute(g, required(&pr.beta, "beta")?, s.cap_n, &s.budgets),
    );
    let (of, og) = (of?, og?);
    let sieve = HeightSieve::from_prefixes(f, &of, g, &og, s.denominator)?;
    Ok(finish_intersect(s, &of, &og, (d, e), Some(&sieve), None, p))
}

fn synchronized<C: Scalar>(s: &Scenario, pr: &Problem<C>, p: u64) -> Result<SynchronizedOutcome> {
    let f = &required(&pr.f, "f")?.poly;
    let g = &required(&pr.g, "g")?.poly;
    let (r, sv) = (*required(&s.r, "r")?, *required(&s.s, "s")?);
    let hits = synchronized_collisions(
        f,
        required(&pr.alpha, "alpha")?,
        g,
        required(&pr.beta, "beta")?,
        (r, sv),
        (s.a, s.b),
        s.cap_n,
        &s.budgets,
    )?;
    Ok(SynchronizedOutcome {
        r,
        s: sv,
        a: s.a,
        b: s.b,
        cap_n: s.cap_n,
        model: fit_return_model(&hits, p, s.cap_n),
        hits,
    })
}

fn curve_return<C: Scalar>(s: &Scenario, pr: &Problem<C>, p: u64) -> Result<CurveOutcome> {
    let f = &required(&pr.f, "f")?.poly;
    let g = &required(&pr.g, "g")?.poly;
    let curve = required(&pr.curve, "curve")?;
    let hits = curve_return_set(
        f,
        g,
        (required(&pr.alpha, "alpha")?, required(&pr.beta, "beta")?),
        curve,
        s.cap_n,
        &s.budgets,
    )?;
    Ok(CurveOutcome {
        curve: curve.to_string(),
        cap_n: s.cap_n,
        model: fit_return_model(&hits, p, s.cap_n),
        hits,
    })
}

/// Target error `1 / (4 D^2)`: two fractions with denominators at most `D`
/// differ by at least `1 / D^2`, so the interval holds at most one.
fn height_target(denominator: u64) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(4) * BigInt::from(denominator).pow(2))
}

fn height_entry(map: &str, f: &DynPoly<RatFunc>, gamma: &RatFunc, denominator: u64) -> Result<HeightEntry> {
    let degree = map_degree(f, "canonical height")?;
    let estimate = canonical_height(f, gamma, &height_target(denominator))?;
    Ok(HeightEntry {
        map: map.into(),
        point: gamma.to_string(),
        degree,
        gap_constant: height_gap_constant(f)?.to_string(),
        rationalized: rationalize(&estimate, denominator).map(|r| r.to_string()),
        estimate,
    })
}

fn heights(s: &Scenario, pr: &Problem<RatFunc>) -> Result<HeightsOutcome> {
    let f = &required(&pr.f, "f")?.poly;
    let mut entries = vec![height_entry("f", f, required(&pr.alpha, "alpha")?, s.denominator)?];
    let mut constant = None;
    if let (Some(g), Some(beta)) = (&pr.g, &pr.beta) {
        entries.push(height_entry("g", &g.poly, beta, s.denominator)?);
        constant = Some(sieve_constant(&height_gap_constant(f)?, &height_gap_constant(&g.poly)?).to_string());
    }
    Ok(HeightsOutcome {
        denominator_bound: s.denominator,
        entries,
        sieve_constant: constant,
    })
}

fn conjugacy_text(c: &AdditiveConjugacy) -> String {
    match c {
        AdditiveConjugacy::Base { map, additive } => format!("{map} conjugates it to the additive {additive}"),
        AdditiveConjugacy::Extension {
            ring,
            map,
            additive,
            may_not_be_field,
        } => format!(
            "over K[y]/({} ){}, {map} conjugates it to the additive {additive}",
            ring.modulus(),
            if *may_not_be_field { " (not checked to be a field)" } else { "" }
        ),
        AdditiveConjugacy::NotConjugate => "not conjugate to an additive polynomial by a translation".into(),
    }
}

fn classify<C: Scalar>(
    s: &Scenario,
    pr: &Problem<C>,
    conjugacy: impl Fn(&DynPoly<C>) -> Result<Option<String>>,
) -> Result<(ClassifyOutcome, bool)> {
    let f = &required(&pr.f, "f")?.poly;
    let g = &required(&pr.g, "g")?.poly;
    let set = |k: &str| s.entries.iter().any(|(key, _)| key == k);
    let cap_m = if set("capM") { s.cap_m } else { CLASSIFY_CAP };
    let cap_n = if set("capN") { s.cap_n } else { CLASSIFY_CAP };
    let d = map_degree(f, "classification")?;
    let e = map_degree(g, "classification")?;
    let ci = common_iterate(f, g, cap_m, cap_n, s.budgets.degree)?;
    let progression = match (s.a, &pr.alpha, &pr.beta) {
        (a, Some(alpha), Some(beta)) if a > 0 => {
            Some(ap_implies_common_iterate(f, g, a, s.b, alpha, beta, s.cap_n, &s.budgets)?)
        }
        _ => None,
    };
    let dependence = multiplicative_dependence(d, e);
    let caps_hit = (ci.witness.is_none() && dependence.is_some()) || progression.is_some();
    Ok((
        ClassifyOutcome {
            degree_f: d.to_string(),
            degree_g: e.to_string(),
            degree_dependence: dependence,
            cap_m,
            cap_n,
            common_iterate: ci.witness,
            pairs_checked: ci.checked,
            additive_f: f.is_additive(),
            additive_g: g.is_additive(),
            conjugacy_f: conjugacy(f)?,
            conjugacy_g: conjugacy(g)?,
            progression,
        },
        caps_hit,
    ))
}

fn run_problem<C: Scalar>(
    s: &Scenario,
    pr: &Problem<C>,
    p: u64,
    conjugacy: impl Fn(&DynPoly<C>) -> Result<Option<String>>,
) -> Result<(Outcome, bool)> {
    Ok(match s.task {
        Task::Intersect => {
            let (o, hit) = intersect(s, pr, p)?;
            (Outcome::Intersect(o), hit)
        }
        Task::Synchronized => (Outcome::Synchronized(synchronized(s, pr, p)?), true),
        Task::CurveReturn => (Outcome::CurveReturn(curve_return(s, pr, p)?), true),
        Task::Classify => {
            let (o, hit) = classify(s, pr, conjugacy)?;
            (Outcome::Classify(o), hit)
        }
        Task::Heights => return Err(Error::validation("ext", "heights are computed over K only")),
        Task::VerifyExample => unreachable!("handled before dispatch"),
    })
}

fn verify_example(s: &Scenario) -> Result<VerifyReport> {
    let name = required(&s.example, "example")?;
    let opts = VerifyOptions {
        pmax: s.p.map_or(DEFAULT_PMAX, |p| p.max(DEFAULT_PMAX)),
        only_p: s.p,
        bound: s.nmax,
        budgets: s.budgets,
        ..VerifyOptions::default()
    };
    verify(&[name.as_str()], &opts)
}

/// Executes a validated scenario.
pub fn run_scenario(s: &Scenario) -> Result<Report> {
    let task = s.task.name();
    if s.task == Task::VerifyExample {
        let v = verify_example(s)?;
        return Ok(Report::new(Some(s), task, s.budgets, false, Outcome::Verify(v)));
    }
    let (outcome, caps_hit) = match &s.ambient {
        Ambient::Unspecified => return Err(Error::validation("field", format!("required by task {task}"))),
        Ambient::Base(field, pr) => {
            let p = field_char(field);
            let budgets = s.budgets;
            match s.task {
                Task::Intersect if s.pruning => {
                    let (o, hit) = intersect_base(s, pr, p)?;
                    (Outcome::Intersect(o), hit)
                }
                Task::Heights => (Outcome::Heights(heights(s, pr)?), false),
                _ => run_problem(s, pr, p, |f| {
                    Ok(Some(match conjugate_to_additive(f, &budgets) {
                        Ok(c) => conjugacy_text(&c),
                        Err(e) if e.is_budget() => format!("undecided: {e}"),
                        Err(e) => return Err(e),
                    }))
                })?,
            }
        }
        Ambient::Ext(ring, pr) => {
            let p = field_char(ring.field());
            let (mut outcome, hit) = run_problem(s, pr, p, |_| Ok(None))?;
            if let Outcome::Intersect(o) = &mut outcome {
                if s.pruning {
                    o.note = Some("height pruning needs data over K; ran unpruned".into());
                }
            }
            (outcome, hit)
        }
    };
    Ok(Report::new(Some(s), task, s.budgets, caps_hit, outcome))
}

/// Machine-readable form of a failure, for JSON output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorReport {
    pub tool: String,
    pub version: String,
    pub source: Option<String>,
    /// `budget`, `validation` or `error`.
    pub kind: String,
    pub message: String,
    pub field: Option<String>,
    pub position: Option<usize>,
    pub exit_code: i32,
}

impl ErrorReport {
    pub fn new(source: Option<String>, err: &Error) -> Self {
        let (field, position) = match err {
            Error::Validation { field, .. } => (Some(field.clone()), None),
            Error::Syntax { pos, .. } | Error::UndefinedSymbol { pos, .. } | Error::MixedVariables { pos } => {
                (None, Some(*pos))
            }
            _ => (None, None),
        };
        let (kind, exit_code) = if err.is_budget() {
            ("budget", 2)
        } else if err.is_validation() {
            ("validation", 3)
        } else {
            ("error", 1)
        };
        ErrorReport {
            tool: TOOL.into(),
            version: VERSION.into(),
            source,
            kind: kind.into(),
            message: err.to_string(),
            field,
            position,
            exit_code,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("error reports serialize")
    }
}
