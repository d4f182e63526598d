//! The built-in identity suite.
//!
//! Each identity is checked instance by instance with exact equality; the
//! first mismatch of a check is reported with both sides. Checks that take
//! explicit maps are public so that altered inputs can be run through them.

use std::fmt::Display;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::dynpoly::{solve_affine_conjugacy, AffineShift, DynPoly, LinearMap};
use crate::error::{Error, Result};
use crate::field::{binom_mod_u64, Field};
use crate::funcfield::{ExtRing, FFPoly, KPoly, RatFunc};
use crate::ring::RingElem;
use crate::twisted::TwistedPoly;

pub const DEFAULT_SEED: u64 = 0x005e_ed0f_0b17;
pub const DEFAULT_PMAX: u64 = 5;

/// Identity names in suite order.
pub const IDENTITIES: [&str; 10] = [
    "shifted-square-orbit",
    "binomial-iterate",
    "linear-orbits",
    "additive-plus-identity",
    "frobenius-twist",
    "general-construction",
    "geometric-sum-power",
    "artin-schreier",
    "fixed-point-non-sharing",
    "affine-conjugacy",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// The first instance where the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub at: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub identity: String,
    pub case: String,
    pub status: Status,
    /// Instances compared.
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
    /// Why the check was skipped, or the error that stopped it.
    pub note: Option<String>,
}

impl CheckResult {
    fn skip(identity: &str, case: String, note: String) -> Self {
        CheckResult {
            identity: identity.into(),
            case,
            status: Status::Skip,
            checked: 0,
            counterexample: None,
            note: Some(note),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub pmax: u64,
    pub bound: Option<u64>,
    pub seed: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub first_failure: Option<CheckResult>,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    fn new(opts: &VerifyOptions, checks: Vec<CheckResult>) -> Self {
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count() as u64;
        VerifyReport {
            pmax: opts.pmax,
            bound: opts.bound,
            seed: opts.seed,
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skip),
            first_failure: checks.iter().find(|c| c.status == Status::Fail).cloned(),
            checks,
        }
    }
}

/// `pmax` drops cases in larger characteristic; `only_p` keeps a single
/// characteristic; `bound` replaces the main range of every identity.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub pmax: u64,
    pub only_p: Option<u64>,
    pub bound: Option<u64>,
    pub seed: u64,
    pub budgets: Budgets,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            pmax: DEFAULT_PMAX,
            only_p: None,
            bound: None,
            seed: DEFAULT_SEED,
            budgets: Budgets::default(),
        }
    }
}

impl VerifyOptions {
    fn range(&self, default: u64) -> u64 {
        self.bound.unwrap_or(default)
    }

    fn excluded(&self, p: u64) -> Option<String> {
        if let Some(q) = self.only_p {
            if q != p {
                return Some(format!("only p = {q} requested"));
            }
        }
        (p > self.pmax).then(|| format!("p = {p} exceeds pmax = {}", self.pmax))
    }
}

/// Accumulates comparisons for one check, keeping the first mismatch.
struct Tally {
    identity: &'static str,
    case: String,
    checked: u64,
    failure: Option<Counterexample>,
}

impl Tally {
    fn new(identity: &'static str, case: String) -> Self {
        Tally {
            identity,
            case,
            checked: 0,
            failure: None,
        }
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }

    fn eq<T: PartialEq + Display>(&mut self, at: impl FnOnce() -> String, lhs: &T, rhs: &T) -> bool {
        if self.failed() {
            return false;
        }
        self.checked += 1;
        if lhs != rhs {
            self.failure = Some(Counterexample {
                at: at(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
            return false;
        }
        true
    }

    fn holds(&mut self, at: impl FnOnce() -> String, ok: bool, lhs: impl Display, rhs: impl Display) -> bool {
        if self.failed() {
            return false;
        }
        self.checked += 1;
        if !ok {
            self.failure = Some(Counterexample {
                at: at(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        ok
    }

    fn finish(self, outcome: Result<()>) -> CheckResult {
        let (status, note) = match (&self.failure, outcome) {
            (_, Err(e)) => (Status::Fail, Some(e.to_string())),
            (Some(_), Ok(())) => (Status::Fail, None),
            (None, Ok(())) => (Status::Pass, None),
        };
        CheckResult {
            identity: self.identity.into(),
            case: self.case,
            status,
            checked: self.checked,
            counterexample: self.failure,
            note,
        }
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn t_pow(field: &Field, e: &BigUint) -> RatFunc {
    RatFunc::from_poly(FFPoly::monomial(field, 1, e.clone()))
}

fn sum_of_powers(field: &Field, exps: impl IntoIterator<Item = BigUint>) -> RatFunc {
    exps.into_iter().fold(RatFunc::zero(field), |acc, e| acc.add(&t_pow(field, &e)))
}

fn prime(p: u64) -> Field {
    Field::prime(p).expect("small prime")
}

/// `F_{p^2}` with a generator `w` of `F_{p^2} / F_p`.
fn quadratic(p: u64) -> Field {
    let modulus = match p {
        2 => vec![1, 1, 1],
        3 => vec![2, 2, 1],
        _ => panic!("no quadratic modulus tabulated for p = {p}"),
    };
    Field::extension(p, modulus).expect("irreducible modulus")
}

/// The generator `w` of `quadratic(p)`.
fn generator(field: &Field) -> RatFunc {
    RatFunc::constant(field, field.p())
}

/// `g^m(0) = t^(2^m) + t` for `1 <= m <= m_max`, for `g` over `F_2(t)`.
pub fn shifted_square_orbit(g: &DynPoly<RatFunc>, m_max: u64) -> CheckResult {
    let field = g.ring().clone();
    let mut tally = Tally::new("shifted-square-orbit", format!("m <= {m_max}"));
    let outcome = (|| {
        let orbit = g.orbit(&RatFunc::zero(&field), m_max)?;
        let t = RatFunc::t(&field);
        for m in 1..=m_max {
            let rhs = t_pow(&field, &(big(1) << m)).add(&t);
            if !tally.eq(|| format!("m = {m}"), &orbit[m as usize], &rhs) {
                break;
            }
        }
        Ok(())
    })();
    tally.finish(outcome)
}

/// `f^(2^k)(t) = t^(2^(2^k)) + t` for `k <= k_max`, and
/// `f^m = sum_i C(m, i) x^(2^i)` as twisted polynomials for `m <= 2^k_max`.
pub fn binomial_iterate(f: &DynPoly<RatFunc>, k_max: u64, budgets: &Budgets) -> CheckResult {
    let field = f.ring().clone();
    let mut tally = Tally::new("binomial-iterate", format!("k <= {k_max}"));
    let outcome = (|| {
        let t = RatFunc::t(&field);
        let top = 1u64 << k_max;
        let orbit = f.orbit(&t, top)?;
        for k in 0..=k_max {
            let rhs = t_pow(&field, &(big(1) << (1u64 << k))).add(&t);
            if !tally.eq(|| format!("k = {k}"), &orbit[1 << k], &rhs) {
                return Ok(());
            }
        }
        let tw = TwistedPoly::from_dyn(f)?;
        let one = RatFunc::one(&field);
        for m in 1..=top {
            let lhs = tw.pow(&big(m), budgets.tau)?;
            let rhs = TwistedPoly::new(
                &field,
                (0..=m).map(|i| RatFunc::constant(&field, binom_mod_u64(m, i, 2)).mul(&one)).collect(),
            );
            if !tally.eq(|| format!("m = {m} (iterate)"), &lhs, &rhs) {
                break;
            }
        }
        Ok(())
    })();
    tally.finish(outcome)
}

/// For `f = t x + delta`, `eps = delta / (t - 1)`, `g = (x + eps)^r - eps`:
/// `f^n(1 - eps) = t^n - eps` and `g^n(t - eps) = t^(r^n) - eps`.
pub fn linear_orbits(field: &Field, delta: &RatFunc, r: u64, n_max: u64) -> CheckResult {
    let mut tally = Tally::new("linear-orbits", format!("p = {}, r = {r}, n <= {n_max}", field.p()));
    let outcome = (|| {
        let t = RatFunc::t(field);
        let one = RatFunc::one(field);
        let f = DynPoly::from_terms(field, [(big(1), t.clone()), (big(0), delta.clone())]);
        let eps = delta.div(&t.sub(&one))?;
        let power = DynPoly::monomial(one.clone(), big(r));
        let g = power.conjugate(&LinearMap::translation(eps.neg()))?;
        let of = f.orbit(&one.sub(&eps), n_max)?;
        let og = g.orbit(&t.sub(&eps), n_max)?;
        for n in 0..=n_max {
            let rf = t.pow_u64(n).sub(&eps);
            let rg = t_pow(field, &big(r).pow(n as u32)).sub(&eps);
            if !tally.eq(|| format!("f^{n}"), &of[n as usize], &rf) || !tally.eq(|| format!("g^{n}"), &og[n as usize], &rg) {
                break;
            }
        }
        Ok(())
    })();
    tally.finish(outcome)
}

/// A random additive polynomial of `T`-degree `1..=max_deg` with
/// coefficients in `F_p`.
pub fn random_additive<R: Rng>(field: &Field, max_deg: usize, rng: &mut R) -> TwistedPoly<RatFunc> {
    let deg = rng.gen_range(1..=max_deg);
    let mut coeffs: Vec<RatFunc> = (0..deg).map(|_| RatFunc::constant(field, rng.gen_range(0..field.p()))).collect();
    coeffs.push(RatFunc::constant(field, rng.gen_range(1..field.p())));
    TwistedPoly::new(field, coeffs)
}

/// For additive `f` and `g = f + x + f(t)`: the orbit `g^m(0)`, the twisted
/// power `(1 + f)^m` at `t` minus `t`, and `sum_{i>=1} C(m, i) f^i(t)` agree
/// for `m <= p^k_max`, and `g^(p^k)(0) = f^(p^k)(t)` for `k <= k_max`.
pub fn additive_plus_identity(f: &TwistedPoly<RatFunc>, k_max: u64, budgets: &Budgets) -> CheckResult {
    let field = f.ring().clone();
    let p = field.p();
    let mut tally = Tally::new("additive-plus-identity", format!("p = {p}, f = {f}, k <= {k_max}"));
    let outcome = (|| {
        let t = RatFunc::t(&field);
        let fd = f.to_dyn();
        let g = fd.add(&DynPoly::x(&field)).add(&DynPoly::constant(f.eval(&t)));
        let g_tilde = f.add(&TwistedPoly::identity(&field));
        let m_max = p.pow(k_max as u32);
        let orbit = g.orbit(&RatFunc::zero(&field), m_max)?;
        let mut f_i = TwistedPoly::identity(&field);
        let mut f_at_t = Vec::with_capacity(m_max as usize + 1);
        f_at_t.push(t.clone());
        for _ in 1..=m_max {
            f_i = f_i.mul(f);
            f_at_t.push(f_i.eval(&t));
        }
        for m in 1..=m_max {
            let binomial = (1..=m).fold(RatFunc::zero(&field), |acc, i| {
                let c = binom_mod_u64(m, i, p);
                if c == 0 {
                    acc
                } else {
                    acc.add(&f_at_t[i as usize].mul(&RatFunc::constant(&field, c)))
                }
            });
            let twisted = g_tilde.pow(&big(m), budgets.tau)?.eval(&t).sub(&t);
            if !tally.eq(|| format!("m = {m} (orbit vs binomial sum)"), &orbit[m as usize], &binomial)
                || !tally.eq(|| format!("m = {m} (twisted power vs binomial sum)"), &twisted, &binomial)
            {
                return Ok(());
            }
        }
        for k in 0..=k_max {
            let n = p.pow(k as u32);
            let rhs = f.pow(&big(n), budgets.tau)?.eval(&t);
            if !tally.eq(|| format!("k = {k}"), &orbit[n as usize], &rhs) {
                break;
            }
        }
        Ok(())
    })();
    tally.finish(outcome)
}

/// With `g~ = lambda + T^r` over `F_{p^r}(t)`, `f = x^p` and
/// `g = tau_{-lambda t} g~ tau_{lambda t}`: the twisted powers of `g~` match
/// the binomial expansion for `m <= m_max`, and
/// `g^(p^(r k))((1 - lambda) t) = t^(p^(r p^(r k))) = f^(r p^(r k))(t)` for
/// `k <= k_max`.
pub fn frobenius_twist(field: &Field, lambda: &RatFunc, m_max: u64, k_max: u64, budgets: &Budgets) -> CheckResult {
    let p = field.p();
    let r = field.r() as u64;
    let mut tally = Tally::new("frobenius-twist", format!("p = {p}, r = {r}, m <= {m_max}, k <= {k_max}"));
    let outcome = (|| {
        let one = RatFunc::one(field);
        let t = RatFunc::t(field);
        let g_tilde = TwistedPoly::new(field, vec![lambda.clone()]).add(&TwistedPoly::term(one.clone(), r as usize));
        for m in 1..=m_max {
            let lhs = g_tilde.pow(&big(m), budgets.tau)?;
            let mut coeffs = vec![RatFunc::zero(field); (r * m) as usize + 1];
            for i in 0..=m {
                let c = binom_mod_u64(m, i, p);
                coeffs[(r * (m - i)) as usize] = lambda.pow_u64(i).mul(&RatFunc::constant(field, c));
            }
            let rhs = TwistedPoly::new(field, coeffs);
            if !tally.eq(|| format!("m = {m}"), &lhs, &rhs) {
                return Ok(());
            }
        }
        let g = g_tilde.to_dyn().conjugate(&LinearMap::translation(lambda.mul(&t).neg()))?;
        let f = DynPoly::monomial(one.clone(), big(p));
        let start = one.sub(lambda).mul(&t);
        for k in 0..=k_max {
            let n = p.pow((r * k) as u32);
            let lhs = g.orbit_element(&start, n)?;
            let mid = t_pow(field, &big(p).pow((r * n) as u32));
            let rhs = f.orbit_element(&t, r * n)?;
            if !tally.eq(|| format!("k = {k} (orbit of g)"), &lhs, &mid) || !tally.eq(|| format!("k = {k} (orbit of f)"), &rhs, &mid) {
                break;
            }
        }
        Ok(())
    })();
    tally.finish(outcome)
}

/// `g = tau_delta (f^m + h) tau_{-delta}` satisfies
/// `g^(p^k)(alpha + delta) = f^(m p^k)(alpha) + h^(p^k)(alpha) + delta`
/// for `k <= k_max`; the last two terms cancel exactly when
/// `h^(p^k)(alpha) = -delta`, which is also checked.
pub fn general_construction(
    f: &TwistedPoly<RatFunc>,
    h: &TwistedPoly<RatFunc>,
    m: u64,
    (alpha, delta): (&RatFunc, &RatFunc),
    k_max: u64,
    budgets: &Budgets,
) -> CheckResult {
    let field = f.ring().clone();
    let p = field.p();
    let mut tally = Tally::new(
        "general-construction",
        format!("{}, f = {f}, h = {h}, m = {m}, alpha = {alpha}, delta = {delta}, k <= {k_max}", field),
    );
    let outcome = (|| {
        let fm = f.pow(&big(m), budgets.tau)?;
        let inner = fm.add(h).to_dyn();
        let g = inner.conjugate(&LinearMap::translation(delta.clone()))?;
        let start = alpha.add(delta);
        let mut point = start.clone();
        let mut done = 0u64;
        for k in 0..=k_max {
            let n = p.pow(k as u32);
            point = g.orbit_element(&point, n - done)?;
            done = n;
            let f_part = f.pow(&big(m * n), budgets.tau)?.eval(alpha);
            let h_part = h.pow(&big(n), budgets.tau)?.eval(alpha);
            let rhs = f_part.add(&h_part).add(delta);
            if !tally.eq(|| format!("k = {k}"), &point, &rhs) {
                return Ok(());
            }
            let cancels = h_part.add(delta).is_zero();
            let meets = point == f_part;
            if !tally.holds(
                || format!("k = {k} (orbits meet iff h^(p^k)(alpha) + delta = 0)"),
                cancels == meets,
                format!("meets = {meets}"),
                format!("cancels = {cancels}"),
            ) {
                return Ok(());
            }
        }
        Ok(())
    })();
    tally.finish(outcome)
}

/// `(1 + t + ... + t^(p-1))^((p^n - 1)/(p - 1)) = 1 + t + ... + t^(p^n - 1)`
/// for `1 <= n <= n_max`, with the power taken by plain squaring.
pub fn geometric_sum_power(field: &Field, n_max: u64) -> CheckResult {
    let p = field.p();
    let mut tally = Tally::new("geometric-sum-power", format!("p = {p}, n <= {n_max}"));
    let base = FFPoly::from_dense(field, &vec![1; p as usize]);
    for n in 1..=n_max {
        let e = (p.pow(n as u32) - 1) / (p - 1);
        let lhs = base.pow_by_squaring(&big(e));
        let rhs = FFPoly::from_dense(field, &vec![1; p.pow(n as u32) as usize]);
        if !tally.eq(|| format!("n = {n}"), &lhs, &rhs) {
            break;
        }
    }
    tally.finish(Ok(()))
}

/// Over `K[y]/(y^p - y - t)` with `f = x^(p^(p-1)) + ... + x^p + x` and
/// `delta = y`: `f^N = sum_{i < p^n} x^(p^i)` for `N = (p^n - 1)/(p - 1)`,
/// `g_1 = tau_delta (x^p + t) tau_{-delta} = x^p`, and
/// `f_1^N(t + delta) = g_1^(p^n)(delta) = sum_{i < p^n} t^(p^i) + delta`
/// for `f_1 = tau_delta f tau_{-delta}`, `n <= n_max`. For odd `p`, `f^r` is
/// not `x^(p^k) + c x` for `r <= 3`: its `x` coefficient is 1 and
/// `f^r(1) = 0`, while `x^(p^k) + x` sends 1 to 2.
pub fn artin_schreier(p: u64, n_max: u64, budgets: &Budgets) -> CheckResult {
    let field = prime(p);
    let mut tally = Tally::new("artin-schreier", format!("p = {p}, n <= {n_max}"));
    let outcome = (|| {
        let one = RatFunc::one(&field);
        let t = RatFunc::t(&field);
        let f = TwistedPoly::new(&field, vec![one.clone(); p as usize - 1].into_iter().chain([one.clone()]).collect());
        for n in 1..=n_max {
            let big_n = (p.pow(n as u32) - 1) / (p - 1);
            let lhs = f.pow(&big(big_n), budgets.tau)?;
            let rhs = TwistedPoly::new(&field, vec![one.clone(); p.pow(n as u32) as usize]);
            if !tally.eq(|| format!("n = {n} (twisted power)"), &lhs, &rhs) {
                return Ok(());
            }
        }
        let mut m = vec![RatFunc::zero(&field); p as usize + 1];
        m[0] = t.neg();
        m[1] = one.neg();
        m[p as usize] = one.clone();
        let ring = ExtRing::new(KPoly::new(&field, m))?;
        let y = ring.generator();
        let shift = LinearMap::translation(y.clone());
        let embed = |g: &DynPoly<RatFunc>| g.map_coeffs(&ring, |c| ring.embed(c));
        let f1 = embed(&f.to_dyn()).conjugate(&shift)?;
        let xp = DynPoly::monomial(one.clone(), big(p));
        let g0 = xp.add(&DynPoly::constant(t.clone()));
        let g1 = embed(&g0).conjugate(&shift)?;
        if !tally.eq(|| "g_1".into(), &g1, &embed(&xp)) {
            return Ok(());
        }
        let start = ring.embed(&t).plus(&y);
        let mut a = start.clone();
        let mut b = y.clone();
        let (mut done_a, mut done_b) = (0u64, 0u64);
        for n in 1..=n_max {
            let big_n = (p.pow(n as u32) - 1) / (p - 1);
            let pn = p.pow(n as u32);
            a = f1.orbit_element(&a, big_n - done_a)?;
            b = g1.orbit_element(&b, pn - done_b)?;
            done_a = big_n;
            done_b = pn;
            let closed = ring
                .embed(&sum_of_powers(&field, (0..pn).map(|i| big(p).pow(i as u32))))
                .plus(&y);
            if !tally.eq(|| format!("n = {n} (orbit of f_1)"), &a, &closed) || !tally.eq(|| format!("n = {n} (orbit of g_1)"), &b, &closed) {
                return Ok(());
            }
        }
        if p % 2 == 1 {
            let fd = f.to_dyn();
            for r in 1..=3u64 {
                let fr = fd.iterate(r, budgets.degree)?;
                let c = fr.coeff(&big(1));
                let at_one = fr.evaluate(&one)?;
                let two = RatFunc::constant(&field, 2);
                if !tally.eq(|| format!("r = {r} (x coefficient of f^r)"), &c, &one)
                    || !tally.eq(|| format!("r = {r} (f^r(1))"), &at_one, &RatFunc::zero(&field))
                    || !tally.holds(|| format!("r = {r} (h(1) = 1 + c)"), one.add(&c) != at_one, one.add(&c), &at_one)
                    || !tally.holds(|| format!("r = {r} (h(1) = 2)"), one.add(&c) == two, one.add(&c), &two)
                {
                    return Ok(());
                }
            }
        }
        Ok(())
    })();
    tally.finish(outcome)
}

/// With `g = tau_{-lambda t} (lambda x + x^(p^r)) tau_{lambda t}` and
/// `f = x^p`: `g^m(-lambda t) = -lambda t` while `f^m(-lambda t) != -lambda t`
/// for `1 <= m <= m_max`.
pub fn fixed_point_non_sharing(field: &Field, lambda: &RatFunc, m_max: u64) -> CheckResult {
    let p = field.p();
    let r = field.r() as u64;
    let mut tally = Tally::new("fixed-point-non-sharing", format!("p = {p}, r = {r}, m <= {m_max}"));
    let outcome = (|| {
        let one = RatFunc::one(field);
        let t = RatFunc::t(field);
        let g_tilde = DynPoly::from_terms(field, [(big(1), lambda.clone()), (big(p).pow(r as u32), one.clone())]);
        let g = g_tilde.conjugate(&LinearMap::translation(lambda.mul(&t).neg()))?;
        let f = DynPoly::monomial(one, big(p));
        let fixed = lambda.mul(&t).neg();
        let og = g.orbit(&fixed, m_max)?;
        let of = f.orbit(&fixed, m_max)?;
        for m in 1..=m_max as usize {
            if !tally.eq(|| format!("m = {m} (g)"), &og[m], &fixed)
                || !tally.holds(|| format!("m = {m} (f moves it)"), of[m] != fixed, &of[m], &fixed)
            {
                break;
            }
        }
        Ok(())
    })();
    tally.finish(outcome)
}

/// `f(delta) - delta = gamma` yields `tau_{-delta} f tau_delta = f + gamma`.
pub fn affine_conjugacy(f: &DynPoly<RatFunc>, gamma: &RatFunc, budgets: &Budgets) -> CheckResult {
    let field = f.ring().clone();
    let mut tally = Tally::new("affine-conjugacy", format!("{field}, f = {f}, gamma = {gamma}"));
    let outcome = (|| {
        let target = f.add(&DynPoly::constant(gamma.clone()));
        match solve_affine_conjugacy(f, gamma, budgets)? {
            AffineShift::Base(delta) => {
                let lhs = f.conjugate(&LinearMap::translation(delta.neg()))?;
                tally.eq(|| format!("delta = {delta}"), &lhs, &target);
            }
            AffineShift::Extension { ring, delta } => {
                let fe = f.map_coeffs(&ring, |c| ring.embed(c));
                let lhs = fe.conjugate(&LinearMap::translation(delta.negate()))?;
                let te = target.map_coeffs(&ring, |c| ring.embed(c));
                tally.eq(|| format!("delta = {delta} in {ring}"), &lhs, &te);
            }
        }
        Ok(())
    })();
    tally.finish(outcome)
}

fn random_point<R: Rng>(field: &Field, rng: &mut R) -> RatFunc {
    let coeffs: Vec<u64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..field.p())).collect();
    RatFunc::from_poly(FFPoly::from_dense(field, &coeffs))
}

fn run_identity(name: &str, opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<Vec<CheckResult>> {
    let b = &opts.budgets;
    let mut out = Vec::new();
    let primes = [2u64, 3, 5];
    let with_p = |p: u64, out: &mut Vec<CheckResult>, case: String, run: &mut dyn FnMut() -> CheckResult| match opts.excluded(p) {
        Some(why) => out.push(CheckResult::skip(name, case, why)),
        None => out.push(run()),
    };
    match name {
        "shifted-square-orbit" => {
            let f2 = prime(2);
            let t = RatFunc::t(&f2);
            let g = DynPoly::from_terms(&f2, [(big(2), RatFunc::one(&f2)), (big(0), t.mul(&t).add(&t))]);
            let m = opts.range(12);
            with_p(2, &mut out, format!("m <= {m}"), &mut || shifted_square_orbit(&g, m));
        }
        "binomial-iterate" => {
            let f2 = prime(2);
            let one = RatFunc::one(&f2);
            let f = DynPoly::from_terms(&f2, [(big(2), one.clone()), (big(1), one)]);
            let k = opts.range(4);
            with_p(2, &mut out, format!("k <= {k}"), &mut || binomial_iterate(&f, k, b));
        }
        "linear-orbits" => {
            for p in primes {
                let field = prime(p);
                let t = RatFunc::t(&field);
                let delta = t.mul(&t).add(&RatFunc::one(&field));
                let n = opts.range(10);
                with_p(p, &mut out, format!("p = {p}, n <= {n}"), &mut || linear_orbits(&field, &delta, 2, n));
                with_p(p, &mut out, format!("p = {p}, n <= {n}"), &mut || linear_orbits(&field, &delta, 3, n));
            }
        }
        "additive-plus-identity" => {
            for p in primes {
                let field = prime(p);
                for _ in 0..3 {
                    let f = random_additive(&field, 3, rng);
                    let k = opts.range(3);
                    with_p(p, &mut out, format!("p = {p}, k <= {k}"), &mut || additive_plus_identity(&f, k, b));
                }
            }
        }
        "frobenius-twist" => {
            for p in [2u64, 3] {
                let field = quadratic(p);
                let lambda = generator(&field);
                let k = opts.range(1);
                with_p(p, &mut out, format!("p = {p}, r = 2, k <= {k}"), &mut || {
                    frobenius_twist(&field, &lambda, 10, k, b)
                });
            }
        }
        "general-construction" => {
            let k = opts.range(3);
            for p in primes {
                let field = prime(p);
                let f = random_additive(&field, 2, rng);
                let t = RatFunc::t(&field);
                let h = TwistedPoly::identity(&field);
                with_p(p, &mut out, format!("p = {p}, h = x"), &mut || {
                    general_construction(&f, &h, 1, (&t, &t.neg()), k, b)
                });
            }
            for p in [2u64, 3] {
                let field = quadratic(p);
                let lambda = generator(&field);
                let t = RatFunc::t(&field);
                let f = TwistedPoly::term(RatFunc::one(&field), 1);
                let h = TwistedPoly::new(&field, vec![lambda.clone()]);
                with_p(p, &mut out, format!("p = {p}, h = lambda x"), &mut || {
                    general_construction(&f, &h, 2, (&t, &lambda.mul(&t).neg()), k, b)
                });
            }
        }
        "geometric-sum-power" => {
            for p in primes {
                let n = opts.range(4);
                with_p(p, &mut out, format!("p = {p}, n <= {n}"), &mut || geometric_sum_power(&prime(p), n));
            }
        }
        "artin-schreier" => {
            for p in [2u64, 3] {
                let n = opts.range(3);
                with_p(p, &mut out, format!("p = {p}, n <= {n}"), &mut || artin_schreier(p, n, b));
            }
        }
        "fixed-point-non-sharing" => {
            for p in [2u64, 3] {
                let field = quadratic(p);
                let lambda = generator(&field);
                let m = opts.range(8);
                with_p(p, &mut out, format!("p = {p}, m <= {m}"), &mut || fixed_point_non_sharing(&field, &lambda, m));
            }
        }
        "affine-conjugacy" => {
            let allowed: Vec<u64> = primes.into_iter().filter(|&p| opts.excluded(p).is_none()).collect();
            if allowed.is_empty() {
                out.push(CheckResult::skip(name, "all".into(), format!("no p <= pmax = {}", opts.pmax)));
            }
            let count = opts.range(5);
            for _ in 0..if allowed.is_empty() { 0 } else { count } {
                let p = allowed[rng.gen_range(0..allowed.len())];
                let field = prime(p);
                let deg = rng.gen_range(1..=2usize);
                let mut coeffs: Vec<RatFunc> = (0..deg).map(|_| random_point(&field, rng)).collect();
                coeffs.push(RatFunc::one(&field));
                let f = TwistedPoly::new(&field, coeffs).to_dyn();
                let mut gamma = random_point(&field, rng);
                while gamma.is_zero() {
                    gamma = random_point(&field, rng);
                }
                out.push(affine_conjugacy(&f, &gamma, b));
            }
        }
        other => {
            return Err(Error::validation(
                "example",
                format!("unknown identity '{other}', expected one of {}", IDENTITIES.join(", ")),
            ))
        }
    }
    Ok(out)
}

/// Runs the named identities, or all of them for an empty list.
pub fn verify(names: &[&str], opts: &VerifyOptions) -> Result<VerifyReport> {
    let selected: Vec<&str> = if names.is_empty() { IDENTITIES.to_vec() } else { names.to_vec() };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();
    for name in selected {
        checks.extend(run_identity(name, opts, &mut rng)?);
    }
    Ok(VerifyReport::new(opts, checks))
}

/// The whole suite.
pub fn verify_all(opts: &VerifyOptions) -> Result<VerifyReport> {
    verify(&[], opts)
}
