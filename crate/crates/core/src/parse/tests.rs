use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;
use crate::funcfield::KPoly;
use crate::ring::RingElem;

fn gf2() -> Field {
    Field::prime(2).unwrap()
}

fn gf4() -> Field {
    parse_field("GF(4; mod=w^2+w+1)").unwrap()
}

#[test]
fn fields() {
    assert_eq!(parse_field("GF(7)").unwrap(), Field::prime(7).unwrap());
    let f4 = gf4();
    assert_eq!((f4.p(), f4.r()), (2, 2));
    assert_eq!(f4, Field::extension(2, vec![1, 1, 1]).unwrap());
    assert_eq!(parse_field(&f4.to_string()).unwrap(), f4);
    assert!(matches!(parse_field("GF(4)"), Err(Error::InvalidField(_))));
    assert!(matches!(parse_field("GF(6)"), Err(Error::InvalidField(_))));
    assert!(matches!(parse_field("GF(4; mod=w^3+w+1)"), Err(Error::InvalidField(_))));
    assert!(matches!(parse_field("GF(4; mod=w^2+t)"), Err(Error::UndefinedSymbol { symbol: 't', .. })));
    assert_eq!(parse_field("GX(2)").unwrap_err(), Error::syntax(0, "expected GF(q) or GF(q; mod=...)"));
    assert!(matches!(parse_field("GF(4; mod=w^2+$)"), Err(Error::Syntax { pos: 14, .. })));
    let big = (1u64 << 61) - 1;
    assert_eq!(parse_field(&format!("GF({big})")).unwrap().p(), big);
}

#[test]
fn shifted_square_map() {
    let f2 = gf2();
    let g = parse_dyn("x^2 + (t^2+t)", &f2).unwrap();
    let t = RatFunc::t(&f2);
    let expect = DynPoly::from_terms(
        &f2,
        [(BigUint::from(2u8), RatFunc::one(&f2)), (BigUint::from(0u8), t.mul(&t).add(&t))],
    );
    assert_eq!(g, expect);
    assert_eq!(g.to_string(), "x^2 + t^2 + t");
}

#[test]
fn zero_and_literals() {
    let f2 = gf2();
    assert_eq!(parse_expr("0", Context::Base(&f2)).unwrap(), Value::Poly(FFPoly::zero(&f2)));
    let f5 = Field::prime(5).unwrap();
    assert_eq!(parse_rat("7", &f5).unwrap(), RatFunc::constant(&f5, 2));
    assert_eq!(parse_rat("-1", &f5).unwrap(), RatFunc::constant(&f5, 4));
    assert_eq!(parse_rat("123456789012345678901234567890", &f5).unwrap(), RatFunc::zero(&f5));
}

#[test]
fn generator_and_twisted_forms() {
    let f4 = gf4();
    let g = parse_dyn("w*x + x^4", &f4).unwrap();
    let w = RatFunc::constant(&f4, 2);
    let expect = DynPoly::from_terms(
        &f4,
        [(BigUint::from(1u8), w.clone()), (BigUint::from(4u8), RatFunc::one(&f4))],
    );
    assert_eq!(g, expect);
    let tw = parse_twisted("w + T^2", &f4, 4096).unwrap();
    assert_eq!(tw.to_dyn(), g);
    assert_eq!(tw.to_string(), "w + T^2");
    let (poly, twisted) = parse_map_in::<RatFunc>("w*x + x^4", &f4, ParseLimits::default()).unwrap();
    assert_eq!(poly, g);
    assert_eq!(twisted, Some(tw));
}

#[test]
fn rational_functions_print_and_reparse() {
    let f3 = Field::prime(3).unwrap();
    let v = parse_expr("(t^2 + 1)/(2*t + 2) * x + 1/t", Context::Base(&f3)).unwrap();
    let text = print_canonical(&v);
    assert_eq!(parse_expr(&text, Context::Base(&f3)).unwrap(), v);
    let r = parse_expr("t^4/t^2", Context::Base(&f3)).unwrap();
    assert!(matches!(r, Value::Poly(_)));
    assert_eq!(print_canonical(&r), "t^2");
    assert_eq!(
        print_canonical(&parse_expr("t^(2^5)", Context::Base(&f3)).unwrap_or(Value::Poly(FFPoly::zero(&f3)))),
        "0"
    );
}

#[test]
fn large_exponents_stay_sparse() {
    let f2 = gf2();
    let v = parse_expr("t^32 + t", Context::Base(&f2)).unwrap();
    assert_eq!(print_canonical(&v), "t^32 + t");
    let huge = parse_expr("t^340282366920938463463374607431768211456 + 1", Context::Base(&f2)).unwrap();
    assert_eq!(print_canonical(&huge), "t^340282366920938463463374607431768211456 + 1");
    let e = parse_expr("(t+1)^1099511627776", Context::Base(&f2)).unwrap();
    assert_eq!(print_canonical(&e), "t^1099511627776 + 1");
}

#[test]
fn expansion_is_capped() {
    let f3 = Field::prime(3).unwrap();
    let err = parse_expr("(t^2+t+1)^100000", Context::Base(&f3)).unwrap_err();
    assert!(err.is_budget());
    let err = parse_expr("(x+t)^1000000000", Context::Base(&f3)).unwrap_err();
    assert!(err.is_budget());
    let err = parse_expr("T^5000", Context::Base(&f3)).unwrap_err();
    assert!(matches!(err, Error::TauDegreeBudgetExceeded { .. }));
}

#[test]
fn extension_elements() {
    let f2 = gf2();
    let ring = parse_ext_modulus("y^2 + y + t", &f2).unwrap();
    let v = parse_expr("y + t", Context::Ext(&ring)).unwrap();
    assert_eq!(print_canonical(&v), "y + t");
    let y = ring.generator();
    let t = ring.embed(&RatFunc::t(&f2));
    assert_eq!(parse_ext_elem("y^2", &ring).unwrap(), y.plus(&t));
    let f = parse_expr("x^2 + y*x", Context::Ext(&ring)).unwrap();
    assert_eq!(parse_expr(&print_canonical(&f), Context::Ext(&ring)).unwrap(), f);
    let m = parse_ext_modulus("y^3 - y - t", &Field::prime(3).unwrap()).unwrap();
    assert_eq!(m.degree(), 3);
    assert!(parse_ext_modulus("t", &f2).is_err());
    assert!(matches!(parse_ext_modulus("y^2 + x", &f2), Err(Error::UndefinedSymbol { symbol: 'x', pos: 6 })));
    let _: KPoly = m.modulus().clone();
}

#[test]
fn structured_errors() {
    let f2 = gf2();
    let ctx = Context::Base(&f2);
    assert_eq!(parse_expr("x + T", ctx).unwrap_err(), Error::MixedVariables { pos: 4 });
    assert_eq!(parse_expr("T*x", ctx).unwrap_err(), Error::MixedVariables { pos: 2 });
    assert_eq!(parse_expr("t + q", ctx).unwrap_err(), Error::UndefinedSymbol { symbol: 'q', pos: 4 });
    assert_eq!(parse_expr("w", ctx).unwrap_err(), Error::UndefinedSymbol { symbol: 'w', pos: 0 });
    assert_eq!(parse_expr("y", ctx).unwrap_err(), Error::UndefinedSymbol { symbol: 'y', pos: 0 });
    assert_eq!(parse_expr("1/(t+t)", ctx).unwrap_err(), Error::syntax(1, "division by zero"));
    assert!(matches!(parse_expr("x/(x+1)", ctx), Err(Error::Syntax { pos: 1, .. })));
    assert!(matches!(parse_expr("t^", ctx), Err(Error::Syntax { pos: 2, .. })));
    assert!(matches!(parse_scalar_in::<RatFunc>("x", &f2), Err(Error::UndefinedSymbol { symbol: 'x', .. })));
}

#[test]
fn curves() {
    let f2 = gf2();
    let c = parse_curve_in::<RatFunc>("u - v", &f2).unwrap();
    assert_eq!(c, PlaneCurve::diagonal(&f2));
    assert_eq!(parse_curve_in::<RatFunc>(&c.to_string(), &f2).unwrap(), c);
    let c2 = parse_curve_in::<RatFunc>("(u + v)^2 + t*u*v", &f2).unwrap();
    assert_eq!(parse_curve_in::<RatFunc>(&c2.to_string(), &f2).unwrap(), c2);
    assert!(matches!(parse_curve_in::<RatFunc>("u - u", &f2), Err(Error::Validation { .. })));
}

const SHIFTED_SQUARES: &str = "\
field = GF(2)
# ext = y^2+y+t        (optional)
f = x^2 + x
g = x^2 + (t^2+t)
alpha = t
beta = 0
task = intersect
capM = 64
capN = 64
";

#[test]
fn scenario_files() {
    let sc = parse_scenario(SHIFTED_SQUARES).unwrap();
    assert_eq!(sc.task, Task::Intersect);
    assert_eq!((sc.cap_m, sc.cap_n), (64, 64));
    let Ambient::Base(field, pr) = &sc.ambient else {
        panic!("base scenario expected");
    };
    assert_eq!(field.p(), 2);
    assert_eq!(pr.g.as_ref().unwrap().poly.to_string(), "x^2 + t^2 + t");
    assert!(pr.f.as_ref().unwrap().twisted.is_some());
    assert!(pr.g.as_ref().unwrap().twisted.is_none());
    assert_eq!(sc.entries.len(), 8);

    let one_line = "field = GF(4; mod=w^2+w+1); f = x^4; g = T^2 + w; alpha = t; beta = t + w*t; task = intersect";
    let sc = parse_scenario(one_line).unwrap();
    assert_eq!(sc.entries[0].1, "GF(4; mod=w^2+w+1)");

    let ext = "field = GF(3)\next = y^3 - y - t\nf = x^3 - x\ng = x^3 + y\nalpha = y\nbeta = 0\ntask = classify\n";
    let sc = parse_scenario(ext).unwrap();
    assert!(matches!(sc.ambient, Ambient::Ext(..)));

    let verify = "task = verify-example; example = geometric-sum-power; p = 3; nmax = 4";
    let sc = parse_scenario(verify).unwrap();
    assert_eq!((sc.example.as_deref(), sc.p, sc.nmax), (Some("geometric-sum-power"), Some(3), Some(4)));
}

#[test]
fn scenario_errors() {
    let missing_g = SHIFTED_SQUARES.replace("g = x^2 + (t^2+t)\n", "");
    assert_eq!(
        parse_scenario(&missing_g).unwrap_err(),
        Error::validation("g", "required by task intersect")
    );
    let unknown = format!("{SHIFTED_SQUARES}colour = red\n");
    assert!(matches!(parse_scenario(&unknown), Err(Error::Validation { field, .. }) if field == "colour"));
    let dup = format!("{SHIFTED_SQUARES}capN = 3\n");
    assert!(matches!(parse_scenario(&dup), Err(Error::Validation { field, .. }) if field == "capN"));
    let bad_cap = SHIFTED_SQUARES.replace("capM = 64", "capM = lots");
    assert!(matches!(parse_scenario(&bad_cap), Err(Error::Validation { field, .. }) if field == "capM"));
    // the error position is absolute in the file
    let bad_expr = SHIFTED_SQUARES.replace("f = x^2 + x", "f = x^2 + $");
    let at = SHIFTED_SQUARES.find("f = x^2 + x").unwrap() + 10;
    assert!(matches!(parse_scenario(&bad_expr), Err(Error::Syntax { pos, .. }) if pos == at));
    assert!(matches!(parse_scenario("task = intersect\nfield"), Err(Error::Syntax { pos: 17, .. })));
    assert!(matches!(parse_scenario("field = GF(2)"), Err(Error::Validation { field, .. }) if field == "task"));
    assert!(matches!(
        parse_scenario("task = verify-example; example = geometric-sum-power; f = x^2"),
        Err(Error::Validation { field, .. }) if field == "f"
    ));
}

fn arb_field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::prime(2).unwrap()),
        Just(Field::prime(3).unwrap()),
        Just(Field::prime(5).unwrap()),
        Just(Field::extension(2, vec![1, 1, 1]).unwrap()),
        Just(Field::extension(3, vec![2, 2, 1]).unwrap()),
    ]
}

fn arb_poly(field: Field) -> impl Strategy<Value = FFPoly> {
    let q = field.q();
    prop::collection::vec((0u64..40, 0..q), 0..5).prop_map(move |terms| {
        FFPoly::from_terms(&field, terms.into_iter().map(|(e, c)| (BigUint::from(e), c)).collect())
    })
}

fn arb_rat(field: Field) -> impl Strategy<Value = RatFunc> {
    let f2 = field.clone();
    (arb_poly(field.clone()), arb_poly(field)).prop_map(move |(n, d)| {
        if d.is_zero() {
            RatFunc::from_poly(n)
        } else {
            RatFunc::new(n, d).unwrap_or_else(|_| RatFunc::zero(&f2))
        }
    })
}

fn arb_value() -> impl Strategy<Value = (Field, Value)> {
    arb_field().prop_flat_map(|field| {
        let f = field.clone();
        let rats = prop::collection::vec(arb_rat(field.clone()), 1..4);
        (rats, 0u8..4, prop::collection::vec(0u64..300, 4)).prop_map(move |(cs, kind, es)| {
            let v = match kind {
                0 => Value::Rat(cs[0].clone()),
                1 => Value::Dyn(DynPoly::from_terms(
                    &f,
                    cs.iter().zip(&es).map(|(c, e)| (BigUint::from(*e), c.clone())),
                )),
                2 => Value::Twisted(TwistedPoly::new(&f, cs.clone())),
                _ => Value::Poly(cs[0].numerator().clone()),
            };
            // shapes follow the letters used, so constants print as scalars
            let v = match v {
                Value::Dyn(g) if g.degree_u64() == Some(0) => Value::Rat(g.constant_term()),
                Value::Twisted(g) if g.degree().unwrap_or(0) == 0 => Value::Rat(g.coeff(0)),
                other => other,
            };
            let v = match v {
                Value::Rat(r) if r.is_poly() => Value::Poly(r.numerator().clone()),
                other => other,
            };
            (f.clone(), v)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity((field, v) in arb_value()) {
        let text = print_canonical(&v);
        let back = parse_expr(&text, Context::Base(&field)).unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(print_canonical(&back), text);
    }

    #[test]
    fn arbitrary_text_never_panics(s in "[-+*/^() 0-9txyTwuv$]{0,40}") {
        let f4 = Field::extension(2, vec![1, 1, 1]).unwrap();
        let _ = parse_expr(&s, Context::Base(&f4));
        let _ = parse_scenario(&s);
        let _ = parse_field(&s);
    }
}
