use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;
use crate::field::Field;
use crate::funcfield::{FFPoly, RatFunc};

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn poly(field: &Field, terms: &[(u64, RatFunc)]) -> DynPoly<RatFunc> {
    DynPoly::from_terms(field, terms.iter().map(|(e, c)| (big(*e), c.clone())))
}

fn small_rat(field: &Field, coeffs: &[u64]) -> RatFunc {
    RatFunc::from_poly(FFPoly::from_dense(field, coeffs))
}

#[test]
fn iterate_of_additive_map() {
    let f2 = Field::prime(2).unwrap();
    let one = RatFunc::one(&f2);
    let f = poly(&f2, &[(2, one.clone()), (1, one.clone())]);
    let f3 = f.iterate(3, 1 << 10).unwrap();
    let expect = poly(&f2, &[(8, one.clone()), (4, one.clone()), (2, one.clone()), (1, one.clone())]);
    assert_eq!(f3, expect);
    assert_eq!(f.compose(&f, 16).unwrap().to_string(), "x^4 + x");
    assert!(f3.is_additive());
}

#[test]
fn iterate_respects_budget() {
    let f2 = Field::prime(2).unwrap();
    let f = DynPoly::monomial(RatFunc::one(&f2), big(2));
    assert!(f.iterate(10, 1024).is_ok());
    assert!(f.iterate(11, 1024).unwrap_err().is_budget());
    assert!(f.compose(&f, 3).unwrap_err().is_budget());
}

#[test]
fn orbit_of_shifted_square() {
    let f2 = Field::prime(2).unwrap();
    let t = RatFunc::t(&f2);
    let g = poly(&f2, &[(2, RatFunc::one(&f2)), (0, t.mul(&t).add(&t))]);
    let orbit = g.orbit(&RatFunc::zero(&f2), 6).unwrap();
    for (n, z) in orbit.iter().enumerate() {
        let expect = t.pow_big(&(big(1) << n)).add(&t);
        let expect = if n == 0 { RatFunc::zero(&f2) } else { expect };
        assert_eq!(z, &expect, "step {n}");
    }
    assert_eq!(g.to_string(), "x^2 + t^2 + t");
}

#[test]
fn conjugation_orientation() {
    let f2 = Field::prime(2).unwrap();
    let t = RatFunc::t(&f2);
    let f = DynPoly::monomial(RatFunc::one(&f2), big(2));
    let mu = LinearMap::translation(t.clone());
    let g = f.conjugate(&mu).unwrap();
    // mu ∘ f ∘ mu^{-1} = (x - t)^2 + t
    assert_eq!(g, poly(&f2, &[(2, RatFunc::one(&f2)), (0, t.mul(&t).add(&t))]));
    let gamma = t.add(&RatFunc::one(&f2));
    assert_eq!(
        g.evaluate(&mu.apply(&gamma)).unwrap(),
        mu.apply(&f.evaluate(&gamma).unwrap())
    );
}

#[test]
fn common_iterate_examples() {
    let f2 = Field::prime(2).unwrap();
    let one = RatFunc::one(&f2);
    let sq = DynPoly::monomial(one.clone(), big(2));
    let quart = DynPoly::monomial(one.clone(), big(4));
    let res = common_iterate(&sq, &quart, 8, 8, 1 << 12).unwrap();
    assert_eq!(res.witness, Some((2, 1)));
    let t = RatFunc::t(&f2);
    let shifted = poly(&f2, &[(2, one.clone()), (0, t)]);
    let res = common_iterate(&sq, &shifted, 6, 6, 1 << 12).unwrap();
    assert_eq!(res.witness, None);
    assert_eq!(res.checked.len(), 6);
    let cube = DynPoly::monomial(RatFunc::one(&f2), big(3));
    assert_eq!(common_iterate(&sq, &cube, 6, 6, 1 << 12).unwrap().checked, vec![]);
}

#[test]
fn ring_mismatch_is_reported() {
    let f2 = Field::prime(2).unwrap();
    let f3 = Field::prime(3).unwrap();
    let f = DynPoly::monomial(RatFunc::one(&f2), big(2));
    assert!(matches!(
        f.evaluate(&RatFunc::t(&f3)),
        Err(crate::Error::RingMismatch(_))
    ));
}

fn arb_poly(field: Field, max_deg: usize) -> impl Strategy<Value = DynPoly<RatFunc>> {
    let p = field.p();
    prop::collection::vec(prop::collection::vec(0..p, 0..3), 1..=max_deg + 1).prop_map(
        move |cs| {
            let terms: Vec<(u64, RatFunc)> = cs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as u64, small_rat(&field, c)))
                .collect();
            poly(&field, &terms)
        },
    )
}

fn arb_point(field: Field) -> impl Strategy<Value = RatFunc> {
    let p = field.p();
    prop::collection::vec(0..p, 0..4).prop_map(move |c| small_rat(&field, &c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative(
        f in arb_poly(Field::prime(3).unwrap(), 3),
        g in arb_poly(Field::prime(3).unwrap(), 3),
        h in arb_poly(Field::prime(3).unwrap(), 2),
    ) {
        let left = f.compose(&g, 1 << 10).unwrap().compose(&h, 1 << 10).unwrap();
        let right = f.compose(&g.compose(&h, 1 << 10).unwrap(), 1 << 10).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composition_agrees_with_evaluation(
        f in arb_poly(Field::prime(5).unwrap(), 3),
        g in arb_poly(Field::prime(5).unwrap(), 3),
        gamma in arb_point(Field::prime(5).unwrap()),
    ) {
        let fg = f.compose(&g, 1 << 10).unwrap();
        prop_assert_eq!(
            fg.evaluate(&gamma).unwrap(),
            f.evaluate(&g.evaluate(&gamma).unwrap()).unwrap()
        );
    }

    #[test]
    fn orbit_steps_are_evaluations(
        f in arb_poly(Field::prime(2).unwrap(), 3),
        gamma in arb_point(Field::prime(2).unwrap()),
        n in 0u64..5,
    ) {
        let orbit = f.orbit(&gamma, n + 1).unwrap();
        prop_assert_eq!(&orbit[0], &gamma);
        for w in orbit.windows(2) {
            prop_assert_eq!(&w[1], &f.evaluate(&w[0]).unwrap());
        }
        prop_assert_eq!(&orbit[n as usize], &f.orbit_element(&gamma, n).unwrap());
        prop_assert_eq!(
            f.iterate(n, 1 << 12).unwrap().evaluate(&gamma).unwrap(),
            orbit[n as usize].clone()
        );
    }

    #[test]
    fn conjugation_commutes_with_iteration(
        f in arb_poly(Field::prime(3).unwrap(), 3),
        a in 1u64..3,
        b in arb_point(Field::prime(3).unwrap()),
        n in 1u64..3,
    ) {
        let f3 = Field::prime(3).unwrap();
        let mu = LinearMap::new(RatFunc::constant(&f3, a), b).unwrap();
        let lhs = f.conjugate(&mu).unwrap().iterate(n, 1 << 10).unwrap();
        let rhs = f.iterate(n, 1 << 10).unwrap().conjugate(&mu).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_maps_are_additive(
        cs in prop::collection::vec(prop::collection::vec(0u64..3, 0..3), 1..4),
        x in arb_point(Field::prime(3).unwrap()),
        y in arb_point(Field::prime(3).unwrap()),
    ) {
        let f3 = Field::prime(3).unwrap();
        let terms: Vec<(u64, RatFunc)> = cs
            .iter()
            .enumerate()
            .map(|(i, c)| (3u64.pow(i as u32), small_rat(&f3, c)))
            .collect();
        let f = poly(&f3, &terms);
        prop_assert!(f.is_additive());
        prop_assert_eq!(
            f.evaluate(&x.add(&y)).unwrap(),
            f.evaluate(&x).unwrap().add(&f.evaluate(&y).unwrap())
        );
    }
}
