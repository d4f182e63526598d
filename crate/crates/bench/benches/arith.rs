use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigUint;
use orbitp::dynpoly::DynPoly;
use orbitp::orbits::OrbitPrefix;
use orbitp::parse::{parse_dyn, parse_rat, parse_scenario};
use orbitp::{Budgets, FFPoly, Field, RatFunc, TwistedPoly};

const SCENARIO: &str = "field = GF(2)\nf = x^2 + x\ng = x^2 + (t^2+t)\nalpha = t\nbeta = 0\ntask = intersect\n";

fn field_arith(c: &mut Criterion) {
    let f5 = Field::prime(5).unwrap();
    let f4 = Field::extension(2, vec![1, 1, 1]).unwrap();
    let a = parse_rat("(t^7 + 3*t + 1)/(t^3 + 2)", &f5).unwrap();
    let b = parse_rat("(t^5 + t^2 + 4)/(t^4 + t + 1)", &f5).unwrap();
    c.bench_function("ratfunc mul+add over GF(5)", |bn| bn.iter(|| black_box(&a).mul(black_box(&b)).add(&a)));
    c.bench_function("ratfunc inverse over GF(5)", |bn| bn.iter(|| black_box(&b).inv().unwrap()));
    let w = parse_rat("w*t^3 + t + w + 1", &f4).unwrap();
    c.bench_function("ratfunc square over GF(4)", |bn| bn.iter(|| black_box(&w).mul(&w)));
}

fn powers(c: &mut Criterion) {
    let f3 = Field::prime(3).unwrap();
    let base = FFPoly::from_dense(&f3, &[1, 1, 1]);
    let e = BigUint::from(40u32);
    c.bench_function("geometric sum to the 40th over GF(3)", |bn| {
        bn.iter(|| black_box(&base).pow_by_squaring(black_box(&e)))
    });
    let sparse = parse_rat("t^3 + t + 1", &f3).unwrap();
    let huge = BigUint::from(3u32).pow(30);
    c.bench_function("sparse frobenius power 3^30", |bn| bn.iter(|| black_box(&sparse).pow_big(black_box(&huge))));
}

fn twisted(c: &mut Criterion) {
    let f2 = Field::prime(2).unwrap();
    let one = RatFunc::one(&f2);
    let f = TwistedPoly::new(&f2, vec![one.clone(), one]);
    let n = BigUint::from(255u32);
    c.bench_function("twisted (1 + T)^255 over GF(2)", |bn| bn.iter(|| black_box(&f).pow(black_box(&n), 4096).unwrap()));
}

fn orbits(c: &mut Criterion) {
    let f2 = Field::prime(2).unwrap();
    let g: DynPoly<RatFunc> = parse_dyn("x^2 + (t^2+t)", &f2).unwrap();
    let budgets = Budgets::default();
    let zero = RatFunc::zero(&f2);
    c.bench_function("orbit prefix of length 32", |bn| {
        bn.iter(|| OrbitPrefix::compute(black_box(&g), &zero, 32, &budgets).unwrap())
    });
    c.bench_function("parse scenario", |bn| bn.iter(|| parse_scenario(black_box(SCENARIO)).unwrap()));
}

criterion_group!(benches, field_arith, powers, twisted, orbits);
criterion_main!(benches);
