//! Dense coefficient-vector kernels over a finite field (low to high, trimmed).

use crate::field::FieldSpec;

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn mul(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    let p = f.p();
    let bound = ((p - 1) as u128).pow(2) * a.len().min(b.len()) as u128;
    if f.r() == 1 && bound <= u64::MAX as u128 {
        // no partial sum can overflow, so reduce once at the end
        let mut acc = vec![0u64; out.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x * y;
            }
        }
        for (o, a) in out.iter_mut().zip(acc) {
            *o = a % p;
        }
    } else {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(f: &FieldSpec, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let inv = f.inv(b[db]).expect("nonzero leading coefficient of a trimmed divisor");
    let mut quo = vec![0u64; rem.len() - db];
    while rem.len() > db && !rem.is_empty() {
        let top = rem.len() - 1;
        let c = f.mul(rem[top], inv);
        let shift = top - db;
        quo[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            rem[shift + i] = f.sub(rem[shift + i], f.mul(c, y));
        }
        trim(&mut rem);
    }
    trim(&mut quo);
    (quo, rem)
}

pub(crate) fn rem(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    divrem(f, a, b).1
}

pub(crate) fn make_monic(f: &FieldSpec, a: &mut [u64]) {
    if let Some(&lead) = a.last() {
        let inv = f.inv(lead).expect("nonzero leading coefficient");
        for c in a.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
}

pub(crate) fn gcd(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = std::mem::replace(&mut y, r);
    }
    make_monic(f, &mut x);
    x
}

/// `a * b mod m` for residues already reduced mod `m`.
pub(crate) fn mulmod(f: &FieldSpec, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    rem(f, &mul(f, a, b), m)
}
