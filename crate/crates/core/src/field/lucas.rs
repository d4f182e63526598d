use num_bigint::BigUint;

use crate::ring::digits_base;

/// `C(m, i) mod p` by Lucas's theorem: the product of the digit-wise binomials
/// in base `p`. Zero when `i > m`.
pub fn binom_mod(m: &BigUint, i: &BigUint, p: u64) -> u64 {
    if i > m {
        return 0;
    }
    let md = digits_base(m, p);
    let id = digits_base(i, p);
    let mut acc = 1u64;
    for (j, &mj) in md.iter().enumerate() {
        let ij = id.get(j).copied().unwrap_or(0);
        if ij > mj {
            return 0;
        }
        acc = mulmod(acc, small_binom(mj, ij, p), p);
        if acc == 0 {
            return 0;
        }
    }
    acc
}

pub fn binom_mod_u64(m: u64, i: u64, p: u64) -> u64 {
    binom_mod(&BigUint::from(m), &BigUint::from(i), p)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// `C(a, b) mod p` for `b <= a < p`.
fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for k in 0..b {
        num = mulmod(num, (a - k) % p, p);
        den = mulmod(den, (k + 1) % p, p);
    }
    mulmod(num, powmod(den, p - 2, p), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn small_examples() {
        assert_eq!(binom_mod_u64(4, 2, 2), 0);
        assert_eq!(binom_mod_u64(7, 0, 3), 1);
        assert_eq!(binom_mod_u64(3, 5, 7), 0);
        assert_eq!(binom_mod_u64(10, 3, 7), 120 % 7);
    }

    #[test]
    fn prime_powers_kill_middle_binomials() {
        for p in [2u64, 3, 5] {
            for k in 1..6u32 {
                let m = BigUint::from(p).pow(k);
                let mut i = BigUint::one();
                while i < m {
                    assert_eq!(binom_mod(&m, &i, p), 0);
                    i += 1u32;
                }
                assert_eq!(binom_mod(&m, &m, p), 1);
            }
        }
        let huge = BigUint::from(2u32).pow(200);
        assert_eq!(binom_mod(&huge, &BigUint::from(12345u32), 2), 0);
    }

    #[test]
    fn agrees_with_pascal_triangle() {
        // brute-force oracle: Pascal's rule reduced mod p, m <= 2000
        for p in [2u64, 3, 5, 7] {
            let mut row = vec![1u64];
            for m in 0..=2000u64 {
                for (i, &c) in row.iter().enumerate() {
                    assert_eq!(binom_mod_u64(m, i as u64, p), c, "C({m},{i}) mod {p}");
                }
                let mut next = vec![1u64; row.len() + 1];
                for i in 1..row.len() {
                    next[i] = (row[i - 1] + row[i]) % p;
                }
                row = next;
            }
        }
    }
}
