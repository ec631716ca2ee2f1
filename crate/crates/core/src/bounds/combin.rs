//! Exact combinatorics over big integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut res = BigInt::one();
    for i in 0..k {
        res = res * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    res
}

pub fn factorial(n: u64) -> BigInt {
    let mut res = BigInt::one();
    for i in 2..=n {
        res *= BigInt::from(i);
    }
    res
}

/// `n! / (parts[0]! * ... * parts[m-1]!)`; the parts must sum to `n`.
pub fn multinomial(n: u64, parts: &[u64]) -> BigInt {
    assert_eq!(parts.iter().sum::<u64>(), n, "multinomial parts must sum to n");
    let mut res = BigInt::one();
    let mut remaining = n;
    for &p in parts {
        res *= binomial(remaining, p);
        remaining -= p;
    }
    res
}
