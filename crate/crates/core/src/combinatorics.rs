use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of `t`-tuples over an `m`-set that use every element:
/// `Σ_i (-1)^i C(m,i) (m-i)^t`. Equals 1 for `t = m = 0`.
pub fn surjection_count(t: u32, m: u32) -> BigInt {
    let mut total = BigInt::zero();
    for i in 0..=m {
        let term = BigInt::from(binomial(m as u64, i as u64)) * BigInt::from(m - i).pow(t);
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `surjection_count` for the small arguments that occur in operator
/// construction, where the value fits in `u64`.
pub fn surjection_count_u64(t: u32, m: u32) -> u64 {
    u64::try_from(surjection_count(t, m)).expect("surjection count overflows u64")
}

/// Number of distinct orderings of a multiset with the given multiplicities.
pub fn multinomial(counts: &[u32]) -> BigUint {
    let mut acc = BigUint::one();
    let mut total = 0u64;
    for &c in counts {
        for j in 1..=c as u64 {
            total += 1;
            acc = acc * total / j;
        }
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}
