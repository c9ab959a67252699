use rand::Rng;

use super::Rational;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniform prime in `[2^30, 2^31)`.
pub fn random_prime_31<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let c = rng.gen_range(1u64 << 30..1u64 << 31) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

/// Image of `x` in the prime field, or `None` if `p` divides the denominator.
pub(crate) fn reduce(x: &Rational, p: u64) -> Option<u64> {
    let num = x.numer().rem_euclid(p as i64) as u64;
    let den = x.denom().rem_euclid(p as i64) as u64;
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, pow_mod(den, p - 2, p), p))
}
