//! Primes, primitive roots and discrete logarithms for small moduli.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1u128 % m128;
    let mut b = base as u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Least primitive root modulo a prime `p`.
pub fn primitive_root(p: u64) -> Option<u64> {
    if !is_prime(p) {
        return None;
    }
    if p == 2 {
        return Some(1);
    }
    let factors = prime_factors(p - 1);
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
}

/// Table `log[x]` of discrete logarithms base `g` modulo prime `p`
/// (`log[0]` is unused and set to `u64::MAX`).
pub fn discrete_log_table(g: u64, p: u64) -> Vec<u64> {
    let mut table = vec![u64::MAX; p as usize];
    let mut x = 1u64;
    for i in 0..p - 1 {
        table[x as usize] = i;
        x = x * g % p;
    }
    table
}

pub fn lcm_all(values: &[u64]) -> u64 {
    values.iter().fold(1u64, |acc, v| acc.lcm(v))
}
