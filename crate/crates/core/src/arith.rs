//! Small integer helpers shared by the permutation and polycyclic code.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// `true` when `n` is `p^k` for some `k >= 0`.
pub fn is_power_of(n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// `true` when every prime factor of `n` lies in `primes` (so 1 always is).
pub fn is_p_number(n: u64, primes: &BTreeSet<u64>) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    for &p in primes {
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n == 1
}

/// Largest divisor of `n` that is a `primes`-number.
pub fn p_part(n: u64, primes: &BTreeSet<u64>) -> u64 {
    let mut part = 1;
    let mut rest = n;
    for &p in primes {
        while rest > 0 && rest.is_multiple_of(p) {
            rest /= p;
            part *= p;
        }
    }
    part
}

/// Extended gcd on `i64`: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

pub(crate) fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("exponent arithmetic"))
}

pub(crate) fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("exponent arithmetic"))
}
