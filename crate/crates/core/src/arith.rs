//! Small integer helpers over `u64`.

use num_integer::Roots;
use num_prime::nt_funcs::{factorize64, is_prime64};

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

/// Prime factorization in increasing order of primes.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    if n <= 1 {
        return Vec::new();
    }
    factorize64(n).into_iter().map(|(p, e)| (p, e as u32)).collect()
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// `k` with `n = q^k`, if any.
pub fn log_exact(n: u64, q: u64) -> Option<u32> {
    if q < 2 || n == 0 {
        return None;
    }
    let (mut n, mut k) = (n, 0);
    while n % q == 0 {
        n /= q;
        k += 1;
    }
    (n == 1).then_some(k)
}

pub fn perfect_sqrt(n: u128) -> Option<u128> {
    let s = n.sqrt();
    (s * s == n).then_some(s)
}

/// Product of the primes dividing `n` exactly once.
pub fn exact_prime_part(n: u64) -> u64 {
    factorize(n).into_iter().filter(|&(_, e)| e == 1).map(|(p, _)| p).product()
}
