//! Reference implementations that share no code with the library.

#![allow(dead_code)]

/// σ(n) by pairing divisors d ≤ √n with n/d.
pub fn naive_sigma(n: u64) -> u64 {
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += d;
            let e = n / d;
            if e != d {
                total += e;
            }
        }
        d += 1;
    }
    total
}

pub fn naive_s(n: u64) -> u64 {
    naive_sigma(n) - n
}

pub fn naive_is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn naive_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// σ(1..=x) by adding each d to all of its multiples.
pub fn sigma_table(x: u64) -> Vec<u64> {
    let mut t = vec![0u64; x as usize + 1];
    for d in 1..=x as usize {
        for m in (d..=x as usize).step_by(d) {
            t[m] += d as u64;
        }
    }
    t
}

/// Σ_{n≤x} σ(n) = Σ_{d≤x} d·⌊x/d⌋.
pub fn hyperbola_sigma_sum(x: u64) -> u128 {
    (1..=x).map(|d| d as u128 * (x / d) as u128).sum()
}

pub fn primes_naive(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| naive_is_prime(n)).collect()
}
