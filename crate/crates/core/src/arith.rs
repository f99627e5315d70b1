//! Exact multiplicative arithmetic on 64-bit integers.
//!
//! Factorization is trial division by the primes below 2¹⁶ followed by
//! Brent's variant of Pollard rho with fixed seeds, so every call is
//! deterministic. Primality is a deterministic Miller–Rabin test with the
//! first twelve prime bases, which is exact for all of `u64`.
//!
//! σ products are accumulated in `u128` and rejected if they do not fit back
//! into `u64`.

use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::overflow;
use crate::{Error, Result};

const TRIAL_LIMIT: u64 = 1 << 16;

/// Primes below 2¹⁶, computed once.
pub(crate) fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// An odd trial divisor with its inverse mod 2⁶⁴: `n` is a multiple of `p`
/// exactly when `n·inv mod 2⁶⁴ ≤ ⌊(2⁶⁴−1)/p⌋`, which avoids a division per
/// trial.
#[derive(Clone, Copy)]
struct TrialDivisor {
    p: u64,
    inv: u64,
    max_quotient: u64,
}

impl TrialDivisor {
    fn new(p: u64) -> Self {
        // Newton iteration doubles the correct low bits each step
        let mut inv = p;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        TrialDivisor {
            p,
            inv,
            max_quotient: u64::MAX / p,
        }
    }

    #[inline]
    fn divides(&self, n: u64) -> bool {
        n.wrapping_mul(self.inv) <= self.max_quotient
    }

    /// `n / p` for a multiple `n` of `p`.
    #[inline]
    fn exact_quotient(&self, n: u64) -> u64 {
        n.wrapping_mul(self.inv)
    }
}

fn trial_divisors() -> &'static [TrialDivisor] {
    static TABLE: OnceLock<Vec<TrialDivisor>> = OnceLock::new();
    TABLE.get_or_init(|| {
        small_primes()[1..]
            .iter()
            .map(|&p| TrialDivisor::new(p))
            .collect()
    })
}

/// Plain sieve of Eratosthenes, inclusive of `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let len = limit as usize + 1;
    let mut composite = vec![false; len];
    let mut primes = Vec::new();
    for i in 2..len {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j < len {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Montgomery arithmetic modulo an odd `n`, with `R = 2⁶⁴`.
#[derive(Clone, Copy)]
struct Montgomery {
    n: u64,
    /// `n⁻¹ mod 2⁶⁴`.
    n_inv: u64,
    /// `R² mod n`.
    r2: u64,
}

impl Montgomery {
    fn new(n: u64) -> Self {
        debug_assert!(n % 2 == 1);
        let mut n_inv = n;
        for _ in 0..5 {
            n_inv = n_inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(n_inv)));
        }
        let r1 = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r1 as u128 * r1 as u128) % n as u128) as u64;
        Montgomery { n, n_inv, r2 }
    }

    /// `t·R⁻¹ mod n` for `t < n·2⁶⁴`.
    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.n_inv);
        let mn = m as u128 * self.n as u128;
        // the low words of t and mn agree, so only the high words matter
        let (hi, borrow) = ((t >> 64) as u64).overflowing_sub((mn >> 64) as u64);
        if borrow {
            hi.wrapping_add(self.n)
        } else {
            hi
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    fn to_mont(self, a: u64) -> u64 {
        self.mul(a % self.n, self.r2)
    }

    fn one(self) -> u64 {
        self.to_mont(1)
    }

    /// `base^exp` with base and result in Montgomery form.
    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// Deterministic primality test for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    let mont = Montgomery::new(n);
    let one = mont.one();
    let minus_one = n - one;
    'witness: for &a in &BASES {
        let mut x = mont.pow(mont.to_mont(a), d);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..r {
            x = mont.mul(x, x);
            if x == minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle finding with batched gcds. `n` must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    // iterating in Montgomery form still applies a quadratic map mod n
    let mont = Montgomery::new(n);
    for c in 1..n {
        let f = |v: u64| {
            let sq = mont.mul(v, v);
            if sq >= n - c {
                sq - (n - c)
            } else {
                sq + c
            }
        };
        let mut y = 2u64;
        let mut x = y;
        let mut ys = y;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mont.mul(q, x.abs_diff(y));
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("pollard_brent called on a prime")
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// A prime power `p^e` with `e ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u8,
}

/// σ(p^e) = 1 + p + ⋯ + p^e, or `None` on 128-bit overflow.
pub fn sigma_prime_power(p: u64, e: u8) -> Option<u128> {
    let mut term: u128 = 1;
    let mut sum: u128 = 1;
    for _ in 0..e {
        term = term.checked_mul(p as u128)?;
        sum = sum.checked_add(term)?;
    }
    Some(sum)
}

/// σ of an arbitrary factored number, in `u128`.
pub(crate) fn sigma_of_parts(parts: impl IntoIterator<Item = PrimePower>) -> Option<u128> {
    parts.into_iter().try_fold(1u128, |acc, pp| {
        acc.checked_mul(sigma_prime_power(pp.prime, pp.exponent)?)
    })
}

/// Prime-power decomposition of a positive 64-bit integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<PrimePower>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Prime powers in strictly increasing prime order.
    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].exponent == 1
    }

    /// Rebuilds n from the factor list.
    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|pp| (pp.prime as u128).pow(pp.exponent as u32))
            .product()
    }

    pub fn sigma(&self) -> Result<u64> {
        let wide = sigma_of_parts(self.factors.iter().copied())
            .ok_or_else(|| overflow(format!("sigma({}) exceeds 128 bits", self.n)))?;
        u64::try_from(wide).map_err(|_| overflow(format!("sigma({}) exceeds 64 bits", self.n)))
    }

    pub fn tau(&self) -> u64 {
        self.factors
            .iter()
            .map(|pp| pp.exponent as u64 + 1)
            .product()
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn rad(&self) -> u64 {
        self.factors.iter().map(|pp| pp.prime).product()
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|pp| pp.prime)
    }

    pub fn smallest_prime(&self) -> Option<u64> {
        self.factors.first().map(|pp| pp.prime)
    }

    /// Largest divisor of n whose primes all appear in n with exponent ≥ 2.
    pub fn squarefull_part(&self) -> u64 {
        self.factors
            .iter()
            .filter(|pp| pp.exponent >= 2)
            .map(|pp| pp.prime.pow(pp.exponent as u32))
            .product()
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for pp in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..pp.exponent {
                pk *= pp.prime;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Builds a factorization from a list of primes with multiplicity, in any order.
    pub(crate) fn from_prime_multiset(n: u64, mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        let mut factors: Vec<PrimePower> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some(last) if last.prime == p => last.exponent += 1,
                _ => factors.push(PrimePower {
                    prime: p,
                    exponent: 1,
                }),
            }
        }
        Factorization { n, factors }
    }
}

/// Factors `n ≥ 1`. `factorize(1)` is the empty product.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let twos = n.trailing_zeros();
    let mut rest = n >> twos;
    let mut primes = vec![2; twos as usize];
    for t in trial_divisors() {
        if t.p * t.p > rest {
            break;
        }
        while t.divides(rest) {
            rest = t.exact_quotient(rest);
            primes.push(t.p);
        }
    }
    if rest > 1 {
        if rest < TRIAL_LIMIT * TRIAL_LIMIT {
            // no factor below 2^16 and rest < 2^32 ⇒ rest is prime
            primes.push(rest);
        } else {
            split_large(rest, &mut primes);
        }
    }
    Ok(Factorization::from_prime_multiset(n, primes))
}

/// Arithmetic summary of a single integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithProfile {
    pub n: u64,
    pub sigma: u64,
    pub s: u64,
    pub tau: u64,
    pub omega: u32,
    pub rad: u64,
    /// P(n); `None` for n = 1.
    pub largest_prime: Option<u64>,
    /// P⁻(n); `None` for n = 1.
    pub smallest_prime: Option<u64>,
    pub squarefull_part: u64,
}

pub fn profile(n: u64) -> Result<ArithProfile> {
    let f = factorize(n)?;
    profile_of(&f)
}

pub fn profile_of(f: &Factorization) -> Result<ArithProfile> {
    let sigma = f.sigma()?;
    Ok(ArithProfile {
        n: f.n(),
        sigma,
        s: sigma - f.n(),
        tau: f.tau(),
        omega: f.omega(),
        rad: f.rad(),
        largest_prime: f.largest_prime(),
        smallest_prime: f.smallest_prime(),
        squarefull_part: f.squarefull_part(),
    })
}

pub fn sigma(n: u64) -> Result<u64> {
    factorize(n)?.sigma()
}

/// Sum of proper divisors, s(n) = σ(n) − n, with s(1) = 0.
pub fn aliquot_sum(n: u64) -> Result<u64> {
    Ok(sigma(n)? - n)
}

fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or_else(|| overflow("128-bit product"))
}

fn checked_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or_else(|| overflow("128-bit sum"))
}

/// Checks `s(de) = σ(d)s(e) + s(d)e` for coprime `d, e`.
///
/// The left side comes from factoring `de` directly; the right side from
/// separate factorizations of `d` and `e`.
pub fn check_coprime_split_identity(d: u64, e: u64) -> Result<bool> {
    if d == 0 || e == 0 {
        return Err(Error::Domain("d and e must be positive".into()));
    }
    if d.gcd(&e) != 1 {
        return Err(Error::Precondition(format!("gcd({d}, {e}) > 1")));
    }
    let de = d
        .checked_mul(e)
        .filter(|&v| v < 1 << 63)
        .ok_or_else(|| overflow(format!("{d}·{e} must be below 2^63")))?;
    let lhs = aliquot_sum(de)? as i128;
    let pd = profile(d)?;
    let pe = profile(e)?;
    let rhs = checked_add(
        checked_mul(pd.sigma as i128, pe.s as i128)?,
        checked_mul(pd.s as i128, e as i128)?,
    )?;
    Ok(lhs == rhs)
}

/// Validates a seed and prime pair for the `n₀pq` constructions.
pub(crate) fn validate_seed_pair(n0: u64, p: u64, q: u64) -> Result<()> {
    if n0 == 0 {
        return Err(Error::Domain("n0 must be positive".into()));
    }
    if p == q {
        return Err(Error::Precondition(format!("p = q = {p}")));
    }
    for r in [p, q] {
        if !is_prime(r) {
            return Err(Error::Precondition(format!("{r} is not prime")));
        }
        if n0.is_multiple_of(r) {
            return Err(Error::Precondition(format!("{r} divides n0 = {n0}")));
        }
    }
    Ok(())
}

fn seed_product(n0: u64, p: u64, q: u64) -> Result<u64> {
    n0.checked_mul(p)
        .and_then(|v| v.checked_mul(q))
        .ok_or_else(|| overflow(format!("{n0}·{p}·{q} exceeds 64 bits")))
}

/// Checks `s(n₀)s(n₀pq) = (s(n₀)p + σ(n₀))(s(n₀)q + σ(n₀)) + s(n₀)σ(n₀) − σ(n₀)²`.
pub fn check_analogue_identity(n0: u64, p: u64, q: u64) -> Result<bool> {
    validate_seed_pair(n0, p, q)?;
    let n = seed_product(n0, p, q)?;
    let s_n = aliquot_sum(n)? as i128;
    let base = profile(n0)?;
    let (s0, sig0) = (base.s as i128, base.sigma as i128);
    let lhs = checked_mul(s0, s_n)?;
    let left = checked_add(checked_mul(s0, p as i128)?, sig0)?;
    let right = checked_add(checked_mul(s0, q as i128)?, sig0)?;
    let rhs = checked_add(
        checked_add(checked_mul(left, right)?, checked_mul(s0, sig0)?)?,
        -checked_mul(sig0, sig0)?,
    )?;
    Ok(lhs == rhs)
}

/// Checks `T(σ(n) − kn) = (Tp + σ(n₀))(Tq + σ(n₀)) + Tσ(n₀) − σ(n₀)²`
/// for `n = n₀pq` and `T = σ(n₀) − kn₀`.
pub fn check_analogue2_identity(n0: u64, p: u64, q: u64, k: u64) -> Result<bool> {
    validate_seed_pair(n0, p, q)?;
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let n = seed_product(n0, p, q)?;
    let sig_n = sigma(n)? as i128;
    let sig0 = sigma(n0)? as i128;
    let k = k as i128;
    let t = sig0 - checked_mul(k, n0 as i128)?;
    let lhs = checked_mul(t, sig_n - checked_mul(k, n as i128)?)?;
    let left = checked_add(checked_mul(t, p as i128)?, sig0)?;
    let right = checked_add(checked_mul(t, q as i128)?, sig0)?;
    let rhs = checked_add(
        checked_add(checked_mul(left, right)?, checked_mul(t, sig0)?)?,
        -checked_mul(sig0, sig0)?,
    )?;
    Ok(lhs == rhs)
}

/// `s(n₀)pq + σ(n₀)(p + q + 1)`, which equals `s(n₀pq)`.
pub fn s_of_semiprime_expansion(n0: u64, p: u64, q: u64) -> Result<u64> {
    validate_seed_pair(n0, p, q)?;
    let base = profile(n0)?;
    let value = (base.s as u128)
        .checked_mul(p as u128 * q as u128)
        .and_then(|v| {
            (base.sigma as u128)
                .checked_mul(p as u128 + q as u128 + 1)
                .and_then(|w| v.checked_add(w))
        })
        .ok_or_else(|| overflow("s(n0 p q) expansion"))?;
    u64::try_from(value).map_err(|_| overflow("s(n0 p q) exceeds 64 bits"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisor_sum(n: u64) -> u64 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
    }

    #[test]
    fn primes_near_the_top_of_u64() {
        assert!(is_prime(u64::MAX - 58));
        assert!(!is_prime(u64::MAX - 58 - 2));
        // 4294967291 and 4294967279 are the two largest primes below 2^32
        let n = 4_294_967_291u64 * 4_294_967_279;
        assert!(!is_prime(n));
        let f = factorize(n).unwrap();
        let ps: Vec<u64> = f.factors().iter().map(|pp| pp.prime).collect();
        assert_eq!(ps, vec![4_294_967_279, 4_294_967_291]);
    }

    #[test]
    fn inverse_divisibility_test() {
        for &p in &small_primes()[1..50] {
            let t = TrialDivisor::new(p);
            assert_eq!(p.wrapping_mul(t.inv), 1);
            for n in [0, 1, p, 2 * p, p * p + 1, u64::MAX, u64::MAX - u64::MAX % p] {
                assert_eq!(t.divides(n), n % p == 0, "p = {p}, n = {n}");
                if n % p == 0 {
                    assert_eq!(t.exact_quotient(n), n / p);
                }
            }
        }
    }

    #[test]
    fn factorize_small_cases() {
        assert!(factorize(1).unwrap().factors().is_empty());
        let f = factorize(12).unwrap();
        assert_eq!(
            f.factors(),
            &[
                PrimePower {
                    prime: 2,
                    exponent: 2
                },
                PrimePower {
                    prime: 3,
                    exponent: 1
                }
            ]
        );
        assert!(matches!(factorize(0), Err(Error::Domain(_))));
    }

    #[test]
    fn mersenne_61_is_prime() {
        let m61 = (1u64 << 61) - 1;
        let f = factorize(m61).unwrap();
        assert_eq!(
            f.factors(),
            &[PrimePower {
                prime: m61,
                exponent: 1
            }]
        );
        assert!(is_prime(m61));
    }

    #[test]
    fn factorize_hard_semiprimes() {
        // products of two primes above 2^16 exercise the rho stage
        for (p, q) in [
            (4_294_967_291u64, 4_294_967_279u64),
            (65_537, 4_294_967_291),
            (1_000_000_007, 998_244_353),
        ] {
            let f = factorize(p * q).unwrap();
            let mut expect = vec![p, q];
            expect.sort();
            let got: Vec<u64> = f.factors().iter().map(|pp| pp.prime).collect();
            assert_eq!(got, expect);
        }
        let f = factorize(4_294_967_291u64.pow(2)).unwrap();
        assert_eq!(
            f.factors(),
            &[PrimePower {
                prime: 4_294_967_291,
                exponent: 2
            }]
        );
        let f = factorize(u64::MAX).unwrap();
        assert_eq!(f.product(), u64::MAX as u128);
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        let sieve = primes_up_to(100_000);
        let mut it = sieve.iter().peekable();
        for n in 0..=100_000u64 {
            let expected = it.peek().is_some_and(|&&p| p == n);
            if expected {
                it.next();
            }
            assert_eq!(is_prime(n), expected, "n = {n}");
        }
        // strong pseudoprimes to several small bases
        for n in [
            3_215_031_751u64,
            2_152_302_898_747,
            3_474_749_660_383,
            341_550_071_728_321,
        ] {
            assert!(!is_prime(n), "{n}");
        }
    }

    #[test]
    fn profile_of_twelve() {
        let p = profile(12).unwrap();
        assert_eq!((p.sigma, p.s, p.tau, p.omega, p.rad), (28, 16, 6, 2, 6));
        assert_eq!((p.largest_prime, p.smallest_prime), (Some(3), Some(2)));
        assert_eq!(p.squarefull_part, 4);
        assert_eq!(divisor_sum(12), 28);
    }

    #[test]
    fn profile_of_one_and_120() {
        let one = profile(1).unwrap();
        assert_eq!(
            (one.sigma, one.s, one.tau, one.rad, one.squarefull_part),
            (1, 0, 1, 1, 1)
        );
        assert_eq!(one.largest_prime, None);
        assert_eq!(profile(120).unwrap().sigma, 360);
    }

    #[test]
    fn sigma_overflow_is_reported() {
        // even n just below 2^64 has σ(n) ≥ 3n/2 > 2^64
        let n = u64::MAX - 1;
        assert!(matches!(profile(n), Err(Error::Overflow(_))));
    }

    #[test]
    fn coprime_split_examples() {
        assert_eq!(divisor_sum(36) - 36, 55);
        assert!(check_coprime_split_identity(4, 9).unwrap());
        assert!(check_coprime_split_identity(1, 97).unwrap());
        assert!(matches!(
            check_coprime_split_identity(4, 6),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn analogue_examples() {
        assert_eq!(divisor_sum(30) - 30, 42);
        assert_eq!(divisor_sum(42) - 42, 54);
        assert!(check_analogue_identity(2, 3, 5).unwrap());
        assert!(check_analogue_identity(2, 3, 7).unwrap());
        assert!(matches!(
            check_analogue_identity(2, 3, 3),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_analogue_identity(6, 3, 5),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_analogue_identity(2, 3, 9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn analogue2_examples() {
        assert!(check_analogue2_identity(2, 3, 5, 1).unwrap());
        assert_eq!(divisor_sum(30) - 60, 12);
        assert!(check_analogue2_identity(2, 3, 5, 2).unwrap());
        assert!(matches!(
            check_analogue2_identity(2, 5, 5, 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn semiprime_expansion_examples() {
        assert_eq!(s_of_semiprime_expansion(2, 3, 5).unwrap(), 42);
        assert_eq!(s_of_semiprime_expansion(1, 11, 13).unwrap(), 25);
        assert_eq!(divisor_sum(170) - 170, 154);
        assert_eq!(s_of_semiprime_expansion(2, 5, 17).unwrap(), 154);
    }

    #[test]
    fn divisors_are_sorted_and_complete() {
        let f = factorize(360).unwrap();
        let naive: Vec<u64> = (1..=360).filter(|d| 360 % d == 0).collect();
        assert_eq!(f.divisors(), naive);
    }
}
