//! Solutions of `σ(n) = kn + a` and of the congruence `σ(n) ≡ a (mod n)`.
//!
//! A solution is *regular* when `n = pm` with `p` prime, `p ∤ m`,
//! `σ(m) = km` and `σ(m) = a`; every other solution is *sporadic*. The two
//! conditions on `m` together say exactly that `m = a/k` is k-perfect, which
//! is how they are tested here.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{self, primes_up_to};
use crate::sieve::{sieve_scan, ScanConfig};
use crate::{Error, Result};

/// `σ(n) = kn`. `σ(1) = 1`, so 1 is 1-perfect.
pub fn is_k_perfect(n: u64, k: u64) -> bool {
    let Ok(f) = arith::factorize(n) else {
        return false;
    };
    // σ(n) < 2^128 for every 64-bit n
    let sigma = arith::sigma_of_parts(f.factors().iter().copied()).expect("sigma fits in u128");
    sigma == k as u128 * n as u128
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Regular,
    Sporadic,
}

impl SolutionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolutionKind::Regular => "regular",
            SolutionKind::Sporadic => "sporadic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnaSolution {
    pub n: u64,
    pub k: u64,
    pub a: i128,
    pub kind: SolutionKind,
    /// `(p, m)` with `n = pm` for regular solutions.
    pub regular_decomposition: Option<(u64, u64)>,
}

/// The k-perfect `m` behind regular solutions of `σ(n) = kn + a`, if any.
fn regular_base(k: u64, a: i128) -> Option<u64> {
    if k == 0 || a <= 0 || a % k as i128 != 0 {
        return None;
    }
    let m = u64::try_from(a / k as i128).ok()?;
    is_k_perfect(m, k).then_some(m)
}

/// All regular solutions `n ≤ x`, ascending.
pub fn regular_solutions(k: u64, a: i128, x: u64) -> Result<Vec<u64>> {
    if x == 0 {
        return Err(Error::Precondition("x must be at least 1".into()));
    }
    let Some(m) = regular_base(k, a) else {
        return Ok(Vec::new());
    };
    Ok(primes_up_to(x / m)
        .into_iter()
        .filter(|p| m % p != 0)
        .map(|p| p * m)
        .collect())
}

/// Every `n ≤ x` with `σ(n) = kn + a`, classified. `k = 0` is allowed and
/// never yields regular solutions.
pub fn solutions(k: u64, a: i128, x: u64, cfg: &ScanConfig) -> Result<Vec<KnaSolution>> {
    let regular: HashSet<u64> = regular_solutions(k, a, x)?.into_iter().collect();
    let base = regular_base(k, a);
    let hits = sieve_scan(
        x,
        cfg,
        Vec::new,
        |acc: &mut Vec<u64>, e| {
            if e.sigma as i128 == k as i128 * e.n as i128 + a {
                acc.push(e.n);
            }
        },
        |mut l, mut r| {
            l.append(&mut r);
            l
        },
    )?;
    Ok(hits
        .into_iter()
        .map(|n| {
            let is_regular = regular.contains(&n);
            KnaSolution {
                n,
                k,
                a,
                kind: if is_regular {
                    SolutionKind::Regular
                } else {
                    SolutionKind::Sporadic
                },
                regular_decomposition: base.filter(|_| is_regular).map(|m| (n / m, m)),
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SporadicRow {
    pub x: u64,
    pub sporadic: u64,
    pub regular: u64,
    /// `x^{3/5}`, for reporting only.
    pub envelope: f64,
    /// `sporadic ≤ x^{3/5}`, decided exactly as `sporadic^5 ≤ x^3`.
    pub within_envelope: bool,
}

pub fn sporadic_count_profile(
    k: u64,
    a: i128,
    x_list: &[u64],
    cfg: &ScanConfig,
) -> Result<Vec<SporadicRow>> {
    if x_list.is_empty() {
        return Ok(Vec::new());
    }
    if x_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "x_list must be strictly ascending".into(),
        ));
    }
    let max_x = *x_list.last().unwrap();
    let all = solutions(k, a, max_x, cfg)?;
    Ok(x_list
        .iter()
        .map(|&x| {
            let upto = all.iter().filter(|s| s.n <= x);
            let sporadic = upto
                .clone()
                .filter(|s| s.kind == SolutionKind::Sporadic)
                .count() as u64;
            let regular = upto.count() as u64 - sporadic;
            let within = BigUint::from(sporadic).pow(5) <= BigUint::from(x).pow(3);
            SporadicRow {
                x,
                sporadic,
                regular,
                envelope: (x as f64).powf(0.6),
                within_envelope: within,
            }
        })
        .collect())
}

/// `count / (x / ln x)`.
pub fn normalize(count: u64, x: u64) -> f64 {
    let xf = x as f64;
    count as f64 / (xf / xf.ln())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceCensus {
    pub a: i128,
    pub x: u64,
    pub solutions: Vec<u64>,
    pub count: u64,
    pub normalized: f64,
}

#[inline]
fn satisfies(sigma: u64, n: u64, a: i128) -> bool {
    sigma % n == a.rem_euclid(n as i128) as u64
}

/// All `n ∈ [2, x]` with `σ(n) ≡ a (mod n)`. `n = 1` is excluded.
pub fn congruence_census(a: i128, x: u64, cfg: &ScanConfig) -> Result<CongruenceCensus> {
    if x < 2 {
        return Err(Error::Precondition(format!(
            "x must be at least 2, got {x}"
        )));
    }
    let solutions = sieve_scan(
        x,
        cfg,
        Vec::new,
        |acc: &mut Vec<u64>, e| {
            if e.n >= 2 && satisfies(e.sigma, e.n, a) {
                acc.push(e.n);
            }
        },
        |mut l, mut r| {
            l.append(&mut r);
            l
        },
    )?;
    let count = solutions.len() as u64;
    Ok(CongruenceCensus {
        a,
        x,
        solutions,
        count,
        normalized: normalize(count, x),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceRow {
    pub a: i128,
    pub count: u64,
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformitySweep {
    pub x: u64,
    pub rows: Vec<CongruenceRow>,
    pub max_normalized: f64,
    pub argmax: i128,
}

/// Counts for several residues `a` from one sieve pass.
pub fn congruence_uniformity_sweep(
    a_list: &[i128],
    x: u64,
    cfg: &ScanConfig,
) -> Result<UniformitySweep> {
    if x < 2 {
        return Err(Error::Precondition(format!(
            "x must be at least 2, got {x}"
        )));
    }
    if a_list.is_empty() {
        return Err(Error::Precondition("a_list must not be empty".into()));
    }
    let counts = sieve_scan(
        x,
        cfg,
        || vec![0u64; a_list.len()],
        |acc: &mut Vec<u64>, e| {
            if e.n < 2 {
                return;
            }
            for (slot, &a) in acc.iter_mut().zip(a_list) {
                if satisfies(e.sigma, e.n, a) {
                    *slot += 1;
                }
            }
        },
        |mut l, r| {
            for (u, v) in l.iter_mut().zip(r) {
                *u += v;
            }
            l
        },
    )?;
    let rows: Vec<CongruenceRow> = a_list
        .iter()
        .zip(counts)
        .map(|(&a, count)| CongruenceRow {
            a,
            count,
            normalized: normalize(count, x),
        })
        .collect();
    let best = rows.iter().fold(
        &rows[0],
        |b, r| if r.normalized > b.normalized { r } else { b },
    );
    Ok(UniformitySweep {
        x,
        max_normalized: best.normalized,
        argmax: best.a,
        rows,
    })
}
