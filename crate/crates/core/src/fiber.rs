//! s-preimages: complete fibers, semiprime preimages, untouchable numbers.
//!
//! A composite n has a divisor `d ≥ √n`, so `s(n) ≥ √n`. Every preimage of
//! `m ≥ 2` is therefore composite and at most `m²`, which makes a scan to `m²`
//! a complete enumeration. `m = 1` (all primes) and `m = 0` (just `n = 1`) are
//! never reported as complete.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::overflow;
use crate::sieve::{sieve_scan, ScanConfig};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub m: u64,
    pub x: u64,
    /// Every `n ≤ x` with `s(n) = m`, ascending.
    pub preimages: Vec<u64>,
    /// No preimage beyond `x` exists (`m ≥ 2` and `x ≥ m²`).
    pub complete_for_all_n: bool,
    /// The full fiber is infinite (`m = 1`: the primes).
    pub infinite: bool,
}

fn is_complete(m: u64, x: u64) -> bool {
    m >= 2 && m.checked_mul(m).is_some_and(|sq| x >= sq)
}

pub fn fiber_scan(m: u64, x: u64, cfg: &ScanConfig) -> Result<FiberReport> {
    Ok(fiber_scan_many(&[m], x, cfg)?.remove(0))
}

/// One sieve pass serving several targets. Reports come back in the order of
/// `targets` (duplicates are collapsed).
pub fn fiber_scan_many(targets: &[u64], x: u64, cfg: &ScanConfig) -> Result<Vec<FiberReport>> {
    let mut order: Vec<u64> = targets.to_vec();
    order.sort_unstable();
    order.dedup();
    let hits = sieve_scan(
        x,
        cfg,
        Vec::new,
        |acc: &mut Vec<(u64, u64)>, e| {
            if order.binary_search(&e.s).is_ok() {
                acc.push((e.s, e.n));
            }
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    let mut buckets: HashMap<u64, Vec<u64>> = HashMap::new();
    for (m, n) in hits {
        buckets.entry(m).or_default().push(n);
    }
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for &m in targets {
        if seen.contains(&m) {
            continue;
        }
        seen.push(m);
        let mut preimages = buckets.remove(&m).unwrap_or_default();
        preimages.sort_unstable();
        out.push(FiberReport {
            m,
            x,
            preimages,
            complete_for_all_n: is_complete(m, x),
            infinite: m == 1,
        });
    }
    Ok(out)
}

/// Preimages of `m` of the form `pq` (`p < q` primes, `s = p + q + 1`) or
/// `p²` (`s = p + 1`), ascending.
pub fn fiber_semiprime(m: u64) -> Result<Vec<u64>> {
    if m < 3 {
        return Ok(Vec::new());
    }
    let sum = m - 1;
    if sum > u32::MAX as u64 {
        return Err(overflow(format!(
            "semiprime preimages of {m} exceed 64 bits"
        )));
    }
    let mut out = Vec::new();
    if is_prime(sum) {
        out.push(sum * sum);
    }
    let mut p = 2;
    while 2 * p < sum {
        let q = sum - p;
        if is_prime(p) && is_prime(q) {
            out.push(p * q);
        }
        p += 1;
    }
    out.sort_unstable();
    Ok(out)
}

/// Every `m ∈ [2, y]` with no preimage at all, certified by scanning `n ≤ y²`.
pub fn untouchables_up_to(y: u64, cfg: &ScanConfig) -> Result<Vec<u64>> {
    if y < 2 {
        return Err(Error::Precondition(format!(
            "y must be at least 2, got {y}"
        )));
    }
    let bound = y
        .checked_mul(y)
        .filter(|&b| b <= 1 << 63)
        .ok_or_else(|| overflow(format!("{y}^2 exceeds the sieve range")))?;
    let len = y as usize + 1;
    let touched = sieve_scan(
        bound,
        cfg,
        || vec![false; len],
        |acc: &mut Vec<bool>, e| {
            if e.s <= y {
                acc[e.s as usize] = true;
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x |= y;
            }
            a
        },
    )?;
    Ok((2..=y).filter(|&m| !touched[m as usize]).collect())
}

/// Targets attaining the largest preimage count among `n ≤ x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityTable {
    pub x: u64,
    /// Over all targets; for `x ≥ 5` this is `m = 1` (the primes).
    pub overall: Vec<(u64, u64)>,
    /// Over targets `m ≥ 2`.
    pub nontrivial: Vec<(u64, u64)>,
    /// Over even targets `m ≥ 2`.
    pub even: Vec<(u64, u64)>,
}

pub fn max_multiplicity_targets(x: u64, cfg: &ScanConfig) -> Result<MultiplicityTable> {
    if x < 2 {
        return Err(Error::Precondition(format!(
            "x must be at least 2, got {x}"
        )));
    }
    let mut values = sieve_scan(
        x,
        cfg,
        Vec::new,
        |acc: &mut Vec<u64>, e| acc.push(e.s),
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    values.sort_unstable();
    let mut counts: Vec<(u64, u64)> = Vec::new();
    for v in values {
        match counts.last_mut() {
            Some((m, c)) if *m == v => *c += 1,
            _ => counts.push((v, 1)),
        }
    }
    let best = |keep: &dyn Fn(u64) -> bool| {
        let max = counts
            .iter()
            .filter(|(m, _)| keep(*m))
            .map(|&(_, c)| c)
            .max()
            .unwrap_or(0);
        counts
            .iter()
            .filter(|&&(m, c)| keep(m) && c == max && max > 0)
            .copied()
            .collect::<Vec<_>>()
    };
    Ok(MultiplicityTable {
        x,
        overall: best(&|_| true),
        nontrivial: best(&|m| m >= 2),
        even: best(&|m| m >= 2 && m % 2 == 0),
    })
}
