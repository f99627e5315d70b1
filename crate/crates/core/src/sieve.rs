//! Segmented σ sieve.
//!
//! Each block `[lo, hi]` starts with `rem[n] = n` and `σ[n] = 1`. For every base
//! prime `p ≤ √hi` we walk its multiples in the block, divide out the full
//! power `p^e` and multiply σ by `1 + p + ⋯ + p^e`. Whatever remains in `rem`
//! afterwards is 1 or a single prime above `√hi`.
//!
//! Scans split `[1, x]` into blocks and fold them in parallel. The fold and
//! merge closures must form a monoid; rayon combines block results in index
//! order, so an order-sensitive merge (e.g. `Vec::append`) still yields
//! output independent of the thread count.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::arith::{primes_up_to, Factorization};
use crate::error::overflow;
use crate::{Error, Result};

pub const DEFAULT_BLOCK_SIZE: usize = 1 << 20;

/// Bytes per record in a block dump: `n` then `σ(n)`, both little-endian `u64`.
pub const DUMP_RECORD_BYTES: usize = 16;

/// All primes up to `limit`. Built by a full sieve, so completeness below
/// `limit` is guaranteed by construction.
#[derive(Clone, Debug)]
pub struct BasePrimes {
    limit: u64,
    primes: Vec<u64>,
}

impl BasePrimes {
    pub fn up_to(limit: u64) -> Self {
        BasePrimes {
            limit,
            primes: primes_up_to(limit),
        }
    }

    /// Base primes sufficient for sieving any block ending at or below `hi`.
    pub fn for_bound(hi: u64) -> Self {
        Self::up_to(hi.isqrt())
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveEntry {
    pub n: u64,
    pub sigma: u64,
    pub s: u64,
    /// Smallest prime factor; 1 for n = 1.
    pub spf: u64,
}

/// σ, s and smallest prime factor for every n in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveBlock {
    lo: u64,
    hi: u64,
    spf: Vec<u64>,
    sigma: Vec<u64>,
    s: Vec<u64>,
}

impl SieveBlock {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn spf(&self) -> &[u64] {
        &self.spf
    }

    pub fn sigma(&self) -> &[u64] {
        &self.sigma
    }

    pub fn s(&self) -> &[u64] {
        &self.s
    }

    pub fn get(&self, n: u64) -> Option<SieveEntry> {
        if n < self.lo || n > self.hi {
            return None;
        }
        let i = (n - self.lo) as usize;
        Some(SieveEntry {
            n,
            sigma: self.sigma[i],
            s: self.s[i],
            spf: self.spf[i],
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = SieveEntry> + '_ {
        (0..self.len()).map(move |i| SieveEntry {
            n: self.lo + i as u64,
            sigma: self.sigma[i],
            s: self.s[i],
            spf: self.spf[i],
        })
    }
}

/// Sieves a single block. `base` must cover every prime up to `√hi`.
pub fn sieve_block(lo: u64, hi: u64, base: &BasePrimes) -> Result<SieveBlock> {
    if lo == 0 || lo > hi {
        return Err(Error::Precondition(format!(
            "need 1 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if hi > 1 << 63 {
        return Err(Error::Domain(format!("sieve range end {hi} exceeds 2^63")));
    }
    let root = hi.isqrt();
    if base.limit() < root {
        return Err(Error::Precondition(format!(
            "base primes reach {} but the block needs primes up to {root}",
            base.limit()
        )));
    }
    let len = usize::try_from(hi - lo + 1)
        .map_err(|_| Error::Domain("block too large for this platform".into()))?;
    let mut rem: Vec<u64> = (lo..=hi).collect();
    let mut sigma = vec![1u64; len];
    let mut spf = vec![0u64; len];

    for &p in base.primes() {
        if p > root {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut i = (first - lo) as usize;
        let step = p as usize;
        while i < len {
            let mut r = rem[i] / p;
            let mut pk = p;
            let mut term = 1 + p;
            while r.is_multiple_of(p) {
                r /= p;
                pk *= p;
                term += pk;
            }
            rem[i] = r;
            sigma[i] = sigma[i]
                .checked_mul(term)
                .ok_or_else(|| overflow(format!("sigma({}) exceeds 64 bits", lo + i as u64)))?;
            if spf[i] == 0 {
                spf[i] = p;
            }
            i += step;
        }
    }

    let mut s = vec![0u64; len];
    for i in 0..len {
        let n = lo + i as u64;
        let r = rem[i];
        if r > 1 {
            sigma[i] = sigma[i]
                .checked_mul(r + 1)
                .ok_or_else(|| overflow(format!("sigma({n}) exceeds 64 bits")))?;
            if spf[i] == 0 {
                spf[i] = r;
            }
        }
        if n == 1 {
            spf[i] = 1;
        }
        s[i] = sigma[i] - n;
    }
    Ok(SieveBlock {
        lo,
        hi,
        spf,
        sigma,
        s,
    })
}

/// Block size and parallelism for range scans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub block_size: usize,
    /// Worker threads; `None` uses rayon's global pool (all cores).
    pub threads: Option<usize>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            block_size: DEFAULT_BLOCK_SIZE,
            threads: None,
        }
    }
}

impl ScanConfig {
    pub fn single_threaded() -> Self {
        ScanConfig {
            threads: Some(1),
            ..Self::default()
        }
    }

    pub fn with_threads(threads: usize) -> Self {
        ScanConfig {
            threads: Some(threads),
            ..Self::default()
        }
    }

    pub fn with_block_size(mut self, block_size: usize) -> Self {
        self.block_size = block_size;
        self
    }
}

/// Runs `f` inside a pool capped at `cfg.threads`, or directly when uncapped.
pub fn run_in_pool<R: Send>(cfg: &ScanConfig, f: impl FnOnce() -> R + Send) -> Result<R> {
    match cfg.threads {
        None => Ok(f()),
        Some(0) => Err(Error::Precondition("thread count must be positive".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Runtime(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn block_bounds(lo: u64, hi: u64, block_size: usize) -> Result<Vec<(u64, u64)>> {
    if block_size == 0 {
        return Err(Error::Precondition("block size must be positive".into()));
    }
    let step = block_size as u64;
    let mut out = Vec::new();
    let mut start = lo;
    loop {
        let end = start.saturating_add(step - 1).min(hi);
        out.push((start, end));
        if end == hi {
            break;
        }
        start = end + 1;
    }
    Ok(out)
}

/// Folds every block of `[lo, hi]` into an aggregate.
pub fn scan_blocks<A, I, V, M>(
    lo: u64,
    hi: u64,
    cfg: &ScanConfig,
    identity: I,
    visit_block: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &SieveBlock) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if lo == 0 || lo > hi {
        return Err(Error::Precondition(format!(
            "need 1 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    let base = BasePrimes::for_bound(hi);
    let bounds = block_bounds(lo, hi, cfg.block_size)?;
    run_in_pool(cfg, || {
        bounds
            .par_iter()
            .map(|&(a, b)| {
                let block = sieve_block(a, b, &base)?;
                let mut acc = identity();
                visit_block(&mut acc, &block);
                Ok(acc)
            })
            .try_reduce(&identity, |x, y| Ok(merge(x, y)))
    })?
}

/// Visits every n in `[lo, hi]` exactly once.
pub fn scan_range<A, I, V, M>(
    lo: u64,
    hi: u64,
    cfg: &ScanConfig,
    identity: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, SieveEntry) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    scan_blocks(
        lo,
        hi,
        cfg,
        identity,
        |acc, block| {
            for e in block.iter() {
                visit(acc, e);
            }
        },
        merge,
    )
}

/// Visits every n in `[1, x]` with `(n, σ(n), s(n), spf(n))`.
pub fn sieve_scan<A, I, V, M>(
    x: u64,
    cfg: &ScanConfig,
    identity: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, SieveEntry) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if x == 0 {
        return Err(Error::Precondition("scan bound must be at least 1".into()));
    }
    scan_range(1, x, cfg, identity, visit, merge)
}

/// Sequential block iterator over `[lo, hi]`, for streaming consumers.
pub fn blocks(
    lo: u64,
    hi: u64,
    block_size: usize,
) -> Result<impl Iterator<Item = Result<SieveBlock>>> {
    if lo == 0 || lo > hi {
        return Err(Error::Precondition(format!(
            "need 1 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    let base = BasePrimes::for_bound(hi);
    let bounds = block_bounds(lo, hi, block_size)?;
    Ok(bounds
        .into_iter()
        .map(move |(a, b)| sieve_block(a, b, &base)))
}

/// Writes `(n, σ(n))` records for a block.
pub fn write_dump<W: Write>(block: &SieveBlock, out: &mut W) -> Result<()> {
    let mut buf = Vec::with_capacity(block.len() * DUMP_RECORD_BYTES);
    for e in block.iter() {
        buf.extend_from_slice(&e.n.to_le_bytes());
        buf.extend_from_slice(&e.sigma.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_dump<R: Read>(input: &mut R) -> Result<Vec<(u64, u64)>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() % DUMP_RECORD_BYTES != 0 {
        return Err(Error::Parse(format!(
            "dump length {} is not a multiple of {DUMP_RECORD_BYTES}",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(DUMP_RECORD_BYTES)
        .map(|rec| {
            let n = u64::from_le_bytes(rec[..8].try_into().unwrap());
            let sigma = u64::from_le_bytes(rec[8..].try_into().unwrap());
            (n, sigma)
        })
        .collect())
}

/// Smallest-prime-factor table for `[0, limit]`, used where whole
/// factorizations are needed for every n in a scan.
#[derive(Clone, Debug)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > u32::MAX as u64 {
            return Err(Error::Domain(format!(
                "spf table limit {limit} exceeds 2^32"
            )));
        }
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let j = i * p as usize;
                if p > si || j >= len {
                    break;
                }
                spf[j] = p;
            }
        }
        Ok(SpfTable { spf })
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    /// Factors `1 ≤ n ≤ limit` by repeated lookup.
    pub fn factorize(&self, n: u64) -> Factorization {
        assert!(n >= 1 && n <= self.limit(), "n = {n} outside spf table");
        let mut primes = Vec::new();
        let mut r = n;
        while r > 1 {
            let p = self.spf(r);
            primes.push(p);
            r /= p;
        }
        Factorization::from_prime_multiset(n, primes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;

    #[test]
    fn first_ten_sigmas() {
        let block = sieve_block(1, 10, &BasePrimes::for_bound(10)).unwrap();
        assert_eq!(block.sigma(), &[1, 3, 4, 7, 6, 12, 8, 15, 13, 18]);
        assert_eq!(block.spf(), &[1, 2, 3, 2, 5, 2, 7, 2, 3, 2]);
        assert_eq!(block.s()[0], 0);
    }

    #[test]
    fn single_prime_block() {
        let p = 1_000_003;
        let block = sieve_block(p, p, &BasePrimes::for_bound(p)).unwrap();
        let e = block.get(p).unwrap();
        assert_eq!((e.s, e.spf), (1, p));
    }

    #[test]
    fn insufficient_base_primes_rejected() {
        let base = BasePrimes::up_to(10);
        assert!(matches!(
            sieve_block(1, 1000, &base),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            sieve_block(5, 4, &base),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            sieve_block(0, 4, &base),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn spf_marks_primes_exactly() {
        let block = sieve_block(2, 5000, &BasePrimes::for_bound(5000)).unwrap();
        for e in block.iter() {
            assert_eq!(e.spf == e.n, arith::is_prime(e.n), "n = {}", e.n);
        }
    }

    #[test]
    fn perfect_numbers_up_to_ten() {
        let count = sieve_scan(
            10,
            &ScanConfig::default(),
            || 0u64,
            |acc, e| *acc += u64::from(e.s == e.n),
            |a, b| a + b,
        )
        .unwrap();
        assert_eq!(count, 1);
    }

    #[test]
    fn scan_of_one_sees_singleton() {
        let seen = sieve_scan(
            1,
            &ScanConfig::default(),
            Vec::new,
            |v, e| v.push(e),
            |mut a, mut b| {
                a.append(&mut b);
                a
            },
        )
        .unwrap();
        assert_eq!(
            seen,
            vec![SieveEntry {
                n: 1,
                sigma: 1,
                s: 0,
                spf: 1
            }]
        );
    }

    #[test]
    fn block_size_does_not_change_output() {
        let collect = |bs: usize| {
            scan_range(
                1,
                20_000,
                &ScanConfig::default().with_block_size(bs),
                Vec::new,
                |v, e| v.push(e),
                |mut a, mut b| {
                    a.append(&mut b);
                    a
                },
            )
            .unwrap()
        };
        let reference = collect(DEFAULT_BLOCK_SIZE);
        assert_eq!(reference.len(), 20_000);
        for bs in [1, 7, 1000, 4096] {
            assert_eq!(collect(bs), reference, "block size {bs}");
        }
    }

    #[test]
    fn dump_round_trip() {
        let block = sieve_block(100, 199, &BasePrimes::for_bound(199)).unwrap();
        let mut buf = Vec::new();
        write_dump(&block, &mut buf).unwrap();
        assert_eq!(buf.len(), 100 * DUMP_RECORD_BYTES);
        let recs = read_dump(&mut buf.as_slice()).unwrap();
        assert_eq!(recs[0], (100, 217));
        assert!(read_dump(&mut &buf[..15]).is_err());
    }

    #[test]
    fn spf_table_factorizes() {
        let t = SpfTable::new(10_000).unwrap();
        for n in 1..=10_000 {
            assert_eq!(t.factorize(n), arith::factorize(n).unwrap());
        }
    }
}
