//! Exceptional-set classification and preimage counts for sparse sets.
//!
//! For `n ≤ x` and a small parameter `ε = ε(x)` the exceptional set `ℰ` holds
//! every `n` satisfying at least one of
//!
//! * (a) no prime factor in `(1, log x]`,
//! * (b) a divisor in `(x^{1/2−10ε}, x^{1/2+10ε})`,
//! * (c) squarefull part above `x^{2ε}`,
//! * (d) `n ≤ √x`.
//!
//! `log` is the natural logarithm. ε is an exact rational, and every power of
//! `x` is turned into an integer threshold once per `x` through exact integer
//! roots, so no per-n comparison touches floating point.

use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, Factorization};
use crate::sieve::{run_in_pool, sieve_scan, ScanConfig, SpfTable};
use crate::{Error, Rational, Result};

/// ε is rounded up to this denominator so that it never drops below
/// `1/ln ln x`.
pub const EPSILON_DENOMINATOR: i128 = 10_000;

/// Exact thresholds raise `x` to powers with this denominator, so it is
/// bounded to keep them cheap.
pub const MAX_EPSILON_DENOMINATOR: i128 = 1_000_000;

/// Default `ε(x) = 1/ln ln x` rounded up to a multiple of 1/10⁴, max-ed with
/// `override_eps` when given.
pub fn epsilon_of(x: u64, override_eps: Option<&Rational>) -> Result<Rational> {
    if x < 16 {
        return Err(Error::Domain(format!("epsilon(x) needs x >= 16, got {x}")));
    }
    let lnln = (x as f64).ln().ln();
    let floor = Rational::new(
        (EPSILON_DENOMINATOR as f64 / lnln).ceil() as i128,
        EPSILON_DENOMINATOR,
    );
    Ok(match override_eps {
        Some(e) if *e > floor => *e,
        _ => floor,
    })
}

/// `floor(ln x)`.
fn floor_ln(x: u64) -> u64 {
    // e^L is irrational for L ≥ 1, so x never sits on a boundary
    (x as f64).ln().floor() as u64
}

fn exact_power(x: u64, r: &Rational) -> (BigUint, bool) {
    let (u, v) = (*r.numer(), *r.denom());
    let pow = BigUint::from(x).pow(u as u32);
    let root = pow.nth_root(v as u32);
    let exact = root.pow(v as u32) == pow;
    (root, exact)
}

/// `floor(x^r)`, saturating at `cap`.
fn floor_power(x: u64, r: &Rational, cap: u128) -> u128 {
    if *r.numer() < 0 {
        return 0;
    }
    if *r > Rational::from_integer(2) {
        return cap;
    }
    let (root, _) = exact_power(x, r);
    root.to_u128().unwrap_or(cap).min(cap)
}

/// `ceil(x^r)`, saturating at `cap`.
fn ceil_power(x: u64, r: &Rational, cap: u128) -> u128 {
    if *r.numer() <= 0 {
        return 1;
    }
    if *r > Rational::from_integer(2) {
        return cap;
    }
    let (root, exact) = exact_power(x, r);
    let c = if exact { root } else { root + BigUint::one() };
    c.to_u128().unwrap_or(cap).min(cap)
}

/// Integer forms of the four thresholds at a given `x` and ε.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalThresholds {
    pub x: u64,
    pub epsilon: Rational,
    /// Primes up to this are "small" for (a).
    pub log_floor: u64,
    /// (b) holds for a divisor `d` with `window_lo < d² < window_hi`.
    pub window_lo: u128,
    pub window_hi: u128,
    /// (c) holds when the squarefull part exceeds this.
    pub squarefull_floor: u64,
    /// (d) holds when `n ≤ sqrt_floor`.
    pub sqrt_floor: u64,
}

impl ExceptionalThresholds {
    pub fn new(x: u64, epsilon: &Rational) -> Result<Self> {
        if x < 2 {
            return Err(Error::Domain(format!("x must be at least 2, got {x}")));
        }
        if *epsilon <= Rational::zero() {
            return Err(Error::Precondition("epsilon must be positive".into()));
        }
        if *epsilon.denom() > MAX_EPSILON_DENOMINATOR {
            return Err(Error::Precondition(format!(
                "epsilon denominator must be at most {MAX_EPSILON_DENOMINATOR}"
            )));
        }
        let twenty = Rational::from_integer(20);
        let one = Rational::one();
        // d ≤ n ≤ x, so nothing above x² matters
        let cap = (x as u128) * (x as u128) + 1;
        let window_lo = floor_power(x, &(one - twenty * epsilon), cap);
        let window_hi = ceil_power(x, &(one + twenty * epsilon), cap);
        let squarefull_floor =
            floor_power(x, &(Rational::from_integer(2) * epsilon), x as u128) as u64;
        Ok(ExceptionalThresholds {
            x,
            epsilon: *epsilon,
            log_floor: floor_ln(x),
            window_lo,
            window_hi,
            squarefull_floor,
            sqrt_floor: x.sqrt(),
        })
    }

    fn in_window(&self, d: u64) -> bool {
        let sq = d as u128 * d as u128;
        self.window_lo < sq && sq < self.window_hi
    }

    pub fn classify(&self, f: &Factorization) -> ExceptionalFlags {
        let n = f.n();
        ExceptionalFlags {
            n,
            flag_a: f.smallest_prime().is_none_or(|p| p > self.log_floor),
            flag_b: has_divisor_where(f, |d| self.in_window(d)),
            flag_c: f.squarefull_part() > self.squarefull_floor,
            flag_d: n <= self.sqrt_floor,
            epsilon_used: self.epsilon,
        }
    }
}

/// Walks the divisors of `n` until one satisfies `pred`.
fn has_divisor_where(f: &Factorization, pred: impl Fn(u64) -> bool) -> bool {
    fn go(parts: &[crate::arith::PrimePower], d: u64, pred: &dyn Fn(u64) -> bool) -> bool {
        let Some((first, rest)) = parts.split_first() else {
            return pred(d);
        };
        let mut d = d;
        for e in 0..=first.exponent {
            if e > 0 {
                d *= first.prime;
            }
            if go(rest, d, pred) {
                return true;
            }
        }
        false
    }
    go(f.factors(), 1, &pred)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalFlags {
    pub n: u64,
    pub flag_a: bool,
    pub flag_b: bool,
    pub flag_c: bool,
    pub flag_d: bool,
    pub epsilon_used: Rational,
}

impl ExceptionalFlags {
    pub fn any(&self) -> bool {
        self.flag_a || self.flag_b || self.flag_c || self.flag_d
    }
}

pub fn classify_exceptional(n: u64, x: u64, epsilon: &Rational) -> Result<ExceptionalFlags> {
    if n == 0 || n > x {
        return Err(Error::Precondition(format!(
            "need 1 <= n <= x, got n = {n}, x = {x}"
        )));
    }
    let f = crate::arith::factorize(n)?;
    Ok(ExceptionalThresholds::new(x, epsilon)?.classify(&f))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalRow {
    pub x: u64,
    pub epsilon: Rational,
    /// `#ℰ`.
    pub count: u64,
    pub density: f64,
    pub count_a: u64,
    pub count_b: u64,
    pub count_c: u64,
    pub count_d: u64,
}

#[derive(Clone, Copy, Default)]
struct FlagCounts {
    any: u64,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

impl FlagCounts {
    fn add(&mut self, f: &ExceptionalFlags) {
        self.any += f.any() as u64;
        self.a += f.flag_a as u64;
        self.b += f.flag_b as u64;
        self.c += f.flag_c as u64;
        self.d += f.flag_d as u64;
    }

    fn merge(mut self, o: FlagCounts) -> FlagCounts {
        self.any += o.any;
        self.a += o.a;
        self.b += o.b;
        self.c += o.c;
        self.d += o.d;
        self
    }
}

fn check_ascending(xs: &[u64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::Precondition("x list is empty".into()));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "x list must be strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Exact `#ℰ` at each `x`, with ε from [`epsilon_of`] at that `x`.
pub fn exceptional_density(
    x_list: &[u64],
    eps_override: Option<&Rational>,
    cfg: &ScanConfig,
) -> Result<Vec<ExceptionalRow>> {
    check_ascending(x_list)?;
    let thresholds: Vec<ExceptionalThresholds> = x_list
        .iter()
        .map(|&x| ExceptionalThresholds::new(x, &epsilon_of(x, eps_override)?))
        .collect::<Result<_>>()?;
    let xmax = *x_list.last().unwrap();
    let table = SpfTable::new(xmax)?;
    let chunk = cfg.block_size.max(1) as u64;
    let chunks: Vec<u64> = (0..xmax.div_ceil(chunk)).collect();
    let counts = run_in_pool(cfg, || {
        chunks
            .par_iter()
            .map(|&c| {
                let mut acc = vec![FlagCounts::default(); x_list.len()];
                let lo = c * chunk + 1;
                let hi = ((c + 1) * chunk).min(xmax);
                for n in lo..=hi {
                    let f = table.factorize(n);
                    for (i, t) in thresholds.iter().enumerate() {
                        if n <= t.x {
                            acc[i].add(&t.classify(&f));
                        }
                    }
                }
                acc
            })
            .reduce(
                || vec![FlagCounts::default(); x_list.len()],
                |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
            )
    })?;
    Ok(thresholds
        .iter()
        .zip(counts)
        .map(|(t, c)| ExceptionalRow {
            x: t.x,
            epsilon: t.epsilon,
            count: c.any,
            density: c.any as f64 / t.x as f64,
            count_a: c.a,
            count_b: c.b,
            count_c: c.c,
            count_d: c.d,
        })
        .collect())
}

/// A finite set read from a file, trusted to be complete up to
/// `complete_through`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitSet {
    values: Vec<u64>,
    complete_through: u64,
}

impl ExplicitSet {
    /// `values` must be strictly ascending. Coverage defaults to the last
    /// value.
    pub fn new(values: Vec<u64>, complete_through: Option<u64>) -> Result<Self> {
        if let Some(w) = values.windows(2).find(|w| w[0] >= w[1]) {
            let what = if w[0] == w[1] {
                "duplicate"
            } else {
                "out-of-order"
            };
            return Err(Error::Parse(format!(
                "{what} entry {} after {}",
                w[1], w[0]
            )));
        }
        let last = values.last().copied().unwrap_or(0);
        let complete_through = complete_through.unwrap_or(last);
        if complete_through < last {
            return Err(Error::Parse(format!(
                "complete_through {complete_through} is below the last entry {last}"
            )));
        }
        Ok(ExplicitSet {
            values,
            complete_through,
        })
    }

    /// One decimal integer per line. Blank lines and `#` comments are
    /// skipped; `# complete_through: N` extends coverage past the last entry.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut complete_through = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("complete_through:") {
                    let v = v.trim();
                    complete_through = Some(v.parse::<u64>().map_err(|_| {
                        Error::Parse(format!("line {}: bad complete_through {v:?}", i + 1))
                    })?);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            values.push(
                line.parse::<u64>().map_err(|_| {
                    Error::Parse(format!("line {}: not an integer: {line:?}", i + 1))
                })?,
            );
        }
        Self::new(values, complete_through)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn complete_through(&self) -> u64 {
        self.complete_through
    }

    pub fn contains(&self, v: u64) -> bool {
        self.values.binary_search(&v).is_ok()
    }
}

/// A target set `𝒜` for preimage counting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetSpec {
    /// All positive integers.
    All,
    Primes,
    Palindromes {
        base: u32,
    },
    Squares,
    KthPowers {
        k: u32,
    },
    Explicit {
        label: String,
        set: ExplicitSet,
    },
}

impl SetSpec {
    /// `all`, `primes`, `palindromes[:BASE]`, `squares`, `powers:K`, or
    /// `file:PATH`.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, arg) = match text.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (text, None),
        };
        let int_arg = |what: &str| -> Result<u32> {
            let a = arg.ok_or_else(|| Error::Parse(format!("{kind} needs :{what}")))?;
            a.parse()
                .map_err(|_| Error::Parse(format!("bad {what} {a:?}")))
        };
        let spec = match kind {
            "all" => SetSpec::All,
            "primes" => SetSpec::Primes,
            "squares" => SetSpec::Squares,
            "palindromes" => SetSpec::Palindromes {
                base: if arg.is_some() { int_arg("base")? } else { 10 },
            },
            "powers" => SetSpec::KthPowers { k: int_arg("k")? },
            "file" => {
                let path = arg.ok_or_else(|| Error::Parse("file needs :PATH".into()))?;
                SetSpec::Explicit {
                    label: path.to_string(),
                    set: ExplicitSet::load(Path::new(path))?,
                }
            }
            _ => return Err(Error::Parse(format!("unknown set {text:?}"))),
        };
        if (kind == "all" || kind == "primes" || kind == "squares") && arg.is_some() {
            return Err(Error::Parse(format!("{kind} takes no argument")));
        }
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        match self {
            SetSpec::Palindromes { base } if !(2..=36).contains(base) => Err(Error::Precondition(
                format!("palindrome base must be in 2..=36, got {base}"),
            )),
            SetSpec::KthPowers { k } if *k < 2 => Err(Error::Precondition(format!(
                "power k must be at least 2, got {k}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            SetSpec::All => "all".into(),
            SetSpec::Primes => "primes".into(),
            SetSpec::Palindromes { base } => format!("palindromes:{base}"),
            SetSpec::Squares => "squares".into(),
            SetSpec::KthPowers { k } => format!("powers:{k}"),
            SetSpec::Explicit { label, .. } => format!("file:{label}"),
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        match self {
            SetSpec::All => v >= 1,
            SetSpec::Primes => is_prime(v),
            SetSpec::Palindromes { base } => v >= 1 && is_palindrome(v, *base as u64),
            SetSpec::Squares => v >= 1 && v.sqrt().pow(2) == v,
            SetSpec::KthPowers { k } => v >= 1 && v.nth_root(*k).checked_pow(*k) == Some(v),
            SetSpec::Explicit { set, .. } => set.contains(v),
        }
    }
}

pub fn is_palindrome(mut v: u64, base: u64) -> bool {
    let mut digits = Vec::with_capacity(64);
    while v > 0 {
        digits.push(v % base);
        v /= base;
    }
    digits.iter().eq(digits.iter().rev())
}

pub const SAMPLE_SIZE: usize = 20;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Keeps the `SAMPLE_SIZE` witnesses with the smallest hash: a uniform
/// sample that does not depend on how the scan was split.
#[derive(Clone, Default)]
struct BottomK(Vec<(u64, u64)>);

impl BottomK {
    fn offer(&mut self, n: u64) {
        let key = (splitmix64(n), n);
        if self.0.len() == SAMPLE_SIZE && key >= *self.0.last().unwrap() {
            return;
        }
        let at = self.0.partition_point(|k| *k < key);
        self.0.insert(at, key);
        self.0.truncate(SAMPLE_SIZE);
    }

    fn merge(mut self, other: BottomK) -> BottomK {
        self.0.extend(other.0);
        self.0.sort_unstable();
        self.0.truncate(SAMPLE_SIZE);
        self
    }

    fn into_sorted(self) -> Vec<u64> {
        let mut v: Vec<u64> = self.0.into_iter().map(|(_, n)| n).collect();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreimageCountRow {
    pub set: String,
    pub x: u64,
    /// `#{n ≤ x : s(n) ∈ 𝒜}`.
    pub count: u64,
    pub density: f64,
    /// Largest `s(n)` over `n ≤ x`; the set must be decided up to here.
    pub max_s: u64,
    /// Up to 20 witnesses, ascending.
    pub sample: Vec<u64>,
}

#[derive(Clone, Default)]
struct CountAcc {
    count: u64,
    max_s: u64,
    sample: BottomK,
}

/// Preimage counts for one set at each `x` of a strictly ascending list,
/// from a single scan.
pub fn preimage_counts(
    set: &SetSpec,
    x_list: &[u64],
    cfg: &ScanConfig,
) -> Result<Vec<PreimageCountRow>> {
    check_ascending(x_list)?;
    set.validate()?;
    let xmax = *x_list.last().unwrap();
    let width = x_list.len();
    let accs = sieve_scan(
        xmax,
        cfg,
        || vec![CountAcc::default(); width],
        |acc: &mut Vec<CountAcc>, e| {
            let first = x_list.partition_point(|&x| x < e.n);
            let hit = set.contains(e.s);
            for a in &mut acc[first..] {
                a.max_s = a.max_s.max(e.s);
                if hit {
                    a.count += 1;
                    a.sample.offer(e.n);
                }
            }
        },
        |a, b| {
            a.into_iter()
                .zip(b)
                .map(|(x, y)| CountAcc {
                    count: x.count + y.count,
                    max_s: x.max_s.max(y.max_s),
                    sample: x.sample.merge(y.sample),
                })
                .collect()
        },
    )?;
    if let SetSpec::Explicit { set: explicit, .. } = set {
        let needed = accs.last().map_or(0, |a| a.max_s);
        if explicit.complete_through() < needed {
            return Err(Error::IncompleteSet(format!(
                "set is complete through {} but s(n) reaches {needed} for n <= {xmax}",
                explicit.complete_through()
            )));
        }
    }
    Ok(x_list
        .iter()
        .zip(accs)
        .map(|(&x, a)| PreimageCountRow {
            set: set.name(),
            x,
            count: a.count,
            density: a.count as f64 / x as f64,
            max_s: a.max_s,
            sample: a.sample.into_sorted(),
        })
        .collect())
}

pub fn preimage_count(set: &SetSpec, x: u64, cfg: &ScanConfig) -> Result<PreimageCountRow> {
    Ok(preimage_counts(set, &[x], cfg)?.remove(0))
}
