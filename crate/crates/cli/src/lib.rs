//! Command-line front end for `aliquot-core`.
//!
//! Every subcommand renders a typed result as CSV (default) or JSON. The
//! rendered text is the run's primary output: it is what `--out` writes,
//! what `--manifest` digests, and what `replay` reproduces.

pub mod manifest;
pub mod output;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use aliquot_core::construct::{self, Constraint, WitnessJson};
use aliquot_core::experiments::{self, SetSpec};
use aliquot_core::rational::{format_rational, parse_rational};
use aliquot_core::sieve::{self, ScanConfig, DEFAULT_BLOCK_SIZE};
use aliquot_core::{arith, fiber, kna, Rational};
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use output::*;

/// Directory for cached sieve dumps.
pub const SIEVE_CACHE_ENV: &str = "ALIQUOT_SIEVE_CACHE";

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[command(
    name = "aliquot",
    version,
    about = "Exact experiments on the sum-of-proper-divisors function"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write a run manifest (JSON) here.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Worker threads for scans; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_BLOCK_SIZE, hide = true)]
    pub block_size: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn constraint_arg(s: &str) -> Result<Constraint, String> {
    Constraint::parse(s).map_err(|e| e.to_string())
}

/// Comma-separated integers taken as one argument, so that a leading `-`
/// cannot swallow the options after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResidueList(pub Vec<i128>);

fn residue_list(s: &str) -> Result<ResidueList, String> {
    s.split(',')
        .map(|v| v.trim().parse::<i128>().map_err(|e| format!("{v:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(ResidueList)
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
pub enum Command {
    /// σ, s, τ, ω, rad, extreme primes and squarefull part of n.
    Profile { n: u64 },
    /// Sieve σ over [1, x] and summarise; optionally dump (n, σ(n)) records.
    Sieve {
        x: u64,
        /// Binary dump of little-endian (n, σ(n)) u64 pairs.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// All n ≤ x with s(n) = m, for each m in a comma-separated list.
    Fiber {
        #[arg(value_delimiter = ',', num_args = 1, required = true)]
        m: Vec<u64>,
        x: u64,
    },
    /// Preimages of m of the form pq or p².
    Semiprime { m: u64 },
    /// Untouchable numbers up to y.
    Untouchable { y: u64 },
    /// Targets with the most preimages among n ≤ x.
    Multiplicity { x: u64 },
    /// Values of (bp+a)(bq+a) hit by several prime pairs p < q ≤ prime_bound.
    Collision {
        b: i128,
        #[arg(allow_hyphen_values = true)]
        a: i128,
        prime_bound: u64,
        /// Keep at most this many collisions.
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Clustered preimages of one target inside ((1−ε)αm, (1+ε)αm).
    Cluster {
        #[arg(value_parser = rational_arg)]
        alpha: Rational,
        #[arg(value_parser = rational_arg)]
        epsilon: Rational,
        prime_bound: u64,
        /// Seed n0; by default the least n0 whose s(n0)/n0 fits α and ε.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1_000_000)]
        search_bound: u64,
        /// Drop a lower bound on the primes (primes_above_seed,
        /// primes_above_ratio_bound); repeatable.
        #[arg(long = "waive", value_parser = constraint_arg)]
        waive: Vec<Constraint>,
    },
    /// Solutions n ≤ x of σ(n) = kn + a, classified regular or sporadic.
    Kna {
        k: u64,
        #[arg(allow_hyphen_values = true)]
        a: i128,
        x: u64,
    },
    /// Sporadic and regular counts of σ(n) = kn + a at each x.
    Sporadic {
        k: u64,
        #[arg(allow_hyphen_values = true)]
        a: i128,
        #[arg(value_delimiter = ',', num_args = 1, required = true)]
        x: Vec<u64>,
    },
    /// A value a with many solutions n ≤ a of σ(n) = kn + a.
    KnaWitness { k: u64, prime_bound: u64 },
    /// Counts of n ∈ [2, x] with σ(n) ≡ a (mod n), per a.
    Congruence {
        /// Comma-separated, negatives allowed.
        #[arg(value_parser = residue_list, allow_hyphen_values = true)]
        a: ResidueList,
        x: u64,
    },
    /// Preimage counts of a target set: all, primes, palindromes[:BASE],
    /// squares, powers:K or file:PATH.
    Density {
        set: String,
        #[arg(value_delimiter = ',', num_args = 1, required = true)]
        x: Vec<u64>,
    },
    /// Exceptional-set counts at each x.
    Exceptional {
        #[arg(value_delimiter = ',', num_args = 1, required = true)]
        x: Vec<u64>,
        /// Lower bound on ε(x); the default 1/ln ln x still applies as a floor.
        #[arg(long, value_parser = rational_arg)]
        epsilon: Option<Rational>,
    },
    /// Re-run a manifest and check that the output digest matches.
    Replay { manifest: PathBuf },
}

impl GlobalOpts {
    pub fn scan_config(&self) -> ScanConfig {
        ScanConfig {
            block_size: self.block_size,
            threads: self.threads,
        }
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv<R>(header: &str, rows: &[R], line: impl Fn(&R) -> String) -> String {
    let mut out = String::new();
    if !header.is_empty() {
        out.push_str(header);
        out.push('\n');
    }
    for r in rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

fn render<T: Serialize + ?Sized>(
    format: Format,
    value: &T,
    csv_text: impl FnOnce() -> String,
) -> anyhow::Result<String> {
    Ok(match format {
        Format::Csv => csv_text(),
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
    })
}

fn witness_csv(w: &WitnessJson) -> String {
    csv(
        "seed,k_value,target,p,q,preimage",
        &w.pairs.iter().zip(&w.preimages).collect::<Vec<_>>(),
        |(pq, n)| {
            format!(
                "{},{},{},{},{},{}",
                w.seed, w.k_value, w.target, pq[0], pq[1], n
            )
        },
    )
}

/// Runs a subcommand and returns its primary output.
pub fn execute(cli: &Cli) -> anyhow::Result<String> {
    let fmt = cli.global.format;
    let cfg = cli.global.scan_config();
    match &cli.command {
        Command::Profile { n } => {
            let p = arith::profile(*n)?;
            let o = ProfileOut {
                n: p.n,
                sigma: p.sigma,
                s: p.s,
                tau: p.tau,
                omega: p.omega,
                rad: p.rad,
                largest_prime: p.largest_prime,
                smallest_prime: p.smallest_prime,
                squarefull_part: p.squarefull_part,
            };
            render(fmt, &o, || {
                csv(
                    "n,sigma,s,tau,omega,rad,largest_prime,smallest_prime,squarefull_part",
                    &[&o],
                    |o| {
                        format!(
                            "{},{},{},{},{},{},{},{},{}",
                            o.n,
                            o.sigma,
                            o.s,
                            o.tau,
                            o.omega,
                            o.rad,
                            opt(o.largest_prime),
                            opt(o.smallest_prime),
                            o.squarefull_part
                        )
                    },
                )
            })
        }
        Command::Sieve { x, dump } => {
            let o = run_sieve(*x, dump.as_deref(), &cfg)?;
            render(fmt, &o, || {
                csv("x,sum_sigma,sum_s,max_s,argmax_s", &[&o], |o| {
                    format!(
                        "{},{},{},{},{}",
                        o.x, o.sum_sigma, o.sum_s, o.max_s, o.argmax_s
                    )
                })
            })
        }
        Command::Fiber { m, x } => {
            let rows: Vec<FiberOut> = fiber::fiber_scan_many(m, *x, &cfg)?
                .into_iter()
                .map(|r| FiberOut {
                    m: r.m,
                    x: r.x,
                    count: r.preimages.len(),
                    preimages: r.preimages,
                    complete_for_all_n: r.complete_for_all_n,
                    infinite: r.infinite,
                })
                .collect();
            render(fmt, &rows, || {
                csv("m,count,preimages", &rows, |r| {
                    format!("{},{},{}", r.m, r.count, join(&r.preimages, ";"))
                })
            })
        }
        Command::Semiprime { m } => {
            let preimages = fiber::fiber_semiprime(*m)?;
            let o = SemiprimeOut {
                m: *m,
                count: preimages.len(),
                preimages,
            };
            render(fmt, &o, || {
                csv("m,count,preimages", &[&o], |o| {
                    format!("{},{},{}", o.m, o.count, join(&o.preimages, ";"))
                })
            })
        }
        Command::Untouchable { y } => {
            let o = UntouchableOut {
                y: *y,
                untouchables: fiber::untouchables_up_to(*y, &cfg)?,
            };
            render(fmt, &o, || format!("{}\n", join(&o.untouchables, ",")))
        }
        Command::Multiplicity { x } => {
            let t = fiber::max_multiplicity_targets(*x, &cfg)?;
            let pairs = |v: &[(u64, u64)]| v.iter().map(|&(m, c)| [m, c]).collect::<Vec<_>>();
            let o = MultiplicityOut {
                x: t.x,
                overall: pairs(&t.overall),
                nontrivial: pairs(&t.nontrivial),
                even: pairs(&t.even),
            };
            render(fmt, &o, || {
                let mut rows = Vec::new();
                for (class, list) in [
                    ("overall", &o.overall),
                    ("nontrivial", &o.nontrivial),
                    ("even", &o.even),
                ] {
                    rows.extend(list.iter().map(|mc| (class, mc[0], mc[1])));
                }
                csv("class,m,count", &rows, |(c, m, n)| format!("{c},{m},{n}"))
            })
        }
        Command::Collision {
            b,
            a,
            prime_bound,
            limit,
        } => {
            let rows: Vec<CollisionOut> = construct::collision_search(*b, *a, *prime_bound, &cfg)?
                .into_iter()
                .take(*limit)
                .map(|w| CollisionOut {
                    k_value: w.k_value,
                    multiplicity: w.multiplicity,
                    pairs: w.pairs.iter().map(|&(p, q)| [p, q]).collect(),
                })
                .collect();
            render(fmt, &rows, || {
                csv("k_value,multiplicity,pairs", &rows, |r| {
                    let pairs: Vec<String> = r
                        .pairs
                        .iter()
                        .map(|pq| format!("{}*{}", pq[0], pq[1]))
                        .collect();
                    format!("{},{},{}", r.k_value, r.multiplicity, pairs.join(";"))
                })
            })
        }
        Command::Cluster {
            alpha,
            epsilon,
            prime_bound,
            seed,
            search_bound,
            waive,
        } => {
            let n0 = match seed {
                Some(n0) => *n0,
                None => construct::find_ratio_seed(
                    alpha,
                    &construct::clamp_epsilon(epsilon),
                    *search_bound,
                )?,
            };
            let w = construct::cluster_witness(alpha, epsilon, n0, *prime_bound, waive, &cfg)?
                .to_json();
            render(fmt, &w, || witness_csv(&w))
        }
        Command::Kna { k, a, x } => {
            let rows: Vec<KnaOut> = kna::solutions(*k, *a, *x, &cfg)?
                .into_iter()
                .map(|s| KnaOut {
                    k: s.k,
                    a: s.a,
                    x: *x,
                    n: s.n,
                    kind: s.kind.as_str().to_string(),
                })
                .collect();
            render(fmt, &rows, || {
                csv("k,a,x,n,kind", &rows, |r| {
                    format!("{},{},{},{},{}", r.k, r.a, r.x, r.n, r.kind)
                })
            })
        }
        Command::Sporadic { k, a, x } => {
            let rows: Vec<SporadicOut> = kna::sporadic_count_profile(*k, *a, x, &cfg)?
                .into_iter()
                .map(|r| SporadicOut {
                    k: *k,
                    a: *a,
                    x: r.x,
                    sporadic: r.sporadic,
                    regular: r.regular,
                    within_envelope: r.within_envelope,
                })
                .collect();
            render(fmt, &rows, || {
                csv("k,a,x,sporadic,regular,within_envelope", &rows, |r| {
                    format!(
                        "{},{},{},{},{},{}",
                        r.k, r.a, r.x, r.sporadic, r.regular, r.within_envelope
                    )
                })
            })
        }
        Command::KnaWitness { k, prime_bound } => {
            let w = construct::kna_witness(*k, *prime_bound, &cfg)?.to_json();
            render(fmt, &w, || witness_csv(&w))
        }
        Command::Congruence { a, x } => {
            let sweep = kna::congruence_uniformity_sweep(&a.0, *x, &cfg)?;
            let rows: Vec<CongruenceOut> = sweep
                .rows
                .into_iter()
                .map(|r| CongruenceOut {
                    a: r.a,
                    x: *x,
                    count: r.count,
                    normalized: r.normalized,
                })
                .collect();
            render(fmt, &rows, || {
                csv("a,count,normalized", &rows, |r| {
                    format!("{},{},{}", r.a, r.count, r.normalized)
                })
            })
        }
        Command::Density { set, x } => {
            let spec = SetSpec::parse(set)?;
            let rows: Vec<DensityOut> = experiments::preimage_counts(&spec, x, &cfg)?
                .into_iter()
                .map(|r| DensityOut {
                    set: r.set,
                    x: r.x,
                    count: r.count,
                    density: r.density,
                    max_s: r.max_s,
                    sample: r.sample,
                })
                .collect();
            render(fmt, &rows, || {
                csv("x,count,density", &rows, |r| {
                    format!("{},{},{}", r.x, r.count, r.density)
                })
            })
        }
        Command::Exceptional { x, epsilon } => {
            let rows: Vec<ExceptionalOut> =
                experiments::exceptional_density(x, epsilon.as_ref(), &cfg)?
                    .into_iter()
                    .map(|r| ExceptionalOut {
                        x: r.x,
                        epsilon: format_rational(&r.epsilon),
                        count: r.count,
                        density: r.density,
                        count_a: r.count_a,
                        count_b: r.count_b,
                        count_c: r.count_c,
                        count_d: r.count_d,
                    })
                    .collect();
            render(fmt, &rows, || {
                csv(
                    "x,epsilon,count,density,count_a,count_b,count_c,count_d",
                    &rows,
                    |r| {
                        format!(
                            "{},{},{},{},{},{},{},{}",
                            r.x,
                            r.epsilon,
                            r.count,
                            r.density,
                            r.count_a,
                            r.count_b,
                            r.count_c,
                            r.count_d
                        )
                    },
                )
            })
        }
        Command::Replay { manifest } => manifest::replay(manifest),
    }
}

#[derive(Clone, Copy)]
struct SieveSummary {
    sum_sigma: u128,
    sum_s: u128,
    max_s: u64,
    argmax_s: u64,
}

impl SieveSummary {
    const EMPTY: SieveSummary = SieveSummary {
        sum_sigma: 0,
        sum_s: 0,
        max_s: 0,
        argmax_s: 0,
    };

    fn add(&mut self, n: u64, sigma: u64) {
        let s = sigma - n;
        self.sum_sigma += sigma as u128;
        self.sum_s += s as u128;
        if s > self.max_s || self.argmax_s == 0 {
            self.max_s = s;
            self.argmax_s = n;
        }
    }

    fn merge(self, o: SieveSummary) -> SieveSummary {
        let (max_s, argmax_s) = match (self.argmax_s, o.argmax_s) {
            (0, _) => (o.max_s, o.argmax_s),
            (_, 0) => (self.max_s, self.argmax_s),
            _ if o.max_s > self.max_s || (o.max_s == self.max_s && o.argmax_s < self.argmax_s) => {
                (o.max_s, o.argmax_s)
            }
            _ => (self.max_s, self.argmax_s),
        };
        SieveSummary {
            sum_sigma: self.sum_sigma + o.sum_sigma,
            sum_s: self.sum_s + o.sum_s,
            max_s,
            argmax_s,
        }
    }
}

fn cache_path(x: u64) -> Option<PathBuf> {
    std::env::var_os(SIEVE_CACHE_ENV).map(|dir| Path::new(&dir).join(format!("sigma-1-{x}.bin")))
}

fn write_dump_file(x: u64, path: &Path, block_size: usize) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("partial");
    {
        let mut out = BufWriter::new(
            File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?,
        );
        for block in sieve::blocks(1, x, block_size)? {
            sieve::write_dump(&block?, &mut out)?;
        }
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn summary_from_dump(x: u64, path: &Path) -> anyhow::Result<Option<SieveSummary>> {
    let records = sieve::read_dump(&mut File::open(path)?)?;
    if records.len() as u64 != x
        || records
            .iter()
            .enumerate()
            .any(|(i, &(n, _))| n != i as u64 + 1)
    {
        return Ok(None);
    }
    let mut acc = SieveSummary::EMPTY;
    for (n, sigma) in records {
        acc.add(n, sigma);
    }
    Ok(Some(acc))
}

fn run_sieve(x: u64, dump: Option<&Path>, cfg: &ScanConfig) -> anyhow::Result<SieveOut> {
    if x == 0 {
        bail!("x must be at least 1");
    }
    let cached = cache_path(x);
    let mut summary = None;
    if let Some(path) = cached.as_deref().filter(|p| p.exists()) {
        summary = summary_from_dump(x, path)?;
    }
    let summary = match summary {
        Some(s) => s,
        None => {
            let s = sieve::sieve_scan(
                x,
                cfg,
                || SieveSummary::EMPTY,
                |acc, e| acc.add(e.n, e.sigma),
                SieveSummary::merge,
            )?;
            if let Some(path) = &cached {
                write_dump_file(x, path, cfg.block_size)?;
            }
            s
        }
    };
    if let Some(path) = dump {
        match cached.as_deref().filter(|p| p.exists()) {
            Some(c) => {
                fs::copy(c, path)
                    .with_context(|| format!("copying cache to {}", path.display()))?;
            }
            None => write_dump_file(x, path, cfg.block_size)?,
        }
    }
    Ok(SieveOut {
        x,
        sum_sigma: summary.sum_sigma,
        sum_s: summary.sum_s,
        max_s: summary.max_s,
        argmax_s: summary.argmax_s,
        dump: dump.map(|p| p.display().to_string()),
    })
}

/// Writes `text` to `--out` or stdout.
pub fn deliver(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
