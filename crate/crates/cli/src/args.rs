use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use supercong_core::ring::is_prime;
use supercong_core::verifier::CheckId;
use supercong_core::Modulus;

use crate::report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "supercong",
    version,
    about = "Multiple harmonic sums modulo prime powers and checks of their congruences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run congruence checks over a grid of primes and exponents.
    Verify(VerifyArgs),
    /// Compute one sum S_n^(k)(p^r).
    Compute(ComputeArgs),
    /// Print a Bernoulli number, exactly or modulo p^m.
    Bernoulli(BernoulliArgs),
    /// Collect ratios S_n^(1)(p^r) / (p^(r-1) B_{p-n}) mod p.
    Scan(ScanArgs),
    /// Inspect or delete the result cache.
    Cache(CacheArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CacheOpt {
    /// Cache file (JSON lines). Defaults to $SUPERCONG_CACHE; no cache when neither is set.
    #[arg(long, global = true)]
    pub cache_path: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated check ids; all ids when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_id)]
    pub ids: Vec<CheckId>,
    /// Primes as a list and/or inclusive ranges, e.g. `7,11,13` or `11..31`.
    #[arg(long, default_value = "5,7,11,13", value_parser = parse_primes)]
    pub primes: ::std::vec::Vec<u64>,
    /// Exponents r as a list and/or inclusive ranges.
    #[arg(long, default_value = "1..2", value_parser = parse_u32_set)]
    pub r: ::std::vec::Vec<u32>,
    /// Override the number of parts (or n-dependent grid) for checks that take n.
    #[arg(long, value_parser = parse_u32_set)]
    pub n: Option<::std::vec::Vec<u32>>,
    /// Override the multiplier k for checks that take k.
    #[arg(long, value_parser = parse_u64_set)]
    pub k: Option<::std::vec::Vec<u64>>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    /// Stop scheduling checks after the first failure.
    #[arg(long)]
    pub fail_fast: bool,
    /// Treat parameters outside a statement's hypotheses as failures.
    #[arg(long)]
    pub strict_hypotheses: bool,
    /// Report every elapsed time as 0 so output is reproducible byte for byte.
    #[arg(long)]
    pub no_timings: bool,
    #[command(flatten)]
    pub cache: CacheOpt,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    #[default]
    Auto,
    Bruteforce,
    Convolution,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum SimpleFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    #[arg(long, value_parser = parse_prime)]
    pub p: u64,
    #[arg(long)]
    pub r: u32,
    /// Residue ring exponent; defaults to r.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, value_enum, default_value_t)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t)]
    pub format: SimpleFormat,
    #[command(flatten)]
    pub cache: CacheOpt,
}

#[derive(Debug, Args)]
pub struct BernoulliArgs {
    pub n: u64,
    /// Reduce modulo `p^m` (or `p`).
    #[arg(long = "mod", value_parser = parse_modulus)]
    pub modulus: Option<Modulus>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Odd number of parts, at least 3.
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_parser = parse_primes)]
    pub primes: ::std::vec::Vec<u64>,
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: SimpleFormat,
    #[command(flatten)]
    pub cache: CacheOpt,
}

#[derive(Debug, Args)]
pub struct CacheArgs {
    #[command(subcommand)]
    pub action: CacheAction,
    #[command(flatten)]
    pub cache: CacheOpt,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum CacheAction {
    /// Count records in the cache file.
    Stats,
    /// Delete the cache file.
    Clear,
}

fn parse_id(s: &str) -> Result<CheckId, String> {
    s.parse().map_err(|e: supercong_core::Error| e.to_string())
}

/// Parses `a`, `a..b` (inclusive) and comma-separated mixtures of both.
fn parse_set(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range {item}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(item)?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_primes(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let set = parse_set(item)?;
        if item.contains("..") {
            out.extend(set.into_iter().filter(|&p| is_prime(p)));
        } else if let Some(&p) = set.iter().find(|&&p| !is_prime(p)) {
            return Err(format!("{p} is not prime"));
        } else {
            out.extend(set);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(format!("no primes in {s}"));
    }
    Ok(out)
}

fn parse_u64_set(s: &str) -> Result<Vec<u64>, String> {
    parse_set(s)
}

fn parse_u32_set(s: &str) -> Result<Vec<u32>, String> {
    parse_set(s)?
        .into_iter()
        .map(|v| u32::try_from(v).map_err(|_| format!("{v} is too large")))
        .collect()
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

/// `p^m` or `p`.
fn parse_modulus(s: &str) -> Result<Modulus, String> {
    let (p, m) = match s.split_once('^') {
        Some((p, m)) => (p, m.trim().parse::<u32>().map_err(|e| format!("exponent {m:?}: {e}"))?),
        None => (s, 1),
    };
    let p = parse_prime(p)?;
    Modulus::new(p, m).map_err(|e| e.to_string())
}
