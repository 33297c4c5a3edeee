//! Multiple harmonic sums
//!
//! `S = sum 1/(l_1 l_2 ... l_n)` over ordered `n`-tuples of positive integers
//! with `l_1 + ... + l_n = target`, every `l_i < bound` and, optionally,
//! `gcd(l_i, p) = 1`, evaluated in `Z/p^m`. With `target = k p^r` and
//! `bound = p^r` this is `S_n^(k)(p^r)`.
//!
//! Two independent evaluators are provided: exhaustive enumeration and the
//! coefficient of `x^target` in `f(x)^n`, `f = sum_{allowed l} x^l / l`.

mod brute;
mod harmonic;
mod poly;

use core::fmt;
use core::time::Duration;

use num_bigint::BigUint;

use crate::combinatorics::binom_exact;
use crate::ring::{is_prime, Modulus, RingElem};
use crate::{Error, Result};

pub use brute::mhs_bruteforce_with;
pub use harmonic::{distinct_tuple_sum, increasing_harmonic_sum, power_sum, HarmonicRange, SetPartitions};
pub use poly::{mhs_convolution_with, DensePoly};

/// One fully specified harmonic-sum instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MhsQuery {
    n: u32,
    target: u64,
    p: u64,
    r: u32,
    bound: u64,
    coprime: bool,
    m: u32,
}

impl MhsQuery {
    pub fn new(n: u32, target: u64, p: u64, r: u32, bound: u64, coprime: bool, m: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Usage("number of parts must be positive".into()));
        }
        if target == 0 {
            return Err(Error::Usage("target must be positive".into()));
        }
        if bound < 2 {
            return Err(Error::Usage("part bound must be at least 2".into()));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroExponent);
        }
        Ok(MhsQuery {
            n,
            target,
            p,
            r,
            bound,
            coprime,
            m,
        })
    }

    /// `S_n^(k)(p^r)` in `Z/p^r`: target `k p^r`, parts below `p^r` and prime to `p`.
    pub fn harmonic(n: u32, k: u64, p: u64, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::Usage("r must be positive".into()));
        }
        let pr = p
            .checked_pow(r)
            .ok_or_else(|| Error::Usage(alloc::format!("{p}^{r} overflows")))?;
        let target = k
            .checked_mul(pr)
            .ok_or_else(|| Error::Usage("target overflows".into()))?;
        Self::new(n, target, p, r, pr, true, r)
    }

    /// Parts prime to `p` summing to `target` with no upper bound beyond
    /// positivity, in `Z/p^m`.
    pub fn unbounded(n: u32, target: u64, p: u64, m: u32) -> Result<Self> {
        Self::new(n, target, p, 0, target.max(2), true, m)
    }

    pub fn with_modulus(mut self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroExponent);
        }
        self.m = m;
        Ok(self)
    }

    pub fn with_bound(mut self, bound: u64) -> Result<Self> {
        if bound < 2 {
            return Err(Error::Usage("part bound must be at least 2".into()));
        }
        self.bound = bound;
        Ok(self)
    }

    pub fn with_coprime(mut self, coprime: bool) -> Self {
        self.coprime = coprime;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Exponent of the prime power the query was built from (0 if none).
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn coprime(&self) -> bool {
        self.coprime
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> Result<Modulus> {
        Modulus::new(self.p, self.m)
    }

    pub fn allows(&self, l: u64) -> bool {
        l >= 1 && l < self.bound && (!self.coprime || l % self.p != 0)
    }

    /// Largest part that can occur in a feasible tuple.
    pub(crate) fn max_part(&self) -> u64 {
        (self.bound - 1).min(self.target.saturating_sub(u64::from(self.n) - 1))
    }

    /// Whether the size constraints admit any tuple at all (ignoring coprimality).
    pub fn is_feasible(&self) -> bool {
        let n = u64::from(self.n);
        self.target >= n && (self.bound - 1).saturating_mul(n) >= self.target
    }

    /// Upper bound `C(target - 1, n - 1)` on the tuples brute force visits.
    pub fn brute_force_estimate(&self) -> BigUint {
        if self.target < u64::from(self.n) {
            return BigUint::default();
        }
        binom_exact(self.target - 1, u64::from(self.n) - 1)
    }

    pub(crate) fn empty_result(&self, modulus: Modulus, method: Method, elapsed: Duration) -> MhsResult {
        MhsResult {
            query: self.clone(),
            residue: modulus.zero(),
            method,
            term_count: BigUint::default(),
            elapsed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    BruteForce,
    Convolution,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::BruteForce => "bruteforce",
            Method::Convolution => "convolution",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bruteforce" => Ok(Method::BruteForce),
            "convolution" => Ok(Method::Convolution),
            _ => Err(Error::Usage(alloc::format!("unknown method {s:?}"))),
        }
    }
}

/// Which evaluator `mhs` should run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Convolution once the brute-force estimate passes `Limits::auto_threshold`.
    #[default]
    Auto,
    BruteForce,
    Convolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub brute_force_ceiling: u64,
    pub max_poly_len: u64,
    pub auto_threshold: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            brute_force_ceiling: 1_000_000_000,
            max_poly_len: 2_000_000,
            auto_threshold: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MhsResult {
    pub query: MhsQuery,
    pub residue: RingElem,
    pub method: Method,
    /// Number of tuples in the sum.
    pub term_count: BigUint,
    pub elapsed: Duration,
}

pub fn mhs_bruteforce(q: &MhsQuery) -> Result<MhsResult> {
    mhs_bruteforce_with(q, &Limits::default())
}

pub fn mhs_convolution(q: &MhsQuery) -> Result<MhsResult> {
    mhs_convolution_with(q, &Limits::default())
}

pub fn mhs(q: &MhsQuery, strategy: Strategy) -> Result<MhsResult> {
    mhs_with(q, strategy, &Limits::default())
}

pub fn mhs_with(q: &MhsQuery, strategy: Strategy, limits: &Limits) -> Result<MhsResult> {
    match resolve_strategy(q, strategy, limits) {
        Method::BruteForce => mhs_bruteforce_with(q, limits),
        Method::Convolution => mhs_convolution_with(q, limits),
    }
}

pub fn resolve_strategy(q: &MhsQuery, strategy: Strategy, limits: &Limits) -> Method {
    match strategy {
        Strategy::BruteForce => Method::BruteForce,
        Strategy::Convolution => Method::Convolution,
        Strategy::Auto => {
            if q.brute_force_estimate() > BigUint::from(limits.auto_threshold) {
                Method::Convolution
            } else {
                Method::BruteForce
            }
        }
    }
}

/// Source of harmonic-sum values; lets callers interpose a cache.
pub trait SumEngine {
    fn mhs(&self, q: &MhsQuery, strategy: Strategy) -> Result<MhsResult>;
}

/// Computes every query afresh.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirectEngine {
    pub limits: Limits,
}

impl SumEngine for DirectEngine {
    fn mhs(&self, q: &MhsQuery, strategy: Strategy) -> Result<MhsResult> {
        mhs_with(q, strategy, &self.limits)
    }
}

impl<E: SumEngine + ?Sized> SumEngine for &E {
    fn mhs(&self, q: &MhsQuery, strategy: Strategy) -> Result<MhsResult> {
        (**self).mhs(q, strategy)
    }
}

/// Residue of each allowed part's inverse, or an error if some reachable
/// allowed part is divisible by `p` (only possible when `coprime` is off).
pub(crate) fn inverse_table(q: &MhsQuery, w: u64) -> Result<alloc::vec::Vec<u64>> {
    let max = q.max_part();
    let mut inv = alloc::vec![0u64; max as usize + 1];
    for l in 1..=max {
        if !q.allows(l) {
            continue;
        }
        inv[l as usize] = crate::ring::inv_mod(l % w, w).ok_or_else(|| Error::NonInvertible {
            residue: alloc::string::ToString::to_string(&l),
            modulus: alloc::format!("{}^{}", q.p, q.m),
            valuation: {
                let mut v = 0;
                let mut x = l;
                while x % q.p == 0 {
                    x /= q.p;
                    v += 1;
                }
                v
            },
        })?;
    }
    Ok(inv)
}

#[cfg(test)]
mod tests;
