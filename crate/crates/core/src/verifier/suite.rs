use alloc::vec;
use alloc::vec::Vec;

use super::{run_check_with, CheckId, CheckResult, CheckSpec, Params};
use crate::sums::{DirectEngine, SumEngine};

/// Largest multiplier `k` in the default `THM2_R1` grid; the unbounded sum
/// grows with `k p`.
pub const THM2_MAX_MULTIPLIER: u64 = 8;

/// Largest exponent sum in the default grids for the distinct-index checks.
pub const MAX_EXPONENT_SUM: u32 = 6;

/// Overrides for the auxiliary parameter ranges of a suite. `None` keeps the
/// per-check defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    pub n: Option<Vec<u32>>,
    pub k: Option<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub rejected: usize,
    pub errored: usize,
}

impl Summary {
    pub fn of(results: &[CheckResult]) -> Self {
        let mut s = Summary {
            total: results.len(),
            ..Summary::default()
        };
        for r in results {
            match r.verdict {
                super::Verdict::Pass => s.passed += 1,
                super::Verdict::Fail => s.failed += 1,
                super::Verdict::Rejected(_) => s.rejected += 1,
                super::Verdict::Errored(_) => s.errored += 1,
            }
        }
        s
    }
}

/// Every composition of a total in `1..=max_sum` into at most three parts.
fn exponent_vectors(max_sum: u32) -> Vec<Vec<u32>> {
    fn compositions(total: u32, parts: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..total {
            prefix.push(first);
            compositions(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for parts in 1..=3 {
        for total in parts..=max_sum {
            compositions(total, parts, &mut Vec::new(), &mut out);
        }
    }
    out
}

/// Parameterizations of `id` at prime `p` (before `r` is attached). Ranges
/// are trimmed to the statement's hypotheses where those depend on `p`.
fn aux_params(id: CheckId, p: u64, opts: &SuiteOptions) -> Vec<Params> {
    use CheckId::*;
    let base = Params::prime(p);
    let ns = |default: Vec<u32>| opts.n.clone().unwrap_or(default);
    let ks = |default: Vec<u64>| opts.k.clone().unwrap_or(default);
    let small = |n: &u32| u64::from(*n) < p;
    match id {
        ZHAO1 | S52MODP | WANG_PP | ZHAO4 | MAIN | REC_ADD1 | REC_ADD2 | REC_S21 | REC_S5 => vec![base],
        ZHOU_ODD | ZHOU_EVEN => {
            let odd = id == ZHOU_ODD;
            let top = p.saturating_sub(2).min(8) as u32;
            ns((1..=top).collect())
                .into_iter()
                .filter(|n| (n % 2 == 1) == odd)
                .map(|n| base.clone().with_n(n))
                .collect()
        }
        REC_I => {
            let mut out = Vec::new();
            for n in ns(vec![3, 4, 5]).into_iter().filter(small) {
                let k_values = opts.k.clone().unwrap_or_else(|| (1..u64::from(n)).collect());
                out.extend(k_values.into_iter().map(|k| base.clone().with_n(n).with_k(k)));
            }
            out
        }
        REC_II => ns(vec![3, 5])
            .into_iter()
            .filter(small)
            .map(|n| base.clone().with_n(n))
            .collect(),
        THM2_R1 | THM2_RGE2 | REC_THM2 => {
            let default = match id {
                THM2_R1 => vec![2, 3, 4, 6],
                THM2_RGE2 => vec![2, 3],
                _ => vec![2, 3, 4],
            };
            ks(default)
                .into_iter()
                .filter(|&k| opts.k.is_some() || (k % p != 0 && k <= THM2_MAX_MULTIPLIER))
                .map(|k| base.clone().with_k(k))
                .collect()
        }
        REC_S512 => ks(vec![1, 2]).into_iter().map(|k| base.clone().with_k(k)).collect(),
        CASOL_RESIDUE | CASOL_COLSUM => (1..=4).map(|a| base.clone().with_a(a)).collect(),
        ZHOUXIA | LEMMA_2P => {
            let max_sum = p.saturating_sub(3).min(u64::from(MAX_EXPONENT_SUM)) as u32;
            exponent_vectors(max_sum)
                .into_iter()
                .map(|al| base.clone().with_alphas(al))
                .collect()
        }
        COR_LEMCOR | COR_LEMCOR2 => {
            let max = p.saturating_sub(3).min(u64::from(MAX_EXPONENT_SUM)) as u32;
            (1..=max).map(|a| base.clone().with_alphas(vec![a])).collect()
        }
    }
}

/// The Cartesian product of ids, primes, exponents and auxiliary ranges,
/// sorted by `(id, p, r, aux)` and deduplicated.
///
/// When the hypotheses leave no auxiliary values for a prime, the id still
/// gets one spec (with the smallest default values) so that the rejection is
/// recorded rather than silently dropped.
pub fn suite_specs(ids: &[CheckId], primes: &[u64], r_range: &[u32], opts: &SuiteOptions) -> Vec<CheckSpec> {
    let mut specs = Vec::new();
    for &id in ids {
        for &p in primes {
            let mut aux = aux_params(id, p, opts);
            if aux.is_empty() {
                let mut fallback = aux_params(id, 101, opts);
                fallback.truncate(1);
                aux = fallback
                    .into_iter()
                    .map(|mut params| {
                        params.p = p;
                        params
                    })
                    .collect();
            }
            for params in aux {
                if id.uses_r() {
                    for &r in r_range {
                        specs.push(CheckSpec::new(id, params.clone().with_r(r)));
                    }
                } else {
                    specs.push(CheckSpec::new(id, params.clone()));
                }
            }
        }
    }
    specs.sort();
    specs.dedup();
    specs
}

/// Runs the default grid for `ids` sequentially.
pub fn run_suite(ids: &[CheckId], primes: &[u64], r_range: &[u32]) -> Vec<CheckResult> {
    run_suite_with(ids, primes, r_range, &SuiteOptions::default(), &DirectEngine::default())
}

pub fn run_suite_with(
    ids: &[CheckId],
    primes: &[u64],
    r_range: &[u32],
    opts: &SuiteOptions,
    engine: &dyn SumEngine,
) -> Vec<CheckResult> {
    suite_specs(ids, primes, r_range, opts)
        .iter()
        .map(|spec| run_check_with(spec, engine))
        .collect()
}
