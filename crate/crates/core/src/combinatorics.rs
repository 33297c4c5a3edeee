//! Exact binomials and counts of bounded compositions.

use alloc::vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Largest `total` the dynamic-programming reference counters accept.
pub const DP_MAX_TOTAL: u64 = 100_000;

/// `C(a, b)` over the integers; zero when `b > a`.
pub fn binom_exact(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

/// Binomial with a possibly negative top, where `C(a, b) = 0` for `a < b`.
fn binom_signed(a: i128, b: u64) -> BigUint {
    if a < 0 {
        BigUint::zero()
    } else {
        binom_exact(a as u64, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartBound {
    /// Each part is strictly below this value.
    Below(u64),
    Unbounded,
}

/// Nonnegative `parts`-tuples summing to `total`, each part under `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountQuery {
    pub total: u64,
    pub parts: u32,
    pub bound: PartBound,
}

impl CountQuery {
    pub fn new(total: u64, parts: u32, bound: PartBound) -> Result<Self> {
        if parts == 0 {
            return Err(Error::Usage("a composition needs at least one part".into()));
        }
        Ok(CountQuery { total, parts, bound })
    }
}

/// Inclusion-exclusion over the parts forced to reach the bound:
/// `sum_j (-1)^j C(parts, j) C(total - j*bound + parts - 1, parts - 1)`.
pub fn count_bounded_compositions(q: &CountQuery) -> BigUint {
    let k = u64::from(q.parts);
    let bound = match q.bound {
        PartBound::Unbounded => {
            return binom_exact(q.total + k - 1, k - 1);
        }
        PartBound::Below(b) => b,
    };
    if bound == 0 {
        return BigUint::zero();
    }
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let top = i128::from(q.total) - i128::from(j) * i128::from(bound) + i128::from(k) - 1;
        if top < 0 {
            break;
        }
        let term = BigInt::from(binom_exact(k, j) * binom_signed(top, k - 1));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("inclusion-exclusion count is nonnegative")
}

fn dp_bound(q: &CountQuery) -> Result<u64> {
    if q.total > DP_MAX_TOTAL {
        return Err(Error::Usage(alloc::format!(
            "dynamic-programming count limited to total <= {DP_MAX_TOTAL}"
        )));
    }
    Ok(match q.bound {
        PartBound::Below(b) => b,
        PartBound::Unbounded => q.total + 1,
    })
}

/// Reference count by dynamic programming over partial sums.
pub fn count_bounded_compositions_dp(q: &CountQuery) -> Result<BigUint> {
    let bound = dp_bound(q)?;
    let t = q.total as usize;
    let mut ways = vec![BigUint::zero(); t + 1];
    ways[0] = BigUint::one();
    for _ in 0..q.parts {
        let mut next = vec![BigUint::zero(); t + 1];
        for (s, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for x in 0..bound.min((t - s) as u64 + 1) {
                next[s + x as usize] += w;
            }
        }
        ways = next;
    }
    Ok(ways.swap_remove(t))
}

/// Sum of the first coordinate over every tuple counted by `q`, by dynamic
/// programming: count the remaining `parts - 1` coordinates for each value of
/// the first.
pub fn first_part_sum_dp(q: &CountQuery) -> Result<BigUint> {
    let bound = dp_bound(q)?;
    if q.parts == 1 {
        return Ok(if q.total < bound {
            BigUint::from(q.total)
        } else {
            BigUint::zero()
        });
    }
    let mut acc = BigUint::zero();
    for x in 1..bound.min(q.total + 1) {
        let rest = CountQuery::new(q.total - x, q.parts - 1, q.bound)?;
        acc += count_bounded_compositions_dp(&rest)? * x;
    }
    Ok(acc)
}

/// Number of nonnegative 5-tuples with sum `2p - a` and every part below `p`,
/// by the closed form `C(2p - a + 4, 4) - 5 C(p - a + 4, 4)`.
pub fn casolution(p: u64, a: u32) -> Result<BigUint> {
    if !(1..=4).contains(&a) {
        return Err(Error::Usage(alloc::format!("a must lie in 1..=4, got {a}")));
    }
    if p <= 5 || !crate::ring::is_prime(p) {
        return Err(Error::Usage(alloc::format!("p must be a prime > 5, got {p}")));
    }
    let a = u64::from(a);
    let full = binom_exact(2 * p - a + 4, 4);
    let over = binom_exact(p - a + 4, 4) * 5u32;
    Ok(full - over)
}

/// `(2p - a)/5 * C_a`, the exact first-coordinate sum by symmetry.
pub fn casolution_first_part_sum(p: u64, a: u32) -> Result<BigUint> {
    let c = casolution(p, a)?;
    let prod = c * (2 * p - u64::from(a));
    debug_assert!((&prod % 5u32).is_zero());
    Ok(prod / 5u32)
}
