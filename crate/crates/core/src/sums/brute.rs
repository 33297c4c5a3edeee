use num_bigint::BigUint;

use super::{inverse_table, Limits, Method, MhsQuery, MhsResult};
use crate::ring::mul_mod;
use crate::time::Stopwatch;
use crate::{Error, Result};

struct Walk<'a> {
    inv: &'a [u64],
    max_part: u64,
    w: u64,
    acc: u64,
    count: u128,
}

impl Walk<'_> {
    /// Fill `slots` coordinates summing to `rem`; the last one is forced.
    fn go(&mut self, slots: u32, rem: u64, prod: u64) {
        if slots == 1 {
            if rem <= self.max_part {
                let i = self.inv[rem as usize];
                if i != 0 {
                    self.acc += mul_mod(prod, i, self.w);
                    if self.acc >= self.w {
                        self.acc -= self.w;
                    }
                    self.count += 1;
                }
            }
            return;
        }
        let rest = u64::from(slots - 1);
        // the other slots must absorb between `rest` and `rest * max_part`
        let lo = rem.saturating_sub(rest.saturating_mul(self.max_part)).max(1);
        let hi = self.max_part.min(rem.saturating_sub(rest));
        for l in lo..=hi {
            let i = self.inv[l as usize];
            if i != 0 {
                self.go(slots - 1, rem - l, mul_mod(prod, i, self.w));
            }
        }
    }
}

/// Exhaustive enumeration of the tuples in the sum.
pub fn mhs_bruteforce_with(q: &MhsQuery, limits: &Limits) -> Result<MhsResult> {
    let clock = Stopwatch::start();
    let modulus = q.modulus()?;
    let w = modulus.require_word()?;
    if !q.is_feasible() {
        return Ok(q.empty_result(modulus, Method::BruteForce, clock.elapsed()));
    }
    let estimate = q.brute_force_estimate();
    if estimate > BigUint::from(limits.brute_force_ceiling) {
        return Err(Error::EnumerationCeiling {
            estimate: alloc::string::ToString::to_string(&estimate),
            ceiling: limits.brute_force_ceiling,
        });
    }
    let inv = inverse_table(q, w)?;
    let mut walk = Walk {
        inv: &inv,
        max_part: q.max_part(),
        w,
        acc: 0,
        count: 0,
    };
    walk.go(q.n(), q.target(), 1 % w);
    Ok(MhsResult {
        query: q.clone(),
        residue: modulus.from_u64(walk.acc),
        method: Method::BruteForce,
        term_count: BigUint::from(walk.count),
        elapsed: clock.elapsed(),
    })
}
