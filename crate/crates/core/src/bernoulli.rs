//! Exact Bernoulli numbers and their images modulo prime powers.
//!
//! Convention: `x/(e^x - 1) = sum B_n x^n / n!`, so `B_1 = -1/2`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ring::{Modulus, PadicRational, RingElem};
use crate::{Error, Result};

pub use num_rational::BigRational as Rational;

/// Largest index served unless a table is built with an explicit cap.
pub const DEFAULT_CAP: u64 = 200;

/// Bernoulli numbers `B_0..B_len`, grown on demand up to a cap.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    cap: u64,
    values: Vec<BigRational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new(DEFAULT_CAP)
    }
}

impl BernoulliTable {
    pub const fn new(cap: u64) -> Self {
        BernoulliTable {
            cap,
            values: Vec::new(),
        }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Number of entries computed so far.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `B_n`, if it has already been computed.
    pub fn cached(&self, n: u64) -> Option<&BigRational> {
        usize::try_from(n).ok().and_then(|i| self.values.get(i))
    }

    pub fn get(&mut self, n: u64) -> Result<&BigRational> {
        if n > self.cap {
            return Err(Error::BernoulliCap { n, cap: self.cap });
        }
        while self.values.len() as u64 <= n {
            let next = next_bernoulli(&self.values);
            self.values.push(next);
        }
        Ok(&self.values[n as usize])
    }
}

/// Solve `sum_{j=0}^{n} C(n+1, j) B_j = 0` for `B_n`, given `B_0..B_{n-1}`.
fn next_bernoulli(prev: &[BigRational]) -> BigRational {
    let n = prev.len();
    if n == 0 {
        return BigRational::one();
    }
    // row holds C(n+1, j) as j advances
    let mut binom = BigInt::one();
    let mut acc = BigRational::zero();
    for (j, b) in prev.iter().enumerate() {
        if !b.is_zero() {
            acc += b * &binom;
        }
        binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
    }
    // binom is now C(n+1, n) = n + 1
    -acc / binom
}

/// `B_n` computed from scratch, without touching any shared table.
pub fn bernoulli_uncached(n: u64) -> Result<BigRational> {
    let mut table = BernoulliTable::new(DEFAULT_CAP);
    table.get(n).cloned()
}

#[cfg(feature = "std")]
static TABLE: std::sync::RwLock<BernoulliTable> = std::sync::RwLock::new(BernoulliTable::new(DEFAULT_CAP));

/// `B_n`, memoized for the lifetime of the process.
#[cfg(feature = "std")]
pub fn bernoulli_exact(n: u64) -> Result<BigRational> {
    if let Some(b) = TABLE.read().unwrap_or_else(|e| e.into_inner()).cached(n) {
        return Ok(b.clone());
    }
    let mut table = TABLE.write().unwrap_or_else(|e| e.into_inner());
    table.get(n).cloned()
}

#[cfg(not(feature = "std"))]
pub fn bernoulli_exact(n: u64) -> Result<BigRational> {
    bernoulli_uncached(n)
}

/// `B_n` reduced into `Z/p^m`. Fails when `p` divides the denominator, which
/// by von Staudt-Clausen happens exactly for even `n >= 2` with `(p-1) | n`.
pub fn bernoulli_mod(n: u64, modulus: &Modulus) -> Result<RingElem> {
    let b = bernoulli_exact(n)?;
    let q = PadicRational::from_ratio(&b, modulus.p());
    if !q.is_p_integral() {
        return Err(Error::IrregularDenominator {
            index: n,
            p: modulus.p(),
        });
    }
    q.reduce(modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::is_prime;
    use num_bigint::BigUint;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn binom(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli_exact(0).unwrap(), r(1, 1));
        assert_eq!(bernoulli_exact(1).unwrap(), r(-1, 2));
        assert_eq!(bernoulli_exact(2).unwrap(), r(1, 6));
        assert_eq!(bernoulli_exact(3).unwrap(), r(0, 1));
        assert_eq!(bernoulli_exact(4).unwrap(), r(-1, 30));
        assert_eq!(bernoulli_exact(12).unwrap(), r(-691, 2730));
        assert_eq!(bernoulli_uncached(20).unwrap(), r(-174611, 330));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            bernoulli_exact(DEFAULT_CAP + 1),
            Err(Error::BernoulliCap {
                n: DEFAULT_CAP + 1,
                cap: DEFAULT_CAP
            })
        );
        let mut t = BernoulliTable::new(10);
        assert!(t.get(10).is_ok());
        assert!(t.get(11).is_err());
        assert_eq!(t.len(), 11);
    }

    #[test]
    fn recurrence_closes_and_odd_indices_vanish() {
        let mut t = BernoulliTable::default();
        t.get(DEFAULT_CAP).unwrap();
        for n in 1..=DEFAULT_CAP {
            let s = (0..=n).fold(BigRational::zero(), |acc, j| {
                acc + t.cached(j).unwrap() * binom(n + 1, j)
            });
            assert!(s.is_zero(), "recurrence fails at n = {n}");
        }
        for k in 1..DEFAULT_CAP / 2 {
            assert!(t.cached(2 * k + 1).unwrap().is_zero());
        }
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        for n in (2..=60u64).step_by(2) {
            let expected = (2..=n + 1)
                .filter(|&q| is_prime(q) && n % (q - 1) == 0)
                .fold(BigUint::one(), |acc, q| acc * q);
            let b = bernoulli_exact(n).unwrap();
            assert_eq!(b.denom().magnitude(), &expected, "n = {n}");
        }
    }

    #[test]
    fn reduction_examples() {
        let m72 = Modulus::new(7, 2).unwrap();
        assert_eq!(bernoulli_mod(2, &m72).unwrap().to_u64(), Some(41));
        let m5 = Modulus::new(5, 1).unwrap();
        assert_eq!(
            bernoulli_mod(4, &m5),
            Err(Error::IrregularDenominator { index: 4, p: 5 })
        );
        assert_eq!(bernoulli_mod(0, &m5).unwrap(), m5.one());
        // B_1 = -1/2 is fine for odd p
        assert_eq!(bernoulli_mod(1, &m5).unwrap().to_u64(), Some(2));
    }

    #[test]
    fn concurrent_reads_agree() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || bernoulli_exact(40 + 2 * i).unwrap()))
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), bernoulli_uncached(40 + 2 * i as u64).unwrap());
        }
    }
}
