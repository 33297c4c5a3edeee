use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedMul, One, ToPrimitive, Zero};

use super::{inverse_table, Limits, Method, MhsQuery, MhsResult};
use crate::ring::{Modulus, RingElem};
use crate::time::Stopwatch;
use crate::{Error, Result};

/// Polynomial over `Z/p^m` truncated at a fixed degree, stored as machine-word
/// residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePoly {
    coeffs: Vec<u64>,
    modulus: Modulus,
    word: u64,
}

impl DensePoly {
    pub fn zero(modulus: &Modulus, trunc: usize) -> Result<Self> {
        Ok(DensePoly {
            coeffs: vec![0; trunc + 1],
            word: modulus.require_word()?,
            modulus: modulus.clone(),
        })
    }

    pub fn from_elems(elems: &[RingElem]) -> Result<Self> {
        let first = elems
            .first()
            .ok_or_else(|| Error::Usage("a polynomial needs at least one coefficient".into()))?;
        let modulus = first.modulus().clone();
        let word = modulus.require_word()?;
        let mut coeffs = Vec::with_capacity(elems.len());
        for e in elems {
            if e.modulus() != &modulus {
                return Err(Error::ModulusMismatch {
                    left: alloc::string::ToString::to_string(&modulus),
                    right: alloc::string::ToString::to_string(e.modulus()),
                });
            }
            coeffs.push(e.to_u64().expect("residue below a word-sized modulus"));
        }
        Ok(DensePoly { coeffs, modulus, word })
    }

    /// Coefficients given as raw integers, reduced into the ring.
    pub fn from_words(words: Vec<u64>, modulus: &Modulus) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Usage("a polynomial needs at least one coefficient".into()));
        }
        let word = modulus.require_word()?;
        let coeffs = words.into_iter().map(|c| c % word).collect();
        Ok(DensePoly {
            coeffs,
            word,
            modulus: modulus.clone(),
        })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Highest degree kept.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn words(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> RingElem {
        self.modulus.from_u64(self.coeffs.get(degree).copied().unwrap_or(0))
    }

    pub fn coeffs(&self) -> Vec<RingElem> {
        self.coeffs.iter().map(|&c| self.modulus.from_u64(c)).collect()
    }

    fn check_same(&self, other: &DensePoly) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: alloc::string::ToString::to_string(&self.modulus),
                right: alloc::string::ToString::to_string(&other.modulus),
            })
        }
    }

    /// Product truncated at degree `trunc`.
    pub fn mul_truncated(&self, other: &DensePoly, trunc: usize) -> Result<DensePoly> {
        self.check_same(other)?;
        Ok(DensePoly {
            coeffs: mul_trunc_words(&self.coeffs, &other.coeffs, trunc + 1, self.word),
            modulus: self.modulus.clone(),
            word: self.word,
        })
    }

    /// `self^exp` truncated at degree `trunc`, by repeated squaring.
    pub fn pow_truncated(&self, exp: u32, trunc: usize) -> DensePoly {
        let coeffs = pow_trunc_words(&self.coeffs, exp, trunc + 1, self.word);
        DensePoly {
            coeffs,
            modulus: self.modulus.clone(),
            word: self.word,
        }
    }

    /// Coefficient of `x^degree` in `self^exp`. The final product is never
    /// formed: only the one dot product that lands on `degree` is computed.
    pub fn power_coeff(&self, exp: u32, degree: usize) -> RingElem {
        let w = self.word;
        let len = degree + 1;
        let value = match exp {
            0 => u64::from(degree == 0) % w,
            1 => self.coeffs.get(degree).copied().unwrap_or(0),
            _ => {
                let half = exp / 2;
                let low = pow_trunc_words(&self.coeffs, half, len, w);
                if exp % 2 == 0 {
                    dot_at(&low, &low, degree, w)
                } else {
                    let base: Vec<u64> = self.coeffs.iter().copied().take(len).collect();
                    let high = mul_trunc_words(&low, &base, len, w);
                    dot_at(&low, &high, degree, w)
                }
            }
        };
        self.modulus.from_u64(value)
    }
}

fn first_nonzero(a: &[u64]) -> usize {
    a.iter().position(|&c| c != 0).unwrap_or(a.len())
}

/// `sum_i a[i] * b[k - i] mod w` over the valid index range.
#[inline]
fn convolve_one(a: &[u64], b: &[u64], a_lo: usize, b_lo: usize, k: usize, w: u64) -> u64 {
    if a.is_empty() || b.is_empty() || k < a_lo + b_lo {
        return 0;
    }
    let i_lo = a_lo.max(k.saturating_sub(b.len() - 1));
    let i_hi = (k - b_lo).min(a.len() - 1);
    if i_lo > i_hi {
        return 0;
    }
    if w < 1 << 32 {
        // every product is below 2^64, so the sum of fewer than 2^64 of them fits
        let mut acc: u128 = 0;
        for i in i_lo..=i_hi {
            acc += u128::from(a[i] * b[k - i]);
        }
        (acc % u128::from(w)) as u64
    } else {
        let mut acc: u128 = 0;
        for i in i_lo..=i_hi {
            acc += (u128::from(a[i]) * u128::from(b[k - i])) % u128::from(w);
        }
        (acc % u128::from(w)) as u64
    }
}

fn dot_at(a: &[u64], b: &[u64], k: usize, w: u64) -> u64 {
    convolve_one(a, b, first_nonzero(a), first_nonzero(b), k, w)
}

fn mul_trunc_words(a: &[u64], b: &[u64], len: usize, w: u64) -> Vec<u64> {
    let (a_lo, b_lo) = (first_nonzero(a), first_nonzero(b));
    (0..len).map(|k| convolve_one(a, b, a_lo, b_lo, k, w)).collect()
}

fn pow_trunc_words(base: &[u64], mut exp: u32, len: usize, w: u64) -> Vec<u64> {
    let mut sq: Vec<u64> = base.iter().copied().take(len).collect();
    sq.resize(len, 0);
    let mut acc: Option<Vec<u64>> = None;
    loop {
        if exp & 1 == 1 {
            acc = Some(match acc {
                None => sq.clone(),
                Some(prev) => mul_trunc_words(&prev, &sq, len, w),
            });
        }
        exp >>= 1;
        if exp == 0 {
            break;
        }
        sq = mul_trunc_words(&sq, &sq, len, w);
    }
    acc.unwrap_or_else(|| {
        let mut one = vec![0; len];
        one[0] = 1 % w;
        one
    })
}

/// Exact coefficient of `x^degree` in `(sum_{allowed l} x^l)^exp`, i.e. the
/// number of tuples, with checked arithmetic.
fn count_power_coeff<T>(allowed: &[bool], exp: u32, degree: usize) -> Option<T>
where
    T: Clone + Zero + One + CheckedAdd + CheckedMul,
{
    let len = degree + 1;
    let mul = |a: &[T], b: &[T]| -> Option<Vec<T>> {
        let mut out = vec![T::zero(); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    out[i + j] = out[i + j].checked_add(&x.checked_mul(y)?)?;
                }
            }
        }
        Some(out)
    };
    let mut sq: Vec<T> = (0..len)
        .map(|l| {
            if allowed.get(l).copied().unwrap_or(false) {
                T::one()
            } else {
                T::zero()
            }
        })
        .collect();
    let mut acc: Vec<T> = vec![T::zero(); len];
    acc[0] = T::one();
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(&acc, &sq)?;
        }
        exp >>= 1;
        if exp > 0 {
            sq = mul(&sq, &sq)?;
        }
    }
    Some(acc.swap_remove(degree))
}

fn tuple_count(allowed: &[bool], exp: u32, degree: usize) -> BigUint {
    match count_power_coeff::<u128>(allowed, exp, degree) {
        Some(c) => BigUint::from(c),
        None => count_power_coeff::<BigUint>(allowed, exp, degree).expect("arbitrary-precision count cannot overflow"),
    }
}

/// Coefficient extraction from `f^n`, `f = sum_{allowed l} x^l / l`.
pub fn mhs_convolution_with(q: &MhsQuery, limits: &Limits) -> Result<MhsResult> {
    let clock = Stopwatch::start();
    let modulus = q.modulus()?;
    let w = modulus.require_word()?;
    let needed = q.target() + 1;
    if needed > limits.max_poly_len {
        return Err(Error::PolynomialLength {
            needed,
            limit: limits.max_poly_len,
        });
    }
    if !q.is_feasible() {
        return Ok(q.empty_result(modulus, Method::Convolution, clock.elapsed()));
    }
    let degree = q.target().to_usize().expect("polynomial length checked above");
    let inv = inverse_table(q, w)?;
    let mut words = vec![0u64; degree + 1];
    words[..inv.len()].copy_from_slice(&inv);
    let allowed: Vec<bool> = words.iter().map(|&c| c != 0).collect();
    let f = DensePoly {
        coeffs: words,
        modulus: modulus.clone(),
        word: w,
    };
    let residue = f.power_coeff(q.n(), degree);
    let term_count = tuple_count(&allowed, q.n(), degree);
    Ok(MhsResult {
        query: q.clone(),
        residue,
        method: Method::Convolution,
        term_count,
        elapsed: clock.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_mul(a: &[u64], b: &[u64], len: usize, w: u64) -> Vec<u64> {
        let mut out = vec![0u128; len];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] = (out[i + j] + u128::from(x) * u128::from(y)) % u128::from(w);
                }
            }
        }
        out.into_iter().map(|c| c as u64).collect()
    }

    #[test]
    fn power_coeff_small() {
        let m = Modulus::new(5, 1).unwrap();
        // (x + 2x^2)^3 = x^3 + 6x^4 + 12x^5 + 8x^6
        let f = DensePoly::from_words(vec![0, 1, 2, 0, 0, 0, 0], &m).unwrap();
        let expect = [0u64, 0, 0, 1, 1, 2, 3];
        for (d, &e) in expect.iter().enumerate() {
            assert_eq!(f.power_coeff(3, d).to_u64(), Some(e), "degree {d}");
        }
        assert_eq!(f.power_coeff(0, 0), m.one());
        assert_eq!(f.power_coeff(0, 3), m.zero());
        let cube = f.pow_truncated(3, 6);
        assert_eq!(cube.words(), &expect);
        assert_eq!(cube.trunc(), 6);
    }

    #[test]
    fn mismatched_moduli() {
        let a = DensePoly::zero(&Modulus::new(5, 1).unwrap(), 3).unwrap();
        let b = DensePoly::zero(&Modulus::new(5, 2).unwrap(), 3).unwrap();
        assert!(a.mul_truncated(&b, 3).is_err());
        assert!(DensePoly::from_elems(&[]).is_err());
    }

    #[test]
    fn wide_modulus_is_refused() {
        let m = Modulus::new(2, 70).unwrap();
        assert!(matches!(DensePoly::zero(&m, 4), Err(Error::ModulusTooWide(_))));
    }

    #[test]
    fn counts_fall_back_to_bigint() {
        let allowed = vec![false, true, true, true];
        assert_eq!(tuple_count(&allowed, 2, 3), BigUint::from(2u32));
        assert_eq!(count_power_coeff::<u8>(&[false, true].repeat(40), 8, 79), None);
    }

    proptest! {
        #[test]
        fn kernel_matches_naive(
            a in proptest::collection::vec(0u64..1 << 40, 1..30),
            b in proptest::collection::vec(0u64..1 << 40, 1..30),
            len in 1usize..40,
            wide in any::<bool>(),
        ) {
            let w = if wide { 1_000_000_007u64 * 1_009 } else { 2_197 };
            let a: Vec<u64> = a.into_iter().map(|x| x % w).collect();
            let b: Vec<u64> = b.into_iter().map(|x| x % w).collect();
            prop_assert_eq!(mul_trunc_words(&a, &b, len, w), naive_mul(&a, &b, len, w));
        }

        #[test]
        fn power_matches_repeated_product(
            a in proptest::collection::vec(0u64..49, 1..12),
            exp in 0u32..7,
        ) {
            let m = Modulus::new(7, 2).unwrap();
            let len = 15;
            let f = DensePoly::from_words(a.clone(), &m).unwrap();
            let mut expect = vec![0u64; len];
            expect[0] = 1;
            for _ in 0..exp {
                expect = naive_mul(&expect, &a, len, 49);
            }
            let pw = f.pow_truncated(exp, len - 1);
            prop_assert_eq!(pw.words(), &expect[..]);
            for (d, &want) in expect.iter().enumerate() {
                prop_assert_eq!(f.power_coeff(exp, d).to_u64(), Some(want));
            }
        }
    }
}
