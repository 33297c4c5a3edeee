//! Raw data toward a conjectured closed form
//! `S_n^(1)(p^r) == a(n) p^(r-1) B_{p-n} (mod p^r)` at odd `n >= 7`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bernoulli::bernoulli_mod;
use crate::ring::{is_prime, Modulus, PadicRational, RingElem};
use crate::sums::{DirectEngine, MhsQuery, Strategy, SumEngine};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanValue {
    /// `ratio = (sum / p^(r-1)) / B_{p-n}` in `Z/p`.
    Ratio {
        sum: RingElem,
        ratio: RingElem,
    },
    Unavailable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub n: u32,
    pub p: u64,
    pub r: u32,
    pub value: ScanValue,
}

impl ScanRow {
    pub fn ratio(&self) -> Option<&RingElem> {
        match &self.value {
            ScanValue::Ratio { ratio, .. } => Some(ratio),
            ScanValue::Unavailable(_) => None,
        }
    }
}

/// Known coefficient `a(n)` for the calibration rows `n = 3` and `n = 5`.
pub fn calibration_coefficient(n: u32) -> Option<(i64, i64)> {
    match n {
        3 => Some((-2, 1)),
        5 => Some((-120, 6)),
        _ => None,
    }
}

pub fn conjecture_scan(n: u32, primes: &[u64], r: u32) -> Result<Vec<ScanRow>> {
    conjecture_scan_with(n, primes, r, &DirectEngine::default())
}

pub fn conjecture_scan_with(n: u32, primes: &[u64], r: u32, engine: &dyn SumEngine) -> Result<Vec<ScanRow>> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Usage(format!("scan takes odd n >= 3, got {n}")));
    }
    if r < 2 {
        return Err(Error::Usage(format!("scan needs r >= 2, got {r}")));
    }
    primes
        .iter()
        .map(|&p| {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            let value = scan_one(n, p, r, engine)?;
            Ok(ScanRow { n, p, r, value })
        })
        .collect()
}

fn scan_one(n: u32, p: u64, r: u32, engine: &dyn SumEngine) -> Result<ScanValue> {
    if p <= u64::from(n) {
        return Ok(ScanValue::Unavailable(format!("needs p > n = {n}")));
    }
    let mod_p = Modulus::new(p, 1)?;
    let b = match bernoulli_mod(p - u64::from(n), &mod_p) {
        Ok(b) => b,
        Err(Error::IrregularDenominator { index, .. }) => {
            return Ok(ScanValue::Unavailable(format!(
                "denominator of B_{index} is divisible by {p}"
            )));
        }
        Err(e) => return Err(e),
    };
    if b.is_zero() {
        return Ok(ScanValue::Unavailable(format!("B_{} == 0 (mod {p})", p - u64::from(n))));
    }
    let sum = engine
        .mhs(&MhsQuery::harmonic(n, 1, p, r)?, Strategy::Convolution)?
        .residue;
    let shift = Modulus::new(p, r - 1)?;
    let (q, rem) = num_integer::Integer::div_rem(sum.residue(), shift.value());
    if !rem.is_zero() {
        return Ok(ScanValue::Unavailable(format!(
            "S_{n}^(1)({p}^{r}) = {} is not divisible by {p}^{}",
            sum.residue(),
            r - 1
        )));
    }
    let ratio = mod_p.from_biguint(&(q % BigUint::from(p))).mul(&b.invert()?)?;
    Ok(ScanValue::Ratio { sum, ratio })
}

/// Outcome of comparing a calibration row with its known coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Calibration {
    pub row: ScanRow,
    pub expected: RingElem,
    pub ok: bool,
}

/// Reruns the scan at `n = 3` and `n = 5` over the primes that admit a
/// ratio and compares with the known coefficients. Rows with no ratio are
/// skipped.
pub fn scan_calibration(primes: &[u64], r: u32, engine: &dyn SumEngine) -> Result<Vec<Calibration>> {
    let mut out = Vec::new();
    for n in [3u32, 5] {
        let (num, den) = calibration_coefficient(n).expect("calibration rows");
        for row in conjecture_scan_with(n, primes, r, engine)? {
            let Some(ratio) = row.ratio() else { continue };
            let m = ratio.modulus().clone();
            let expected = PadicRational::ratio(num, den, row.p).reduce(&m)?;
            let ok = *ratio == expected;
            out.push(Calibration { row, expected, ok });
        }
    }
    Ok(out)
}
