//! Arithmetic in `Z/p^m` and p-adic bookkeeping for exact rationals.

use alloc::string::ToString;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin; the fixed witness set is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// The ring `Z/p^m` for a prime `p` and exponent `m >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    exponent: u32,
    value: BigUint,
}

impl Modulus {
    pub fn new(p: u64, exponent: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if exponent == 0 {
            return Err(Error::ZeroExponent);
        }
        Ok(Modulus {
            p,
            exponent,
            value: BigUint::from(p).pow(exponent),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `p^m` exactly.
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// `p^m` as a machine word, when it is below `2^63` so that a sum of two
    /// residues cannot overflow.
    pub fn word(&self) -> Option<u64> {
        self.value.to_u64().filter(|&w| w < 1 << 63)
    }

    pub(crate) fn require_word(&self) -> Result<u64> {
        self.word().ok_or_else(|| Error::ModulusTooWide(self.to_string()))
    }

    /// Same prime, different exponent.
    pub fn with_exponent(&self, exponent: u32) -> Result<Self> {
        Modulus::new(self.p, exponent)
    }

    pub fn zero(&self) -> RingElem {
        RingElem {
            residue: BigUint::zero(),
            modulus: self.clone(),
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, x: u64) -> RingElem {
        self.from_biguint(&BigUint::from(x))
    }

    pub fn from_biguint(&self, x: &BigUint) -> RingElem {
        RingElem {
            residue: x % &self.value,
            modulus: self.clone(),
        }
    }

    pub fn from_bigint(&self, x: &BigInt) -> RingElem {
        let m = BigInt::from(self.value.clone());
        let r = x.mod_floor(&m);
        RingElem {
            residue: r.to_biguint().expect("mod_floor by a positive modulus is nonnegative"),
            modulus: self.clone(),
        }
    }

    pub fn from_i64(&self, x: i64) -> RingElem {
        self.from_bigint(&BigInt::from(x))
    }

    fn check_same(&self, other: &Modulus) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.exponent)
    }
}

/// A residue class in `Z/p^m`, stored canonically in `[0, p^m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    residue: BigUint,
    modulus: Modulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

/// `a op b` in the common ring of `a` and `b`.
pub fn ring_arith(a: &RingElem, b: &RingElem, op: RingOp) -> Result<RingElem> {
    a.modulus.check_same(&b.modulus)?;
    let m = &a.modulus.value;
    let residue = match op {
        RingOp::Add => (&a.residue + &b.residue) % m,
        RingOp::Sub => (&a.residue + m - &b.residue) % m,
        RingOp::Mul => (&a.residue * &b.residue) % m,
    };
    Ok(RingElem {
        residue,
        modulus: a.modulus.clone(),
    })
}

impl RingElem {
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.residue.to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        ring_arith(self, other, RingOp::Add)
    }

    pub fn sub(&self, other: &RingElem) -> Result<RingElem> {
        ring_arith(self, other, RingOp::Sub)
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        ring_arith(self, other, RingOp::Mul)
    }

    pub fn neg(&self) -> RingElem {
        let m = &self.modulus.value;
        RingElem {
            residue: (m - &self.residue) % m,
            modulus: self.modulus.clone(),
        }
    }

    /// Multiply by an exact integer.
    pub fn scale(&self, k: &BigInt) -> RingElem {
        let k = self.modulus.from_bigint(k);
        ring_arith(self, &k, RingOp::Mul).expect("same modulus")
    }

    pub fn pow(&self, exp: u64) -> RingElem {
        RingElem {
            residue: self.residue.modpow(&BigUint::from(exp), &self.modulus.value),
            modulus: self.modulus.clone(),
        }
    }

    /// Multiplicative inverse, defined exactly when `p` does not divide the residue.
    pub fn invert(&self) -> Result<RingElem> {
        let m = BigInt::from(self.modulus.value.clone());
        let a = BigInt::from(self.residue.clone());
        let egcd = a.extended_gcd(&m);
        if !egcd.gcd.is_one() {
            let valuation = match valuation_biguint(&self.residue, self.modulus.p) {
                Valuation::Finite(v) => v,
                Valuation::Infinite => u64::from(self.modulus.exponent),
            };
            return Err(Error::NonInvertible {
                residue: self.residue.to_string(),
                modulus: self.modulus.to_string(),
                valuation,
            });
        }
        Ok(self.modulus.from_bigint(&egcd.x))
    }

    /// Largest `e <= m` with `p^e` dividing the residue.
    pub fn valuation(&self) -> Valuation {
        valuation_biguint(&self.residue, self.modulus.p)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.residue.fmt(f)
    }
}

/// p-adic valuation of an integer; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

pub fn valuation(x: &BigInt, p: u64) -> Valuation {
    valuation_biguint(x.magnitude(), p)
}

fn valuation_biguint(x: &BigUint, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigUint::from(p);
    let mut x = x.clone();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        x = q;
        e += 1;
    }
}

/// Strip every factor `p` out of `x`, returning the count.
fn split_p(x: &mut BigUint, p: &BigUint) -> i64 {
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        *x = q;
        e += 1;
    }
}

/// An exact rational written as `sign * p^val * unum / uden` with `unum` and
/// `uden` coprime to `p` and to each other.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicRational {
    p: u64,
    zero: bool,
    negative: bool,
    unum: BigUint,
    uden: BigUint,
    val: i64,
}

impl PadicRational {
    pub fn zero(p: u64) -> Self {
        PadicRational {
            p,
            zero: true,
            negative: false,
            unum: BigUint::one(),
            uden: BigUint::one(),
            val: 0,
        }
    }

    pub fn from_ratio(q: &BigRational, p: u64) -> Self {
        if q.is_zero() {
            return PadicRational::zero(p);
        }
        let negative = q.is_negative();
        let num = q.numer().magnitude().clone();
        let den = q.denom().magnitude().clone();
        Self::normalize(p, negative, num, den)
    }

    pub fn from_integer(x: &BigInt, p: u64) -> Self {
        if x.is_zero() {
            return PadicRational::zero(p);
        }
        Self::normalize(p, x.sign() == Sign::Minus, x.magnitude().clone(), BigUint::one())
    }

    /// `num / den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64, p: u64) -> Self {
        Self::from_ratio(&BigRational::new(num.into(), den.into()), p)
    }

    fn normalize(p: u64, negative: bool, mut num: BigUint, mut den: BigUint) -> Self {
        let pb = BigUint::from(p);
        let val = split_p(&mut num, &pb) - split_p(&mut den, &pb);
        let g = num.gcd(&den);
        PadicRational {
            p,
            zero: false,
            negative,
            unum: num / &g,
            uden: den / &g,
            val,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.zero).then_some(self.val)
    }

    /// Whether the value lies in `Z_(p)`.
    pub fn is_p_integral(&self) -> bool {
        self.zero || self.val >= 0
    }

    pub fn signum(&self) -> i32 {
        match (self.zero, self.negative) {
            (true, _) => 0,
            (false, true) => -1,
            (false, false) => 1,
        }
    }

    pub fn unit_numerator(&self) -> &BigUint {
        &self.unum
    }

    pub fn unit_denominator(&self) -> &BigUint {
        &self.uden
    }

    pub fn to_ratio(&self) -> BigRational {
        if self.zero {
            return BigRational::zero();
        }
        let pv = BigUint::from(self.p).pow(self.val.unsigned_abs() as u32);
        let (mut num, mut den) = (self.unum.clone(), self.uden.clone());
        if self.val >= 0 {
            num *= pv;
        } else {
            den *= pv;
        }
        let sign = if self.negative { Sign::Minus } else { Sign::Plus };
        BigRational::new(BigInt::from_biguint(sign, num), BigInt::from(den))
    }

    fn check_prime(&self, other: &PadicRational) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: alloc::format!("p={}", self.p),
                right: alloc::format!("p={}", other.p),
            })
        }
    }

    pub fn add(&self, other: &PadicRational) -> Result<PadicRational> {
        self.check_prime(other)?;
        Ok(Self::from_ratio(&(self.to_ratio() + other.to_ratio()), self.p))
    }

    pub fn mul(&self, other: &PadicRational) -> Result<PadicRational> {
        self.check_prime(other)?;
        if self.zero || other.zero {
            return Ok(Self::zero(self.p));
        }
        let unum = &self.unum * &other.unum;
        let uden = &self.uden * &other.uden;
        let g = unum.gcd(&uden);
        Ok(PadicRational {
            p: self.p,
            zero: false,
            negative: self.negative != other.negative,
            unum: unum / &g,
            uden: uden / &g,
            val: self.val + other.val,
        })
    }

    pub fn neg(&self) -> PadicRational {
        let mut out = self.clone();
        out.negative = !self.zero && !self.negative;
        out
    }

    /// Multiply by `p^e`.
    pub fn shift(&self, e: i64) -> PadicRational {
        let mut out = self.clone();
        if !out.zero {
            out.val += e;
        }
        out
    }

    /// The image in `Z/p^m`; fails when the value is not a p-adic integer.
    pub fn reduce(&self, modulus: &Modulus) -> Result<RingElem> {
        reduce(self, modulus)
    }
}

impl fmt::Display for PadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_ratio().fmt(f)
    }
}

/// `sign * p^val * unum * uden^-1` in `Z/p^m`.
pub fn reduce(q: &PadicRational, modulus: &Modulus) -> Result<RingElem> {
    if q.p != modulus.p {
        return Err(Error::ModulusMismatch {
            left: alloc::format!("p={}", q.p),
            right: modulus.to_string(),
        });
    }
    if q.zero {
        return Ok(modulus.zero());
    }
    if q.val < 0 {
        return Err(Error::NegativeValuation(q.val));
    }
    if q.val >= i64::from(modulus.exponent) {
        return Ok(modulus.zero());
    }
    let pv = BigUint::from(q.p).pow(q.val as u32);
    let num = modulus.from_biguint(&(pv * &q.unum));
    let inv = modulus.from_biguint(&q.uden).invert()?;
    let out = num.mul(&inv)?;
    Ok(if q.negative { out.neg() } else { out })
}
