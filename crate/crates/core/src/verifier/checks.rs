use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{CheckId, CheckSpec, LhsMethod, Params};
use crate::bernoulli::bernoulli_exact;
use crate::combinatorics::{binom_exact, casolution, casolution_first_part_sum};
use crate::ring::{is_prime, Modulus, PadicRational, RingElem};
use crate::sums::{distinct_tuple_sum, power_sum, HarmonicRange, Method, MhsQuery, Strategy, SumEngine};
use crate::Error;

#[derive(Debug)]
pub(super) enum Stop {
    Reject(String),
    Error(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Error(e)
    }
}

pub(super) struct Sides {
    pub lhs: RingElem,
    pub rhs: RingElem,
    pub method: LhsMethod,
}

type Eval<T> = core::result::Result<T, Stop>;

fn reject(msg: String) -> Stop {
    Stop::Reject(msg)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Eval<()> {
    if cond {
        Ok(())
    } else {
        Err(reject(msg()))
    }
}

fn field<T: Copy>(v: Option<T>, id: CheckId, name: &str) -> Eval<T> {
    v.ok_or_else(|| Stop::Error(Error::Usage(format!("{id} needs parameter {name}"))))
}

fn modulus(p: u64, m: u32) -> Eval<Modulus> {
    Ok(Modulus::new(p, m)?)
}

fn bern(n: u64, p: u64) -> Eval<PadicRational> {
    Ok(PadicRational::from_ratio(&bernoulli_exact(n)?, p))
}

fn int(x: i64, p: u64) -> PadicRational {
    PadicRational::ratio(x, 1, p)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * i)
}

fn product(factors: &[PadicRational]) -> Eval<PadicRational> {
    let (first, rest) = factors.split_first().expect("nonempty product");
    rest.iter()
        .try_fold(first.clone(), |acc, f| acc.mul(f).map_err(Stop::from))
}

/// Reduces a right-hand side, reporting a negative valuation as an ill-posed
/// statement rather than an arithmetic failure.
fn reduce_rhs(q: &PadicRational, m: &Modulus) -> Eval<RingElem> {
    q.reduce(m).map_err(|e| match e {
        Error::NegativeValuation(v) => Stop::Error(Error::IllPosed(format!(
            "right side has p-adic valuation {v} and cannot be read mod {m}"
        ))),
        other => Stop::Error(other),
    })
}

struct Ctx<'a> {
    engine: &'a dyn SumEngine,
}

impl Ctx<'_> {
    fn run(&self, q: &MhsQuery, strategy: Strategy) -> Eval<(RingElem, Method)> {
        let res = self.engine.mhs(q, strategy)?;
        Ok((res.residue, res.method))
    }

    /// `S_n^(k)(p^r)` in `Z/p^m`.
    fn s(&self, n: u32, k: u64, p: u64, r: u32, m: u32, strategy: Strategy) -> Eval<(RingElem, Method)> {
        self.run(&MhsQuery::harmonic(n, k, p, r)?.with_modulus(m)?, strategy)
    }

    fn s5(&self, k: u64, p: u64, r: u32, m: u32) -> Eval<RingElem> {
        Ok(self.s(5, k, p, r, m, Strategy::Convolution)?.0)
    }
}

pub(super) fn evaluate(spec: &CheckSpec, engine: &dyn SumEngine) -> Eval<Sides> {
    let params = &spec.params;
    let p = params.p;
    if !is_prime(p) {
        return Err(Stop::Error(Error::NotPrime(p)));
    }
    let cx = Ctx { engine };
    use CheckId::*;
    match spec.id {
        ZHAO1 => zhao1(&cx, p),
        ZHOU_ODD | ZHOU_EVEN => zhou(&cx, spec.id, params),
        WANG_PP => wang_pp(&cx, params),
        ZHAO4 => zhao4(&cx, params),
        MAIN => main_thm(&cx, params),
        THM2_R1 | THM2_RGE2 => thm2(&cx, spec.id, params),
        REC_I => rec_i(&cx, params),
        REC_II => rec_ii(&cx, params),
        CASOL_RESIDUE | CASOL_COLSUM => casol(spec.id, params),
        ZHOUXIA | LEMMA_2P => distinct_index_check(spec.id, params),
        COR_LEMCOR | COR_LEMCOR2 => power_corollary(spec.id, params),
        S52MODP => s52(&cx, p),
        REC_ADD1 | REC_ADD2 | REC_S512 | REC_S21 | REC_S5 => lift(&cx, spec.id, params),
        REC_THM2 => rec_thm2(&cx, params),
    }
}

fn above_five(p: u64) -> Eval<()> {
    require(p > 5, || format!("hypothesis p > 5 fails for p = {p}"))
}

fn zhao1(cx: &Ctx, p: u64) -> Eval<Sides> {
    require(p >= 3, || format!("hypothesis p >= 3 fails for p = {p}"))?;
    let m = modulus(p, 1)?;
    let (lhs, method) = cx.s(3, 1, p, 1, 1, Strategy::BruteForce)?;
    let rhs = reduce_rhs(&int(-2, p).mul(&bern(p - 3, p)?)?, &m)?;
    Ok(Sides {
        lhs,
        rhs,
        method: LhsMethod::Engine(method),
    })
}

fn zhou(cx: &Ctx, id: CheckId, params: &Params) -> Eval<Sides> {
    let p = params.p;
    let n = field(params.n, id, "n")?;
    let odd = id == CheckId::ZHOU_ODD;
    require(p >= 5, || format!("hypothesis p >= 5 fails for p = {p}"))?;
    require(n >= 1 && u64::from(n) <= p - 2, || {
        format!("hypothesis 1 <= n <= p - 2 fails for n = {n}, p = {p}")
    })?;
    require((n % 2 == 1) == odd, || {
        format!("{id} covers {} n only, got n = {n}", if odd { "odd" } else { "even" })
    })?;
    // one part summing to p is the single term 1/p
    require(n >= 2, || {
        String::from("n = 1 gives the single term 1/p, which has no residue mod p")
    })?;
    let n64 = u64::from(n);
    let m_exp = if odd { 1 } else { 2 };
    let m = modulus(p, m_exp)?;
    let (lhs, method) = cx.s(n, 1, p, 1, m_exp, Strategy::Auto)?;
    let rhs = if odd {
        let c = PadicRational::from_integer(&-factorial(n64 - 1), p);
        c.mul(&bern(p - n64, p)?)?
    } else {
        product(&[
            PadicRational::ratio(-i64::from(n), 2 * (i64::from(n) + 1), p),
            PadicRational::from_integer(&factorial(n64), p),
            bern(p - n64 - 1, p)?,
        ])?
        .shift(1)
    };
    let rhs = reduce_rhs(&rhs, &m)?;
    Ok(Sides {
        lhs,
        rhs,
        method: LhsMethod::Engine(method),
    })
}

fn wang_pp(cx: &Ctx, params: &Params) -> Eval<Sides> {
    let p = params.p;
    let r = field(params.r, CheckId::WANG_PP, "r")?;
    require(p >= 3, || format!("hypothesis p >= 3 fails for p = {p}"))?;
    require(r >= 1, || String::from("hypothesis r >= 1 fails"))?;
    let m = modulus(p, r)?;
    let (lhs, method) = cx.s(3, 1, p, r, r, Strategy::Convolution)?;
    let rhs = int(-2, p).mul(&bern(p - 3, p)?)?.shift(i64::from(r) - 1);
    Ok(Sides {
        lhs,
        rhs: reduce_rhs(&rhs, &m)?,
        method: LhsMethod::Engine(method),
    })
}

fn zhao4(cx: &Ctx, params: &Params) -> Eval<Sides> {
    let p = params.p;
    let r = field(params.r, CheckId::ZHAO4, "r")?;
    require(p >= 5, || format!("hypothesis p >= 5 fails for p = {p}"))?;
    require(r >= 2, || format!("hypothesis r >= 2 fails for r = {r}"))?;
    let m = modulus(p, r + 1)?;
    let (lhs, method) = cx.s(4, 1, p, r, r + 1, Strategy::Convolution)?;
    let rhs = PadicRational::ratio(-24, 5, p)
        .mul(&bern(p - 5, p)?)?
        .shift(i64::from(r));
    Ok(Sides {
        lhs,
        rhs: reduce_rhs(&rhs, &m)?,
        method: LhsMethod::Engine(method),
    })
}

fn main_thm(cx: &Ctx, params: &Params) -> Eval<Sides> {
    let p = params.p;
    let r = field(params.r, CheckId::MAIN, "r")?;
    above_five(p)?;
    require(r >= 2, || format!("hypothesis r >= 2 fails for r = {r}"))?;
    let m = modulus(p, r)?;
    let (lhs, method) = cx.s(5, 1, p, r, r, Strategy::Convolution)?;
    let rhs = int(-20, p).mul(&bern(p - 5, p)?)?.shift(i64::from(r) - 1);
    Ok(Sides {
        lhs,
        rhs: reduce_rhs(&rhs, &m)?,
        method: LhsMethod::Engine(method),
    })
}

/// Five parts prime to `p` summing to `k p^r`, no upper bound on the parts.
fn thm2(cx: &Ctx, id: CheckId, params: &Params) -> Eval<Sides> {
    let p = params.p;
    let k = field(params.k, id, "k")?;
    let r = if id == CheckId::THM2_R1 {
        1
    } else {
        field(params.r, id, "r")?
    };
    above_five(p)?;
    require(k >= 1 && k % p != 0, || {
        format!("hypothesis p^r || kp^r fails: p = {p} divides k = {k} or k = 0")
    })?;
    if id == CheckId::THM2_RGE2 {
        require(r >= 2, || format!("hypothesis r >= 2 fails for r = {r}"))?;
    }
    let target = p
        .checked_pow(r)
        .and_then(|pr| pr.checked_mul(k))
        .ok_or_else(|| Error::Usage(format!("k p^r overflows for k = {k}, p = {p}, r = {r}")))?;
    let m = modulus(p, r)?;
    let (lhs, method) = cx.run(&MhsQuery::unbounded(5, target, p, r)?, Strategy::Convolution)?;
    let b = bern(p - 5, p)?;
    let rhs = if id == CheckId::THM2_R1 {
        let k = BigInt::from(k);
        let poly = BigInt::from(5) * &k + &k * &k * &k;
        product(&[int(-4, p), PadicRational::from_integer(&poly, p), b])?
    } else {
        product(&[int(-20, p), PadicRational::from_integer(&BigInt::from(k), p), b])?.shift(i64::from(r) - 1)
    };
    Ok(Sides {
        lhs,
        rhs: reduce_rhs(&rhs, &m)?,
        method: LhsMethod::Engine(method),
    })
}

fn small_n(id: CheckId, params: &Params) -> Eval<(u32, u32)> {
    let p = params.p;
    let n = field(params.n, id, "n")?;
    let r = field(params.r, id, "r")?;
    require(n >= 2 && u64::from(n) < p, || {
        format!("hypothesis 2 <= n < p fails for n = {n}, p = {p}")
    })?;
    require(r >= 1, || String::from("hypothesis r >= 1 fails"))?;
    Ok((n, r))
}

fn rec_i(cx: &Ctx, params: &Params) -> Eval<Sides> {
    let (n, r) = small_n(CheckId::REC_I, params)?;
    let k = field(params.k, CheckId::REC_I, "k")?;
    require(k >= 1 && k < u64::from(n), || {
        format!("hypothesis 1 <= k <= n - 1 fails for k = {k}")
    })?;
    let p = params.p;
    let (lhs, method) = cx.s(n, k, p, r, r, Strategy::Auto)?;
    let (mirror, _) = cx.s(n, u64::from(n) - k, p, r, r, Strategy::Auto)?;
    let rhs = if n % 2 == 0 { mirror } else { mirror.neg() };
    Ok(Sides {
        lhs,
        rhs,
        method: LhsMethod::Engine(method),
    })
}

fn rec_ii(cx: &Ctx, params: &Params) -> Eval<Sides> {
    let (n, r) = small_n(CheckId::REC_II, params)?;
    let p = params.p;
    let m = modulus(p, r + 1)?;
    let (lhs, method) = cx.s(n, 1, p, r + 1, r + 1, Strategy::Convolution)?;
    let mut rhs = m.zero();
    for k in 1..u64::from(n) {
        let c = m.from_biguint(&binom_exact(p - k + u64::from(n) - 1, u64::from(n) - 1));
        let (s, _) = cx.s(n, k, p, r, r + 1, Strategy::Convolution)?;
        rhs = rhs.add(&c.mul(&s)?)?;
    }
    Ok(Sides {
        lhs,
        rhs,
        method: LhsMethod::Engine(method),
    })
}

fn casol(id: CheckId, params: &Params) -> Eval<Sides> {
    let p = params.p;
    let a = field(params.a, id, "a")?;
    above_five(p)?;
    require((1..=4).contains(&a), || format!("a must lie in 1..=4, got {a}"))?;
    if id == CheckId::CASOL_RESIDUE {
        let m = modulus(p, 2)?;
        let lhs = m.from_biguint(&casolution(p, a)?);
        let (num, den) = [(-3, 4), (1, 4), (-1, 4), (3, 4)][a as usize - 1];
        let rhs = reduce_rhs(&PadicRational::ratio(num, den, p).shift(1), &m)?;
        Ok(Sides {
            lhs,
            rhs,
            method: LhsMethod::Count,
        })
    } else {
        let m = modulus(p, 1)?;
        let lhs = m.from_biguint(&casolution_first_part_sum(p, a)?);
        Ok(Sides {
            lhs,
            rhs: m.zero(),
            method: LhsMethod::Count,
        })
    }
}

fn alphas_of(id: CheckId, params: &Params) -> Eval<Vec<u32>> {
    let alphas = params
        .alphas
        .clone()
        .ok_or_else(|| Stop::Error(Error::Usage(format!("{id} needs parameter alphas"))))?;
    require(!alphas.is_empty() && alphas.iter().all(|&a| a >= 1), || {
        String::from("exponents must be a nonempty list of positive integers")
    })?;
    Ok(alphas)
}

fn distinct_index_check(id: CheckId, params: &Params) -> Eval<Sides> {
    let p = params.p;
    let alphas = alphas_of(id, params)?;
    let s: u64 = alphas.iter().map(|&a| u64::from(a)).sum();
    require(p >= 3 && s + 3 <= p, || {
        format!("hypothesis sum(alphas) <= p - 3 fails for sum {s}, p = {p}")
    })?;
    let (range, twice) = if id == CheckId::ZHOUXIA {
        (HarmonicRange::BelowP, 1)
    } else {
        (HarmonicRange::BelowTwoPExcludingP, 2)
    };
    let n = alphas.len() as u64;
    let fact = PadicRational::from_integer(&factorial(n - 1), p);
    let si = s as i64;
    let (m_exp, sign_odd, coef, b_index, shift) = if s % 2 == 1 {
        (
            3,
            n % 2 == 1,
            PadicRational::ratio(twice * si * (si + 1), (3 - twice) * (si + 2), p),
            p - s - 2,
            2,
        )
    } else {
        (2, n % 2 == 0, PadicRational::ratio(twice * si, si + 1, p), p - s - 1, 1)
    };
    let m = modulus(p, m_exp)?;
    let lhs = distinct_tuple_sum(&alphas, range, &m)?;
    let mut rhs = product(&[fact, coef, bern(b_index, p)?])?.shift(shift);
    if sign_odd {
        rhs = rhs.neg();
    }
    Ok(Sides {
        lhs,
        rhs: reduce_rhs(&rhs, &m)?,
        method: LhsMethod::Mobius,
    })
}

fn power_corollary(id: CheckId, params: &Params) -> Eval<Sides> {
    let p = params.p;
    let alphas = alphas_of(id, params)?;
    require(alphas.len() == 1, || format!("{id} takes a single exponent"))?;
    let alpha = alphas[0];
    require(p >= u64::from(alpha) + 3, || {
        format!("hypothesis p >= alpha + 3 fails for alpha = {alpha}, p = {p}")
    })?;
    let range = if id == CheckId::COR_LEMCOR {
        HarmonicRange::BelowP
    } else {
        HarmonicRange::BelowTwoPExcludingP
    };
    let m = modulus(p, if alpha % 2 == 1 { 2 } else { 1 })?;
    let lhs = power_sum(alpha, range, &m)?;
    Ok(Sides {
        lhs,
        rhs: m.zero(),
        method: LhsMethod::PowerSum,
    })
}

fn s52(cx: &Ctx, p: u64) -> Eval<Sides> {
    above_five(p)?;
    let m = modulus(p, 1)?;
    let q = MhsQuery::new(5, 2 * p, p, 1, p, true, 1)?;
    let (lhs, method) = cx.run(&q, Strategy::Auto)?;
    let rhs = int(48, p).mul(&bern(p - 5, p)?)?;
    Ok(Sides {
        lhs,
        rhs: reduce_rhs(&rhs, &m)?,
        method: LhsMethod::Engine(method),
    })
}

/// Congruences relating `S_5^(k)(p^(r+1))` to `S_5^(k)(p^r)`, all mod `p^(r+1)`.
fn lift(cx: &Ctx, id: CheckId, params: &Params) -> Eval<Sides> {
    use CheckId::*;
    let p = params.p;
    let r = field(params.r, id, "r")?;
    above_five(p)?;
    let min_r = if id == REC_S5 { 2 } else { 1 };
    require(r >= min_r, || format!("hypothesis r >= {min_r} fails for r = {r}"))?;
    let m = modulus(p, r + 1)?;
    let method = LhsMethod::Engine(Method::Convolution);
    let q = |num: i64, den: i64| reduce_rhs(&PadicRational::ratio(num, den, p), &m);
    let pi = i64::try_from(p).map_err(|_| Error::Usage(format!("p = {p} is too large")))?;
    let combine = |c1: RingElem, s1: &RingElem, c2: RingElem, s2: &RingElem| -> Eval<RingElem> {
        Ok(c1.mul(s1)?.add(&c2.mul(s2)?)?)
    };
    let (lhs, rhs) = match id {
        REC_ADD1 => {
            let c: Vec<RingElem> = (1..=4)
                .map(|a| casolution(p, a).map(|c| m.from_biguint(&c)))
                .collect::<Result<_, _>>()?;
            let s1 = cx.s5(1, p, r, r + 1)?;
            let s2 = cx.s5(2, p, r, r + 1)?;
            let rhs = combine(c[0].sub(&c[3])?, &s1, c[1].sub(&c[2])?, &s2)?;
            (cx.s5(2, p, r + 1, r + 1)?, rhs)
        }
        REC_ADD2 => {
            let s1 = cx.s5(1, p, r, r + 1)?;
            let s2 = cx.s5(2, p, r, r + 1)?;
            let pb = BigInt::from(p);
            let c1 = PadicRational::from_ratio(&num_rational::BigRational::new(&pb * (&pb * &pb + 1), 2.into()), p);
            let c2 = PadicRational::from_ratio(&num_rational::BigRational::new(&pb * (&pb * &pb - 1), 6.into()), p);
            let rhs = combine(reduce_rhs(&c1, &m)?, &s1, reduce_rhs(&c2, &m)?, &s2)?;
            (cx.s5(1, p, r + 1, r + 1)?, rhs)
        }
        REC_S512 => {
            let which = field(params.k, id, "k")?;
            require(which == 1 || which == 2, || {
                format!("k selects the congruence and must be 1 or 2, got {which}")
            })?;
            let s1 = cx.s5(1, p, r, r + 1)?;
            let s2 = cx.s5(2, p, r, r + 1)?;
            let rhs = if which == 1 {
                combine(q(pi, 2)?, &s1, q(-pi, 6)?, &s2)?
            } else {
                combine(q(-3 * pi, 2)?, &s1, q(pi, 2)?, &s2)?
            };
            (cx.s5(which, p, r + 1, r + 1)?, rhs)
        }
        REC_S21 => {
            let s1 = cx.s5(1, p, r + 1, r + 1)?;
            (cx.s5(2, p, r + 1, r + 1)?, s1.mul(&m.from_i64(-3))?)
        }
        REC_S5 => {
            let s1 = cx.s5(1, p, r, r + 1)?;
            (cx.s5(1, p, r + 1, r + 1)?, s1.mul(&m.from_u64(p))?)
        }
        _ => unreachable!("not a lifting congruence"),
    };
    Ok(Sides { lhs, rhs, method })
}

fn rec_thm2(cx: &Ctx, params: &Params) -> Eval<Sides> {
    let p = params.p;
    let r = field(params.r, CheckId::REC_THM2, "r")?;
    let k = field(params.k, CheckId::REC_THM2, "k")?;
    above_five(p)?;
    require(r >= 1, || String::from("hypothesis r >= 1 fails"))?;
    require(k >= 1 && k % p != 0, || {
        format!("hypothesis p^r || kp^r fails: p = {p} divides k = {k} or k = 0")
    })?;
    let target = p
        .checked_pow(r)
        .and_then(|pr| pr.checked_mul(k))
        .ok_or_else(|| Error::Usage(format!("k p^r overflows for k = {k}, p = {p}, r = {r}")))?;
    let m = modulus(p, r)?;
    let (lhs, method) = cx.run(&MhsQuery::unbounded(5, target, p, r)?, Strategy::Convolution)?;
    let mut rhs = m.zero();
    for a in 1..=4u64 {
        let c = binom_exact(k + 4 - a, 4);
        if c == num_bigint::BigUint::default() {
            continue;
        }
        rhs = rhs.add(&m.from_biguint(&c).mul(&cx.s5(a, p, r, r)?)?)?;
    }
    Ok(Sides {
        lhs,
        rhs,
        method: LhsMethod::Engine(method),
    })
}
