//! Congruences about multiple harmonic sums, each encoded as a check that
//! computes both sides in `Z/p^m` and compares residues.

mod checks;
mod scan;
mod suite;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::ring::{Modulus, RingElem};
use crate::sums::{DirectEngine, Method, SumEngine};
use crate::time::Stopwatch;
use crate::Error;

pub use scan::{
    calibration_coefficient, conjecture_scan, conjecture_scan_with, scan_calibration, Calibration, ScanRow, ScanValue,
};
pub use suite::{run_suite, run_suite_with, suite_specs, SuiteOptions, Summary, MAX_EXPONENT_SUM, THM2_MAX_MULTIPLIER};

macro_rules! check_ids {
    ($($id:ident => $text:literal, $stmt:literal;)*) => {
        /// Identifier of one encoded congruence.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        #[allow(non_camel_case_types)]
        pub enum CheckId {
            $($id,)*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$id,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$id => $text,)*
                }
            }

            /// The congruence being checked, in plain text.
            pub fn statement(self) -> &'static str {
                match self {
                    $(CheckId::$id => $stmt,)*
                }
            }
        }

        impl core::str::FromStr for CheckId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $($text => Ok(CheckId::$id),)*
                    _ => Err(Error::Usage(alloc::format!("unknown check id {s:?}"))),
                }
            }
        }
    };
}

check_ids! {
    ZHAO1 => "ZHAO1", "sum_{i+j+k=p} 1/(ijk) == -2 B_{p-3} (mod p)";
    ZHOU_ODD => "ZHOU_ODD", "sum_{l_1+..+l_n=p} 1/(l_1..l_n) == -(n-1)! B_{p-n} (mod p), n odd";
    ZHOU_EVEN => "ZHOU_EVEN", "sum_{l_1+..+l_n=p} 1/(l_1..l_n) == -n/(2(n+1)) n! B_{p-n-1} p (mod p^2), n even";
    WANG_PP => "WANG_PP", "S_3^(1)(p^r) == -2 p^(r-1) B_{p-3} (mod p^r)";
    ZHAO4 => "ZHAO4", "S_4^(1)(p^r) == -(4!/5) p^r B_{p-5} (mod p^(r+1))";
    MAIN => "MAIN", "S_5^(1)(p^r) == -(5!/6) p^(r-1) B_{p-5} (mod p^r)";
    THM2_R1 => "THM2_R1", "sum_{l_1+..+l_5=kp, l_i prime to p} 1/(l_1..l_5) == -(4!/6)(5k+k^3) B_{p-5} (mod p)";
    THM2_RGE2 => "THM2_RGE2", "sum_{l_1+..+l_5=kp^r, l_i prime to p} 1/(l_1..l_5) == -(5!/6) k p^(r-1) B_{p-5} (mod p^r)";
    REC_I => "REC_I", "S_n^(k)(p^r) == (-1)^n S_n^(n-k)(p^r) (mod p^r)";
    REC_II => "REC_II", "S_n^(1)(p^(r+1)) == sum_{k=1}^{n-1} C(p-k+n-1, n-1) S_n^(k)(p^r) (mod p^(r+1))";
    CASOL_RESIDUE => "CASOL_RESIDUE", "C_a = C(2p-a+4, 4) - 5 C(p-a+4, 4) == (-3/4, 1/4, -1/4, 3/4)[a] p (mod p^2)";
    CASOL_COLSUM => "CASOL_COLSUM", "sum of x_1 over x_1+..+x_5 = 2p-a, 0 <= x_i < p, equals (2p-a)/5 C_a == 0 (mod p)";
    ZHOUXIA => "ZHOUXIA", "distinct l_i < p: sum prod l_i^-alpha_i == (-1)^n (n-1)! s(s+1)/(2(s+2)) B_{p-s-2} p^2 (mod p^3), s odd; (-1)^(n-1) (n-1)! s/(s+1) B_{p-s-1} p (mod p^2), s even";
    COR_LEMCOR => "COR_LEMCOR", "sum_{1<=l<p} l^-alpha == 0 (mod p^2) for odd alpha, (mod p) for even alpha";
    LEMMA_2P => "LEMMA_2P", "distinct l_i < 2p, l_i != p: sum prod l_i^-alpha_i == (-1)^n (n-1)! 2s(s+1)/(s+2) B_{p-s-2} p^2 (mod p^3), s odd; (-1)^(n-1) (n-1)! 2s/(s+1) B_{p-s-1} p (mod p^2), s even";
    COR_LEMCOR2 => "COR_LEMCOR2", "sum_{1<=l<2p, l!=p} l^-alpha == 0 (mod p^2) for odd alpha, (mod p) for even alpha";
    S52MODP => "S52MODP", "sum_{l_1+..+l_5=2p, l_i<p} 1/(l_1..l_5) == 2 4! B_{p-5} (mod p)";
    REC_ADD1 => "REC_ADD1", "S_5^(2)(p^(r+1)) == (C_1-C_4) S_5^(1)(p^r) + (C_2-C_3) S_5^(2)(p^r) (mod p^(r+1))";
    REC_ADD2 => "REC_ADD2", "S_5^(1)(p^(r+1)) == p(p^2+1)/2 S_5^(1)(p^r) + p(p^2-1)/6 S_5^(2)(p^r) (mod p^(r+1))";
    REC_S512 => "REC_S512", "S_5^(1)(p^(r+1)) == p/2 S_5^(1)(p^r) - p/6 S_5^(2)(p^r) (k=1); S_5^(2)(p^(r+1)) == -3p/2 S_5^(1)(p^r) + p/2 S_5^(2)(p^r) (k=2) (mod p^(r+1))";
    REC_S21 => "REC_S21", "S_5^(2)(p^(r+1)) == -3 S_5^(1)(p^(r+1)) (mod p^(r+1))";
    REC_S5 => "REC_S5", "S_5^(1)(p^(r+1)) == p S_5^(1)(p^r) (mod p^(r+1)), r >= 2";
    REC_THM2 => "REC_THM2", "sum_{l_1+..+l_5=kp^r, l_i prime to p} 1/(l_1..l_5) == sum_{a=1}^4 C(k-a+4, 4) S_5^(a)(p^r) (mod p^r)";
}

impl CheckId {
    /// Whether the check is parameterized by a prime-power exponent `r`.
    pub fn uses_r(self) -> bool {
        use CheckId::*;
        matches!(
            self,
            WANG_PP
                | ZHAO4
                | MAIN
                | THM2_RGE2
                | REC_I
                | REC_II
                | REC_ADD1
                | REC_ADD2
                | REC_S512
                | REC_S21
                | REC_S5
                | REC_THM2
        )
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Named integer parameters of a check. Which fields are read depends on the
/// id; `m` is the exponent of the comparison modulus and is filled in by
/// [`run_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    pub p: u64,
    pub r: Option<u32>,
    pub n: Option<u32>,
    pub k: Option<u64>,
    pub a: Option<u32>,
    pub alphas: Option<Vec<u32>>,
    pub m: Option<u32>,
}

impl Params {
    pub fn prime(p: u64) -> Self {
        Params { p, ..Params::default() }
    }

    pub fn with_r(mut self, r: u32) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_k(mut self, k: u64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_a(mut self, a: u32) -> Self {
        self.a = Some(a);
        self
    }

    pub fn with_alphas(mut self, alphas: Vec<u32>) -> Self {
        self.alphas = Some(alphas);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CheckSpec {
    pub id: CheckId,
    pub params: Params,
}

impl CheckSpec {
    pub fn new(id: CheckId, params: Params) -> Self {
        CheckSpec { id, params }
    }
}

/// How the left side was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LhsMethod {
    Engine(Method),
    /// Exact integer counting formula.
    Count,
    /// Direct power sum of inverses.
    PowerSum,
    /// Set-partition expansion of a distinct-index sum.
    Mobius,
}

impl LhsMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LhsMethod::Engine(m) => m.as_str(),
            LhsMethod::Count => "count",
            LhsMethod::PowerSum => "power_sum",
            LhsMethod::Mobius => "mobius",
        }
    }
}

impl fmt::Display for LhsMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Parameters fall outside the statement's hypotheses; nothing was asserted.
    Rejected(String),
    /// The computation could not be carried out.
    Errored(Error),
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Rejected(_) => "rejected",
            Verdict::Errored(_) => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    /// The spec as run, with `params.m` set to the comparison exponent.
    pub spec: CheckSpec,
    pub lhs: Option<RingElem>,
    pub rhs: Option<RingElem>,
    pub modulus: Option<Modulus>,
    pub verdict: Verdict,
    pub lhs_method: Option<LhsMethod>,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn rejected(&self) -> bool {
        matches!(self.verdict, Verdict::Rejected(_))
    }

    pub fn error(&self) -> Option<&Error> {
        match &self.verdict {
            Verdict::Errored(e) => Some(e),
            _ => None,
        }
    }
}

/// Runs a check with a fresh engine and default limits.
pub fn run_check(spec: &CheckSpec) -> CheckResult {
    run_check_with(spec, &DirectEngine::default())
}

pub fn run_check_with(spec: &CheckSpec, engine: &dyn SumEngine) -> CheckResult {
    let clock = Stopwatch::start();
    let mut spec = spec.clone();
    let (lhs, rhs, modulus, verdict, method) = match checks::evaluate(&spec, engine) {
        Ok(sides) => {
            let verdict = if sides.lhs == sides.rhs {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            spec.params.m = Some(sides.lhs.modulus().exponent());
            let modulus = sides.lhs.modulus().clone();
            (
                Some(sides.lhs),
                Some(sides.rhs),
                Some(modulus),
                verdict,
                Some(sides.method),
            )
        }
        Err(checks::Stop::Reject(reason)) => (None, None, None, Verdict::Rejected(reason), None),
        Err(checks::Stop::Error(e)) => (None, None, None, Verdict::Errored(e), None),
    };
    CheckResult {
        spec,
        lhs,
        rhs,
        modulus,
        verdict,
        lhs_method: method,
        elapsed: clock.elapsed(),
    }
}
