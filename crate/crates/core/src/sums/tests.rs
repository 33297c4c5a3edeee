use super::*;
use crate::combinatorics::{count_bounded_compositions, CountQuery, PartBound};
use crate::ring::PadicRational;
use num_bigint::BigUint;
use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

fn q(n: u32, target: u64, p: u64, bound: u64, coprime: bool, m: u32) -> MhsQuery {
    MhsQuery::new(n, target, p, 0, bound, coprime, m).unwrap()
}

/// Tuple count by plain recursion, independent of both engines.
fn enumerate_count(q: &MhsQuery) -> u64 {
    fn go(q: &MhsQuery, slots: u32, rem: u64) -> u64 {
        if slots == 0 {
            return u64::from(rem == 0);
        }
        (1..=rem)
            .filter(|&l| q.allows(l))
            .map(|l| go(q, slots - 1, rem - l))
            .sum()
    }
    go(q, q.n(), q.target())
}

#[test]
fn bruteforce_examples() {
    let r = mhs_bruteforce(&q(3, 5, 5, 5, true, 1)).unwrap();
    assert_eq!(r.residue.to_u64(), Some(3));
    assert_eq!(r.term_count, BigUint::from(6u32));
    assert_eq!(r.method, Method::BruteForce);

    let r = mhs_bruteforce(&q(3, 9, 3, 9, true, 2)).unwrap();
    assert_eq!(r.residue.to_u64(), Some(3));
    // {1,1,7}, {1,4,4}, {2,2,5}: three orderings each
    assert_eq!(r.term_count, BigUint::from(9u32));

    let r = mhs_bruteforce(&q(2, 2, 5, 5, true, 1)).unwrap();
    assert_eq!(r.residue.to_u64(), Some(1));
    assert_eq!(r.term_count, BigUint::from(1u32));
}

#[test]
fn convolution_examples() {
    let r = mhs_convolution(&q(3, 5, 5, 5, true, 1)).unwrap();
    assert_eq!(r.residue.to_u64(), Some(3));
    assert_eq!(r.method, Method::Convolution);
    assert_eq!(r.term_count, BigUint::from(6u32));

    let main = MhsQuery::harmonic(5, 1, 7, 2).unwrap();
    let conv = mhs_convolution(&main).unwrap();
    assert_eq!(conv.residue.to_u64(), Some(42));
    assert_eq!(conv.residue, mhs_bruteforce(&main).unwrap().residue);
    let rhs = PadicRational::ratio(-20, 1, 7)
        .shift(1)
        .mul(&PadicRational::ratio(1, 6, 7))
        .unwrap()
        .reduce(&conv.residue.modulus().clone())
        .unwrap();
    assert_eq!(conv.residue, rhs);

    for (t, m) in [(3u64, 1u32), (10, 2), (12, 3)] {
        let one = q(1, t, 7, t + 1, true, m);
        let r = mhs_convolution(&one).unwrap();
        assert_eq!(r.residue, one.modulus().unwrap().from_u64(t).invert().unwrap());
        assert_eq!(r.term_count, BigUint::from(1u32));
    }
}

#[test]
fn empty_sums_are_zero() {
    // five parts below 5 cannot reach 25, two parts cannot sum to 1
    for query in [q(5, 25, 5, 5, true, 2), q(2, 1, 5, 5, true, 1)] {
        for r in [mhs_bruteforce(&query).unwrap(), mhs_convolution(&query).unwrap()] {
            assert!(r.residue.is_zero());
            assert_eq!(r.term_count, BigUint::default());
        }
    }
    // feasible by size but every admissible tuple would need a multiple of p
    let r = mhs_bruteforce(&q(1, 5, 5, 10, true, 1)).unwrap();
    assert!(r.residue.is_zero() && r.term_count == BigUint::default());
}

#[test]
fn non_coprime_parts_that_are_not_units_fail() {
    let query = q(2, 9, 3, 9, false, 1);
    assert!(matches!(mhs_bruteforce(&query), Err(Error::NonInvertible { .. })));
    assert!(matches!(mhs_convolution(&query), Err(Error::NonInvertible { .. })));
}

#[test]
fn limits_are_enforced() {
    let big = MhsQuery::harmonic(5, 1, 13, 3).unwrap();
    let tight = Limits {
        brute_force_ceiling: 1_000,
        max_poly_len: 100,
        auto_threshold: 10,
    };
    assert!(matches!(
        mhs_bruteforce_with(&big, &tight),
        Err(Error::EnumerationCeiling { .. })
    ));
    assert!(matches!(
        mhs_convolution_with(&big, &tight),
        Err(Error::PolynomialLength {
            needed: 2198,
            limit: 100
        })
    ));
    assert!(mhs_with(&big, Strategy::Auto, &tight).unwrap_err().is_resource_limit());
}

#[test]
fn auto_strategy_threshold() {
    let limits = Limits::default();
    let small = MhsQuery::harmonic(3, 1, 7, 2).unwrap();
    assert_eq!(resolve_strategy(&small, Strategy::Auto, &limits), Method::BruteForce);
    let large = MhsQuery::harmonic(5, 1, 13, 2).unwrap();
    assert_eq!(resolve_strategy(&large, Strategy::Auto, &limits), Method::Convolution);
    assert_eq!(
        resolve_strategy(&large, Strategy::BruteForce, &limits),
        Method::BruteForce
    );
    assert_eq!(mhs(&small, Strategy::Auto).unwrap().method, Method::BruteForce);
}

#[test]
fn query_validation() {
    assert!(MhsQuery::new(0, 5, 5, 1, 5, true, 1).is_err());
    assert!(MhsQuery::new(2, 0, 5, 1, 5, true, 1).is_err());
    assert!(MhsQuery::new(2, 5, 5, 1, 1, true, 1).is_err());
    assert!(MhsQuery::new(2, 5, 6, 1, 5, true, 1).is_err());
    assert!(MhsQuery::new(2, 5, 5, 1, 5, true, 0).is_err());
    assert!(MhsQuery::harmonic(3, 1, 7, 0).is_err());
    let h = MhsQuery::harmonic(4, 3, 5, 2).unwrap();
    assert_eq!((h.target(), h.bound(), h.m(), h.r()), (75, 25, 2, 2));
    assert!(h.coprime());
    let u = MhsQuery::unbounded(5, 98, 7, 2).unwrap();
    assert_eq!((u.target(), u.bound()), (98, 98));
}

/// Every feasible (n <= 5, 1 <= k <= n-1, p in {3,5,7}, p^r <= 49, m <= r+1).
#[test]
fn engines_agree_on_small_grid() {
    for p in [3u64, 5, 7] {
        for r in 1..=3u32 {
            if p.pow(r) > 49 {
                continue;
            }
            for n in 2..=5u32 {
                for k in 1..u64::from(n) {
                    for m in 1..=r + 1 {
                        let query = MhsQuery::harmonic(n, k, p, r).unwrap().with_modulus(m).unwrap();
                        let b = mhs_bruteforce(&query).unwrap();
                        let c = mhs_convolution(&query).unwrap();
                        assert_eq!(b.residue, c.residue, "{query:?}");
                        assert_eq!(b.term_count, c.term_count, "{query:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn term_counts_match_enumeration() {
    for (p, r) in [(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2)] {
        for n in 2..=4u32 {
            for k in 1..u64::from(n) {
                let query = MhsQuery::harmonic(n, k, p, r).unwrap();
                let expect = enumerate_count(&query);
                assert_eq!(mhs_bruteforce(&query).unwrap().term_count, BigUint::from(expect));
                // without coprimality the count is a bounded-composition count
                let plain = query.clone().with_coprime(false);
                if plain.target() < u64::from(n) {
                    assert_eq!(enumerate_count(&plain), 0);
                    continue;
                }
                let shifted =
                    CountQuery::new(plain.target() - u64::from(n), n, PartBound::Below(plain.bound() - 1)).unwrap();
                assert_eq!(
                    BigUint::from(enumerate_count(&plain)),
                    count_bounded_compositions(&shifted)
                );
            }
        }
    }
}

/// `S_n^(k)(p^r) == (-1)^n S_n^(n-k)(p^r)  (mod p^r)`
#[test]
fn reflection_symmetry() {
    for n in 3..=5u32 {
        for p in [7u64, 11] {
            for r in 1..=2u32 {
                for k in 1..u64::from(n) {
                    let a = mhs(&MhsQuery::harmonic(n, k, p, r).unwrap(), Strategy::Auto).unwrap();
                    let b = mhs(&MhsQuery::harmonic(n, u64::from(n) - k, p, r).unwrap(), Strategy::Auto).unwrap();
                    let b = if n % 2 == 0 { b.residue } else { b.residue.neg() };
                    assert_eq!(a.residue, b, "n={n} p={p} r={r} k={k}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engines_agree_on_random_queries(
        n in 1u32..5,
        target in 1u64..40,
        p_idx in 0usize..4,
        bound in 2u64..45,
        coprime in any::<bool>(),
        m in 1u32..4,
    ) {
        let p = [2u64, 3, 5, 7][p_idx];
        let query = q(n, target, p, bound, coprime, m);
        match (mhs_bruteforce(&query), mhs_convolution(&query)) {
            (Ok(b), Ok(c)) => {
                prop_assert_eq!(&b.residue, &c.residue);
                prop_assert_eq!(&b.term_count, &c.term_count);
                prop_assert_eq!(b.term_count, BigUint::from(enumerate_count(&query)));
            }
            (Err(e1), Err(e2)) => prop_assert_eq!(e1, e2),
            (b, c) => prop_assert!(false, "engines disagree on failure: {:?} vs {:?}", b, c),
        }
    }
}
