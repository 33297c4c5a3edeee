//! Values frozen from an independent exact-fraction implementation (a
//! composition DP over Python `Fraction`s, `sympy.bernoulli` and direct
//! permutation sums), checked against the public API.

use supercong_core::bernoulli::{bernoulli_exact, bernoulli_mod};
use supercong_core::sums::{distinct_tuple_sum, mhs, HarmonicRange, MhsQuery, Strategy};
use supercong_core::Modulus;

/// `(n, target, p, bound, m, residue)`: parts `1 <= l < bound`, prime to `p`.
const SUMS: [(u32, u64, u64, u64, u32, u64); 11] = [
    (3, 5, 5, 5, 1, 3),
    (4, 14, 7, 7, 1, 0),
    (5, 49, 7, 49, 2, 42),
    (3, 27, 3, 27, 3, 9),
    (5, 50, 5, 25, 2, 0),
    (5, 11, 11, 11, 2, 34),
    (4, 25, 5, 25, 3, 5),
    (2, 13, 13, 13, 2, 13),
    (5, 14, 7, 14, 1, 2),
    (5, 21, 7, 21, 1, 0),
    (3, 16, 2, 16, 4, 0),
];

const BERNOULLI: [&str; 23] = [
    "1",
    "-1/2",
    "1/6",
    "0",
    "-1/30",
    "0",
    "1/42",
    "0",
    "-1/30",
    "0",
    "5/66",
    "0",
    "-691/2730",
    "0",
    "7/6",
    "0",
    "-3617/510",
    "0",
    "43867/798",
    "0",
    "-174611/330",
    "0",
    "854513/138",
];

#[test]
fn harmonic_sums_match_oracle() {
    for (n, target, p, bound, m, want) in SUMS {
        let q = MhsQuery::new(n, target, p, 0, bound, true, m).unwrap();
        for strategy in [Strategy::BruteForce, Strategy::Convolution] {
            let got = mhs(&q, strategy).unwrap().residue;
            assert_eq!(got.to_u64(), Some(want), "{q:?} {strategy:?}");
        }
    }
}

#[test]
fn bernoulli_numbers_match_oracle() {
    for (i, want) in BERNOULLI.iter().enumerate() {
        assert_eq!(bernoulli_exact(i as u64).unwrap().to_string(), *want, "B_{i}");
    }
    // 5/66 mod 49
    let m = Modulus::new(7, 2).unwrap();
    assert_eq!(bernoulli_mod(10, &m).unwrap().to_u64(), Some(32));
}

#[test]
fn distinct_tuple_sums_match_oracle() {
    let m = Modulus::new(7, 3).unwrap();
    let cases: [(&[u32], HarmonicRange, u64); 3] = [
        (&[1, 2], HarmonicRange::BelowP, 147),
        (&[2, 1, 1], HarmonicRange::BelowP, 322),
        (&[1, 1], HarmonicRange::BelowTwoPExcludingP, 70),
    ];
    for (alphas, range, want) in cases {
        assert_eq!(
            distinct_tuple_sum(alphas, range, &m).unwrap().to_u64(),
            Some(want),
            "{alphas:?}"
        );
    }
}
