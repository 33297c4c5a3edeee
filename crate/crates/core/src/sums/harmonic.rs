//! Power sums of inverses and sums over tuples of pairwise-distinct indices.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::ring::{add_mod, inv_mod, mul_mod, pow_mod, Modulus, RingElem};
use crate::{Error, Result};

/// Index ranges for the power sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HarmonicRange {
    /// `1 <= l < p`
    BelowP,
    /// `1 <= l < 2p`, `l != p`
    BelowTwoPExcludingP,
}

impl HarmonicRange {
    fn indices(self, p: u64) -> impl Iterator<Item = u64> {
        let end = match self {
            HarmonicRange::BelowP => p,
            HarmonicRange::BelowTwoPExcludingP => 2 * p,
        };
        (1..end).filter(move |&l| l != p)
    }
}

fn inverse_powers(range: HarmonicRange, modulus: &Modulus) -> Result<(u64, Vec<u64>)> {
    let w = modulus.require_word()?;
    let inv = range
        .indices(modulus.p())
        .map(|l| inv_mod(l % w, w).expect("indices are prime to p"))
        .collect();
    Ok((w, inv))
}

fn power_sum_word(inv: &[u64], alpha: u32, w: u64) -> u64 {
    inv.iter()
        .fold(0, |acc, &i| add_mod(acc, pow_mod(i, u64::from(alpha), w), w))
}

/// `sum_{l in range} l^-alpha` in `Z/p^m`.
pub fn power_sum(alpha: u32, range: HarmonicRange, modulus: &Modulus) -> Result<RingElem> {
    let (w, inv) = inverse_powers(range, modulus)?;
    Ok(modulus.from_u64(power_sum_word(&inv, alpha, w)))
}

/// Every partition of `{0, .., n-1}` into nonempty blocks, generated as
/// restricted growth strings in lexicographic order.
#[derive(Clone, Debug)]
pub struct SetPartitions {
    rgs: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        SetPartitions {
            rgs: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<Vec<usize>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let blocks_count = self.rgs.iter().max().map_or(0, |&m| m + 1);
        let mut blocks = vec![Vec::new(); blocks_count];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        // advance: bump the rightmost position that may still grow
        self.done = true;
        for i in (1..self.rgs.len()).rev() {
            let prefix_max = self.rgs[..i].iter().copied().max().unwrap_or(0);
            if self.rgs[i] <= prefix_max {
                self.rgs[i] += 1;
                for x in &mut self.rgs[i + 1..] {
                    *x = 0;
                }
                self.done = false;
                break;
            }
        }
        Some(blocks)
    }
}

/// Möbius weight `prod_B (-1)^{|B|-1} (|B|-1)!` of a set partition.
fn mobius(blocks: &[Vec<usize>]) -> i128 {
    blocks.iter().fold(1i128, |acc, b| {
        let k = b.len() as i128;
        let fact: i128 = (1..k).product();
        if k % 2 == 0 {
            -acc * fact
        } else {
            acc * fact
        }
    })
}

/// `sum prod_i l_i^-alpha_i` over ordered tuples of pairwise-distinct indices
/// from `range`, expanded over set partitions of the positions into products
/// of power sums.
pub fn distinct_tuple_sum(alphas: &[u32], range: HarmonicRange, modulus: &Modulus) -> Result<RingElem> {
    if alphas.is_empty() {
        return Err(Error::Usage("at least one exponent is required".into()));
    }
    let (w, inv) = inverse_powers(range, modulus)?;
    let mut sums: BTreeMap<u32, u64> = BTreeMap::new();
    let mut acc = 0u64;
    for blocks in SetPartitions::new(alphas.len()) {
        let mut term = 1 % w;
        for b in &blocks {
            let e: u32 = b.iter().map(|&i| alphas[i]).sum();
            let s = *sums.entry(e).or_insert_with(|| power_sum_word(&inv, e, w));
            term = mul_mod(term, s, w);
        }
        let mu = mobius(&blocks);
        let mu_w = (mu.rem_euclid(i128::from(w))) as u64;
        acc = add_mod(acc, mul_mod(term, mu_w, w), w);
    }
    Ok(modulus.from_u64(acc))
}

/// `sum 1/(l_1 ... l_n)` over strictly increasing `l_1 < ... < l_n` in
/// `range`; the distinct-tuple sum divided by `n!`, so `p > n` is required.
pub fn increasing_harmonic_sum(n: usize, range: HarmonicRange, modulus: &Modulus) -> Result<RingElem> {
    let p = modulus.p();
    if p <= n as u64 {
        return Err(Error::Usage(alloc::format!(
            "dividing by {n}! needs p > {n}, got p = {p}"
        )));
    }
    let ones = vec![1u32; n];
    let distinct = distinct_tuple_sum(&ones, range, modulus)?;
    let fact = (1..=n as u64).fold(modulus.one(), |acc, k| {
        acc.mul(&modulus.from_u64(k)).expect("same modulus")
    });
    distinct.mul(&fact.invert()?)
}
