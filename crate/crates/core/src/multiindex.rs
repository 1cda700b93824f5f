//! Multi-indices and the combinatorics around them.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::{Error, Rational, Result};

/// A tuple of non-negative integers indexing Bernstein coefficients.
///
/// Ordering is reverse-lexicographic: `(3,0,0)` sorts before `(2,1,0)`, which
/// is also the order produced by [`enumerate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// `scale` times the unit vector `e_j`.
    pub fn unit(len: usize, j: usize, scale: u32) -> Self {
        let mut m = Self::zeros(len);
        m.0[j] = scale;
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn set(&mut self, j: usize, value: u32) {
        self.0[j] = value;
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `k! = k_0! k_1! ...`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&k| factorial(k)).product()
    }

    /// `x^k` for a weight vector of matching length.
    pub fn power(&self, x: &[Rational]) -> Rational {
        debug_assert_eq!(self.len(), x.len());
        self.0
            .iter()
            .zip(x)
            .filter(|(k, _)| **k > 0)
            .map(|(&k, v)| num_traits::pow(v.clone(), k as usize))
            .fold(Rational::one(), |acc, v| acc * v)
    }

    /// Iterator over the positions with nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, k)| **k > 0).map(|(j, _)| j)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

/// One multi-index per simplotope factor.
///
/// Derived ordering compares block by block, so the first block varies
/// slowest, matching [`enumerate_blocked`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockedMultiIndex(Vec<MultiIndex>);

impl BlockedMultiIndex {
    pub fn new(blocks: Vec<MultiIndex>) -> Self {
        BlockedMultiIndex(blocks)
    }

    pub fn blocks(&self) -> &[MultiIndex] {
        &self.0
    }

    pub fn into_blocks(self) -> Vec<MultiIndex> {
        self.0
    }

    pub fn block(&self, i: usize) -> &MultiIndex {
        &self.0[i]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut MultiIndex {
        &mut self.0[i]
    }

    pub fn num_blocks(&self) -> usize {
        self.0.len()
    }

    pub fn norms(&self) -> Vec<u32> {
        self.0.iter().map(MultiIndex::norm).collect()
    }

    /// Copy with block `i` replaced.
    pub fn with_block(&self, i: usize, block: MultiIndex) -> Self {
        let mut out = self.clone();
        out.0[i] = block;
        out
    }

    /// Concatenation of all blocks.
    pub fn flatten(&self) -> MultiIndex {
        MultiIndex(self.0.iter().flat_map(|b| b.0.iter().copied()).collect())
    }

    /// Splits a flat index into consecutive blocks of the given lengths.
    pub fn split(flat: &MultiIndex, sizes: &[usize]) -> Result<Self> {
        let total: usize = sizes.iter().sum();
        if total != flat.len() {
            return Err(Error::LengthMismatch { expected: total, found: flat.len() });
        }
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            blocks.push(MultiIndex(flat.0[start..start + s].to_vec()));
            start += s;
        }
        Ok(BlockedMultiIndex(blocks))
    }

    /// `k̆! = Π_i k̆_i!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(MultiIndex::factorial).product()
    }
}

impl fmt::Display for BlockedMultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `d!/k!` for `|k| = d`.
pub fn multinomial(degree: u32, k: &MultiIndex) -> Result<Rational> {
    if k.norm() != degree {
        return Err(Error::NormMismatch { expected: degree, found: k.norm() });
    }
    Ok(Rational::from_integer(factorial(degree) / k.factorial()))
}

/// All indices of length `slots` and norm `degree`, reverse-lexicographic.
pub fn enumerate(slots: usize, degree: u32) -> Vec<MultiIndex> {
    assert!(slots >= 1, "a multi-index needs at least one slot");
    let mut out = Vec::new();
    let mut current = vec![0u32; slots];
    fill(&mut current, 0, degree, &mut out);
    out
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for k in (0..=remaining).rev() {
        current[pos] = k;
        fill(current, pos + 1, remaining - k, out);
    }
}

/// Cartesian product of per-block enumerations; block `i` has `nu[i] + 1`
/// slots and norm `delta[i]`.
pub fn enumerate_blocked(nu: &[usize], delta: &[u32]) -> Vec<BlockedMultiIndex> {
    assert_eq!(nu.len(), delta.len(), "type and degree vectors differ in length");
    let per_block: Vec<Vec<MultiIndex>> =
        nu.iter().zip(delta).map(|(&n, &d)| enumerate(n + 1, d)).collect();
    let mut out = vec![BlockedMultiIndex(Vec::new())];
    for choices in &per_block {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for c in choices {
                let mut b = prefix.0.clone();
                b.push(c.clone());
                next.push(BlockedMultiIndex(b));
            }
        }
        out = next;
    }
    out
}
