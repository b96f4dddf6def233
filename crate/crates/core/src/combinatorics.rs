//! Monomials, multidegrees and the variable-permutation symmetry.
//!
//! All monomial lists share one canonical order: lexicographically
//! decreasing on exponent vectors, so `x^2 > xy > y^2`. Ranks are indices
//! into that order and are computed combinatorially.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on internal degrees.
pub const DEFAULT_MAX_DEGREE: u32 = 64;

/// `binomial(n, k)`; panics if the result does not fit in a `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// Number of exponent vectors of length `parts` and total `total`.
pub fn composition_count(parts: usize, total: u32) -> u64 {
    if parts == 0 {
        return u64::from(total == 0);
    }
    binomial(total as u64 + parts as u64 - 1, parts as u64 - 1)
}

/// A multidegree, or equivalently the exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVec(Vec<u32>);

impl ExponentVec {
    pub fn new(coords: Vec<u32>) -> Self {
        ExponentVec(coords)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVec(vec![0; n])
    }

    /// The exponent vector of the variable `X_i` (zero-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVec(v)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &ExponentVec) -> ExponentVec {
        debug_assert_eq!(self.len(), other.len());
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` when `other` does not divide `self`.
    pub fn checked_sub(&self, other: &ExponentVec) -> Option<ExponentVec> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVec)
    }

    pub fn divides(&self, other: &ExponentVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Apply a permutation of the variables: coordinate `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> ExponentVec {
        let mut out = vec![0; self.len()];
        for (i, &e) in self.0.iter().enumerate() {
            out[perm[i]] = e;
        }
        ExponentVec(out)
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Debug for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for ExponentVec {
    fn from(v: Vec<u32>) -> Self {
        ExponentVec(v)
    }
}

/// The ambient ring `K[X_1..X_n]` together with the power `c` of the maximal ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingParams {
    n: usize,
    c: u32,
    max_degree: u32,
}

impl RingParams {
    pub fn new(n: usize, c: u32) -> Result<Self> {
        Self::with_max_degree(n, c, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(n: usize, c: u32, max_degree: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if c == 0 {
            return Err(Error::InvalidParams("c must be at least 1".into()));
        }
        if n > 32 {
            return Err(Error::InvalidParams(format!("n = {n} exceeds 32 variables")));
        }
        if c > max_degree {
            return Err(Error::DegreeBound {
                degree: c,
                bound: max_degree,
            });
        }
        Ok(RingParams { n, c, max_degree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Number of monomials of degree `c`, the rank of the free module `F`.
    pub fn num_generators(&self) -> usize {
        composition_count(self.n, self.c) as usize
    }

    /// The homological length `N - n` beyond which the homology vanishes.
    pub fn top_degree(&self) -> usize {
        self.num_generators() - self.n
    }

    pub fn check_degree(&self, d: u32) -> Result<()> {
        if d > self.max_degree {
            Err(Error::DegreeBound {
                degree: d,
                bound: self.max_degree,
            })
        } else {
            Ok(())
        }
    }
}

/// All monomials of degree `d` in `n` variables, in canonical order.
pub fn enumerate_monomials(n: usize, d: u32) -> Vec<ExponentVec> {
    compositions(n, d).collect()
}

/// Index of `m` in [`enumerate_monomials`] order, computed in `O(n)`.
pub fn rank_monomial(m: &ExponentVec) -> u64 {
    let n = m.len();
    let mut remaining = m.total();
    let mut rank = 0u64;
    for (i, &e) in m.coords().iter().enumerate().take(n.saturating_sub(1)) {
        // vectors with a larger entry here come first
        if remaining > e {
            let tail = (n - i - 1) as u64;
            rank += binomial((remaining - e - 1) as u64 + tail, tail);
        }
        remaining -= e;
    }
    rank
}

/// Inverse of [`rank_monomial`].
pub fn unrank_monomial(n: usize, rank: u64, d: u32) -> Result<ExponentVec> {
    let count = composition_count(n, d);
    if rank >= count {
        return Err(Error::RankOutOfRange {
            rank,
            count,
            degree: d,
        });
    }
    let mut rank = rank;
    let mut remaining = d;
    let mut coords = vec![0u32; n];
    for (i, slot) in coords.iter_mut().enumerate() {
        if i + 1 == n {
            *slot = remaining;
            break;
        }
        let tail = n - i - 1;
        let mut x = remaining;
        loop {
            let block = composition_count(tail, remaining - x);
            if rank < block {
                break;
            }
            rank -= block;
            x -= 1;
        }
        *slot = x;
        remaining -= x;
    }
    Ok(ExponentVec(coords))
}

/// Iterator over all exponent vectors of length `n` and total `d`.
pub struct Compositions {
    current: Option<Vec<u32>>,
}

/// Every exponent vector of length `n` and total `d`, in canonical order.
pub fn compositions(n: usize, d: u32) -> Compositions {
    assert!(n >= 1, "compositions need at least one part");
    let mut first = vec![0; n];
    first[0] = d;
    Compositions {
        current: Some(first),
    }
}

impl Iterator for Compositions {
    type Item = ExponentVec;

    fn next(&mut self) -> Option<ExponentVec> {
        let cur = self.current.take()?;
        let n = cur.len();
        // successor in lex-decreasing order: find the rightmost position
        // (excluding the last) with a positive entry, move one unit right and
        // sweep everything behind it into the slot right after it.
        let mut next = cur.clone();
        let pivot = (0..n.saturating_sub(1)).rev().find(|&i| next[i] > 0);
        if let Some(i) = pivot {
            let tail: u32 = next[i + 1..].iter().sum();
            next[i] -= 1;
            for slot in &mut next[i + 1..] {
                *slot = 0;
            }
            next[i + 1] = tail + 1;
            self.current = Some(next);
        }
        Some(ExponentVec(cur))
    }
}

/// An orbit of multidegrees under permutation of the variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Orbit {
    pub representative: ExponentVec,
    pub size: u64,
}

pub fn canonicalize(alpha: &ExponentVec) -> Orbit {
    let mut coords = alpha.coords().to_vec();
    coords.sort_unstable_by(|a, b| b.cmp(a));
    let size = orbit_size(&coords);
    Orbit {
        representative: ExponentVec(coords),
        size,
    }
}

/// `n! / prod(mult!)` for a sorted coordinate list, as a product of binomials.
fn orbit_size(sorted: &[u32]) -> u64 {
    let mut size = 1u64;
    let mut placed = 0u64;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let run = (j - i) as u64;
        placed += run;
        size *= binomial(placed, run);
        i = j;
    }
    size
}

/// One canonical orbit per partition of `d` into at most `n` parts, in
/// canonical (lex-decreasing) order.
pub fn orbits(n: usize, d: u32) -> Vec<Orbit> {
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(n);
    partitions_into(n, d, d, &mut parts, &mut out);
    out
}

fn partitions_into(n: usize, remaining: u32, cap: u32, parts: &mut Vec<u32>, out: &mut Vec<Orbit>) {
    if parts.len() == n {
        if remaining == 0 {
            let rep = ExponentVec(parts.clone());
            let size = orbit_size(parts);
            out.push(Orbit {
                representative: rep,
                size,
            });
        }
        return;
    }
    let slots_left = (n - parts.len()) as u32;
    let hi = cap.min(remaining);
    for x in (0..=hi).rev() {
        // the remaining slots can hold at most x each
        if x.saturating_mul(slots_left) < remaining {
            break;
        }
        parts.push(x);
        partitions_into(n, remaining - x, x, parts, out);
        parts.pop();
    }
}
