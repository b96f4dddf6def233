//! Multigraded pieces of the Koszul complex `K(m^c)` and its differential.
//!
//! A K-basis of `K_t(m^c)` consists of the terms `v[u_1,...,u_t]` with `v`
//! any monomial and `u_1 < ... < u_t` distinct monomials of degree `c`
//! (stored as ranks in the canonical monomial order). The differential
//! preserves multidegree, so every computation happens inside one block
//! `K_t(m^c)_alpha`.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, composition_count, enumerate_monomials, ExponentVec, RingParams};
use crate::exactla::SparseIntMatrix;

/// A monomial `v[u_1,...,u_t]` of the Koszul complex.
///
/// Field order matters: the derived ordering compares generator tuples first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KoszulBasisElement {
    pub gens: Vec<u32>,
    pub coeff: ExponentVec,
}

impl KoszulBasisElement {
    /// Build from generators in any order. Returns the sorted element and the
    /// sign of the sorting permutation, or `None` if a generator repeats
    /// (the wedge then vanishes).
    pub fn from_unsorted(coeff: ExponentVec, gens: Vec<u32>) -> Option<(KoszulBasisElement, i8)> {
        let (gens, sign) = sort_with_sign(gens)?;
        Some((KoszulBasisElement { gens, coeff }, sign))
    }

    pub fn degree(&self) -> usize {
        self.gens.len()
    }
}

/// Sort `v`, tracking the parity of the permutation; `None` on repeats.
pub fn sort_with_sign(mut v: Vec<u32>) -> Option<(Vec<u32>, i8)> {
    let mut sign = 1i8;
    // insertion sort: t is small and each swap flips the sign
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 {
            match v[j - 1].cmp(&v[j]) {
                Ordering::Greater => {
                    v.swap(j - 1, j);
                    sign = -sign;
                    j -= 1;
                }
                Ordering::Equal => return None,
                Ordering::Less => break,
            }
        }
    }
    Some((v, sign))
}

/// One block of the differential `d_t : K_t(m^c)_alpha -> K_{t-1}(m^c)_alpha`.
#[derive(Clone, Debug)]
pub struct DifferentialBlock {
    pub t: usize,
    pub alpha: ExponentVec,
    pub cols: Vec<KoszulBasisElement>,
    pub rows: Vec<KoszulBasisElement>,
    /// `(row, col, sign)`, grouped by column.
    pub entries: Vec<(usize, usize, i8)>,
}

impl DifferentialBlock {
    pub fn to_matrix(&self) -> SparseIntMatrix<i64> {
        SparseIntMatrix::from_triplets_unchecked(
            self.rows.len(),
            self.cols.len(),
            self.entries
                .iter()
                .map(|&(r, c, s)| (r, c, i64::from(s)))
                .collect(),
        )
    }
}

/// The Koszul complex `K(m^c)` over `K[X_1..X_n]`, with the degree-`c`
/// monomials precomputed.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    params: RingParams,
    generators: Arc<Vec<ExponentVec>>,
}

impl KoszulComplex {
    pub fn new(params: RingParams) -> Self {
        let generators = Arc::new(enumerate_monomials(params.n(), params.c()));
        KoszulComplex { params, generators }
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    /// The degree-`c` monomial with the given rank.
    pub fn generator(&self, rank: u32) -> &ExponentVec {
        &self.generators[rank as usize]
    }

    pub fn generators(&self) -> &[ExponentVec] {
        &self.generators
    }

    /// `coeff + u_1 + ... + u_t`.
    pub fn multidegree(&self, e: &KoszulBasisElement) -> ExponentVec {
        e.gens
            .iter()
            .fold(e.coeff.clone(), |acc, &g| acc.add(self.generator(g)))
    }

    /// Basis of `K_t(m^c)_alpha`, sorted by generator tuple.
    pub fn block_basis(&self, t: usize, alpha: &ExponentVec) -> Vec<KoszulBasisElement> {
        debug_assert_eq!(alpha.len(), self.params.n());
        let mut out = Vec::new();
        if (alpha.total() as u64) < t as u64 * self.params.c() as u64 {
            return out;
        }
        let mut gens = Vec::with_capacity(t);
        self.collect_basis(t, 0, alpha.clone(), &mut gens, &mut out);
        out
    }

    fn collect_basis(
        &self,
        t: usize,
        start: usize,
        remaining: ExponentVec,
        gens: &mut Vec<u32>,
        out: &mut Vec<KoszulBasisElement>,
    ) {
        if gens.len() == t {
            out.push(KoszulBasisElement {
                gens: gens.clone(),
                coeff: remaining,
            });
            return;
        }
        let need = t - gens.len();
        if (remaining.total() as u64) < need as u64 * self.params.c() as u64 {
            return;
        }
        for g in start..=self.generators.len().saturating_sub(need) {
            if let Some(rest) = remaining.checked_sub(&self.generators[g]) {
                gens.push(g as u32);
                self.collect_basis(t, g + 1, rest, gens, out);
                gens.pop();
            }
        }
    }

    /// The block of `d_t` at `alpha`. Column `v[u_1..u_t]` carries `(-1)^(k-1)`
    /// at row `(v u_k)[.. omit u_k ..]`.
    pub fn differential_block(&self, t: usize, alpha: &ExponentVec) -> DifferentialBlock {
        assert!(t >= 1, "the differential starts in homological degree 1");
        let cols = self.block_basis(t, alpha);
        let rows = if cols.is_empty() {
            Vec::new()
        } else {
            self.block_basis(t - 1, alpha)
        };
        let mut entries = Vec::with_capacity(cols.len() * t);
        let mut face = Vec::with_capacity(t);
        for (j, col) in cols.iter().enumerate() {
            for k in 0..t {
                face.clear();
                face.extend(col.gens.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &g)| g));
                let row = find_by_gens(&rows, &face).expect("face of a basis element lies in the block");
                let sign = if k % 2 == 0 { 1 } else { -1 };
                entries.push((row, j, sign));
            }
        }
        DifferentialBlock {
            t,
            alpha: alpha.clone(),
            cols,
            rows,
            entries,
        }
    }

    /// `dim_K K_t(m^c)_d = binomial(N, t) * binomial(n - 1 + d - tc, n - 1)`.
    pub fn graded_dim(&self, t: usize, d: u32) -> u64 {
        let tc = t as u64 * self.params.c() as u64;
        if (d as u64) < tc {
            return 0;
        }
        binomial(self.params.num_generators() as u64, t as u64)
            * composition_count(self.params.n(), d - tc as u32)
    }
}

/// Binary search a sorted block basis by its generator tuple.
pub fn find_by_gens(basis: &[KoszulBasisElement], gens: &[u32]) -> Option<usize> {
    basis
        .binary_search_by(|e| e.gens.as_slice().cmp(gens))
        .ok()
}
