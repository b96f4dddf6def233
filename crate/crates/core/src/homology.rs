//! Homology of `K(m^c)` assembled from block ranks, and everything derived
//! from it: Betti tables of the Veronese modules `V(c, k)`, the
//! Green-Lazarsfeld index, the duality check, the vanishing frontier and
//! generator profiles of the cycle modules `Z_t(m^c)`.
//!
//! Every dimension is a sum over multidegrees `alpha` of
//! `dim K_t,alpha - rank d_t,alpha - rank d_{t+1},alpha`. Block ranks are
//! invariant under permuting the variables, so by default one block per
//! orbit is computed and weighted by the orbit size.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::cache::{CacheKey, CacheRecord, RankCache};
use crate::combinatorics::{canonicalize, compositions, orbits, ExponentVec, RingParams};
use crate::complex::{find_by_gens, KoszulBasisElement, KoszulComplex};
use crate::cycles::{z1_combinations, z1_product, Chain};
use crate::error::{Error, Result};
use crate::exactla::{self, field, Field, FieldSpec, PrimeField, RationalField, RationalPolicy};
use crate::ENGINE_VERSION;

/// Largest `t` accepted by [`HomologyEngine::z_generator_profile`].
pub const DEFAULT_ZGEN_MAX_T: usize = 3;

#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Compute one block per permutation orbit of multidegrees.
    pub orbit_reduction: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Keep the per-orbit breakdown of every dimension.
    pub keep_orbits: bool,
    /// Cell limit for dense eliminations (kernels, Smith forms).
    pub dense_guard: u64,
    pub zgen_max_t: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            orbit_reduction: true,
            threads: None,
            keep_orbits: false,
            dense_guard: exactla::DEFAULT_DENSE_GUARD,
            zgen_max_t: DEFAULT_ZGEN_MAX_T,
        }
    }
}

/// A homology dimension with its optional per-orbit support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyDim {
    pub t: usize,
    pub d: u32,
    pub dim: u64,
    /// `(representative, orbit size, dimension per multidegree)`, nonzero only.
    pub support: Vec<OrbitDim>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDim {
    pub representative: Vec<u32>,
    pub size: u64,
    pub dim: u64,
}

/// `(t, d) -> dim H_t(m^c)_d`.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyTable {
    pub params: RingParams,
    pub field: FieldSpec,
    pub entries: BTreeMap<(usize, u32), u64>,
    pub support: BTreeMap<(usize, u32), Vec<OrbitDim>>,
}

impl HomologyTable {
    pub fn get(&self, t: usize, d: u32) -> Option<u64> {
        self.entries.get(&(t, d)).copied()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.values().filter(|&&v| v != 0).count()
    }

    /// Euler characteristic per degree: `sum (-1)^t dim H_t,d` against
    /// `sum (-1)^t dim K_t,d`, for every degree where the table has all `t`.
    pub fn euler_check(&self, complex: &KoszulComplex) -> EulerReport {
        let top = self.params.num_generators();
        let c = self.params.c();
        let degrees: BTreeSet<u32> = self.entries.keys().map(|k| k.1).collect();
        let mut lines = Vec::new();
        for d in degrees {
            let t_hi = top.min((d / c) as usize);
            if !(0..=t_hi).all(|t| self.entries.contains_key(&(t, d))) {
                continue;
            }
            let mut homology = 0i128;
            let mut chains = 0i128;
            for t in 0..=t_hi {
                let sign = if t % 2 == 0 { 1 } else { -1 };
                homology += sign * self.entries[&(t, d)] as i128;
                chains += sign * complex.graded_dim(t, d) as i128;
            }
            lines.push(EulerLine { d, homology, chains });
        }
        EulerReport { lines }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerLine {
    pub d: u32,
    pub homology: i128,
    pub chains: i128,
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    pub lines: Vec<EulerLine>,
}

impl EulerReport {
    pub fn ok(&self) -> bool {
        self.lines.iter().all(|l| l.homology == l.chains)
    }
}

/// `(i, j) -> beta_{i,j}(V(c, k))` over `T = Sym(S_c)`.
#[derive(Clone, Debug, Serialize)]
pub struct BettiTable {
    pub params: RingParams,
    pub k: u32,
    pub field: FieldSpec,
    pub entries: BTreeMap<(usize, u32), u64>,
}

impl BettiTable {
    /// Largest `j` with `beta_{i,j} != 0`.
    pub fn t_i(&self, i: usize) -> Option<u32> {
        self.entries
            .range((i, 0)..=(i, u32::MAX))
            .filter(|(_, &v)| v != 0)
            .map(|(&(_, j), _)| j)
            .max()
    }

    pub fn max_i(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityMismatch {
    pub entry: (usize, u32),
    pub dim: u64,
    pub partner: Option<(usize, u32)>,
    pub partner_dim: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub checked: usize,
    pub recomputed: usize,
    pub mismatches: Vec<DualityMismatch>,
}

impl DualityReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Result of the Green-Lazarsfeld index scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GlIndex {
    /// `N_p` holds for `p = value` and fails for `value + 1`, witnessed by a
    /// nonzero `beta_{i,j}` with `j > i + 1`.
    Exact { value: usize, witness: (usize, u32, u64), i_max: usize },
    /// `N_p` holds for every `p <= i_max`.
    AtLeast { i_max: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenLine {
    pub i: usize,
    pub t_i: u32,
    pub sharpened: bool,
    /// The bound as `t_i < numerator / c`.
    pub bound_numerator: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenReport {
    pub k: u32,
    pub lines: Vec<GreenLine>,
}

impl GreenReport {
    pub fn ok(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }

    pub fn violations(&self) -> Vec<&GreenLine> {
        self.lines.iter().filter(|l| !l.ok).collect()
    }
}

/// Minimal generators of `Z_t(m^c)` per internal degree.
#[derive(Clone, Debug, Serialize)]
pub struct ZProfile {
    pub t: usize,
    pub top_degree: u32,
    /// Degrees scanned: `0..=checked_through`.
    pub checked_through: u32,
    pub generators: BTreeMap<u32, u64>,
    /// In degree `t(c+1)`, `Z_t` is spanned by `S_1 Z_t` plus products of
    /// `t` Koszul relations.
    pub top_layer_spanned_by_z1_power: bool,
}

impl ZProfile {
    pub fn generators_above_top(&self) -> u64 {
        self.generators
            .range(self.top_degree + 1..)
            .map(|(_, &v)| v)
            .sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChardepReport {
    /// Primes dividing some elementary divisor of a scanned block.
    pub primes: BTreeSet<u64>,
    /// Divisor cofactors left after trial division.
    pub unfactored: Vec<String>,
    pub blocks_scanned: usize,
    pub blocks_skipped: usize,
}

/// `(N - n - i, Nc - n - d)` when both are non-negative.
pub fn duality_partner(params: &RingParams, i: usize, d: u32) -> Option<(usize, u32)> {
    let big_n = params.num_generators() as i64;
    let n = params.n() as i64;
    let c = params.c() as i64;
    let i2 = big_n - n - i as i64;
    let d2 = big_n * c - n - d as i64;
    (i2 >= 0 && d2 >= 0).then(|| (i2 as usize, d2 as u32))
}

/// Multigraded form of the duality: `H_t` at `alpha` pairs with
/// `H_{N-n-t}` at `sigma - 1 - alpha`, where every coordinate of `sigma`
/// (the sum of all degree-`c` monomials) is `Nc/n`.
pub fn multidegree_partner(params: &RingParams, t: usize, alpha: &ExponentVec) -> Option<(usize, ExponentVec)> {
    let top = params.top_degree();
    if t > top {
        return None;
    }
    let sigma = (params.num_generators() as u64 * params.c() as u64 / params.n() as u64) as u32;
    let coords: Option<Vec<u32>> = alpha
        .coords()
        .iter()
        .map(|&a| (sigma - 1).checked_sub(a))
        .collect();
    coords.map(|v| (top - t, ExponentVec::new(v)))
}

/// Whether `H_t(m^c)_{tc+j}` sits on a vanishing frontier: `j = t + c`, or
/// `j = t + c - 1` with `t >= c` in characteristic `0` or `> c + 1`.
pub fn on_vanishing_frontier(params: &RingParams, characteristic: u64, t: usize, j: u32) -> bool {
    let c = params.c();
    let t32 = t as u32;
    let good_char = characteristic == 0 || characteristic > c as u64 + 1;
    j == t32 + c || (good_char && t32 >= c && j + 1 == t32 + c)
}

pub struct HomologyEngine {
    complex: KoszulComplex,
    field: FieldSpec,
    opts: EngineOptions,
    cache: Option<Arc<RankCache>>,
    memo: Mutex<HashMap<(usize, ExponentVec), usize>>,
    pool: Option<rayon::ThreadPool>,
    eliminations: AtomicU64,
    disagreements: AtomicU64,
}

impl HomologyEngine {
    pub fn new(params: RingParams, field: FieldSpec) -> Self {
        Self::with_options(params, field, EngineOptions::default())
    }

    pub fn with_options(params: RingParams, field: FieldSpec, opts: EngineOptions) -> Self {
        let pool = opts.threads.map(|n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("worker pool")
        });
        HomologyEngine {
            complex: KoszulComplex::new(params),
            field,
            opts,
            cache: None,
            memo: Mutex::new(HashMap::new()),
            pool,
            eliminations: AtomicU64::new(0),
            disagreements: AtomicU64::new(0),
        }
    }

    pub fn with_cache(mut self, cache: Arc<RankCache>) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn complex(&self) -> &KoszulComplex {
        &self.complex
    }

    pub fn params(&self) -> &RingParams {
        self.complex.params()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn options(&self) -> &EngineOptions {
        &self.opts
    }

    /// Block eliminations actually performed (cache and memo hits excluded).
    pub fn eliminations(&self) -> u64 {
        self.eliminations.load(Ordering::Relaxed)
    }

    /// Multi-prime rank computations whose primes disagreed.
    pub fn disagreements(&self) -> u64 {
        self.disagreements.load(Ordering::Relaxed)
    }

    fn run<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }

    fn cache_key(&self, t: usize, alpha: &ExponentVec) -> CacheKey {
        CacheKey {
            n: self.params().n(),
            c: self.params().c(),
            t,
            alpha_canonical: alpha.coords().to_vec(),
            p: self.field.characteristic(),
        }
    }

    /// Rank of `d_t` at `alpha`.
    pub fn block_rank(&self, t: usize, alpha: &ExponentVec) -> Result<usize> {
        let params = self.params();
        if t == 0 || t > params.num_generators() {
            return Ok(0);
        }
        if (alpha.total() as u64) < t as u64 * params.c() as u64 {
            return Ok(0);
        }
        let key_alpha = if self.opts.orbit_reduction {
            canonicalize(alpha).representative
        } else {
            alpha.clone()
        };
        let memo_key = (t, key_alpha);
        if let Some(&r) = self.memo.lock().unwrap().get(&memo_key) {
            return Ok(r);
        }
        let use_cache = self.opts.orbit_reduction;
        if use_cache {
            if let Some(cache) = &self.cache {
                if let Some(r) = cache.get(&self.cache_key(t, &memo_key.1)) {
                    self.memo.lock().unwrap().insert(memo_key, r);
                    return Ok(r);
                }
            }
        }
        let block = self.complex.differential_block(t, &memo_key.1);
        let outcome = exactla::rank_detailed(&block.to_matrix(), &self.field)
            .map_err(|e| e.in_block(t, memo_key.1.coords()))?;
        drop(block);
        self.eliminations.fetch_add(1, Ordering::Relaxed);
        if !outcome.agreed {
            self.disagreements.fetch_add(1, Ordering::Relaxed);
        }
        if use_cache && outcome.agreed {
            if let Some(cache) = &self.cache {
                cache.put(CacheRecord {
                    n: params.n(),
                    c: params.c(),
                    t,
                    alpha_canonical: memo_key.1.coords().to_vec(),
                    p: self.field.characteristic(),
                    rank: outcome.rank,
                    engine_version: ENGINE_VERSION.to_string(),
                })?;
            }
        }
        self.memo.lock().unwrap().insert(memo_key, outcome.rank);
        Ok(outcome.rank)
    }

    /// `dim H_t(m^c)_alpha`.
    pub fn block_homology(&self, t: usize, alpha: &ExponentVec) -> Result<u64> {
        let size = self.complex.block_basis(t, alpha).len();
        if size == 0 {
            return Ok(0);
        }
        let r_out = self.block_rank(t, alpha)?;
        let r_in = self.block_rank(t + 1, alpha)?;
        Ok((size - r_out - r_in) as u64)
    }

    fn multidegree_jobs(&self, d: u32) -> Vec<(ExponentVec, u64)> {
        let n = self.params().n();
        if self.opts.orbit_reduction {
            orbits(n, d).into_iter().map(|o| (o.representative, o.size)).collect()
        } else {
            compositions(n, d).map(|a| (a, 1)).collect()
        }
    }

    /// `dim_K H_t(m^c)_d`, with its support by orbit.
    pub fn homology_dim(&self, t: usize, d: u32) -> Result<HomologyDim> {
        let table = self.compute_cells(&[(t, d)], true)?;
        Ok(HomologyDim {
            t,
            d,
            dim: table.entries[&(t, d)],
            support: table.support.get(&(t, d)).cloned().unwrap_or_default(),
        })
    }

    fn compute_cells(&self, cells: &[(usize, u32)], keep_support: bool) -> Result<HomologyTable> {
        for &(_, d) in cells {
            self.params().check_degree(d)?;
        }
        let c = self.params().c() as u64;
        let mut jobs = Vec::new();
        for (idx, &(t, d)) in cells.iter().enumerate() {
            if (d as u64) < t as u64 * c {
                continue;
            }
            for (alpha, size) in self.multidegree_jobs(d) {
                jobs.push((idx, alpha, size));
            }
        }
        let results: Vec<Result<u64>> = self.run(|| {
            jobs.par_iter()
                .map(|(idx, alpha, _)| self.block_homology(cells[*idx].0, alpha))
                .collect()
        });
        let mut entries: BTreeMap<(usize, u32), u64> = cells.iter().map(|&cell| (cell, 0)).collect();
        let mut support: BTreeMap<(usize, u32), Vec<OrbitDim>> = BTreeMap::new();
        let keep = keep_support || self.opts.keep_orbits;
        for ((idx, alpha, size), dim) in jobs.into_iter().zip(results) {
            let dim = dim?;
            let cell = cells[idx];
            *entries.get_mut(&cell).unwrap() += size * dim;
            if keep && dim > 0 {
                support.entry(cell).or_default().push(OrbitDim {
                    representative: alpha.into_coords(),
                    size,
                    dim,
                });
            }
        }
        if let Some(cache) = &self.cache {
            cache.flush()?;
        }
        Ok(HomologyTable {
            params: *self.params(),
            field: self.field.clone(),
            entries,
            support,
        })
    }

    /// All `H_t(m^c)_d` with `t <= t_max` and `tc <= d <= d_max`.
    pub fn homology_table(&self, t_max: usize, d_max: u32) -> Result<HomologyTable> {
        self.check_t(t_max)?;
        let c = self.params().c();
        let cells: Vec<(usize, u32)> = (0..=t_max)
            .flat_map(|t| (t as u32 * c..=d_max).map(move |d| (t, d)))
            .collect();
        self.compute_cells(&cells, false)
    }

    /// All `H_t(m^c)_{tc+j}` with `t <= t_max` and `0 <= j <= max_offset`.
    pub fn homology_window(&self, t_max: usize, max_offset: u32) -> Result<HomologyTable> {
        self.check_t(t_max)?;
        let c = self.params().c();
        let cells: Vec<(usize, u32)> = (0..=t_max)
            .flat_map(|t| (0..=max_offset).map(move |j| (t, t as u32 * c + j)))
            .collect();
        self.compute_cells(&cells, false)
    }

    fn check_t(&self, t_max: usize) -> Result<()> {
        let big_n = self.params().num_generators();
        if t_max > big_n {
            return Err(Error::InvalidParams(format!("t_max = {t_max} exceeds N = {big_n}")));
        }
        Ok(())
    }

    /// Work estimate for `H_t,d`: total size of the three chain spaces involved.
    pub fn cost(&self, t: usize, d: u32) -> u64 {
        let k = &self.complex;
        let below = if t > 0 { k.graded_dim(t - 1, d) } else { 0 };
        below + k.graded_dim(t, d) + k.graded_dim(t + 1, d)
    }

    /// `dim H_t,d`, computed on whichever side of the duality is cheaper.
    pub fn homology_dim_fast(&self, t: usize, d: u32) -> Result<u64> {
        if (d as u64) < t as u64 * self.params().c() as u64 {
            return Ok(0);
        }
        match duality_partner(self.params(), t, d) {
            Some((t2, d2)) if self.cost(t2, d2) < self.cost(t, d) => Ok(self.homology_dim(t2, d2)?.dim),
            // with no partner in range the dual dimension is zero
            None if t > self.params().top_degree() => Ok(0),
            _ => Ok(self.homology_dim(t, d)?.dim),
        }
    }

    /// `beta_{i,j}(V(c, k)) = dim H_i(m^c)_{jc + k}`.
    pub fn betti(&self, k: u32, i: usize, j: u32) -> Result<u64> {
        self.check_shift(k)?;
        self.homology_dim_fast(i, j * self.params().c() + k)
    }

    fn check_shift(&self, k: u32) -> Result<()> {
        if k >= self.params().c() {
            return Err(Error::InvalidParams(format!("shift k = {k} must be below c = {}", self.params().c())));
        }
        Ok(())
    }

    /// Range of `j` for row `i`: from `i` through the first degree where
    /// `jc + k >= ic + i + c`, one step past the vanishing bound.
    pub fn betti_window(&self, k: u32, i: usize) -> std::ops::RangeInclusive<u32> {
        let c = self.params().c();
        let i32_ = i as u32;
        let limit = i32_ * c + i32_ + c; // first degree in the vanishing range
        let j_hi = (limit - k).div_ceil(c);
        i32_..=j_hi
    }

    pub fn betti_table(&self, k: u32, i_max: usize) -> Result<BettiTable> {
        self.check_shift(k)?;
        let mut entries = BTreeMap::new();
        let c = self.params().c();
        for i in 0..=i_max {
            for j in self.betti_window(k, i) {
                self.params().check_degree(j * c + k)?;
                entries.insert((i, j), self.betti(k, i, j)?);
            }
        }
        Ok(BettiTable {
            params: *self.params(),
            k,
            field: self.field.clone(),
            entries,
        })
    }

    /// Betti table of `V(c, k)` read off a homology table.
    pub fn betti_from_homology(&self, table: &HomologyTable, k: u32) -> Result<BettiTable> {
        self.check_shift(k)?;
        let c = self.params().c();
        let entries = table
            .entries
            .iter()
            .filter(|(&(_, d), _)| d % c == k)
            .map(|(&(i, d), &v)| ((i, d / c), v))
            .collect();
        Ok(BettiTable {
            params: *self.params(),
            k,
            field: self.field.clone(),
            entries,
        })
    }

    /// `(dim at alpha, partner, dim at partner)` for one multidegree block.
    pub fn block_duality(&self, t: usize, alpha: &ExponentVec) -> Result<(u64, Option<(usize, ExponentVec)>, u64)> {
        let here = self.block_homology(t, alpha)?;
        let partner = multidegree_partner(self.params(), t, alpha);
        let there = match &partner {
            Some((t2, a2)) => self.block_homology(*t2, a2)?,
            None => 0,
        };
        Ok((here, partner, there))
    }

    /// Check `dim H_i,d = dim H_{N-n-i, Nc-n-d}` for every table entry.
    pub fn check_duality(&self, table: &HomologyTable) -> Result<DualityReport> {
        let mut report = DualityReport {
            checked: 0,
            recomputed: 0,
            mismatches: Vec::new(),
        };
        for (&(i, d), &dim) in &table.entries {
            let partner = duality_partner(self.params(), i, d);
            let partner_dim = match partner {
                None => 0,
                Some((i2, d2)) => match table.get(i2, d2) {
                    Some(v) => v,
                    None => {
                        report.recomputed += 1;
                        self.homology_dim(i2, d2)?.dim
                    }
                },
            };
            report.checked += 1;
            if partner_dim != dim {
                report.mismatches.push(DualityMismatch {
                    entry: (i, d),
                    dim,
                    partner,
                    partner_dim,
                });
            }
        }
        Ok(report)
    }

    /// Green-Lazarsfeld index of `S^(c)`, scanning `i = 1..=i_max`.
    ///
    /// Row `i` only needs `j` with `jc < ic + i + c`; above that the
    /// homology vanishes.
    pub fn gl_index(&self, i_max: usize) -> Result<GlIndex> {
        let top = self.params().top_degree();
        if i_max > top {
            return Err(Error::InvalidParams(format!("i_max = {i_max} exceeds N - n = {top}")));
        }
        let c = self.params().c();
        for i in 1..=i_max {
            let i32_ = i as u32;
            let mut j = i32_ + 2;
            while j * c < i32_ * c + i32_ + c {
                let beta = self.betti(0, i, j)?;
                if beta != 0 {
                    return Ok(GlIndex::Exact {
                        value: i - 1,
                        witness: (i, j, beta),
                        i_max,
                    });
                }
                j += 1;
            }
        }
        Ok(GlIndex::AtLeast { i_max })
    }

    /// `t_i < 1 + i + (i - k)/c`, sharpened to `(i - k - 1)/c` for `i >= c`
    /// when the characteristic is `0` or `> c + 1`.
    pub fn check_green_bound(&self, table: &BettiTable) -> GreenReport {
        let c = table.params.c() as i64;
        let p = table.field.characteristic();
        let good_char = p == 0 || p > c as u64 + 1;
        let k = table.k as i64;
        let mut lines = Vec::new();
        for i in 0..=table.max_i() {
            let Some(t_i) = table.t_i(i) else { continue };
            let ii = i as i64;
            let sharpened = good_char && ii >= c;
            let bound_numerator = c * (1 + ii) + ii - k - i64::from(sharpened);
            lines.push(GreenLine {
                i,
                t_i,
                sharpened,
                bound_numerator,
                ok: c * (t_i as i64) < bound_numerator,
            });
        }
        GreenReport { k: table.k, lines }
    }

    /// Minimal generator counts of `Z_t(m^c)` in degrees `0..=t(c+1)+1`,
    /// plus the check that the top layer comes from `Z_1^t`.
    pub fn z_generator_profile(&self, t: usize) -> Result<ZProfile> {
        if t > self.opts.zgen_max_t {
            return Err(Error::GuardExceeded {
                what: "generator profile degree t".into(),
                size: t as u64,
                limit: self.opts.zgen_max_t as u64,
                flag: "--zgen-max-t",
            });
        }
        match &self.field {
            FieldSpec::PrimeField(p) => self.z_profile_in(&PrimeField::new(*p), t),
            FieldSpec::Rational(RationalPolicy::ExactFractionFree) => {
                self.z_profile_in(&RationalField::<BigInt>::new(), t)
            }
            FieldSpec::Rational(RationalPolicy::MultiPrime { .. }) => Err(Error::UnsupportedPolicy(
                "generator profiles need kernel bases; use --exact or a prime characteristic".into(),
            )),
        }
    }

    fn z_profile_in<F: Field>(&self, field: &F, t: usize) -> Result<ZProfile> {
        let params = *self.params();
        let c = params.c();
        let n = params.n();
        let top = t as u32 * (c + 1);
        let checked_through = top + 1;
        params.check_degree(checked_through)?;
        let mut kernels: HashMap<ExponentVec, Arc<CycleSpace<F::Elem>>> = HashMap::new();
        let mut generators = BTreeMap::new();
        let mut spanned = true;
        for d in 0..=checked_through {
            let mut count = 0u64;
            for (alpha, size) in self.multidegree_jobs(d) {
                let here = self.cycle_space(field, t, &alpha, &mut kernels)?;
                let dim_z = here.kernel.len();
                if dim_z == 0 {
                    continue;
                }
                let width = here.basis.len();
                let mut images: Vec<Vec<F::Elem>> = Vec::new();
                for var in 0..n {
                    let unit = ExponentVec::unit(n, var);
                    let Some(beta) = alpha.checked_sub(&unit) else { continue };
                    let below = self.cycle_space(field, t, &beta, &mut kernels)?;
                    for v in &below.kernel {
                        let mut w = vec![field.zero(); width];
                        for (idx, x) in v.iter().enumerate() {
                            if field.is_zero(x) {
                                continue;
                            }
                            let e = &below.basis[idx];
                            let pos = find_by_gens(&here.basis, &e.gens).expect("shifted term in block");
                            w[pos] = x.clone();
                        }
                        images.push(w);
                    }
                }
                let lower = field::dense_rank(field, images.clone(), width);
                count += size * (dim_z - lower) as u64;
                if d == top {
                    let mut all = images;
                    for factors in z1_combinations(&params, t, &alpha) {
                        let prod: Chain = z1_product(params, &factors)?;
                        let mut w = vec![field.zero(); width];
                        for (e, v) in prod.terms() {
                            let pos = find_by_gens(&here.basis, &e.gens).expect("product term in block");
                            w[pos] = field.from_i64(*v);
                        }
                        all.push(w);
                    }
                    if field::dense_rank(field, all, width) != dim_z {
                        spanned = false;
                    }
                }
            }
            generators.insert(d, count);
        }
        Ok(ZProfile {
            t,
            top_degree: top,
            checked_through,
            generators,
            top_layer_spanned_by_z1_power: spanned,
        })
    }

    fn cycle_space<F: Field>(
        &self,
        field: &F,
        t: usize,
        alpha: &ExponentVec,
        memo: &mut HashMap<ExponentVec, Arc<CycleSpace<F::Elem>>>,
    ) -> Result<Arc<CycleSpace<F::Elem>>> {
        if let Some(s) = memo.get(alpha) {
            return Ok(s.clone());
        }
        let basis = self.complex.block_basis(t, alpha);
        let kernel = if t == 0 || basis.is_empty() {
            (0..basis.len())
                .map(|i| {
                    let mut v = vec![field.zero(); basis.len()];
                    v[i] = field.one();
                    v
                })
                .collect()
        } else {
            let block = self.complex.differential_block(t, alpha);
            exactla::check_dense_guard(block.rows.len(), block.cols.len(), self.opts.dense_guard)
                .map_err(|e| e.in_block(t, alpha.coords()))?;
            exactla::kernel_in(field, &block.to_matrix())
        };
        let space = Arc::new(CycleSpace { basis, kernel });
        memo.insert(alpha.clone(), space.clone());
        Ok(space)
    }

    /// Primes at which some dimension in the range can differ from
    /// characteristic zero: the prime factors of the elementary divisors
    /// of every block of `d_t`, `1 <= t <= t_max + 1`, in degrees
    /// `d_min..=d_max`.
    pub fn chardep_scan(&self, t_max: usize, d_min: u32, d_max: u32) -> Result<ChardepReport> {
        let mut report = ChardepReport {
            primes: BTreeSet::new(),
            unfactored: Vec::new(),
            blocks_scanned: 0,
            blocks_skipped: 0,
        };
        let top = self.params().num_generators();
        for t in 1..=(t_max + 1).min(top) {
            for d in d_min..=d_max {
                self.params().check_degree(d)?;
                for (alpha, _) in self.multidegree_jobs(d) {
                    let block = self.complex.differential_block(t, &alpha);
                    if block.cols.is_empty() {
                        continue;
                    }
                    let cells = block.rows.len() as u64 * block.cols.len() as u64;
                    if cells > self.opts.dense_guard {
                        report.blocks_skipped += 1;
                        continue;
                    }
                    report.blocks_scanned += 1;
                    let divisors = exactla::elementary_divisors(&block.to_matrix(), self.opts.dense_guard)
                        .map_err(|e| e.in_block(t, alpha.coords()))?;
                    for dvs in divisors.into_iter().filter(|x| !x.is_one()) {
                        let (primes, rest) = trial_factor(dvs);
                        report.primes.extend(primes);
                        if let Some(r) = rest {
                            report.unfactored.push(r.to_string());
                        }
                    }
                }
            }
        }
        report.unfactored.sort();
        report.unfactored.dedup();
        Ok(report)
    }
}

struct CycleSpace<E> {
    basis: Vec<KoszulBasisElement>,
    kernel: Vec<Vec<E>>,
}

/// Prime factors up to `10^6`, plus the remaining cofactor if it is not 1.
fn trial_factor(mut x: BigInt) -> (Vec<u64>, Option<BigInt>) {
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p <= 1_000_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > x {
            break;
        }
        if x.is_multiple_of(&bp) {
            primes.push(p);
            while x.is_multiple_of(&bp) {
                x /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if x.is_one() || x.is_zero() {
        return (primes, None);
    }
    match x.to_u64() {
        Some(v) if v <= 1_000_000_000_000 => {
            primes.push(v);
            (primes, None)
        }
        _ => (primes, Some(x)),
    }
}
