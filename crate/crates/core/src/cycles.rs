//! Explicit chains of `K(m^c)`: the Koszul relations `z_b(X_i, X_j)`, the
//! alternating-sum cycles, exterior products, and boundary membership.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{
    composition_count, enumerate_monomials, rank_monomial, unrank_monomial, ExponentVec, RingParams,
};
use crate::complex::{find_by_gens, KoszulBasisElement, KoszulComplex};
use crate::error::{Error, Result};
use crate::exactla::{self, ExactInt, FieldSpec, SparseIntMatrix};

/// Largest `t` accepted by [`special_cycle`]; the sum has `(t+1)!` terms.
pub const MAX_SPECIAL_T: usize = 6;

/// Integer coefficient types for chains.
pub trait Coefficient: ExactInt + FromPrimitive + ToPrimitive + Debug {}

impl<T> Coefficient for T where T: ExactInt + FromPrimitive + ToPrimitive + Debug {}

/// A chain in `K_t(m^c)` with integer coefficients on the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleElement<T> {
    params: RingParams,
    t: usize,
    terms: BTreeMap<KoszulBasisElement, T>,
    verified_cycle: bool,
    boundary_over: Vec<FieldSpec>,
}

impl<T: Coefficient> CycleElement<T> {
    pub fn zero(params: RingParams, t: usize) -> Self {
        CycleElement {
            params,
            t,
            terms: BTreeMap::new(),
            verified_cycle: true,
            boundary_over: Vec::new(),
        }
    }

    /// The unit `1[]` of the exterior algebra.
    pub fn unit(params: RingParams) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            KoszulBasisElement {
                gens: Vec::new(),
                coeff: ExponentVec::zero(params.n()),
            },
            T::one(),
        );
        CycleElement {
            params,
            t: 0,
            terms,
            verified_cycle: true,
            boundary_over: Vec::new(),
        }
    }

    /// A single basis term `v[u_1..u_t]` with the generators given as monomials
    /// in any order; the sorting sign is absorbed into the coefficient.
    pub fn monomial_term(params: RingParams, v: ExponentVec, gens: &[ExponentVec], coeff: T) -> Self {
        let mut out = Self::zero(params, gens.len());
        out.verified_cycle = false;
        out.push_unsorted(v, gens.iter().map(|g| rank_monomial(g) as u32).collect(), coeff);
        out
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn degree(&self) -> usize {
        self.t
    }

    pub fn terms(&self) -> &BTreeMap<KoszulBasisElement, T> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_verified_cycle(&self) -> bool {
        self.verified_cycle
    }

    pub fn verified_boundary_over(&self) -> &[FieldSpec] {
        &self.boundary_over
    }

    fn push(&mut self, key: KoszulBasisElement, value: T) {
        if value.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(T::zero);
        *slot = slot.clone() + value;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn push_unsorted(&mut self, coeff: ExponentVec, gens: Vec<u32>, value: T) {
        if let Some((key, sign)) = KoszulBasisElement::from_unsorted(coeff, gens) {
            let v = if sign < 0 { T::zero() - value } else { value };
            self.push(key, v);
        }
    }

    fn generator(&self, rank: u32) -> ExponentVec {
        unrank_monomial(self.params.n(), rank as u64, self.params.c()).expect("generator rank in range")
    }

    /// Multidegree of one basis term.
    pub fn term_multidegree(&self, e: &KoszulBasisElement) -> ExponentVec {
        e.gens.iter().fold(e.coeff.clone(), |acc, &g| acc.add(&self.generator(g)))
    }

    /// Internal degrees of the terms (a homogeneous chain has one).
    pub fn internal_degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(|e| e.coeff.total() + self.t as u32 * self.params.c()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn multidegrees(&self) -> Vec<ExponentVec> {
        let mut ds: Vec<_> = self.terms.keys().map(|e| self.term_multidegree(e)).collect();
        ds.sort();
        ds.dedup();
        ds
    }

    /// Split into multihomogeneous components.
    pub fn components(&self) -> BTreeMap<ExponentVec, CycleElement<T>> {
        let mut out: BTreeMap<ExponentVec, CycleElement<T>> = BTreeMap::new();
        for (e, v) in &self.terms {
            let alpha = self.term_multidegree(e);
            out.entry(alpha)
                .or_insert_with(|| CycleElement {
                    params: self.params,
                    t: self.t,
                    terms: BTreeMap::new(),
                    verified_cycle: false,
                    boundary_over: Vec::new(),
                })
                .terms
                .insert(e.clone(), v.clone());
        }
        out
    }

    pub fn integer_scale(&self, k: &T) -> Self {
        if k.is_zero() {
            return Self::zero(self.params, self.t);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * k.clone();
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.integer_scale(&(T::zero() - T::one()))
    }

    pub fn monomial_scale(&self, v: &ExponentVec) -> Self {
        let mut out = Self::zero(self.params, self.t);
        out.verified_cycle = self.verified_cycle;
        for (e, c) in &self.terms {
            out.terms.insert(
                KoszulBasisElement {
                    gens: e.gens.clone(),
                    coeff: e.coeff.add(v),
                },
                c.clone(),
            );
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.t != other.t {
            return Err(Error::DegenerateInput(format!(
                "cannot add chains of homological degrees {} and {}",
                self.t, other.t
            )));
        }
        let mut out = self.clone();
        out.boundary_over.clear();
        for (e, v) in &other.terms {
            out.push(e.clone(), v.clone());
        }
        out.verified_cycle = self.verified_cycle && other.verified_cycle;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.params.n() != other.params.n() || self.params.c() != other.params.c() {
            return Err(Error::InvalidParams("chains live in different complexes".into()));
        }
        Ok(())
    }

    /// Exterior product; repeated generators cancel.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.params, self.t + other.t);
        out.verified_cycle = self.verified_cycle && other.verified_cycle;
        for (e1, v1) in &self.terms {
            for (e2, v2) in &other.terms {
                let gens: Vec<u32> = e1.gens.iter().chain(&e2.gens).copied().collect();
                out.push_unsorted(e1.coeff.add(&e2.coeff), gens, v1.clone() * v2.clone());
            }
        }
        Ok(out)
    }

    /// `d(v[u_1..u_t]) = sum_k (-1)^(k-1) (v u_k)[.. omit u_k ..]`.
    pub fn apply_differential(&self) -> Result<Self> {
        if self.t == 0 {
            return Err(Error::DegenerateInput("the differential is not defined on K_0".into()));
        }
        let mut out = Self::zero(self.params, self.t - 1);
        for (e, v) in &self.terms {
            for k in 0..self.t {
                let mut gens = e.gens.clone();
                let u = gens.remove(k);
                let val = if k % 2 == 0 { v.clone() } else { T::zero() - v.clone() };
                out.push(
                    KoszulBasisElement {
                        gens,
                        coeff: e.coeff.add(&self.generator(u)),
                    },
                    val,
                );
            }
        }
        Ok(out)
    }

    /// Recompute the differential and set the cycle flag accordingly.
    pub fn verify_cycle(mut self) -> Result<Self> {
        self.verified_cycle = self.t == 0 || self.apply_differential()?.is_zero();
        Ok(self)
    }

    /// Whether every multihomogeneous component lies in the image of
    /// `d_{t+1}` over `field`.
    pub fn is_boundary(&self, complex: &KoszulComplex, field: &FieldSpec) -> Result<bool> {
        for (alpha, comp) in self.components() {
            if !component_is_boundary(complex, self.t, &alpha, &comp.terms, field)
                .map_err(|e| e.in_block(self.t + 1, alpha.coords()))?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// As [`is_boundary`](Self::is_boundary), recording a positive answer on the element.
    pub fn certify_boundary(mut self, complex: &KoszulComplex, field: &FieldSpec) -> Result<(Self, bool)> {
        let ok = self.is_boundary(complex, field)?;
        if ok && !self.boundary_over.contains(field) {
            self.boundary_over.push(field.clone());
        }
        Ok((self, ok))
    }

    /// Dimension of the K-span of the coefficient polynomials `f_i` in
    /// `z = sum f_i [u_i1..u_it]`, computed over the rationals.
    pub fn coefficient_space_dim(&self) -> Result<usize> {
        let mut by_gen: BTreeMap<&[u32], Vec<(&ExponentVec, &T)>> = BTreeMap::new();
        for (e, v) in &self.terms {
            by_gen.entry(e.gens.as_slice()).or_default().push((&e.coeff, v));
        }
        let mut monomials: Vec<&ExponentVec> = self.terms.keys().map(|e| &e.coeff).collect();
        monomials.sort();
        monomials.dedup();
        let mut triplets = Vec::new();
        for (row, poly) in by_gen.values().enumerate() {
            for (m, v) in poly {
                let col = monomials.binary_search(m).expect("monomial collected");
                triplets.push((row, col, to_bigint(*v)));
            }
        }
        let m = SparseIntMatrix::from_triplets_unchecked(by_gen.len(), monomials.len(), triplets);
        exactla::rank(&m, &FieldSpec::exact())
    }

    /// Serializable term list for reports.
    pub fn term_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(e, v)| TermRecord {
                monomial: e.coeff.coords().to_vec(),
                generators: e.gens.iter().map(|&g| self.generator(g).into_coords()).collect(),
                coefficient: v.to_i64().map_or_else(|| format!("{v:?}"), |x| x.to_string()),
            })
            .collect()
    }
}

fn to_bigint<T: Coefficient>(v: &T) -> BigInt {
    match v.to_i64() {
        Some(x) => BigInt::from(x),
        None => BigInt::from_i128(v.to_i128().expect("coefficient fits in i128")).unwrap(),
    }
}

fn component_is_boundary<T: Coefficient>(
    complex: &KoszulComplex,
    t: usize,
    alpha: &ExponentVec,
    terms: &BTreeMap<KoszulBasisElement, T>,
    field: &FieldSpec,
) -> Result<bool> {
    let reduce_zero = |v: &T| match field {
        FieldSpec::PrimeField(p) => to_bigint(v).mod_floor(&BigInt::from(*p)).is_zero(),
        FieldSpec::Rational(_) => v.is_zero(),
    };
    if terms.values().all(reduce_zero) {
        return Ok(true);
    }
    let block = complex.differential_block(t + 1, alpha);
    if block.cols.is_empty() {
        return Ok(false);
    }
    let rows = &block.rows;
    let mut b = vec![BigInt::from(0); rows.len()];
    for (e, v) in terms {
        let i = find_by_gens(rows, &e.gens).expect("term lies in the block basis");
        debug_assert_eq!(rows[i].coeff, e.coeff);
        b[i] = to_bigint(v);
    }
    let m = block.to_matrix();
    let m = SparseIntMatrix::from_triplets_unchecked(
        m.nrows(),
        m.ncols(),
        m.triplets().iter().map(|(r, c, v)| (*r, *c, BigInt::from(*v))).collect(),
    );
    exactla::in_column_space(&m, &b, field)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermRecord {
    pub monomial: Vec<u32>,
    pub generators: Vec<Vec<u32>>,
    pub coefficient: String,
}

/// `X_i[X_j b] - X_j[X_i b]` for a monomial `b` of degree `c - 1`.
pub fn z1_generator<T: Coefficient>(params: RingParams, b: &ExponentVec, i: usize, j: usize) -> Result<CycleElement<T>> {
    let n = params.n();
    if i == j {
        return Err(Error::DegenerateInput(format!("z1 generator needs distinct variables, got {i} twice")));
    }
    if i >= n || j >= n {
        return Err(Error::InvalidParams(format!("variable index out of range for n = {n}")));
    }
    if b.len() != n || b.total() + 1 != params.c() {
        return Err(Error::InvalidParams(format!("b must be a monomial of degree {}", params.c() - 1)));
    }
    let xi = ExponentVec::unit(n, i);
    let xj = ExponentVec::unit(n, j);
    let mut z = CycleElement::zero(params, 1);
    z.push_unsorted(xi.clone(), vec![rank_monomial(&b.add(&xj)) as u32], T::one());
    z.push_unsorted(xj, vec![rank_monomial(&b.add(&xi)) as u32], T::zero() - T::one());
    z.verified_cycle = true;
    Ok(z)
}

/// Data of an alternating-sum cycle: `t+1` monomials `a_i` of degree `s`
/// and `t` monomials `b_i` of degree `c - s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialCycleSpec {
    pub s: u32,
    pub a: Vec<ExponentVec>,
    pub b: Vec<ExponentVec>,
}

impl SpecialCycleSpec {
    pub fn t(&self) -> usize {
        self.b.len()
    }

    fn validate(&self, params: &RingParams) -> Result<()> {
        let t = self.t();
        if self.s < 1 || self.s > params.c() {
            return Err(Error::InvalidParams(format!("s must lie in 1..={}", params.c())));
        }
        if t < 1 || self.a.len() != t + 1 {
            return Err(Error::InvalidParams("need t >= 1, t+1 monomials a and t monomials b".into()));
        }
        if self.a.iter().any(|m| m.len() != params.n() || m.total() != self.s)
            || self.b.iter().any(|m| m.len() != params.n() || m.total() != params.c() - self.s)
        {
            return Err(Error::InvalidParams("monomial degrees do not match s and c - s".into()));
        }
        Ok(())
    }
}

/// `sum over sigma in S_{t+1} of sgn(sigma) a_sigma(t+1) [b_1 a_sigma(1), ..., b_t a_sigma(t)]`.
pub fn special_cycle<T: Coefficient>(params: RingParams, spec: &SpecialCycleSpec) -> Result<CycleElement<T>> {
    spec.validate(&params)?;
    let t = spec.t();
    if t > MAX_SPECIAL_T {
        return Err(Error::GuardExceeded {
            what: "special cycle length t".into(),
            size: t as u64,
            limit: MAX_SPECIAL_T as u64,
            flag: "cycles::MAX_SPECIAL_T",
        });
    }
    let mut z = CycleElement::zero(params, t);
    for (perm, sign) in permutations_with_sign(t + 1) {
        let gens: Vec<u32> = (0..t)
            .map(|i| rank_monomial(&spec.b[i].add(&spec.a[perm[i]])) as u32)
            .collect();
        let v = if sign > 0 { T::one() } else { T::zero() - T::one() };
        z.push_unsorted(spec.a[perm[t]].clone(), gens, v);
    }
    z.verify_cycle()
}

/// All permutations of `0..k` with their signs, in lexicographic order.
pub fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let inversions = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        out.push((perm.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    out
}

/// A Koszul relation `z_b(X_i, X_j)` described by its data, `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Z1Spec {
    pub b: ExponentVec,
    pub i: usize,
    pub j: usize,
}

impl Z1Spec {
    pub fn multidegree(&self) -> ExponentVec {
        let n = self.b.len();
        self.b.add(&ExponentVec::unit(n, self.i)).add(&ExponentVec::unit(n, self.j))
    }

    pub fn build<T: Coefficient>(&self, params: RingParams) -> Result<CycleElement<T>> {
        z1_generator(params, &self.b, self.i, self.j)
    }
}

/// All `z_b(X_i, X_j)` with `i < j`.
pub fn all_z1_specs(params: &RingParams) -> Vec<Z1Spec> {
    let n = params.n();
    let mut out = Vec::new();
    for b in enumerate_monomials(n, params.c() - 1) {
        for i in 0..n {
            for j in i + 1..n {
                out.push(Z1Spec { b: b.clone(), i, j });
            }
        }
    }
    out
}

/// Every set of `t` distinct Koszul relations whose multidegrees sum to `alpha`.
pub fn z1_combinations(params: &RingParams, t: usize, alpha: &ExponentVec) -> Vec<Vec<Z1Spec>> {
    let specs: Vec<(Z1Spec, ExponentVec)> = all_z1_specs(params)
        .into_iter()
        .map(|s| {
            let d = s.multidegree();
            (s, d)
        })
        .filter(|(_, d)| d.divides(alpha))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(t);
    combine(&specs, t, 0, alpha.clone(), &mut chosen, &mut out);
    out
}

fn combine(
    specs: &[(Z1Spec, ExponentVec)],
    t: usize,
    start: usize,
    remaining: ExponentVec,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<Z1Spec>>,
) {
    if chosen.len() == t {
        if remaining.total() == 0 {
            out.push(chosen.iter().map(|&k| specs[k].0.clone()).collect());
        }
        return;
    }
    for k in start..specs.len() {
        if let Some(rest) = remaining.checked_sub(&specs[k].1) {
            chosen.push(k);
            combine(specs, t, k + 1, rest, chosen, out);
            chosen.pop();
        }
    }
}

/// Wedge of the given Koszul relations, in order.
pub fn z1_product<T: Coefficient>(params: RingParams, factors: &[Z1Spec]) -> Result<CycleElement<T>> {
    factors.iter().try_fold(CycleElement::unit(params), |acc, f| acc.wedge(&f.build(params)?))
}

/// How the generators `f = b_{c+1} z_{b_1} ... z_{b_c}` are chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FactorialSampling {
    /// Random monomials and variable pairs; zero products are redrawn.
    Random { samples: usize },
    /// Every generator of the given multidegree.
    Stratum { alpha: ExponentVec },
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorialWitness {
    pub b_last: Vec<u32>,
    pub factors: Vec<Z1Spec>,
    pub multidegree: Vec<u32>,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorialReport {
    pub n: usize,
    pub c: u32,
    pub field: String,
    pub seed: u64,
    pub sampling: FactorialSampling,
    pub checked: usize,
    /// `(c+1)! f` is not a boundary.
    pub failures: Vec<FactorialWitness>,
    /// `f` itself is not a boundary; only a finding when `(c+1)!` vanishes in the field.
    pub non_boundary: Vec<FactorialWitness>,
    /// The characteristic is positive and at most `c + 1`.
    pub small_characteristic: bool,
}

impl FactorialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Violation in a characteristic where the statement applies.
    pub fn is_violation(&self) -> bool {
        !self.failures.is_empty() && !self.small_characteristic
    }
}

pub fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

/// Check that `(c+1)! m^{c-1} Z_1(m^c)^c` consists of boundaries on a
/// sample of generators.
pub fn verify_factorial_theorem(
    complex: &KoszulComplex,
    sampling: &FactorialSampling,
    seed: u64,
    field: &FieldSpec,
) -> Result<FactorialReport> {
    let params = *complex.params();
    let c = params.c();
    let n = params.n();
    if n < 2 {
        return Err(Error::InvalidParams("Koszul relations need at least two variables".into()));
    }
    let p = field.characteristic();
    let small_characteristic = p != 0 && p <= c as u64 + 1;
    let scale = factorial(c + 1);

    let generators: Vec<(ExponentVec, Vec<Z1Spec>)> = match sampling {
        FactorialSampling::Random { samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(*samples);
            let mut attempts = 0;
            while out.len() < *samples && attempts < samples * 100 + 100 {
                attempts += 1;
                let (b_last, factors) = random_factorial_generator(&params, &mut rng);
                let f: CycleElement<i64> = z1_product(params, &factors)?.monomial_scale(&b_last);
                if !f.is_zero() {
                    out.push((b_last, factors));
                }
            }
            out
        }
        FactorialSampling::Stratum { alpha } => {
            if alpha.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: alpha.len() });
            }
            let mut out = Vec::new();
            let bdeg = c - 1;
            for b_last in enumerate_monomials(n, bdeg).into_iter().filter(|b| b.divides(alpha)) {
                let rest = alpha.checked_sub(&b_last).unwrap();
                for factors in z1_combinations(&params, c as usize, &rest) {
                    out.push((b_last.clone(), factors));
                }
            }
            out
        }
    };

    let mut report = FactorialReport {
        n,
        c,
        field: field.policy_name(),
        seed,
        sampling: sampling.clone(),
        checked: 0,
        failures: Vec::new(),
        non_boundary: Vec::new(),
        small_characteristic,
    };
    for (b_last, factors) in generators {
        let f: CycleElement<i64> = z1_product(params, &factors)?.monomial_scale(&b_last);
        if f.is_zero() {
            continue;
        }
        report.checked += 1;
        let witness = || FactorialWitness {
            b_last: b_last.coords().to_vec(),
            factors: factors.clone(),
            multidegree: f.multidegrees()[0].coords().to_vec(),
            terms: f.term_records(),
        };
        if !f.integer_scale(&scale).is_boundary(complex, field)? {
            report.failures.push(witness());
        }
        if !f.is_boundary(complex, field)? {
            report.non_boundary.push(witness());
        }
    }
    Ok(report)
}

fn random_factorial_generator(params: &RingParams, rng: &mut impl Rng) -> (ExponentVec, Vec<Z1Spec>) {
    let n = params.n();
    let bdeg = params.c() - 1;
    let count = composition_count(n, bdeg);
    let monomial = |rng: &mut dyn rand::RngCore| unrank_monomial(n, rng.gen_range(0..count), bdeg).unwrap();
    let b_last = monomial(rng);
    let factors = (0..params.c())
        .map(|_| {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            Z1Spec {
                b: monomial(rng),
                i: i.min(j),
                j: i.max(j),
            }
        })
        .collect();
    (b_last, factors)
}

/// Kinds of random nonzero cycles used for coefficient-space checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomCycleKind {
    Z1,
    Special,
    Wedge,
}

/// A random nonzero verified cycle of homological degree at most `max_t`.
pub fn random_nonzero_cycle(
    params: RingParams,
    kind: RandomCycleKind,
    max_t: usize,
    rng: &mut impl Rng,
) -> Result<CycleElement<i64>> {
    let n = params.n();
    let c = params.c();
    if n < 2 {
        return Err(Error::InvalidParams("cycles need at least two variables".into()));
    }
    for _ in 0..1000 {
        let z = match kind {
            RandomCycleKind::Z1 => {
                let specs = all_z1_specs(&params);
                let s = &specs[rng.gen_range(0..specs.len())];
                let (i, j) = if rng.gen_bool(0.5) { (s.i, s.j) } else { (s.j, s.i) };
                z1_generator(params, &s.b, i, j)?
            }
            RandomCycleKind::Special => {
                let t = rng.gen_range(1..=max_t.max(1));
                let s = rng.gen_range(1..=c);
                let pick = |deg: u32, rng: &mut dyn rand::RngCore| {
                    unrank_monomial(n, rng.gen_range(0..composition_count(n, deg)), deg).unwrap()
                };
                let a = (0..=t).map(|_| pick(s, rng)).collect();
                let b = (0..t).map(|_| pick(c - s, rng)).collect();
                special_cycle(params, &SpecialCycleSpec { s, a, b })?
            }
            RandomCycleKind::Wedge => {
                let t = rng.gen_range(1..=max_t.max(1));
                let specs = all_z1_specs(&params);
                let factors: Vec<Z1Spec> = (0..t).map(|_| specs[rng.gen_range(0..specs.len())].clone()).collect();
                let v = unrank_monomial(n, rng.gen_range(0..composition_count(n, 1)), 1)?;
                let z = z1_product::<i64>(params, &factors)?;
                if rng.gen_bool(0.5) {
                    z.monomial_scale(&v)
                } else {
                    z
                }
            }
        };
        if !z.is_zero() {
            return Ok(z);
        }
    }
    Err(Error::DegenerateInput("could not draw a nonzero cycle".into()))
}

/// Convenience alias for integer chains.
pub type Chain = CycleElement<i64>;

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[u32]) -> ExponentVec {
        ExponentVec::new(v.to_vec())
    }

    fn params(n: usize, c: u32) -> RingParams {
        RingParams::new(n, c).unwrap()
    }

    fn term(p: RingParams, v: &[u32], gens: &[&[u32]], coeff: i64) -> Chain {
        let gens: Vec<ExponentVec> = gens.iter().map(|g| ev(g)).collect();
        CycleElement::monomial_term(p, ev(v), &gens, coeff)
    }

    fn sum(terms: &[Chain]) -> Chain {
        let mut acc = CycleElement::zero(*terms[0].params(), terms[0].degree());
        for t in terms {
            acc = acc.add(t).unwrap();
        }
        acc
    }

    #[test]
    fn z1_generator_example() {
        let p = params(2, 2);
        let z: Chain = z1_generator(p, &ev(&[1, 0]), 0, 1).unwrap();
        // x[xy] - y[x^2]
        let expected = sum(&[term(p, &[1, 0], &[&[1, 1]], 1), term(p, &[0, 1], &[&[2, 0]], -1)]);
        assert_eq!(z.terms(), expected.terms());
        assert!(z.is_verified_cycle());
        assert!(z.apply_differential().unwrap().is_zero());
        assert_eq!(z.internal_degrees(), vec![3]);
        assert_eq!(z.multidegrees(), vec![ev(&[2, 1])]);
        let swapped: Chain = z1_generator(p, &ev(&[1, 0]), 1, 0).unwrap();
        assert_eq!(swapped, z.neg());
        assert!(matches!(z1_generator::<i64>(p, &ev(&[1, 0]), 1, 1), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn degree_two_cycle_in_three_variables() {
        let p = params(3, 2);
        let x = |i| ExponentVec::unit(3, i);
        let spec = SpecialCycleSpec {
            s: 1,
            a: vec![x(0), x(1), x(2)],
            b: vec![x(0), x(1)],
        };
        let z: Chain = special_cycle(p, &spec).unwrap();
        let expected = sum(&[
            term(p, &[0, 0, 1], &[&[2, 0, 0], &[0, 2, 0]], 1),
            term(p, &[0, 1, 0], &[&[2, 0, 0], &[0, 1, 1]], -1),
            term(p, &[1, 0, 0], &[&[1, 1, 0], &[0, 1, 1]], 1),
            term(p, &[0, 1, 0], &[&[1, 0, 1], &[1, 1, 0]], 1),
            term(p, &[1, 0, 0], &[&[1, 0, 1], &[0, 2, 0]], -1),
        ]);
        assert_eq!(z.terms(), expected.terms());
        assert_eq!(z.terms().len(), 5);
        assert!(z.is_verified_cycle());
        assert!(z.coefficient_space_dim().unwrap() >= 3);
    }

    #[test]
    fn special_cycle_with_s_equal_c_is_a_scaled_boundary() {
        let p = params(3, 2);
        let a = vec![ev(&[2, 0, 0]), ev(&[0, 1, 1]), ev(&[1, 0, 1])];
        let spec = SpecialCycleSpec {
            s: 2,
            a: a.clone(),
            b: vec![ev(&[0, 0, 0]); 2],
        };
        let z: Chain = special_cycle(p, &spec).unwrap();
        let gens = CycleElement::monomial_term(p, ExponentVec::zero(3), &a, 1i64);
        let t = 2u32;
        // the alternating sum equals (-1)^t t! d[a_1, ..., a_{t+1}]
        let expected = gens
            .apply_differential()
            .unwrap()
            .integer_scale(&(factorial(t) * if t % 2 == 0 { 1 } else { -1 }));
        assert_eq!(z.terms(), expected.terms());
    }

    #[test]
    fn special_cycle_t1_s1_is_a_koszul_relation() {
        let p = params(3, 3);
        let b = ev(&[1, 0, 1]);
        let spec = SpecialCycleSpec {
            s: 1,
            a: vec![ExponentVec::unit(3, 0), ExponentVec::unit(3, 2)],
            b: vec![b.clone()],
        };
        let z: Chain = special_cycle(p, &spec).unwrap();
        let expected: Chain = z1_generator(p, &b, 2, 0).unwrap();
        assert_eq!(z.terms(), expected.terms());
    }

    #[test]
    fn special_cycle_can_vanish() {
        let p = params(2, 2);
        let x = ExponentVec::unit(2, 0);
        let spec = SpecialCycleSpec {
            s: 1,
            a: vec![x.clone(), x.clone()],
            b: vec![ExponentVec::unit(2, 1)],
        };
        let z: Chain = special_cycle(p, &spec).unwrap();
        assert!(z.is_zero());
        assert!(z.is_verified_cycle());
    }

    #[test]
    fn special_cycle_guard() {
        let p = params(2, 1);
        let x = ExponentVec::unit(2, 0);
        let spec = SpecialCycleSpec {
            s: 1,
            a: vec![x.clone(); 8],
            b: vec![ExponentVec::zero(2); 7],
        };
        assert!(matches!(special_cycle::<i64>(p, &spec), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn wedge_unit_and_commutativity() {
        let p = params(3, 2);
        let z: Chain = z1_generator(p, &ev(&[1, 0, 0]), 0, 2).unwrap();
        let w: Chain = z1_generator(p, &ev(&[0, 1, 0]), 1, 2).unwrap();
        let one = CycleElement::unit(p);
        assert_eq!(z.wedge(&one).unwrap().terms(), z.terms());
        assert_eq!(one.wedge(&z).unwrap().terms(), z.terms());
        let zw = z.wedge(&w).unwrap();
        let wz = w.wedge(&z).unwrap();
        assert_eq!(zw.terms(), wz.neg().terms());
        assert!(zw.is_verified_cycle());
        assert!(zw.apply_differential().unwrap().is_zero());
        assert!(z.wedge(&z).unwrap().is_zero());
    }

    #[test]
    fn scaling_and_addition() {
        let p = params(2, 2);
        let z: Chain = z1_generator(p, &ev(&[0, 1]), 0, 1).unwrap();
        assert!(z.integer_scale(&0).is_zero());
        assert_eq!(z.monomial_scale(&ExponentVec::zero(2)), z);
        assert_eq!(z.monomial_scale(&ExponentVec::unit(2, 0)).internal_degrees(), vec![4]);
        assert!(z.add(&z.neg()).unwrap().is_zero());
        let unit = CycleElement::<i64>::unit(p);
        assert!(matches!(z.add(&unit), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn differential_hand_expansion() {
        // d[x^2, xy, y^2] = x^2[xy, y^2] - xy[x^2, y^2] + y^2[x^2, xy]
        let p = params(2, 2);
        let g = [ev(&[2, 0]), ev(&[1, 1]), ev(&[0, 2])];
        let z = CycleElement::monomial_term(p, ExponentVec::zero(2), &g, 1i64);
        let d = z.apply_differential().unwrap();
        let expected = sum(&[
            term(p, &[2, 0], &[&[1, 1], &[0, 2]], 1),
            term(p, &[1, 1], &[&[2, 0], &[0, 2]], -1),
            term(p, &[0, 2], &[&[2, 0], &[1, 1]], 1),
        ]);
        assert_eq!(d.terms(), expected.terms());
        assert!(d.apply_differential().unwrap().is_zero());
        let single = CycleElement::monomial_term(p, ExponentVec::zero(2), &g[..1], 1i64);
        let d = single.apply_differential().unwrap();
        assert_eq!(d.terms().len(), 1);
        let (e, v) = d.terms().iter().next().unwrap();
        assert!(e.gens.is_empty());
        assert_eq!(e.coeff, g[0]);
        assert_eq!(*v, 1);
    }

    #[test]
    fn boundaries_and_non_boundaries() {
        let p = params(2, 2);
        let k = KoszulComplex::new(p);
        let g = [ev(&[2, 0]), ev(&[1, 1]), ev(&[0, 2])];
        let chain = CycleElement::monomial_term(p, ev(&[1, 0]), &g[..2], 3i64);
        let d = chain.apply_differential().unwrap();
        for f in [FieldSpec::exact(), FieldSpec::PrimeField(2), FieldSpec::multi_prime(2, 9)] {
            assert!(d.is_boundary(&k, &f).unwrap());
        }
        let z: Chain = z1_generator(p, &ev(&[1, 0]), 0, 1).unwrap();
        assert!(!z.is_boundary(&k, &FieldSpec::exact()).unwrap());
        let (z, ok) = d.certify_boundary(&k, &FieldSpec::exact()).unwrap();
        assert!(ok);
        assert_eq!(z.verified_boundary_over(), &[FieldSpec::exact()]);
    }

    #[test]
    fn coefficient_space_examples() {
        let p = params(3, 2);
        let z: Chain = z1_generator(p, &ev(&[0, 0, 1]), 0, 1).unwrap();
        assert_eq!(z.coefficient_space_dim().unwrap(), 2);
        assert_eq!(CycleElement::<i64>::zero(p, 2).coefficient_space_dim().unwrap(), 0);
    }

    #[test]
    fn permutations_cover_symmetric_group() {
        let perms = permutations_with_sign(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().filter(|p| p.1 > 0).count(), 12);
        assert_eq!(permutations_with_sign(1), vec![(vec![0], 1)]);
    }

    #[test]
    fn factorial_theorem_small_rational() {
        let k = KoszulComplex::new(params(3, 2));
        let report = verify_factorial_theorem(&k, &FactorialSampling::Random { samples: 20 }, 5, &FieldSpec::exact()).unwrap();
        assert_eq!(report.checked, 20);
        assert!(report.passed(), "{:?}", report.failures);
    }
}
