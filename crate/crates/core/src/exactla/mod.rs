//! Exact sparse linear algebra over prime fields and the rationals.
//!
//! Ranks over `F_p` use sparse elimination on machine words. Ranks over `Q`
//! either run fraction-free integer elimination (certified) or take the
//! maximum of the ranks modulo a few random 62-bit primes (a lower bound
//! that is exact unless every prime divides the relevant minors).

pub mod field;
pub mod fraction_free;
pub mod modp;
pub mod smith;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use field::{Field, PrimeField, RationalField};
pub use fraction_free::ExactInt;

/// Default guard for dense elimination and Smith normal form, in cells.
pub const DEFAULT_DENSE_GUARD: u64 = 250_000;

/// How ranks over the rationals are obtained.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RationalPolicy {
    /// Maximum of ranks modulo `k` random primes; escalates to a third prime
    /// when `k < 3` and the first `k` disagree.
    MultiPrime { k: usize, seed: u64, primes: Vec<u64> },
    ExactFractionFree,
}

/// The coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rational(RationalPolicy),
    PrimeField(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !modp::is_prime(p) || p >= 1 << 63 {
            return Err(Error::InvalidParams(format!("{p} is not a word-sized prime")));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn multi_prime(k: usize, seed: u64) -> Self {
        let k = k.max(1);
        FieldSpec::Rational(RationalPolicy::MultiPrime {
            k,
            seed,
            primes: modp::random_primes(seed, k.max(3)),
        })
    }

    pub fn exact() -> Self {
        FieldSpec::Rational(RationalPolicy::ExactFractionFree)
    }

    /// `0` for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational(_) => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    /// True when ranks are exact (prime field or fraction-free rationals).
    pub fn is_certified(&self) -> bool {
        !matches!(self, FieldSpec::Rational(RationalPolicy::MultiPrime { .. }))
    }

    /// Short policy label used in reports.
    pub fn policy_name(&self) -> String {
        match self {
            FieldSpec::PrimeField(p) => format!("prime-field({p})"),
            FieldSpec::Rational(RationalPolicy::ExactFractionFree) => "exact-fraction-free".into(),
            FieldSpec::Rational(RationalPolicy::MultiPrime { k, .. }) => format!("multi-prime(k={k})"),
        }
    }

    pub fn primes_used(&self) -> Vec<u64> {
        match self {
            FieldSpec::PrimeField(p) => vec![*p],
            FieldSpec::Rational(RationalPolicy::ExactFractionFree) => vec![],
            FieldSpec::Rational(RationalPolicy::MultiPrime { primes, .. }) => primes.clone(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.policy_name())
    }
}

/// A sparse integer matrix in triplet form, at most one triplet per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix<T> {
    nrows: usize,
    ncols: usize,
    triplets: Vec<(usize, usize, T)>,
}

impl<T: Integer + Signed + Clone> SparseIntMatrix<T> {
    /// Builds from triplets, merging duplicates and dropping zeros.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, T)>) -> Result<Self> {
        for &(r, c, _) in &triplets {
            if r >= nrows {
                return Err(Error::DimensionMismatch { expected: nrows, got: r + 1 });
            }
            if c >= ncols {
                return Err(Error::DimensionMismatch { expected: ncols, got: c + 1 });
            }
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, T)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = last.2.clone() + v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|t| !t.2.is_zero());
        Ok(SparseIntMatrix { nrows, ncols, triplets: merged })
    }

    /// Caller guarantees in-range, distinct, nonzero cells.
    pub fn from_triplets_unchecked(nrows: usize, ncols: usize, triplets: Vec<(usize, usize, T)>) -> Self {
        SparseIntMatrix { nrows, ncols, triplets }
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let triplets = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(j, v)| (i, j, v.clone()))
            })
            .collect();
        SparseIntMatrix { nrows, ncols, triplets }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseIntMatrix { nrows, ncols, triplets: Vec::new() }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn triplets(&self) -> &[(usize, usize, T)] {
        &self.triplets
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (r, c, v) in &self.triplets {
            out[*r][*c] = v.clone();
        }
        out
    }

    /// The matrix with `b` appended as a last column.
    pub fn with_column(&self, b: &[T]) -> Result<Self> {
        if b.len() != self.nrows {
            return Err(Error::DimensionMismatch { expected: self.nrows, got: b.len() });
        }
        let mut triplets = self.triplets.clone();
        triplets.extend(
            b.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, self.ncols, v.clone())),
        );
        Ok(SparseIntMatrix { nrows: self.nrows, ncols: self.ncols + 1, triplets })
    }

    /// Orient along the shorter side: rows of the transpose when there are
    /// more rows than columns (rank is transpose invariant).
    fn rows_along_short_side(&self) -> (Vec<Vec<(u32, T)>>, usize) {
        let transpose = self.nrows > self.ncols;
        let (outer, inner) = if transpose { (self.ncols, self.nrows) } else { (self.nrows, self.ncols) };
        let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); outer];
        for (r, c, v) in &self.triplets {
            let (o, i) = if transpose { (*c, *r) } else { (*r, *c) };
            rows[o].push((i as u32, v.clone()));
        }
        (rows, inner)
    }
}

impl<T: Integer + Signed + Clone + ToPrimitive> SparseIntMatrix<T> {
    fn rank_mod(&self, p: u64) -> usize {
        let (rows, ncols) = self.rows_along_short_side();
        let rows = rows
            .into_iter()
            .map(|row| row.into_iter().map(|(c, v)| (c, reduce(&v, p))).collect())
            .collect();
        modp::sparse_rank(rows, ncols, p)
    }
}

fn reduce<T: Integer + Signed + Clone + ToPrimitive>(v: &T, p: u64) -> u64 {
    match v.to_i64() {
        Some(x) => modp::reduce_i64(x, p),
        None => {
            let pp = T::from_u64_lossy(p);
            let r = v.mod_floor(&pp);
            r.to_u64().expect("residue fits in u64")
        }
    }
}

trait FromU64Lossy {
    fn from_u64_lossy(p: u64) -> Self;
}

impl<T: Integer + Clone> FromU64Lossy for T {
    fn from_u64_lossy(p: u64) -> Self {
        // build p by binary expansion; only reached for values beyond i64
        let two = T::one() + T::one();
        let mut acc = T::zero();
        for bit in (0..64).rev() {
            acc = acc * two.clone();
            if (p >> bit) & 1 == 1 {
                acc = acc + T::one();
            }
        }
        acc
    }
}

/// Outcome of a rank computation, with the agreement flag for multi-prime runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: usize,
    /// All primes consulted agreed (always true for certified policies).
    pub agreed: bool,
    pub primes_consulted: usize,
}

pub fn rank<T: ExactInt + ToPrimitive>(m: &SparseIntMatrix<T>, f: &FieldSpec) -> Result<usize> {
    rank_detailed(m, f).map(|o| o.rank)
}

pub fn rank_detailed<T: ExactInt + ToPrimitive>(m: &SparseIntMatrix<T>, f: &FieldSpec) -> Result<RankOutcome> {
    if m.triplets.is_empty() {
        return Ok(RankOutcome { rank: 0, agreed: true, primes_consulted: 0 });
    }
    match f {
        FieldSpec::PrimeField(p) => Ok(RankOutcome { rank: m.rank_mod(*p), agreed: true, primes_consulted: 1 }),
        FieldSpec::Rational(RationalPolicy::ExactFractionFree) => {
            let (rows, ncols) = m.rows_along_short_side();
            let rank = fraction_free::fraction_free_rank(rows, ncols)?;
            Ok(RankOutcome { rank, agreed: true, primes_consulted: 0 })
        }
        FieldSpec::Rational(RationalPolicy::MultiPrime { k, primes, .. }) => {
            let mut ranks: Vec<usize> = primes[..*k].iter().map(|&p| m.rank_mod(p)).collect();
            let mut agreed = ranks.windows(2).all(|w| w[0] == w[1]);
            if !agreed && ranks.len() < 3 {
                ranks.extend(primes[ranks.len()..3].iter().map(|&p| m.rank_mod(p)));
                agreed = false;
            }
            Ok(RankOutcome {
                rank: ranks.iter().copied().max().unwrap_or(0),
                agreed,
                primes_consulted: ranks.len(),
            })
        }
    }
}

/// Null space basis. Over `F_p` entries are residues in `[0, p)`; over `Q`
/// each vector is scaled to a primitive integer vector.
pub fn kernel_basis<T>(m: &SparseIntMatrix<T>, f: &FieldSpec) -> Result<Vec<Vec<BigInt>>>
where
    T: Integer + Signed + Clone + ToPrimitive,
{
    check_dense_guard(m.nrows, m.ncols, DEFAULT_DENSE_GUARD)?;
    match f {
        FieldSpec::PrimeField(p) => {
            let field = PrimeField::new(*p);
            let kernel = kernel_in(&field, m);
            Ok(kernel
                .into_iter()
                .map(|v| v.into_iter().map(BigInt::from).collect())
                .collect())
        }
        FieldSpec::Rational(RationalPolicy::ExactFractionFree) => {
            let field = RationalField::<BigInt>::new();
            Ok(kernel_in(&field, m).into_iter().map(clear_denominators).collect())
        }
        FieldSpec::Rational(RationalPolicy::MultiPrime { .. }) => Err(Error::UnsupportedPolicy(
            "kernel bases need a certified field; use --exact or a prime characteristic".into(),
        )),
    }
}

/// Null space over an explicit field context.
pub fn kernel_in<F, T>(field: &F, m: &SparseIntMatrix<T>) -> Vec<Vec<F::Elem>>
where
    F: Field,
    T: Integer + Signed + Clone + ToPrimitive,
{
    let mut rows = vec![vec![field.zero(); m.ncols]; m.nrows];
    for (r, c, v) in &m.triplets {
        rows[*r][*c] = field_elem(field, v);
    }
    field::dense_kernel(field, rows, m.ncols)
}

pub(crate) fn field_elem<F: Field, T: Integer + Signed + Clone + ToPrimitive>(field: &F, v: &T) -> F::Elem {
    match v.to_i64() {
        Some(x) => field.from_i64(x),
        None => {
            // split into i64-sized limbs
            let base = T::from_u64_lossy(1 << 32);
            let mut digits = Vec::new();
            let neg = v.is_negative();
            let mut x = v.abs();
            while !x.is_zero() {
                let (q, r) = x.div_rem(&base);
                digits.push(r.to_i64().expect("limb fits"));
                x = q;
            }
            let b = field.from_i64(1 << 32);
            let mut acc = field.zero();
            for d in digits.into_iter().rev() {
                acc = field.add(&field.mul(&acc, &b), &field.from_i64(d));
            }
            if neg {
                field.neg(&acc)
            } else {
                acc
            }
        }
    }
}

fn clear_denominators(v: Vec<num_rational::BigRational>) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Whether `b` lies in the column space of `m`, decided by comparing ranks.
pub fn in_column_space<T: ExactInt + ToPrimitive>(m: &SparseIntMatrix<T>, b: &[T], f: &FieldSpec) -> Result<bool> {
    let augmented = m.with_column(b)?;
    match f {
        FieldSpec::Rational(RationalPolicy::MultiPrime { k, primes, .. }) => {
            // same primes on both sides; membership must hold modulo each
            let k = (*k).max(1);
            Ok(primes[..k].iter().all(|&p| m.rank_mod(p) == augmented.rank_mod(p)))
        }
        _ => Ok(rank(m, f)? == rank(&augmented, f)?),
    }
}

pub fn check_dense_guard(nrows: usize, ncols: usize, guard: u64) -> Result<()> {
    let cells = nrows as u64 * ncols as u64;
    if cells > guard {
        return Err(Error::GuardExceeded {
            what: format!("dense matrix {nrows}x{ncols}"),
            size: cells,
            limit: guard,
            flag: "--dense-guard",
        });
    }
    Ok(())
}

/// Nonzero Smith normal form entries; refuses matrices above `guard` cells.
pub fn elementary_divisors<T>(m: &SparseIntMatrix<T>, guard: u64) -> Result<Vec<BigInt>>
where
    T: Integer + Signed + Clone + ToPrimitive,
{
    check_dense_guard(m.nrows, m.ncols, guard)?;
    let f = RationalField::<BigInt>::new();
    let dense: Vec<Vec<BigInt>> = (0..m.nrows).map(|_| vec![BigInt::zero(); m.ncols]).collect();
    let mut dense = dense;
    for (r, c, v) in &m.triplets {
        dense[*r][*c] = field_elem(&f, v).to_integer();
    }
    Ok(smith::invariant_factors(dense))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[i64]]) -> SparseIntMatrix<i64> {
        SparseIntMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn identity(n: usize) -> SparseIntMatrix<i64> {
        SparseIntMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, 1)).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        let fields = [FieldSpec::exact(), FieldSpec::multi_prime(2, 7), FieldSpec::PrimeField(2)];
        for f in &fields {
            assert_eq!(rank(&identity(5), f).unwrap(), 5);
        }
        let m = dense(&[&[1, 1], &[1, -1]]);
        assert_eq!(rank(&m, &FieldSpec::exact()).unwrap(), 2);
        assert_eq!(rank(&m, &FieldSpec::multi_prime(2, 1)).unwrap(), 2);
        assert_eq!(rank(&m, &FieldSpec::PrimeField(2)).unwrap(), 1);
    }

    #[test]
    fn triplets_merge_and_validate() {
        let m = SparseIntMatrix::from_triplets(2, 2, vec![(0, 0, 1i64), (0, 0, -1), (1, 1, 3)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert!(SparseIntMatrix::from_triplets(2, 2, vec![(2, 0, 1i64)]).is_err());
    }

    #[test]
    fn kernel_examples() {
        let z = SparseIntMatrix::<i64>::zeros(3, 3);
        let k = kernel_basis(&z, &FieldSpec::PrimeField(5)).unwrap();
        assert_eq!(k.len(), 3);
        let m = dense(&[&[1, 1]]);
        let k = kernel_basis(&m, &FieldSpec::PrimeField(5)).unwrap();
        assert_eq!(k, vec![vec![BigInt::from(4), BigInt::from(1)]]);
        let k = kernel_basis(&m, &FieldSpec::exact()).unwrap();
        assert_eq!(k, vec![vec![BigInt::from(-1), BigInt::from(1)]]);
        assert!(matches!(
            kernel_basis(&m, &FieldSpec::multi_prime(2, 0)),
            Err(Error::UnsupportedPolicy(_))
        ));
    }

    #[test]
    fn column_space_examples() {
        let m = dense(&[&[1, 2], &[3, 4], &[5, 6]]);
        for f in [FieldSpec::exact(), FieldSpec::PrimeField(7), FieldSpec::multi_prime(2, 3)] {
            assert!(in_column_space(&m, &[1, 3, 5], &f).unwrap());
            assert!(!in_column_space(&m, &[1, 0, 0], &f).unwrap());
        }
        let z = SparseIntMatrix::<i64>::zeros(2, 2);
        assert!(!in_column_space(&z, &[0, 1], &FieldSpec::exact()).unwrap());
        assert!(matches!(
            in_column_space(&m, &[1], &FieldSpec::exact()),
            Err(Error::DimensionMismatch { .. })
        ));
        // 2 * e_1 is in the span of (2, 0) over Q but the column (1, 0) is not in
        // the span of (2, 0) modulo 2
        let m = dense(&[&[2], &[0]]);
        assert!(in_column_space(&m, &[1, 0], &FieldSpec::exact()).unwrap());
        assert!(!in_column_space(&m, &[1, 0], &FieldSpec::PrimeField(2)).unwrap());
    }

    #[test]
    fn elementary_divisor_examples() {
        let ed = |rows: &[&[i64]]| elementary_divisors(&dense(rows), DEFAULT_DENSE_GUARD).unwrap();
        assert_eq!(ed(&[&[2]]), vec![BigInt::from(2)]);
        assert_eq!(ed(&[&[1, 1], &[1, -1]]), vec![BigInt::from(1), BigInt::from(2)]);
        let big = SparseIntMatrix::<i64>::zeros(600, 600);
        assert!(matches!(
            elementary_divisors(&big, DEFAULT_DENSE_GUARD),
            Err(Error::GuardExceeded { flag: "--dense-guard", .. })
        ));
    }

    #[test]
    fn bigint_entries_reduce() {
        let huge = BigInt::from(1u64 << 62) * BigInt::from(7);
        let m = SparseIntMatrix::from_triplets(1, 1, vec![(0, 0, huge)]).unwrap();
        assert_eq!(rank(&m, &FieldSpec::PrimeField(7)).unwrap(), 0);
        assert_eq!(rank(&m, &FieldSpec::PrimeField(5)).unwrap(), 1);
        assert_eq!(rank(&m, &FieldSpec::exact()).unwrap(), 1);
    }
}
