//! Field contexts and dense elimination generic over them.
//!
//! Elements of `F_p` carry no modulus of their own, so arithmetic goes
//! through a context value implementing [`Field`]. The rationals are
//! `Ratio<T>` over any num-traits integer type.

use std::fmt::Debug;
use std::marker::PhantomData;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, Zero};

use super::modp;

pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn characteristic(&self) -> u64;
}

/// `F_p` for a word-sized prime `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(modp::is_prime(p));
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        modp::reduce_i64(v, self.p)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        modp::add_mod(*a, *b, self.p)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        modp::sub_mod(*a, *b, self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        modp::mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        modp::sub_mod(0, *a, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| modp::inv_mod(*a, self.p))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

/// The rational numbers with numerators and denominators in `T`.
#[derive(Debug)]
pub struct RationalField<T>(PhantomData<T>);

impl<T> RationalField<T> {
    pub fn new() -> Self {
        RationalField(PhantomData)
    }
}

impl<T> Default for RationalField<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for RationalField<T> {
    fn clone(&self) -> Self {
        RationalField(PhantomData)
    }
}

impl<T> Field for RationalField<T>
where
    T: Integer + Signed + Clone + FromPrimitive + Debug + Send + Sync,
{
    type Elem = Ratio<T>;

    fn zero(&self) -> Ratio<T> {
        Ratio::zero()
    }
    fn one(&self) -> Ratio<T> {
        Ratio::one()
    }
    fn from_i64(&self, v: i64) -> Ratio<T> {
        Ratio::from_integer(T::from_i64(v).expect("integer type holds i64"))
    }
    fn add(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a + b
    }
    fn sub(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a - b
    }
    fn mul(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a * b
    }
    fn neg(&self, a: &Ratio<T>) -> Ratio<T> {
        -a.clone()
    }
    fn inv(&self, a: &Ratio<T>) -> Option<Ratio<T>> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &Ratio<T>) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(field: &F, rows: &mut [Vec<F::Elem>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[col]) {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&f, y));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn dense_rank<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>, ncols: usize) -> usize {
    rref(field, &mut rows, ncols).len()
}

/// Null space of the dense matrix `rows` (each of length `ncols`).
pub fn dense_kernel<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>, ncols: usize) -> Vec<Vec<F::Elem>> {
    let pivots = rref(field, &mut rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::with_capacity(ncols - pivots.len());
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(&rows[r][free]);
        }
        basis.push(v);
    }
    basis
}
