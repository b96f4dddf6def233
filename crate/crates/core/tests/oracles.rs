//! Dimensions checked against a from-scratch dense rational computation of
//! the whole graded piece, sharing no code with the engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use kosz::homology::HomologyEngine;
use kosz::{FieldSpec, RingParams};

fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn subsets(len: usize, t: usize) -> Vec<Vec<usize>> {
    if t == 0 {
        return vec![vec![]];
    }
    if len < t {
        return vec![];
    }
    let mut out = subsets(len - 1, t);
    for mut s in subsets(len - 1, t - 1) {
        s.push(len - 1);
        out.push(s);
    }
    out
}

/// Basis of `K_t` in degree `d`: (generator subset, coefficient monomial).
fn basis(n: usize, c: u32, t: usize, d: u32) -> Vec<(Vec<usize>, Vec<u32>)> {
    let gens = monomials(n, c);
    if d < t as u32 * c {
        return vec![];
    }
    let mut out = Vec::new();
    for s in subsets(gens.len(), t) {
        for m in monomials(n, d - t as u32 * c) {
            out.push((s.clone(), m));
        }
    }
    out
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][col].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone() * inv.clone();
                for j in col..ncols {
                    let v = rows[r][j].clone() * f.clone();
                    rows[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of `d_t : K_t -> K_{t-1}` in degree `d`.
fn differential_rank(n: usize, c: u32, t: usize, d: u32) -> usize {
    if t == 0 {
        return 0;
    }
    let gens = monomials(n, c);
    let src = basis(n, c, t, d);
    let dst = basis(n, c, t - 1, d);
    if src.is_empty() || dst.is_empty() {
        return 0;
    }
    let mut m = vec![vec![BigRational::zero(); dst.len()]; src.len()];
    for (i, (s, v)) in src.iter().enumerate() {
        for k in 0..t {
            let mut face = s.clone();
            let u = face.remove(k);
            let coeff: Vec<u32> = v.iter().zip(&gens[u]).map(|(a, b)| a + b).collect();
            let j = dst.iter().position(|(f, w)| *f == face && *w == coeff).unwrap();
            let sign = if k % 2 == 0 { 1 } else { -1 };
            m[i][j] += BigRational::from_integer(BigInt::from(sign));
        }
    }
    rank(m)
}

fn oracle_dim(n: usize, c: u32, t: usize, d: u32) -> usize {
    basis(n, c, t, d).len() - differential_rank(n, c, t, d) - differential_rank(n, c, t + 1, d)
}

fn compare(n: usize, c: u32, t_max: usize, d_max: u32) {
    let engine = HomologyEngine::new(RingParams::new(n, c).unwrap(), FieldSpec::exact());
    for t in 0..=t_max {
        for d in 0..=d_max {
            assert_eq!(
                engine.homology_dim(t, d).unwrap().dim,
                oracle_dim(n, c, t, d) as u64,
                "n={n} c={c} t={t} d={d}"
            );
        }
    }
}

#[test]
fn two_variables() {
    compare(2, 2, 2, 7);
    compare(2, 3, 2, 8);
}

#[test]
fn three_variables_squares() {
    compare(3, 2, 3, 7);
}

#[test]
fn three_variables_cubes_low_degrees() {
    compare(3, 3, 2, 7);
}

#[test]
fn frozen_small_values() {
    // H_1(m^2)_3 at n = 2: six chains, four monomials of degree 3, no boundaries
    assert_eq!(oracle_dim(2, 2, 1, 3), 2);
    // H_0(m^3) at n = 3 is the Hilbert function of S/m^3
    assert_eq!(
        (0..=4).map(|d| oracle_dim(3, 3, 0, d)).collect::<Vec<_>>(),
        vec![1, 3, 6, 0, 0]
    );
    assert_eq!(oracle_dim(3, 3, 1, 4), 15);
    assert_eq!(oracle_dim(3, 3, 1, 5), 39);
    assert_eq!(oracle_dim(3, 3, 1, 6), 27);
    assert_eq!(oracle_dim(3, 3, 2, 7), 21);
}
