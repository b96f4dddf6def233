//! Word-sized modular arithmetic, prime generation and sparse elimination mod p.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn reduce_i64(v: i64, p: u64) -> u64 {
    let r = (v as i128).rem_euclid(p as i128);
    r as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `count` distinct primes in `[2^61, 2^62)`, determined by `seed`.
pub fn random_primes(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime(candidate) && !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}

pub type SparseRow = Vec<(u32, u64)>;

/// Rank of a sparse matrix over `F_p`, given as rows of `(col, value)`
/// entries with values already reduced.
///
/// Columns are relabelled by ascending weight and rows processed by
/// ascending weight, so sparse columns become leading pivots first.
pub fn sparse_rank(rows: Vec<SparseRow>, ncols: usize, p: u64) -> usize {
    let mut col_weight = vec![0u32; ncols];
    for row in &rows {
        for &(c, _) in row {
            col_weight[c as usize] += 1;
        }
    }
    let mut order: Vec<u32> = (0..ncols as u32).collect();
    order.sort_by_key(|&c| (col_weight[c as usize], c));
    let mut relabel = vec![0u32; ncols];
    for (new, &old) in order.iter().enumerate() {
        relabel[old as usize] = new as u32;
    }

    let mut rows: Vec<SparseRow> = rows
        .into_iter()
        .map(|row| {
            let mut r: SparseRow = row
                .into_iter()
                .filter(|&(_, v)| v != 0)
                .map(|(c, v)| (relabel[c as usize], v))
                .collect();
            r.sort_unstable_by_key(|e| e.0);
            r
        })
        .filter(|r| !r.is_empty())
        .collect();
    rows.sort_by_key(|r| r.len());

    let mut pivots: Vec<Option<SparseRow>> = vec![None; ncols];
    let mut rank = 0;
    let mut scratch = Vec::new();
    for mut row in rows {
        while let Some(&(lead, val)) = row.first() {
            match &pivots[lead as usize] {
                Some(piv) => {
                    // row -= val * piv  (piv has leading coefficient 1)
                    axpy(&mut scratch, &row, piv, p - val, p);
                    std::mem::swap(&mut row, &mut scratch);
                }
                None => {
                    let inv = inv_mod(val, p);
                    for e in row.iter_mut() {
                        e.1 = mul_mod(e.1, inv, p);
                    }
                    pivots[lead as usize] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// `out = a + f * b` on sorted sparse rows.
fn axpy(out: &mut SparseRow, a: &SparseRow, b: &SparseRow, f: u64, p: u64) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&(ca, va)), Some(&(cb, vb))) => {
                if ca < cb {
                    i += 1;
                    (ca, va)
                } else if cb < ca {
                    j += 1;
                    (cb, mul_mod(f, vb, p))
                } else {
                    i += 1;
                    j += 1;
                    (ca, add_mod(va, mul_mod(f, vb, p), p))
                }
            }
            (Some(&e), None) => {
                i += 1;
                e
            }
            (None, Some(&(cb, vb))) => {
                j += 1;
                (cb, mul_mod(f, vb, p))
            }
            (None, None) => unreachable!(),
        };
        if next.1 != 0 {
            out.push(next);
        }
    }
}
