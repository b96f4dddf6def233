//! Exact rank over the rationals by integer-preserving sparse elimination.
//!
//! Each reduction step forms `lead(p) * row - lead(row) * p` and then divides
//! the row by the gcd of its entries, so every intermediate row stays
//! primitive. All arithmetic is checked; overflow surfaces as an error.

use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};

use crate::error::{Error, Result};

type Row<T> = Vec<(u32, T)>;

/// Integer types the fraction-free engine can run on.
pub trait ExactInt: Integer + Signed + Clone + CheckedMul + CheckedSub + Send + Sync {}

impl<T> ExactInt for T where T: Integer + Signed + Clone + CheckedMul + CheckedSub + Send + Sync {}

pub fn fraction_free_rank<T: ExactInt>(rows: Vec<Row<T>>, ncols: usize) -> Result<usize> {
    let mut col_weight = vec![0u32; ncols];
    for row in &rows {
        for (c, _) in row {
            col_weight[*c as usize] += 1;
        }
    }
    let mut order: Vec<u32> = (0..ncols as u32).collect();
    order.sort_by_key(|&c| (col_weight[c as usize], c));
    let mut relabel = vec![0u32; ncols];
    for (new, &old) in order.iter().enumerate() {
        relabel[old as usize] = new as u32;
    }
    let mut rows: Vec<Row<T>> = rows
        .into_iter()
        .map(|row| {
            let mut r: Row<T> = row
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (relabel[c as usize], v))
                .collect();
            r.sort_unstable_by_key(|e| e.0);
            r
        })
        .filter(|r| !r.is_empty())
        .collect();
    rows.sort_by_key(|r| r.len());

    let mut pivots: Vec<Option<Row<T>>> = vec![None; ncols];
    let mut rank = 0;
    for mut row in rows {
        make_primitive(&mut row);
        while let Some((lead, _)) = row.first() {
            let lead = *lead as usize;
            match &pivots[lead] {
                Some(piv) => {
                    row = eliminate(&row, piv)?;
                    make_primitive(&mut row);
                }
                None => {
                    pivots[lead] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    Ok(rank)
}

/// `lead(piv)/g * row - lead(row)/g * piv`, with `g` the gcd of the two leads.
fn eliminate<T: ExactInt>(row: &Row<T>, piv: &Row<T>) -> Result<Row<T>> {
    let a = &piv[0].1;
    let b = &row[0].1;
    let g = a.gcd(b);
    let fa = a.clone() / g.clone();
    let fb = b.clone() / g;
    let overflow = || Error::Overflow(format!("row width {}", row.len().max(piv.len())));
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let (col, val) = match (row.get(i), piv.get(j)) {
            (Some((cr, vr)), Some((cp, vp))) if cr == cp => {
                i += 1;
                j += 1;
                let x = fa.checked_mul(vr).ok_or_else(overflow)?;
                let y = fb.checked_mul(vp).ok_or_else(overflow)?;
                (*cr, x.checked_sub(&y).ok_or_else(overflow)?)
            }
            (Some((cr, vr)), Some((cp, _))) if cr < cp => {
                i += 1;
                (*cr, fa.checked_mul(vr).ok_or_else(overflow)?)
            }
            (Some((cr, vr)), None) => {
                i += 1;
                (*cr, fa.checked_mul(vr).ok_or_else(overflow)?)
            }
            (_, Some((cp, vp))) => {
                j += 1;
                let y = fb.checked_mul(vp).ok_or_else(overflow)?;
                (*cp, T::zero().checked_sub(&y).ok_or_else(overflow)?)
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    Ok(out)
}

fn make_primitive<T: ExactInt>(row: &mut Row<T>) {
    let mut g = T::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v = v.clone() / g.clone();
    }
}
