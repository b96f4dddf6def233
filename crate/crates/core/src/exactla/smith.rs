//! Smith normal form diagonal of a dense integer matrix.

use num_integer::Integer;
use num_traits::Signed;

/// Nonzero invariant factors `d_1 | d_2 | ...`, all positive.
pub fn invariant_factors<T>(mut a: Vec<Vec<T>>) -> Vec<T>
where
    T: Integer + Signed + Clone,
{
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..nrows.min(ncols) {
        let Some((pi, pj)) = min_abs_entry(&a, t..nrows, t..ncols) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].clone() / a[t][t].clone();
                if !q.is_zero() {
                    for j in t..ncols {
                        let s = q.clone() * a[t][j].clone();
                        a[i][j] = a[i][j].clone() - s;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].clone() / a[t][t].clone();
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let s = q.clone() * row[t].clone();
                        row[j] = row[j].clone() - s;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // a remainder smaller than the pivot is left in row t or column t
            let (pi, pj) = min_abs_in_cross(&a, t).expect("pivot cross is nonzero");
            a.swap(t, pi);
            swap_cols(&mut a, t, pj);
        }
        diag.push(a[t][t].abs());
    }
    // enforce the divisibility chain
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

fn swap_cols<T>(a: &mut [Vec<T>], x: usize, y: usize) {
    if x != y {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    }
}

fn min_abs_entry<T: Integer + Signed + Clone>(
    a: &[Vec<T>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = a[i][j].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().map_or(true, |b| v < b.2) {
                let unit = v.is_one();
                best = Some((i, j, v));
                if unit {
                    return best.map(|b| (b.0, b.1));
                }
            }
        }
    }
    best.map(|b| (b.0, b.1))
}

fn min_abs_in_cross<T: Integer + Signed + Clone>(a: &[Vec<T>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    let mut consider = |i: usize, j: usize| {
        let v = a[i][j].abs();
        if !v.is_zero() && best.as_ref().map_or(true, |b| v < b.2) {
            best = Some((i, j, v));
        }
    };
    for i in t..a.len() {
        consider(i, t);
    }
    for j in t..a[t].len() {
        consider(t, j);
    }
    best.map(|b| (b.0, b.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(invariant_factors(vec![vec![2i64]]), vec![2]);
        assert_eq!(invariant_factors(vec![vec![1i64, 1], vec![1, -1]]), vec![1, 2]);
        assert_eq!(invariant_factors(vec![vec![2i64, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(invariant_factors(vec![vec![0i64, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(
            invariant_factors(vec![vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
            vec![2, 6, 12]
        );
    }
}
