//! Dense Gaussian elimination over rational functions.

use alloc::vec::Vec;

use crate::frac::Frac;

fn size(f: &Frac) -> usize {
    f.num().len() + f.den().len()
}

/// Index of the cheapest nonzero entry in column `c` at or below row `r`.
fn pivot(m: &[Vec<Frac>], r: usize, c: usize) -> Option<usize> {
    (r..m.len()).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| size(&m[i][c]))
}

/// Rank of a matrix.
pub fn rank(m: &[Vec<Frac>]) -> usize {
    let mut a: Vec<Vec<Frac>> = m.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = pivot(&a, r, c) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv();
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for k in c..cols {
                let t = &a[i][k] - &(&f * &a[r][k]);
                a[i][k] = t;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Inverse of a square matrix, or `None` when it is singular.
pub fn inverse(m: &[Vec<Frac>]) -> Option<Vec<Vec<Frac>>> {
    let n = m.len();
    let mut a: Vec<Vec<Frac>> = m.to_vec();
    let mut b: Vec<Vec<Frac>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Frac::one() } else { Frac::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = pivot(&a, c, c)?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].inv();
        for k in 0..n {
            a[c][k] = &a[c][k] * &inv;
            b[c][k] = &b[c][k] * &inv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in 0..n {
                if !a[c][k].is_zero() {
                    a[i][k] = &a[i][k] - &(&f * &a[c][k]);
                }
                if !b[c][k].is_zero() {
                    b[i][k] = &b[i][k] - &(&f * &b[c][k]);
                }
            }
        }
    }
    Some(b)
}

/// Row vector times matrix.
pub fn row_times(v: &[Frac], m: &[Vec<Frac>]) -> Vec<Frac> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = alloc::vec![Frac::zero(); cols];
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o = &*o + &(vi * x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let x = Frac::var(0);
        let m = alloc::vec![
            alloc::vec![x.clone(), Frac::one()],
            alloc::vec![Frac::int(2), &x + &Frac::one()],
        ];
        let inv = inverse(&m).unwrap();
        for i in 0..2 {
            let row = row_times(&m[i], &inv);
            for j in 0..2 {
                assert_eq!(row[j], if i == j { Frac::one() } else { Frac::zero() });
            }
        }
        assert_eq!(rank(&m), 2);
        let s = alloc::vec![alloc::vec![x.clone(), Frac::one()], alloc::vec![&x * &x, x.clone()]];
        assert_eq!(rank(&s), 1);
        assert!(inverse(&s).is_none());
    }
}
