//! Exact linear algebra over the rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&k| !row[k].is_zero())
                        .map(|k| &row[k] * &b[k][j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn trace(m: &Matrix) -> Rational {
    m.iter().enumerate().map(|(i, row)| row[i].clone()).sum()
}

fn size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Reduced row echelon form and pivot columns. Among the candidate pivots
/// of a column the entry of smallest bit size is taken.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| size(&a[i][c]))
        else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank by fraction-free (Bareiss) elimination after clearing denominators.
pub fn rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits())
        else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Basis of the right null space `{x : m x = 0}`.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let (a, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (a, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::DivisionByZero);
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Indices of a maximal linearly independent subset of the rows, chosen
/// greedily in order.
pub fn independent_rows(rows: &Matrix) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (p, b) in &basis {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].recip();
            for x in v.iter_mut() {
                *x *= &inv;
            }
            for (_, b) in basis.iter_mut() {
                if !b[p].is_zero() {
                    let f = b[p].clone();
                    for (x, y) in b.iter_mut().zip(&v) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            basis.push((p, v));
            chosen.push(idx);
        }
    }
    chosen
}

/// Moore–Penrose pseudo-inverse from the full-rank factorization
/// `m = F R`: `m⁺ = Rᵀ (R Rᵀ)^{-1} (Fᵀ F)^{-1} Fᵀ`.
pub fn pinv(m: &Matrix) -> Matrix {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let (a, pivots) = rref(m);
    if pivots.is_empty() {
        return zeros(cols, rows);
    }
    let r_mat: Matrix = a[..pivots.len()].to_vec();
    let f_mat: Matrix = m
        .iter()
        .map(|row| pivots.iter().map(|&p| row[p].clone()).collect())
        .collect();
    let rt = transpose(&r_mat);
    let ft = transpose(&f_mat);
    let rrt_inv = inverse(&matmul(&r_mat, &rt)).expect("R has full row rank");
    let ftf_inv = inverse(&matmul(&ft, &f_mat)).expect("F has full column rank");
    matmul(&matmul(&rt, &rrt_inv), &matmul(&ftf_inv, &ft))
}

pub type SparseRow = BTreeMap<usize, Rational>;

/// Basis of the null space of a sparse system, one vector per free column.
/// Rows with few entries are eliminated first.
pub fn sparse_kernel(rows: &[SparseRow], cols: usize) -> Vec<SparseRow> {
    let mut order: Vec<&SparseRow> = rows.iter().collect();
    order.sort_by_key(|r| r.len());
    // pivot column -> reduced row with coefficient 1 at the pivot
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for row in order {
        let mut v: SparseRow = row.iter().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (*c, x.clone())).collect();
        let hits: Vec<usize> = v.keys().filter(|c| pivots.contains_key(c)).copied().collect();
        for c in hits {
            let Some(f) = v.get(&c).cloned() else { continue };
            for (cc, y) in &pivots[&c] {
                let e = v.entry(*cc).or_insert_with(Rational::zero);
                *e -= &f * y;
            }
            v.retain(|_, x| !x.is_zero());
        }
        let Some((&p, _)) = v.iter().min_by_key(|(_, x)| size(x)) else {
            continue;
        };
        let inv = v[&p].recip();
        for x in v.values_mut() {
            *x *= &inv;
        }
        for other in pivots.values_mut() {
            if let Some(f) = other.get(&p).cloned() {
                for (cc, y) in &v {
                    let e = other.entry(*cc).or_insert_with(Rational::zero);
                    *e -= &f * y;
                }
                other.retain(|_, x| !x.is_zero());
            }
        }
        pivots.insert(p, v);
    }
    let mut by_free: BTreeMap<usize, SparseRow> = (0..cols)
        .filter(|c| !pivots.contains_key(c))
        .map(|c| (c, BTreeMap::from([(c, Rational::one())])))
        .collect();
    for (&p, row) in &pivots {
        for (c, x) in row {
            if *c != p {
                if let Some(v) = by_free.get_mut(c) {
                    v.insert(p, -x.clone());
                }
            }
        }
    }
    by_free.into_values().collect()
}

/// Whether two lists of vectors span the same space.
pub fn same_span(a: &Matrix, b: &Matrix) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    let mut both = a.clone();
    both.extend(b.iter().cloned());
    ra == rb && rank(&both) == ra
}

pub fn is_symmetric(m: &Matrix) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == m[j][i]))
}

/// Largest absolute entry, for reporting.
pub fn max_abs(m: &Matrix) -> Rational {
    m.iter()
        .flatten()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}
