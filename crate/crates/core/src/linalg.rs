//! Small dense exact linear algebra over the rationals.
//!
//! Matrices are row-major `Vec<Vec<Rational>>`. Sizes in this crate stay in
//! the hundreds, so everything is plain Gaussian elimination.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows are removed.
pub fn rref(rows: &mut Matrix) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Rank by fraction-free elimination: rows are scaled to primitive integer
/// vectors and eliminated by cross-multiplication, dividing out row contents.
pub fn rank_fraction_free(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| primitive_integer_row(r)).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, found);
        let pivot_row = m[rank].clone();
        let p = pivot_row[col].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, q) in row.iter_mut().zip(&pivot_row) {
                *v = &*v * &p - &f * q;
            }
            make_primitive(row);
        }
        rank += 1;
    }
    rank
}

fn primitive_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// Solves `a x = b` exactly. Returns `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Basis of the right nullspace of `rows` (vectors of length `ncols`).
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Canonical basis (nonzero RREF rows) of the span of `vectors`.
pub fn span_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut m = vectors.to_vec();
    rref(&mut m);
    m
}

pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let mut m = basis.to_vec();
    let before = rref(&mut m).len();
    m.push(v.to_vec());
    rref(&mut m).len() == before
}

/// Canonical basis of `span(a) ∩ span(b)`; all vectors have length `dim`.
pub fn intersect_spans(a: &[Vec<Rational>], b: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Columns are the vectors of a followed by the negated vectors of b.
    let ncols = a.len() + b.len();
    let system: Matrix = (0..dim)
        .map(|row| {
            a.iter()
                .map(|v| v[row].clone())
                .chain(b.iter().map(|v| -v[row].clone()))
                .collect()
        })
        .collect();
    let kernel = nullspace(&system, ncols);
    let vectors: Matrix = kernel
        .iter()
        .map(|coef| {
            (0..dim)
                .map(|row| {
                    a.iter()
                        .zip(coef)
                        .fold(Rational::zero(), |acc, (v, c)| acc + &v[row] * c)
                })
                .collect()
        })
        .collect();
    span_basis(&vectors)
}

/// Transpose of a list of column vectors into a row-major matrix.
pub fn columns_to_rows(columns: &[Vec<Rational>], nrows: usize) -> Matrix {
    (0..nrows)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect()
}

pub fn max_abs(values: impl IntoIterator<Item = Rational>) -> Rational {
    values
        .into_iter()
        .map(|v| v.abs())
        .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc })
}
