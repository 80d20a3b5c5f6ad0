//! Exact linear algebra: fraction-free rank, left kernels, and a
//! division-free determinant over an arbitrary commutative ring.
//!
//! The determinant has to work over truncated Taylor arithmetic, where
//! elements with zero constant term are not invertible, so elimination is not
//! an option there; Bird's iteration uses only ring operations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

/// Commutative ring operations, enough for determinants. There is no nullary
/// zero or one: elements may carry a shape (jets know their variable count),
/// so neutral elements are derived from existing values.
pub trait Ring: Clone {
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
}

impl<S: Scalar> Ring for S {
    fn ring_add(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn ring_sub(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    fn ring_mul(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn ring_neg(&self) -> Self {
        -self.clone()
    }
}

/// Bird's division-free determinant: iterate `X <- mu(X) * A`, where `mu`
/// zeroes the strict lower triangle and replaces each diagonal entry by the
/// negated sum of the diagonal entries below it. After `n - 1` steps the
/// `(0,0)` entry is `(-1)^(n-1) det A`.
///
/// Panics on an empty matrix; use [`det_scalar`] where the convention
/// `det([]) = 1` is wanted.
pub fn det_division_free<R: Ring>(matrix: &[Vec<R>]) -> R {
    let n = matrix.len();
    assert!(n > 0, "empty determinant has no ring context");
    for row in matrix {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    let mut x: Vec<Vec<R>> = matrix.to_vec();
    for _ in 1..n {
        x = mu_times(&x, matrix);
    }
    if n % 2 == 1 {
        x[0][0].clone()
    } else {
        x[0][0].ring_neg()
    }
}

/// Determinant of a scalar matrix, with `det([]) = 1`.
pub fn det_scalar<S: Scalar>(matrix: &[Vec<S>]) -> S {
    if matrix.is_empty() {
        S::one()
    } else {
        det_division_free(matrix)
    }
}

fn mu_times<R: Ring>(x: &[Vec<R>], a: &[Vec<R>]) -> Vec<Vec<R>> {
    let n = x.len();
    // partial trace, built from the back: diag[i] = -(x[i+1][i+1] + ... + x[n-1][n-1])
    let mut diag = Vec::with_capacity(n);
    let mut acc = x[n - 1][n - 1].ring_sub(&x[n - 1][n - 1]);
    diag.push(acc.clone());
    for i in (0..n - 1).rev() {
        acc = acc.ring_sub(&x[i + 1][i + 1]);
        diag.push(acc.clone());
    }
    diag.reverse();

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut cell = diag[i].ring_mul(&a[i][j]);
            for k in i + 1..n {
                cell = cell.ring_add(&x[i][k].ring_mul(&a[k][j]));
            }
            row.push(cell);
        }
        out.push(row);
    }
    out
}

/// Rank of a rational matrix by fraction-free Gaussian elimination: rows are
/// scaled to integers, then Bareiss one-step elimination keeps every
/// intermediate value an exact minor of the scaled matrix.
pub fn rank_exact(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    bareiss_rank(&mut m)
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let value = &pivot * &m[i][j] - &m[i][col] * &m[rank][j];
                let (q, r) = value.div_rem(&prev);
                debug_assert!(r.is_zero(), "fraction-free division must be exact");
                m[i][j] = q;
            }
            m[i][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rank over any [`Scalar`]; exact rationals take the fraction-free path,
/// floats use partial pivoting with a relative tolerance.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    if S::EXACT {
        let exact: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.as_rational().expect("exact scalar"))
                    .collect()
            })
            .collect();
        return rank_exact(&exact);
    }
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let scale = matrix_scale(&m);
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.len() {
            break;
        }
        let pivot_row = (rank..m.len())
            .filter(|&i| !m[i][col].is_negligible(&scale))
            .max_by(|&a, &b| {
                m[a][col]
                    .abs()
                    .partial_cmp(&m[b][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(pivot_row) = pivot_row else { continue };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for i in rank + 1..m.len() {
            let factor = m[i][col].clone() / pivot.clone();
            for j in col..cols {
                m[i][j] = m[i][j].clone() - factor.clone() * m[rank][j].clone();
            }
        }
        rank += 1;
    }
    rank
}

fn matrix_scale<S: Scalar>(m: &[Vec<S>]) -> S {
    let mut scale = S::one();
    for row in m {
        for x in row {
            if x.abs() > scale {
                scale = x.abs();
            }
        }
    }
    scale
}

/// Basis of the left kernel of `rows`: vectors `y` with `y * rows = 0`.
/// Gaussian elimination on the augmented matrix `[rows | I]`; rows whose
/// data part vanishes yield kernel vectors in the identity part.
pub fn left_kernel_basis<S: Scalar>(rows: &[Vec<S>]) -> Vec<Vec<S>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let scale = matrix_scale(rows);
    let mut m: Vec<Vec<S>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut aug = row.clone();
            aug.extend((0..r).map(|j| if i == j { S::one() } else { S::zero() }));
            aug
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..c {
        if pivot_row == r {
            break;
        }
        let candidate = (pivot_row..r)
            .filter(|&i| !m[i][col].is_negligible(&scale))
            .max_by(|&a, &b| {
                m[a][col]
                    .abs()
                    .partial_cmp(&m[b][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(candidate) = candidate else { continue };
        m.swap(pivot_row, candidate);
        let pivot = m[pivot_row][col].clone();
        for i in 0..r {
            if i != pivot_row && !m[i][col].is_zero() {
                let factor = m[i][col].clone() / pivot.clone();
                for j in 0..c + r {
                    m[i][j] = m[i][j].clone() - factor.clone() * m[pivot_row][j].clone();
                }
            }
        }
        pivot_row += 1;
    }

    m.iter()
        .filter(|row| row[..c].iter().all(|x| x.is_negligible(&scale)))
        .map(|row| row[c..].to_vec())
        .collect()
}
