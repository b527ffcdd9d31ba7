//! Scalar abstraction shared by the float and exact-rational code paths, and
//! the small dense linear algebra built on it.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers used by the degenerate-input fallbacks.
pub type Rational = BigRational;

/// Absolute per-coordinate tolerance of float membership tests.
pub const FLOAT_MEMBERSHIP_TOL: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact (zero tests need no tolerance).
    const EXACT: bool;

    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn magnitude(&self) -> Self;

    /// `|self| <= tol` in float mode, `self == 0` in exact mode.
    fn is_negligible(&self, tol: f64) -> bool;

    fn from_i64(x: i64) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn magnitude(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn from_i64(x: i64) -> Self {
        x as f64
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
}

/// `p / q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Entries with magnitude at most `tol` are treated as zero (ignored in exact
/// mode). Partial pivoting by magnitude.
pub fn row_reduce<T: Scalar>(rows: &mut [Vec<T>], tol: f64) -> Vec<usize> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let best = (r..n_rows)
            .filter(|&i| !rows[i][c].is_negligible(tol))
            .max_by(|&i, &j| {
                rows[i][c]
                    .magnitude()
                    .partial_cmp(&rows[j][c].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..n_rows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..n_cols {
                    let delta = factor.clone() * rows[r][j].clone();
                    rows[i][j] = rows[i][j].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the null space of `matrix` (rows of equal length).
pub fn null_space<T: Scalar>(matrix: &[Vec<T>], tol: f64) -> Vec<Vec<T>> {
    let n_cols = matrix.first().map_or(0, Vec::len);
    let mut rows = matrix.to_vec();
    let pivots = row_reduce(&mut rows, tol);
    let free: Vec<usize> = (0..n_cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); n_cols];
            v[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

/// Rank of `matrix`.
pub fn rank<T: Scalar>(matrix: &[Vec<T>], tol: f64) -> usize {
    let mut rows = matrix.to_vec();
    row_reduce(&mut rows, tol).len()
}
