use core::fmt;

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ArithError, Rational, Scalar};

/// Dense row-major matrix over a [`Scalar`] ring.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Empty matrix with a fixed column count, for stacking rows onto.
    pub fn with_cols(cols: usize) -> Self {
        Self {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn push_row(&mut self, row: Vec<T>) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, ArithError> {
        if self.cols != rhs.rows {
            return Err(ArithError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.vanishes() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).clone() + a.clone() * rhs.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Copy with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let mut out = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                out.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data: out,
        }
    }

    /// Exact determinant.
    ///
    /// Bareiss elimination with pivots whose value part is nonzero, so every
    /// division is by an invertible element. If some column has no such
    /// pivot but is not identically zero (possible over [`Dual`](super::Dual)),
    /// falls back to division-free Laplace expansion memoized over column
    /// subsets.
    pub fn det(&self) -> Result<T, ArithError> {
        if !self.is_square() {
            return Err(ArithError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n {
            let pivot = (k..n).find(|&r| !Zero::is_zero(a.get(r, k).value()));
            let p = match pivot {
                Some(p) => p,
                None if (k..n).all(|r| a.get(r, k).vanishes()) => return Ok(T::zero()),
                None => return Ok(self.det_laplace()),
            };
            if p != k {
                for c in 0..n {
                    a.data.swap(p * n + c, k * n + c);
                }
                negate = !negate;
            }
            let pivot = a.get(k, k).clone();
            let prev_inv = prev.inv().ok_or(ArithError::NotInvertible)?;
            for i in k + 1..n {
                let lead = a.get(i, k).clone();
                for j in k + 1..n {
                    let v = (a.get(i, j).clone() * pivot.clone()
                        - lead.clone() * a.get(k, j).clone())
                        * prev_inv.clone();
                    a.set(i, j, v);
                }
                a.set(i, k, T::zero());
            }
            prev = pivot;
        }
        let d = a.get(n - 1, n - 1).clone();
        Ok(if negate { -d } else { d })
    }

    fn det_laplace(&self) -> T {
        let n = self.rows;
        let mut memo: Vec<Option<T>> = vec![None; 1 << n];
        memo[0] = Some(T::one());
        for mask in 0usize..(1 << n) {
            let Some(acc) = memo[mask].clone() else {
                continue;
            };
            if acc.vanishes() {
                continue;
            }
            let row = mask.count_ones() as usize;
            if row == n {
                continue;
            }
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let entry = self.get(row, c);
                if entry.vanishes() {
                    continue;
                }
                // Columns already used that exceed c each add one inversion.
                let inversions = (mask >> (c + 1)).count_ones();
                let mut term = acc.clone() * entry.clone();
                if inversions % 2 == 1 {
                    term = -term;
                }
                let slot = &mut memo[mask | (1 << c)];
                *slot = Some(match slot.take() {
                    Some(v) => v + term,
                    None => term,
                });
            }
        }
        memo[(1 << n) - 1].clone().unwrap_or_else(T::zero)
    }
}

impl Matrix<Rational> {
    /// `det(M)` and the cofactor matrix `C[r][c] = (-1)^(r+c) det(M_rc)`,
    /// by Gauss–Jordan elimination. `None` when `M` is singular.
    pub fn det_and_cofactors(&self) -> Result<Option<(Rational, Self)>, ArithError> {
        if !self.is_square() {
            return Err(ArithError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let mut det = <Rational as One>::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
                return Ok(None);
            };
            if p != k {
                for c in 0..n {
                    a.data.swap(p * n + c, k * n + c);
                    inv.data.swap(p * n + c, k * n + c);
                }
                det = -det;
            }
            let pivot = a.get(k, k).clone();
            det *= &pivot;
            let pivot_inv = pivot.recip();
            for c in 0..n {
                let (x, y) = (a.get(k, c) * &pivot_inv, inv.get(k, c) * &pivot_inv);
                a.set(k, c, x);
                inv.set(k, c, y);
            }
            for r in 0..n {
                if r == k || a.get(r, k).is_zero() {
                    continue;
                }
                let f = a.get(r, k).clone();
                for c in 0..n {
                    let x = a.get(r, c) - &f * a.get(k, c);
                    a.set(r, c, x);
                    let y = inv.get(r, c) - &f * inv.get(k, c);
                    inv.set(r, c, y);
                }
            }
        }
        // adj(M) = det · M⁻¹ and C = adj(M)ᵀ.
        let cof = inv.transpose().map(|x| x * &det);
        Ok(Some((det, cof)))
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = (0..self.rows).map(|r| self.row(r)).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Exact rank over the rationals.
///
/// Rows are scaled to primitive integer vectors, then eliminated
/// fraction-free, dividing each updated row by its content to keep entries
/// small.
pub fn exact_rank(m: &Matrix<Rational>) -> usize {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|r| primitive_row(m.row(r)))
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pivot = pivot_row[col].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = &*x * &pivot - &factor * y;
            }
            reduce_content(row);
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn primitive_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    reduce_content(&mut out);
    out
}

fn reduce_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}
