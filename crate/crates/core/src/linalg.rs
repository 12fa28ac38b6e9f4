//! Dense exact Gauss–Jordan elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = pick_pivot(&a, col)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].recip();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for row in 0..n {
                if row == col || a[(row, col)].is_zero() {
                    continue;
                }
                let factor = a[(row, col)].clone();
                a.sub_row_multiple(row, col, &factor);
                inv.sub_row_multiple(row, col, &factor);
            }
        }
        Some(inv)
    }

    /// Solves `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.len(), self.rows);
        let n = self.rows;
        let mut a = Matrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = self[(i, j)].clone();
            }
            a[(i, n)] = rhs[i].clone();
        }
        for col in 0..n {
            let pivot = pick_pivot(&a, col)?;
            a.swap_rows(col, pivot);
            let p = a[(col, col)].recip();
            a.scale_row(col, &p);
            for row in 0..n {
                if row == col || a[(row, col)].is_zero() {
                    continue;
                }
                let factor = a[(row, col)].clone();
                a.sub_row_multiple(row, col, &factor);
            }
        }
        Some((0..n).map(|i| a[(i, n)].clone()).collect())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, s: &Rational) {
        for c in 0..self.cols {
            let x = &mut self.data[i * self.cols + c];
            if !x.is_zero() {
                *x *= s;
            }
        }
    }

    /// row[i] -= factor * row[j]
    fn sub_row_multiple(&mut self, i: usize, j: usize, factor: &Rational) {
        for c in 0..self.cols {
            let src = &self.data[j * self.cols + c];
            if src.is_zero() {
                continue;
            }
            let delta = src * factor;
            self.data[i * self.cols + c] -= delta;
        }
    }
}

/// Among rows `col..` with a nonzero entry in `col`, pick the one whose entry
/// has the smallest bit size, which keeps intermediate growth down.
fn pick_pivot(a: &Matrix, col: usize) -> Option<usize> {
    (col..a.rows)
        .filter(|&r| !a[(r, col)].is_zero())
        .min_by_key(|&r| {
            let x = &a[(r, col)];
            x.numer().bits() + x.denom().bits()
        })
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}
