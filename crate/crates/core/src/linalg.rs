//! Small dense exact-rational matrices.
//!
//! The matrices in this crate are at most a few dozen rows (total rank of an
//! algebra), so plain row-major `Vec`s and Gauss-Jordan elimination are all
//! that is needed.

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Rat = Rational64;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| rat(rows[i][j]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rat::zero(), |acc, t| acc + self[(i, t)] * other[(t, j)])
        })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Rat::zero(), |acc, j| acc + self[(i, j)] * v[j]))
            .collect()
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Rat::zero(), |acc, j| acc + self[(i, j)] * rat(v[j])))
            .collect()
    }

    /// Gauss-Jordan inverse; `None` for singular or non-square input.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)];
                for j in 0..n {
                    let av = a[(col, j)];
                    let iv = inv[(col, j)];
                    a[(r, j)] -= factor * av;
                    inv[(r, j)] -= factor * iv;
                }
            }
        }
        Some(inv)
    }

    /// Determinant by fraction-exact elimination.
    pub fn determinant(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Rat::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for r in col + 1..n {
                let factor = a[(r, col)] / p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[(col, j)];
                    a[(r, j)] -= factor * v;
                }
            }
        }
        det
    }

    /// Leading principal minors, used to certify positive definiteness.
    pub fn leading_minors(&self) -> Vec<Rat> {
        (1..=self.rows)
            .map(|k| Self::from_fn(k, k, |i, j| self[(i, j)]).determinant())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[&RatMatrix]) -> RatMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact dot product of an integer vector with a rational one.
pub fn dot_int_rat(a: &[i64], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (&x, &y)| acc + y * rat(x))
}

/// Fractional part in `[0, 1)`.
pub fn frac(q: Rat) -> Rat {
    q - q.floor()
}
