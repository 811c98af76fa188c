//! Dense matrices over a [`Ring`].

use std::fmt;

use rayon::prelude::*;

use crate::scalar::{Field, Ring};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
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

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[R]) {
        assert_eq!(v.len(), self.rows);
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = x.clone();
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S + Sync + Send) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.par_iter().map(f).collect() }
    }

    pub fn try_map<S: Ring, E: Send>(&self, f: impl Fn(&R) -> Result<S, E> + Sync + Send) -> Result<Matrix<S>, E> {
        let data = self.data.par_iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &R)> {
        let c = self.cols;
        self.data.iter().enumerate().map(move |(k, x)| ((k / c, k % c), x))
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc.add_mul_assign(a, b);
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![R::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                o.add_mul_assign(x, a);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let n = other.cols;
        let rows: Vec<Vec<R>> = (0..self.rows)
            .into_par_iter()
            .map(|i| {
                let mut out = vec![R::zero(); n];
                for (k, a) in self.row(i).iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (o, b) in out.iter_mut().zip(other.row(k)) {
                        o.add_mul_assign(a, b);
                    }
                }
                out
            })
            .collect();
        Matrix { rows: self.rows, cols: n, data: rows.into_iter().flatten().collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub_ref(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &R) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mul_ref(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    /// First `(i, j)` with `i < j` and `self[i][j] != self[j][i]`.
    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

impl<R: Field> Matrix<R> {
    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> R {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = R::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return R::zero();
            };
            if p != col {
                for j in 0..n {
                    m.swap(p * n + j, col * n + j);
                }
                det = det.neg_ref();
            }
            let pivot = m[col * n + col];
            det = det.mul_ref(&pivot);
            let inv = pivot.inv().expect("non-zero pivot");
            for r in col + 1..n {
                let f = m[r * n + col].mul_ref(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m[col * n + j];
                    m[r * n + j].sub_assign_ref(&f.mul_ref(&v));
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                    inv.data.swap(p * n + j, col * n + j);
                }
            }
            let pinv = a[(col, col)].inv()?;
            for j in 0..n {
                a[(col, j)] = a[(col, j)].mul_ref(&pinv);
                inv[(col, j)] = inv[(col, j)].mul_ref(&pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (x, y) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)].sub_assign_ref(&f.mul_ref(&x));
                    inv[(r, j)].sub_assign_ref(&f.mul_ref(&y));
                }
            }
        }
        Some(inv)
    }

    /// Solve `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[R]) -> Option<Vec<R>> {
        self.inverse().map(|inv| inv.mul_vec(b))
    }
}

/// Rings with exact division (the quotient is known to exist).
pub trait ExactDiv: Ring {
    fn div_exact(&self, divisor: &Self) -> Option<Self>;
}

impl<R: Field> ExactDiv for R {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        divisor.inv().map(|i| self.mul_ref(&i))
    }
}

impl<R: ExactDiv> Matrix<R> {
    /// Fraction-free (Bareiss) determinant. Every division is exact, so the
    /// routine stays inside the ring.
    pub fn det_bareiss(&self) -> Option<R> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(R::one());
        }
        let mut m = self.data.clone();
        let mut sign = false;
        let mut prev = R::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let p = (k + 1..n).find(|&r| !m[r * n + k].is_zero());
                let Some(p) = p else {
                    return Some(R::zero());
                };
                for j in 0..n {
                    m.swap(p * n + j, k * n + j);
                }
                sign = !sign;
            }
            let pivot = m[k * n + k].clone();
            let rows: Vec<(usize, Vec<R>)> = (k + 1..n)
                .into_par_iter()
                .map(|i| {
                    let lead = &m[i * n + k];
                    let row = (k + 1..n)
                        .map(|j| {
                            let x = pivot.mul_ref(&m[i * n + j]).sub_ref(&lead.mul_ref(&m[k * n + j]));
                            x.div_exact(&prev)
                        })
                        .collect::<Option<Vec<R>>>();
                    row.map(|r| (i, r))
                })
                .collect::<Option<Vec<_>>>()?;
            for (i, row) in rows {
                m[i * n + k] = R::zero();
                for (off, v) in row.into_iter().enumerate() {
                    m[i * n + k + 1 + off] = v;
                }
            }
            prev = pivot;
        }
        let d = m[n * n - 1].clone();
        Some(if sign { d.neg_ref() } else { d })
    }
}

impl<R> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, P61};

    type F = Fp<P61>;

    fn fm(rows: &[&[i64]]) -> Matrix<F> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
    }

    #[test]
    fn det_small() {
        let m = fm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), F::from_i64(18));
        assert_eq!(m.det_bareiss().unwrap(), F::from_i64(18));
        let s = fm(&[&[0, 1], &[1, 0]]);
        assert_eq!(s.det(), F::from_i64(-1));
        assert_eq!(s.det_bareiss().unwrap(), F::from_i64(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = fm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert!(fm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn symmetry_detection() {
        let m = fm(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.first_asymmetry(), Some((0, 1)));
        assert!(m.add(&m.transpose()).is_symmetric());
    }

    #[test]
    fn vector_products_agree() {
        let m = fm(&[&[1, 2, 3], &[4, 5, 6]]);
        let v = [F::from_i64(1), F::from_i64(-1)];
        assert_eq!(m.vec_mul(&v), m.transpose().mul_vec(&v));
    }
}
