//! Small dense matrices over exact rationals, certified intervals and
//! complex doubles.
//!
//! The dimensions here are tiny (a number field of degree `d + 1 ≤ 6`), so
//! one partial-pivoting elimination core, generic over the scalar, covers
//! every consumer: exact determinants and inverses over [`Rat`], certified
//! linear solves over [`RInt`], and the floating eigen/flow computations
//! over [`Complex64`].

use num_complex::Complex64;
use num_traits::Zero;

use crate::interval::RInt;
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Scalar requirements for the shared elimination core.
pub trait Scalar: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division; errors when the divisor is zero (or an enclosure of zero).
    fn div(&self, o: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    /// Structural zero test (used to skip elimination work).
    fn is_zero_el(&self) -> bool;
    /// Magnitude used for partial pivoting; must be 0 exactly when the
    /// element is unusable as a pivot.
    fn pivot_weight(&self) -> f64;
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        rat::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::SingularSystem("rational division by zero".into()));
        }
        Ok(self / o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_el(&self) -> bool {
        self.is_zero()
    }
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            rat::to_f64(self).abs().max(f64::MIN_POSITIVE)
        }
    }
}

impl Scalar for RInt {
    fn zero() -> Self {
        RInt::zero()
    }
    fn one() -> Self {
        RInt::point(rat::one())
    }
    fn add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        self.div(o)
    }
    fn neg(&self) -> Self {
        self.neg()
    }
    fn is_zero_el(&self) -> bool {
        self.sign() == Some(0)
    }
    fn pivot_weight(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.mid_f64().abs()
        }
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::ZERO
    }
    fn one() -> Self {
        Complex64::ONE
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self> {
        if o.norm() == 0.0 {
            return Err(Error::SingularSystem("complex division by zero".into()));
        }
        Ok(self / o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_el(&self) -> bool {
        self.norm() == 0.0
    }
    fn pivot_weight(&self) -> f64 {
        self.norm()
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    /// Builds from rows; panics if the rows are ragged (internal misuse).
    #[must_use]
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    #[must_use]
    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    #[must_use]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    #[must_use]
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    #[must_use]
    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Mat::<T>::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero_el() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.at(i, j).add(&a.mul(o.at(k, j)));
                    *out.at_mut(i, j) = v;
                }
            }
        }
        out
    }

    #[must_use]
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    acc = acc.add(&self.at(i, j).mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    #[must_use]
    pub fn add_mat(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    #[must_use]
    pub fn sub_mat(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    #[must_use]
    pub fn scale(&self, k: &T) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(k)).collect(),
        }
    }

    /// Solves `self · X = rhs` by Gaussian elimination with partial
    /// pivoting; errors if no usable pivot exists in some column.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows, "dimension mismatch");
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| {
                    a.at(i, col)
                        .pivot_weight()
                        .total_cmp(&a.at(j, col).pivot_weight())
                })
                .unwrap();
            if a.at(pivot_row, col).pivot_weight() == 0.0 {
                return Err(Error::SingularSystem(format!(
                    "no usable pivot in column {col}"
                )));
            }
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(pivot_row * n + j, col * n + j);
                }
                for j in 0..b.cols {
                    b.data.swap(pivot_row * b.cols + j, col * b.cols + j);
                }
            }
            let pivot = a.at(col, col).clone();
            for i in 0..n {
                if i == col || a.at(i, col).is_zero_el() {
                    continue;
                }
                let factor = a.at(i, col).div(&pivot)?;
                for j in col..n {
                    let v = a.at(i, j).sub(&factor.mul(a.at(col, j)));
                    *a.at_mut(i, j) = v;
                }
                for j in 0..b.cols {
                    let v = b.at(i, j).sub(&factor.mul(b.at(col, j)));
                    *b.at_mut(i, j) = v;
                }
            }
        }
        for i in 0..n {
            let pivot = a.at(i, i).clone();
            for j in 0..b.cols {
                let v = b.at(i, j).div(&pivot)?;
                *b.at_mut(i, j) = v;
            }
        }
        Ok(b)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Mat::identity(self.rows))
    }

    /// Determinant by elimination (tracks row swaps).
    pub fn det(&self) -> Result<T> {
        assert_eq!(self.rows, self.cols, "det needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        let mut negate = false;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| {
                    a.at(i, col)
                        .pivot_weight()
                        .total_cmp(&a.at(j, col).pivot_weight())
                })
                .unwrap();
            if a.at(pivot_row, col).pivot_weight() == 0.0 {
                // Could still be an exact zero column: determinant zero.
                if a.at(pivot_row, col).is_zero_el() {
                    return Ok(T::zero());
                }
                return Err(Error::SingularSystem(
                    "pivot enclosure straddles zero; refine inputs".into(),
                ));
            }
            if pivot_row != col {
                negate = !negate;
                for j in 0..n {
                    a.data.swap(pivot_row * n + j, col * n + j);
                }
            }
            let pivot = a.at(col, col).clone();
            det = det.mul(&pivot);
            for i in col + 1..n {
                if a.at(i, col).is_zero_el() {
                    continue;
                }
                let factor = a.at(i, col).div(&pivot)?;
                for j in col..n {
                    let v = a.at(i, j).sub(&factor.mul(a.at(col, j)));
                    *a.at_mut(i, j) = v;
                }
            }
        }
        Ok(if negate { det.neg() } else { det })
    }
}

impl Mat<Complex64> {
    /// Max-norm of the matrix (largest entry modulus).
    #[must_use]
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary part magnitude over all entries.
    #[must_use]
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    #[test]
    fn exact_inverse_roundtrip() {
        let m = Mat::from_rows(vec![
            vec![ratio(2, 1), ratio(7, 1), ratio(21, 1)],
            vec![ratio(-4, 1), ratio(-12, 1), ratio(-35, 1)],
            vec![ratio(1, 1), ratio(3, 1), ratio(9, 1)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(3));
        assert_eq!(inv.matmul(&m), Mat::identity(3));
    }

    #[test]
    fn exact_det_of_unit_action_is_plus_minus_one() {
        let m = Mat::from_rows(vec![
            vec![ratio(2, 1), ratio(7, 1), ratio(21, 1)],
            vec![ratio(-4, 1), ratio(-12, 1), ratio(-35, 1)],
            vec![ratio(1, 1), ratio(3, 1), ratio(9, 1)],
        ]);
        let d = m.det().unwrap();
        assert!(d == ratio(1, 1) || d == ratio(-1, 1));
    }

    #[test]
    fn singular_matrix_reports() {
        let m = Mat::from_rows(vec![
            vec![ratio(1, 1), ratio(2, 1)],
            vec![ratio(2, 1), ratio(4, 1)],
        ]);
        assert!(m.inverse().is_err());
        assert_eq!(m.det().unwrap(), ratio(0, 1));
    }

    #[test]
    fn interval_solve_encloses_exact_solution() {
        // Solve a 2×2 system with interval entries that enclose exact ones;
        // the certified solution must enclose the exact solution.
        let wob = |p: i64, q: i64| {
            RInt::new(ratio(p, q) - ratio(1, 1 << 20), ratio(p, q) + ratio(1, 1 << 20))
        };
        let a = Mat::from_rows(vec![vec![wob(3, 1), wob(1, 2)], vec![wob(1, 1), wob(-1, 1)]]);
        let rhs = Mat::from_rows(vec![vec![wob(2, 1)], vec![wob(0, 1)]]);
        let x = a.solve(&rhs).unwrap();
        // Exact: 3x + y/2 = 2, x = y  ⇒  x = y = 4/7
        assert!(x.at(0, 0).contains(&ratio(4, 7)));
        assert!(x.at(1, 0).contains(&ratio(4, 7)));
    }

    #[test]
    fn complex_solve_small_residual() {
        let m = Mat::from_rows(vec![
            vec![Complex64::new(1.0, 2.0), Complex64::new(0.5, -0.25)],
            vec![Complex64::new(-3.0, 0.1), Complex64::new(2.0, 2.0)],
        ]);
        let inv = m.inverse().unwrap();
        let prod = m.matmul(&inv);
        let err = prod.sub_mat(&Mat::identity(2)).max_norm();
        assert!(err < 1e-14, "residual {err}");
    }
}
