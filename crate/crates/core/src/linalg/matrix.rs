use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{mismatch, Error, Result};
use crate::scalar::{cre, Complex, Real};

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(mismatch(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(mismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = cre(T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = cre(x);
        }
        m
    }

    /// Builds a matrix from real row data.
    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(mismatch("ragged rows"));
        }
        Self::new(r, c, rows.iter().flatten().map(|&x| cre(x)).collect())
    }

    /// Column vector from amplitudes.
    pub fn column(amplitudes: &[Complex<T>]) -> Self {
        Self {
            rows: amplitudes.len(),
            cols: 1,
            data: amplitudes.to_vec(),
        }
    }

    /// `|v⟩⟨v|` for a column vector `v`.
    pub fn outer(v: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    /// Projector onto computational basis vector `i` of dimension `d`.
    pub fn basis_projector(d: usize, i: usize) -> Self {
        let mut m = Self::zeros(d, d);
        m[(i, i)] = cre(T::one());
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column_vec(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .fold(cre(T::zero()), |a, b| a + b)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// `‖M − M†‖∞` measured entry-wise.
    pub fn hermiticity_error(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// Real part of `Tr(A B)` without forming the product.
    pub fn trace_product_re(&self, other: &Self) -> T {
        debug_assert_eq!(self.cols, other.rows);
        debug_assert_eq!(self.rows, other.cols);
        let mut acc = T::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += (self[(i, k)] * other[(k, i)]).re;
            }
        }
        acc
    }

    /// `⟨v|M|v⟩` for a column vector given as a slice.
    pub fn expectation(&self, v: &[Complex<T>]) -> Complex<T> {
        let mut acc = cre(T::zero());
        for i in 0..self.rows {
            let mut row = cre(T::zero());
            for j in 0..self.cols {
                row += self[(i, j)] * v[j];
            }
            acc += v[i].conj() * row;
        }
        acc
    }

    /// Matrix product with a shape check.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.matmul(other))
    }

    fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `A · B · A†`.
    pub fn sandwich(&self, middle: &Self) -> Self {
        &(self * middle) * &self.adjoint()
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| (*a - *b).norm() <= tol)
    }

    /// Largest entry-wise deviation between two equally shaped matrices.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Converts between scalar types.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

// JSON layout: nested row arrays with each entry as `[re, im]`.
impl<T: Real + Serialize> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[T; 2]>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| [self[(i, j)].re, self[(i, j)].im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[T; 2]>> = Vec::deserialize(deserializer)?;
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        let data = rows
            .into_iter()
            .flatten()
            .map(|[re, im]| Complex::new(re, im))
            .collect();
        Matrix::new(r, c, data).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_non_finite_entries() {
        assert!(Matrix::<f64>::new(2, 2, vec![cre(1.0); 3]).is_err());
        assert!(Matrix::<f64>::new(1, 1, vec![cre(f64::NAN)]).is_err());
    }

    #[test]
    fn product_and_adjoint() {
        let a = Matrix::from_fn(2, 3, |i, j| Complex::new((i + j) as f64, i as f64));
        let b = a.adjoint();
        let p = &a * &b;
        assert_eq!(p.rows(), 2);
        assert!(p.hermiticity_error() < 1e-14);
        assert!(a.try_mul(&a).is_err());
    }

    #[test]
    fn json_layout_is_nested_pairs() {
        let m = Matrix::new(1, 2, vec![Complex::new(1.0, -2.0), Complex::new(0.5, 0.0)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[[1.0,-2.0],[0.5,0.0]]]");
        let back: Matrix<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Matrix<f64>>("[[[1,0]],[[1,0],[2,0]]]").is_err());
    }
}
