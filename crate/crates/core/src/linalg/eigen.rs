//! Hermitian operators and their spectral decomposition.
//!
//! The eigensolver is a cyclic complex Jacobi method. Each rotation first
//! removes the phase of the pivot `a_pq` with a diagonal unitary and then
//! applies a real Givens rotation, so every step is an exact unitary
//! similarity and the eigenvector matrix stays orthonormal to round-off.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{cre, Complex, Real};

/// Default bound on `‖M − M†‖∞` relative to `max(1, ‖M‖∞)`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Square matrix known to be Hermitian within a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian<T> {
    matrix: Matrix<T>,
}

impl<T: Real> Hermitian<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        Self::with_tolerance(matrix, T::lit(HERMITICITY_TOLERANCE))
    }

    /// Checks `‖M − M†‖∞ ≤ tol · max(1, ‖M‖∞)` and stores the Hermitian part.
    pub fn with_tolerance(matrix: Matrix<T>, tol: T) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let deviation = matrix.hermiticity_error();
        let bound = tol * T::one().max(matrix.max_abs());
        if deviation > bound {
            return Err(Error::NonHermitian {
                deviation: deviation.as_f64(),
                tolerance: bound.as_f64(),
            });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Takes the Hermitian part of `matrix` without checking how far it was.
    pub(crate) fn from_hermitian_part(matrix: &Matrix<T>) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: Matrix::identity(d),
        }
    }

    pub fn from_diag(diag: &[T]) -> Self {
        Self {
            matrix: Matrix::from_diag(diag),
        }
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn eigh(&self) -> Spectrum<T> {
        jacobi(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.eigh().eigenvalues
    }

    /// `A H A†`, which is Hermitian for any `A`.
    pub fn conjugate_by(&self, a: &Matrix<T>) -> Self {
        Self::from_hermitian_part(&a.sandwich(&self.matrix))
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            matrix: self.matrix.scale(s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix - &other.matrix,
        }
    }

    /// `Tr(A B)` for Hermitian `A`, `B` (always real).
    pub fn trace_with(&self, other: &Self) -> T {
        self.matrix.trace_product_re(&other.matrix)
    }

    pub fn cast<U: Real>(&self) -> Hermitian<U> {
        Hermitian {
            matrix: self.matrix.cast(),
        }
    }
}

/// Eigenvalues sorted in descending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> T {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn eigenvector(&self, i: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column_vec(i)
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let values: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.assemble(&values)
    }

    /// `V diag(values) V†` for externally computed eigenvalue images.
    pub fn assemble(&self, values: &[T]) -> Matrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = Matrix::zeros(n, n);
        for (k, &w) in values.iter().enumerate() {
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                if vik.re == T::zero() && vik.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.assemble(&self.eigenvalues)
    }
}

/// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
/// `max(1e-14, 4ε)·‖M‖_F`.
fn jacobi<T: Real>(m: &Matrix<T>) -> Spectrum<T> {
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = Matrix::<T>::identity(n);
    let rel = T::lit(1e-14).max(T::lit(4.0) * T::epsilon());
    let threshold = rel * a.frobenius_norm();
    let two = T::lit(2.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                let phase = apq / r;
                let phase_c = phase.conj();
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let zeta = (aqq - app) / (two * r);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                // A ← A G with G = diag(1, e^{-iφ}) · [[c, s], [-s, c]].
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * phase_c * s;
                    a[(k, q)] = akp * s + akq * phase_c * c;
                }
                // A ← G† A.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = cre(T::zero());
                a[(q, p)] = cre(T::zero());
                a[(p, p)] = cre(a[(p, p)].re);
                a[(q, q)] = cre(a[(q, q)].re);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * phase_c * s;
                    v[(k, q)] = vkp * s + vkq * phase_c * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real(rows: &[Vec<f64>]) -> Matrix<f64> {
        Matrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn diagonal_input_is_already_diagonal() {
        let s = Hermitian::new(real(&[vec![2.0, 0.0], vec![0.0, 1.0]])).unwrap().eigh();
        assert_eq!(s.eigenvalues, vec![2.0, 1.0]);
        assert!(s.eigenvectors.approx_eq(&Matrix::identity(2), 0.0));
    }

    #[test]
    fn pauli_x_spectrum() {
        let s = Hermitian::new(real(&[vec![0.0, 1.0], vec![1.0, 0.0]])).unwrap().eigh();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_has_complex_eigenvectors() {
        let y = Matrix::new(
            2,
            2,
            vec![cre(0.0), Complex::new(0.0, -1.0), Complex::new(0.0, 1.0), cre(0.0)],
        )
        .unwrap();
        let s = Hermitian::new(y.clone()).unwrap().eigh();
        assert!(s.reconstruct().approx_eq(&y, 1e-14));
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = real(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(Hermitian::new(m), Err(Error::NonHermitian { .. })));
        let r = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(Hermitian::new(r), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [1usize, 2, 3, 4, 7, 16] {
            let h: Hermitian<f64> = random_hermitian(d, &mut rng);
            let s = h.eigh();
            let scale = 1f64.max(h.matrix().max_abs());
            assert!(s.reconstruct().max_abs_diff(h.matrix()) <= 1e-8 * scale);
            let vv = &s.eigenvectors.adjoint() * &s.eigenvectors;
            assert!(vv.max_abs_diff(&Matrix::identity(d)) <= 1e-9);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            for i in 0..d {
                let v = Matrix::column(&s.eigenvector(i));
                let mv = h.matrix() * &v;
                let lv = v.scale(s.eigenvalues[i]);
                assert!(mv.max_abs_diff(&lv) <= 1e-8 * h.matrix().max_abs().max(1.0));
            }
        }
    }

    #[test]
    fn works_in_single_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h: Hermitian<f64> = random_hermitian(4, &mut rng);
        let h32: Hermitian<f32> = h.cast();
        let s32 = h32.eigh();
        let s64 = h.eigh();
        for (a, b) in s32.eigenvalues.iter().zip(&s64.eigenvalues) {
            assert!((*a as f64 - b).abs() < 1e-4);
        }
    }
}
