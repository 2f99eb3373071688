//! Spectral functions of PSD operators and Schatten norms.
//!
//! Functions are evaluated on the support: eigenvalues below
//! `SUPPORT_CUTOFF · λ_max` are treated as exact zeros and mapped to zero,
//! whatever the function (so `M^p` with `p < 0` is the generalized inverse
//! power and `M^0` is the support projector).

use crate::error::{Error, Result};
use crate::linalg::{Hermitian, Matrix, Spectrum};
use crate::scalar::Real;

/// Relative eigenvalue threshold separating support from kernel.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

/// Eigenvalues below `-NEGATIVE_FLOOR · λ_max` make an operator non-PSD.
pub const NEGATIVE_FLOOR: f64 = 1e-8;

impl<T: Real> Spectrum<T> {
    /// Absolute threshold below which an eigenvalue is in the kernel.
    pub fn support_threshold(&self) -> T {
        T::lit(SUPPORT_CUTOFF) * self.lambda_max().max(T::zero())
    }

    /// Whether eigenvalue `i` belongs to the support.
    pub fn in_support(&self, i: usize) -> bool {
        let l = self.eigenvalues[i];
        l > T::zero() && l > self.support_threshold()
    }

    pub fn rank(&self) -> usize {
        (0..self.dim()).filter(|&i| self.in_support(i)).count()
    }

    /// `V diag(f(λ)) V†` with kernel eigenvalues sent to zero.
    pub fn map_support(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let values: Vec<T> = (0..self.dim())
            .map(|i| {
                if self.in_support(i) {
                    f(self.eigenvalues[i])
                } else {
                    T::zero()
                }
            })
            .collect();
        self.assemble(&values)
    }

    /// Fails when the spectrum is not PSD up to the relative floor.
    pub fn check_psd(&self) -> Result<()> {
        let floor = T::lit(NEGATIVE_FLOOR) * self.lambda_max().max(T::zero());
        let min = self.lambda_min();
        if min < -floor {
            return Err(Error::NegativeEigenvalue {
                min_eigenvalue: min.as_f64(),
            });
        }
        Ok(())
    }
}

/// `M^p` computed on the support of a PSD operator.
pub fn fractional_power<T: Real>(m: &Hermitian<T>, p: T) -> Result<Hermitian<T>> {
    let spec = m.eigh();
    fractional_power_of(&spec, p)
}

/// [`fractional_power`] for an already decomposed operator.
pub fn fractional_power_of<T: Real>(spec: &Spectrum<T>, p: T) -> Result<Hermitian<T>> {
    spec.check_psd()?;
    Ok(Hermitian::from_hermitian_part(&spec.map_support(|l| l.powf(p))))
}

/// Base-2 logarithm on the support of a PSD operator (zero on the kernel).
pub fn log2_on_support<T: Real>(spec: &Spectrum<T>) -> Result<Hermitian<T>> {
    spec.check_psd()?;
    Ok(Hermitian::from_hermitian_part(&spec.map_support(|l| l.log2())))
}

/// Orthogonal projector onto the support.
pub fn support_projector<T: Real>(spec: &Spectrum<T>) -> Hermitian<T> {
    Hermitian::from_hermitian_part(&spec.map_support(|_| T::one()))
}

/// Singular values of `m` (square roots of the eigenvalues of `M†M`), descending.
pub fn singular_values<T: Real>(m: &Matrix<T>) -> Vec<T> {
    let gram = Hermitian::from_hermitian_part(&(&m.adjoint() * m));
    gram.eigenvalues()
        .into_iter()
        .map(|l| l.max(T::zero()).sqrt())
        .collect()
}

/// `(Σ s_i^α)^{1/α}` evaluated with the largest value factored out.
pub fn power_mean_norm<T: Real>(values: &[T], alpha: T) -> T {
    let top = values.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
    if top == T::zero() {
        return T::zero();
    }
    let sum = values
        .iter()
        .map(|&s| (s.abs() / top).powf(alpha))
        .fold(T::zero(), |a, b| a + b);
    top * sum.powf(T::one() / alpha)
}

/// Schatten α-norm `(Tr|M|^α)^{1/α}` for `α ≥ 1`.
///
/// Hermitian input is handled through its eigenvalues, which is both cheaper
/// and more accurate than the singular values of `M†M`.
pub fn schatten_norm<T: Real>(m: &Matrix<T>, alpha: T) -> Result<T> {
    if !(alpha >= T::one()) {
        return Err(Error::InvalidOrder(alpha.as_f64()));
    }
    if m.is_square() && m.hermiticity_error() <= T::lit(1e-13) * T::one().max(m.max_abs()) {
        return Ok(power_mean_norm(&Hermitian::from_hermitian_part(m).eigenvalues(), alpha));
    }
    Ok(power_mean_norm(&singular_values(m), alpha))
}

/// Schatten α-norm of a Hermitian operator from its eigenvalues.
pub fn schatten_norm_hermitian<T: Real>(h: &Hermitian<T>, alpha: T) -> Result<T> {
    if !(alpha >= T::one()) {
        return Err(Error::InvalidOrder(alpha.as_f64()));
    }
    Ok(power_mean_norm(&h.eigenvalues(), alpha))
}

/// `log₂ Tr[X^α]` for PSD `X` given by its eigenvalues, stable for large `α`.
pub fn log2_trace_power<T: Real>(eigenvalues: &[T], alpha: T) -> T {
    let top = eigenvalues.iter().fold(T::zero(), |a, &b| a.max(b));
    if top <= T::zero() {
        return T::neg_infinity();
    }
    let sum = eigenvalues
        .iter()
        .filter(|&&l| l > T::zero())
        .map(|&l| (l / top).powf(alpha))
        .fold(T::zero(), |a, b| a + b);
    alpha * top.log2() + sum.log2()
}
