//! Seeded random matrices for test inputs and optimizer restarts.
//!
//! All generators draw `f64` normals from the caller's RNG and convert, so a
//! given seed yields the same operator in every scalar type.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Hermitian, Matrix};
use crate::scalar::{Complex, Real};

/// Deterministic generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed by fixed arithmetic.
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<T: Real>(rows: usize, cols: usize, rng: &mut (impl Rng + ?Sized)) -> Matrix<T> {
    let data = (0..rows * cols)
        .map(|_| Complex::new(normal(rng), normal(rng)))
        .collect();
    Matrix::new(rows, cols, data).expect("finite gaussian entries")
}

/// Random unit vector, uniform on the complex sphere.
pub fn random_pure<T: Real>(d: usize, rng: &mut (impl Rng + ?Sized)) -> Vec<Complex<T>> {
    loop {
        let v: Vec<Complex<T>> = (0..d).map(|_| Complex::new(normal(rng), normal(rng))).collect();
        let n = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        if n > T::lit(1e-12) {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Orthonormalizes the columns of `m` by modified Gram–Schmidt. The
/// implicit triangular factor has a positive real diagonal, which makes the
/// output Haar distributed when `m` is Ginibre.
fn orthonormalize_columns<T: Real>(m: &Matrix<T>) -> Matrix<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut q: Vec<Vec<Complex<T>>> = (0..cols).map(|j| m.column_vec(j)).collect();
    for j in 0..cols {
        for k in 0..j {
            let proj = (0..rows)
                .map(|i| q[k][i].conj() * q[j][i])
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
            for i in 0..rows {
                let sub = q[k][i] * proj;
                q[j][i] -= sub;
            }
        }
        let n = q[j].iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        for z in &mut q[j] {
            *z = *z / n;
        }
    }
    Matrix::from_fn(rows, cols, |i, j| q[j][i])
}

/// Haar-random `d × d` unitary.
pub fn haar_unitary<T: Real>(d: usize, rng: &mut (impl Rng + ?Sized)) -> Matrix<T> {
    orthonormalize_columns(&ginibre(d, d, rng))
}

pub fn haar_unitary_seeded<T: Real>(d: usize, seed: u64) -> Matrix<T> {
    haar_unitary(d, &mut seeded_rng(seed))
}

/// Haar-random isometry `V: C^{d_in} → C^{d_out}` with `V†V = I`.
pub fn random_isometry<T: Real>(d_in: usize, d_out: usize, rng: &mut (impl Rng + ?Sized)) -> Matrix<T> {
    assert!(d_out >= d_in, "isometry needs d_out ≥ d_in");
    orthonormalize_columns(&ginibre(d_out, d_in, rng))
}

pub fn random_hermitian<T: Real>(d: usize, rng: &mut (impl Rng + ?Sized)) -> Hermitian<T> {
    Hermitian::from_hermitian_part(&ginibre(d, d, rng))
}

/// Random density matrix `G G† / Tr(G G†)` with `G` a `d × rank` Ginibre matrix.
pub fn random_density<T: Real>(d: usize, rank: usize, rng: &mut (impl Rng + ?Sized)) -> Hermitian<T> {
    assert!(rank >= 1 && rank <= d, "rank must lie in 1..=d");
    let g = ginibre::<T>(d, rank, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    Hermitian::from_hermitian_part(&w.scale(T::one() / tr))
}

pub fn random_density_seeded<T: Real>(d: usize, rank: usize, seed: u64) -> Hermitian<T> {
    random_density(d, rank, &mut seeded_rng(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_unitary_is_a_phase() {
        let u = haar_unitary_seeded::<f64>(1, 3);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seeded_outputs_are_bit_identical() {
        let a = haar_unitary_seeded::<f64>(4, 7);
        let b = haar_unitary_seeded::<f64>(4, 7);
        assert_eq!(a, b);
        let uu = &a.adjoint() * &a;
        assert!(uu.max_abs_diff(&Matrix::identity(4)) < 1e-9);
    }

    #[test]
    fn rank_two_qutrit_has_one_null_eigenvalue() {
        let rho = random_density_seeded::<f64>(3, 2, 17);
        let ev = rho.eigenvalues();
        assert_eq!(ev.iter().filter(|l| l.abs() < 1e-12).count(), 1);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(ev.iter().all(|&l| l > -1e-12));
    }

    #[test]
    fn isometry_columns_are_orthonormal() {
        let v = random_isometry::<f64>(2, 5, &mut seeded_rng(1));
        assert!((&v.adjoint() * &v).max_abs_diff(&Matrix::identity(2)) < 1e-12);
    }

    #[test]
    fn child_seeds_differ() {
        assert_ne!(child_seed(42, 0), child_seed(42, 1));
        assert_eq!(child_seed(42, 5), child_seed(42, 5));
    }
}
