//! Tensor-product structure: Kronecker products, partial traces and partial
//! transposes over a list of subsystem dimensions.
//!
//! Composite indices are row-major in subsystem order: for dimensions
//! `[d_0, …, d_{k-1}]` the multi-index `(i_0, …, i_{k-1})` maps to
//! `Σ i_j · Π_{l>j} d_l`.

use crate::error::{mismatch, Result};
use crate::linalg::Matrix;
use crate::scalar::{Complex, Real};

pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (br, bc) = (b.rows(), b.cols());
    Matrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Kronecker product of a list of matrices, left to right.
pub fn kron_all<T: Real>(factors: &[&Matrix<T>]) -> Matrix<T> {
    let mut it = factors.iter();
    let first = (*it.next().expect("at least one factor")).clone();
    it.fold(first, |acc, m| kron(&acc, m))
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Offsets of every multi-index over `systems`, enumerated in row-major order.
fn offsets(dims: &[usize], strides: &[usize], systems: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &k in systems {
        let mut next = Vec::with_capacity(out.len() * dims[k]);
        for &base in &out {
            for i in 0..dims[k] {
                next.push(base + i * strides[k]);
            }
        }
        out = next;
    }
    out
}

fn check_dims<T: Real>(m: &Matrix<T>, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total || dims.iter().any(|&d| d == 0) {
        return Err(mismatch(format!(
            "subsystem dims {dims:?} do not match a {}x{} operator",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn check_systems(systems: &[usize], n: usize) -> Result<()> {
    for (i, &s) in systems.iter().enumerate() {
        if s >= n || systems[..i].contains(&s) {
            return Err(mismatch(format!("invalid subsystem list {systems:?} for {n} systems")));
        }
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems appear in
/// their original order regardless of the order of `keep`.
pub fn partial_trace<T: Real>(m: &Matrix<T>, dims: &[usize], keep: &[usize]) -> Result<Matrix<T>> {
    check_dims(m, dims)?;
    check_systems(keep, dims.len())?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let st = strides(dims);
    let keep_off = offsets(dims, &st, &kept);
    let trace_off = offsets(dims, &st, &traced);
    let dk = keep_off.len();
    let mut out = Matrix::zeros(dk, dk);
    for (a, &oa) in keep_off.iter().enumerate() {
        for (b, &ob) in keep_off.iter().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for &t in &trace_off {
                acc += m[(oa + t, ob + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Transposes the indices of the listed subsystems.
pub fn partial_transpose<T: Real>(m: &Matrix<T>, dims: &[usize], systems: &[usize]) -> Result<Matrix<T>> {
    check_dims(m, dims)?;
    check_systems(systems, dims.len())?;
    let st = strides(dims);
    let n = m.rows();
    let digit = |idx: usize, k: usize| (idx / st[k]) % dims[k];
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (mut ii, mut jj) = (i, j);
            for &k in systems {
                let (di, dj) = (digit(i, k), digit(j, k));
                ii = ii - di * st[k] + dj * st[k];
                jj = jj - dj * st[k] + di * st[k];
            }
            out[(ii, jj)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// `(I_left ⊗ op ⊗ I_right) · m` without materializing the embedded operator.
///
/// `m` has `left · op.cols() · right` rows and any number of columns.
pub fn left_mul_embedded<T: Real>(op: &Matrix<T>, m: &Matrix<T>, left: usize, right: usize) -> Result<Matrix<T>> {
    let (d_out, d_in) = (op.rows(), op.cols());
    if m.rows() != left * d_in * right {
        return Err(mismatch(format!(
            "embedded operator expects {} rows, found {}",
            left * d_in * right,
            m.rows()
        )));
    }
    let cols = m.cols();
    let mut out = Matrix::zeros(left * d_out * right, cols);
    for l in 0..left {
        for o in 0..d_out {
            for i in 0..d_in {
                let k = op[(o, i)];
                if k.re == T::zero() && k.im == T::zero() {
                    continue;
                }
                for r in 0..right {
                    let src = (l * d_in + i) * right + r;
                    let dst = (l * d_out + o) * right + r;
                    for c in 0..cols {
                        out[(dst, c)] += k * m[(src, c)];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `(I ⊗ K ⊗ I) · m · (I ⊗ K ⊗ I)†`.
pub fn conjugate_embedded<T: Real>(op: &Matrix<T>, m: &Matrix<T>, left: usize, right: usize) -> Result<Matrix<T>> {
    let half = left_mul_embedded(op, m, left, right)?;
    Ok(left_mul_embedded(op, &half.adjoint(), left, right)?.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{ginibre, random_density};
    use crate::scalar::cre;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kron_of_identities_and_diagonals() {
        let i2 = Matrix::<f64>::identity(2);
        assert_eq!(kron(&i2, &i2), Matrix::identity(4));
        let d = kron(&Matrix::from_diag(&[1.0, 2.0]), &Matrix::from_diag(&[3.0, 4.0]));
        assert_eq!(d, Matrix::from_diag(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn mixed_product_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let [a, b, c, d] = [0; 4].map(|_| ginibre::<f64>(2, 2, &mut rng));
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    fn bell() -> Matrix<f64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Matrix::outer(&[cre(h), cre(0.0), cre(0.0), cre(h)])
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let r = partial_trace(&bell(), &[2, 2], &[0]).unwrap();
        assert!(r.approx_eq(&Matrix::identity(2).scale(0.5), 1e-15));
    }

    #[test]
    fn product_state_marginals() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_density::<f64>(2, 2, &mut rng);
        let b = random_density::<f64>(3, 3, &mut rng);
        let ab = kron(a.matrix(), b.matrix());
        assert!(partial_trace(&ab, &[2, 3], &[0]).unwrap().approx_eq(a.matrix(), 1e-14));
        assert!(partial_trace(&ab, &[2, 3], &[1]).unwrap().approx_eq(b.matrix(), 1e-14));
    }

    #[test]
    fn traces_compose_and_preserve_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = random_density::<f64>(8, 8, &mut rng);
        let dims = [2, 2, 2];
        let step = partial_trace(rho.matrix(), &dims, &[0, 2]).unwrap();
        let two_step = partial_trace(&step, &[2, 2], &[0]).unwrap();
        let direct = partial_trace(rho.matrix(), &dims, &[0]).unwrap();
        assert!(two_step.max_abs_diff(&direct) < 1e-12);
        assert!((direct.trace().re - 1.0).abs() < 1e-12);
        assert!(partial_trace(rho.matrix(), &[2, 3], &[0]).is_err());
        assert!(partial_trace(rho.matrix(), &dims, &[0, 0]).is_err());
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density::<f64>(6, 6, &mut rng);
        let once = partial_transpose(rho.matrix(), &[2, 3], &[1]).unwrap();
        let twice = partial_transpose(&once, &[2, 3], &[1]).unwrap();
        assert!(twice.max_abs_diff(rho.matrix()) < 1e-15);
        let full = partial_transpose(rho.matrix(), &[2, 3], &[0, 1]).unwrap();
        assert!(full.max_abs_diff(&rho.matrix().transpose()) < 1e-15);
    }

    #[test]
    fn embedded_conjugation_matches_explicit_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let k = ginibre::<f64>(3, 2, &mut rng);
        let rho = random_density::<f64>(2 * 2 * 2, 8, &mut rng);
        let big = kron_all(&[&Matrix::identity(2), &k, &Matrix::identity(2)]);
        let explicit = big.sandwich(rho.matrix());
        let fast = conjugate_embedded(&k, rho.matrix(), 2, 2).unwrap();
        assert!(explicit.max_abs_diff(&fast) < 1e-12);
    }
}
