//! Standard channels.

use crate::channel::{CpMap, KrausChannel, KRAUS_CUTOFF};
use crate::error::{Error, Result};
use rand::Rng;

use crate::linalg::random::random_isometry;
use crate::linalg::Matrix;
use crate::scalar::{cre, Complex, Real};
use crate::state::DensityOperator;

/// Random channel from a Haar isometry `V: C^{d_in} → C^{d_out} ⊗ C^{env}`,
/// with Kraus operators `K_e = (I ⊗ ⟨e|)V`.
pub fn random_channel<T: Real>(
    d_in: usize,
    d_out: usize,
    env: usize,
    rng: &mut (impl Rng + ?Sized),
) -> Result<KrausChannel<T>> {
    if d_in == 0 || d_out == 0 || env == 0 || d_out * env < d_in {
        return Err(Error::InvalidParameter(format!(
            "no isometry from {d_in} into {d_out}x{env} dimensions"
        )));
    }
    let v = random_isometry::<T>(d_in, d_out * env, rng);
    let ops = (0..env)
        .map(|e| Matrix::from_fn(d_out, d_in, |o, i| v[(e * d_out + o, i)]))
        .collect();
    KrausChannel::new(ops)
}

pub fn identity<T: Real>(d: usize) -> KrausChannel<T> {
    KrausChannel::from_map_unchecked(CpMap::new(vec![Matrix::identity(d)]).expect("one operator"))
}

/// `R_ω(ρ) = Tr(ρ) ω` on a `d_in`-dimensional input.
pub fn replacement<T: Real>(omega: &DensityOperator<T>, d_in: usize) -> Result<KrausChannel<T>> {
    if d_in == 0 {
        return Err(Error::InvalidParameter("input dimension must be positive".into()));
    }
    let spec = omega.eigh();
    let d_out = omega.dim();
    let mut ops = Vec::new();
    for j in 0..spec.dim() {
        let p = spec.eigenvalues[j];
        if p <= T::lit(KRAUS_CUTOFF) {
            continue;
        }
        let e = spec.eigenvector(j);
        let w = p.sqrt();
        for i in 0..d_in {
            ops.push(Matrix::from_fn(d_out, d_in, |r, c| {
                if c == i {
                    e[r] * w
                } else {
                    cre(T::zero())
                }
            }));
        }
    }
    KrausChannel::new(ops)
}

/// `λρ + (1−λ) Tr(ρ) I/d`, completely positive for `−1/(d²−1) ≤ λ ≤ 1`.
pub fn depolarizing<T: Real>(d: usize, lambda: T) -> Result<KrausChannel<T>> {
    if d < 2 {
        return Err(Error::InvalidParameter("depolarizing channel needs d ≥ 2".into()));
    }
    let d2 = T::lit((d * d) as f64);
    let lower = -T::one() / (d2 - T::one());
    if !(lambda >= lower && lambda <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "depolarizing parameter {lambda} outside [{lower}, 1]"
        )));
    }
    // Twirl over the d² Weyl operators X^a Z^b averages to Tr(ρ) I/d.
    let rest = (T::one() - lambda) / d2;
    let omega = T::lit(2.0) * T::PI() / T::lit(d as f64);
    let mut ops = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let w = if a == 0 && b == 0 { lambda + rest } else { rest };
            if w <= T::zero() {
                continue;
            }
            let s = w.sqrt();
            ops.push(Matrix::from_fn(d, d, |r, c| {
                if r == (c + a) % d {
                    Complex::from_polar(s, omega * T::lit((b * c) as f64))
                } else {
                    cre(T::zero())
                }
            }));
        }
    }
    KrausChannel::new(ops)
}

/// Qubit dephasing `(1−q)ρ + q ZρZ`.
pub fn dephasing<T: Real>(q: T) -> Result<KrausChannel<T>> {
    if !(q >= T::zero() && q <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "dephasing probability {q} outside [0, 1]"
        )));
    }
    let i = Matrix::identity(2).scale((T::one() - q).sqrt());
    let z = Matrix::from_diag(&[T::one(), -T::one()]).scale(q.sqrt());
    KrausChannel::new(vec![i, z])
}

/// Classical channel `|x⟩⟨x| ↦ Σ_y P(y|x) |y⟩⟨y|` with `p[y][x] = P(y|x)`.
/// Off-diagonal input coherences are destroyed.
pub fn classical_channel<T: Real>(p: &[Vec<T>]) -> Result<KrausChannel<T>> {
    let d_out = p.len();
    let d_in = p.first().map_or(0, Vec::len);
    if d_out == 0 || d_in == 0 || p.iter().any(|row| row.len() != d_in) {
        return Err(Error::InvalidParameter(
            "stochastic matrix must be rectangular and non-empty".into(),
        ));
    }
    for x in 0..d_in {
        let mut total = T::zero();
        for row in p {
            if !(row[x] >= T::zero()) {
                return Err(Error::InvalidParameter(format!(
                    "negative transition probability in column {x}"
                )));
            }
            total += row[x];
        }
        if (total - T::one()).abs() > T::lit(1e-10) {
            return Err(Error::InvalidParameter(format!("column {x} sums to {total}")));
        }
    }
    let mut ops = Vec::new();
    for (y, row) in p.iter().enumerate() {
        for (x, &pyx) in row.iter().enumerate() {
            if pyx > T::zero() {
                let mut k = Matrix::zeros(d_out, d_in);
                k[(y, x)] = cre(pyx.sqrt());
                ops.push(k);
            }
        }
    }
    KrausChannel::new(ops)
}

/// Binary symmetric channel with crossover probability `p`.
pub fn bsc<T: Real>(p: T) -> Result<KrausChannel<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidProbability(p.as_f64()));
    }
    classical_channel(&[vec![T::one() - p, p], vec![p, T::one() - p]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_density, seeded_rng};

    #[test]
    fn every_constructor_is_trace_preserving() {
        let mut rng = seeded_rng(40);
        let omega = DensityOperator::from_hermitian(random_density::<f64>(3, 2, &mut rng), vec![3]).unwrap();
        let channels = vec![
            identity::<f64>(3),
            replacement(&omega, 2).unwrap(),
            depolarizing(2, -1.0 / 3.0).unwrap(),
            depolarizing(3, 0.4).unwrap(),
            depolarizing(4, -1.0 / 15.0).unwrap(),
            dephasing(0.3).unwrap(),
            classical_channel(&[vec![0.2, 1.0, 0.5], vec![0.8, 0.0, 0.5]]).unwrap(),
            bsc(0.11).unwrap(),
        ];
        for ch in &channels {
            let dev = ch
                .as_map()
                .kraus_completeness()
                .max_abs_diff(&Matrix::identity(ch.d_in()));
            assert!(dev < 1e-12, "{dev}");
        }
    }

    #[test]
    fn depolarizing_action_and_range() {
        let mut rng = seeded_rng(41);
        let rho = DensityOperator::from_hermitian(random_density::<f64>(3, 3, &mut rng), vec![3]).unwrap();
        let out = depolarizing(3, 0.3).unwrap().apply(&rho).unwrap();
        let expected = &rho.matrix().scale(0.3) + &Matrix::identity(3).scale(0.7 / 3.0);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-12);
        let id = depolarizing(3, 1.0).unwrap().apply(&rho).unwrap();
        assert!(id.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        assert!(depolarizing::<f64>(2, -0.34).is_err());
        assert!(depolarizing::<f64>(2, 1.01).is_err());
    }

    #[test]
    fn classical_examples() {
        let noiseless = classical_channel(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let one = DensityOperator::<f64>::basis(2, 1);
        assert_eq!(noiseless.apply(&one).unwrap().matrix(), one.matrix());
        let out = bsc(0.2).unwrap().apply(&DensityOperator::basis(2, 0)).unwrap();
        assert!(out.matrix().max_abs_diff(&Matrix::from_diag(&[0.8, 0.2])) < 1e-15);
        assert!(classical_channel(&[vec![0.5, 0.5], vec![0.6, 0.5]]).is_err());
        assert!(bsc(1.5).is_err());
    }

    #[test]
    fn dephasing_kills_coherences() {
        let plus = DensityOperator::<f64>::pure(&[cre(0.5f64.sqrt()), cre(0.5f64.sqrt())]).unwrap();
        let out = dephasing(0.5).unwrap().apply(&plus).unwrap();
        assert!(out.matrix().max_abs_diff(&Matrix::identity(2).scale(0.5)) < 1e-15);
        assert!(dephasing(-0.1f64).is_err());
    }
}
