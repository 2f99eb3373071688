//! The 1→α norm `ν_α(M) = sup_ψ ‖M(ψψ†)‖_α` of a completely positive map.
//!
//! `M(ψψ†) = B B†` with `B = [K_1ψ, …, K_rψ]`, so `‖M(ψψ†)‖_α = ‖B‖²_{2α}` is a
//! convex function of `ψ`. The update `ψ ← M†(X^{α−1})ψ / ‖·‖` maximizes its
//! linearization over the sphere and therefore never decreases the objective.

use rayon::prelude::*;

use crate::channel::CpMap;
use crate::error::{mismatch, Error, Result};
use crate::linalg::random::{child_seed, random_pure, seeded_rng};
use crate::linalg::{power_mean_norm, Hermitian, Matrix};
use crate::scalar::{cre, Complex, Real};

/// `(φ samples, θ samples)` of the half-degree Bloch-sphere grid.
pub const BLOCH_GRID: (usize, usize) = (721, 361);

/// Multi-start settings for the local ascent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AscentBudget {
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for AscentBudget {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 2000,
            seed: 42,
        }
    }
}

impl AscentBudget {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// Best value found and the pure input attaining it. The value is a lower
/// bound on the supremum.
#[derive(Clone, Debug, PartialEq)]
pub struct NormEstimate<T> {
    pub value: T,
    pub input: Vec<Complex<T>>,
}

fn image<T: Real>(map: &CpMap<T>, psi: &[Complex<T>]) -> (Vec<Vec<Complex<T>>>, Hermitian<T>) {
    let cols = crate::channel::kraus_images(map, psi);
    let d = map.d_out();
    let x = Matrix::from_fn(d, d, |i, j| {
        cols.iter()
            .map(|c| c[i] * c[j].conj())
            .fold(cre(T::zero()), |a, b| a + b)
    });
    (cols, Hermitian::from_hermitian_part(&x))
}

fn normalize<T: Real>(v: &mut [Complex<T>]) -> T {
    let n = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
    if n > T::zero() {
        for z in v.iter_mut() {
            *z = *z / n;
        }
    }
    n
}

fn ascend<T: Real>(map: &CpMap<T>, alpha: T, mut psi: Vec<Complex<T>>, max_iterations: usize) -> NormEstimate<T> {
    let (mut cols, x) = image(map, &psi);
    let mut spec = x.eigh();
    let mut value = power_mean_norm(&spec.eigenvalues, alpha);
    for _ in 0..max_iterations {
        let top = spec.lambda_max();
        if top <= T::zero() {
            break;
        }
        // X^{α−1} up to a positive factor, which the normalization removes.
        let w = spec.map(|l| (l.max(T::zero()) / top).powf(alpha - T::one()));
        let mut next = vec![cre(T::zero()); map.d_in()];
        for (k, c) in map.kraus_ops().iter().zip(&cols) {
            let wc: Vec<Complex<T>> = (0..w.rows())
                .map(|i| {
                    (0..w.cols())
                        .map(|j| w[(i, j)] * c[j])
                        .fold(cre(T::zero()), |a, b| a + b)
                })
                .collect();
            for (i, n) in next.iter_mut().enumerate() {
                for (o, v) in wc.iter().enumerate() {
                    *n += k[(o, i)].conj() * *v;
                }
            }
        }
        if normalize(&mut next) == T::zero() {
            break;
        }
        let (next_cols, next_x) = image(map, &next);
        let next_spec = next_x.eigh();
        let next_value = power_mean_norm(&next_spec.eigenvalues, alpha);
        if !(next_value > value) {
            break;
        }
        let gain = next_value - value;
        psi = next;
        cols = next_cols;
        spec = next_spec;
        value = next_value;
        if gain <= T::lit(1e-15) * value {
            break;
        }
    }
    NormEstimate { value, input: psi }
}

/// Multi-start estimate of `ν_α(M)` for `α ≥ 1`. At `α = 1` the value is exact:
/// `λ_max(M†(I))`.
pub fn one_to_alpha_norm<T: Real>(map: &CpMap<T>, alpha: T, budget: &AscentBudget) -> Result<NormEstimate<T>> {
    if !(alpha >= T::one()) || !alpha.is_finite() {
        return Err(Error::InvalidOrder(alpha.as_f64()));
    }
    let d = map.d_in();
    if alpha == T::one() {
        let spec = Hermitian::from_hermitian_part(&map.kraus_completeness()).eigh();
        return Ok(NormEstimate {
            value: spec.lambda_max(),
            input: spec.eigenvector(0),
        });
    }
    let mut starts: Vec<Vec<Complex<T>>> = (0..d)
        .map(|i| (0..d).map(|j| cre(if i == j { T::one() } else { T::zero() })).collect())
        .collect();
    for r in 0..budget.restarts.max(1) {
        starts.push(random_pure(d, &mut seeded_rng(child_seed(budget.seed, r as u64))));
    }
    let results: Vec<NormEstimate<T>> = starts
        .into_par_iter()
        .map(|s| ascend(map, alpha, s, budget.max_iterations))
        .collect();
    Ok(results
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("at least one start"))
}

fn qubit_norm<T: Real>(x: &Hermitian<T>, alpha: T) -> T {
    let m = x.matrix();
    if m.rows() == 2 {
        let (a, d, b) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]);
        let half = T::lit(0.5);
        let mean = half * (a + d);
        let rad = (half * half * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        return power_mean_norm(&[mean + rad, mean - rad], alpha);
    }
    power_mean_norm(&x.eigenvalues(), alpha)
}

/// Exhaustive evaluation of `‖M(ψψ†)‖_α` on an `n_phi × n_theta` grid of
/// qubit pure states `(cos θ/2, e^{iφ} sin θ/2)`, endpoints included.
pub fn bloch_grid_norm<T: Real>(map: &CpMap<T>, alpha: T, n_phi: usize, n_theta: usize) -> Result<NormEstimate<T>> {
    if map.d_in() != 2 {
        return Err(mismatch(format!(
            "Bloch grid needs a qubit input, found {}",
            map.d_in()
        )));
    }
    if !(alpha >= T::one()) {
        return Err(Error::InvalidOrder(alpha.as_f64()));
    }
    let (n_phi, n_theta) = (n_phi.max(2), n_theta.max(2));
    let pi = T::PI();
    let rows: Vec<NormEstimate<T>> = (0..n_theta)
        .into_par_iter()
        .map(|t| {
            let theta = pi * T::lit(t as f64) / T::lit((n_theta - 1) as f64);
            let (c, s) = ((theta / T::lit(2.0)).cos(), (theta / T::lit(2.0)).sin());
            let mut best = NormEstimate {
                value: T::neg_infinity(),
                input: vec![],
            };
            for p in 0..n_phi {
                let phi = T::lit(2.0) * pi * T::lit(p as f64) / T::lit((n_phi - 1) as f64);
                let psi = vec![cre(c), Complex::from_polar(s, phi)];
                let v = qubit_norm(&image(map, &psi).1, alpha);
                if v > best.value {
                    best = NormEstimate { value: v, input: psi };
                }
            }
            best
        })
        .collect();
    Ok(rows
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("non-empty grid"))
}

/// `max(grid, ascent)` for qubit inputs, the ascent alone otherwise.
pub fn nu_certified<T: Real>(map: &CpMap<T>, alpha: T, budget: &AscentBudget) -> Result<NormEstimate<T>> {
    let ascent = one_to_alpha_norm(map, alpha, budget)?;
    if map.d_in() != 2 || alpha == T::one() {
        return Ok(ascent);
    }
    let grid = bloch_grid_norm(map, alpha, BLOCH_GRID.0, BLOCH_GRID.1)?;
    Ok(if grid.value > ascent.value { grid } else { ascent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{identity, replacement, KrausChannel};
    use crate::divergence::theta_power_operator;
    use crate::linalg::random::{random_density, random_isometry, SeededRng};
    use crate::state::DensityOperator;

    fn random_channel(d_in: usize, d_out: usize, env: usize, rng: &mut SeededRng) -> KrausChannel<f64> {
        let v = random_isometry::<f64>(d_in, d_out * env, rng);
        let ops = (0..env)
            .map(|e| Matrix::from_fn(d_out, d_in, |o, i| v[(e * d_out + o, i)]))
            .collect();
        KrausChannel::new(ops).unwrap()
    }

    #[test]
    fn identity_has_unit_norm() {
        for a in [1.0, 1.5, 3.0] {
            let v = one_to_alpha_norm(identity::<f64>(3).as_map(), a, &AscentBudget::default()).unwrap();
            assert!((v.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn replacement_gives_output_norm() {
        let mut rng = seeded_rng(60);
        let omega = DensityOperator::from_hermitian(random_density::<f64>(3, 3, &mut rng), vec![3]).unwrap();
        let r = replacement(&omega, 2).unwrap();
        for a in [1.5, 2.0, 4.0] {
            let v = one_to_alpha_norm(r.as_map(), a, &AscentBudget::default()).unwrap();
            let expected = power_mean_norm(&omega.operator().eigenvalues(), a);
            assert!((v.value - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn ascent_matches_bloch_grid_on_theta_composition() {
        let mut rng = seeded_rng(61);
        for a in [1.5, 2.0, 3.0] {
            let n = random_channel(2, 2, 2, &mut rng);
            let sigma = random_density::<f64>(2, 2, &mut rng);
            let theta = theta_power_operator(&sigma, (1.0 - a) / a).unwrap();
            let m = n.as_map().post_compose(&theta).unwrap();
            let ascent = one_to_alpha_norm(&m, a, &AscentBudget::default()).unwrap();
            let grid = bloch_grid_norm(&m, a, BLOCH_GRID.0, BLOCH_GRID.1).unwrap();
            assert!(
                (ascent.value - grid.value).abs() < 1e-4,
                "{} {}",
                ascent.value,
                grid.value
            );
            assert!(ascent.value >= grid.value - 1e-12);
        }
    }

    #[test]
    fn multi_start_is_deterministic() {
        let mut rng = seeded_rng(62);
        let n = random_channel(3, 2, 3, &mut rng);
        let b = AscentBudget::with_seed(9);
        let x = one_to_alpha_norm(n.as_map(), 2.5, &b).unwrap();
        let y = one_to_alpha_norm(n.as_map(), 2.5, &b).unwrap();
        assert_eq!(x, y);
    }
}
