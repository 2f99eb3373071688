//! Holevo information, information radii, the α-Holevo information and the
//! strong-converse exponent of a channel.
//!
//! Every optimizer result carries a gap estimate: the distance between the
//! reported value and the matching bound from the dual characterization.

mod additivity;
mod exponent;
mod holevo;
mod radius;
mod renyi;

pub use additivity::{additivity_check, AdditivityReport};
pub use exponent::{default_alpha_grid, strong_converse_exponent, ExponentCurve, ExponentOptions};
pub use holevo::{holevo_information, holevo_of_ensemble};
pub use radius::information_radius;
pub use renyi::{alpha_holevo, alpha_holevo_of_ensemble, alpha_information_radius, AlphaHolevoResult};

use serde::Serialize;

use crate::channel::CpMap;
use crate::divergence::entropy_of_spectrum;
use crate::error::{Error, Result};
use crate::linalg::random::{child_seed, random_pure, seeded_rng};
use crate::linalg::{log2_on_support, support_projector, Hermitian, Matrix};
use crate::scalar::{cre, Complex};
use crate::state::{DensityOperator, Ensemble};

type C64 = Complex<f64>;

/// Optimal input ensemble or optimal output-space state.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Ensemble(Ensemble<f64>),
    State(DensityOperator<f64>),
}

/// Optimized channel quantity in bits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityResult {
    pub value: f64,
    pub witness: Witness,
    pub iterations: usize,
    /// Width of the bracket between `value` and the dual bound.
    pub gap_estimate: f64,
}

impl CapacityResult {
    /// Fails with `BudgetExhausted` when the gap exceeds `tol`.
    pub fn certified(self, tol: f64) -> Result<Self> {
        if self.gap_estimate > tol {
            return Err(Error::BudgetExhausted {
                value: self.value,
                gap_estimate: self.gap_estimate,
            });
        }
        Ok(self)
    }
}

pub(crate) fn basis_vector(d: usize, i: usize) -> Vec<C64> {
    (0..d).map(|j| cre(if i == j { 1.0 } else { 0.0 })).collect()
}

pub(crate) fn normalized(v: Vec<C64>) -> Option<Vec<C64>> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n <= 1e-300 || !n.is_finite() {
        return None;
    }
    Some(v.into_iter().map(|z| z / n).collect())
}

pub(crate) fn mat_vec(m: &Matrix<f64>, v: &[C64]) -> Vec<C64> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Riemannian gradient `Gψ − ⟨ψ|G|ψ⟩ψ` of `ψ ↦ ⟨ψ|G|ψ⟩` on the sphere.
pub(crate) fn tangent(g: &Matrix<f64>, psi: &[C64]) -> Vec<C64> {
    let gp = mat_vec(g, psi);
    let e: C64 = psi.iter().zip(&gp).map(|(a, b)| a.conj() * b).sum();
    gp.iter().zip(psi).map(|(a, b)| a - b * e).collect()
}

/// Line search beyond an ascent step `psi → next`: tries
/// `psi + k(next − psi)` for `k = 2, 4, 8, …` while the objective increases.
/// Monotone jumps on nearly flat objectives otherwise crawl at a constant
/// small step.
pub(crate) fn extrapolate<A>(
    psi: &[C64],
    next: Vec<C64>,
    next_eval: (f64, A),
    eval: impl Fn(&[C64]) -> Result<(f64, A)>,
) -> Result<(Vec<C64>, f64, A)> {
    let overlap: C64 = psi.iter().zip(&next).map(|(a, b)| a.conj() * b).sum();
    let mut best = (next, next_eval.0, next_eval.1);
    if overlap.norm() < 1e-3 {
        return Ok(best);
    }
    let phase = overlap.conj() / overlap.norm();
    let dir: Vec<C64> = best.0.iter().zip(psi).map(|(b, a)| b * phase - a).collect();
    let mut k = 2.0;
    while k <= 4096.0 {
        let Some(cand) = normalized(psi.iter().zip(&dir).map(|(a, d)| a + d * k).collect()) else {
            break;
        };
        let (v, aux) = eval(&cand)?;
        if !(v > best.1) {
            break;
        }
        best = (cand, v, aux);
        k *= 2.0;
    }
    Ok(best)
}

/// Basis vectors followed by `extra` seeded Haar-random vectors.
pub(crate) fn start_vectors(d: usize, extra: usize, seed: u64) -> Vec<Vec<C64>> {
    let mut v: Vec<Vec<C64>> = (0..d).map(|i| basis_vector(d, i)).collect();
    for r in 0..extra {
        v.push(random_pure(d, &mut seeded_rng(child_seed(seed, r as u64))));
    }
    v
}

pub(crate) fn to_density(h: &Hermitian<f64>) -> DensityOperator<f64> {
    DensityOperator::from_computed(h.matrix(), vec![h.dim()]).expect("optimizer iterates are states")
}

pub(crate) fn pure_ensemble(probs: &[f64], states: &[Vec<C64>]) -> Result<Ensemble<f64>> {
    let kept: Vec<(f64, &Vec<C64>)> = probs.iter().copied().zip(states).filter(|(p, _)| *p > 0.0).collect();
    let total: f64 = kept.iter().map(|(p, _)| p).sum();
    let probs = kept.iter().map(|(p, _)| p / total).collect();
    let states = kept
        .iter()
        .map(|(_, s)| DensityOperator::pure(s))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(probs, states)
}

/// Largest eigenvalue and eigenvector of `M†(I − Π_σ)`: the worst output mass
/// outside `supp σ` over pure inputs.
pub(crate) fn kernel_leak(map: &CpMap<f64>, sigma: &Hermitian<f64>) -> Result<(f64, Vec<C64>)> {
    let p = support_projector(&sigma.eigh());
    let kernel = Hermitian::identity(sigma.dim()).sub(&p);
    let spec = map.apply_adjoint(&kernel)?.eigh();
    Ok((spec.lambda_max(), spec.eigenvector(0)))
}

/// Kernel leakage above which a divergence against `σ` is infinite.
pub(crate) const LEAK_TOLERANCE: f64 = 1e-9;

/// `sup_ψ D(M(ψψ†)‖σ)` by local ascent from each start: jump to the top
/// eigenvector of the gradient `M†(log M(ψψ†) − log σ)` (valid for a convex
/// objective) and fall back to a backtracking gradient step.
pub(crate) fn max_output_divergence(
    map: &CpMap<f64>,
    sigma: &Hermitian<f64>,
    starts: &[Vec<C64>],
    max_iterations: usize,
) -> Result<(f64, Vec<C64>)> {
    let (leak, v) = kernel_leak(map, sigma)?;
    if leak > LEAK_TOLERANCE {
        return Ok((f64::INFINITY, v));
    }
    let log_sigma = log2_on_support(&sigma.eigh())?;
    let eval = |psi: &[C64]| -> Result<(f64, Hermitian<f64>)> {
        let w = map.apply_pure(psi)?;
        let spec = w.eigh();
        let value = -entropy_of_spectrum(&spec.eigenvalues) - w.trace_with(&log_sigma);
        Ok((value, log2_on_support(&spec)?))
    };
    let mut best = (f64::NEG_INFINITY, starts[0].clone());
    for s in starts {
        let mut psi = s.clone();
        let (mut val, mut log_w) = eval(&psi)?;
        for _ in 0..max_iterations {
            let g = map.apply_adjoint(&log_w.sub(&log_sigma))?;
            let spec = g.eigh();
            let jump = spec.eigenvector(0);
            let first = eval(&jump)?;
            let tiny = 1e-15 * val.abs().max(1.0);
            if first.0 > val + tiny {
                let (jump, jv, jl) = extrapolate(&psi, jump, first, &eval)?;
                psi = jump;
                val = jv;
                log_w = jl;
                continue;
            }
            let dir = tangent(g.matrix(), &psi);
            if dir.iter().map(|z| z.norm_sqr()).sum::<f64>() < 1e-26 {
                break;
            }
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-10 {
                if let Some(c) = normalized(psi.iter().zip(&dir).map(|(a, b)| a + b * t).collect()) {
                    let (cv, cl) = eval(&c)?;
                    if cv > val + tiny {
                        psi = c;
                        val = cv;
                        log_w = cl;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if val > best.0 {
            best = (val, psi);
        }
    }
    Ok(best)
}

#[cfg(test)]
pub(crate) mod test_support {
    use crate::channel::KrausChannel;
    use crate::linalg::random::SeededRng;

    pub fn random_channel(d_in: usize, d_out: usize, env: usize, rng: &mut SeededRng) -> KrausChannel<f64> {
        crate::channel::random_channel(d_in, d_out, env, rng).unwrap()
    }

    pub fn h2(p: f64) -> f64 {
        if p <= 0.0 || p >= 1.0 {
            return 0.0;
        }
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}
