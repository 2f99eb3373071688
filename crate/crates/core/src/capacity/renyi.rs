//! α-information radius `K̃_α(N) = inf_σ sup_ρ D̃_α(N(ρ)‖σ)` and the
//! α-Holevo information `χ̃_α(N)` for `α > 1`.
//!
//! For a cq state the sandwiched divergence factorizes:
//! `D̃_α(ρ_XB ‖ ρ_X ⊗ σ) = (1/(α−1)) log₂ Σ_x p_x Q̃_α(ω_x‖σ)`. The radius is
//! found by a cutting-plane loop over a collection of pure inputs; each round
//! solves the finite saddle problem `max_p min_σ` of that expression, then adds
//! the worst-case input against the saddle σ.

use serde::Serialize;

use super::{extrapolate, kernel_leak, start_vectors, to_density, CapacityResult, Witness, C64, LEAK_TOLERANCE};
use crate::channel::{CpMap, KrausChannel};
use crate::divergence::{bloch_grid_norm, theta_power_operator, AscentBudget, SandwichReference, BLOCH_GRID};
use crate::error::{mismatch, Error, Result};
use crate::linalg::random::child_seed;
use crate::linalg::{fractional_power, log2_on_support, log2_trace_power, support_projector, Hermitian, Matrix};
use crate::state::Ensemble;

const ROUNDS: usize = 40;
/// Stop once the best upper value is this close to the best saddle value.
const TARGET_GAP: f64 = 1e-6;
/// Or once the upper value stalls for `STALL_ROUNDS` rounds with a gap below `STALL_GAP`.
const STALL_GAP: f64 = 1e-4;
const STALL_ROUNDS: usize = 3;
const NEW_WEIGHT: f64 = 0.1;
const SIGMA_STEPS: usize = 400;
const WEIGHT_STEPS: usize = 200;
/// Slack of the cross-check between the ensemble and radius routes.
pub const ROUTE_SLACK: f64 = 1e-4;

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidOrder(alpha));
    }
    Ok(())
}

/// `log₂ Σ w_i 2^{l_i}` over the positive weights.
fn log2_weighted_sum(weights: &[f64], logs: &[f64]) -> f64 {
    let top = weights
        .iter()
        .zip(logs)
        .filter(|(w, _)| **w > 0.0)
        .fold(f64::NEG_INFINITY, |a, (_, l)| a.max(*l));
    if !top.is_finite() {
        return top;
    }
    let s: f64 = weights
        .iter()
        .zip(logs)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, l)| w * (l - top).exp2())
        .sum();
    top + s.log2()
}

fn mixture(probs: &[f64], ops: &[Hermitian<f64>]) -> Hermitian<f64> {
    let d = ops[0].dim();
    let mut acc = Matrix::zeros(d, d);
    for (p, w) in probs.iter().zip(ops) {
        if *p > 0.0 {
            acc = &acc + &w.matrix().scale(*p);
        }
    }
    Hermitian::from_hermitian_part(&acc)
}

/// `log₂ Q̃_α(ω_x‖σ)` for every output (`+∞` when the support condition
/// fails) and `log₂ Σ p_x Q̃_α(ω_x‖σ)`.
fn objective(outputs: &[Hermitian<f64>], probs: &[f64], sigma: &Hermitian<f64>, alpha: f64) -> Result<(f64, Vec<f64>)> {
    let reference = SandwichReference::new(sigma, alpha)?;
    let logs = outputs
        .iter()
        .map(|w| Ok(reference.log2_quasi(w)?.unwrap_or(f64::INFINITY)))
        .collect::<Result<Vec<_>>>()?;
    Ok((log2_weighted_sum(probs, &logs), logs))
}

/// `Σ_x p_x (σ^{(1−α)/2α} ω_x σ^{(1−α)/2α})^α`, normalized, computed with the
/// largest eigenvalue power factored out.
fn fixed_point_map(
    outputs: &[Hermitian<f64>],
    probs: &[f64],
    sigma: &Hermitian<f64>,
    alpha: f64,
) -> Result<Hermitian<f64>> {
    let gamma = fractional_power(sigma, (1.0 - alpha) / (2.0 * alpha))?;
    let spectra: Vec<_> = outputs
        .iter()
        .zip(probs)
        .filter(|(_, p)| **p > 0.0)
        .map(|(w, p)| (*p, w.conjugate_by(gamma.matrix()).eigh()))
        .collect();
    let top = spectra
        .iter()
        .flat_map(|(_, s)| {
            (0..s.dim())
                .filter(|&i| s.in_support(i))
                .map(move |i| alpha * s.eigenvalues[i].log2())
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let d = sigma.dim();
    let mut acc = Matrix::zeros(d, d);
    for (p, s) in &spectra {
        acc = &acc + &s.map_support(|l| (alpha * l.log2() - top).exp2()).scale(*p);
    }
    let h = Hermitian::from_hermitian_part(&acc);
    let tr = h.trace();
    Ok(h.scale(1.0 / tr))
}

/// Relative floor for eigenvalues of the fixed-point image before taking logs.
const LOG_FLOOR: f64 = -200.0;

/// `σ^{1−m} T^m` in the log domain, compressed to the support of `σ`. In the
/// commuting case `m = 1/α` solves the first-order condition in one step.
fn geometric_step(
    log_sigma: &Hermitian<f64>,
    support: &Hermitian<f64>,
    log_target: &Hermitian<f64>,
    m: f64,
) -> Hermitian<f64> {
    let c = log_sigma.scale(1.0 - m).add(&log_target.scale(m));
    let spec = c.eigh();
    let shift = spec.lambda_max();
    let e = Hermitian::from_hermitian_part(&spec.map(|x| (x - shift).exp2())).conjugate_by(support.matrix());
    let tr = e.trace();
    e.scale(1.0 / tr)
}

/// `min_σ log₂ Σ p_x Q̃_α(ω_x‖σ)` by the fixed-point iteration
/// `σ ← Σ p_x (σ^{(1−α)/2α} ω_x σ^{(1−α)/2α})^α`: a geometric step of weight
/// `1/α`, halved until the objective decreases, with damped linear mixing
/// as the fallback.
fn optimal_sigma(
    outputs: &[Hermitian<f64>],
    probs: &[f64],
    start: &Hermitian<f64>,
    alpha: f64,
) -> Result<(Hermitian<f64>, f64, Vec<f64>)> {
    let mut sigma = start.clone();
    let (mut lf, mut logs) = objective(outputs, probs, &sigma, alpha)?;
    if !lf.is_finite() {
        sigma = sigma.scale(0.5).add(&mixture(probs, outputs).scale(0.5));
        (lf, logs) = objective(outputs, probs, &sigma, alpha)?;
    }
    for _ in 0..SIGMA_STEPS {
        let target = fixed_point_map(outputs, probs, &sigma, alpha)?;
        let tspec = target.eigh();
        let floor = tspec.lambda_max().log2() + LOG_FLOOR;
        let log_target =
            Hermitian::from_hermitian_part(&tspec.map(|l| if l > 0.0 { l.log2().max(floor) } else { floor }));
        let sspec = sigma.eigh();
        let log_sigma = log2_on_support(&sspec)?;
        let support = support_projector(&sspec);
        let current = sigma.clone();
        let before = lf;
        let mut accept = |cand: Hermitian<f64>| -> Result<bool> {
            let (cl, cq) = objective(outputs, probs, &cand, alpha)?;
            if cl < lf {
                sigma = cand;
                lf = cl;
                logs = cq;
                return Ok(true);
            }
            Ok(false)
        };
        let mut m = 1.0 / alpha;
        let mut moved = false;
        while m > 1e-6 / alpha && !moved {
            moved = accept(geometric_step(&log_sigma, &support, &log_target, m))?;
            if !moved {
                m *= 0.5;
            }
        }
        if moved {
            // Underflowed directions of the image are floored, which
            // shortens the step at large α; lengthen it while that helps.
            m *= 2.0;
            while m <= 1.0 && accept(geometric_step(&log_sigma, &support, &log_target, m))? {
                m *= 2.0;
            }
        }
        let mut mix = 0.5;
        while mix > 1e-5 && !moved {
            moved = accept(current.scale(1.0 - mix).add(&target.scale(mix)))?;
            mix *= 0.5;
        }
        let gain = before - lf;
        if gain <= 1e-16 {
            break;
        }
    }
    Ok((sigma, lf, logs))
}

/// Saddle point of `(1/(α−1)) log₂ Σ p_x Q̃_α(ω_x‖σ)`: maximum over `p`,
/// minimum over `σ`.
struct Saddle {
    probs: Vec<f64>,
    sigma: Hermitian<f64>,
    value: f64,
}

fn solve_saddle(outputs: &[Hermitian<f64>], probs: Vec<f64>, sigma: &Hermitian<f64>, alpha: f64) -> Result<Saddle> {
    let (mut sigma, lf, mut logs) = optimal_sigma(outputs, &probs, sigma, alpha)?;
    let mut probs = probs;
    let mut value = lf / (alpha - 1.0);
    let mut step = 1.0;
    for _ in 0..WEIGHT_STEPS {
        let div: Vec<f64> = logs.iter().map(|l| l / (alpha - 1.0)).collect();
        let top = div
            .iter()
            .zip(&probs)
            .filter(|(_, p)| **p > 0.0)
            .fold(f64::NEG_INFINITY, |a, (d, _)| a.max(*d));
        if !top.is_finite() || top - value < 1e-10 {
            break;
        }
        let mut cand: Vec<f64> = probs
            .iter()
            .zip(&div)
            .map(|(p, d)| if *p > 0.0 { p * (step * (d - top)).exp2() } else { 0.0 })
            .collect();
        let total: f64 = cand.iter().sum();
        cand.iter_mut().for_each(|p| *p /= total);
        let (cs, cl, cq) = optimal_sigma(outputs, &cand, &sigma, alpha)?;
        let cv = cl / (alpha - 1.0);
        if cv > value {
            let gain = cv - value;
            probs = cand;
            sigma = cs;
            logs = cq;
            value = cv;
            step = (2.0 * step).min(1.0);
            if gain < 1e-12 {
                break;
            }
        } else {
            step *= 0.5;
            if step < 1e-4 {
                break;
            }
        }
    }
    Ok(Saddle { probs, sigma, value })
}

/// `sup_ψ D̃_α(N(ψψ†)‖σ)` from the given starts. The objective
/// `ψψ† ↦ Tr[(Γ N(ψψ†) Γ)^α]`, `Γ = σ^{(1−α)/2α}`, is convex, so jumping to the
/// top eigenvector of its gradient never decreases it.
pub(crate) fn max_output_renyi(
    map: &CpMap<f64>,
    sigma: &Hermitian<f64>,
    alpha: f64,
    starts: &[Vec<C64>],
    max_iterations: usize,
) -> Result<(f64, Vec<C64>)> {
    let (leak, v) = kernel_leak(map, sigma)?;
    if leak > LEAK_TOLERANCE {
        return Ok((f64::INFINITY, v));
    }
    let m = map.post_compose(&theta_power_operator(sigma, (1.0 - alpha) / alpha)?)?;
    let eval = |psi: &[C64]| -> Result<(f64, Hermitian<f64>)> {
        let spec = m.apply_pure(psi)?.eigh();
        let top = spec.lambda_max();
        let grad = Hermitian::from_hermitian_part(&spec.map_support(|l| (l / top).powf(alpha - 1.0)));
        Ok((log2_trace_power(&spec.eigenvalues, alpha), grad))
    };
    let mut best = (f64::NEG_INFINITY, starts[0].clone());
    for s in starts {
        let mut psi = s.clone();
        let (mut val, mut grad) = eval(&psi)?;
        for _ in 0..max_iterations {
            let next = m.apply_adjoint(&grad)?.eigh().eigenvector(0);
            let first = eval(&next)?;
            if !(first.0 > val + 1e-12 * (alpha - 1.0)) {
                if first.0 > val {
                    psi = next;
                    val = first.0;
                }
                break;
            }
            let (next, nv, ng) = extrapolate(&psi, next, first, &eval)?;
            psi = next;
            val = nv;
            grad = ng;
        }
        if val > best.0 {
            best = (val, psi);
        }
    }
    Ok((best.0 / (alpha - 1.0), best.1))
}

/// Upper value at `σ` with the full start budget, plus the Bloch grid for qubit inputs.
fn certified_upper(
    map: &CpMap<f64>,
    sigma: &Hermitian<f64>,
    alpha: f64,
    extra: &[Vec<C64>],
    budget: &AscentBudget,
) -> Result<f64> {
    let d = map.d_in();
    let mut starts = start_vectors(d, budget.restarts.max(1), child_seed(budget.seed, u64::MAX));
    starts.extend(extra.iter().cloned());
    let (mut upper, _) = max_output_renyi(map, sigma, alpha, &starts, budget.max_iterations)?;
    if d == 2 && upper.is_finite() {
        let m = map.post_compose(&theta_power_operator(sigma, (1.0 - alpha) / alpha)?)?;
        let grid = bloch_grid_norm(&m, alpha, BLOCH_GRID.0, BLOCH_GRID.1)?;
        upper = upper.max(alpha / (alpha - 1.0) * grid.value.log2());
    }
    Ok(upper)
}

/// Outcome of the cutting-plane search.
pub(crate) struct RadiusSearch {
    pub upper: f64,
    pub lower: f64,
    pub sigma: Hermitian<f64>,
    pub ensemble: Ensemble<f64>,
    pub rounds: usize,
}

pub(crate) fn radius_search(map: &CpMap<f64>, alpha: f64, budget: &AscentBudget) -> Result<RadiusSearch> {
    check_order(alpha)?;
    let d = map.d_in();
    let mut states = start_vectors(d, d * d - d, child_seed(budget.seed, 0));
    let mut outputs = states.iter().map(|s| map.apply_pure(s)).collect::<Result<Vec<_>>>()?;
    let mut probs = vec![1.0 / states.len() as f64; states.len()];
    let mut sigma = mixture(&probs, &outputs);
    let mut best_upper = f64::INFINITY;
    let mut best_sigma = sigma.clone();
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_ensemble = super::pure_ensemble(&probs, &states)?;
    let mut rounds = 0;
    let mut history = Vec::new();
    for round in 0..ROUNDS {
        rounds = round + 1;
        let saddle = solve_saddle(&outputs, probs, &sigma, alpha)?;
        probs = saddle.probs;
        sigma = saddle.sigma;
        if saddle.value > best_lower {
            best_lower = saddle.value;
            best_ensemble = super::pure_ensemble(&probs, &states)?;
        }
        let mut starts: Vec<Vec<C64>> = states
            .iter()
            .zip(&probs)
            .filter(|(_, p)| **p > 1e-9)
            .map(|(s, _)| s.clone())
            .collect();
        starts.extend(start_vectors(d, 2, child_seed(budget.seed, 1000 + round as u64)).split_off(d));
        let (upper, worst) = max_output_renyi(map, &sigma, alpha, &starts, budget.max_iterations)?;
        if upper < best_upper {
            best_upper = upper;
            best_sigma = sigma.clone();
        }
        history.push(best_upper);
        let stalled = history.len() > STALL_ROUNDS
            && history[history.len() - 1 - STALL_ROUNDS] - best_upper < 1e-9
            && best_upper - best_lower < STALL_GAP;
        if best_upper - best_lower < TARGET_GAP || stalled {
            break;
        }
        outputs.push(map.apply_pure(&worst)?);
        states.push(worst);
        probs.iter_mut().for_each(|p| *p *= 1.0 - NEW_WEIGHT);
        probs.push(NEW_WEIGHT);
        let keep: Vec<bool> = probs.iter().map(|p| *p >= 1e-12).collect();
        let mut it = keep.iter();
        states.retain(|_| *it.next().unwrap());
        let mut it = keep.iter();
        outputs.retain(|_| *it.next().unwrap());
        probs.retain(|p| *p >= 1e-12);
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
    }
    let upper = certified_upper(map, &best_sigma, alpha, &states, budget)?;
    Ok(RadiusSearch {
        upper,
        // A saddle value above the upper value means the σ-minimization
        // stalled; the minimax theorem caps the lower value at `upper`.
        lower: best_lower.min(upper),
        sigma: best_sigma,
        ensemble: best_ensemble,
        rounds,
    })
}

/// `K̃_α(N)` for `α > 1`. `value` is `sup_ψ D̃_α(N(ψ)‖σ)` at the best σ found
/// and `gap_estimate` its distance to the best saddle value.
pub fn alpha_information_radius(ch: &KrausChannel<f64>, alpha: f64, budget: &AscentBudget) -> Result<CapacityResult> {
    let s = radius_search(ch.as_map(), alpha, budget)?;
    Ok(CapacityResult {
        value: s.upper,
        witness: Witness::State(to_density(&s.sigma)),
        iterations: s.rounds,
        gap_estimate: (s.upper - s.lower).max(0.0),
    })
}

/// `χ̃_α` of a fixed ensemble: `inf_σ D̃_α(ρ_XB ‖ ρ_X ⊗ σ)` for the cq output
/// state.
pub fn alpha_holevo_of_ensemble(e: &Ensemble<f64>, ch: &KrausChannel<f64>, alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    if e.dim() != ch.d_in() {
        return Err(mismatch(format!(
            "ensemble of dimension {} for a channel with input dimension {}",
            e.dim(),
            ch.d_in()
        )));
    }
    let outputs = e
        .states()
        .iter()
        .map(|s| ch.apply_hermitian(s.operator()))
        .collect::<Result<Vec<_>>>()?;
    let start = mixture(e.probs(), &outputs);
    let (_, lf, _) = optimal_sigma(&outputs, e.probs(), &start, alpha)?;
    Ok(lf / (alpha - 1.0))
}

/// α-Holevo information through the radius route, cross-checked against the
/// ensemble route.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaHolevoResult {
    pub alpha: f64,
    /// `K̃_α`, reported as `χ̃_α`.
    pub radius: CapacityResult,
    /// `χ̃_α` of the supplied ensemble (by default the best Holevo ensemble).
    pub ensemble_lower_bound: f64,
    /// `χ̃_α` of the best ensemble met during the radius search.
    pub best_ensemble_bound: f64,
    pub best_ensemble: Ensemble<f64>,
    /// `ensemble_lower_bound ≤ value + 1e−4`.
    pub consistent: bool,
}

impl AlphaHolevoResult {
    pub fn value(&self) -> f64 {
        self.radius.value
    }
}

/// `χ̃_α(N) = K̃_α(N)` with the ensemble route evaluated on `ensemble`, or on
/// the best ensemble of `holevo_information` when `None`.
pub fn alpha_holevo(
    ch: &KrausChannel<f64>,
    alpha: f64,
    budget: &AscentBudget,
    ensemble: Option<&Ensemble<f64>>,
) -> Result<AlphaHolevoResult> {
    check_order(alpha)?;
    let owned;
    let ensemble = match ensemble {
        Some(e) => e,
        None => {
            owned = match super::holevo_information(ch, budget)?.witness {
                Witness::Ensemble(e) => e,
                Witness::State(_) => unreachable!("holevo_information returns an ensemble"),
            };
            &owned
        }
    };
    let lower = alpha_holevo_of_ensemble(ensemble, ch, alpha)?;
    let s = radius_search(ch.as_map(), alpha, budget)?;
    let radius = CapacityResult {
        value: s.upper,
        witness: Witness::State(to_density(&s.sigma)),
        iterations: s.rounds,
        gap_estimate: (s.upper - s.lower).max(0.0),
    };
    Ok(AlphaHolevoResult {
        alpha,
        consistent: lower <= radius.value + ROUTE_SLACK,
        radius,
        ensemble_lower_bound: lower,
        best_ensemble_bound: s.lower,
        best_ensemble: s.ensemble,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::test_support::random_channel;
    use crate::capacity::{holevo_information, information_radius};
    use crate::channel::{classical_channel, depolarizing, replacement};
    use crate::divergence::sandwiched_renyi;
    use crate::linalg::random::{random_density, seeded_rng};
    use crate::state::DensityOperator;

    fn noiseless_bit() -> KrausChannel<f64> {
        classical_channel(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn fixed_ensemble_matches_direct_divergence() {
        // Single-member ensemble: χ̃_α = inf_σ D̃_α(ω‖σ) = 0 at σ = ω.
        let mut rng = seeded_rng(100);
        let ch = random_channel(2, 2, 2, &mut rng);
        let e = Ensemble::new(vec![1.0], vec![DensityOperator::basis(2, 0)]).unwrap();
        assert!(alpha_holevo_of_ensemble(&e, &ch, 2.0).unwrap().abs() < 1e-9);

        // Two orthogonal outputs with σ = I/2 fixed is an upper bound.
        let e = Ensemble::uniform(vec![DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)]).unwrap();
        let v = alpha_holevo_of_ensemble(&e, &noiseless_bit(), 3.0).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn ensemble_route_is_below_any_sigma() {
        let mut rng = seeded_rng(101);
        let ch = random_channel(2, 2, 2, &mut rng);
        let states: Vec<_> = (0..3)
            .map(|_| DensityOperator::from_hermitian(random_density(2, 1, &mut rng), vec![2]).unwrap())
            .collect();
        let e = Ensemble::new(vec![0.5, 0.3, 0.2], states.clone()).unwrap();
        let alpha = 2.0;
        let v = alpha_holevo_of_ensemble(&e, &ch, alpha).unwrap();
        for _ in 0..20 {
            let sigma = DensityOperator::from_hermitian(random_density(2, 2, &mut rng), vec![2]).unwrap();
            let q: f64 = e
                .probs()
                .iter()
                .zip(&states)
                .map(|(p, s)| {
                    p * (sandwiched_renyi(&ch.apply(s).unwrap(), &sigma, alpha).unwrap() * (alpha - 1.0)).exp2()
                })
                .sum();
            assert!(v <= q.log2() / (alpha - 1.0) + 1e-12);
        }
    }

    #[test]
    fn noiseless_bit_and_replacement() {
        let b = AscentBudget::default();
        for a in [1.5, 2.0, 8.0] {
            let r = alpha_holevo(&noiseless_bit(), a, &b, None).unwrap();
            assert!((r.value() - 1.0).abs() < 1e-6, "{a}: {r:?}");
            assert!((r.ensemble_lower_bound - 1.0).abs() < 1e-6 && r.consistent);
        }
        let mut rng = seeded_rng(102);
        let omega = DensityOperator::from_hermitian(random_density(2, 2, &mut rng), vec![2]).unwrap();
        let rep = replacement(&omega, 2).unwrap();
        for a in [1.5, 4.0, 1e8] {
            let r = alpha_holevo(&rep, a, &b, None).unwrap();
            assert!(
                r.value().abs() < 1e-9 && r.ensemble_lower_bound.abs() < 1e-9,
                "{a}: {r:?}"
            );
        }
    }

    #[test]
    fn routes_agree_on_random_channels() {
        let mut rng = seeded_rng(103);
        let b = AscentBudget::default();
        for _ in 0..2 {
            let ch = random_channel(2, 2, 2, &mut rng);
            for a in [1.5, 2.0, 3.0] {
                let r = alpha_holevo(&ch, a, &b, None).unwrap();
                assert!(r.consistent, "{r:?}");
                assert!(r.best_ensemble_bound >= r.value() - 5e-3, "{r:?}");
            }
        }
    }

    #[test]
    fn approaches_radius_near_one() {
        let mut rng = seeded_rng(104);
        let b = AscentBudget::default();
        let ch = random_channel(2, 2, 2, &mut rng);
        let k = information_radius(&ch, &b).unwrap().value;
        let mut last = f64::INFINITY;
        for a in [1.5, 1.1, 1.01, 1.001] {
            let v = alpha_information_radius(&ch, a, &b).unwrap().value;
            assert!(v <= last + 1e-6 && v >= k - 1e-4);
            last = v;
        }
        assert!((last - k).abs() < 1e-3);
    }

    #[test]
    fn eb_depolarizing_route_check() {
        let ch = depolarizing(2, 0.25).unwrap();
        let b = AscentBudget::default();
        let chi = holevo_information(&ch, &b).unwrap();
        let Witness::Ensemble(e) = &chi.witness else { panic!() };
        let r = alpha_holevo(&ch, 2.0, &b, Some(e)).unwrap();
        assert!(r.ensemble_lower_bound <= r.value() + 1e-4);
        assert!(r.value() >= chi.value - 1e-4);
    }
}
