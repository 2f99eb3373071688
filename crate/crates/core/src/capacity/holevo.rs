//! Holevo information `χ(N) = sup I(X;B)` over input ensembles.
//!
//! Alternating ascent on ensembles of at most `d_in²` pure states: exact
//! Blahut–Arimoto updates of the weights, then a backtracking gradient step
//! on all states at once.

use rayon::prelude::*;

use super::{max_output_divergence, normalized, pure_ensemble, start_vectors, tangent, CapacityResult, Witness, C64};
use crate::channel::{CpMap, KrausChannel};
use crate::divergence::{entropy_of_spectrum, AscentBudget};
use crate::error::{mismatch, Result};
use crate::linalg::random::child_seed;
use crate::linalg::{log2_on_support, Hermitian, Matrix};
use crate::state::{cq_state, Ensemble};

/// Blahut–Arimoto steps between state updates.
const WEIGHT_STEPS: usize = 8;

/// `I(X;B)` of `Σ p_x |x⟩⟨x| ⊗ N(ρ_x)`.
pub fn holevo_of_ensemble(e: &Ensemble<f64>, ch: &KrausChannel<f64>) -> Result<f64> {
    if e.dim() != ch.d_in() {
        return Err(mismatch(format!(
            "ensemble of dimension {} for a channel with input dimension {}",
            e.dim(),
            ch.d_in()
        )));
    }
    let outputs = e.states().iter().map(|s| ch.apply(s)).collect::<Result<Vec<_>>>()?;
    let out = Ensemble::new(e.probs().to_vec(), outputs)?;
    crate::divergence::mutual_information(&cq_state(&out), &[0], &[1])
}

/// Weighted pure-state ensemble together with its channel outputs.
#[derive(Clone, Debug)]
pub(crate) struct PureEnsemble {
    pub states: Vec<Vec<C64>>,
    pub probs: Vec<f64>,
    outputs: Vec<Hermitian<f64>>,
    entropies: Vec<f64>,
}

impl PureEnsemble {
    pub fn new(map: &CpMap<f64>, states: Vec<Vec<C64>>, probs: Vec<f64>) -> Result<Self> {
        let outputs = states.iter().map(|s| map.apply_pure(s)).collect::<Result<Vec<_>>>()?;
        let entropies = outputs.iter().map(|w| entropy_of_spectrum(&w.eigenvalues())).collect();
        Ok(Self {
            states,
            probs,
            outputs,
            entropies,
        })
    }

    pub fn uniform(map: &CpMap<f64>, states: Vec<Vec<C64>>) -> Result<Self> {
        let n = states.len();
        Self::new(map, states, vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn barycenter(&self) -> Hermitian<f64> {
        let d = self.outputs[0].dim();
        let mut acc = Matrix::zeros(d, d);
        for (p, w) in self.probs.iter().zip(&self.outputs) {
            if *p > 0.0 {
                acc = &acc + &w.matrix().scale(*p);
            }
        }
        Hermitian::new(acc).expect("mixture of Hermitian outputs")
    }

    /// `H(ρ̄) − Σ p_x H(ω_x)`.
    pub fn value(&self) -> f64 {
        let avg: f64 = self.probs.iter().zip(&self.entropies).map(|(p, h)| p * h).sum();
        entropy_of_spectrum(&self.barycenter().eigenvalues()) - avg
    }

    /// `D(ω_x‖ρ̄)` for every member, evaluated on the support of `ρ̄`.
    pub fn divergences(&self, log_bar: &Hermitian<f64>) -> Vec<f64> {
        self.outputs
            .iter()
            .zip(&self.entropies)
            .map(|(w, h)| -h - w.trace_with(log_bar))
            .collect()
    }

    /// One multiplicative update `p_x ∝ p_x 2^{D(ω_x‖ρ̄)}`.
    pub fn weight_step(&mut self) -> Result<()> {
        let log_bar = log2_on_support(&self.barycenter().eigh())?;
        let d = self.divergences(&log_bar);
        let top = d
            .iter()
            .zip(&self.probs)
            .filter(|(_, p)| **p > 0.0)
            .fold(f64::NEG_INFINITY, |a, (b, _)| a.max(*b));
        let mut total = 0.0;
        for (p, dx) in self.probs.iter_mut().zip(&d) {
            *p *= (dx - top).exp2();
            total += *p;
        }
        for p in &mut self.probs {
            *p /= total;
        }
        Ok(())
    }

    /// Backtracking step of every state along the Riemannian gradient of
    /// `I(X;B)`. Returns whether the value increased.
    pub fn state_step(&mut self, map: &CpMap<f64>, step: &mut f64) -> Result<bool> {
        let v0 = self.value();
        let log_bar = log2_on_support(&self.barycenter().eigh())?;
        let mut dirs = Vec::with_capacity(self.len());
        let mut norm2 = 0.0;
        for (psi, w) in self.states.iter().zip(&self.outputs) {
            let g = map.apply_adjoint(&log2_on_support(&w.eigh())?.sub(&log_bar))?;
            let t = tangent(g.matrix(), psi);
            norm2 += t.iter().map(|z| z.norm_sqr()).sum::<f64>();
            dirs.push(t);
        }
        if norm2 < 1e-26 {
            return Ok(false);
        }
        let mut t = *step;
        while t > 1e-12 {
            let moved: Option<Vec<Vec<C64>>> = self
                .states
                .iter()
                .zip(&dirs)
                .map(|(psi, dir)| normalized(psi.iter().zip(dir).map(|(a, b)| a + b * t).collect()))
                .collect();
            if let Some(states) = moved {
                let cand = PureEnsemble::new(map, states, self.probs.clone())?;
                if cand.value() > v0 {
                    *self = cand;
                    *step = (2.0 * t).min(16.0);
                    return Ok(true);
                }
            }
            t *= 0.5;
        }
        *step = t.max(1e-6);
        Ok(false)
    }

    pub fn push(&mut self, map: &CpMap<f64>, psi: Vec<C64>, weight: f64) -> Result<()> {
        let w = map.apply_pure(&psi)?;
        self.entropies.push(entropy_of_spectrum(&w.eigenvalues()));
        self.outputs.push(w);
        self.states.push(psi);
        for p in &mut self.probs {
            *p *= 1.0 - weight;
        }
        self.probs.push(weight);
        Ok(())
    }

    /// Drops members whose weight fell below `floor`, keeping at least `keep`.
    pub fn prune(&mut self, floor: f64, keep: usize) {
        if self.len() <= keep {
            return;
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.probs[b].total_cmp(&self.probs[a]));
        let retained: Vec<usize> = order
            .iter()
            .enumerate()
            .filter(|(rank, &i)| *rank < keep || self.probs[i] >= floor)
            .map(|(_, &i)| i)
            .collect();
        let mut idx = retained;
        idx.sort_unstable();
        self.states = idx.iter().map(|&i| self.states[i].clone()).collect();
        self.outputs = idx.iter().map(|&i| self.outputs[i].clone()).collect();
        self.entropies = idx.iter().map(|&i| self.entropies[i]).collect();
        let probs: Vec<f64> = idx.iter().map(|&i| self.probs[i]).collect();
        let total: f64 = probs.iter().sum();
        self.probs = probs.into_iter().map(|p| p / total).collect();
    }

    pub fn ensemble(&self) -> Result<Ensemble<f64>> {
        pure_ensemble(&self.probs, &self.states)
    }
}

/// Runs the alternating ascent from one starting ensemble.
pub(crate) fn alternating_ascent(
    map: &CpMap<f64>,
    start: PureEnsemble,
    max_iterations: usize,
) -> Result<(PureEnsemble, usize)> {
    let mut e = start;
    let mut step = 1.0;
    let mut last = e.value();
    let mut iterations = 0;
    for it in 0..max_iterations {
        iterations = it + 1;
        for _ in 0..WEIGHT_STEPS {
            e.weight_step()?;
        }
        let moved = e.state_step(map, &mut step)?;
        let v = e.value();
        if !moved && v - last < 1e-14 {
            break;
        }
        if (v - last).abs() < 1e-15 {
            break;
        }
        last = v;
    }
    Ok((e, iterations))
}

/// Starting ensembles: restart 0 uses the basis states plus random
/// vectors, the others are fully random; all have `d_in²` members.
pub(crate) fn restart_ensemble(map: &CpMap<f64>, restart: usize, seed: u64) -> Result<PureEnsemble> {
    let d = map.d_in();
    let m = d * d;
    let s = child_seed(seed, restart as u64);
    let states = if restart == 0 {
        start_vectors(d, m - d, s)
    } else {
        start_vectors(d, m, s).split_off(d)
    };
    PureEnsemble::uniform(map, states)
}

/// Best ensemble over the seeded restarts, plus `extra` caller-supplied
/// starting ensembles.
pub(crate) fn holevo_search(
    map: &CpMap<f64>,
    budget: &AscentBudget,
    extra: Vec<PureEnsemble>,
) -> Result<(PureEnsemble, usize)> {
    let restarts = budget.restarts.max(1);
    let mut starts = (0..restarts)
        .map(|r| restart_ensemble(map, r, budget.seed))
        .collect::<Result<Vec<_>>>()?;
    starts.extend(extra);
    let runs: Vec<(PureEnsemble, usize)> = starts
        .into_par_iter()
        .map(|s| alternating_ascent(map, s, budget.max_iterations))
        .collect::<Result<Vec<_>>>()?;
    let iterations = runs.iter().map(|(_, i)| i).sum();
    let (best, _) = runs
        .into_iter()
        .reduce(|a, b| if b.0.value() > a.0.value() { b } else { a })
        .expect("at least one restart");
    Ok((best, iterations))
}

/// Packages an ensemble with the gap `sup_ψ D(N(ψ)‖ρ̄) − value`, an upper
/// bound on `χ − value` because the Holevo information equals the
/// information radius.
pub(crate) fn finish(
    map: &CpMap<f64>,
    best: PureEnsemble,
    iterations: usize,
    budget: &AscentBudget,
) -> Result<CapacityResult> {
    let value = best.value();
    let mut starts = best.states.clone();
    starts.extend(start_vectors(
        map.d_in(),
        budget.restarts.max(1),
        child_seed(budget.seed, u64::MAX),
    ));
    let (sup, _) = max_output_divergence(map, &best.barycenter(), &starts, budget.max_iterations)?;
    Ok(CapacityResult {
        value,
        witness: Witness::Ensemble(best.ensemble()?),
        iterations,
        gap_estimate: (sup - value).max(0.0),
    })
}

/// Holevo information of `ch` over ensembles of at most `d_in²` pure states.
pub fn holevo_information(ch: &KrausChannel<f64>, budget: &AscentBudget) -> Result<CapacityResult> {
    let (best, iterations) = holevo_search(ch.as_map(), budget, Vec::new())?;
    finish(ch.as_map(), best, iterations, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::test_support::{h2, random_channel};
    use crate::channel::{bsc, depolarizing, identity, replacement};
    use crate::linalg::random::seeded_rng;
    use crate::state::DensityOperator;

    #[test]
    fn ensemble_examples() {
        let e = Ensemble::uniform(vec![DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)]).unwrap();
        assert!((holevo_of_ensemble(&e, &identity(2)).unwrap() - 1.0).abs() < 1e-12);
        let omega = DensityOperator::maximally_mixed(3);
        assert!(holevo_of_ensemble(&e, &replacement(&omega, 2).unwrap()).unwrap().abs() < 1e-12);
        let v = holevo_of_ensemble(&e, &bsc(0.1).unwrap()).unwrap();
        assert!((v - (1.0 - h2(0.1))).abs() < 1e-12);
    }

    #[test]
    fn ensemble_value_matches_entropy_form() {
        let mut rng = seeded_rng(80);
        let ch = random_channel(2, 3, 2, &mut rng);
        let start = restart_ensemble(ch.as_map(), 1, 5).unwrap();
        let e = start.ensemble().unwrap();
        assert!((holevo_of_ensemble(&e, &ch).unwrap() - start.value()).abs() < 1e-9);
    }

    #[test]
    fn closed_forms() {
        let b = AscentBudget::default();
        let id = holevo_information(&identity(2), &b).unwrap();
        assert!((id.value - 1.0).abs() < 1e-5, "{id:?}");
        for p in [0.05, 0.1, 0.25] {
            let r = holevo_information(&bsc(p).unwrap(), &b).unwrap();
            assert!((r.value - (1.0 - h2(p))).abs() < 1e-5, "bsc {p}: {}", r.value);
            assert!(r.gap_estimate < 1e-4);
        }
        for l in [0.2, 0.5, 0.9] {
            let r = holevo_information(&depolarizing(2, l).unwrap(), &b).unwrap();
            assert!(
                (r.value - (1.0 - h2((1.0 + l) / 2.0))).abs() < 1e-4,
                "dep {l}: {}",
                r.value
            );
        }
    }
}
