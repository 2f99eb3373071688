//! Information radius `K(N) = inf_σ sup_ρ D(N(ρ)‖σ)`.
//!
//! Cutting-plane iteration: the current collection of inputs is reweighted
//! to its optimal barycenter σ, the worst-case input against σ is added to
//! the collection, and the loop stops once the best upper value
//! `sup_ψ D(N(ψ)‖σ)` meets the collection's Holevo value.

use super::holevo::{alternating_ascent, restart_ensemble};
use super::{max_output_divergence, start_vectors, to_density, CapacityResult, Witness};
use crate::channel::KrausChannel;
use crate::divergence::AscentBudget;
use crate::error::Result;
use crate::linalg::random::child_seed;

const ROUNDS: usize = 60;
const TARGET_GAP: f64 = 1e-9;
const NEW_WEIGHT: f64 = 0.1;
const ROUND_ASCENT: usize = 40;

pub fn information_radius(ch: &KrausChannel<f64>, budget: &AscentBudget) -> Result<CapacityResult> {
    let map = ch.as_map();
    let d = map.d_in();
    let mut coll = restart_ensemble(map, 0, budget.seed)?;
    let mut best_upper = f64::INFINITY;
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_sigma = coll.barycenter();
    let mut iterations = 0;
    for round in 0..ROUNDS {
        iterations = round + 1;
        let (next, _) = alternating_ascent(map, coll, ROUND_ASCENT)?;
        coll = next;
        let sigma = coll.barycenter();
        best_lower = best_lower.max(coll.value());
        let mut starts = coll.states.clone();
        starts.extend(start_vectors(d, 2, child_seed(budget.seed, 1000 + round as u64)).split_off(d));
        let (upper, worst) = max_output_divergence(map, &sigma, &starts, budget.max_iterations)?;
        if upper < best_upper {
            best_upper = upper;
            best_sigma = sigma;
        }
        if best_upper - best_lower < TARGET_GAP {
            break;
        }
        coll.push(map, worst, NEW_WEIGHT)?;
        coll.prune(1e-12, d);
    }
    let mut starts = start_vectors(d, budget.restarts.max(1), child_seed(budget.seed, u64::MAX));
    starts.extend(coll.states.iter().cloned());
    let (value, _) = max_output_divergence(map, &best_sigma, &starts, budget.max_iterations)?;
    Ok(CapacityResult {
        value,
        witness: Witness::State(to_density(&best_sigma)),
        iterations,
        gap_estimate: (value - best_lower).max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::holevo_information;
    use crate::capacity::test_support::random_channel;
    use crate::channel::{identity, replacement};
    use crate::linalg::random::{random_density, seeded_rng};
    use crate::state::DensityOperator;

    #[test]
    fn replacement_has_zero_radius_at_omega() {
        let mut rng = seeded_rng(90);
        let omega = DensityOperator::from_hermitian(random_density(2, 2, &mut rng), vec![2]).unwrap();
        let r = information_radius(&replacement(&omega, 3).unwrap(), &AscentBudget::default()).unwrap();
        assert!(r.value.abs() < 1e-9);
        let Witness::State(s) = r.witness else { panic!() };
        assert!(s.matrix().approx_eq(omega.matrix(), 1e-9));
    }

    #[test]
    fn identity_radius_is_one_at_maximally_mixed() {
        let r = information_radius(&identity(2), &AscentBudget::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{r:?}");
        let Witness::State(s) = r.witness else { panic!() };
        assert!(s
            .matrix()
            .approx_eq(DensityOperator::<f64>::maximally_mixed(2).matrix(), 1e-4));
    }

    #[test]
    fn radius_equals_holevo_information() {
        let mut rng = seeded_rng(91);
        let b = AscentBudget::default();
        for _ in 0..3 {
            let ch = random_channel(2, 2, 2, &mut rng);
            let k = information_radius(&ch, &b).unwrap();
            let chi = holevo_information(&ch, &b).unwrap();
            assert!((k.value - chi.value).abs() < 2e-4, "{} {}", k.value, chi.value);
            assert!(k.gap_estimate < 1e-6);
        }
    }
}
