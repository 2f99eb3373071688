//! Two-copy additivity check `χ(N⊗N) = 2χ(N)`.

use serde::Serialize;

use super::holevo::{finish, holevo_search, PureEnsemble};
use super::C64;
use crate::channel::{tensor_channels, EbVerdict, KrausChannel};
use crate::divergence::AscentBudget;
use crate::error::{Error, Result};
use crate::state::PPT_TOLERANCE;

/// Slack on `2χ ≤ χ_lb(N⊗N)`.
pub const SUPERADDITIVE_SLACK: f64 = 1e-4;
/// Largest excess `χ_lb − 2χ` tolerated on entanglement-breaking channels.
pub const EB_EXCESS_TOLERANCE: f64 = 5e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub single: f64,
    pub single_gap: f64,
    /// Lower bound on `χ(N⊗N)` from the two-copy ensemble search.
    pub double_lower: f64,
    pub verdict: EbVerdict,
    /// `2χ ≤ χ_lb + 1e−4`; a failure points at an optimizer bug.
    pub superadditive: bool,
    /// `χ_lb − 2χ`.
    pub excess: f64,
    /// `excess ≤ 5e−3`, checked for entanglement-breaking channels only.
    pub eb_excess_ok: Option<bool>,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        self.superadditive && self.eb_excess_ok != Some(false)
    }
}

fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Compares `2χ(N)` with a two-copy search seeded with the product of the
/// best single-copy ensemble. Requires `d_in ≤ 2`.
pub fn additivity_check(ch: &KrausChannel<f64>, budget: &AscentBudget) -> Result<AdditivityReport> {
    if ch.d_in() > 2 {
        return Err(Error::InvalidParameter(format!(
            "additivity check supports input dimension ≤ 2, got {}",
            ch.d_in()
        )));
    }
    let (best, iterations) = holevo_search(ch.as_map(), budget, Vec::new())?;
    let (states, probs) = (best.states.clone(), best.probs.clone());
    let single = finish(ch.as_map(), best, iterations, budget)?;

    let pair = tensor_channels(ch, ch);
    let mut prod_states = Vec::new();
    let mut prod_probs = Vec::new();
    for (a, pa) in states.iter().zip(&probs) {
        for (b, pb) in states.iter().zip(&probs) {
            if pa * pb > 0.0 {
                prod_states.push(kron_vec(a, b));
                prod_probs.push(pa * pb);
            }
        }
    }
    let seed = PureEnsemble::new(pair.as_map(), prod_states, prod_probs)?;
    let (double, _) = holevo_search(pair.as_map(), budget, vec![seed])?;
    let double_lower = double.value();

    let verdict = ch.entanglement_breaking(PPT_TOLERANCE).verdict;
    let excess = double_lower - 2.0 * single.value;
    Ok(AdditivityReport {
        single: single.value,
        single_gap: single.gap_estimate,
        double_lower,
        verdict,
        superadditive: 2.0 * single.value <= double_lower + SUPERADDITIVE_SLACK,
        excess,
        eb_excess_ok: (verdict == EbVerdict::EntanglementBreaking).then_some(excess <= EB_EXCESS_TOLERANCE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{identity, replacement};
    use crate::state::DensityOperator;

    fn quick() -> AscentBudget {
        AscentBudget {
            restarts: 4,
            max_iterations: 300,
            seed: 3,
        }
    }

    #[test]
    fn replacement_is_zero_on_both_sides() {
        let ch = replacement(&DensityOperator::maximally_mixed(2), 2).unwrap();
        let r = additivity_check(&ch, &quick()).unwrap();
        assert!(r.single.abs() < 1e-9 && r.double_lower.abs() < 1e-9 && r.passed());
    }

    #[test]
    fn identity_reaches_two() {
        let r = additivity_check(&identity(2), &quick()).unwrap();
        assert!(r.double_lower >= 2.0 - 1e-3 && r.superadditive);
        assert_eq!(r.eb_excess_ok, None);
    }

    #[test]
    fn rejects_large_inputs() {
        assert!(additivity_check(&identity(3), &quick()).is_err());
    }
}
