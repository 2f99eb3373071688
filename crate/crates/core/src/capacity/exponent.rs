//! Strong-converse exponent `E(R) = sup_{α>1} ((α−1)/α)(R − χ̃_α(N))`.
//!
//! The supremum is sampled on a grid of orders, extended geometrically while
//! the best term sits at the largest order, and refined by golden-section
//! search in `t = (α−1)/α` around the best grid point.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::renyi::radius_search;
use super::to_density;
use crate::channel::KrausChannel;
use crate::divergence::AscentBudget;
use crate::error::{Error, Result};
use crate::linalg::random::child_seed;
use crate::state::DensityOperator;

/// Largest order reached by the geometric extension.
pub const MAX_ALPHA: f64 = 1e8;
const EXTENSION_FACTOR: f64 = 4.0;

/// `{1 + 2^{−k} : k = 0..10} ∪ {2, 3, 4, 6, 8, 12, 16, 24, 32}`, sorted.
pub fn default_alpha_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=10).map(|k| 1.0 + (-(k as f64)).exp2()).collect();
    g.extend([2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0]);
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentOptions {
    pub alphas: Vec<f64>,
    /// Golden-section evaluations around the best grid point.
    pub refine_iterations: usize,
    /// Keep multiplying the largest order by 4 (up to `MAX_ALPHA`) while it
    /// holds the best term.
    pub extend: bool,
    pub budget: AscentBudget,
}

impl Default for ExponentOptions {
    fn default() -> Self {
        Self {
            alphas: default_alpha_grid(),
            refine_iterations: 12,
            extend: true,
            budget: AscentBudget::default(),
        }
    }
}

/// Sampled exponent curve. `exponent` is a bound modulo the optimizer gap:
/// `chi_alpha` are upper values of the radius, so each term is conservative up
/// to `t·gap`, and `gap_estimate` is the largest such correction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentCurve {
    pub rate: f64,
    pub alphas: Vec<f64>,
    pub chi_alpha: Vec<f64>,
    pub terms: Vec<f64>,
    pub exponent: f64,
    pub best_alpha: f64,
    pub gap_estimate: f64,
    /// Optimal output state σ for every order.
    pub witnesses: Vec<DensityOperator<f64>>,
}

impl ExponentCurve {
    /// `alpha,chi_alpha,term` rows with 15 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,chi_alpha,term\n");
        for ((a, c), t) in self.alphas.iter().zip(&self.chi_alpha).zip(&self.terms) {
            let _ = writeln!(out, "{a:.14e},{c:.14e},{t:.14e}");
        }
        out
    }

    /// Largest decrease of `chi_alpha` along increasing orders.
    pub fn monotonicity_defect(&self) -> f64 {
        self.chi_alpha.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
    }
}

struct Sample {
    alpha: f64,
    chi: f64,
    gap: f64,
    sigma: DensityOperator<f64>,
}

fn t_of(alpha: f64) -> f64 {
    (alpha - 1.0) / alpha
}

fn alpha_of(t: f64) -> f64 {
    1.0 / (1.0 - t)
}

fn evaluate(ch: &KrausChannel<f64>, alpha: f64, budget: &AscentBudget) -> Result<Sample> {
    let b = AscentBudget {
        seed: child_seed(budget.seed, alpha.to_bits()),
        ..*budget
    };
    let s = radius_search(ch.as_map(), alpha, &b)?;
    Ok(Sample {
        alpha,
        chi: s.upper,
        gap: (s.upper - s.lower).max(0.0),
        sigma: to_density(&s.sigma),
    })
}

fn term(rate: f64, s: &Sample) -> f64 {
    t_of(s.alpha) * (rate - s.chi)
}

fn best_index(rate: f64, samples: &[Sample]) -> usize {
    let mut best = 0;
    for (i, s) in samples.iter().enumerate() {
        if term(rate, s) > term(rate, &samples[best]) {
            best = i;
        }
    }
    best
}

pub fn strong_converse_exponent(ch: &KrausChannel<f64>, rate: f64, opts: &ExponentOptions) -> Result<ExponentCurve> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rate must be a finite non-negative number, got {rate}"
        )));
    }
    let mut grid: Vec<f64> = opts.alphas.clone();
    if grid.is_empty() || grid.iter().any(|a| !(*a > 1.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter(
            "α grid must be non-empty with every order > 1".into(),
        ));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut samples: Vec<Sample> = grid
        .par_iter()
        .map(|&a| evaluate(ch, a, &opts.budget))
        .collect::<Result<Vec<_>>>()?;

    if opts.extend {
        while best_index(rate, &samples) == samples.len() - 1 {
            let last = samples[samples.len() - 1].alpha;
            if last >= MAX_ALPHA {
                break;
            }
            let next = (last * EXTENSION_FACTOR).min(MAX_ALPHA);
            samples.push(evaluate(ch, next, &opts.budget)?);
        }
    }

    if opts.refine_iterations > 0 && samples.len() > 1 {
        let i = best_index(rate, &samples);
        let lo = t_of(samples[i.saturating_sub(1)].alpha);
        let hi = t_of(samples[(i + 1).min(samples.len() - 1)].alpha);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - golden * (b - a);
        let mut x2 = a + golden * (b - a);
        let mut f1 = None;
        let mut f2 = None;
        let mut used = 0;
        while used < opts.refine_iterations {
            if f1.is_none() {
                let s = evaluate(ch, alpha_of(x1), &opts.budget)?;
                f1 = Some(term(rate, &s));
                samples.push(s);
                used += 1;
                continue;
            }
            if f2.is_none() {
                let s = evaluate(ch, alpha_of(x2), &opts.budget)?;
                f2 = Some(term(rate, &s));
                samples.push(s);
                used += 1;
                continue;
            }
            if f1 >= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - golden * (b - a);
                f1 = None;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + golden * (b - a);
                f2 = None;
            }
        }
    }

    samples.sort_by(|x, y| x.alpha.total_cmp(&y.alpha));
    samples.dedup_by(|x, y| x.alpha == y.alpha);
    let best = best_index(rate, &samples);
    let terms: Vec<f64> = samples.iter().map(|s| term(rate, s)).collect();
    Ok(ExponentCurve {
        rate,
        exponent: terms[best],
        best_alpha: samples[best].alpha,
        gap_estimate: samples.iter().map(|s| t_of(s.alpha) * s.gap).fold(0.0, f64::max),
        alphas: samples.iter().map(|s| s.alpha).collect(),
        chi_alpha: samples.iter().map(|s| s.chi).collect(),
        terms,
        witnesses: samples.into_iter().map(|s| s.sigma).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::holevo_information;
    use crate::channel::{classical_channel, depolarizing, replacement};

    #[test]
    fn default_grid_shape() {
        let g = default_alpha_grid();
        assert_eq!(g.len(), 19);
        assert_eq!(g[0], 1.0 + 2f64.powi(-10));
        assert_eq!(*g.last().unwrap(), 32.0);
    }

    #[test]
    fn noiseless_bit_exponent_approaches_one() {
        let ch = classical_channel(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let grid_only = ExponentOptions {
            refine_iterations: 0,
            extend: false,
            ..Default::default()
        };
        let c = strong_converse_exponent(&ch, 2.0, &grid_only).unwrap();
        assert!(c.exponent >= 0.96 && c.exponent <= 1.0, "{}", c.exponent);
        let c = strong_converse_exponent(&ch, 2.0, &ExponentOptions::default()).unwrap();
        assert!(c.exponent > 1.0 - 1e-6, "{}", c.exponent);
        assert!(c.monotonicity_defect() < 1e-4);
        assert!(c.to_csv().starts_with("alpha,chi_alpha,term\n"));
    }

    #[test]
    fn zero_rate_is_trivial() {
        let ch = depolarizing(2, 0.5).unwrap();
        let opts = ExponentOptions {
            alphas: vec![1.5, 2.0, 4.0],
            refine_iterations: 2,
            ..Default::default()
        };
        assert!(strong_converse_exponent(&ch, 0.0, &opts).unwrap().exponent <= 0.0);
    }

    #[test]
    fn replacement_exponent_is_rate() {
        let omega = DensityOperator::maximally_mixed(2);
        let ch = replacement(&omega, 2).unwrap();
        let c = strong_converse_exponent(&ch, 1.0, &ExponentOptions::default()).unwrap();
        assert!((c.exponent - 1.0).abs() < 1e-6, "{}", c.exponent);
    }

    #[test]
    fn positive_above_capacity() {
        let ch = depolarizing(2, 0.25).unwrap();
        let chi = holevo_information(&ch, &AscentBudget::default()).unwrap().value;
        let opts = ExponentOptions {
            alphas: vec![1.01, 1.1, 1.5, 2.0, 4.0],
            refine_iterations: 3,
            ..Default::default()
        };
        let c = strong_converse_exponent(&ch, chi + 0.1, &opts).unwrap();
        assert!(c.exponent > 0.0);
    }
}
