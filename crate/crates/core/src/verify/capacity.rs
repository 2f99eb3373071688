//! Capacity suites: radius equality, α → 1 limits, closed forms and
//! two-copy additivity.

use super::{Check, CheckBuilder, SuiteOptions};
use crate::capacity::{
    additivity_check, alpha_holevo, alpha_holevo_of_ensemble, holevo_information, information_radius, Witness,
};
use crate::channel::{bsc, depolarizing, ppt_boundary, random_channel, KrausChannel};
use crate::divergence::AscentBudget;
use crate::error::Result;
use crate::linalg::random::seeded_rng;
use crate::state::Ensemble;

const RADIUS_CHANNELS: u64 = 20;
const RADIUS_ALPHAS: [f64; 3] = [1.5, 2.0, 3.0];
const ROUTE_SLACK: f64 = 1e-4;
const BEST_ROUTE_TOLERANCE: f64 = 5e-3;

const LIMIT_CHANNELS: u64 = 10;
const LIMIT_ALPHA: f64 = 1.001;
const LIMIT_TOLERANCE: f64 = 5e-3;
const MINIMAX_TOLERANCE: f64 = 2e-4;

const BSC_PARAMS: [f64; 3] = [0.05, 0.1, 0.25];
const BSC_TOLERANCE: f64 = 1e-5;
const DEPOLARIZING_PARAMS: [f64; 3] = [0.2, 0.5, 0.9];
const DEPOLARIZING_TOLERANCE: f64 = 1e-4;
const EB_BOUNDARY_TOLERANCE: f64 = 1e-9;
const EB_BOUNDARY_WIDTH: f64 = 1e-12;

const ADDITIVITY_PARAMS: [f64; 2] = [0.2, 0.3];

fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

fn qubit_channel(opts: &SuiteOptions, tag: u64, s: u64) -> Result<KrausChannel<f64>> {
    random_channel(2, 2, 2, &mut seeded_rng(opts.stream(tag, s)))
}

fn best_ensemble(ch: &KrausChannel<f64>, budget: &AscentBudget) -> Result<(f64, f64, Ensemble<f64>)> {
    let r = holevo_information(ch, budget)?;
    match r.witness {
        Witness::Ensemble(e) => Ok((r.value, r.gap_estimate, e)),
        Witness::State(_) => unreachable!("holevo_information returns an ensemble"),
    }
}

/// `χ̃_α = K̃_α` on random qubit channels: the ensemble route never exceeds
/// the radius and the best ensemble met comes within `5e−3` of it.
pub fn radius_equality_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut lower = CheckBuilder::new("ensemble_below_radius");
    let mut close = CheckBuilder::new("best_ensemble_meets_radius");
    for s in 0..RADIUS_CHANNELS {
        let ch = qubit_channel(opts, 3, s)?;
        let budget = opts.budget_for(3, s);
        let (_, _, ens) = best_ensemble(&ch, &budget)?;
        for alpha in RADIUS_ALPHAS {
            let r = alpha_holevo(&ch, alpha, &budget, Some(&ens))?;
            let v = r.value();
            let top = r.ensemble_lower_bound.max(r.best_ensemble_bound);
            lower.max("worst_excess", top - v);
            lower.case(top <= v + ROUTE_SLACK, || {
                format!("channel {s}, α = {alpha}: ensemble route {top:e} above radius {v:e}")
            });
            close.max("largest_gap", v - top);
            close.case(top >= v - BEST_ROUTE_TOLERANCE, || {
                format!("channel {s}, α = {alpha}: best ensemble {top:e} below radius {v:e}")
            });
        }
    }
    Ok(vec![lower.finish(), close.finish()])
}

/// `χ = K` and the α → 1 limits of both routes at `α = 1.001`.
pub fn limits_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut minimax = CheckBuilder::new("holevo_equals_radius");
    let mut chi_limit = CheckBuilder::new("alpha_holevo_limit");
    let mut k_limit = CheckBuilder::new("alpha_radius_limit");
    for s in 0..LIMIT_CHANNELS {
        let ch = qubit_channel(opts, 4, s)?;
        let budget = opts.budget_for(4, s);
        let (chi, _, ens) = best_ensemble(&ch, &budget)?;
        let k = information_radius(&ch, &budget)?.value;
        minimax.max("largest_difference", (chi - k).abs());
        minimax.case((chi - k).abs() <= MINIMAX_TOLERANCE, || {
            format!("channel {s}: χ = {chi:e}, K = {k:e}")
        });

        let chi_a = alpha_holevo_of_ensemble(&ens, &ch, LIMIT_ALPHA)?;
        chi_limit.max("largest_difference", (chi_a - chi).abs());
        chi_limit.case((chi_a - chi).abs() <= LIMIT_TOLERANCE, || {
            format!("channel {s}: χ̃ = {chi_a:e}, χ = {chi:e}")
        });

        let k_a = alpha_holevo(&ch, LIMIT_ALPHA, &budget, Some(&ens))?.value();
        k_limit.max("largest_difference", (k_a - k).abs());
        k_limit.case((k_a - k).abs() <= LIMIT_TOLERANCE, || {
            format!("channel {s}: K̃ = {k_a:e}, K = {k:e}")
        });
    }
    Ok(vec![minimax.finish(), chi_limit.finish(), k_limit.finish()])
}

/// Binary symmetric and qubit depolarizing capacities, and the
/// entanglement-breaking threshold `λ = 1/3`.
pub fn closed_forms_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut c_bsc = CheckBuilder::new("bsc_capacity");
    for (i, p) in BSC_PARAMS.into_iter().enumerate() {
        let v = holevo_information(&bsc(p)?, &opts.budget_for(5, i as u64))?.value;
        let err = (v - (1.0 - h2(p))).abs();
        c_bsc.max("largest_error", err);
        c_bsc.case(err <= BSC_TOLERANCE, || format!("p = {p}: χ = {v:e}, error {err:e}"));
    }

    let mut c_dep = CheckBuilder::new("depolarizing_capacity");
    for (i, l) in DEPOLARIZING_PARAMS.into_iter().enumerate() {
        let v = holevo_information(&depolarizing(2, l)?, &opts.budget_for(6, i as u64))?.value;
        let err = (v - (1.0 - h2((1.0 + l) / 2.0))).abs();
        c_dep.max("largest_error", err);
        c_dep.case(err <= DEPOLARIZING_TOLERANCE, || {
            format!("λ = {l}: χ = {v:e}, error {err:e}")
        });
    }

    let mut c_eb = CheckBuilder::new("depolarizing_eb_boundary");
    match ppt_boundary(|x| depolarizing(2, x), 0.0, 1.0, 0.0, EB_BOUNDARY_WIDTH) {
        Ok(b) => {
            let err = (b - 1.0 / 3.0).abs();
            c_eb.set("boundary", b);
            c_eb.set("error", err);
            c_eb.case(err <= EB_BOUNDARY_TOLERANCE, || format!("boundary at {b:e}"));
        }
        Err(e) => c_eb.error("bisection", &e),
    }
    Ok(vec![c_bsc.finish(), c_dep.finish(), c_eb.finish()])
}

/// `2χ ≤ χ_lb(N⊗N) + 1e−4` and `χ_lb − 2χ ≤ 5e−3` on entanglement-breaking
/// depolarizing channels.
pub fn additivity_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut sup = CheckBuilder::new("superadditive");
    let mut gap = CheckBuilder::new("eb_additivity_gap");
    for (i, l) in ADDITIVITY_PARAMS.into_iter().enumerate() {
        let r = additivity_check(&depolarizing(2, l)?, &opts.budget_for(7, i as u64))?;
        sup.min("smallest_slack", r.double_lower - 2.0 * r.single);
        sup.case(r.superadditive, || {
            format!("λ = {l}: 2χ = {:e} > χ_lb = {:e}", 2.0 * r.single, r.double_lower)
        });
        gap.max("largest_excess", r.excess);
        gap.case(r.eb_excess_ok == Some(true), || {
            format!("λ = {l}: excess {:e}", r.excess)
        });
    }
    Ok(vec![sup.finish(), gap.finish()])
}
