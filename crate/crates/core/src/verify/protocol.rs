//! Feedback-protocol suites: the success bound, the separability invariant
//! and the weak-converse chain.

use super::{Check, CheckBuilder, SuiteOptions};
use crate::capacity::{holevo_information, strong_converse_exponent, ExponentCurve, ExponentOptions};
use crate::channel::{dephasing, depolarizing, identity, replacement, KrausChannel};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::protocol::{
    random_protocol, simulate, verify_separability, verify_strong_converse_bound, verify_strong_converse_bound_with,
    weak_converse_chain, DecoderStrategy, FeedbackProtocol, ProtocolDims, IDENTITY_TOLERANCE,
};
use crate::scalar::cre;
use crate::state::{DensityOperator, Ensemble, PPT_TOLERANCE};

const REPLACEMENT_CASES: [(usize, usize); 4] = [(1, 2), (1, 4), (2, 2), (2, 4)];
const TIGHTNESS_TOLERANCE: f64 = 1e-6;

/// Depolarizing parameter of the entanglement-breaking sweep.
pub const SWEEP_LAMBDA: f64 = 0.25;
const SWEEP_ROUNDS: usize = 2;
const SWEEP_SEEDS: u64 = 20;
/// Target excess of the rate over `χ` in the sweep.
const SWEEP_EXCESS: f64 = 0.5;

const CHAIN_PROTOCOLS: u64 = 10;

const THEOREM_TAG: u64 = 8;
const SUPPLEMENT_TAG: u64 = 9;
const CHAIN_TAG: u64 = 10;

/// One sweep of random protocols over the depolarizing channel sharing a
/// single exponent curve.
struct Sweep {
    label: &'static str,
    strategy: DecoderStrategy,
    channel: KrausChannel<f64>,
    protocols: Vec<FeedbackProtocol>,
}

/// Main sweep: the smallest `L` with `log₂L/2 ≥ χ + 0.5`, decoded with the
/// best of PGM and the computational basis. Supplement: `L = 2` decoded by
/// Helstrom.
fn sweeps(opts: &SuiteOptions) -> Result<(f64, Vec<Sweep>)> {
    let ch = depolarizing(2, SWEEP_LAMBDA)?;
    let chi = holevo_information(&ch, &opts.budget_for(THEOREM_TAG, u64::MAX))?;
    let chi = chi.value + chi.gap_estimate;
    let n = SWEEP_ROUNDS as f64;
    let l_main = (n * (chi + SWEEP_EXCESS)).exp2().ceil() as usize;
    let build = |l: usize, tag: u64| -> Result<Vec<FeedbackProtocol>> {
        (0..SWEEP_SEEDS)
            .map(|s| random_protocol(&ch, SWEEP_ROUNDS, l, ProtocolDims::default(), opts.stream(tag, s)))
            .collect()
    };
    let main = Sweep {
        label: "pgm_or_basis",
        strategy: DecoderStrategy::Best,
        channel: ch.clone(),
        protocols: build(l_main.max(2), THEOREM_TAG)?,
    };
    let supplement = Sweep {
        label: "helstrom",
        strategy: DecoderStrategy::Helstrom,
        channel: ch.clone(),
        protocols: build(2, SUPPLEMENT_TAG)?,
    };
    Ok((chi, vec![main, supplement]))
}

fn curve_for(ch: &KrausChannel<f64>, rate: f64, opts: &SuiteOptions, tag: u64) -> Result<ExponentCurve> {
    let eo = ExponentOptions {
        budget: opts.budget_for(tag, u64::MAX - 1),
        ..ExponentOptions::default()
    };
    strong_converse_exponent(ch, rate, &eo)
}

/// Replacement channels meet `p_succ = 2^{−nE(R)} = 1/L`; random feedback
/// protocols over depolarizing `λ = 0.25` above capacity never beat the
/// bound.
pub fn theorem_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut tight = CheckBuilder::new("replacement_tightness");
    let rep = replacement(&DensityOperator::maximally_mixed(2), 2)?;
    let eo = ExponentOptions {
        budget: opts.budget_for(THEOREM_TAG, u64::MAX - 2),
        ..ExponentOptions::default()
    };
    for (k, (n, l)) in REPLACEMENT_CASES.into_iter().enumerate() {
        let p = random_protocol(&rep, n, l, ProtocolDims::default(), opts.stream(11, k as u64))?;
        let r = verify_strong_converse_bound(&p, &rep, DecoderStrategy::Best, &eo)?;
        let target = 1.0 / l as f64;
        let err = (r.p_succ - target).abs().max((r.bound - target).abs());
        tight.max("largest_error", err);
        tight.case(err <= TIGHTNESS_TOLERANCE && r.bound_holds, || {
            format!("n = {n}, L = {l}: p_succ = {:e}, bound = {:e}", r.p_succ, r.bound)
        });
    }

    let (chi, sweeps) = sweeps(opts)?;
    let mut checks = vec![tight.finish()];
    for (k, sw) in sweeps.iter().enumerate() {
        let mut c = CheckBuilder::new(&format!("depolarizing_bound_{}", sw.label));
        let rate = sw.protocols[0].rate();
        let curve = curve_for(&sw.channel, rate, opts, THEOREM_TAG + k as u64)?;
        c.set("chi", chi);
        c.set("rate", rate);
        c.set("exponent", curve.exponent);
        c.set("best_alpha", curve.best_alpha);
        for (s, p) in sw.protocols.iter().enumerate() {
            let r = verify_strong_converse_bound_with(p, &sw.channel, sw.strategy, &curve)?;
            c.push("margin", r.margin);
            c.push("p_succ", r.p_succ);
            c.min("smallest_margin", r.margin);
            c.set("bound", r.bound);
            c.case(r.bound_holds, || {
                format!("protocol {s}: p_succ = {:e} > bound {:e}", r.p_succ, r.bound)
            });
        }
        checks.push(c.finish());
    }
    Ok(checks)
}

/// `|m⟩ ↦ |m⟩_{A′_1}` with `A′_1 A_1` maximally entangled for `m = 0`, sent
/// over the identity channel.
fn entangled_control() -> Result<(FeedbackProtocol, KrausChannel<f64>)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut k0 = Matrix::zeros(4, 2);
    k0[(0, 0)] = cre(s);
    k0[(3, 0)] = cre(s);
    let mut k1 = Matrix::zeros(4, 2);
    k1[(1, 1)] = cre(1.0);
    let p = FeedbackProtocol {
        n_rounds: 1,
        message_count: 2,
        channel_input_dim: 2,
        channel_output_dim: 2,
        feedback_dims: vec![1],
        alice_memory_dims: vec![2, 2],
        bob_memory_dims: vec![1],
        initial_alice: vec![DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)],
        initial_bob: Ensemble::new(vec![1.0], vec![DensityOperator::basis(1, 0)])?,
        encoders: vec![KrausChannel::new(vec![k0, k1])?],
        decoders: vec![],
        final_povm: None,
        separable_inputs: false,
    };
    p.validate()?;
    Ok((p, identity(2)))
}

/// Every trajectory state of the depolarizing sweeps is PPT across the
/// Alice:Bob cut, and the entangled control is not.
pub fn separability_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let (_, sweeps) = sweeps(opts)?;
    let mut c = CheckBuilder::new("trajectories_ppt");
    for sw in &sweeps {
        for (s, p) in sw.protocols.iter().enumerate() {
            let r = verify_separability(&simulate(p, &sw.channel)?, PPT_TOLERANCE)?;
            c.min("smallest_eigenvalue", r.min_eigenvalue);
            c.case(r.all_ppt, || {
                format!(
                    "{} protocol {s}: partial transpose eigenvalue {:e}",
                    sw.label, r.min_eigenvalue
                )
            });
        }
    }

    let mut control = CheckBuilder::new("entangled_control_detected");
    let (p, ch) = entangled_control()?;
    let r = verify_separability(&simulate(&p, &ch)?, PPT_TOLERANCE)?;
    control.set("smallest_eigenvalue", r.min_eigenvalue);
    control.case(!r.all_ppt, || "entangled encoder passed the PPT test".to_string());
    Ok(vec![c.finish(), control.finish()])
}

/// Per-round peeling, data processing and the cumulative bound
/// `I(M;B_nB′_{n−1}) ≤ nχ` on entanglement-breaking protocols.
pub fn chain_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let channels = [depolarizing(2, SWEEP_LAMBDA)?, dephasing(0.5)?];
    let chis = channels
        .iter()
        .enumerate()
        .map(|(k, ch)| {
            let r = holevo_information(ch, &opts.budget_for(CHAIN_TAG, u64::MAX - k as u64))?;
            Ok(r.value + r.gap_estimate)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut peel = CheckBuilder::new("per_round_peeling");
    let mut processing = CheckBuilder::new("decoder_processing");
    let mut total = CheckBuilder::new("cumulative_bound");
    let mut ids = CheckBuilder::new("chain_identities");
    for s in 0..CHAIN_PROTOCOLS {
        let k = (s % 2) as usize;
        let (n, l) = (1 + (s % 3) as usize, 2 + (s % 3) as usize);
        let ch = &channels[k];
        let p = random_protocol(ch, n, l, ProtocolDims::default(), opts.stream(CHAIN_TAG, s))?;
        let r = weak_converse_chain(&simulate(&p, ch)?, chis[k])?;
        for round in &r.rounds {
            peel.min("smallest_slack", round.mi_memory + r.chi - round.mi_output);
            peel.case(round.peeling_ok, || {
                format!(
                    "protocol {s}, round {}: I(M;BB′) = {:e} > I(M;B′) + χ = {:e}",
                    round.round,
                    round.mi_output,
                    round.mi_memory + r.chi
                )
            });
            if round.mi_next_memory.is_some() {
                processing.case(round.processing_ok, || {
                    format!("protocol {s}, round {}: decoder increased information", round.round)
                });
            }
            ids.max("largest_residual", round.identity_residual);
            ids.case(round.identity_residual <= IDENTITY_TOLERANCE, || {
                format!(
                    "protocol {s}, round {}: residual {:e}",
                    round.round, round.identity_residual
                )
            });
        }
        total.min("smallest_slack", n as f64 * r.chi - r.cumulative);
        total.case(r.cumulative_ok, || {
            format!("protocol {s}: I = {:e} > nχ = {:e}", r.cumulative, n as f64 * r.chi)
        });
    }
    Ok(vec![peel.finish(), processing.finish(), total.finish(), ids.finish()])
}
