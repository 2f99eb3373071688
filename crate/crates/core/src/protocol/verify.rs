//! Checks run on simulated protocols: the strong-converse bound on the
//! success probability, PPT across the Alice:Bob cut, and the
//! mutual-information chain behind the weak converse.

use std::fmt::Write as _;

use serde::Serialize;

use super::decoders::{basis_decoder, helstrom_decoder, pgm_decoder, DecoderStrategy};
use super::{simulate, success_from_states, FeedbackProtocol, Stage, Trajectory};
use crate::capacity::{holevo_information, strong_converse_exponent, ExponentCurve, ExponentOptions};
use crate::channel::{EbVerdict, KrausChannel};
use crate::divergence::{conditional_mutual_information, mutual_information, von_neumann_entropy, AscentBudget};
use crate::error::{Error, Result};
use crate::state::{cq_state, is_ppt, BipartiteCut, DensityOperator, Ensemble, PPT_TOLERANCE};

/// Slack on `p_succ ≤ 2^{−nE(R)}`.
pub const BOUND_SLACK: f64 = 1e-9;
/// Slack on the mutual-information inequalities.
pub const CHAIN_SLACK: f64 = 1e-6;
/// Tolerance on the chain-rule identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecoderValue {
    pub decoder: String,
    pub p_succ: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparabilityEntry {
    pub round: usize,
    pub stage: Stage,
    pub message: usize,
    pub min_eigenvalue: f64,
    pub ppt: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparabilityReport {
    pub entries: Vec<SeparabilityEntry>,
    pub all_ppt: bool,
    /// Smallest partial-transpose eigenvalue over all entries.
    pub min_eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub n_rounds: usize,
    pub message_count: usize,
    pub rate: f64,
    pub exponent: f64,
    pub best_alpha: f64,
    /// `2^{−n·E(R)}`.
    pub bound: f64,
    pub p_succ: f64,
    /// Decoder attaining `p_succ`.
    pub decoder: String,
    pub decoders: Vec<DecoderValue>,
    /// `bound − p_succ`.
    pub margin: f64,
    pub bound_holds: bool,
    pub separability: SeparabilityReport,
    /// `I(M;B_iB′_{i−1})` for every round.
    pub mi_chain: Vec<f64>,
    pub passed: bool,
}

impl SimulationReport {
    /// Flat `round,quantity,value` rows; round 0 carries run-level values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("round,quantity,value\n");
        let mut row = |round: usize, q: &str, v: f64| {
            let _ = writeln!(out, "{round},{q},{v:.14e}");
        };
        row(0, "rate", self.rate);
        row(0, "exponent", self.exponent);
        row(0, "bound", self.bound);
        row(0, "p_succ", self.p_succ);
        row(0, "margin", self.margin);
        for d in &self.decoders {
            row(0, &format!("p_succ_{}", d.decoder), d.p_succ);
        }
        for r in 0..=self.n_rounds {
            let min = self
                .separability
                .entries
                .iter()
                .filter(|e| e.round == r)
                .map(|e| e.min_eigenvalue)
                .fold(f64::INFINITY, f64::min);
            if min.is_finite() {
                row(r, "ppt_min_eigenvalue", min);
            }
        }
        for (i, mi) in self.mi_chain.iter().enumerate() {
            row(i + 1, "mi_output", *mi);
        }
        out
    }
}

/// PPT test of every snapshot and message across the Alice:Bob cut.
pub fn verify_separability(traj: &Trajectory, tol: f64) -> Result<SeparabilityReport> {
    let mut entries = Vec::new();
    for st in &traj.stages {
        let (a, b) = st.cut_dims();
        for (m, s) in st.states.iter().enumerate() {
            let r = is_ppt(s, BipartiteCut::new(a, b), tol)?;
            entries.push(SeparabilityEntry {
                round: st.round,
                stage: st.stage,
                message: m,
                min_eigenvalue: r.min_eigenvalue,
                ppt: r.ppt,
            });
        }
    }
    Ok(SeparabilityReport {
        all_ppt: entries.iter().all(|e| e.ppt),
        min_eigenvalue: entries.iter().map(|e| e.min_eigenvalue).fold(f64::INFINITY, f64::min),
        entries,
    })
}

fn holevo_uniform(states: &[DensityOperator<f64>]) -> Result<f64> {
    let ens = Ensemble::uniform(states.to_vec())?;
    let avg = crate::state::mix_ensemble(&ens);
    let mean: f64 = states.iter().map(von_neumann_entropy).sum::<f64>() / states.len() as f64;
    Ok(von_neumann_entropy(&avg) - mean)
}

/// Evaluates the decoders allowed by `strategy` on Bob's final states.
pub(crate) fn decode(p: &FeedbackProtocol, traj: &Trajectory, strategy: DecoderStrategy) -> Result<Vec<DecoderValue>> {
    let bob = traj.final_state().bob_states()?;
    let mut chosen = Vec::new();
    let all = strategy == DecoderStrategy::Best;
    if all || strategy == DecoderStrategy::Pgm {
        chosen.push(DecoderStrategy::Pgm);
    }
    if (all && bob.len() == 2) || strategy == DecoderStrategy::Helstrom {
        chosen.push(DecoderStrategy::Helstrom);
    }
    if all || strategy == DecoderStrategy::Basis {
        chosen.push(DecoderStrategy::Basis);
    }
    if (all && p.final_povm.is_some()) || strategy == DecoderStrategy::Given {
        chosen.push(DecoderStrategy::Given);
    }
    chosen
        .into_iter()
        .map(|s| {
            let povm = match s {
                DecoderStrategy::Pgm => pgm_decoder(&bob)?,
                DecoderStrategy::Helstrom => helstrom_decoder(&bob)?,
                DecoderStrategy::Basis => basis_decoder(&bob)?,
                _ => p
                    .final_povm
                    .clone()
                    .ok_or_else(|| Error::InvalidParameter("protocol has no final POVM".into()))?,
            };
            Ok(DecoderValue {
                decoder: s.name().to_string(),
                p_succ: success_from_states(&bob, &povm)?,
            })
        })
        .collect()
}

/// Computes `E(log₂L/n)` and checks the bound; see
/// [`verify_strong_converse_bound_with`].
pub fn verify_strong_converse_bound(
    p: &FeedbackProtocol,
    ch: &KrausChannel<f64>,
    strategy: DecoderStrategy,
    opts: &ExponentOptions,
) -> Result<SimulationReport> {
    check_hypothesis(p, ch)?;
    let curve = strong_converse_exponent(ch, p.rate(), opts)?;
    verify_strong_converse_bound_with(p, ch, strategy, &curve)
}

fn check_hypothesis(p: &FeedbackProtocol, ch: &KrausChannel<f64>) -> Result<()> {
    if p.separable_inputs || ch.entanglement_breaking(PPT_TOLERANCE).verdict == EbVerdict::EntanglementBreaking {
        Ok(())
    } else {
        Err(Error::NotEntanglementBreaking)
    }
}

/// Simulates `p` over `ch` and checks `p_succ ≤ 2^{−n·E(R)} + 1e−9` for a
/// precomputed exponent curve at the protocol's rate. The curve's χ̃_α are
/// upper values, so a loose curve can only weaken the bound.
pub fn verify_strong_converse_bound_with(
    p: &FeedbackProtocol,
    ch: &KrausChannel<f64>,
    strategy: DecoderStrategy,
    curve: &ExponentCurve,
) -> Result<SimulationReport> {
    check_hypothesis(p, ch)?;
    let rate = p.rate();
    if (curve.rate - rate).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "exponent curve at rate {} used for a protocol of rate {rate}",
            curve.rate
        )));
    }
    let traj = simulate(p, ch)?;
    let decoders = decode(p, &traj, strategy)?;
    let best = decoders
        .iter()
        .fold(&decoders[0], |a, b| if b.p_succ > a.p_succ { b } else { a });
    let bound = (-(p.n_rounds as f64) * curve.exponent).exp2();
    let separability = verify_separability(&traj, PPT_TOLERANCE)?;
    let mi_chain = (1..=p.n_rounds)
        .map(|r| {
            let st = traj.transmitted(r).expect("every round is transmitted");
            holevo_uniform(&st.marginals(&[1, 2])?)
        })
        .collect::<Result<Vec<_>>>()?;
    let bound_holds = best.p_succ <= bound + BOUND_SLACK;
    Ok(SimulationReport {
        n_rounds: p.n_rounds,
        message_count: p.message_count,
        rate,
        exponent: curve.exponent,
        best_alpha: curve.best_alpha,
        bound,
        p_succ: best.p_succ,
        decoder: best.decoder.clone(),
        margin: bound - best.p_succ,
        bound_holds,
        passed: bound_holds && separability.all_ppt,
        decoders,
        separability,
        mi_chain,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRound {
    pub round: usize,
    /// `I(M;B_iB′_{i−1})`.
    pub mi_output: f64,
    /// `I(M;B′_{i−1})`.
    pub mi_memory: f64,
    /// `I(M;B_i|B′_{i−1})`.
    pub conditional: f64,
    /// `|I(M;B|B′) − (I(M;BB′) − I(M;B′))|` plus the disagreement with the
    /// Holevo-quantity form of `I(M;BB′)`.
    pub identity_residual: f64,
    /// `I(M;B′_i)` after Bob's decoder, absent in the last round.
    pub mi_next_memory: Option<f64>,
    /// `I(M;B_iB′_{i−1}) ≤ I(M;B′_{i−1}) + χ + 1e−6`.
    pub peeling_ok: bool,
    /// `I(M;B′_i) ≤ I(M;B_iB′_{i−1}) + 1e−6`.
    pub processing_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub chi: f64,
    pub rounds: Vec<ChainRound>,
    /// `I(M;B_nB′_{n−1})`.
    pub cumulative: f64,
    /// `I(M;B_nB′_{n−1}) ≤ nχ + 1e−6`.
    pub cumulative_ok: bool,
    pub identities_ok: bool,
    pub passed: bool,
}

/// Uniform classical message register joined to Bob's registers:
/// `(1/L) Σ_m |m⟩⟨m| ⊗ ρ^m` with dims `[L, B, B′]`.
fn message_joint(states: &[DensityOperator<f64>]) -> Result<DensityOperator<f64>> {
    let dims: Vec<usize> = std::iter::once(states.len())
        .chain(states[0].dims().iter().copied())
        .collect();
    cq_state(&Ensemble::uniform(states.to_vec())?).reshaped(dims)
}

/// Round-by-round checks of the weak-converse chain with `χ` supplied by
/// the caller (use an upper value for a sound check).
pub fn weak_converse_chain(traj: &Trajectory, chi: f64) -> Result<ChainReport> {
    let n = traj.n_rounds();
    let mut rounds = Vec::with_capacity(n);
    for r in 1..=n {
        let st = traj.transmitted(r).expect("every round is transmitted");
        let bob = st.marginals(&[1, 2])?;
        let joint = message_joint(&bob)?;
        let mi_output = mutual_information(&joint, &[0], &[1, 2])?;
        let mi_memory = mutual_information(&joint, &[0], &[2])?;
        let conditional = conditional_mutual_information(&joint, &[0], &[1], &[2])?;
        let identity_residual =
            (conditional - (mi_output - mi_memory)).abs() + (mi_output - holevo_uniform(&bob)?).abs();
        let mi_next_memory = traj
            .stages
            .iter()
            .find(|s| s.round == r && s.stage == Stage::Decoded)
            .map(|s| holevo_uniform(&s.marginals(&[2])?))
            .transpose()?;
        rounds.push(ChainRound {
            round: r,
            mi_output,
            mi_memory,
            conditional,
            identity_residual,
            peeling_ok: mi_output <= mi_memory + chi + CHAIN_SLACK,
            processing_ok: mi_next_memory.is_none_or(|m| m <= mi_output + CHAIN_SLACK),
            mi_next_memory,
        });
    }
    let cumulative = rounds.last().map_or(0.0, |r| r.mi_output);
    let cumulative_ok = cumulative <= n as f64 * chi + CHAIN_SLACK;
    let identities_ok = rounds.iter().all(|r| r.identity_residual <= IDENTITY_TOLERANCE);
    let passed = cumulative_ok && identities_ok && rounds.iter().all(|r| r.peeling_ok && r.processing_ok);
    Ok(ChainReport {
        chi,
        rounds,
        cumulative,
        cumulative_ok,
        identities_ok,
        passed,
    })
}

/// [`weak_converse_chain`] with `χ(N)` computed as the Holevo optimizer's
/// value plus its gap estimate.
pub fn verify_weak_converse_chain(
    traj: &Trajectory,
    ch: &KrausChannel<f64>,
    budget: &AscentBudget,
) -> Result<ChainReport> {
    let r = holevo_information(ch, budget)?;
    weak_converse_chain(traj, r.value + r.gap_estimate)
}
