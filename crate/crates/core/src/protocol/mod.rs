//! Exact density-matrix simulation of n-round classical communication with
//! classical feedback.
//!
//! Per message `m` the simulator tracks the joint state of Alice's memory,
//! the register in flight and Bob's memory. Round `i` applies
//!
//! ```text
//! [A′_{i−1}, X_{i−1}, B′_{i−1}] --E^i--> [A′_i, A_i, B′_{i−1}]
//!                               --N----> [A′_i, B_i, B′_{i−1}]
//!                               --D^i--> [A′_i, X_i, B′_i]      (i < n)
//! ```
//!
//! and Bob finally measures `B_n ⊗ B′_{n−1}`. Feedback registers `X_i` are
//! quantum registers kept diagonal by a dephasing map after every decoder.
//! Registers are always ordered Alice first, so every Alice:Bob cut is a
//! split of the register list.

mod decoders;
mod random;
mod verify;

pub use decoders::{basis_decoder, helstrom_decoder, pgm_decoder, DecoderStrategy};
pub use random::{random_protocol, ProtocolDims};
pub use verify::{
    verify_separability, verify_strong_converse_bound, verify_strong_converse_bound_with, verify_weak_converse_chain,
    weak_converse_chain, ChainReport, ChainRound, DecoderValue, SeparabilityEntry, SeparabilityReport,
    SimulationReport, BOUND_SLACK, CHAIN_SLACK, IDENTITY_TOLERANCE,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{mismatch, Error, Result};
use crate::linalg::{Hermitian, Matrix};
use crate::state::{DensityOperator, Ensemble, Povm};

/// Largest joint dimension simulated per message.
pub const DIMENSION_CAP: usize = 1 << 12;
/// Largest feedback alphabet.
pub const MAX_FEEDBACK: usize = 4;
/// Eigenvalue floor before a simulated state is rejected.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-7;

/// Protocol description. Channel indices run over rounds `1..=n`, stored
/// from zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeedbackProtocol {
    pub n_rounds: usize,
    pub message_count: usize,
    pub channel_input_dim: usize,
    pub channel_output_dim: usize,
    /// `|X_0|, …, |X_{n−1}|`.
    pub feedback_dims: Vec<usize>,
    /// `A′_0, …, A′_n`.
    pub alice_memory_dims: Vec<usize>,
    /// `B′_0, …, B′_{n−1}`.
    pub bob_memory_dims: Vec<usize>,
    /// `ρ^m_{A′_0}` for every message.
    pub initial_alice: Vec<DensityOperator<f64>>,
    /// Bob's `{p(x), ρ^x_{B′_0}}`, one entry per value of `X_0`.
    pub initial_bob: Ensemble<f64>,
    /// `E^i: A′_{i−1} ⊗ X_{i−1} → A′_i ⊗ A_i`.
    pub encoders: Vec<KrausChannel<f64>>,
    /// `D^i: B_i ⊗ B′_{i−1} → X_i ⊗ B′_i` for `i < n`.
    pub decoders: Vec<KrausChannel<f64>>,
    /// POVM on `B_n ⊗ B′_{n−1}` with one element per message.
    #[serde(default)]
    pub final_povm: Option<Povm<f64>>,
    /// Asserts that no encoder entangles its channel input with anything.
    #[serde(default)]
    pub separable_inputs: bool,
}

impl FeedbackProtocol {
    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("protocol serializes")
    }

    /// `log₂ L / n`.
    pub fn rate(&self) -> f64 {
        (self.message_count as f64).log2() / self.n_rounds as f64
    }

    /// Checks counts and that dimensions chain from round to round.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_rounds;
        if n == 0 {
            return Err(Error::InvalidParameter("at least one round is required".into()));
        }
        if self.message_count < 2 {
            return Err(Error::InvalidParameter("at least two messages are required".into()));
        }
        let lens = [
            ("feedback_dims", self.feedback_dims.len(), n),
            ("alice_memory_dims", self.alice_memory_dims.len(), n + 1),
            ("bob_memory_dims", self.bob_memory_dims.len(), n),
            ("initial_alice", self.initial_alice.len(), self.message_count),
            ("encoders", self.encoders.len(), n),
            ("decoders", self.decoders.len(), n - 1),
        ];
        for (name, got, want) in lens {
            if got != want {
                return Err(mismatch(format!("{name} has {got} entries, expected {want}")));
            }
        }
        if let Some(&x) = self.feedback_dims.iter().find(|&&x| x == 0 || x > MAX_FEEDBACK) {
            return Err(Error::InvalidParameter(format!(
                "feedback alphabet size {x} outside 1..={MAX_FEEDBACK}"
            )));
        }
        if self.alice_memory_dims.contains(&0) || self.bob_memory_dims.contains(&0) {
            return Err(Error::InvalidParameter("memory dimensions must be positive".into()));
        }
        if self.initial_alice.iter().any(|s| s.dim() != self.alice_memory_dims[0]) {
            return Err(mismatch("initial Alice states do not match A′_0"));
        }
        if self.initial_bob.len() != self.feedback_dims[0] || self.initial_bob.dim() != self.bob_memory_dims[0] {
            return Err(mismatch("Bob's initial ensemble does not match X_0 ⊗ B′_0"));
        }
        let (da, db) = (self.channel_input_dim, self.channel_output_dim);
        for (i, e) in self.encoders.iter().enumerate() {
            let want = (
                self.alice_memory_dims[i] * self.feedback_dims[i],
                self.alice_memory_dims[i + 1] * da,
            );
            if (e.d_in(), e.d_out()) != want {
                return Err(mismatch(format!(
                    "encoder {} maps {}→{}, expected {}→{}",
                    i + 1,
                    e.d_in(),
                    e.d_out(),
                    want.0,
                    want.1
                )));
            }
        }
        for (i, d) in self.decoders.iter().enumerate() {
            let want = (
                db * self.bob_memory_dims[i],
                self.feedback_dims[i + 1] * self.bob_memory_dims[i + 1],
            );
            if (d.d_in(), d.d_out()) != want {
                return Err(mismatch(format!(
                    "decoder {} maps {}→{}, expected {}→{}",
                    i + 1,
                    d.d_in(),
                    d.d_out(),
                    want.0,
                    want.1
                )));
            }
        }
        if let Some(povm) = &self.final_povm {
            if povm.len() != self.message_count || povm.dim() != db * self.bob_memory_dims[n - 1] {
                return Err(mismatch("final POVM does not act on B_n ⊗ B′_{n−1} with L outcomes"));
            }
        }
        let cap = self.max_joint_dim();
        if cap > DIMENSION_CAP {
            return Err(Error::DimensionCap {
                dim: cap,
                cap: DIMENSION_CAP,
            });
        }
        Ok(())
    }

    /// Largest per-message joint dimension over the whole run.
    pub fn max_joint_dim(&self) -> usize {
        joint_dim(
            self.channel_input_dim,
            self.channel_output_dim,
            &self.alice_memory_dims,
            &self.feedback_dims,
            &self.bob_memory_dims,
        )
    }
}

pub(crate) fn joint_dim(da: usize, db: usize, alice: &[usize], feedback: &[usize], bob: &[usize]) -> usize {
    let n = feedback.len();
    let mut m = alice[0] * feedback[0] * bob[0];
    for i in 0..n {
        let (a, b) = (alice[i + 1], bob[i]);
        m = m.max(a * da.max(db) * b);
        if i + 1 < n {
            m = m.max(a * feedback[i + 1] * bob[i + 1]);
        }
    }
    m
}

/// Point in the evolution at which a snapshot is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Initial,
    Encoded,
    Transmitted,
    Decoded,
}

/// Conditional states `ρ^m` over the current registers.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolState {
    pub round: usize,
    pub stage: Stage,
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    /// Registers `0..alice_registers` belong to Alice.
    pub alice_registers: usize,
    pub states: Vec<DensityOperator<f64>>,
}

impl ProtocolState {
    pub fn message_count(&self) -> usize {
        self.states.len()
    }

    /// Alice:Bob dimensions.
    pub fn cut_dims(&self) -> (usize, usize) {
        let a = self.dims[..self.alice_registers].iter().product();
        let b = self.dims[self.alice_registers..].iter().product();
        (a, b)
    }

    /// Per-message marginals on the given registers.
    pub fn marginals(&self, keep: &[usize]) -> Result<Vec<DensityOperator<f64>>> {
        self.states.iter().map(|s| s.reduce(keep)).collect()
    }

    /// Bob's registers, i.e. everything after Alice's.
    pub fn bob_states(&self) -> Result<Vec<DensityOperator<f64>>> {
        let keep: Vec<usize> = (self.alice_registers..self.dims.len()).collect();
        self.marginals(&keep)
    }
}

/// Every snapshot of a run, in order; the last one is the final state.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub stages: Vec<ProtocolState>,
}

impl Trajectory {
    pub fn final_state(&self) -> &ProtocolState {
        self.stages.last().expect("a trajectory has stages")
    }

    /// Snapshot after the channel use of round `round` (1-based).
    pub fn transmitted(&self, round: usize) -> Option<&ProtocolState> {
        self.stages
            .iter()
            .find(|s| s.round == round && s.stage == Stage::Transmitted)
    }

    pub fn n_rounds(&self) -> usize {
        self.final_state().round
    }
}

fn labelled(names: &[(&str, usize)]) -> Vec<String> {
    names.iter().map(|(n, i)| format!("{n}{i}")).collect()
}

/// Validates an evolved operator, tolerating round-off down to
/// `NEGATIVITY_TOLERANCE`.
fn checked_state(m: &Matrix<f64>, dims: Vec<usize>, what: &str) -> Result<DensityOperator<f64>> {
    let op = Hermitian::from_hermitian_part(m);
    let tr = op.trace();
    if (tr - 1.0).abs() > NEGATIVITY_TOLERANCE {
        return Err(Error::StateInvalid(format!("{what}: trace {tr}")));
    }
    let op = op.scale(1.0 / tr);
    let min = op.eigh().lambda_min();
    if min < -NEGATIVITY_TOLERANCE {
        return Err(Error::StateInvalid(format!("{what}: eigenvalue {min:e}")));
    }
    Ok(DensityOperator::from_parts_unchecked(op, dims))
}

/// `Σ_x |x⟩⟨x| ρ |x⟩⟨x|` on the leading `x`-dimensional factor of a
/// `x·rest`-dimensional block embedded as `left ⊗ (X ⊗ rest)`.
fn dephase_block(m: &Matrix<f64>, left: usize, x: usize, rest: usize) -> Matrix<f64> {
    let inner = x * rest;
    let mut out = m.clone();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if (r % inner) / rest != (c % inner) / rest {
                out[(r, c)] = crate::scalar::cre(0.0);
            }
        }
    }
    debug_assert_eq!(m.rows(), left * inner);
    out
}

/// Largest off-diagonal `X`-block entry, zero for a classical register.
#[cfg(test)]
pub(crate) fn feedback_coherence(m: &Matrix<f64>, x: usize, rest: usize) -> f64 {
    let inner = x * rest;
    let mut worst: f64 = 0.0;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if (r % inner) / rest != (c % inner) / rest {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

fn evolve_message(p: &FeedbackProtocol, ch: &KrausChannel<f64>, m: usize) -> Result<Vec<DensityOperator<f64>>> {
    let n = p.n_rounds;
    let bob = crate::state::cq_state(&p.initial_bob);
    let mut rho = p.initial_alice[m].tensor(&bob).matrix().clone();
    let mut out = Vec::with_capacity(3 * n);
    let mut dims = vec![p.alice_memory_dims[0], p.feedback_dims[0], p.bob_memory_dims[0]];
    out.push(checked_state(&rho, dims.clone(), "initial state")?);
    for i in 0..n {
        let (a_next, b_prev) = (p.alice_memory_dims[i + 1], p.bob_memory_dims[i]);
        rho = p.encoders[i].as_map().apply_on_block(&rho, 1, b_prev)?;
        dims = vec![a_next, p.channel_input_dim, b_prev];
        out.push(checked_state(&rho, dims.clone(), "after encoding")?);
        rho = ch.as_map().apply_on_block(&rho, a_next, b_prev)?;
        dims = vec![a_next, p.channel_output_dim, b_prev];
        out.push(checked_state(&rho, dims.clone(), "after transmission")?);
        if i + 1 < n {
            let (x, b_next) = (p.feedback_dims[i + 1], p.bob_memory_dims[i + 1]);
            rho = p.decoders[i].as_map().apply_on_block(&rho, a_next, 1)?;
            rho = dephase_block(&rho, a_next, x, b_next);
            dims = vec![a_next, x, b_next];
            out.push(checked_state(&rho, dims.clone(), "after decoding")?);
        }
    }
    Ok(out)
}

/// Runs the protocol over `ch` and returns every snapshot.
pub fn simulate(p: &FeedbackProtocol, ch: &KrausChannel<f64>) -> Result<Trajectory> {
    p.validate()?;
    if ch.d_in() != p.channel_input_dim || ch.d_out() != p.channel_output_dim {
        return Err(mismatch(format!(
            "channel maps {}→{}, protocol expects {}→{}",
            ch.d_in(),
            ch.d_out(),
            p.channel_input_dim,
            p.channel_output_dim
        )));
    }
    let per_message: Vec<Vec<DensityOperator<f64>>> = (0..p.message_count)
        .into_par_iter()
        .map(|m| evolve_message(p, ch, m))
        .collect::<Result<_>>()?;

    let mut shapes = vec![(0, Stage::Initial, labelled(&[("A'", 0), ("X", 0), ("B'", 0)]), 1)];
    for r in 1..=p.n_rounds {
        shapes.push((r, Stage::Encoded, labelled(&[("A'", r), ("A", r), ("B'", r - 1)]), 2));
        shapes.push((
            r,
            Stage::Transmitted,
            labelled(&[("A'", r), ("B", r), ("B'", r - 1)]),
            1,
        ));
        if r < p.n_rounds {
            shapes.push((r, Stage::Decoded, labelled(&[("A'", r), ("X", r), ("B'", r)]), 1));
        }
    }
    let stages = shapes
        .into_iter()
        .enumerate()
        .map(|(k, (round, stage, labels, alice_registers))| {
            let states: Vec<DensityOperator<f64>> = per_message.iter().map(|v| v[k].clone()).collect();
            ProtocolState {
                round,
                stage,
                labels,
                dims: states[0].dims().to_vec(),
                alice_registers,
                states,
            }
        })
        .collect();
    Ok(Trajectory { stages })
}

/// `(1/L) Σ_m Tr[D^m ρ^m]` over Bob's registers, clamped to `[0, 1]`.
pub fn success_probability(final_state: &ProtocolState, povm: &Povm<f64>) -> Result<f64> {
    let bob = final_state.bob_states()?;
    success_from_states(&bob, povm)
}

pub(crate) fn success_from_states(states: &[DensityOperator<f64>], povm: &Povm<f64>) -> Result<f64> {
    if povm.len() != states.len() {
        return Err(mismatch(format!(
            "{} POVM elements for {} messages",
            povm.len(),
            states.len()
        )));
    }
    if states.iter().any(|s| s.dim() != povm.dim()) {
        return Err(mismatch("POVM does not act on Bob's final registers"));
    }
    let total: f64 = states
        .iter()
        .zip(povm.elements())
        .map(|(s, e)| s.operator().trace_with(e))
        .sum();
    Ok((total / states.len() as f64).clamp(0.0, 1.0))
}

/// Appends `X_i`-basis dephasing to a decoder whose output is `X ⊗ rest`:
/// Kraus operators `(|x⟩⟨x| ⊗ I) K`.
pub fn dephase_feedback(decoder: &KrausChannel<f64>, x: usize) -> Result<KrausChannel<f64>> {
    if x == 0 || decoder.d_out() % x != 0 {
        return Err(mismatch(format!(
            "decoder output {} is not a multiple of |X| = {x}",
            decoder.d_out()
        )));
    }
    let rest = decoder.d_out() / x;
    let mut ops = Vec::with_capacity(x * decoder.kraus_ops().len());
    for k in decoder.kraus_ops() {
        for v in 0..x {
            ops.push(Matrix::from_fn(k.rows(), k.cols(), |r, c| {
                if r / rest == v {
                    k[(r, c)]
                } else {
                    crate::scalar::cre(0.0)
                }
            }));
        }
    }
    KrausChannel::new(ops)
}

#[cfg(test)]
mod tests;
