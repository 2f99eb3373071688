//! Seeded random protocols built from Haar isometries.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{dephase_feedback, joint_dim, FeedbackProtocol, DIMENSION_CAP, MAX_FEEDBACK};
use crate::channel::{random_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::random::{child_seed, random_density, seeded_rng};
use crate::state::{DensityOperator, Ensemble};

/// Register sizes shared by all rounds. Alice's first memory holds the
/// message itself, so `A′_0` has dimension `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolDims {
    pub alice_memory: usize,
    pub bob_memory: usize,
    pub feedback: usize,
}

impl Default for ProtocolDims {
    fn default() -> Self {
        Self {
            alice_memory: 2,
            bob_memory: 2,
            feedback: 2,
        }
    }
}

fn dilation_channel(d_in: usize, d_out: usize, seed: u64) -> Result<KrausChannel<f64>> {
    let env = d_in.div_ceil(d_out).max(2);
    random_channel(d_in, d_out, env, &mut seeded_rng(seed))
}

/// Random protocol with message states `|m⟩⟨m|`, random encoders and
/// decoders from Stinespring dilations, and decoders dephased on `X_i`.
pub fn random_protocol(
    ch: &KrausChannel<f64>,
    n: usize,
    message_count: usize,
    dims: ProtocolDims,
    seed: u64,
) -> Result<FeedbackProtocol> {
    if n == 0 || message_count < 2 {
        return Err(Error::InvalidParameter("need n ≥ 1 rounds and L ≥ 2 messages".into()));
    }
    if dims.feedback == 0 || dims.feedback > MAX_FEEDBACK || dims.alice_memory == 0 || dims.bob_memory == 0 {
        return Err(Error::InvalidParameter(format!(
            "register sizes {dims:?} outside the supported range (feedback ≤ {MAX_FEEDBACK})"
        )));
    }
    let (da, db) = (ch.d_in(), ch.d_out());
    let mut alice_memory_dims = vec![message_count];
    alice_memory_dims.extend(std::iter::repeat_n(dims.alice_memory, n));
    let feedback_dims = vec![dims.feedback; n];
    let bob_memory_dims = vec![dims.bob_memory; n];

    let joint = joint_dim(da, db, &alice_memory_dims, &feedback_dims, &bob_memory_dims);
    if joint > DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dim: joint,
            cap: DIMENSION_CAP,
        });
    }

    let mut rng = seeded_rng(child_seed(seed, 0));
    let initial_alice = (0..message_count)
        .map(|m| DensityOperator::basis(message_count, m))
        .collect();
    let mut weights: Vec<f64> = (0..dims.feedback).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let bob_states = (0..dims.feedback)
        .map(|_| {
            let h = random_density::<f64>(dims.bob_memory, dims.bob_memory, &mut rng);
            DensityOperator::from_hermitian(h, vec![dims.bob_memory])
        })
        .collect::<Result<Vec<_>>>()?;
    let initial_bob = Ensemble::new(weights, bob_states)?;

    let encoders = (0..n)
        .map(|i| {
            dilation_channel(
                alice_memory_dims[i] * feedback_dims[i],
                alice_memory_dims[i + 1] * da,
                child_seed(seed, 1 + i as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let decoders = (0..n.saturating_sub(1))
        .map(|i| {
            let raw = dilation_channel(
                db * bob_memory_dims[i],
                feedback_dims[i + 1] * bob_memory_dims[i + 1],
                child_seed(seed, 1000 + i as u64),
            )?;
            dephase_feedback(&raw, feedback_dims[i + 1])
        })
        .collect::<Result<Vec<_>>>()?;

    let p = FeedbackProtocol {
        n_rounds: n,
        message_count,
        channel_input_dim: da,
        channel_output_dim: db,
        feedback_dims,
        alice_memory_dims,
        bob_memory_dims,
        initial_alice,
        initial_bob,
        encoders,
        decoders,
        final_povm: None,
        separable_inputs: false,
    };
    p.validate()?;
    Ok(p)
}
