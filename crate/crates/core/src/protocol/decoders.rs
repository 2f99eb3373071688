//! Final measurements for Bob: pretty-good measurement, Helstrom measurement
//! and the best computational-basis decoder.

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::linalg::{fractional_power, Hermitian, Matrix};
use crate::scalar::cre;
use crate::state::{DensityOperator, Povm};

/// How the final POVM is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderStrategy {
    Pgm,
    /// Requires two messages.
    Helstrom,
    /// Best projective decoder in the computational basis.
    Basis,
    /// The protocol's own `final_povm`.
    Given,
    /// Maximum over every applicable strategy above.
    Best,
}

impl DecoderStrategy {
    pub fn name(self) -> &'static str {
        match self {
            DecoderStrategy::Pgm => "pgm",
            DecoderStrategy::Helstrom => "helstrom",
            DecoderStrategy::Basis => "basis",
            DecoderStrategy::Given => "given",
            DecoderStrategy::Best => "best",
        }
    }
}

fn check_states(states: &[DensityOperator<f64>]) -> Result<usize> {
    let d = states
        .first()
        .ok_or_else(|| Error::InvalidParameter("no states to decode".into()))?
        .dim();
    if states.iter().any(|s| s.dim() != d) {
        return Err(mismatch("states to decode differ in dimension"));
    }
    Ok(d)
}

/// `D^m = S^{−1/2}(ρ^m/L)S^{−1/2}` with `S = Σ ρ^m/L` inverted on its support.
/// When `S` is rank deficient the remainder `I − Σ D^m` (the kernel
/// projector) is spread uniformly over the outcomes.
pub fn pgm_decoder(states: &[DensityOperator<f64>]) -> Result<Povm<f64>> {
    let d = check_states(states)?;
    let l = states.len() as f64;
    let mut s = Matrix::zeros(d, d);
    for rho in states {
        s = &s + &rho.matrix().scale(1.0 / l);
    }
    let inv_sqrt = fractional_power(&Hermitian::from_hermitian_part(&s), -0.5)?;
    let mut elements: Vec<Matrix<f64>> = states
        .iter()
        .map(|rho| inv_sqrt.matrix().sandwich(&rho.matrix().scale(1.0 / l)))
        .collect();
    let mut remainder = Matrix::identity(d);
    for e in &elements {
        remainder = &remainder - e;
    }
    for e in &mut elements {
        *e = &*e + &remainder.scale(1.0 / l);
    }
    Ok(Povm::from_elements_unchecked(
        elements.iter().map(Hermitian::from_hermitian_part).collect(),
    ))
}

/// Projector onto the positive part of `ρ¹ − ρ²` and its complement.
pub fn helstrom_decoder(states: &[DensityOperator<f64>]) -> Result<Povm<f64>> {
    let d = check_states(states)?;
    if states.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "Helstrom measurement needs two messages, got {}",
            states.len()
        )));
    }
    let diff = Hermitian::from_hermitian_part(&(states[0].matrix() - states[1].matrix()));
    let spec = diff.eigh();
    let values: Vec<f64> = spec
        .eigenvalues
        .iter()
        .map(|&x| if x > 0.0 { 1.0 } else { 0.0 })
        .collect();
    let p = spec.assemble(&values);
    let q = &Matrix::identity(d) - &p;
    Ok(Povm::from_elements_unchecked(vec![
        Hermitian::from_hermitian_part(&p),
        Hermitian::from_hermitian_part(&q),
    ]))
}

/// Assigns every computational basis vector to the message with the largest
/// diagonal entry (lowest index on ties). This is the exact optimum over
/// decoders that measure in the computational basis.
pub fn basis_decoder(states: &[DensityOperator<f64>]) -> Result<Povm<f64>> {
    let d = check_states(states)?;
    let mut elements = vec![Matrix::zeros(d, d); states.len()];
    for b in 0..d {
        let mut best = 0;
        for (m, s) in states.iter().enumerate() {
            if s.matrix()[(b, b)].re > states[best].matrix()[(b, b)].re {
                best = m;
            }
        }
        elements[best][(b, b)] = cre(1.0);
    }
    Ok(Povm::from_elements_unchecked(
        elements.iter().map(Hermitian::from_hermitian_part).collect(),
    ))
}
