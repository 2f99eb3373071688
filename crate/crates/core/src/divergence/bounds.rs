//! The hypothesis-testing bound on `D̃_α` and the multiplicativity bound for
//! separable inputs.

use serde::Serialize;

use crate::channel::CpMap;
use crate::divergence::{nu_certified, sandwiched_renyi_op, AscentBudget};
use crate::error::{mismatch, Error, Result};
use crate::linalg::{kron, schatten_norm_hermitian, Hermitian, Matrix};
use crate::state::DensityOperator;

const PROBABILITY_SLACK: f64 = 1e-9;

fn clamp_probability(p: f64) -> Result<f64> {
    if !(p >= -PROBABILITY_SLACK && p <= 1.0 + PROBABILITY_SLACK) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `(1/(α−1)) log₂(p^α q^{1−α})` for `α > 1`, with `+∞` when `q = 0 < p`
/// and `−∞` when `p = 0`.
pub fn nagaoka_bound(p: f64, q: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidOrder(alpha));
    }
    let (p, q) = (clamp_probability(p)?, clamp_probability(q)?);
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if q == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((alpha * p.log2() + (1.0 - alpha) * q.log2()) / (alpha - 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NagaokaCheck {
    pub divergence: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `D̃_α(ρ‖σ) ≥ (1/(α−1)) log₂(p^α q^{1−α}) − 1e−7` with
/// `p = Tr Λρ`, `q = Tr Λσ`.
pub fn verify_nagaoka(
    rho: &DensityOperator<f64>,
    sigma: &DensityOperator<f64>,
    test: &Hermitian<f64>,
    alpha: f64,
) -> Result<NagaokaCheck> {
    if test.dim() != rho.dim() {
        return Err(mismatch("test operator dimension"));
    }
    let spec = test.eigh();
    if spec.lambda_min() < -PROBABILITY_SLACK || spec.lambda_max() > 1.0 + PROBABILITY_SLACK {
        return Err(Error::InvalidParameter("test operator must satisfy 0 ≤ Λ ≤ I".into()));
    }
    let p = rho.operator().trace_with(test);
    let q = sigma.operator().trace_with(test);
    let bound = nagaoka_bound(p, q, alpha)?;
    let divergence = sandwiched_renyi_op(rho.operator(), sigma.operator(), alpha)?;
    Ok(NagaokaCheck {
        divergence,
        bound,
        holds: divergence == f64::INFINITY || bound == f64::NEG_INFINITY || divergence >= bound - 1e-7,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KingCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub nu: f64,
    pub holds: bool,
}

/// Checks `‖(M ⊗ id)(Σ_j C_j ⊗ D_j)‖_α ≤ ν_α(M) ‖Σ_j Tr(C_j) D_j‖_α + 1e−6`.
///
/// `ν_α` is the larger of the multi-start ascent and, for qubit inputs, the
/// Bloch grid; both are lower bounds, so a pass is never produced by an
/// overestimated norm.
pub fn verify_king(
    map: &CpMap<f64>,
    terms: &[(Hermitian<f64>, Hermitian<f64>)],
    alpha: f64,
    budget: &AscentBudget,
) -> Result<KingCheck> {
    let (c0, d0) = terms
        .first()
        .ok_or_else(|| Error::NotSeparableInput("no product terms".into()))?;
    let (da, db) = (c0.dim(), d0.dim());
    if da != map.d_in() {
        return Err(mismatch("separable operator does not match the map input"));
    }
    for (j, (c, d)) in terms.iter().enumerate() {
        if c.dim() != da || d.dim() != db {
            return Err(mismatch("product terms of different shapes"));
        }
        let floor = |h: &Hermitian<f64>| -1e-9 * h.eigh().lambda_max().max(1.0);
        if c.eigh().lambda_min() < floor(c) || d.eigh().lambda_min() < floor(d) {
            return Err(Error::NotSeparableInput(format!(
                "term {j} is not a product of PSD factors"
            )));
        }
    }
    let dout = map.d_out();
    let mut out = Matrix::zeros(dout * db, dout * db);
    let mut marginal = Matrix::zeros(db, db);
    for (c, d) in terms {
        out = &out + &kron(&map.apply_matrix(c.matrix())?, d.matrix());
        marginal = &marginal + &d.matrix().scale(c.trace());
    }
    let lhs = schatten_norm_hermitian(&Hermitian::from_hermitian_part(&out), alpha)?;
    let pb = schatten_norm_hermitian(&Hermitian::from_hermitian_part(&marginal), alpha)?;
    let nu = nu_certified(map, alpha, budget)?.value;
    let rhs = nu * pb;
    Ok(KingCheck {
        lhs,
        rhs,
        nu,
        holds: lhs <= rhs + 1e-6,
    })
}
