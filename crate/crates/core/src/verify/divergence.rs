//! Divergence axioms, the Nagaoka bound and the King product bound.

use rand::Rng;

use super::{Check, CheckBuilder, SuiteOptions};
use crate::channel::random_channel;
use crate::divergence::{relative_entropy, sandwiched_renyi, verify_king, verify_nagaoka};
use crate::error::Result;
use crate::linalg::random::{child_seed, haar_unitary, random_density, seeded_rng, SeededRng};
use crate::linalg::{Hermitian, Matrix};
use crate::state::DensityOperator;

/// Orders for the monotonicity and data-processing checks; `1.0` stands for
/// the Umegaki relative entropy.
pub const DIVERGENCE_ALPHAS: [f64; 16] = [
    0.5, 0.6, 0.7, 0.8, 0.9, 0.99, 1.0, 1.01, 1.1, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0,
];

const PAIRS: u64 = 200;
const DPI_CHANNELS: u64 = 50;
const MONOTONE_SLACK: f64 = 1e-8;
const DPI_SLACK: f64 = 1e-7;
const NEAR_ONE_STEP: f64 = 1e-4;
const NEAR_ONE_TOLERANCE: f64 = 1e-3;
const DPI_STREAM: u64 = u64::MAX - 1;

const NAGAOKA_CASES: u64 = 1000;
const KING_CASES: u64 = 200;
const KING_ALPHAS: [f64; 4] = [1.0, 1.5, 2.0, 4.0];

fn state(h: Hermitian<f64>) -> Result<DensityOperator<f64>> {
    let d = h.dim();
    DensityOperator::from_hermitian(h, vec![d])
}

fn divergence_at(rho: &DensityOperator<f64>, sigma: &DensityOperator<f64>, alpha: f64) -> Result<f64> {
    if alpha == 1.0 {
        relative_entropy(rho, sigma)
    } else {
        sandwiched_renyi(rho, sigma, alpha)
    }
}

/// Pair `s` of the divergence stream: full-rank states of dimension
/// `2 + s mod 3`.
pub(crate) fn divergence_pair(seed: u64, s: u64) -> Result<(DensityOperator<f64>, DensityOperator<f64>)> {
    let mut rng = seeded_rng(child_seed(seed, s));
    let d = 2 + (s % 3) as usize;
    let rho = state(random_density(d, d, &mut rng))?;
    let sigma = state(random_density(d, d, &mut rng))?;
    Ok((rho, sigma))
}

/// Monotonicity in α, data processing and the α → 1 limit on random pairs.
pub fn divergence_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut mono = CheckBuilder::new("monotone_in_alpha");
    let mut dpi = CheckBuilder::new("data_processing");
    let mut near = CheckBuilder::new("near_one_limit");
    for s in 0..PAIRS {
        let (rho, sigma) = divergence_pair(opts.seed, s)?;
        let values = DIVERGENCE_ALPHAS
            .iter()
            .map(|&a| divergence_at(&rho, &sigma, a))
            .collect::<Result<Vec<_>>>()?;
        for (k, w) in values.windows(2).enumerate() {
            mono.max("worst_decrease", w[0] - w[1]);
            mono.case(w[1] >= w[0] - MONOTONE_SLACK, || {
                format!(
                    "pair {s}: D({}) = {:e} > D({}) = {:e}",
                    DIVERGENCE_ALPHAS[k],
                    w[0],
                    DIVERGENCE_ALPHAS[k + 1],
                    w[1]
                )
            });
        }

        let d = values[6];
        for e in [NEAR_ONE_STEP, -NEAR_ONE_STEP] {
            let v = sandwiched_renyi(&rho, &sigma, 1.0 + e)?;
            near.max("worst_deviation", (v - d).abs());
            near.case((v - d).abs() <= NEAR_ONE_TOLERANCE, || {
                format!("pair {s}: |D(1{e:+e}) − D| = {:e}", (v - d).abs())
            });
        }

        if s < DPI_CHANNELS {
            let mut rng = seeded_rng(child_seed(child_seed(opts.seed, DPI_STREAM), s));
            let ch = random_channel(rho.dim(), rho.dim(), 2, &mut rng)?;
            let (nr, ns) = (ch.apply(&rho)?, ch.apply(&sigma)?);
            for (&a, before) in DIVERGENCE_ALPHAS.iter().zip(&values) {
                let after = divergence_at(&nr, &ns, a)?;
                dpi.max("worst_increase", after - before);
                dpi.case(after <= before + DPI_SLACK, || {
                    format!("pair {s}, α = {a}: {after:e} > {before:e}")
                });
            }
        }
    }
    Ok(vec![mono.finish(), dpi.finish(), near.finish()])
}

/// `U diag(u) U†` with `u` uniform in `[0, 1]`.
fn random_test_operator(d: usize, rng: &mut SeededRng) -> Hermitian<f64> {
    let u = haar_unitary::<f64>(d, rng);
    let diag: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    Hermitian::from_hermitian_part(&u.sandwich(&Matrix::from_diag(&diag)))
}

/// `D̃_α(ρ‖σ) ≥ (1/(α−1)) log₂(p^α q^{1−α})` for random `ρ, σ, Λ` and
/// `α ∈ (1, 5]`, dimensions 2 and 3.
pub fn nagaoka_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut c = CheckBuilder::new("nagaoka_bound");
    for s in 0..NAGAOKA_CASES {
        let mut rng = seeded_rng(opts.stream(1, s));
        let d = 2 + (s % 2) as usize;
        let rank = rng.random_range(1..=d);
        let rho = state(random_density(d, rank, &mut rng))?;
        let sigma = state(random_density(d, d, &mut rng))?;
        let lam = random_test_operator(d, &mut rng);
        let alpha = 1.0 + 4.0 * (1.0 - rng.random::<f64>());
        let r = verify_nagaoka(&rho, &sigma, &lam, alpha)?;
        if r.divergence.is_finite() && r.bound.is_finite() {
            c.min("smallest_slack", r.divergence - r.bound);
        }
        c.case(r.holds, || {
            format!(
                "case {s} (d = {d}, α = {alpha}): D = {:e} < bound {:e}",
                r.divergence, r.bound
            )
        });
    }
    Ok(vec![c.finish()])
}

/// `‖(M ⊗ id)(X)‖_α ≤ ν_α(M) ‖Tr_A X‖_α` for separable `X` with up to four
/// product terms on qubits.
pub fn king_suite(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut c = CheckBuilder::new("king_product_bound");
    for s in 0..KING_CASES {
        let mut rng = seeded_rng(opts.stream(2, s));
        let alpha = KING_ALPHAS[(s % 4) as usize];
        let terms: Vec<(Hermitian<f64>, Hermitian<f64>)> = (0..1 + rng.random_range(0..4))
            .map(|_| {
                let (ra, rb) = (rng.random_range(1..=2), rng.random_range(1..=2));
                let wa = 0.1 + 2.0 * rng.random::<f64>();
                let wb = 0.1 + 2.0 * rng.random::<f64>();
                (
                    random_density::<f64>(2, ra, &mut rng).scale(wa),
                    random_density::<f64>(2, rb, &mut rng).scale(wb),
                )
            })
            .collect();
        let ch = random_channel::<f64>(2, 2, 2, &mut rng)?;
        let r = verify_king(ch.as_map(), &terms, alpha, &opts.budget_for(2, s))?;
        c.min("smallest_slack", r.rhs - r.lhs);
        c.case(r.holds, || {
            format!(
                "case {s} (α = {alpha}, {} terms): {:e} > {:e}",
                terms.len(),
                r.lhs,
                r.rhs
            )
        });
    }
    Ok(vec![c.finish()])
}
