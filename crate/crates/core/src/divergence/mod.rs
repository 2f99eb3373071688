//! Relative entropies, entropies and the bounds built on them.
//!
//! All logarithms are base 2. Divergences return `+∞` (as the float
//! infinity) when the support conditions fail.

mod bounds;
mod norm;

pub use bounds::{nagaoka_bound, verify_king, verify_nagaoka, KingCheck, NagaokaCheck};
pub use norm::{bloch_grid_norm, nu_certified, one_to_alpha_norm, AscentBudget, NormEstimate, BLOCH_GRID};

use crate::error::{mismatch, Error, Result};
use crate::linalg::{fractional_power, log2_on_support, log2_trace_power, support_projector, Hermitian, Matrix};
use crate::scalar::Real;
use crate::state::DensityOperator;

/// Kernel mass of `ρ` outside `supp σ` above which `D̃_α` (α > 1) and `D` are infinite.
pub const SUPPORT_MASS_TOLERANCE: f64 = 1e-9;
/// Overlap `Tr[Π_σ ρ]` at or below which the states count as orthogonal.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;

/// Rényi order `α ∈ (0,1) ∪ (1,∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenyiOrder<T> {
    alpha: T,
}

impl<T: Real> RenyiOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero()) || !alpha.is_finite() || alpha == T::one() {
            return Err(Error::InvalidOrder(alpha.as_f64()));
        }
        Ok(Self { alpha })
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Whether the data-processing inequality holds at this order.
    pub fn dpi_valid(&self) -> bool {
        self.alpha >= T::lit(0.5)
    }
}

/// Precomputed `σ^{(1−α)/2α}` and support data for repeated evaluation of
/// `D̃_α(· ‖ σ)` against a fixed `σ`.
#[derive(Clone, Debug)]
pub struct SandwichReference<T> {
    power: Hermitian<T>,
    projector: Hermitian<T>,
    alpha: T,
}

impl<T: Real> SandwichReference<T> {
    pub fn new(sigma: &Hermitian<T>, alpha: T) -> Result<Self> {
        let order = RenyiOrder::new(alpha)?;
        let spec = sigma.eigh();
        let beta = (T::one() - order.alpha) / (T::lit(2.0) * order.alpha);
        let power = crate::linalg::fractional_power_of(&spec, beta)?;
        Ok(Self {
            power,
            projector: support_projector(&spec),
            alpha: order.alpha,
        })
    }

    pub fn dim(&self) -> usize {
        self.power.dim()
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// `σ^{(1−α)/2α} ρ σ^{(1−α)/2α}`.
    pub fn sandwich(&self, rho: &Hermitian<T>) -> Hermitian<T> {
        rho.conjugate_by(self.power.matrix())
    }

    /// `log₂ Q̃_α(ρ‖σ) = log₂ Tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α]`, or `None`
    /// when the support conditions make the divergence infinite.
    pub fn log2_quasi(&self, rho: &Hermitian<T>) -> Result<Option<T>> {
        if rho.dim() != self.dim() {
            return Err(mismatch(format!(
                "divergence between dimensions {} and {}",
                rho.dim(),
                self.dim()
            )));
        }
        let overlap = rho.trace_with(&self.projector);
        if overlap <= T::lit(ORTHOGONALITY_TOLERANCE) {
            return Ok(None);
        }
        if self.alpha > T::one() && rho.trace() - overlap > T::lit(SUPPORT_MASS_TOLERANCE) {
            return Ok(None);
        }
        // Round-off eigenvalues of rank-deficient inputs would be amplified
        // by λ^α for α < 1; treat them as kernel like every other spectral function.
        let spec = self.sandwich(rho).eigh();
        let eig: Vec<T> = (0..spec.dim())
            .map(|i| {
                if spec.in_support(i) {
                    spec.eigenvalues[i]
                } else {
                    T::zero()
                }
            })
            .collect();
        Ok(Some(log2_trace_power(&eig, self.alpha)))
    }

    /// `D̃_α(ρ‖σ)` in bits.
    pub fn divergence(&self, rho: &Hermitian<T>) -> Result<T> {
        Ok(match self.log2_quasi(rho)? {
            Some(l) => l / (self.alpha - T::one()),
            None => T::infinity(),
        })
    }
}

/// Sandwiched Rényi divergence `D̃_α(ρ‖σ)` of Hermitian PSD operators.
pub fn sandwiched_renyi_op<T: Real>(rho: &Hermitian<T>, sigma: &Hermitian<T>, alpha: T) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(mismatch(format!(
            "divergence between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    SandwichReference::new(sigma, alpha)?.divergence(rho)
}

pub fn sandwiched_renyi<T: Real>(rho: &DensityOperator<T>, sigma: &DensityOperator<T>, alpha: T) -> Result<T> {
    sandwiched_renyi_op(rho.operator(), sigma.operator(), alpha)
}

/// `−Σ λ log₂ λ` over the positive entries.
pub fn entropy_of_spectrum<T: Real>(eigenvalues: &[T]) -> T {
    eigenvalues
        .iter()
        .filter(|&&l| l > T::zero())
        .fold(T::zero(), |acc, &l| acc - l * l.log2())
}

pub fn von_neumann_entropy_op<T: Real>(rho: &Hermitian<T>) -> T {
    entropy_of_spectrum(&rho.eigenvalues())
}

pub fn von_neumann_entropy<T: Real>(rho: &DensityOperator<T>) -> T {
    von_neumann_entropy_op(rho.operator())
}

/// Umegaki relative entropy `Tr[ρ(log₂ρ − log₂σ)]`.
pub fn relative_entropy_op<T: Real>(rho: &Hermitian<T>, sigma: &Hermitian<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(mismatch(format!(
            "divergence between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let spec = sigma.eigh();
    let kernel_mass = rho.trace() - rho.trace_with(&support_projector(&spec));
    if kernel_mass > T::lit(SUPPORT_MASS_TOLERANCE) {
        return Ok(T::infinity());
    }
    let log_sigma = log2_on_support(&spec)?;
    Ok(-von_neumann_entropy_op(rho) - rho.trace_with(&log_sigma))
}

pub fn relative_entropy<T: Real>(rho: &DensityOperator<T>, sigma: &DensityOperator<T>) -> Result<T> {
    relative_entropy_op(rho.operator(), sigma.operator())
}

fn check_disjoint(n: usize, groups: &[&[usize]]) -> Result<()> {
    let mut seen = vec![false; n];
    for g in groups {
        for &s in *g {
            if s >= n || seen[s] {
                return Err(mismatch(format!(
                    "invalid subsystem partition {groups:?} of {n} systems"
                )));
            }
            seen[s] = true;
        }
    }
    Ok(())
}

/// Entropy of the marginal on `keep` (zero for an empty set).
pub fn marginal_entropy<T: Real>(rho: &DensityOperator<T>, keep: &[usize]) -> Result<T> {
    if keep.is_empty() {
        return Ok(T::zero());
    }
    if keep.len() == rho.dims().len() {
        check_disjoint(rho.dims().len(), &[keep])?;
        return Ok(von_neumann_entropy(rho));
    }
    Ok(von_neumann_entropy(&rho.reduce(keep)?))
}

/// `I(A;B) = H(A) + H(B) − H(AB)` over disjoint subsystem sets.
pub fn mutual_information<T: Real>(rho: &DensityOperator<T>, a: &[usize], b: &[usize]) -> Result<T> {
    check_disjoint(rho.dims().len(), &[a, b])?;
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    Ok(marginal_entropy(rho, a)? + marginal_entropy(rho, b)? - marginal_entropy(rho, &ab)?)
}

/// `I(A;B|C) = H(AC) + H(BC) − H(ABC) − H(C)`.
pub fn conditional_mutual_information<T: Real>(
    rho: &DensityOperator<T>,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<T> {
    check_disjoint(rho.dims().len(), &[a, b, c])?;
    let join = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
    let ac = join(a, c);
    let bc = join(b, c);
    let abc = join(&join(a, b), c);
    Ok(marginal_entropy(rho, &ac)? + marginal_entropy(rho, &bc)?
        - marginal_entropy(rho, &abc)?
        - marginal_entropy(rho, c)?)
}

/// `Θ_σ(ρ) = σ^{1/2} ρ σ^{1/2}`.
pub fn theta_conjugation<T: Real>(sigma: &Hermitian<T>, rho: &Hermitian<T>) -> Result<Hermitian<T>> {
    if sigma.dim() != rho.dim() {
        return Err(mismatch("Θ_σ dimensions"));
    }
    let half = fractional_power(sigma, T::lit(0.5))?;
    Ok(rho.conjugate_by(half.matrix()))
}

/// `Θ_{σ^p}` as a Kraus matrix: the single operator `σ^{p/2}`.
pub(crate) fn theta_power_operator<T: Real>(sigma: &Hermitian<T>, p: T) -> Result<Matrix<T>> {
    Ok(fractional_power(sigma, p / T::lit(2.0))?.into_matrix())
}
