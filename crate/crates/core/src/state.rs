//! Density operators, POVMs, ensembles and the partial-transpose test.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{mismatch, Error, Result};
use crate::linalg::{kron, partial_trace, partial_transpose as pt_matrix, Hermitian, Matrix, Spectrum};
use crate::scalar::{cre, Complex, Real};

/// Absolute floor on eigenvalues of states and POVM elements.
pub const PSD_TOLERANCE: f64 = 1e-9;
/// Allowed deviation of `Tr ρ` from one.
pub const TRACE_TOLERANCE: f64 = 1e-9;
/// Allowed deviation of `Σ Λ_m` from the identity.
pub const COMPLETENESS_TOLERANCE: f64 = 1e-8;
/// Default floor for the PPT test.
pub const PPT_TOLERANCE: f64 = 1e-9;

/// Positive semidefinite, unit-trace operator with subsystem dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    op: Hermitian<T>,
    dims: Vec<usize>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates a single-system state.
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        let d = matrix.rows();
        Self::with_dims(matrix, vec![d])
    }

    pub fn with_dims(matrix: Matrix<T>, dims: Vec<usize>) -> Result<Self> {
        let op = Hermitian::with_tolerance(matrix, T::lit(1e-9))?;
        Self::from_hermitian(op, dims)
    }

    pub fn from_hermitian(op: Hermitian<T>, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != op.dim() || dims.contains(&0) {
            return Err(mismatch(format!("dims {dims:?} for a {}-dimensional state", op.dim())));
        }
        let tr = op.trace();
        if (tr - T::one()).abs() > T::lit(TRACE_TOLERANCE) {
            return Err(Error::StateInvalid(format!("trace {tr} differs from 1")));
        }
        let min = op.eigh().lambda_min();
        if min < -T::lit(PSD_TOLERANCE) {
            return Err(Error::StateInvalid(format!("minimum eigenvalue {min:e}")));
        }
        Ok(Self { op, dims })
    }

    /// Renormalizes an operator that is a state up to accumulated round-off.
    /// Still rejects anything beyond the PSD floor.
    pub(crate) fn from_computed(m: &Matrix<T>, dims: Vec<usize>) -> Result<Self> {
        let op = Hermitian::from_hermitian_part(m);
        let tr = op.trace();
        if (tr - T::one()).abs() > T::lit(1e-7) {
            return Err(Error::StateInvalid(format!("trace {tr} differs from 1")));
        }
        let op = op.scale(T::one() / tr);
        Self::from_hermitian(op, dims)
    }

    /// Trusts the caller for trace and positivity.
    pub(crate) fn from_parts_unchecked(op: Hermitian<T>, dims: Vec<usize>) -> Self {
        Self { op, dims }
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm2 = psi.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
        if (norm2 - T::one()).abs() > T::lit(TRACE_TOLERANCE) {
            return Err(Error::StateInvalid(format!("vector norm² {norm2} differs from 1")));
        }
        Ok(Self {
            op: Hermitian::from_hermitian_part(&Matrix::outer(psi)),
            dims: vec![psi.len()],
        })
    }

    /// Computational basis state `|i⟩⟨i|`.
    pub fn basis(d: usize, i: usize) -> Self {
        Self {
            op: Hermitian::from_hermitian_part(&Matrix::basis_projector(d, i)),
            dims: vec![d],
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            op: Hermitian::identity(d).scale(T::one() / T::lit(d as f64)),
            dims: vec![d],
        }
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[T]) -> Result<Self> {
        Self::from_hermitian(Hermitian::from_diag(probs), vec![probs.len()])
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix<T> {
        self.op.matrix()
    }

    #[inline]
    pub fn operator(&self) -> &Hermitian<T> {
        &self.op
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn eigh(&self) -> Spectrum<T> {
        self.op.eigh()
    }

    /// Reinterprets the subsystem structure.
    pub fn reshaped(&self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() {
            return Err(mismatch(format!(
                "dims {dims:?} for a {}-dimensional state",
                self.dim()
            )));
        }
        Ok(Self {
            op: self.op.clone(),
            dims,
        })
    }

    /// Reduced state on the listed subsystems.
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        let m = partial_trace(self.matrix(), &self.dims, keep)?;
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(Self {
            op: Hermitian::from_hermitian_part(&m),
            dims,
        })
    }

    /// `ρ ⊗ σ` with concatenated subsystem lists.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            op: Hermitian::from_hermitian_part(&kron(self.matrix(), other.matrix())),
            dims,
        }
    }

    /// `U ρ U†`.
    pub fn unitary_conjugate(&self, u: &Matrix<T>) -> Result<Self> {
        if u.rows() != self.dim() || !u.is_square() {
            return Err(mismatch("unitary dimension"));
        }
        Ok(Self {
            op: self.op.conjugate_by(u),
            dims: self.dims.clone(),
        })
    }

    /// Convex combination `Σ w_i ρ_i` of equally shaped states.
    pub fn mixture(weights: &[T], states: &[Self]) -> Result<Self> {
        let first = states.first().ok_or_else(|| mismatch("empty mixture"))?;
        let mut acc = Matrix::zeros(first.dim(), first.dim());
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != first.dim() {
                return Err(mismatch("mixture of states with different dimensions"));
            }
            acc = &acc + &s.matrix().scale(*w);
        }
        Self::from_computed(&acc, first.dims.clone())
    }

    pub fn cast<U: Real>(&self) -> DensityOperator<U> {
        DensityOperator {
            op: self.op.cast(),
            dims: self.dims.clone(),
        }
    }
}

/// Serialized as its matrix (nested rows of `[re, im]`).
impl<T: Real + Serialize> Serialize for DensityOperator<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix().serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for DensityOperator<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = Matrix::<T>::deserialize(deserializer)?;
        DensityOperator::new(m).map_err(serde::de::Error::custom)
    }
}

/// Positive operator-valued measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm<T> {
    elements: Vec<Hermitian<T>>,
}

impl<T: Real> Povm<T> {
    pub fn new(elements: Vec<Hermitian<T>>) -> Result<Self> {
        let d = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?
            .dim();
        let mut sum = Matrix::zeros(d, d);
        for (m, e) in elements.iter().enumerate() {
            if e.dim() != d {
                return Err(Error::InvalidPovm(format!("element {m} has dimension {}", e.dim())));
            }
            let min = e.eigh().lambda_min();
            if min < -T::lit(PSD_TOLERANCE) {
                return Err(Error::InvalidPovm(format!("element {m} has eigenvalue {min:e}")));
            }
            sum = &sum + e.matrix();
        }
        let dev = sum.max_abs_diff(&Matrix::identity(d));
        if dev > T::lit(COMPLETENESS_TOLERANCE) {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {dev:e}"
            )));
        }
        Ok(Self { elements })
    }

    pub(crate) fn from_elements_unchecked(elements: Vec<Hermitian<T>>) -> Self {
        Self { elements }
    }

    /// Projective measurement in the computational basis.
    pub fn computational(d: usize) -> Self {
        Self {
            elements: (0..d)
                .map(|i| Hermitian::from_hermitian_part(&Matrix::basis_projector(d, i)))
                .collect(),
        }
    }

    pub fn elements(&self) -> &[Hermitian<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }
}

/// Serialized as the list of element matrices.
impl<T: Real + Serialize> Serialize for Povm<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let ms: Vec<&Matrix<T>> = self.elements.iter().map(Hermitian::matrix).collect();
        ms.serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Povm<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let ms = Vec::<Matrix<T>>::deserialize(deserializer)?;
        let elements = ms
            .into_iter()
            .map(|m| Hermitian::with_tolerance(m, T::lit(1e-9)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Povm::new(elements).map_err(serde::de::Error::custom)
    }
}

/// Outcome distribution `p_m = Tr(ρ Λ_m)`, clamped to `[0, 1]`.
pub fn measurement_probabilities<T: Real>(rho: &DensityOperator<T>, povm: &Povm<T>) -> Result<Vec<T>> {
    if rho.dim() != povm.dim() {
        return Err(mismatch(format!(
            "state of dimension {} measured by a {}-dimensional POVM",
            rho.dim(),
            povm.dim()
        )));
    }
    Ok(povm
        .elements
        .iter()
        .map(|e| rho.operator().trace_with(e).max(T::zero()).min(T::one()))
        .collect())
}

/// Finite ensemble `{p_x, ρ_x}` of equally sized states.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble<T> {
    probs: Vec<T>,
    states: Vec<DensityOperator<T>>,
}

impl<T: Real> Ensemble<T> {
    pub fn new(probs: Vec<T>, states: Vec<DensityOperator<T>>) -> Result<Self> {
        if probs.len() != states.len() || probs.is_empty() {
            return Err(Error::InvalidEnsemble(format!(
                "{} probabilities for {} states",
                probs.len(),
                states.len()
            )));
        }
        if probs.iter().any(|&p| !(p >= T::zero())) {
            return Err(Error::InvalidEnsemble("negative probability".into()));
        }
        let total = probs.iter().fold(T::zero(), |a, &b| a + b);
        if (total - T::one()).abs() > T::lit(1e-10) {
            return Err(Error::InvalidEnsemble(format!("probabilities sum to {total}")));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(Error::InvalidEnsemble("states of different dimensions".into()));
        }
        Ok(Self { probs, states })
    }

    pub fn uniform(states: Vec<DensityOperator<T>>) -> Result<Self> {
        let n = T::lit(states.len() as f64);
        Self::new(vec![T::one() / n; states.len()], states)
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityOperator<T>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
struct EnsembleRepr<T> {
    probs: Vec<T>,
    states: Vec<DensityOperator<T>>,
}

/// JSON layout `{"probs": [...], "states": [matrix, ...]}`.
impl<T: Real + Serialize> Serialize for Ensemble<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        EnsembleRepr {
            probs: self.probs.clone(),
            states: self.states.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Ensemble<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = EnsembleRepr::<T>::deserialize(deserializer)?;
        Ensemble::new(r.probs, r.states).map_err(serde::de::Error::custom)
    }
}

/// Average state `Σ p_x ρ_x`.
pub fn mix_ensemble<T: Real>(e: &Ensemble<T>) -> DensityOperator<T> {
    let d = e.dim();
    let mut acc = Matrix::zeros(d, d);
    for (p, s) in e.probs.iter().zip(&e.states) {
        acc = &acc + &s.matrix().scale(*p);
    }
    DensityOperator {
        op: Hermitian::from_hermitian_part(&acc),
        dims: e.states[0].dims.clone(),
    }
}

/// Classical-quantum state `Σ p_x |x⟩⟨x| ⊗ ρ_x` with dims `[|X|, d]`.
pub fn cq_state<T: Real>(e: &Ensemble<T>) -> DensityOperator<T> {
    let (n, d) = (e.len(), e.dim());
    let mut m = Matrix::zeros(n * d, n * d);
    for (x, (p, s)) in e.probs.iter().zip(&e.states).enumerate() {
        for i in 0..d {
            for j in 0..d {
                m[(x * d + i, x * d + j)] = s.matrix()[(i, j)] * *p;
            }
        }
    }
    DensityOperator {
        op: Hermitian::from_hermitian_part(&m),
        dims: vec![n, d],
    }
}

/// Split of a composite space into `A ⊗ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteCut {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteCut {
    pub fn new(d_a: usize, d_b: usize) -> Self {
        Self { d_a, d_b }
    }

    /// PPT is equivalent to separability only for 2⊗2 and 2⊗3.
    pub fn ppt_is_conclusive(&self) -> bool {
        matches!((self.d_a, self.d_b), (2, 2) | (2, 3) | (3, 2))
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.d_a * self.d_b != dim {
            return Err(mismatch(format!(
                "cut {}x{} applied to a {dim}-dimensional operator",
                self.d_a, self.d_b
            )));
        }
        Ok(())
    }
}

/// Partial transpose on the `B` factor of a Hermitian operator.
pub fn partial_transpose_operator<T: Real>(op: &Hermitian<T>, cut: BipartiteCut) -> Result<Hermitian<T>> {
    cut.check(op.dim())?;
    let m = pt_matrix(op.matrix(), &[cut.d_a, cut.d_b], &[1])?;
    Ok(Hermitian::from_hermitian_part(&m))
}

pub fn partial_transpose<T: Real>(rho: &DensityOperator<T>, cut: BipartiteCut) -> Result<Hermitian<T>> {
    partial_transpose_operator(rho.operator(), cut)
}

/// Outcome of the positive-partial-transpose test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PptReport {
    pub ppt: bool,
    pub min_eigenvalue: f64,
    /// Whether PPT decides separability at these local dimensions.
    pub conclusive: bool,
}

pub fn is_ppt_operator<T: Real>(op: &Hermitian<T>, cut: BipartiteCut, tol: T) -> Result<PptReport> {
    let min = partial_transpose_operator(op, cut)?.eigh().lambda_min();
    Ok(PptReport {
        ppt: min >= -tol,
        min_eigenvalue: min.as_f64(),
        conclusive: cut.ppt_is_conclusive(),
    })
}

pub fn is_ppt<T: Real>(rho: &DensityOperator<T>, cut: BipartiteCut, tol: T) -> Result<PptReport> {
    is_ppt_operator(rho.operator(), cut, tol)
}

/// Maximally entangled state `(1/√d) Σ |ii⟩` on `d ⊗ d`.
pub fn maximally_entangled<T: Real>(d: usize) -> DensityOperator<T> {
    let amp = T::one() / T::lit(d as f64).sqrt();
    let mut psi = vec![cre(T::zero()); d * d];
    for i in 0..d {
        psi[i * d + i] = cre(amp);
    }
    DensityOperator {
        op: Hermitian::from_hermitian_part(&Matrix::outer(&psi)),
        dims: vec![d, d],
    }
}
