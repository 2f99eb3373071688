//! Completely positive maps in Kraus and Choi form, measure-and-prepare
//! channels and the entanglement-breaking test.
//!
//! Choi convention: `J(N) = (id ⊗ N)(|Φ⟩⟨Φ|)` with the input factor first and
//! `|Φ⟩ = d_in^{-1/2} Σ_i |ii⟩`, so `Tr J = 1` and `Tr_out J = I/d_in`.

mod zoo;

pub use zoo::{bsc, classical_channel, dephasing, depolarizing, identity, random_channel, replacement};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{mismatch, Error, Result};
use crate::linalg::{conjugate_embedded, kron, partial_trace, Hermitian, Matrix};
use crate::scalar::{Complex, Real};
use crate::state::{is_ppt_operator, BipartiteCut, DensityOperator, Povm};

/// Allowed deviation of `Σ K†K` from the identity.
pub const TP_TOLERANCE: f64 = 1e-8;
/// Eigenvalue cutoff (on `d_in · J`) when extracting Kraus operators.
pub const KRAUS_CUTOFF: f64 = 1e-10;

/// Completely positive map `X ↦ Σ K X K†`, not necessarily trace preserving.
#[derive(Clone, Debug, PartialEq)]
pub struct CpMap<T> {
    ops: Vec<Matrix<T>>,
    d_in: usize,
    d_out: usize,
}

impl<T: Real> CpMap<T> {
    pub fn new(ops: Vec<Matrix<T>>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| mismatch("no Kraus operators"))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        if ops.iter().any(|k| k.rows() != d_out || k.cols() != d_in) {
            return Err(mismatch("Kraus operators of different shapes"));
        }
        Ok(Self { ops, d_in, d_out })
    }

    #[inline]
    pub fn kraus_ops(&self) -> &[Matrix<T>] {
        &self.ops
    }

    #[inline]
    pub fn d_in(&self) -> usize {
        self.d_in
    }

    #[inline]
    pub fn d_out(&self) -> usize {
        self.d_out
    }

    fn check_input(&self, m: &Matrix<T>) -> Result<()> {
        if !m.is_square() || m.rows() != self.d_in {
            return Err(mismatch(format!(
                "map with input dimension {} applied to a {}x{} operator",
                self.d_in,
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }

    /// `Σ K X K†`.
    pub fn apply_matrix(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_input(x)?;
        let mut acc = Matrix::zeros(self.d_out, self.d_out);
        for k in &self.ops {
            acc = &acc + &k.sandwich(x);
        }
        Ok(acc)
    }

    pub fn apply_hermitian(&self, x: &Hermitian<T>) -> Result<Hermitian<T>> {
        Ok(Hermitian::from_hermitian_part(&self.apply_matrix(x.matrix())?))
    }

    /// `M(|ψ⟩⟨ψ|)` without forming the projector.
    pub fn apply_pure(&self, psi: &[Complex<T>]) -> Result<Hermitian<T>> {
        if psi.len() != self.d_in {
            return Err(mismatch(format!(
                "map with input dimension {} applied to a vector of length {}",
                self.d_in,
                psi.len()
            )));
        }
        let cols = kraus_images(self, psi);
        let d = self.d_out;
        let x = Matrix::from_fn(d, d, |i, j| {
            cols.iter()
                .map(|c| c[i] * c[j].conj())
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
        });
        Ok(Hermitian::from_hermitian_part(&x))
    }

    /// Adjoint map `Y ↦ Σ K† Y K`.
    pub fn apply_adjoint(&self, y: &Hermitian<T>) -> Result<Hermitian<T>> {
        if y.dim() != self.d_out {
            return Err(mismatch(format!(
                "adjoint of a map with output dimension {} applied to dimension {}",
                self.d_out,
                y.dim()
            )));
        }
        let mut acc = Matrix::zeros(self.d_in, self.d_in);
        for k in &self.ops {
            acc = &acc + &k.adjoint().sandwich(y.matrix());
        }
        Ok(Hermitian::from_hermitian_part(&acc))
    }

    /// `(I_left ⊗ N ⊗ I_right)(X)`.
    pub fn apply_on_block(&self, x: &Matrix<T>, left: usize, right: usize) -> Result<Matrix<T>> {
        let n = left * self.d_out * right;
        let mut acc = Matrix::zeros(n, n);
        for k in &self.ops {
            acc = &acc + &conjugate_embedded(k, x, left, right)?;
        }
        Ok(acc)
    }

    /// The map `X ↦ A N(X) A†`.
    pub fn post_compose(&self, a: &Matrix<T>) -> Result<Self> {
        if a.cols() != self.d_out {
            return Err(mismatch("post-composition dimension"));
        }
        Self::new(self.ops.iter().map(|k| a * k).collect())
    }

    /// `Σ K†K`.
    pub fn kraus_completeness(&self) -> Matrix<T> {
        let mut acc = Matrix::zeros(self.d_in, self.d_in);
        for k in &self.ops {
            acc = &acc + &(&k.adjoint() * k);
        }
        acc
    }

    /// Normalized Choi operator of the map.
    pub fn choi_operator(&self) -> Hermitian<T> {
        let (di, dout) = (self.d_in, self.d_out);
        let scale = T::one() / T::lit(di as f64);
        let mut j = Matrix::zeros(di * dout, di * dout);
        for k in &self.ops {
            // vec(K)[i·d_out + o] = K[o, i]
            for r in 0..di * dout {
                let a = k[(r % dout, r / dout)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..di * dout {
                    j[(r, c)] += a * k[(c % dout, c / dout)].conj() * scale;
                }
            }
        }
        Hermitian::from_hermitian_part(&j)
    }

    pub fn cast<U: Real>(&self) -> CpMap<U> {
        CpMap {
            ops: self.ops.iter().map(Matrix::cast).collect(),
            d_in: self.d_in,
            d_out: self.d_out,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
struct KrausRepr<T> {
    d_in: usize,
    d_out: usize,
    ops: Vec<Matrix<T>>,
}

/// JSON layout `{"d_in", "d_out", "ops": [matrix, ...]}`; deserialization
/// checks the shapes and trace preservation.
impl<T: Real + Serialize> Serialize for KrausChannel<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        KrausRepr {
            d_in: self.d_in(),
            d_out: self.d_out(),
            ops: self.kraus_ops().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for KrausChannel<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = KrausRepr::<T>::deserialize(deserializer)?;
        KrausChannel::from_parts(r.d_in, r.d_out, r.ops).map_err(serde::de::Error::custom)
    }
}

/// Trace-preserving completely positive map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel<T> {
    map: CpMap<T>,
}

impl<T: Real> KrausChannel<T> {
    pub fn new(ops: Vec<Matrix<T>>) -> Result<Self> {
        let map = CpMap::new(ops)?;
        let dev = map.kraus_completeness().max_abs_diff(&Matrix::identity(map.d_in));
        if dev > T::lit(TP_TOLERANCE) {
            return Err(Error::NotCptp(format!("Σ K†K deviates from the identity by {dev:e}")));
        }
        Ok(Self { map })
    }

    /// [`KrausChannel::new`] with declared dimensions checked against the operators.
    pub fn from_parts(d_in: usize, d_out: usize, ops: Vec<Matrix<T>>) -> Result<Self> {
        if ops.iter().any(|k| k.rows() != d_out || k.cols() != d_in) {
            return Err(mismatch(format!(
                "Kraus operators do not all have shape {d_out}x{d_in}"
            )));
        }
        Self::new(ops)
    }

    pub(crate) fn from_map_unchecked(map: CpMap<T>) -> Self {
        Self { map }
    }

    #[inline]
    pub fn as_map(&self) -> &CpMap<T> {
        &self.map
    }

    #[inline]
    pub fn kraus_ops(&self) -> &[Matrix<T>] {
        self.map.kraus_ops()
    }

    #[inline]
    pub fn d_in(&self) -> usize {
        self.map.d_in
    }

    #[inline]
    pub fn d_out(&self) -> usize {
        self.map.d_out
    }

    /// `N(ρ)` for a single-system input.
    pub fn apply(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        let out = self.map.apply_matrix(rho.matrix())?;
        DensityOperator::from_computed(&out, vec![self.d_out()])
    }

    pub fn apply_hermitian(&self, x: &Hermitian<T>) -> Result<Hermitian<T>> {
        self.map.apply_hermitian(x)
    }

    pub fn apply_adjoint(&self, y: &Hermitian<T>) -> Result<Hermitian<T>> {
        self.map.apply_adjoint(y)
    }

    /// `(id ⊗ N ⊗ id)(ρ)` acting on subsystem `target`; the output keeps the
    /// subsystem order with `d_in` replaced by `d_out`.
    pub fn apply_on_subsystem(&self, rho: &DensityOperator<T>, target: usize) -> Result<DensityOperator<T>> {
        let dims = rho.dims();
        if target >= dims.len() || dims[target] != self.d_in() {
            return Err(mismatch(format!(
                "channel with input dimension {} applied to subsystem {target} of {dims:?}",
                self.d_in()
            )));
        }
        let left: usize = dims[..target].iter().product();
        let right: usize = dims[target + 1..].iter().product();
        let out = self.map.apply_on_block(rho.matrix(), left, right)?;
        let mut new_dims = dims.to_vec();
        new_dims[target] = self.d_out();
        DensityOperator::from_computed(&out, new_dims)
    }

    pub fn to_choi(&self) -> ChoiMatrix<T> {
        ChoiMatrix {
            op: self.map.choi_operator(),
            d_in: self.d_in(),
            d_out: self.d_out(),
        }
    }

    pub fn from_choi(c: &ChoiMatrix<T>) -> Result<Self> {
        let (di, dout) = (c.d_in, c.d_out);
        let spec = c.op.scale(T::lit(di as f64)).eigh();
        let mut ops = Vec::new();
        for (idx, &l) in spec.eigenvalues.iter().enumerate() {
            if l < T::lit(KRAUS_CUTOFF) {
                continue;
            }
            let v = spec.eigenvector(idx);
            let s = l.sqrt();
            ops.push(Matrix::from_fn(dout, di, |o, i| v[i * dout + o] * s));
        }
        if ops.is_empty() {
            return Err(Error::NotCptp("Choi operator has no support".into()));
        }
        Self::new(ops)
    }

    /// Verdict of the PPT test on the Choi state across the input:output cut.
    pub fn entanglement_breaking(&self, tol: T) -> EbReport {
        let cut = BipartiteCut::new(self.d_in(), self.d_out());
        let r = is_ppt_operator(&self.map.choi_operator(), cut, tol).expect("Choi dims match the cut");
        let verdict = match (r.ppt, r.conclusive) {
            (false, _) => EbVerdict::NotEntanglementBreaking,
            (true, true) => EbVerdict::EntanglementBreaking,
            (true, false) => EbVerdict::Inconclusive,
        };
        EbReport {
            verdict,
            min_eigenvalue: r.min_eigenvalue,
        }
    }

    pub fn cast<U: Real>(&self) -> KrausChannel<U> {
        KrausChannel { map: self.map.cast() }
    }
}

/// Kraus set of `a ⊗ b`: all pairwise Kronecker products.
pub fn tensor_channels<T: Real>(a: &KrausChannel<T>, b: &KrausChannel<T>) -> KrausChannel<T> {
    let mut ops = Vec::with_capacity(a.kraus_ops().len() * b.kraus_ops().len());
    for ka in a.kraus_ops() {
        for kb in b.kraus_ops() {
            ops.push(kron(ka, kb));
        }
    }
    KrausChannel::from_map_unchecked(CpMap::new(ops).expect("uniform shapes"))
}

/// Normalized Choi state of a channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix<T> {
    op: Hermitian<T>,
    d_in: usize,
    d_out: usize,
}

impl<T: Real> ChoiMatrix<T> {
    /// Validates positivity and `Tr_out J = I/d_in`.
    pub fn new(op: Hermitian<T>, d_in: usize, d_out: usize) -> Result<Self> {
        if op.dim() != d_in * d_out {
            return Err(mismatch(format!(
                "Choi operator of dimension {} for d_in={d_in}, d_out={d_out}",
                op.dim()
            )));
        }
        op.eigh()
            .check_psd()
            .map_err(|e| Error::NotCptp(format!("Choi operator is not positive: {e}")))?;
        let marginal = partial_trace(op.matrix(), &[d_in, d_out], &[0])?;
        let target = Matrix::identity(d_in).scale(T::one() / T::lit(d_in as f64));
        let dev = marginal.max_abs_diff(&target);
        if dev > T::lit(TP_TOLERANCE) {
            return Err(Error::NotCptp(format!(
                "input marginal deviates from I/d_in by {dev:e}"
            )));
        }
        Ok(Self { op, d_in, d_out })
    }

    #[inline]
    pub fn operator(&self) -> &Hermitian<T> {
        &self.op
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix<T> {
        self.op.matrix()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_in, self.d_out)
    }
}

/// Three-valued outcome of the entanglement-breaking test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EbVerdict {
    EntanglementBreaking,
    NotEntanglementBreaking,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EbReport {
    pub verdict: EbVerdict,
    /// Smallest eigenvalue of the partially transposed Choi state.
    pub min_eigenvalue: f64,
}

/// `ρ ↦ Σ_m Tr(Λ_m ρ) σ_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurePrepareChannel<T> {
    povm: Povm<T>,
    states: Vec<DensityOperator<T>>,
    kraus: KrausChannel<T>,
}

impl<T: Real> MeasurePrepareChannel<T> {
    pub fn new(povm: Povm<T>, states: Vec<DensityOperator<T>>) -> Result<Self> {
        if povm.len() != states.len() {
            return Err(mismatch(format!(
                "{} POVM elements for {} prepared states",
                povm.len(),
                states.len()
            )));
        }
        let d_out = states[0].dim();
        if states.iter().any(|s| s.dim() != d_out) {
            return Err(mismatch("prepared states of different dimensions"));
        }
        let kraus = measure_prepare_to_kraus(&povm, &states);
        Ok(Self { povm, states, kraus })
    }

    pub fn povm(&self) -> &Povm<T> {
        &self.povm
    }

    pub fn states(&self) -> &[DensityOperator<T>] {
        &self.states
    }

    pub fn as_kraus(&self) -> &KrausChannel<T> {
        &self.kraus
    }

    /// Direct evaluation of `Σ_m Tr(Λ_m ρ) σ_m`.
    pub fn apply_definition(&self, rho: &DensityOperator<T>) -> Result<Matrix<T>> {
        let probs = crate::state::measurement_probabilities(rho, &self.povm)?;
        let d = self.states[0].dim();
        let mut acc = Matrix::zeros(d, d);
        for (p, s) in probs.iter().zip(&self.states) {
            acc = &acc + &s.matrix().scale(*p);
        }
        Ok(acc)
    }
}

/// Kraus operators `√(p_j μ_k) |e_j⟩⟨f_k|` from `Λ_m = Σ μ_k |f_k⟩⟨f_k|`
/// and `σ_m = Σ p_j |e_j⟩⟨e_j|`.
fn measure_prepare_to_kraus<T: Real>(povm: &Povm<T>, states: &[DensityOperator<T>]) -> KrausChannel<T> {
    let mut ops = Vec::new();
    for (lambda, sigma) in povm.elements().iter().zip(states) {
        let ls = lambda.eigh();
        let ss = sigma.eigh();
        for k in 0..ls.dim() {
            let mu = ls.eigenvalues[k];
            if mu <= T::lit(KRAUS_CUTOFF) {
                continue;
            }
            let f = ls.eigenvector(k);
            for j in 0..ss.dim() {
                let p = ss.eigenvalues[j];
                if p <= T::lit(KRAUS_CUTOFF) {
                    continue;
                }
                let e = ss.eigenvector(j);
                let w = (p * mu).sqrt();
                ops.push(Matrix::from_fn(e.len(), f.len(), |r, c| e[r] * f[c].conj() * w));
            }
        }
    }
    // Dropped eigenvalues perturb Σ K†K by at most the cutoff; the
    // definition-level action is what callers compare against.
    KrausChannel::from_map_unchecked(CpMap::new(ops).expect("uniform shapes"))
}

/// A channel as loaded from a description: either a plain Kraus channel or a
/// measure-and-prepare channel, which is entanglement breaking by construction.
#[derive(Clone, Debug, PartialEq)]
pub enum Channel<T> {
    Kraus(KrausChannel<T>),
    MeasurePrepare(MeasurePrepareChannel<T>),
}

impl<T: Real> Channel<T> {
    pub fn kraus(&self) -> &KrausChannel<T> {
        match self {
            Channel::Kraus(k) => k,
            Channel::MeasurePrepare(mp) => mp.as_kraus(),
        }
    }

    pub fn is_entanglement_breaking(&self, tol: T) -> EbReport {
        match self {
            Channel::Kraus(k) => k.entanglement_breaking(tol),
            Channel::MeasurePrepare(mp) => EbReport {
                verdict: EbVerdict::EntanglementBreaking,
                min_eigenvalue: mp.as_kraus().entanglement_breaking(tol).min_eigenvalue,
            },
        }
    }
}

impl<T> From<KrausChannel<T>> for Channel<T> {
    fn from(k: KrausChannel<T>) -> Self {
        Channel::Kraus(k)
    }
}

/// Locates the parameter in `[lo, hi]` where the Choi state of `family`
/// stops being PPT, assuming PPT holds at `lo` and fails at `hi`.
pub fn ppt_boundary(
    family: impl Fn(f64) -> Result<KrausChannel<f64>>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    width: f64,
) -> Result<f64> {
    let ppt = |x: f64| -> Result<bool> { Ok(family(x)?.entanglement_breaking(tol).min_eigenvalue >= -tol) };
    if !ppt(lo)? || ppt(hi)? {
        return Err(Error::InvalidParameter(format!(
            "PPT does not change between {lo} and {hi}"
        )));
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ppt(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `|ψ⟩ ↦ (K_1ψ, …, K_rψ)`, the Kraus images of a pure input.
pub(crate) fn kraus_images<T: Real>(map: &CpMap<T>, psi: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
    map.kraus_ops()
        .iter()
        .map(|k| {
            (0..k.rows())
                .map(|o| {
                    (0..k.cols())
                        .map(|i| k[(o, i)] * psi[i])
                        .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_density, random_isometry, seeded_rng, SeededRng};
    use crate::linalg::{partial_trace, partial_transpose};
    use crate::state::maximally_entangled;

    fn rnd(d: usize, rank: usize, rng: &mut SeededRng) -> DensityOperator<f64> {
        DensityOperator::from_hermitian(random_density(d, rank, rng), vec![d]).unwrap()
    }

    /// Stinespring dilation `K_e = (⟨e| ⊗ I) V`.
    fn random_channel(d_in: usize, d_out: usize, env: usize, rng: &mut SeededRng) -> KrausChannel<f64> {
        let v = random_isometry::<f64>(d_in, d_out * env, rng);
        let ops = (0..env)
            .map(|e| Matrix::from_fn(d_out, d_in, |o, i| v[(e * d_out + o, i)]))
            .collect();
        KrausChannel::new(ops).unwrap()
    }

    #[test]
    fn identity_and_replacement_actions() {
        let mut rng = seeded_rng(30);
        let rho = rnd(3, 3, &mut rng);
        let out = identity::<f64>(3).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-14);
        let omega = rnd(2, 2, &mut rng);
        let r = replacement(&omega, 3).unwrap();
        assert!(r.apply(&rho).unwrap().matrix().max_abs_diff(omega.matrix()) < 1e-12);
    }

    #[test]
    fn kraus_and_choi_actions_agree() {
        let mut rng = seeded_rng(31);
        let ch = random_channel(2, 2, 3, &mut rng);
        let rho = rnd(2, 2, &mut rng);
        let direct = ch.apply(&rho).unwrap();
        // N(ρ) = d_in · Tr_in[(ρᵀ ⊗ I) J]
        let j = ch.to_choi();
        let weighted = &kron(&rho.matrix().transpose(), &Matrix::identity(2)) * j.matrix();
        let via_choi = partial_trace(&weighted, &[2, 2], &[1]).unwrap().scale(2.0);
        assert!(direct.matrix().max_abs_diff(&via_choi) < 1e-9);
    }

    #[test]
    fn subsystem_action_matches_embedded_kraus() {
        let mut rng = seeded_rng(32);
        let ch = random_channel(2, 3, 2, &mut rng);
        let rho = DensityOperator::from_hermitian(random_density(8, 8, &mut rng), vec![2, 2, 2]).unwrap();
        let out = ch.apply_on_subsystem(&rho, 1).unwrap();
        assert_eq!(out.dims(), &[2, 3, 2]);
        let mut explicit = Matrix::zeros(12, 12);
        for k in ch.kraus_ops() {
            let big = crate::linalg::kron_all(&[&Matrix::identity(2), k, &Matrix::identity(2)]);
            explicit = &explicit + &big.sandwich(rho.matrix());
        }
        assert!(out.matrix().max_abs_diff(&explicit) < 1e-10);
        let same = identity::<f64>(2).apply_on_subsystem(&rho, 2).unwrap();
        assert!(same.matrix().max_abs_diff(rho.matrix()) < 1e-14);
        assert!(ch.apply_on_subsystem(&rho.reshaped(vec![4, 2]).unwrap(), 0).is_err());
    }

    #[test]
    fn replacement_on_second_factor() {
        let mut rng = seeded_rng(33);
        let rho_ab = DensityOperator::from_hermitian(random_density(4, 4, &mut rng), vec![2, 2]).unwrap();
        let omega = rnd(2, 1, &mut rng);
        let out = replacement(&omega, 2).unwrap().apply_on_subsystem(&rho_ab, 1).unwrap();
        let expected = kron(rho_ab.reduce(&[0]).unwrap().matrix(), omega.matrix());
        assert!(out.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn choi_closed_forms() {
        let j = identity::<f64>(2).to_choi();
        assert!(j.matrix().max_abs_diff(maximally_entangled::<f64>(2).matrix()) < 1e-15);
        let mut rng = seeded_rng(34);
        let omega = rnd(2, 2, &mut rng);
        let j = replacement(&omega, 3).unwrap().to_choi();
        let expected = kron(&Matrix::identity(3).scale(1.0 / 3.0), omega.matrix());
        assert!(j.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn choi_round_trips() {
        let mut rng = seeded_rng(35);
        for (di, dout, env) in [(2, 2, 1), (2, 2, 4), (3, 2, 3), (2, 4, 2)] {
            let ch = random_channel(di, dout, env, &mut rng);
            let c = ChoiMatrix::new(ch.to_choi().operator().clone(), di, dout).unwrap();
            let back = KrausChannel::from_choi(&c).unwrap();
            assert!(back.to_choi().matrix().max_abs_diff(c.matrix()) < 1e-8);
            let rho = rnd(di, di, &mut rng);
            let diff = back
                .apply(&rho)
                .unwrap()
                .matrix()
                .max_abs_diff(ch.apply(&rho).unwrap().matrix());
            assert!(diff < 1e-9);
        }
    }

    #[test]
    fn choi_validation() {
        let bad = Hermitian::<f64>::identity(4).scale(0.5);
        assert!(matches!(ChoiMatrix::new(bad, 2, 2), Err(Error::NotCptp(_))));
        let neg = Hermitian::<f64>::from_diag(&[0.75, -0.25, 0.25, 0.25]);
        assert!(matches!(ChoiMatrix::new(neg, 2, 2), Err(Error::NotCptp(_))));
    }

    #[test]
    fn non_trace_preserving_kraus_rejected() {
        let k = Matrix::<f64>::identity(2).scale(0.9);
        assert!(matches!(KrausChannel::new(vec![k]), Err(Error::NotCptp(_))));
    }

    #[test]
    fn depolarizing_eb_verdicts() {
        let v = |l: f64| depolarizing::<f64>(2, l).unwrap().entanglement_breaking(1e-9).verdict;
        assert_eq!(v(0.2), EbVerdict::EntanglementBreaking);
        assert_eq!(v(0.5), EbVerdict::NotEntanglementBreaking);
        assert_eq!(
            identity::<f64>(2).entanglement_breaking(1e-9).verdict,
            EbVerdict::NotEntanglementBreaking
        );
        assert_eq!(
            depolarizing::<f64>(3, 0.0).unwrap().entanglement_breaking(1e-9).verdict,
            EbVerdict::Inconclusive
        );
    }

    #[test]
    fn depolarizing_boundary_is_one_third() {
        let b = ppt_boundary(|l| depolarizing(2, l), 0.0, 1.0, 0.0, 1e-13).unwrap();
        assert!((b - 1.0 / 3.0).abs() < 1e-9, "{b}");
    }

    #[test]
    fn measure_prepare_examples() {
        let z = Povm::<f64>::computational(2);
        let prep = vec![DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)];
        let mp = MeasurePrepareChannel::new(z, prep).unwrap();
        let mut rng = seeded_rng(36);
        let rho = rnd(2, 2, &mut rng);
        let out = mp.as_kraus().apply(&rho).unwrap();
        let diag = Matrix::from_diag(&[rho.matrix()[(0, 0)].re, rho.matrix()[(1, 1)].re]);
        assert!(out.matrix().max_abs_diff(&diag) < 1e-12);
        assert_eq!(
            Channel::MeasurePrepare(mp).is_entanglement_breaking(1e-9).verdict,
            EbVerdict::EntanglementBreaking
        );

        let omega = rnd(3, 2, &mut rng);
        let trivial = Povm::new(vec![Hermitian::identity(2)]).unwrap();
        let mp = MeasurePrepareChannel::new(trivial, vec![omega.clone()]).unwrap();
        assert!(mp.as_kraus().apply(&rho).unwrap().matrix().max_abs_diff(omega.matrix()) < 1e-12);
    }

    #[test]
    fn random_measure_prepare_matches_definition() {
        let mut rng = seeded_rng(37);
        let gs: Vec<Hermitian<f64>> = (0..3).map(|_| random_density(2, 2, &mut rng)).collect();
        let s = gs[0].add(&gs[1]).add(&gs[2]);
        let s_inv_half = crate::linalg::fractional_power(&s, -0.5).unwrap();
        let povm = Povm::new(gs.iter().map(|g| g.conjugate_by(s_inv_half.matrix())).collect()).unwrap();
        let prep = (0..3).map(|_| rnd(2, 2, &mut rng)).collect();
        let mp = MeasurePrepareChannel::new(povm, prep).unwrap();
        for _ in 0..5 {
            let rho = rnd(2, 2, &mut rng);
            let k = mp.as_kraus().apply(&rho).unwrap();
            assert!(k.matrix().max_abs_diff(&mp.apply_definition(&rho).unwrap()) < 1e-9);
        }
        assert_eq!(
            mp.as_kraus().entanglement_breaking(1e-9).verdict,
            EbVerdict::EntanglementBreaking
        );
    }

    #[test]
    fn tensor_products_factorize() {
        let mut rng = seeded_rng(38);
        let id2 = identity::<f64>(2);
        assert!(
            tensor_channels(&id2, &id2)
                .to_choi()
                .matrix()
                .max_abs_diff(identity::<f64>(4).to_choi().matrix())
                < 1e-15
        );
        let (a, b) = (random_channel(2, 2, 2, &mut rng), random_channel(2, 2, 3, &mut rng));
        let (rho, sigma) = (rnd(2, 2, &mut rng), rnd(2, 2, &mut rng));
        let ab = tensor_channels(&a, &b);
        let lhs = ab.as_map().apply_matrix(rho.tensor(&sigma).matrix()).unwrap();
        let rhs = kron(a.apply(&rho).unwrap().matrix(), b.apply(&sigma).unwrap().matrix());
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);

        let omega = rnd(2, 2, &mut rng);
        let r_id = tensor_channels(&replacement(&omega, 2).unwrap(), &id2);
        let rho_ab = DensityOperator::from_hermitian(random_density(4, 4, &mut rng), vec![2, 2]).unwrap();
        let out = r_id.as_map().apply_matrix(rho_ab.matrix()).unwrap();
        assert!(out.max_abs_diff(&kron(omega.matrix(), rho_ab.reduce(&[1]).unwrap().matrix())) < 1e-12);
    }

    #[test]
    fn adjoint_is_dual_to_the_action() {
        let mut rng = seeded_rng(39);
        let ch = random_channel(2, 3, 2, &mut rng);
        let rho = rnd(2, 2, &mut rng);
        let y = crate::linalg::random::random_hermitian::<f64>(3, &mut rng);
        let lhs = ch.apply(&rho).unwrap().operator().trace_with(&y);
        let rhs = rho.operator().trace_with(&ch.apply_adjoint(&y).unwrap());
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn eb_channels_keep_bell_inputs_ppt() {
        let bell = maximally_entangled::<f64>(2);
        for l in [0.1, 0.3, 0.6, 0.9] {
            let ch = depolarizing::<f64>(2, l).unwrap();
            let out = ch.apply_on_subsystem(&bell, 0).unwrap();
            let pt = partial_transpose(out.matrix(), &[2, 2], &[1]).unwrap();
            let min = Hermitian::from_hermitian_part(&pt).eigh().lambda_min();
            let eb = ch.entanglement_breaking(1e-9).verdict == EbVerdict::EntanglementBreaking;
            assert_eq!(eb, min >= -1e-9);
        }
    }
}
