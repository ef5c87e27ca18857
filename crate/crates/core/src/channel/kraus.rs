use crate::error::{bail, Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::qstate::{DensityMatrix, PureState, Tolerances};
use crate::scalar::{c, cr, Real};

/// Whether `Σ A†A` must equal the identity or may fall short of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    TracePreserving,
    SubNormalized,
}

/// Quantum instrument: outcome `μ` carries Kraus matrices `A_{μm}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet<T: Real> {
    dim_in: usize,
    dim_out: usize,
    outcomes: Vec<Vec<CMat<T>>>,
    normalization: Normalization,
}

fn completeness_tol<T: Real>() -> T {
    Tolerances::<T>::default().trace
}

impl<T: Real> KrausSet<T> {
    /// Trace-preserving instrument.
    pub fn new(dim_in: usize, dim_out: usize, outcomes: Vec<Vec<CMat<T>>>) -> Result<Self> {
        Self::with_normalization(dim_in, dim_out, outcomes, Normalization::TracePreserving)
    }

    pub fn with_normalization(
        dim_in: usize,
        dim_out: usize,
        outcomes: Vec<Vec<CMat<T>>>,
        normalization: Normalization,
    ) -> Result<Self> {
        if outcomes.is_empty() || outcomes.iter().any(Vec::is_empty) {
            bail!(Validation, "every outcome needs at least one Kraus matrix");
        }
        for (mu, ops) in outcomes.iter().enumerate() {
            for a in ops {
                if a.shape() != (dim_out, dim_in) {
                    bail!(Dimension, "Kraus matrix for outcome {mu} is {:?}, expected ({dim_out}, {dim_in})", a.shape());
                }
            }
        }
        let set = Self { dim_in, dim_out, outcomes, normalization };
        let deficit = linalg::identity::<T>(dim_in) - set.effect_sum();
        let tol = completeness_tol::<T>();
        match normalization {
            Normalization::TracePreserving => {
                if linalg::max_abs(&deficit) > tol {
                    bail!(Validation, "Kraus set is not trace preserving (deviation {})", linalg::max_abs(&deficit));
                }
            }
            Normalization::SubNormalized => {
                if linalg::eigvalsh(&deficit)[0] < -tol {
                    bail!(Validation, "Kraus set exceeds the identity");
                }
            }
        }
        Ok(set)
    }

    /// One Kraus matrix per outcome, equal to the given projector.
    pub fn projective(projectors: Vec<CMat<T>>) -> Result<Self> {
        let dim = projectors.first().map_or(0, |p| p.nrows());
        Self::new(dim, dim, projectors.into_iter().map(|p| vec![p]).collect())
    }

    /// Projective measurement in an orthonormal basis given as vectors.
    pub fn basis_measurement(basis: &[CVec<T>]) -> Result<Self> {
        Self::projective(basis.iter().map(linalg::outer).collect())
    }

    /// Single-outcome unitary channel.
    pub fn unitary(u: CMat<T>) -> Result<Self> {
        if !linalg::is_unitary(&u, completeness_tol::<T>()) {
            bail!(Validation, "matrix is not unitary");
        }
        Self::new(u.ncols(), u.nrows(), vec![vec![u]])
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            outcomes: vec![vec![linalg::identity(dim)]],
            normalization: Normalization::TracePreserving,
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcome(&self, mu: usize) -> &[CMat<T>] {
        &self.outcomes[mu]
    }

    pub fn outcomes(&self) -> &[Vec<CMat<T>>] {
        &self.outcomes
    }

    /// All Kraus matrices regardless of outcome.
    pub fn iter_all(&self) -> impl Iterator<Item = &CMat<T>> {
        self.outcomes.iter().flatten()
    }

    /// `Σ_{μm} A†_{μm} A_{μm}`
    pub fn effect_sum(&self) -> CMat<T> {
        self.iter_all().fold(linalg::zeros(self.dim_in, self.dim_in), |acc, a| acc + a.adjoint() * a)
    }

    /// Unnormalized post-measurement operator `Σ_m A_{μm} M A†_{μm}`.
    pub fn apply_outcome(&self, mu: usize, m: &CMat<T>) -> CMat<T> {
        self.outcomes[mu]
            .iter()
            .fold(linalg::zeros(self.dim_out, self.dim_out), |acc, a| acc + a * m * a.adjoint())
    }

    /// Non-selective map `T'(M) = Σ_μ Σ_m A_{μm} M A†_{μm}`.
    pub fn apply_nonselective(&self, m: &CMat<T>) -> CMat<T> {
        (0..self.num_outcomes())
            .fold(linalg::zeros(self.dim_out, self.dim_out), |acc, mu| acc + self.apply_outcome(mu, m))
    }

    /// Same instrument with every outcome's Kraus list merged into one outcome.
    pub fn coarse_grained(&self) -> Self {
        Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            outcomes: vec![self.iter_all().cloned().collect()],
            normalization: self.normalization,
        }
    }

    /// `A ⊗ 1_other` acting on the first factor.
    pub fn embed_first(&self, other_dim: usize) -> Self {
        let id = linalg::identity::<T>(other_dim);
        self.map_matrices(|a| linalg::kron(a, &id), other_dim)
    }

    /// `1_other ⊗ A` acting on the second factor.
    pub fn embed_second(&self, other_dim: usize) -> Self {
        let id = linalg::identity::<T>(other_dim);
        self.map_matrices(|a| linalg::kron(&id, a), other_dim)
    }

    fn map_matrices(&self, f: impl Fn(&CMat<T>) -> CMat<T>, factor: usize) -> Self {
        Self {
            dim_in: self.dim_in * factor,
            dim_out: self.dim_out * factor,
            outcomes: self.outcomes.iter().map(|ops| ops.iter().map(&f).collect()).collect(),
            normalization: self.normalization,
        }
    }

    /// Sequential composition: `self` first, then `next`; outcome index is
    /// `μ_self · n_next + μ_next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if next.dim_in != self.dim_out {
            bail!(Dimension, "cannot compose {} -> {} with {} -> {}", self.dim_in, self.dim_out, next.dim_in, next.dim_out);
        }
        let mut outcomes = Vec::with_capacity(self.num_outcomes() * next.num_outcomes());
        for first in &self.outcomes {
            for second in &next.outcomes {
                outcomes.push(first.iter().flat_map(|a| second.iter().map(move |b| b * a)).collect());
            }
        }
        let normalization = if self.normalization == Normalization::TracePreserving
            && next.normalization == Normalization::TracePreserving
        {
            Normalization::TracePreserving
        } else {
            Normalization::SubNormalized
        };
        Ok(Self { dim_in: self.dim_in, dim_out: next.dim_out, outcomes, normalization })
    }
}

/// Positive operator valued measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm<T: Real> {
    dim: usize,
    elements: Vec<CMat<T>>,
}

impl<T: Real> Povm<T> {
    pub fn new(elements: Vec<CMat<T>>) -> Result<Self> {
        let dim = elements.first().map_or(0, |e| e.nrows());
        if dim == 0 {
            bail!(Validation, "empty POVM");
        }
        let tol = Tolerances::<T>::default();
        for (mu, e) in elements.iter().enumerate() {
            if e.shape() != (dim, dim) {
                bail!(Dimension, "POVM element {mu} has shape {:?}", e.shape());
            }
            if !linalg::is_hermitian(e, tol.herm) || linalg::eigvalsh(e)[0] < -tol.psd {
                bail!(Validation, "POVM element {mu} is not positive semidefinite");
            }
        }
        let sum = elements.iter().fold(linalg::zeros::<T>(dim, dim), |acc, e| acc + e);
        let dev = linalg::max_abs(&(sum - linalg::identity::<T>(dim)));
        if dev > tol.trace {
            bail!(Validation, "POVM elements do not sum to the identity (deviation {dev})");
        }
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[CMat<T>] {
        &self.elements
    }

    /// Born-rule probabilities `tr(ρ E_μ)`.
    pub fn probabilities(&self, rho: &DensityMatrix<T>) -> Result<Vec<T>> {
        if rho.dim() != self.dim {
            bail!(Dimension, "state dimension {} vs POVM dimension {}", rho.dim(), self.dim);
        }
        Ok(self.elements.iter().map(|e| linalg::trace(&(rho.matrix() * e)).re).collect())
    }
}

/// `E_μ = Σ_m A†_{μm} A_{μm}`.
pub fn povm_of<T: Real>(k: &KrausSet<T>) -> Result<Povm<T>> {
    let elements: Vec<CMat<T>> = k
        .outcomes()
        .iter()
        .map(|ops| ops.iter().fold(linalg::zeros(k.dim_in(), k.dim_in()), |acc, a| acc + a.adjoint() * a))
        .collect();
    match k.normalization() {
        Normalization::TracePreserving => Povm::new(elements),
        // a sub-normalized instrument is completed by its missing effect
        Normalization::SubNormalized => {
            let rest = linalg::identity::<T>(k.dim_in()) - k.effect_sum();
            let mut all = elements;
            all.push(linalg::hermitize(&rest));
            Povm::new(all)
        }
    }
}

/// Result of one measurement outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T: Real> {
    pub probability: T,
    /// Renormalized post-measurement state; `None` when the outcome is
    /// numerically empty (probability below tolerance).
    pub state: Option<DensityMatrix<T>>,
}

/// Applies an instrument: probabilities `p_μ = tr(ρ E_μ)` and renormalized
/// post-measurement states.
pub fn apply<T: Real>(k: &KrausSet<T>, rho: &DensityMatrix<T>) -> Result<Vec<Outcome<T>>> {
    if rho.dim() != k.dim_in() {
        bail!(Dimension, "state dimension {} vs instrument input {}", rho.dim(), k.dim_in());
    }
    let tol = completeness_tol::<T>();
    (0..k.num_outcomes())
        .map(|mu| {
            let unnormalized = k.apply_outcome(mu, rho.matrix());
            let probability = linalg::trace(&unnormalized).re.max(T::zero());
            let state = if probability < tol {
                None
            } else {
                Some(DensityMatrix::from_trusted(unnormalized / cr(probability)))
            };
            Ok(Outcome { probability, state })
        })
        .collect()
}

/// Kraus matrices `(A_{μm})_{σs} = ⟨σ, e_{μm}| U |s, A⟩` of a premeasurement
/// `U` coupling the system (first factor) to an apparatus prepared in
/// `apparatus_init`; `partition[μ]` lists an orthonormal basis `e_{μm}` of
/// the apparatus subspace read out as outcome `μ`.
pub fn kraus_from_unitary<T: Real>(
    u: &CMat<T>,
    apparatus_init: &PureState<T>,
    partition: &[Vec<CVec<T>>],
) -> Result<KrausSet<T>> {
    let d_app = apparatus_init.dim();
    if !u.nrows().is_multiple_of(d_app) || !u.is_square() {
        bail!(Dimension, "unitary of shape {:?} incompatible with apparatus dimension {d_app}", u.shape());
    }
    let d_sys = u.nrows() / d_app;
    let tol = completeness_tol::<T>();
    if !linalg::is_unitary(u, tol) {
        bail!(Validation, "premeasurement matrix is not unitary");
    }
    let vectors: Vec<&CVec<T>> = partition.iter().flatten().collect();
    if vectors.iter().any(|v| v.len() != d_app) {
        bail!(Dimension, "partition vectors must live in the apparatus space of dimension {d_app}");
    }
    if vectors.len() != d_app || partition.iter().any(Vec::is_empty) {
        bail!(Validation, "partition must split the apparatus space into nonempty subspaces spanning it");
    }
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let expected = if i == j { T::one() } else { T::zero() };
            if (linalg::inner(a, b) - cr(expected)).norm_sqr().sqrt() > tol {
                bail!(Validation, "partition vectors are not orthonormal ({i}, {j})");
            }
        }
    }
    let outcomes = partition
        .iter()
        .map(|subspace| {
            subspace
                .iter()
                .map(|e| {
                    CMat::from_fn(d_sys, d_sys, |sigma, s| {
                        let input = linalg::basis::<T>(d_sys, s).kronecker(apparatus_init.amplitudes());
                        let output = linalg::basis::<T>(d_sys, sigma).kronecker(e);
                        linalg::inner(&output, &(u * input))
                    })
                })
                .collect()
        })
        .collect();
    KrausSet::new(d_sys, d_sys, outcomes)
}

/// Depolarizing qubit channel `ρ → (1−p)ρ + p·1/2` in Kraus form.
pub fn depolarizing<T: Real>(p: T) -> Result<KrausSet<T>> {
    if p < T::zero() || p > T::one() {
        bail!(Domain, "depolarizing probability {p} outside [0, 1]");
    }
    let [id, x, y, z] = linalg::paulis::<T>();
    let a0 = cr((T::one() - p * T::lit(0.75)).sqrt());
    let a = cr((p / T::lit(4.0)).sqrt());
    KrausSet::new(2, 2, vec![vec![id * a0, x * a, y * a, z * a]])
}

/// A linear map on matrices, described either by Kraus matrices or by its
/// action on arbitrary matrices.
pub enum LinearMap<'a, T: Real> {
    Kraus(&'a KrausSet<T>),
    Action { dim_in: usize, dim_out: usize, action: &'a dyn Fn(&CMat<T>) -> CMat<T> },
}

impl<T: Real> LinearMap<'_, T> {
    fn dims(&self) -> (usize, usize) {
        match self {
            LinearMap::Kraus(k) => (k.dim_in(), k.dim_out()),
            LinearMap::Action { dim_in, dim_out, .. } => (*dim_in, *dim_out),
        }
    }

    fn eval(&self, m: &CMat<T>) -> CMat<T> {
        match self {
            LinearMap::Kraus(k) => k.apply_nonselective(m),
            LinearMap::Action { action, .. } => action(m),
        }
    }
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` (input factor first).
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix<T: Real> {
    pub matrix: CMat<T>,
    pub dim_in: usize,
    pub dim_out: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpCertificate<T: Real> {
    pub choi: ChoiMatrix<T>,
    pub is_cp: bool,
    /// Smallest eigenvalue of the Choi matrix normalized to unit trace
    /// (divided by `dim_in`).
    pub min_eig: T,
}

fn unit<T: Real>(d: usize, i: usize, j: usize) -> CMat<T> {
    let mut m = linalg::zeros(d, d);
    m[(i, j)] = cr(T::one());
    m
}

/// Builds the Choi matrix of `map` and certifies complete positivity.
pub fn choi_and_cp_check<T: Real>(map: &LinearMap<'_, T>) -> Result<CpCertificate<T>> {
    let (d_in, d_out) = map.dims();
    let tol = Tolerances::<T>::default();
    let mut images = Vec::with_capacity(d_in * d_in);
    for i in 0..d_in {
        for j in 0..d_in {
            let img = map.eval(&unit(d_in, i, j));
            if img.shape() != (d_out, d_out) {
                bail!(Dimension, "map output has shape {:?}, expected ({d_out}, {d_out})", img.shape());
            }
            images.push(img);
        }
    }
    // linearity probe on a complex combination of basis elements
    let scale = c(T::lit(0.3), T::lit(-1.7));
    for i in 0..d_in {
        let j = (i + 1) % d_in;
        let probe = unit::<T>(d_in, i, i) + unit::<T>(d_in, i, j) * scale;
        let expected = &images[i * d_in + i] + &images[i * d_in + j] * scale;
        let dev = linalg::max_abs(&(map.eval(&probe) - &expected));
        if dev > tol.trace * (T::one() + linalg::max_abs(&expected)) {
            bail!(Validation, "map is not linear (deviation {dev})");
        }
    }
    let n = d_in * d_out;
    let mut choi = linalg::zeros::<T>(n, n);
    for i in 0..d_in {
        for j in 0..d_in {
            let img = &images[i * d_in + j];
            for r in 0..d_out {
                for s in 0..d_out {
                    choi[(i * d_out + r, j * d_out + s)] = img[(r, s)];
                }
            }
        }
    }
    let normalized = &choi / cr(T::from_usize(d_in).unwrap());
    let min_eig = linalg::eigvalsh(&normalized)[0];
    Ok(CpCertificate {
        choi: ChoiMatrix { matrix: choi, dim_in: d_in, dim_out: d_out },
        is_cp: min_eig >= -tol.psd,
        min_eig,
    })
}

/// Checks whether two sets of matrices commute pairwise (within `tol`).
pub fn sets_commute<T: Real>(a: &KrausSet<T>, b: &KrausSet<T>, tol: T) -> Result<bool> {
    if a.dim_in() != b.dim_in() || a.dim_in() != a.dim_out() || b.dim_in() != b.dim_out() {
        return Err(Error::Dimension("commutation check needs square sets on one space".into()));
    }
    Ok(a.iter_all().all(|x| b.iter_all().all(|y| linalg::max_abs(&(x * y - y * x)) <= tol)))
}
