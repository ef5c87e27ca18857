//! Density matrices, partial traces and state-level measures.

use crate::error::{bail, Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::scalar::{cr, czero, fabs, Real};

/// Numerical tolerances applied when validating states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub herm: T,
    pub psd: T,
    pub trace: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        let base = T::lit(1e-10).max(T::eps() * T::lit(1e3));
        Self { herm: base, psd: base, trace: base }
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: CMat<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: CMat<T>) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    /// Validates `matrix` against `tol` and stores its Hermitian part.
    pub fn with_tolerances(matrix: CMat<T>, tol: &Tolerances<T>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            bail!(Dimension, "density matrix must be square and non-empty, got {:?}", matrix.shape());
        }
        if !linalg::is_hermitian(&matrix, tol.herm) {
            bail!(Validation, "matrix is not Hermitian within {}", tol.herm);
        }
        let matrix = linalg::hermitize(&matrix);
        let tr = linalg::trace(&matrix).re;
        if fabs(tr - T::one()) > tol.trace {
            bail!(Validation, "trace {tr} differs from 1 by more than {}", tol.trace);
        }
        let min = linalg::eigvalsh(&matrix)[0];
        if min < -tol.psd {
            bail!(Validation, "negative eigenvalue {min} below -{}", tol.psd);
        }
        Ok(Self { matrix })
    }

    /// Normalizes a nonzero PSD matrix to unit trace before validating.
    pub fn normalized(matrix: CMat<T>) -> Result<Self> {
        let tr = linalg::trace(&matrix).re;
        if !(tr > T::zero()) {
            bail!(Validation, "cannot normalize matrix with trace {tr}");
        }
        Self::new(matrix / cr(tr))
    }

    pub(crate) fn from_trusted(matrix: CMat<T>) -> Self {
        Self { matrix: linalg::hermitize(&matrix) }
    }

    pub fn from_pure(state: &PureState<T>) -> Self {
        Self { matrix: linalg::outer(state.amplitudes()) }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: linalg::identity::<T>(dim) / cr(T::from_usize(dim).unwrap()) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat<T> {
        self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { matrix: linalg::kron(&self.matrix, &other.matrix) }
    }

    /// `U ρ U†` for a unitary `U` (not checked).
    pub fn conjugate_by(&self, u: &CMat<T>) -> Self {
        Self::from_trusted(u * &self.matrix * u.adjoint())
    }

    pub fn purity(&self) -> T {
        linalg::trace(&(&self.matrix * &self.matrix)).re
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    amplitudes: CVec<T>,
}

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: CVec<T>) -> Result<Self> {
        let norm = linalg::vec_norm(&amplitudes);
        if amplitudes.is_empty() || fabs(norm * norm - T::one()) > Tolerances::<T>::default().trace {
            bail!(Validation, "state vector has squared norm {}", norm * norm);
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalize(amplitudes: CVec<T>) -> Result<Self> {
        let norm = linalg::vec_norm(&amplitudes);
        if !(norm > T::zero()) {
            bail!(Validation, "cannot normalize the zero vector");
        }
        Ok(Self { amplitudes: amplitudes / cr(norm) })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        Self { amplitudes: linalg::basis(dim, index) }
    }

    /// Product basis state `|i₁ i₂ …⟩` for qubits.
    pub fn qubits(bits: &[usize]) -> Self {
        let index = bits.iter().fold(0, |acc, &b| acc * 2 + b);
        Self::basis(1 << bits.len(), index)
    }

    pub fn amplitudes(&self) -> &CVec<T> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_pure(self)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { amplitudes: self.amplitudes.kronecker(&other.amplitudes) }
    }
}

/// The four two-qubit Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];

    pub fn state<T: Real>(self) -> PureState<T> {
        let h = cr(T::lit(std::f64::consts::FRAC_1_SQRT_2));
        let z = czero();
        let amps = match self {
            Bell::PhiPlus => [h, z, z, h],
            Bell::PhiMinus => [h, z, z, -h],
            Bell::PsiPlus => [z, h, h, z],
            Bell::PsiMinus => [z, h, -h, z],
        };
        PureState { amplitudes: CVec::from_row_slice(&amps) }
    }
}

/// Tensor-factor layout of a composite space and the factors to keep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemSplit {
    dims: Vec<usize>,
    keep: Vec<usize>,
}

impl SubsystemSplit {
    pub fn new(dims: Vec<usize>, keep: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            bail!(Dimension, "factor dimensions must be positive: {dims:?}");
        }
        let mut sorted = keep.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() || sorted.last().is_some_and(|&k| k >= dims.len()) {
            bail!(Dimension, "invalid kept factors {keep:?} for {} factors", dims.len());
        }
        Ok(Self { dims, keep: sorted })
    }

    /// Two factors, keeping the first or second.
    pub fn bipartite(d_a: usize, d_b: usize, keep_first: bool) -> Self {
        Self { dims: vec![d_a, d_b], keep: vec![if keep_first { 0 } else { 1 }] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn kept_dim(&self) -> usize {
        self.keep.iter().map(|&k| self.dims[k]).product()
    }
}

/// Partial trace of an arbitrary (not necessarily normalized) square matrix.
pub fn partial_trace_matrix<T: Real>(m: &CMat<T>, split: &SubsystemSplit) -> Result<CMat<T>> {
    let total = split.total_dim();
    if m.nrows() != total || m.ncols() != total {
        bail!(Dimension, "matrix is {:?} but split has total dimension {total}", m.shape());
    }
    let dims = split.dims();
    let kept_mask: Vec<bool> = (0..dims.len()).map(|f| split.keep().contains(&f)).collect();
    // (kept index, traced index) for every composite index
    let decompose = |mut idx: usize| {
        let (mut kept, mut traced, mut kept_stride, mut traced_stride) = (0, 0, 1, 1);
        for f in (0..dims.len()).rev() {
            let digit = idx % dims[f];
            idx /= dims[f];
            if kept_mask[f] {
                kept += digit * kept_stride;
                kept_stride *= dims[f];
            } else {
                traced += digit * traced_stride;
                traced_stride *= dims[f];
            }
        }
        (kept, traced)
    };
    let parts: Vec<(usize, usize)> = (0..total).map(decompose).collect();
    let kd = split.kept_dim();
    let mut out = linalg::zeros::<T>(kd, kd);
    for r in 0..total {
        for s in 0..total {
            if parts[r].1 == parts[s].1 {
                out[(parts[r].0, parts[s].0)] += m[(r, s)];
            }
        }
    }
    Ok(out)
}

/// Reduced density matrix of the kept factors.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, split: &SubsystemSplit) -> Result<DensityMatrix<T>> {
    Ok(DensityMatrix::from_trusted(partial_trace_matrix(rho.matrix(), split)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

/// `S = −tr ρ log ρ`. Eigenvalues within `tol_psd` of zero contribute nothing.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>, base: LogBase) -> Result<T> {
    entropy_of_spectrum(&rho.eigenvalues(), base, Tolerances::<T>::default().psd)
}

/// Shannon/von Neumann entropy of a spectrum or probability vector.
pub fn entropy_of_spectrum<T: Real>(values: &[T], base: LogBase, tol_psd: T) -> Result<T> {
    let mut s = T::zero();
    for &lambda in values {
        if lambda < -tol_psd {
            bail!(Validation, "negative eigenvalue {lambda} in entropy");
        }
        if lambda > tol_psd {
            s -= lambda * lambda.ln();
        }
    }
    // eigenvalues a rounding step above 1 would give a tiny negative sum
    let s = s.max(T::zero());
    Ok(match base {
        LogBase::E => s,
        LogBase::Two => s / T::ln_2(),
    })
}

fn same_dim<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("states of dimension {} and {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// Trace distance `½ tr|ρ₁ − ρ₂|`.
pub fn trace_distance<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> Result<T> {
    same_dim(rho1, rho2)?;
    Ok(linalg::trace_norm(&(rho1.matrix() - rho2.matrix())) * T::lit(0.5))
}

/// Minimum error probability for distinguishing two equiprobable states,
/// `P_E = ½ − ¼ tr|ρ₁ − ρ₂|` (Helstrom).
///
/// The sign in front of the trace norm is the one for which orthogonal
/// states give `P_E = 0` and identical states give `½`.
pub fn error_probability<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> Result<T> {
    let d = trace_distance(rho1, rho2)?;
    Ok((T::lit(0.5) - d * T::lit(0.5)).max(T::zero()))
}

/// The Helstrom measurement: projector onto the positive part of `ρ₁ − ρ₂`
/// (outcome "first state") and its complement.
pub fn helstrom_measurement<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> Result<[CMat<T>; 2]> {
    same_dim(rho1, rho2)?;
    let p = linalg::positive_part_projector(&(rho1.matrix() - rho2.matrix()));
    let q = linalg::identity::<T>(rho1.dim()) - &p;
    Ok([p, q])
}

fn sigma_yy<T: Real>() -> CMat<T> {
    let y = &linalg::paulis::<T>()[2];
    linalg::kron(y, y)
}

/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn spin_flip<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    if rho.dim() != 4 {
        bail!(Dimension, "spin flip needs a two-qubit state, got dimension {}", rho.dim());
    }
    let yy = sigma_yy::<T>();
    Ok(DensityMatrix::from_trusted(&yy * rho.matrix().conjugate() * &yy))
}

/// Two-qubit concurrence `max(0, λ₁−λ₂−λ₃−λ₄)` with `λᵢ` the decreasing
/// eigenvalues of `[√ρ ρ̃ √ρ]^{1/2}`.
///
/// `√ρ ρ̃ √ρ = AA†` with `A = √ρ (σ_y⊗σ_y) √ρ*`, so the `λᵢ` are taken as
/// singular values of `A`; squaring and rooting eigenvalues instead would
/// lose half the digits for rank-deficient states.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 4 {
        bail!(Dimension, "concurrence needs a two-qubit state, got dimension {}", rho.dim());
    }
    let tol = Tolerances::<T>::default().psd;
    let root = linalg::psd_sqrt(rho.matrix(), tol)?;
    let a = &root * sigma_yy::<T>() * root.conjugate();
    let Some(svd) = a.try_svd(false, false, T::eps(), 0) else {
        bail!(Numerical, "SVD did not converge in concurrence");
    };
    let mut lambdas: Vec<T> = svd.singular_values.iter().copied().collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(T::zero()).min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_state, haar_unitary, random_density_matrix, rng_from_seed, trial_rng};
    use crate::scalar::c;
    use nalgebra::SVD;

    fn werner(p: f64) -> DensityMatrix<f64> {
        let phi = Bell::PhiPlus.state::<f64>().density().into_matrix();
        DensityMatrix::new(phi * cr(p) + linalg::identity::<f64>(4) * cr((1.0 - p) / 4.0)).unwrap()
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let rho = Bell::PhiPlus.state::<f64>().density();
        let r = partial_trace(&rho, &SubsystemSplit::bipartite(2, 2, true)).unwrap();
        assert!(linalg::max_abs(&(r.matrix() - DensityMatrix::<f64>::maximally_mixed(2).matrix())) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = PureState::<f64>::qubits(&[0, 1]).density();
        let r = partial_trace(&rho, &SubsystemSplit::bipartite(2, 2, true)).unwrap();
        assert!(linalg::max_abs(&(r.matrix() - PureState::<f64>::basis(2, 0).density().matrix())) < 1e-15);
        let b = partial_trace(&rho, &SubsystemSplit::bipartite(2, 2, false)).unwrap();
        assert!((b.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_matches_schmidt_coefficients() {
        // oracle: singular values of the 3x2 coefficient matrix
        let mut rng = rng_from_seed(42);
        for _ in 0..20 {
            let psi = PureState::new(haar_state::<f64, _>(6, &mut rng)).unwrap();
            let coeffs = CMat::<f64>::from_fn(3, 2, |i, j| psi.amplitudes()[2 * i + j]);
            let mut schmidt: Vec<f64> = SVD::new(coeffs, false, false).singular_values.iter().map(|s| s * s).collect();
            schmidt.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let marginal = partial_trace(&psi.density(), &SubsystemSplit::new(vec![3, 2], vec![0]).unwrap()).unwrap();
            let eig = marginal.eigenvalues();
            assert!(eig[0].abs() < 1e-12);
            assert!((eig[1] - schmidt[0]).abs() < 1e-12);
            assert!((eig[2] - schmidt[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_three_factors_middle() {
        let a = PureState::<f64>::basis(2, 1);
        let b = PureState::<f64>::basis(3, 2);
        let cst = PureState::<f64>::basis(2, 0);
        let rho = a.tensor(&b).tensor(&cst).density();
        let r = partial_trace(&rho, &SubsystemSplit::new(vec![2, 3, 2], vec![1]).unwrap()).unwrap();
        assert!((r.matrix()[(2, 2)].re - 1.0).abs() < 1e-15);
        let r = partial_trace(&rho, &SubsystemSplit::new(vec![2, 3, 2], vec![0, 2]).unwrap()).unwrap();
        assert!((r.matrix()[(2, 2)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let rho = DensityMatrix::<f64>::maximally_mixed(4);
        assert!(matches!(
            partial_trace(&rho, &SubsystemSplit::bipartite(2, 3, true)),
            Err(Error::Dimension(_))
        ));
        assert!(SubsystemSplit::new(vec![2, 2], vec![2]).is_err());
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity() {
        for trial in 0..1000 {
            let mut rng = trial_rng(2024, trial);
            let rho = DensityMatrix::new(random_density_matrix::<f64, _>(6, &mut rng)).unwrap();
            let keep_first = trial % 2 == 0;
            let r = partial_trace(&rho, &SubsystemSplit::bipartite(2, 3, keep_first)).unwrap();
            assert!((linalg::trace(r.matrix()).re - 1.0).abs() < 1e-12);
            assert!(r.eigenvalues()[0] > -1e-12);
        }
    }

    #[test]
    fn entropy_values() {
        assert!(von_neumann_entropy(&Bell::PsiMinus.state::<f64>().density(), LogBase::E).unwrap().abs() < 1e-12);
        let mixed = DensityMatrix::<f64>::maximally_mixed(2);
        assert!((von_neumann_entropy(&mixed, LogBase::E).unwrap() - 2f64.ln()).abs() < 1e-14);
        let d = DensityMatrix::new(linalg::from_real_rows::<f64>(2, 2, &[0.25, 0.0, 0.0, 0.75])).unwrap();
        let expected = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        let s = von_neumann_entropy(&d, LogBase::Two).unwrap();
        assert!((s - expected).abs() < 1e-14);
        assert!((s - 0.811_278_124_459_132_8).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_additive() {
        let mut rng = rng_from_seed(5);
        for _ in 0..50 {
            let a = DensityMatrix::new(random_density_matrix::<f64, _>(2, &mut rng)).unwrap();
            let b = DensityMatrix::new(random_density_matrix::<f64, _>(3, &mut rng)).unwrap();
            let s_ab = von_neumann_entropy(&a.tensor(&b), LogBase::E).unwrap();
            let s = von_neumann_entropy(&a, LogBase::E).unwrap() + von_neumann_entropy(&b, LogBase::E).unwrap();
            assert!((s_ab - s).abs() < 1e-10);
        }
    }

    #[test]
    fn entropy_bounded_by_log_dim() {
        let mut rng = rng_from_seed(8);
        for _ in 0..50 {
            let a = DensityMatrix::new(random_density_matrix::<f64, _>(5, &mut rng)).unwrap();
            assert!(von_neumann_entropy(&a, LogBase::E).unwrap() <= 5f64.ln() + 1e-12);
        }
    }

    #[test]
    fn error_probability_limits() {
        let zero = PureState::<f64>::basis(2, 0).density();
        let one = PureState::<f64>::basis(2, 1).density();
        let mixed = DensityMatrix::<f64>::maximally_mixed(2);
        assert!((error_probability(&zero, &zero).unwrap() - 0.5).abs() < 1e-15);
        assert!(error_probability(&zero, &one).unwrap().abs() < 1e-15);
        // ρ₁ − ρ₂ = diag(½, −½)
        assert!((error_probability(&zero, &mixed).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(error_probability(&zero, &DensityMatrix::maximally_mixed(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn error_probability_symmetric_and_bounded() {
        for trial in 0..200 {
            let mut rng = trial_rng(99, trial);
            let a = DensityMatrix::new(random_density_matrix::<f64, _>(3, &mut rng)).unwrap();
            let b = DensityMatrix::new(random_density_matrix::<f64, _>(3, &mut rng)).unwrap();
            let p = error_probability(&a, &b).unwrap();
            assert!((p - error_probability(&b, &a).unwrap()).abs() < 1e-14);
            assert!((0.0..=0.5).contains(&p));
        }
    }

    #[test]
    fn helstrom_measurement_attains_bound() {
        let mut rng = rng_from_seed(17);
        let a = DensityMatrix::new(random_density_matrix::<f64, _>(3, &mut rng)).unwrap();
        let b = DensityMatrix::new(random_density_matrix::<f64, _>(3, &mut rng)).unwrap();
        let [p, q] = helstrom_measurement(&a, &b).unwrap();
        let success = 0.5 * (linalg::trace(&(&p * a.matrix())).re + linalg::trace(&(&q * b.matrix())).re);
        assert!((1.0 - success - error_probability(&a, &b).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn spin_flip_examples() {
        let mixed = DensityMatrix::<f64>::maximally_mixed(4);
        assert!(linalg::max_abs(&(spin_flip(&mixed).unwrap().matrix() - mixed.matrix())) < 1e-15);
        let phi = Bell::PhiPlus.state::<f64>().density();
        assert!(linalg::max_abs(&(spin_flip(&phi).unwrap().matrix() - phi.matrix())) < 1e-15);
        let flipped = spin_flip(&PureState::<f64>::qubits(&[0, 1]).density()).unwrap();
        assert!(linalg::max_abs(&(flipped.matrix() - PureState::<f64>::qubits(&[1, 0]).density().matrix())) < 1e-15);
        assert!(spin_flip(&DensityMatrix::<f64>::maximally_mixed(2)).is_err());
    }

    #[test]
    fn spin_flip_is_involution() {
        let mut rng = rng_from_seed(1);
        for _ in 0..100 {
            let rho = DensityMatrix::new(random_density_matrix::<f64, _>(4, &mut rng)).unwrap();
            let twice = spin_flip(&spin_flip(&rho).unwrap()).unwrap();
            assert!(linalg::max_abs(&(twice.matrix() - rho.matrix())) < 1e-14);
        }
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&Bell::PhiPlus.state::<f64>().density()).unwrap() - 1.0).abs() < 1e-7);
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let a = PureState::new(haar_state::<f64, _>(2, &mut rng)).unwrap();
            let b = PureState::new(haar_state::<f64, _>(2, &mut rng)).unwrap();
            assert!(concurrence(&a.tensor(&b).density()).unwrap() < 1e-6);
        }
    }

    #[test]
    fn concurrence_of_werner_state() {
        // oracle: closed form max(0, (3p-1)/2) for the Werner family
        for &p in &[0.0, 0.2, 1.0 / 3.0 + 0.01, 0.5, 0.8, 1.0] {
            let expected = f64::max(0.0, (3.0 * p - 1.0) / 2.0);
            let got = concurrence(&werner(p)).unwrap();
            assert!((got - expected).abs() < 1e-7, "p = {p}: {got} vs {expected}");
        }
        assert!((concurrence(&werner(0.8)).unwrap() - 0.7).abs() < 1e-9);
    }

    #[test]
    fn concurrence_invariant_under_local_unitaries() {
        for trial in 0..100 {
            let mut rng = trial_rng(77, trial);
            let rho = DensityMatrix::new(random_density_matrix::<f64, _>(4, &mut rng)).unwrap();
            let u = linalg::kron(&haar_unitary::<f64, _>(2, &mut rng), &haar_unitary::<f64, _>(2, &mut rng));
            let a = concurrence(&rho).unwrap();
            let b = concurrence(&rho.conjugate_by(&u)).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn density_validation_errors() {
        let bad: CMat<f64> = linalg::from_real_rows(2, 2, &[1.5, 0.0, 0.0, -0.5]);
        assert!(matches!(DensityMatrix::new(bad), Err(Error::Validation(_))));
        let non_herm: CMat<f64> = linalg::from_rows(2, 2, &[(0.5, 0.0), (0.1, 0.0), (0.0, 0.0), (0.5, 0.0)]);
        assert!(DensityMatrix::new(non_herm).is_err());
        assert!(PureState::new(CVec::<f64>::from_row_slice(&[c(1.0, 0.0), c(1.0, 0.0)])).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let rho = Bell::PhiPlus.state::<f32>().density();
        let r = partial_trace(&rho, &SubsystemSplit::bipartite(2, 2, true)).unwrap();
        assert!((von_neumann_entropy(&r, LogBase::Two).unwrap() - 1.0).abs() < 1e-5);
        assert!((concurrence(&rho).unwrap() - 1.0).abs() < 1e-2);
    }
}
