use crate::error::{bail, Result};
use crate::linalg::{self, CMat, CVec};
use crate::qstate::Bell;
use crate::scalar::{c, cr, czero, fabs, Real, C};

/// `exp(−iπσ_k/2) = −iσ_k`, the rotation by π about axis `k ∈ {1, 2, 3}`.
pub fn pi_rotation<T: Real>(axis: usize) -> CMat<T> {
    &linalg::paulis::<T>()[axis] * c(T::zero(), -T::one())
}

fn input_state<T: Real>(alpha: C<T>, beta: C<T>) -> Result<CVec<T>> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if fabs(norm - T::one()) > T::lit(1e-12).max(T::eps() * T::lit(100.0)) {
        bail!(Validation, "input amplitudes have squared norm {norm}");
    }
    Ok(CVec::from_row_slice(&[alpha, beta]))
}

/// Bell branch of the decomposition, paired with the π-rotation applied to
/// Bob's qubit (`None` = no rotation) and the branch phase that the
/// `exp(−iπσ/2)` convention produces.
fn branches<T: Real>() -> [(Bell, Option<usize>, C<T>); 4] {
    let (o, l) = (T::zero(), T::one());
    [
        (Bell::PsiMinus, None, c(-l, o)),
        (Bell::PsiPlus, Some(3), c(o, -l)),
        (Bell::PhiMinus, Some(1), c(o, l)),
        (Bell::PhiPlus, Some(2), c(l, o)),
    ]
}

fn rotated<T: Real>(psi: &CVec<T>, axis: Option<usize>) -> CVec<T> {
    match axis {
        None => psi.clone(),
        Some(k) => pi_rotation::<T>(k) * psi,
    }
}

/// Norm of the difference between the two sides of
/// `|Ψ⟩₀|Ψ⁻⟩₁₂ = ½ Σ_B |B⟩₀₁ |Ψ̃_B⟩₂` for `|Ψ⟩ = α|0⟩ + β|1⟩`.
///
/// `|Ψ̃⟩` are the π-rotated states `exp(−iπσ_k/2)|Ψ⟩`; each branch carries
/// the fixed, input-independent phase that convention produces, so the
/// comparison is exact as vectors.
pub fn teleport_identity_residual<T: Real>(alpha: C<T>, beta: C<T>) -> Result<T> {
    let psi = input_state(alpha, beta)?;
    let lhs = psi.kronecker(Bell::PsiMinus.state::<T>().amplitudes());
    let half = cr(T::lit(0.5));
    let rhs = branches::<T>().iter().fold(CVec::from_element(8, czero()), |acc, (bell, axis, phase)| {
        acc + bell.state::<T>().amplitudes().kronecker(&rotated(&psi, *axis)) * (*phase * half)
    });
    Ok(linalg::vec_norm(&(lhs - rhs)))
}

/// Phase-insensitive form: for each Bell outcome, `1 − |⟨Ψ̃_B|φ_B⟩|` where
/// `φ_B` is Bob's normalized conditional state. Returns the worst branch.
pub fn teleport_branch_residual<T: Real>(alpha: C<T>, beta: C<T>) -> Result<T> {
    let psi = input_state(alpha, beta)?;
    let lhs = psi.kronecker(Bell::PsiMinus.state::<T>().amplitudes());
    let mut worst = T::zero();
    for (bell, axis, _) in branches::<T>() {
        let bob = bob_conditional(&lhs, bell);
        let norm = linalg::vec_norm(&bob);
        let overlap = linalg::inner(&rotated(&psi, axis), &bob).norm_sqr().sqrt() / norm;
        worst = worst.max(fabs(T::one() - overlap));
    }
    Ok(worst)
}

/// `(⟨B|₀₁ ⊗ 1₂)|Φ⟩` for a 3-qubit vector.
fn bob_conditional<T: Real>(state: &CVec<T>, bell: Bell) -> CVec<T> {
    let b = bell.state::<T>();
    CVec::from_fn(2, |k, _| (0..4).fold(czero(), |acc, ij| acc + b.amplitudes()[ij].conj() * state[2 * ij + k]))
}

/// Result of a full teleportation run.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportRun<T: Real> {
    pub outcome_probabilities: [T; 4],
    /// Worst fidelity `|⟨Ψ|Ψ_Bob⟩|²` over the four outcomes.
    pub min_fidelity: T,
}

/// Bell measurement on qubits 0 and 1, followed by Bob undoing the π
/// rotation announced by the outcome.
pub fn teleport<T: Real>(alpha: C<T>, beta: C<T>) -> Result<TeleportRun<T>> {
    let psi = input_state(alpha, beta)?;
    let state = psi.kronecker(Bell::PsiMinus.state::<T>().amplitudes());
    let mut probs = [T::zero(); 4];
    let mut min_fidelity = T::one();
    for (i, (bell, axis, _)) in branches::<T>().into_iter().enumerate() {
        let bob = bob_conditional(&state, bell);
        let p = linalg::vec_norm(&bob).powi(2);
        probs[i] = p;
        let corrected = match axis {
            None => bob,
            Some(k) => pi_rotation::<T>(k).adjoint() * bob,
        };
        let corrected = &corrected / cr(p.sqrt());
        let fidelity = linalg::inner(&psi, &corrected).norm_sqr();
        min_fidelity = min_fidelity.min(fidelity);
    }
    Ok(TeleportRun { outcome_probabilities: probs, min_fidelity })
}
