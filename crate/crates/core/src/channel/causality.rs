use serde::Serialize;

use super::kraus::{sets_commute, KrausSet, Povm};
use crate::error::{bail, Result};
use crate::linalg::{self, CMat, CVec};
use crate::qstate::{self, error_probability, Bell, DensityMatrix, PureState, SubsystemSplit};
use crate::random::{haar_state, haar_unitary, random_density_matrix, trial_rng};
use crate::scalar::{cr, Real};

/// Outcome of a no-signalling check between two local instruments.
#[derive(Debug, Clone, PartialEq)]
pub struct NoSignallingReport<T> {
    /// Largest total-variation distance between Bob's outcome distributions
    /// with and without Alice's operation.
    pub max_marginal_shift: T,
    /// Whether the embedded Kraus sets commute pairwise.
    pub commuting: bool,
    pub states_tested: usize,
}

fn bob_distribution<T: Real>(bob: &KrausSet<T>, rho: &CMat<T>) -> Vec<T> {
    (0..bob.num_outcomes()).map(|nu| linalg::trace(&bob.apply_outcome(nu, rho)).re).collect()
}

fn total_variation<T: Real>(p: &[T], q: &[T]) -> T {
    p.iter().zip(q).fold(T::zero(), |acc, (&a, &b)| acc + crate::scalar::fabs(a - b)) * T::lit(0.5)
}

/// Bob's outcome statistics with Alice's (non-selective) operation applied
/// first versus not at all, for local instruments `a` on A and `b` on B
/// embedded as `A⊗1` and `1⊗B`.
pub fn verify_no_signalling<T: Real>(
    a: &KrausSet<T>,
    b: &KrausSet<T>,
    states: &[DensityMatrix<T>],
) -> Result<NoSignallingReport<T>> {
    if a.dim_in() != a.dim_out() || b.dim_in() != b.dim_out() {
        bail!(Dimension, "no-signalling check expects instruments that keep their dimension");
    }
    let (d_a, d_b) = (a.dim_in(), b.dim_in());
    let alice = a.embed_first(d_b);
    let bob = b.embed_second(d_a);
    let tol = crate::qstate::Tolerances::<T>::default().trace;
    let commuting = sets_commute(&alice, &bob, tol)?;
    let mut max_shift = T::zero();
    for rho in states {
        if rho.dim() != d_a * d_b {
            bail!(Dimension, "state dimension {} vs {}x{}", rho.dim(), d_a, d_b);
        }
        let without = bob_distribution(&bob, rho.matrix());
        let with = bob_distribution(&bob, &alice.apply_nonselective(rho.matrix()));
        max_shift = max_shift.max(total_variation(&without, &with));
    }
    Ok(NoSignallingReport { max_marginal_shift: max_shift, commuting, states_tested: states.len() })
}

/// [`verify_no_signalling`] over `trials` seeded random bipartite states.
pub fn verify_no_signalling_sampled<T: Real>(
    a: &KrausSet<T>,
    b: &KrausSet<T>,
    trials: usize,
    seed: u64,
) -> Result<NoSignallingReport<T>> {
    let dim = a.dim_in() * b.dim_in();
    let states: Vec<DensityMatrix<T>> = (0..trials as u64)
        .map(|t| DensityMatrix::from_trusted(random_density_matrix(dim, &mut trial_rng(seed, t))))
        .collect();
    verify_no_signalling(a, b, &states)
}

/// A bipartite operation `T_μ` on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperation<T: Real> {
    pub id: String,
    pub d_a: usize,
    pub d_b: usize,
    pub instrument: KrausSet<T>,
}

impl<T: Real> BipartiteOperation<T> {
    pub fn new(id: impl Into<String>, d_a: usize, d_b: usize, instrument: KrausSet<T>) -> Result<Self> {
        if instrument.dim_in() != d_a * d_b || instrument.dim_out() != d_a * d_b {
            bail!(Dimension, "instrument acts on {} -> {}, expected {}", instrument.dim_in(), instrument.dim_out(), d_a * d_b);
        }
        if instrument.normalization() != super::Normalization::TracePreserving {
            bail!(Validation, "semicausality is defined for trace-preserving operations");
        }
        Ok(Self { id: id.into(), d_a, d_b, instrument })
    }

    /// Four-outcome projective measurement in the Bell basis.
    pub fn complete_bell_measurement() -> Self {
        let projectors = Bell::ALL.iter().map(|b| b.state::<T>().density().into_matrix()).collect();
        Self::new("complete-bell", 2, 2, KrausSet::projective(projectors).expect("Bell basis is complete"))
            .expect("two qubits")
    }

    /// Two-outcome PVM `{|Φ+⟩⟨Φ+|, 1 − |Φ+⟩⟨Φ+|}`.
    pub fn incomplete_bell_measurement() -> Self {
        let e1 = Bell::PhiPlus.state::<T>().density().into_matrix();
        let e2 = linalg::identity::<T>(4) - &e1;
        Self::new("incomplete-bell", 2, 2, KrausSet::projective(vec![e1, e2]).expect("complete PVM"))
            .expect("two qubits")
    }

    /// PVM on the product basis `|0⟩|0⟩, |0⟩|1⟩, |1⟩|+⟩, |1⟩|−⟩`, where Bob's
    /// basis depends on Alice's.
    pub fn conditional_basis_pvm() -> Self {
        let projectors = conditional_basis_states::<T>().iter().map(linalg::outer).collect();
        Self::new("conditional-basis-pvm", 2, 2, KrausSet::projective(projectors).expect("complete PVM"))
            .expect("two qubits")
    }

    /// Reduced state of the receiving party after the non-selective operation.
    pub fn receiver_marginal(&self, rho: &CMat<T>, receiver: Party) -> Result<DensityMatrix<T>> {
        let out = self.instrument.apply_nonselective(rho);
        let split = SubsystemSplit::bipartite(self.d_a, self.d_b, receiver == Party::Alice);
        Ok(DensityMatrix::from_trusted(qstate::partial_trace_matrix(&out, &split)?))
    }

    /// Optimal probability with which the receiver tells apart the two inputs
    /// from their post-operation marginals: `1 − P_E`.
    pub fn distinguishing_probability(
        &self,
        receiver: Party,
        rho1: &DensityMatrix<T>,
        rho2: &DensityMatrix<T>,
    ) -> Result<T> {
        let m1 = self.receiver_marginal(rho1.matrix(), receiver)?;
        let m2 = self.receiver_marginal(rho2.matrix(), receiver)?;
        Ok(T::one() - error_probability(&m1, &m2)?)
    }
}

/// `|0⟩|0⟩, |0⟩|1⟩, |1⟩|+⟩, |1⟩|−⟩` in that order.
pub fn conditional_basis_states<T: Real>() -> Vec<CVec<T>> {
    let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let zero = linalg::basis::<T>(2, 0);
    let one = linalg::basis::<T>(2, 1);
    let plus = (&zero + &one) * cr(h);
    let minus = (&zero - &one) * cr(h);
    vec![zero.kronecker(&zero), zero.kronecker(&one), one.kronecker(&plus), one.kronecker(&minus)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Self {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

/// Signalling direction tested by [`is_semicausal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Bob acts first; does Alice's marginal change?
    #[serde(rename = "B->A")]
    BToA,
    #[serde(rename = "A->B")]
    AToB,
}

impl Direction {
    pub fn sender(self) -> Party {
        match self {
            Direction::BToA => Party::Bob,
            Direction::AToB => Party::Alice,
        }
    }

    pub fn receiver(self) -> Party {
        self.sender().other()
    }
}

/// Which pre-operations and input states to probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Number of Haar-random sender unitaries and random inputs.
    pub haar_draws: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { haar_draws: 200, seed: 0x5eed }
    }
}

/// Concrete signalling witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T: Real> {
    pub pre_op_label: String,
    pub pre_op: CMat<T>,
    pub input_label: String,
    pub input: DensityMatrix<T>,
    /// Receiver's optimal measurement (projector onto "no pre-operation").
    pub measurement: CMat<T>,
    /// Optimal distinguishing probability `1 − P_E`.
    pub advantage: T,
    /// Trace distance between the receiver's two marginals.
    pub shift: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemicausalVerdict<T: Real> {
    /// `true` means no witness was found among the probes, not a proof.
    pub semicausal: bool,
    pub max_shift: T,
    pub witness: Option<Witness<T>>,
    pub probes: usize,
}

/// JSON shape of a witness report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub operation_id: String,
    pub direction: Direction,
    pub witness_pre_op: Option<String>,
    pub advantage: f64,
    pub tolerance: f64,
}

impl<T: Real> SemicausalVerdict<T> {
    pub fn report(&self, op: &BipartiteOperation<T>, direction: Direction, tol: T) -> WitnessReport {
        WitnessReport {
            operation_id: op.id.clone(),
            direction,
            witness_pre_op: self.witness.as_ref().map(|w| format!("{} on input {}", w.pre_op_label, w.input_label)),
            advantage: self.witness.as_ref().map_or(0.5, |w| w.advantage.to_f64_lossy()),
            tolerance: tol.to_f64_lossy(),
        }
    }
}

/// Generalized Pauli (Weyl) operators `X^a Z^b` on `C^d` plus the basis swap `|0⟩↔|1⟩`.
fn fixed_pre_ops<T: Real>(d: usize) -> Vec<(String, CMat<T>)> {
    let omega = T::two_pi() / T::from_usize(d).unwrap();
    let shift = CMat::<T>::from_fn(d, d, |r, col| cr(if r == (col + 1) % d { T::one() } else { T::zero() }));
    let clock = CMat::<T>::from_fn(d, d, |r, col| {
        if r == col {
            crate::scalar::cis(omega * T::from_usize(r).unwrap())
        } else {
            crate::scalar::czero()
        }
    });
    let mut ops = Vec::new();
    let names = ["1", "X", "Y", "Z"];
    if d == 2 {
        for (name, p) in names.iter().zip(linalg::paulis::<T>()).skip(1) {
            ops.push((format!("pauli-{name}"), p));
        }
    } else {
        for a in 0..d {
            for b in 0..d {
                if a + b == 0 {
                    continue;
                }
                let op = shift.pow(a as u32) * clock.pow(b as u32);
                ops.push((format!("weyl-X{a}Z{b}"), op));
            }
        }
        let mut swap = linalg::identity::<T>(d);
        swap.swap_rows(0, 1);
        ops.push(("swap-0-1".into(), swap));
    }
    ops
}

fn fixed_inputs<T: Real>(d_a: usize, d_b: usize) -> Vec<(String, DensityMatrix<T>)> {
    let mut inputs = Vec::new();
    for i in 0..d_a {
        for j in 0..d_b {
            let state = PureState::<T>::basis(d_a, i).tensor(&PureState::basis(d_b, j));
            inputs.push((format!("|{i}{j}>"), state.density()));
        }
    }
    if d_a == 2 && d_b == 2 {
        for (b, name) in Bell::ALL.iter().zip(["Phi+", "Phi-", "Psi+", "Psi-"]) {
            inputs.push((name.to_string(), b.state::<T>().density()));
        }
    }
    inputs
}

/// Probes whether the sender's local pre-operations can change the receiver's
/// marginal of `T'(ρ) = Σ_μ T_μ(ρ)`.
///
/// The fixed adversarial family (Pauli/Weyl unitaries on the sender against
/// product-basis and Bell inputs) is tried first and its strongest witness
/// is reported; Haar-random sender unitaries on random inputs are tried only
/// if the fixed family finds nothing.
pub fn is_semicausal<T: Real>(
    op: &BipartiteOperation<T>,
    direction: Direction,
    probes: &ProbeConfig,
    tol: T,
) -> Result<SemicausalVerdict<T>> {
    let (d_a, d_b) = (op.d_a, op.d_b);
    let sender_dim = match direction.sender() {
        Party::Alice => d_a,
        Party::Bob => d_b,
    };
    let embed = |u: &CMat<T>| match direction.sender() {
        Party::Alice => linalg::kron(u, &linalg::identity(d_b)),
        Party::Bob => linalg::kron(&linalg::identity(d_a), u),
    };
    let receiver = direction.receiver();
    let mut max_shift = T::zero();
    let mut probes_run = 0;

    let mut evaluate = |pre_label: &str, u: &CMat<T>, in_label: &str, rho: &DensityMatrix<T>| -> Result<Option<Witness<T>>> {
        let full = embed(u);
        let moved = DensityMatrix::from_trusted(&full * rho.matrix() * full.adjoint());
        let m0 = op.receiver_marginal(rho.matrix(), receiver)?;
        let m1 = op.receiver_marginal(moved.matrix(), receiver)?;
        let shift = qstate::trace_distance(&m0, &m1)?;
        probes_run += 1;
        max_shift = max_shift.max(shift);
        if shift <= tol {
            return Ok(None);
        }
        let [measurement, _] = qstate::helstrom_measurement(&m0, &m1)?;
        Ok(Some(Witness {
            pre_op_label: pre_label.to_string(),
            pre_op: u.clone(),
            input_label: in_label.to_string(),
            input: rho.clone(),
            measurement,
            advantage: T::one() - error_probability(&m0, &m1)?,
            shift,
        }))
    };

    let better = |best: Option<Witness<T>>, cand: Option<Witness<T>>| match (best, cand) {
        (Some(b), Some(c)) => Some(if c.advantage > b.advantage { c } else { b }),
        (b, c) => b.or(c),
    };

    let mut best = None;
    for (in_label, rho) in fixed_inputs::<T>(d_a, d_b) {
        for (pre_label, u) in fixed_pre_ops::<T>(sender_dim) {
            let w = evaluate(&pre_label, &u, &in_label, &rho)?;
            best = better(best, w);
        }
    }
    let mut sampled = None;
    for draw in 0..probes.haar_draws as u64 {
        let mut rng = trial_rng(probes.seed, draw);
        let u = haar_unitary::<T, _>(sender_dim, &mut rng);
        let rho = if draw % 2 == 0 {
            DensityMatrix::from_trusted(linalg::outer(&haar_state::<T, _>(d_a * d_b, &mut rng)))
        } else {
            DensityMatrix::from_trusted(random_density_matrix(d_a * d_b, &mut rng))
        };
        let w = evaluate(&format!("haar-{draw}"), &u, &format!("random-{draw}"), &rho)?;
        sampled = better(sampled, w);
    }
    let witness = best.or(sampled);
    Ok(SemicausalVerdict { semicausal: witness.is_none(), max_shift, witness, probes: probes_run })
}

/// Measurement statistics of a POVM applied to the receiver's marginal.
pub fn receiver_statistics<T: Real>(
    op: &BipartiteOperation<T>,
    receiver: Party,
    povm: &Povm<T>,
    rho: &DensityMatrix<T>,
) -> Result<Vec<T>> {
    povm.probabilities(&op.receiver_marginal(rho.matrix(), receiver)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, rng_from_seed};

    fn random_local_instrument(d: usize, seed: u64) -> KrausSet<f64> {
        // two-outcome instrument from a random isometry split
        let mut rng = rng_from_seed(seed);
        let u: CMat<f64> = haar_unitary(2 * d, &mut rng);
        let a0 = u.view((0, 0), (d, d)).into_owned();
        let a1 = u.view((d, 0), (d, d)).into_owned();
        KrausSet::new(d, d, vec![vec![a0], vec![a1]]).unwrap()
    }

    #[test]
    fn local_operations_do_not_signal() {
        let a = random_local_instrument(2, 1);
        let b = random_local_instrument(2, 2);
        let report = verify_no_signalling_sampled(&a, &b, 20, 9).unwrap();
        assert!(report.commuting);
        assert!(report.max_marginal_shift < 1e-12);
    }

    #[test]
    fn random_local_instruments_never_signal() {
        let mut worst: f64 = 0.0;
        for trial in 0..100 {
            let a = random_local_instrument(2, 1000 + trial);
            let b = random_local_instrument(3, 5000 + trial);
            let report = verify_no_signalling_sampled(&a, &b, 3, trial).unwrap();
            worst = worst.max(report.max_marginal_shift);
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn incomplete_bell_measurement_signals() {
        let op = BipartiteOperation::<f64>::incomplete_bell_measurement();
        let p = op
            .distinguishing_probability(
                Party::Alice,
                &PureState::qubits(&[0, 1]).density(),
                &PureState::qubits(&[0, 0]).density(),
            )
            .unwrap();
        assert!((p - 0.75).abs() < 1e-12);
        let verdict = is_semicausal(&op, Direction::BToA, &ProbeConfig::default(), 1e-10).unwrap();
        assert!(!verdict.semicausal);
        let w = verdict.witness.unwrap();
        assert!((w.advantage - 0.75).abs() < 1e-12, "{}", w.advantage);
    }

    #[test]
    fn complete_bell_measurement_is_causal() {
        let op = BipartiteOperation::<f64>::complete_bell_measurement();
        for dir in [Direction::AToB, Direction::BToA] {
            let verdict = is_semicausal(&op, dir, &ProbeConfig::default(), 1e-12).unwrap();
            assert!(verdict.semicausal);
            assert!(verdict.max_shift < 1e-12);
        }
    }

    #[test]
    fn conditional_basis_pvm_is_semicausal_one_way() {
        let op = BipartiteOperation::<f64>::conditional_basis_pvm();
        let b_to_a = is_semicausal(&op, Direction::BToA, &ProbeConfig::default(), 1e-12).unwrap();
        assert!(b_to_a.semicausal);
        let a_to_b = is_semicausal(&op, Direction::AToB, &ProbeConfig::default(), 1e-12).unwrap();
        assert!(!a_to_b.semicausal);
    }

    #[test]
    fn witness_report_serializes() {
        let op = BipartiteOperation::<f64>::incomplete_bell_measurement();
        let verdict = is_semicausal(&op, Direction::BToA, &ProbeConfig { haar_draws: 0, seed: 1 }, 1e-10).unwrap();
        let report = verdict.report(&op, Direction::BToA, 1e-10);
        assert_eq!(report.operation_id, "incomplete-bell");
        assert!((report.advantage - 0.75).abs() < 1e-12);
    }

    #[test]
    fn non_trace_preserving_rejected() {
        let half = linalg::identity::<f64>(4) * cr(0.5);
        let k = KrausSet::with_normalization(4, 4, vec![vec![half]], super::super::Normalization::SubNormalized).unwrap();
        assert!(BipartiteOperation::new("x", 2, 2, k).is_err());
    }
}
