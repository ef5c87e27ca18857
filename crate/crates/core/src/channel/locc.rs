use std::collections::BTreeMap;

use super::causality::Party;
use super::kraus::KrausSet;
use crate::error::{bail, Result};
use crate::linalg::{self, CMat};
use crate::qstate::DensityMatrix;
use crate::scalar::Real;

/// Outcome history: one outcome index per executed step.
pub type History = Vec<usize>;

/// One party's local instrument, chosen from the classical messages
/// (outcomes) received so far.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalStep<T: Real> {
    pub party: Party,
    pub branches: BTreeMap<History, KrausSet<T>>,
}

impl<T: Real> LocalStep<T> {
    /// Step that does not depend on earlier outcomes.
    pub fn unconditional(party: Party, instrument: KrausSet<T>) -> Self {
        let mut branches = BTreeMap::new();
        branches.insert(Vec::new(), instrument);
        Self { party, branches }
    }
}

/// One-way (or multi-round) LOCC protocol on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoccProtocol<T: Real> {
    d_a: usize,
    d_b: usize,
    steps: Vec<LocalStep<T>>,
}

impl<T: Real> LoccProtocol<T> {
    /// Checks that every reachable history has an instrument of the right
    /// dimension and no branch refers to an impossible history.
    pub fn new(d_a: usize, d_b: usize, steps: Vec<LocalStep<T>>) -> Result<Self> {
        let mut histories: Vec<History> = vec![Vec::new()];
        for (k, step) in steps.iter().enumerate() {
            let dim = match step.party {
                Party::Alice => d_a,
                Party::Bob => d_b,
            };
            for (h, inst) in &step.branches {
                if inst.dim_in() != dim || inst.dim_out() != dim {
                    bail!(Dimension, "step {k} branch {h:?} acts on {} but {:?} holds dimension {dim}", inst.dim_in(), step.party);
                }
                if !histories.contains(h) {
                    bail!(Validation, "step {k} conditions on unreachable history {h:?}");
                }
            }
            let mut next = Vec::new();
            for h in &histories {
                let Some(inst) = step.branches.get(h) else {
                    bail!(Validation, "step {k} has no instrument for history {h:?}");
                };
                for mu in 0..inst.num_outcomes() {
                    let mut extended = h.clone();
                    extended.push(mu);
                    next.push(extended);
                }
            }
            histories = next;
        }
        Ok(Self { d_a, d_b, steps })
    }

    /// Alice measures `{|0⟩, |1⟩}` and sends the result; Bob measures in
    /// `{|0⟩, |1⟩}` after outcome 0 and in `{|+⟩, |−⟩}` after outcome 1.
    /// History `(a, b)` corresponds to the product-basis projector `2a + b`
    /// of [`super::BipartiteOperation::conditional_basis_pvm`].
    pub fn conditional_basis() -> Self {
        let h = crate::scalar::cr(T::lit(std::f64::consts::FRAC_1_SQRT_2));
        let zero = linalg::basis::<T>(2, 0);
        let one = linalg::basis::<T>(2, 1);
        let z_basis = KrausSet::basis_measurement(&[zero.clone(), one.clone()]).expect("orthonormal");
        let x_basis = KrausSet::basis_measurement(&[(&zero + &one) * h, (&zero - &one) * h]).expect("orthonormal");
        let mut bob = BTreeMap::new();
        bob.insert(vec![0], z_basis.clone());
        bob.insert(vec![1], x_basis);
        Self::new(
            2,
            2,
            vec![LocalStep::unconditional(Party::Alice, z_basis), LocalStep { party: Party::Bob, branches: bob }],
        )
        .expect("well-formed protocol")
    }

    pub fn steps(&self) -> &[LocalStep<T>] {
        &self.steps
    }
}

fn embed<T: Real>(a: &CMat<T>, party: Party, d_a: usize, d_b: usize) -> CMat<T> {
    match party {
        Party::Alice => linalg::kron(a, &linalg::identity(d_b)),
        Party::Bob => linalg::kron(&linalg::identity(d_a), a),
    }
}

/// Runs the protocol and returns the probability of every outcome history.
pub fn simulate_locc_protocol<T: Real>(
    protocol: &LoccProtocol<T>,
    input: &DensityMatrix<T>,
) -> Result<BTreeMap<History, T>> {
    let (d_a, d_b) = (protocol.d_a, protocol.d_b);
    if input.dim() != d_a * d_b {
        bail!(Dimension, "input dimension {} vs protocol {}x{}", input.dim(), d_a, d_b);
    }
    // unnormalized branch states
    let mut branches: Vec<(History, CMat<T>)> = vec![(Vec::new(), input.matrix().clone())];
    for step in &protocol.steps {
        let mut next = Vec::new();
        for (h, rho) in branches {
            let inst = &step.branches[&h];
            for mu in 0..inst.num_outcomes() {
                let out = inst.outcome(mu).iter().fold(linalg::zeros::<T>(d_a * d_b, d_a * d_b), |acc, a| {
                    let full = embed(a, step.party, d_a, d_b);
                    acc + &full * &rho * full.adjoint()
                });
                let mut extended = h.clone();
                extended.push(mu);
                next.push((extended, out));
            }
        }
        branches = next;
    }
    Ok(branches.into_iter().map(|(h, rho)| (h, linalg::trace(&rho).re)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::causality::conditional_basis_states;
    use crate::qstate::PureState;
    use crate::random::{haar_state, trial_rng};

    fn pvm_distribution(rho: &DensityMatrix<f64>) -> Vec<f64> {
        conditional_basis_states::<f64>()
            .iter()
            .map(|v| linalg::inner(v, &(rho.matrix() * v)).re)
            .collect()
    }

    fn as_vec(dist: &BTreeMap<History, f64>) -> Vec<f64> {
        dist.iter().map(|(h, &p)| (2 * h[0] + h[1], p)).fold(vec![0.0; 4], |mut acc, (i, p)| {
            acc[i] += p;
            acc
        })
    }

    #[test]
    fn zero_plus_input() {
        let plus = PureState::normalize(linalg::basis::<f64>(2, 0) + linalg::basis::<f64>(2, 1)).unwrap();
        let input = PureState::basis(2, 0).tensor(&plus).density();
        let dist = as_vec(&simulate_locc_protocol(&LoccProtocol::conditional_basis(), &input).unwrap());
        assert!((dist[0] - 0.5).abs() < 1e-15 && (dist[1] - 0.5).abs() < 1e-15);
        assert!(dist[2].abs() < 1e-15 && dist[3].abs() < 1e-15);
    }

    #[test]
    fn one_plus_input() {
        let plus = PureState::normalize(linalg::basis::<f64>(2, 0) + linalg::basis::<f64>(2, 1)).unwrap();
        let input = PureState::basis(2, 1).tensor(&plus).density();
        let dist = as_vec(&simulate_locc_protocol(&LoccProtocol::conditional_basis(), &input).unwrap());
        assert!((dist[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_global_pvm_on_random_inputs() {
        for trial in 0..50 {
            let psi = PureState::new(haar_state::<f64, _>(4, &mut trial_rng(31, trial))).unwrap().density();
            let got = as_vec(&simulate_locc_protocol(&LoccProtocol::conditional_basis(), &psi).unwrap());
            let tv: f64 = got.iter().zip(pvm_distribution(&psi)).map(|(a, b)| (a - b).abs()).sum::<f64>() * 0.5;
            assert!(tv < 1e-12);
        }
    }

    #[test]
    fn malformed_conditioning_rejected() {
        let z = KrausSet::<f64>::basis_measurement(&[linalg::basis(2, 0), linalg::basis(2, 1)]).unwrap();
        let mut bob = BTreeMap::new();
        bob.insert(vec![0], z.clone());
        let missing = LoccProtocol::new(2, 2, vec![LocalStep::unconditional(Party::Alice, z.clone()), LocalStep { party: Party::Bob, branches: bob.clone() }]);
        assert!(missing.is_err());
        bob.insert(vec![1], z.clone());
        bob.insert(vec![7], z.clone());
        let unreachable = LoccProtocol::new(2, 2, vec![LocalStep::unconditional(Party::Alice, z.clone()), LocalStep { party: Party::Bob, branches: bob }]);
        assert!(unreachable.is_err());
        let wrong_dim = LoccProtocol::new(2, 3, vec![LocalStep::unconditional(Party::Bob, z)]);
        assert!(wrong_dim.is_err());
    }
}
