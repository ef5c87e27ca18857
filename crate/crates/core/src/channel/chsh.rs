use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::error::{bail, Result};
use crate::linalg::{self, CMat};
use crate::qstate::DensityMatrix;
use crate::scalar::Real;

/// Bloch directions of the four dichotomic observables `n·σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings<T> {
    pub a1: [T; 3],
    pub a2: [T; 3],
    pub b1: [T; 3],
    pub b2: [T; 3],
}

impl<T: Real> ChshSettings<T> {
    pub fn observables(&self) -> [CMat<T>; 4] {
        [&self.a1, &self.a2, &self.b1, &self.b2].map(linalg::bloch_observable)
    }

    /// Alice measures `z` and `x`, Bob the two diagonal combinations, with
    /// signs chosen for the singlet.
    pub fn singlet_optimal() -> Self {
        let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        let z = T::zero();
        Self {
            a1: [z, z, T::one()],
            a2: [T::one(), z, z],
            b1: [-h, z, -h],
            b2: [h, z, -h],
        }
    }
}

/// `ζ = ½ tr{ρ[A₁(B₁+B₂) + A₂(B₁−B₂)]}` for observables squaring to the identity.
pub fn chsh_value<T: Real>(rho: &DensityMatrix<T>, a1: &CMat<T>, a2: &CMat<T>, b1: &CMat<T>, b2: &CMat<T>) -> Result<T> {
    if rho.dim() != 4 {
        bail!(Dimension, "CHSH needs a two-qubit state, got dimension {}", rho.dim());
    }
    let tol = T::lit(1e-10).max(T::eps() * T::lit(1e3));
    let id = linalg::identity::<T>(2);
    for (name, x) in [("A1", a1), ("A2", a2), ("B1", b1), ("B2", b2)] {
        if x.shape() != (2, 2) {
            bail!(Dimension, "{name} must be 2x2");
        }
        if !linalg::is_hermitian(x, tol) || linalg::max_abs(&(x * x - &id)) > tol {
            bail!(Validation, "{name} is not a Hermitian observable with spectrum ±1");
        }
    }
    let op = linalg::kron(a1, &(b1 + b2)) + linalg::kron(a2, &(b1 - b2));
    Ok(linalg::trace(&(rho.matrix() * op)).re * T::lit(0.5))
}

/// `T_ij = tr(ρ σ_i ⊗ σ_j)`.
pub fn correlation_matrix<T: Real>(rho: &DensityMatrix<T>) -> Result<Matrix3<T>> {
    if rho.dim() != 4 {
        bail!(Dimension, "correlation matrix needs a two-qubit state");
    }
    let p = linalg::paulis::<T>();
    Ok(Matrix3::from_fn(|i, j| linalg::trace(&(rho.matrix() * linalg::kron(&p[i + 1], &p[j + 1]))).re))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChshStrategy {
    /// Two largest singular values of the correlation matrix; falls back to
    /// the grid if the decomposition does not converge.
    #[default]
    Analytic,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshOptimum<T> {
    pub zeta_max: T,
    pub settings: ChshSettings<T>,
    pub strategy: ChshStrategy,
}

pub fn chsh_optimize<T: Real>(rho: &DensityMatrix<T>) -> Result<ChshOptimum<T>> {
    chsh_optimize_with(rho, ChshStrategy::Analytic)
}

pub fn chsh_optimize_with<T: Real>(rho: &DensityMatrix<T>, strategy: ChshStrategy) -> Result<ChshOptimum<T>> {
    let t = correlation_matrix(rho)?;
    if strategy == ChshStrategy::Analytic {
        if let Some(opt) = analytic(&t) {
            return Ok(opt);
        }
    }
    Ok(grid(&t))
}

fn arr<T: Real>(v: &Vector3<T>) -> [T; 3] {
    [v[0], v[1], v[2]]
}

fn analytic<T: Real>(t: &Matrix3<T>) -> Option<ChshOptimum<T>> {
    let svd = t.try_svd(true, true, T::eps(), 1000)?;
    let (u, vt) = (svd.u?, svd.v_t?);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).expect("finite"));
    let (s1, s2) = (svd.singular_values[order[0]], svd.singular_values[order[1]]);
    let (u1, u2) = (u.column(order[0]).into_owned(), u.column(order[1]).into_owned());
    let (v1, v2) = (vt.row(order[0]).transpose(), vt.row(order[1]).transpose());
    let norm = (s1 * s1 + s2 * s2).sqrt();
    let (cos, sin) = if norm > T::zero() { (s1 / norm, s2 / norm) } else { (T::one(), T::zero()) };
    let settings = ChshSettings {
        a1: arr(&u1),
        a2: arr(&u2),
        b1: arr(&(v1 * cos + v2 * sin)),
        b2: arr(&(v1 * cos - v2 * sin)),
    };
    Some(ChshOptimum { zeta_max: norm, settings, strategy: ChshStrategy::Analytic })
}

fn polar<T: Real>(theta: T, phi: T) -> Vector3<T> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

/// Bob's best response to Alice's pair: `b₁ ∥ Tᵀ(a₁+a₂)`, `b₂ ∥ Tᵀ(a₁−a₂)`,
/// giving `½(|Tᵀ(a₁+a₂)| + |Tᵀ(a₁−a₂)|)`.
fn best_response<T: Real>(t: &Matrix3<T>, a1: &Vector3<T>, a2: &Vector3<T>) -> (T, Vector3<T>, Vector3<T>) {
    let (plus, minus) = (t.transpose() * (a1 + a2), t.transpose() * (a1 - a2));
    let unit = |v: &Vector3<T>| {
        let n = v.norm();
        if n > T::zero() { v / n } else { Vector3::z() }
    };
    ((plus.norm() + minus.norm()) * T::lit(0.5), unit(&plus), unit(&minus))
}

const N_THETA: usize = 17;
const N_PHI: usize = 33;
const REFINEMENTS: usize = 2;

fn grid<T: Real>(t: &Matrix3<T>) -> ChshOptimum<T> {
    let pi = T::pi();
    let mut centre = [(pi * T::lit(0.5), pi), (pi * T::lit(0.5), pi)];
    let mut half = (pi * T::lit(0.5), pi);
    let mut best = (T::min_value().unwrap_or(-T::one()), centre);
    for _ in 0..=REFINEMENTS {
        let axis = |c: (T, T), h: (T, T)| -> Vec<(T, T)> {
            let mut pts = Vec::with_capacity(N_THETA * N_PHI);
            for i in 0..N_THETA {
                let th = c.0 - h.0 + h.0 * T::lit(2.0 * i as f64 / (N_THETA - 1) as f64);
                for j in 0..N_PHI {
                    pts.push((th, c.1 - h.1 + h.1 * T::lit(2.0 * j as f64 / (N_PHI - 1) as f64)));
                }
            }
            pts
        };
        let (g1, g2) = (axis(centre[0], half), axis(centre[1], half));
        let per_row: Vec<(T, [(T, T); 2])> = g1
            .par_iter()
            .map(|&p1| {
                let a1 = polar(p1.0, p1.1);
                g2.iter().fold((T::min_value().unwrap_or(-T::one()), [p1, p1]), |acc, &p2| {
                    let z = best_response(t, &a1, &polar(p2.0, p2.1)).0;
                    if z > acc.0 { (z, [p1, p2]) } else { acc }
                })
            })
            .collect();
        for row in per_row {
            if row.0 > best.0 {
                best = row;
            }
        }
        centre = best.1;
        half = (half.0 * T::lit(2.0) / T::lit((N_THETA - 1) as f64), half.1 * T::lit(2.0) / T::lit((N_PHI - 1) as f64));
    }
    let (a1, a2) = (polar(best.1[0].0, best.1[0].1), polar(best.1[1].0, best.1[1].1));
    let (zeta, plus, minus) = best_response(t, &a1, &a2);
    let settings = ChshSettings {
        a1: arr(&a1),
        a2: arr(&a2),
        b1: arr(&plus),
        b2: arr(&minus),
    };
    ChshOptimum { zeta_max: zeta, settings, strategy: ChshStrategy::Grid }
}

/// Clustering estimate `1 + 4e^{−mr}` for observables separated by `r` in a
/// theory with mass gap `m`.
pub fn cluster_chsh_bound<T: Real>(m: T, r: T) -> Result<T> {
    if !(m >= T::zero()) || !(r >= T::zero()) {
        bail!(Domain, "mass and separation must be non-negative, got m={m}, r={r}");
    }
    Ok(T::one() + T::lit(4.0) * (-(m * r)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{Bell, PureState};

    fn werner(p: f64) -> DensityMatrix<f64> {
        let singlet = Bell::PsiMinus.state::<f64>().density().into_matrix();
        DensityMatrix::new(singlet * crate::scalar::cr(p) + linalg::identity::<f64>(4) * crate::scalar::cr((1.0 - p) / 4.0)).unwrap()
    }

    fn value_at(rho: &DensityMatrix<f64>, s: &ChshSettings<f64>) -> f64 {
        let [a1, a2, b1, b2] = s.observables();
        chsh_value(rho, &a1, &a2, &b1, &b2).unwrap()
    }

    #[test]
    fn singlet_reaches_tsirelson() {
        let singlet = Bell::PsiMinus.state::<f64>().density();
        assert!((value_at(&singlet, &ChshSettings::singlet_optimal()) - 2f64.sqrt()).abs() < 1e-9);
        for strategy in [ChshStrategy::Analytic, ChshStrategy::Grid] {
            let opt = chsh_optimize_with(&singlet, strategy).unwrap();
            assert!((opt.zeta_max - 2f64.sqrt()).abs() < 1e-6, "{strategy:?}: {}", opt.zeta_max);
            assert!((value_at(&singlet, &opt.settings) - opt.zeta_max).abs() < 1e-6);
        }
    }

    #[test]
    fn product_state_is_classical() {
        let rho = PureState::<f64>::qubits(&[0, 0]).density();
        let opt = chsh_optimize(&rho).unwrap();
        assert!((opt.zeta_max - 1.0).abs() < 1e-9);
        // brute-force grid over Bob's and Alice's polar angles in the xz plane
        let mut best: f64 = 0.0;
        let steps = 24;
        let dir = |k: usize| {
            let t = std::f64::consts::PI * k as f64 / steps as f64 * 2.0;
            [t.sin(), 0.0, t.cos()]
        };
        for i in 0..steps {
            for j in 0..steps {
                for k in 0..steps {
                    let s = ChshSettings { a1: dir(i), a2: dir(j), b1: dir(k), b2: dir((k + steps / 2) % steps) };
                    best = best.max(value_at(&rho, &s));
                }
            }
        }
        assert!(best <= 1.0 + 1e-9 && best > 0.99);
    }

    #[test]
    fn werner_half_matches_grid_oracle() {
        let rho = werner(0.5);
        // planar brute-force oracle, a1 fixed along z, 5 degree steps
        let dir = |deg: usize| {
            let t = (deg as f64).to_radians();
            [t.sin(), 0.0, t.cos()]
        };
        let mut oracle: f64 = 0.0;
        for j in (0..360).step_by(5) {
            for k in (0..360).step_by(5) {
                for l in (0..360).step_by(5) {
                    let s = ChshSettings { a1: dir(0), a2: dir(j), b1: dir(k), b2: dir(l) };
                    oracle = oracle.max(value_at(&rho, &s));
                }
            }
        }
        assert!((oracle - std::f64::consts::FRAC_1_SQRT_2).abs() < 5e-5);
        let opt = chsh_optimize(&rho).unwrap();
        assert!((opt.zeta_max - oracle).abs() < 1e-4);
    }

    #[test]
    fn maximally_mixed_gives_zero() {
        let rho = DensityMatrix::<f64>::maximally_mixed(4);
        assert!(value_at(&rho, &ChshSettings::singlet_optimal()).abs() < 1e-15);
        assert!(chsh_optimize(&rho).unwrap().zeta_max.abs() < 1e-15);
    }

    #[test]
    fn non_observable_rejected() {
        let rho = DensityMatrix::<f64>::maximally_mixed(4);
        let [a1, a2, b1, _] = ChshSettings::singlet_optimal().observables();
        let bad = linalg::identity::<f64>(2) * crate::scalar::cr(2.0);
        assert!(chsh_value(&rho, &a1, &a2, &b1, &bad).is_err());
    }

    #[test]
    fn cluster_bound_values() {
        assert_eq!(cluster_chsh_bound(0.0, 3.0).unwrap(), 5.0);
        assert!((cluster_chsh_bound(1.0, 4f64.ln()).unwrap() - 2.0).abs() < 1e-15);
        assert!((cluster_chsh_bound(1.0f64, 60.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(cluster_chsh_bound(-1.0f64, 1.0).is_err());
    }
}
