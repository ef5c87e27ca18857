//! Thermal effects of horizons: Unruh and Rindler, Schwarzschild black-hole
//! thermodynamics, evaporation and superscattering.

use crate::channel::{choi_and_cp_check, CpCertificate, LinearMap};
use crate::error::{bail, Result};
use crate::linalg::{self, CMat};
use crate::qstate::{partial_trace_matrix, DensityMatrix, SubsystemSplit};
use crate::scalar::{fabs, Real};

/// `ħ, c, G, k_B`. SI values are CODATA 2018.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T> {
    pub hbar: T,
    pub c: T,
    pub g: T,
    pub k_b: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn si() -> Self {
        Self { hbar: T::lit(1.054_571_817e-34), c: T::lit(299_792_458.0), g: T::lit(6.674_30e-11), k_b: T::lit(1.380_649e-23) }
    }

    /// All constants equal to one.
    pub fn geometric() -> Self {
        Self { hbar: T::one(), c: T::one(), g: T::one(), k_b: T::one() }
    }

    pub fn new(hbar: T, c: T, g: T, k_b: T) -> Result<Self> {
        if [hbar, c, g, k_b].iter().any(|x| !(*x > T::zero()) || !x.is_finite()) {
            bail!(Validation, "physical constants must be positive and finite");
        }
        Ok(Self { hbar, c, g, k_b })
    }

    /// `l_P² = ħG/c³`.
    pub fn planck_length_sq(&self) -> T {
        self.hbar * self.g / self.c.powi(3)
    }
}

fn two_pi<T: Real>() -> T {
    T::two_pi()
}

/// `T = ħa/(2π c k_B)` seen by an observer on the worldline `x² − t² = 1/a²`
/// (units with c = 1).
pub fn unruh_temperature<T: Real>(a: T, k: &PhysicalConstants<T>) -> Result<T> {
    if !(a > T::zero()) {
        bail!(Domain, "proper acceleration must be positive, got {a}");
    }
    Ok(k.hbar * a / (two_pi::<T>() * k.c * k.k_b))
}

/// Excitation rate factor `ω/(2π(e^{2πω/a} − 1))` of a uniformly
/// accelerated detector coupled to a massless scalar (natural units).
/// Negative `ω` gives the de-excitation rate; `ω = 0` gives `a/4π²`.
pub fn detector_response<T: Real>(omega: T, a: T) -> Result<T> {
    if !(a > T::zero()) {
        bail!(Domain, "proper acceleration must be positive, got {a}");
    }
    if omega == T::zero() {
        return Ok(a / (two_pi::<T>() * two_pi::<T>()));
    }
    let x = two_pi::<T>() * omega / a;
    Ok(omega / (two_pi::<T>() * x.exp_m1()))
}

/// Response of an inertial detector in a thermal bath of temperature `t`:
/// `|ω|/2π` times `n̄` for absorption or `n̄ + 1` for emission.
pub fn thermal_bath_response<T: Real>(omega: T, t: T) -> Result<T> {
    if !(t > T::zero()) {
        bail!(Domain, "temperature must be positive");
    }
    let w = fabs(omega);
    if w == T::zero() {
        return Ok(t / two_pi::<T>());
    }
    let n = T::one() / (w / t).exp_m1();
    let occupation = if omega > T::zero() { n } else { n + T::one() };
    Ok(w / two_pi::<T>() * occupation)
}

/// One Rindler mode of the Minkowski vacuum restricted to a wedge.
#[derive(Debug, Clone, PartialEq)]
pub struct RindlerModeState<T> {
    pub omega: T,
    pub a: T,
    /// Highest occupation number kept.
    pub n_max: usize,
    pub probabilities: Vec<T>,
    /// Probability beyond `n_max`.
    pub tail: T,
}

const RINDLER_TAIL: f64 = 1e-15;

/// `p_n = e^{−2πnω/a}(1 − e^{−2πω/a})`. `n_max` grows until the tail is below `1e−15`.
pub fn rindler_mode_state<T: Real>(omega: T, a: T, n_max: usize) -> Result<RindlerModeState<T>> {
    if !(omega > T::zero()) || !(a > T::zero()) {
        bail!(Domain, "ω and a must be positive");
    }
    let x = two_pi::<T>() * omega / a;
    let q = (-x).exp();
    let head = -(-x).exp_m1();
    let mut n_max = n_max;
    // tail beyond n_max is q^{n_max+1}
    let needed = (T::lit(RINDLER_TAIL).ln() / (-x)).ceil();
    let needed = needed.to_usize().unwrap_or(usize::MAX).saturating_sub(1);
    if needed > 50_000_000 {
        bail!(Numerical, "mode too hot to truncate (2πω/a = {x})");
    }
    n_max = n_max.max(needed);
    let probabilities: Vec<T> = (0..=n_max).map(|n| (-(x * T::lit(n as f64))).exp() * head).collect();
    let tail = q.powf(T::lit((n_max + 1) as f64));
    Ok(RindlerModeState { omega, a, n_max, probabilities, tail })
}

impl<T: Real> RindlerModeState<T> {
    pub fn mean_occupation(&self) -> T {
        self.probabilities.iter().enumerate().fold(T::zero(), |acc, (n, p)| acc + T::lit(n as f64) * *p)
    }

    /// Natural-log entropy of the truncated distribution.
    pub fn entropy(&self) -> T {
        self.probabilities.iter().filter(|p| **p > T::zero()).fold(T::zero(), |acc, p| acc - *p * p.ln())
    }

    /// `1/(e^{2πω/a} − 1)`.
    pub fn analytic_mean_occupation(&self) -> T {
        T::one() / (two_pi::<T>() * self.omega / self.a).exp_m1()
    }
}

/// Entropy of a thermal oscillator with mean occupation `n`.
pub fn thermal_oscillator_entropy<T: Real>(n: T) -> T {
    let np1 = n + T::one();
    let nlogn = if n > T::zero() { n * n.ln() } else { T::zero() };
    np1 * np1.ln() - nlogn
}

/// Schwarzschild black hole; the mass unit follows the constants in use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHole<T> {
    mass: T,
}

impl<T: Real> BlackHole<T> {
    pub fn new(mass: T) -> Result<Self> {
        if !(mass > T::zero()) || !mass.is_finite() {
            bail!(Domain, "black-hole mass must be positive, got {mass}");
        }
        Ok(Self { mass })
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    /// `κ = c⁴/(4GM)`; `1/4M` in geometric units.
    pub fn surface_gravity(&self, k: &PhysicalConstants<T>) -> T {
        k.c.powi(4) / (T::lit(4.0) * k.g * self.mass)
    }

    /// Horizon area `16π G²M²/c⁴`.
    pub fn area(&self, k: &PhysicalConstants<T>) -> T {
        let r = T::lit(2.0) * k.g * self.mass / (k.c * k.c);
        T::lit(4.0) * T::pi() * r * r
    }

    /// `ħc³/(8πGMk_B)`, i.e. the Unruh temperature of the surface gravity.
    pub fn hawking_temperature(&self, k: &PhysicalConstants<T>) -> T {
        k.hbar * k.c.powi(3) / (T::lit(8.0) * T::pi() * k.g * self.mass * k.k_b)
    }

    /// `A/(4 l_P²)` in units of `k_B`.
    pub fn bekenstein_entropy(&self, k: &PhysicalConstants<T>) -> T {
        self.area(k) / (T::lit(4.0) * k.planck_length_sq())
    }
}

pub fn surface_gravity<T: Real>(bh: &BlackHole<T>, k: &PhysicalConstants<T>) -> T {
    bh.surface_gravity(k)
}

pub fn hawking_temperature<T: Real>(bh: &BlackHole<T>, k: &PhysicalConstants<T>) -> T {
    bh.hawking_temperature(k)
}

pub fn bekenstein_entropy<T: Real>(bh: &BlackHole<T>, k: &PhysicalConstants<T>) -> T {
    bh.bekenstein_entropy(k)
}

/// Redshifted proper acceleration `a(r)·α(r)` of a static observer at
/// radius `r > 2M` (geometric units). Tends to `κ` at the horizon.
pub fn redshifted_acceleration<T: Real>(m: T, r: T) -> Result<T> {
    if !(r > T::lit(2.0) * m) || !(m > T::zero()) {
        bail!(Domain, "need r > 2M > 0");
    }
    let alpha = (T::one() - T::lit(2.0) * m / r).sqrt();
    let a = m / (r * r * alpha);
    Ok(a * alpha)
}

/// `|dM − (κ/8π)ΔA|` for a Schwarzschild hole (geometric units).
pub fn first_law_residual<T: Real>(m: T, dm: T) -> Result<T> {
    let k = PhysicalConstants::geometric();
    let before = BlackHole::new(m)?;
    let after = BlackHole::new(m + dm)?;
    let d_area = after.area(&k) - before.area(&k);
    Ok(fabs(dm - before.surface_gravity(&k) / (T::lit(8.0) * T::pi()) * d_area))
}

/// Default `t_E = k M³` coefficient in s/kg³.
pub const K_EVAP_DEFAULT: f64 = 4.9e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaporation<T> {
    pub mass: T,
    pub lifetime: T,
    /// Set when `t ≥ t_E`; the mass is then reported as zero.
    pub evaporated: bool,
}

/// `M(t) = M₀(1 − t/t_E)^{1/3}` with `t_E = k_evap M₀³`.
pub fn evaporate<T: Real>(m0: T, t: T, k_evap: T) -> Result<Evaporation<T>> {
    if !(m0 > T::zero()) || !(k_evap > T::zero()) {
        bail!(Domain, "M0 and k_evap must be positive");
    }
    if !(t >= T::zero()) {
        bail!(Domain, "time must be non-negative");
    }
    let lifetime = k_evap * m0.powi(3);
    if t >= lifetime {
        return Ok(Evaporation { mass: T::zero(), lifetime, evaporated: true });
    }
    Ok(Evaporation { mass: m0 * (T::one() - t / lifetime).cbrt(), lifetime, evaporated: false })
}

/// Classical RK4 integration of `Ṁ = −1/(3 k_evap M²)`, the loss law
/// calibrated to the same lifetime.
pub fn evaporate_rk4<T: Real>(m0: T, t: T, k_evap: T, steps: usize) -> Result<T> {
    if !(m0 > T::zero()) || !(k_evap > T::zero()) || steps == 0 {
        bail!(Domain, "M0, k_evap and the step count must be positive");
    }
    if !(t >= T::zero() && t < k_evap * m0.powi(3)) {
        bail!(Domain, "integration time must lie in [0, t_E)");
    }
    let rate = |m: T| -T::one() / (T::lit(3.0) * k_evap * m * m);
    let h = t / T::lit(steps as f64);
    let half = T::lit(0.5);
    let mut m = m0;
    for _ in 0..steps {
        let k1 = rate(m);
        let k2 = rate(m + h * half * k1);
        let k3 = rate(m + h * half * k2);
        let k4 = rate(m + h * k3);
        m += h / T::lit(6.0) * (k1 + T::lit(2.0) * (k2 + k3) + k4);
    }
    Ok(m)
}

fn check_scattering<T: Real>(s: &CMat<T>, d_in: usize, d_hole: usize) -> Result<()> {
    let n = d_in * d_hole;
    if s.shape() != (n, n) || d_in == 0 || d_hole == 0 {
        bail!(Dimension, "scattering matrix must be {n}x{n}");
    }
    if !linalg::is_unitary(s, T::lit(1e-10).max(T::eps() * T::lit(1e3))) {
        bail!(Validation, "scattering matrix is not unitary");
    }
    Ok(())
}

fn scatter_matrix<T: Real>(s: &CMat<T>, rho: &CMat<T>, d_in: usize, d_hole: usize) -> Result<CMat<T>> {
    let mut hole = linalg::zeros(d_hole, d_hole);
    hole[(0, 0)] = crate::scalar::cr(T::one());
    let joint = s * linalg::kron(rho, &hole) * s.adjoint();
    partial_trace_matrix(&joint, &SubsystemSplit::bipartite(d_in, d_hole, true))
}

/// `ρ_out = tr_hole[S(ρ ⊗ |0⟩⟨0|)S†]`, with the hole as the second factor.
pub fn superscattering<T: Real>(s: &CMat<T>, rho: &DensityMatrix<T>, d_hole: usize) -> Result<DensityMatrix<T>> {
    check_scattering(s, rho.dim(), d_hole)?;
    DensityMatrix::new(scatter_matrix(s, rho.matrix(), rho.dim(), d_hole)?)
}

/// Choi certificate of the superscattering map built from its action.
pub fn superscattering_certificate<T: Real>(s: &CMat<T>, d_in: usize, d_hole: usize) -> Result<CpCertificate<T>> {
    check_scattering(s, d_in, d_hole)?;
    let action = |m: &CMat<T>| scatter_matrix(s, m, d_in, d_hole).expect("dimensions checked");
    choi_and_cp_check(&LinearMap::Action { dim_in: d_in, dim_out: d_in, action: &action })
}
