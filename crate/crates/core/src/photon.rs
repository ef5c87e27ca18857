//! Photon polarization on a grid of propagation directions.
//!
//! Polarization is a secondary variable: it is only defined relative to
//! the momentum. Every direction carries helicity amplitudes `α±` against
//! the vectors `ε±_k = R(k̂)(1, ±i, 0)/√2`.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{bail, Result};
use crate::linalg::{self, CMat};
use crate::lorentz::{aberrate, boost, helicity_phase, FourVector};
use crate::qstate::{error_probability, DensityMatrix};
use crate::quadrature::gauss_legendre;
use crate::random::uniform;
use crate::scalar::{cis, cr, czero, fabs, Real, C};

pub type CVec3<T> = Vector3<C<T>>;

/// Helicity vectors `ε±` at one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransversalFrame<T: Real> {
    pub plus: CVec3<T>,
    pub minus: CVec3<T>,
}

pub fn helicity_vectors<T: Real>(theta: T, phi: T) -> TransversalFrame<T> {
    let [p, m] = crate::lorentz::helicity_vectors(theta, phi);
    TransversalFrame { plus: Vector3::from(p), minus: Vector3::from(m) }
}

impl<T: Real> TransversalFrame<T> {
    /// Geometric vector `α₊ε⁺ + α₋ε⁻`.
    pub fn vector(&self, alpha: &[C<T>; 2]) -> CVec3<T> {
        self.plus * alpha[0] + self.minus * alpha[1]
    }

    /// Helicity components `⟨ε±, u⟩` of a vector.
    pub fn components(&self, u: &CVec3<T>) -> [C<T>; 2] {
        [self.plus.dotc(u), self.minus.dotc(u)]
    }
}

fn khat<T: Real>(theta: T, phi: T) -> Vector3<T> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

/// Split of a unit direction `n̂` into helicity and longitudinal parts at `k̂(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition<T> {
    /// `⟨ε±, n̂⟩`.
    pub plus: C<T>,
    pub minus: C<T>,
    /// `n̂·k̂`.
    pub ell: T,
    /// Length of the transversal part, `√(|n₊|² + |n₋|²)`.
    pub c: T,
}

pub fn transversal_decomposition<T: Real>(n: &[T; 3], theta: T, phi: T) -> Decomposition<T> {
    let frame = helicity_vectors(theta, phi);
    let nv = Vector3::new(n[0], n[1], n[2]);
    let [plus, minus] = frame.components(&nv.map(cr));
    Decomposition { plus, minus, ell: nv.dot(&khat(theta, phi)), c: (plus.norm_sqr() + minus.norm_sqr()).sqrt() }
}

/// `b_n(k) = n₊ε⁺ + n₋ε⁻`, the transversal part of `n̂`.
pub fn transversal_vector<T: Real>(n: &[T; 3], theta: T, phi: T) -> CVec3<T> {
    let d = transversal_decomposition(n, theta, phi);
    helicity_vectors(theta, phi).vector(&[d.plus, d.minus])
}

/// One direction of a photon packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonMode<T> {
    pub theta: T,
    pub phi: T,
    /// Photon energy in the current frame.
    pub k0: T,
    /// Quadrature weight of the invariant measure.
    pub weight: T,
    pub f: C<T>,
    pub alpha: [C<T>; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonPacket<T: Real> {
    modes: Vec<PhotonMode<T>>,
}

const NORM_TOL: f64 = 1e-8;
const HELICITY_TOL: f64 = 1e-12;

impl<T: Real> PhotonPacket<T> {
    /// Validates `Σ w|f|² = 1` (`1e−8`) and `|α₊|² + |α₋|² = 1` per mode (`1e−12`).
    pub fn new(modes: Vec<PhotonMode<T>>) -> Result<Self> {
        if modes.is_empty() {
            bail!(Validation, "photon packet needs at least one mode");
        }
        let h_tol = T::lit(HELICITY_TOL).max(T::eps() * T::lit(100.0));
        for (i, m) in modes.iter().enumerate() {
            if !(m.weight > T::zero()) || !(m.k0 > T::zero()) {
                bail!(Validation, "mode {i} needs positive weight and energy");
            }
            let a = m.alpha[0].norm_sqr() + m.alpha[1].norm_sqr();
            if fabs(a - T::one()) > h_tol {
                bail!(Validation, "mode {i} helicity amplitudes have norm {a}");
            }
        }
        let packet = Self { modes };
        let n = packet.norm();
        if fabs(n - T::one()) > T::lit(NORM_TOL).max(T::eps() * T::lit(1e3)) {
            bail!(Validation, "packet norm {n} differs from 1");
        }
        Ok(packet)
    }

    pub fn modes(&self) -> &[PhotonMode<T>] {
        &self.modes
    }

    pub fn norm(&self) -> T {
        self.modes.iter().fold(T::zero(), |a, m| a + m.weight * m.f.norm_sqr())
    }

    /// `Σ w|f|²|α₊|²`.
    pub fn helicity_population(&self) -> T {
        self.modes.iter().fold(T::zero(), |a, m| a + m.weight * m.f.norm_sqr() * m.alpha[0].norm_sqr())
    }

    fn check_norm(&self) -> Result<()> {
        let n = self.norm();
        if fabs(n - T::one()) > T::lit(NORM_TOL).max(T::eps() * T::lit(1e3)) {
            bail!(Validation, "packet norm {n} differs from 1");
        }
        Ok(())
    }
}

/// Polarization carried by every mode of a packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Polarization<T> {
    /// Physical polarization associated with a spatial direction: `b_n/|b_n|`.
    Linear([T; 3]),
    /// Pure helicity `+1` or `−1`.
    Helicity(i8),
    /// Fixed helicity amplitudes, normalized on construction.
    Amplitudes([C<T>; 2]),
}

fn mode_alpha<T: Real>(pol: &Polarization<T>, theta: T, phi: T) -> Result<[C<T>; 2]> {
    match *pol {
        Polarization::Linear(n) => {
            let d = transversal_decomposition(&n, theta, phi);
            if !(d.c > T::eps().sqrt()) {
                bail!(Domain, "direction is longitudinal for a packet mode");
            }
            Ok([d.plus / cr(d.c), d.minus / cr(d.c)])
        }
        Polarization::Helicity(h) => match h {
            1 => Ok([cr(T::one()), czero()]),
            -1 => Ok([czero(), cr(T::one())]),
            _ => bail!(Validation, "helicity must be ±1"),
        },
        Polarization::Amplitudes(a) => {
            let n = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
            if !(n > T::zero()) {
                bail!(Validation, "zero helicity amplitudes");
            }
            Ok([a[0] / cr(n), a[1] / cr(n)])
        }
    }
}

/// Gauss–Legendre nodes in `cos θ` times uniform azimuths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectionGrid {
    pub polar: usize,
    pub azimuthal: usize,
}

impl Default for DirectionGrid {
    fn default() -> Self {
        Self { polar: 32, azimuthal: 64 }
    }
}

/// Fraction of the aperture over which the profile tapers to zero.
const TAPER: f64 = 0.1;

/// Flat inside `0.9·aperture`, raised-cosine (C¹) edge out to the aperture.
pub fn aperture_profile<T: Real>(theta: T, aperture: T) -> T {
    let edge = aperture * T::lit(1.0 - TAPER);
    if theta <= edge {
        T::one()
    } else if theta >= aperture {
        T::zero()
    } else {
        let s = (theta - edge) / (aperture * T::lit(TAPER));
        T::lit(0.5) * (T::one() + (T::pi() * s).cos())
    }
}

/// Monochromatic (`k⁰ = 1`) beam along `+ẑ` with half-opening angle `aperture`.
pub fn collimated_packet<T: Real>(aperture: T, grid: DirectionGrid, pol: Polarization<T>) -> Result<PhotonPacket<T>> {
    if !(aperture > T::zero() && aperture < T::pi()) {
        bail!(Domain, "aperture must lie in (0, π)");
    }
    if grid.polar < 2 || grid.azimuthal < 1 {
        bail!(Validation, "direction grid too small");
    }
    // two Gauss–Legendre panels so the taper edge is a node boundary
    let edge = aperture * T::lit(1.0 - TAPER);
    let inner = grid.polar / 2;
    let (mut mu, mut wmu) = gauss_legendre(grid.polar - inner, edge.cos(), T::one())?;
    let (mu2, wmu2) = gauss_legendre(inner, aperture.cos(), edge.cos())?;
    mu.extend(mu2);
    wmu.extend(wmu2);
    let dphi = T::two_pi() / T::lit(grid.azimuthal as f64);
    let mut modes = Vec::with_capacity(mu.len() * grid.azimuthal);
    for (c, wc) in mu.iter().zip(&wmu) {
        let theta = c.max(-T::one()).min(T::one()).acos();
        let f = aperture_profile(theta, aperture);
        for j in 0..grid.azimuthal {
            let phi = dphi * T::lit(j as f64);
            modes.push(PhotonMode { theta, phi, k0: T::one(), weight: *wc * dphi, f: cr(f), alpha: mode_alpha(&pol, theta, phi)? });
        }
    }
    let norm = modes.iter().fold(T::zero(), |a, m| a + m.weight * m.f.norm_sqr());
    for m in &mut modes {
        m.f /= cr(norm.sqrt());
    }
    PhotonPacket::new(modes)
}

/// Single sharp direction.
pub fn sharp_packet<T: Real>(theta: T, phi: T, pol: Polarization<T>) -> Result<PhotonPacket<T>> {
    PhotonPacket::new(vec![PhotonMode { theta, phi, k0: T::one(), weight: T::one(), f: cr(T::one()), alpha: mode_alpha(&pol, theta, phi)? }])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn unit<T: Real>(self) -> [T; 3] {
        let mut u = [T::zero(); 3];
        u[self.index()] = T::one();
        u
    }
}

/// `⟨E_axis⟩ = Σ w|f|²|⟨b_axis, α⟩|²`.
pub fn povm_expectation<T: Real>(packet: &PhotonPacket<T>, axis: Axis) -> Result<T> {
    packet.check_norm()?;
    Ok(packet.modes.iter().fold(T::zero(), |acc, m| {
        let b = transversal_vector(&axis.unit(), m.theta, m.phi);
        let u = helicity_vectors(m.theta, m.phi).vector(&m.alpha);
        acc + m.weight * m.f.norm_sqr() * b.dotc(&u).norm_sqr()
    }))
}

/// Hermitian PSD 3×3 matrix over `x, y, z` with trace at most 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationMatrix<T: Real> {
    matrix: CMat<T>,
}

impl<T: Real> PolarizationMatrix<T> {
    pub fn new(matrix: CMat<T>) -> Result<Self> {
        let tol = T::lit(1e-10).max(T::eps() * T::lit(1e3));
        if matrix.shape() != (3, 3) {
            bail!(Dimension, "polarization matrix must be 3x3");
        }
        if !linalg::is_hermitian(&matrix, tol) {
            bail!(Validation, "polarization matrix is not Hermitian");
        }
        if linalg::eigvalsh(&matrix)[0] < -tol {
            bail!(Validation, "polarization matrix is not positive");
        }
        if linalg::trace(&matrix).re > T::one() + tol {
            bail!(Validation, "polarization matrix trace exceeds 1");
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    /// `1 − tr ρ`, the weight lost to longitudinal components.
    pub fn trace_deficit(&self) -> T {
        T::one() - linalg::trace(&self.matrix).re
    }

    /// Trace-normalized density matrix.
    pub fn to_density(&self) -> Result<DensityMatrix<T>> {
        DensityMatrix::normalized(self.matrix.clone())
    }
}

fn accumulate<T: Real>(packet: &PhotonPacket<T>, entry: impl Fn(&PhotonMode<T>) -> CMat<T> + Sync) -> CMat<T> {
    let parts: Vec<CMat<T>> = packet.modes.par_iter().map(|m| entry(m) * cr(m.weight * m.f.norm_sqr())).collect();
    parts.into_iter().fold(linalg::zeros(3, 3), |a, b| a + b)
}

/// `ρ_mn = Σ w|f|² ⟨b_m|α⟩⟨α|b_n⟩`: the matrix whose diagonal reproduces
/// the POVM `{E_x, E_y, E_z}`.
pub fn effective_density_matrix<T: Real>(packet: &PhotonPacket<T>) -> Result<PolarizationMatrix<T>> {
    packet.check_norm()?;
    let m = accumulate(packet, |m| {
        let u = helicity_vectors(m.theta, m.phi).vector(&m.alpha);
        let amp: Vec<C<T>> = Axis::ALL.iter().map(|a| transversal_vector(&a.unit(), m.theta, m.phi).dotc(&u)).collect();
        CMat::from_fn(3, 3, |i, j| amp[i] * amp[j].conj())
    });
    PolarizationMatrix::new(linalg::hermitize(&m))
}

/// `Σ w|f|² α_m α_n*` with `α` the geometric polarization vector.
pub fn naive_density_matrix<T: Real>(packet: &PhotonPacket<T>) -> Result<PolarizationMatrix<T>> {
    packet.check_norm()?;
    let m = accumulate(packet, |m| {
        let u = helicity_vectors(m.theta, m.phi).vector(&m.alpha);
        CMat::from_fn(3, 3, |i, j| u[i] * u[j].conj())
    });
    PolarizationMatrix::new(linalg::hermitize(&m))
}

/// Rigid rotation of directions and polarization vectors.
pub fn rotate_packet<T: Real>(packet: &PhotonPacket<T>, r: &Matrix3<T>) -> Result<PhotonPacket<T>> {
    let modes = packet
        .modes
        .iter()
        .map(|m| {
            let k = r * khat(m.theta, m.phi);
            let theta = k.z.max(-T::one()).min(T::one()).acos();
            let phi = if k.x == T::zero() && k.y == T::zero() { T::zero() } else { k.y.atan2(k.x) };
            let u = r.map(cr) * helicity_vectors(m.theta, m.phi).vector(&m.alpha);
            let alpha = helicity_vectors(theta, phi).components(&u);
            PhotonMode { theta, phi, alpha, ..*m }
        })
        .collect();
    PhotonPacket::new(modes)
}

/// The packet as seen by a detector receding with velocity `v` along `+ẑ`.
/// Directions are aberrated, energies Doppler shifted and helicity
/// amplitudes pick up `e^{±iξ}`; weights and profile are invariant.
pub fn boost_packet<T: Real>(packet: &PhotonPacket<T>, v: T) -> Result<PhotonPacket<T>> {
    if !(fabs(v) < T::one()) {
        bail!(Domain, "detector speed {v} must be below 1");
    }
    let lambda = boost(Vector3::new(T::zero(), T::zero(), -v))?;
    let modes: Result<Vec<PhotonMode<T>>> = packet
        .modes
        .par_iter()
        .map(|m| {
            let k = khat(m.theta, m.phi) * m.k0;
            let kv = FourVector::new(m.k0, k.x, k.y, k.z);
            let xi = helicity_phase(&lambda, &kv)?.xi;
            let (theta, ratio) = aberrate(m.theta, v)?;
            Ok(PhotonMode { theta, k0: m.k0 * ratio, alpha: [m.alpha[0] * cis(xi), m.alpha[1] * cis(-xi)], ..*m })
        })
        .collect();
    PhotonPacket::new(modes?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerReport<T> {
    pub p_e: T,
    pub p_e_boosted: T,
    /// `None` when `P_E < 1e−14`.
    pub ratio: Option<T>,
    /// Largest trace deficit of the four matrices involved.
    pub trace_deficit: T,
}

const DEGENERATE_PE: f64 = 1e-14;

fn pair_error<T: Real>(a: &PhotonPacket<T>, b: &PhotonPacket<T>) -> Result<(T, T)> {
    let (ra, rb) = (effective_density_matrix(a)?, effective_density_matrix(b)?);
    let deficit = ra.trace_deficit().max(rb.trace_deficit());
    Ok((error_probability(&ra.to_density()?, &rb.to_density()?)?, deficit))
}

/// Helstrom error for the pair before and after the boost, and their ratio.
pub fn doppler_error_ratio<T: Real>(pair: (&PhotonPacket<T>, &PhotonPacket<T>), v: T) -> Result<DopplerReport<T>> {
    let (p_e, d0) = pair_error(pair.0, pair.1)?;
    let (p_e_boosted, d1) = pair_error(&boost_packet(pair.0, v)?, &boost_packet(pair.1, v)?)?;
    let ratio = (p_e >= T::lit(DEGENERATE_PE)).then(|| p_e_boosted / p_e);
    Ok(DopplerReport { p_e, p_e_boosted, ratio, trace_deficit: d0.max(d1) })
}

/// Linear `x` and `y` polarized beams of the given aperture.
pub fn linear_pair<T: Real>(aperture: T, grid: DirectionGrid) -> Result<(PhotonPacket<T>, PhotonPacket<T>)> {
    Ok((
        collimated_packet(aperture, grid, Polarization::Linear(Axis::X.unit()))?,
        collimated_packet(aperture, grid, Polarization::Linear(Axis::Y.unit()))?,
    ))
}

/// Smallest Helstrom error over candidate pairs that would be orthogonal for
/// sharp momentum (`x` vs `y` linear, `+` vs `−` helicity). Positive for any
/// finite aperture.
pub fn no_orthogonality_witness<T: Real>(aperture: T, grid: DirectionGrid) -> Result<T> {
    let (x, y) = linear_pair(aperture, grid)?;
    let plus = collimated_packet(aperture, grid, Polarization::Helicity(1))?;
    let minus = collimated_packet(aperture, grid, Polarization::Helicity(-1))?;
    Ok(pair_error(&x, &y)?.0.min(pair_error(&plus, &minus)?.0))
}

/// Packet of `1..=max_modes` random directions with random weights,
/// profile values and helicity amplitudes.
pub fn random_packet<T: Real, R: Rng + ?Sized>(rng: &mut R, max_modes: usize) -> Result<PhotonPacket<T>> {
    if max_modes == 0 {
        bail!(Validation, "need at least one mode");
    }
    let n = 1 + rng.random_range(0..max_modes);
    let mut u = |lo: f64, hi: f64| uniform::<T, R>(rng, lo, hi);
    let mut modes: Vec<PhotonMode<T>> = (0..n)
        .map(|_| {
            let a = [C::new(u(-1.0, 1.0), u(-1.0, 1.0)), C::new(u(-1.0, 1.0), u(-1.0, 1.0))];
            let an = cr((a[0].norm_sqr() + a[1].norm_sqr()).sqrt());
            PhotonMode {
                theta: u(0.0, std::f64::consts::PI),
                phi: u(-std::f64::consts::PI, std::f64::consts::PI),
                k0: T::one(),
                weight: u(0.1, 1.0),
                f: C::new(u(-1.0, 1.0), u(-1.0, 1.0)),
                alpha: [a[0] / an, a[1] / an],
            }
        })
        .collect();
    let norm = modes.iter().fold(T::zero(), |acc, m| acc + m.weight * m.f.norm_sqr());
    for m in &mut modes {
        m.f /= cr(norm.sqrt());
    }
    PhotonPacket::new(modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{trial_rng, uniform};
    use crate::scalar::c;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    const GRID: DirectionGrid = DirectionGrid { polar: 16, azimuthal: 32 };

    #[test]
    fn standard_helicity_vectors() {
        let f = helicity_vectors(0.0f64, 0.0);
        let h = FRAC_1_SQRT_2;
        assert!((f.plus - Vector3::new(c(h, 0.0), c(0.0, h), c(0.0, 0.0))).camax() < 1e-15);
        assert!((f.minus - Vector3::new(c(h, 0.0), c(0.0, -h), c(0.0, 0.0))).camax() < 1e-15);
        let f = helicity_vectors(FRAC_PI_2, 0.0);
        let r = crate::lorentz::rotation_to_khat(FRAC_PI_2, 0.0).map(cr);
        let expect = r * Vector3::new(c(h, 0.0), c(0.0, h), c(0.0, 0.0));
        assert!((f.plus - expect).camax() < 1e-15);
    }

    #[test]
    fn frames_are_transversal_and_orthonormal() {
        for t in 0..50 {
            let mut rng = trial_rng(21, t);
            let (th, ph) = (uniform::<f64, _>(&mut rng, 0.0, 3.1), uniform::<f64, _>(&mut rng, -3.1, 3.1));
            let f = helicity_vectors(th, ph);
            let k = khat(th, ph).map(cr);
            assert!(f.plus.dotc(&k).norm() < 1e-12 && f.minus.dotc(&k).norm() < 1e-12);
            assert!((f.plus.norm() - 1.0).abs() < 1e-12 && f.plus.dotc(&f.minus).norm() < 1e-12);
            for ax in Axis::ALL {
                let d = transversal_decomposition(&ax.unit(), th, ph);
                assert!((d.plus.norm_sqr() + d.minus.norm_sqr() + d.ell * d.ell - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let d = transversal_decomposition(&[1.0, 0.0, 0.0], 0.0f64, 0.0);
        assert!((d.c - 1.0).abs() < 1e-15 && d.ell.abs() < 1e-15);
        let d = transversal_decomposition(&[1.0, 0.0, 0.0], FRAC_PI_2, 0.0);
        assert!(d.c.abs() < 1e-15 && (d.ell - 1.0).abs() < 1e-15);
        let (th, ph) = (0.7f64, 1.9f64);
        let d = transversal_decomposition(&[1.0, 0.0, 0.0], th, ph);
        let h = FRAC_1_SQRT_2;
        assert!((d.plus - c(th.cos() * ph.cos() * h, ph.sin() * h)).norm() < 1e-15);
        assert!((d.minus - c(th.cos() * ph.cos() * h, -ph.sin() * h)).norm() < 1e-15);
    }

    #[test]
    fn sharp_povm_examples() {
        let p = sharp_packet(0.0f64, 0.0, Polarization::Helicity(1)).unwrap();
        let e: Vec<f64> = Axis::ALL.iter().map(|a| povm_expectation(&p, *a).unwrap()).collect();
        assert!((e[0] - 0.5).abs() < 1e-15 && (e[1] - 0.5).abs() < 1e-15 && e[2].abs() < 1e-15);
        let rho = effective_density_matrix(&p).unwrap();
        assert!((rho.matrix()[(0, 1)] - c(0.0, -0.5)).norm() < 1e-15);
        let p = sharp_packet(0.0f64, 0.0, Polarization::Linear([1.0, 0.0, 0.0])).unwrap();
        assert!((povm_expectation(&p, Axis::X).unwrap() - 1.0).abs() < 1e-15);
        let rho = effective_density_matrix(&p).unwrap();
        let expect = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(1.0), cr(0.0), cr(0.0)]));
        assert!(linalg::max_abs(&(rho.matrix() - expect)) < 1e-15);
    }

    fn random_packet(seed: u64, trial: u64) -> PhotonPacket<f64> {
        super::random_packet(&mut trial_rng(seed, trial), 12).unwrap()
    }

    #[test]
    fn completeness_and_naive_identity() {
        for t in 0..100 {
            let p = random_packet(22, t);
            let total: f64 = Axis::ALL.iter().map(|a| povm_expectation(&p, *a).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-10);
            let eff = effective_density_matrix(&p).unwrap();
            let naive = naive_density_matrix(&p).unwrap();
            assert!(linalg::max_abs(&(eff.matrix() - naive.matrix())) < 1e-10);
            for a in Axis::ALL {
                assert!((eff.matrix()[(a.index(), a.index())].re - povm_expectation(&p, a).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_covariance() {
        let r = *nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(Vector3::new(0.3, -0.5, 1.0)), 0.9).matrix();
        for t in 0..20 {
            let p = random_packet(23, t);
            let rho = effective_density_matrix(&p).unwrap();
            let rotated = effective_density_matrix(&rotate_packet(&p, &r).unwrap()).unwrap();
            let rc = r.map(cr);
            let rc = CMat::from_fn(3, 3, |i, j| rc[(i, j)]);
            let expect = &rc * rho.matrix() * rc.transpose();
            assert!(linalg::max_abs(&(rotated.matrix() - expect)) < 1e-10);
        }
    }

    #[test]
    fn boost_keeps_helicity_moduli() {
        let p = random_packet(24, 0);
        let same = boost_packet(&p, 0.0).unwrap();
        assert_eq!(same.modes().len(), p.modes().len());
        for (a, b) in same.modes().iter().zip(p.modes()) {
            assert!((a.theta - b.theta).abs() < 1e-15 && (a.alpha[0] - b.alpha[0]).norm() < 1e-15);
        }
        for v in [-0.7, 0.3, 0.9] {
            let q = boost_packet(&p, v).unwrap();
            assert!((q.helicity_population() - p.helicity_population()).abs() < 1e-8);
            assert!((q.norm() - 1.0).abs() < 1e-8);
            for (a, b) in q.modes().iter().zip(p.modes()) {
                assert!((a.alpha[0].norm() - b.alpha[0].norm()).abs() < 1e-14);
            }
        }
        assert!(boost_packet(&p, 1.0).is_err());
    }

    #[test]
    fn cone_widens_for_receding_detector() {
        let p = sharp_packet(0.01f64, 0.3, Polarization::Helicity(1)).unwrap();
        let q = boost_packet(&p, 0.6).unwrap();
        assert!((q.modes()[0].theta / 0.01 / 2.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn doppler_ratio_limits() {
        let (x, y) = linear_pair(0.05f64, GRID).unwrap();
        let r0 = doppler_error_ratio((&x, &y), 0.0).unwrap();
        assert!((r0.ratio.unwrap() - 1.0).abs() < 1e-12);
        let r = doppler_error_ratio((&x, &y), 0.5).unwrap();
        assert!((r.ratio.unwrap() / 3.0 - 1.0).abs() < 0.02);
        let r = doppler_error_ratio((&x, &y), -0.5).unwrap();
        assert!((r.ratio.unwrap() * 3.0 - 1.0).abs() < 0.02);
        let sharp = sharp_packet(0.0f64, 0.0, Polarization::Linear([1.0, 0.0, 0.0])).unwrap();
        let sharp_y = sharp_packet(0.0f64, 0.0, Polarization::Linear([0.0, 1.0, 0.0])).unwrap();
        assert!(doppler_error_ratio((&sharp, &sharp_y), 0.5).unwrap().ratio.is_none());
    }

    #[test]
    fn no_orthogonal_pairs() {
        let (m1, m2) = (no_orthogonality_witness(0.1f64, GRID).unwrap(), no_orthogonality_witness(0.2f64, GRID).unwrap());
        assert!(m2 > 1e-5 && m2 > m1 && m1 > 0.0);
        assert!(no_orthogonality_witness(1e-4f64, GRID).unwrap() < 1e-8);
    }

    #[test]
    fn profile_is_c1() {
        let a = 0.05f64;
        assert_eq!(aperture_profile(0.0, a), 1.0);
        assert_eq!(aperture_profile(a, a), 0.0);
        // one-sided slopes at both taper ends vanish; the peak slope is π/(0.2a) ≈ 314
        let h = 1e-9;
        let edge = 0.9 * a;
        assert!(((aperture_profile(edge + h, a) - 1.0) / h).abs() < 1e-2);
        assert!((aperture_profile(a - h, a) / h).abs() < 1e-2);
    }
}
