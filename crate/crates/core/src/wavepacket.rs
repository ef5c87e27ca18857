//! Spin-½ wave packets on momentum grids.
//!
//! Amplitudes are stored against the invariant measure `d³p/p⁰`: a packet
//! with ordinary momentum-space amplitude `a(p)` (normalized with `d³p`)
//! is held as `√p⁰ a(p)` with weights `w_i = ΔV_i / p⁰_i`. A boost then only
//! moves grid points and rotates spinors; weights are unchanged.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector3, Vector4};
use rayon::prelude::*;

use crate::error::{bail, Result};
use crate::lorentz::{boost, wigner_rotation, FourVector, LorentzTransform};
use crate::qstate::{concurrence, error_probability, von_neumann_entropy, DensityMatrix, LogBase};
use crate::quadrature::trapezoid;
use crate::scalar::{cr, czero, fabs, Real, C};
use crate::linalg::CMat;

/// Discretization and physical parameters of a Gaussian packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec<T> {
    pub mass: T,
    pub mean_momentum: [T; 3],
    /// Momentum spread: standard deviation of the momentum distribution per axis.
    pub delta: T,
    /// Bloch direction of the (factorized) spin state.
    pub spin: [T; 3],
    /// Grid half-width in units of `delta`.
    pub extent: T,
    /// Points per axis; odd so the mean is sampled. One point gives a sharp-momentum state.
    pub points: usize,
}

impl<T: Real> PacketSpec<T> {
    pub const DEFAULT_POINTS: usize = 15;

    pub fn at_rest(mass: T, delta: T, spin: [T; 3]) -> Self {
        Self {
            mass,
            mean_momentum: [T::zero(); 3],
            delta,
            spin,
            extent: T::lit(4.0),
            points: Self::DEFAULT_POINTS,
        }
    }

    pub fn with_grid(mut self, points: usize, extent: T) -> Self {
        self.points = points;
        self.extent = extent;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > T::zero()) {
            bail!(Validation, "mass must be positive");
        }
        if self.points.is_multiple_of(2) {
            bail!(Validation, "points per axis must be odd, got {}", self.points);
        }
        if self.points > 1 && !(self.delta > T::zero()) {
            bail!(Validation, "momentum spread must be positive");
        }
        if !(self.extent >= T::lit(3.0)) {
            bail!(Validation, "grid extent must be at least 3 spreads, got {}", self.extent);
        }
        let s = self.spin;
        if !((s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt() > T::zero()) {
            bail!(Validation, "spin direction must be non-zero");
        }
        if self.mean_momentum.iter().any(|x| !x.is_finite()) {
            bail!(Validation, "mean momentum must be finite");
        }
        Ok(())
    }
}

/// Spinor with `n·σ χ = χ`.
pub fn spin_state<T: Real>(n: &[T; 3]) -> Vector2<C<T>> {
    let v = Vector3::new(n[0], n[1], n[2]).normalize();
    let theta = v.z.max(-T::one()).min(T::one()).acos();
    let phi = if v.x == T::zero() && v.y == T::zero() { T::zero() } else { v.y.atan2(v.x) };
    let half = theta * T::lit(0.5);
    Vector2::new(cr(half.cos()), crate::scalar::cis(phi) * cr(half.sin()))
}

/// On-shell sample points and invariant weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid<T: Real> {
    pub momenta: Vec<FourVector<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> MomentumGrid<T> {
    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    /// Cartesian grid around `center` with trapezoid volume weights divided by `p⁰`,
    /// plus the volume weight of each point.
    fn cartesian(mass: T, center: [T; 3], half_width: T, points: usize) -> Result<(Self, Vec<T>)> {
        let (nodes, w1) = if points == 1 {
            (vec![T::zero()], vec![T::one()])
        } else {
            trapezoid(points, -half_width, half_width)?
        };
        let mut momenta = Vec::with_capacity(points.pow(3));
        let mut weights = Vec::with_capacity(points.pow(3));
        let mut volumes = Vec::with_capacity(points.pow(3));
        for i in 0..points {
            for j in 0..points {
                for k in 0..points {
                    let p = FourVector::on_shell(
                        mass,
                        Vector3::new(center[0] + nodes[i], center[1] + nodes[j], center[2] + nodes[k]),
                    );
                    let vol = w1[i] * w1[j] * w1[k];
                    weights.push(vol / p.t);
                    volumes.push(vol);
                    momenta.push(p);
                }
            }
        }
        Ok((Self { momenta, weights }, volumes))
    }

    fn boosted(&self, lambda: &LorentzTransform<T>) -> Self {
        Self { momenta: self.momenta.iter().map(|p| lambda.apply(p)).collect(), weights: self.weights.clone() }
    }

    /// `D[W(Λ, p_i)]` for every point.
    fn wigner_matrices(&self, lambda: &LorentzTransform<T>, mass: T) -> Result<Vec<Matrix2<C<T>>>> {
        self.momenta
            .par_iter()
            .map(|p| wigner_rotation(lambda, p, mass).map(|w| to_m2(&w.su2)))
            .collect()
    }
}

fn to_m2<T: Real>(m: &CMat<T>) -> Matrix2<C<T>> {
    Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

fn norm_tol<T: Real>() -> T {
    T::lit(1e-8).max(T::eps() * T::lit(1e4))
}

/// Single massive spin-½ particle.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorPacket<T: Real> {
    mass: T,
    grid: MomentumGrid<T>,
    amplitudes: Vec<Vector2<C<T>>>,
}

impl<T: Real> SpinorPacket<T> {
    /// Validates mass shell (relative `1e−10`) and `Σ w‖a‖² = 1` (`1e−8`).
    pub fn new(mass: T, grid: MomentumGrid<T>, amplitudes: Vec<Vector2<C<T>>>) -> Result<Self> {
        if grid.len() != amplitudes.len() || grid.len() != grid.weights.len() || grid.is_empty() {
            bail!(Dimension, "grid and amplitude lengths differ or are empty");
        }
        if grid.weights.iter().any(|w| !(*w > T::zero())) {
            bail!(Validation, "weights must be positive");
        }
        let shell = T::lit(1e-10).max(T::eps() * T::lit(1e3));
        for p in &grid.momenta {
            if !(p.t > T::zero()) || fabs(p.square() - mass * mass) > shell * p.t * p.t {
                bail!(Validation, "grid point off the mass shell");
            }
        }
        let packet = Self { mass, grid, amplitudes };
        let n = packet.norm();
        if fabs(n - T::one()) > norm_tol() {
            bail!(Validation, "packet norm {n} differs from 1");
        }
        Ok(packet)
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn grid(&self) -> &MomentumGrid<T> {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Vector2<C<T>>] {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.grid.weights.iter().zip(&self.amplitudes).fold(T::zero(), |acc, (w, a)| acc + *w * a.norm_squared())
    }
}

fn gaussian_density<T: Real>(q: &Vector3<T>, delta: T) -> T {
    let two_pi = T::lit(2.0 * std::f64::consts::PI);
    (-(q.norm_squared()) / (T::lit(2.0) * delta * delta)).exp() / (two_pi * delta * delta).powf(T::lit(1.5))
}

/// Spin-factorized Gaussian; momentum density has standard deviation `Δ` per axis.
pub fn gaussian_packet<T: Real>(spec: &PacketSpec<T>) -> Result<SpinorPacket<T>> {
    spec.validate()?;
    let (grid, volumes) = MomentumGrid::cartesian(spec.mass, spec.mean_momentum, spec.extent * spec.delta, spec.points)?;
    let chi = spin_state(&spec.spin);
    let center = Vector3::from(spec.mean_momentum);
    // |a_inv|² = p⁰ |a|², with |a|² the normalized density
    let density: Vec<T> = if spec.points == 1 {
        vec![T::one()]
    } else {
        grid.momenta.iter().map(|p| gaussian_density(&(p.spatial() - center), spec.delta)).collect()
    };
    let total = density.iter().zip(&volumes).fold(T::zero(), |a, (d, v)| a + *d * *v);
    if !(total > T::zero()) {
        bail!(Numerical, "Gaussian underflows on the grid");
    }
    let amplitudes = grid
        .momenta
        .iter()
        .zip(&density)
        .map(|(p, d)| chi * cr((p.t * *d / total).sqrt()))
        .collect();
    SpinorPacket::new(spec.mass, grid, amplitudes)
}

/// Γ = (Δ/m)(1 − √(1 − β²))/β, with limit 0 at β = 0.
pub fn gamma_parameter<T: Real>(delta: T, m: T, beta: T) -> Result<T> {
    if !(m > T::zero()) || !(delta >= T::zero()) {
        bail!(Domain, "need m > 0 and Δ ≥ 0");
    }
    if !(beta >= T::zero() && beta < T::one()) {
        bail!(Domain, "β = {beta} outside [0, 1)");
    }
    if beta == T::zero() {
        return Ok(T::zero());
    }
    // (1 − √(1−β²))/β = β/(1 + √(1−β²)) avoids cancellation at small β
    Ok(delta / m * beta / (T::one() + (T::one() - beta * beta).sqrt()))
}

/// Inverse of [`gamma_parameter`] in β.
pub fn beta_for_gamma<T: Real>(delta_over_m: T, gamma: T) -> Result<T> {
    if !(delta_over_m > T::zero()) {
        bail!(Domain, "Δ/m must be positive");
    }
    let t = gamma / delta_over_m;
    if !(t >= T::zero() && t < T::one()) {
        bail!(Domain, "Γ = {gamma} unreachable for Δ/m = {delta_over_m} (needs Γ < Δ/m)");
    }
    Ok(T::lit(2.0) * t / (T::one() + t * t))
}

/// Transformation to the frame of an observer moving with speed `beta` along
/// `(sin θ, 0, cos θ)`, θ measured from the prepared spin axis `ẑ`.
pub fn observer_boost<T: Real>(beta: T, theta: T) -> Result<LorentzTransform<T>> {
    boost(Vector3::new(theta.sin(), T::zero(), theta.cos()) * (-beta))
}

pub fn boost_packet<T: Real>(packet: &SpinorPacket<T>, lambda: &LorentzTransform<T>) -> Result<SpinorPacket<T>> {
    let d = packet.grid.wigner_matrices(lambda, packet.mass)?;
    let amplitudes = d.iter().zip(&packet.amplitudes).map(|(d, a)| d * a).collect();
    Ok(SpinorPacket { mass: packet.mass, grid: packet.grid.boosted(lambda), amplitudes })
}

/// `τ = Σ_i w_i a(p_i) a†(p_i)`.
pub fn reduced_spin<T: Real>(packet: &SpinorPacket<T>) -> Result<DensityMatrix<T>> {
    let n = packet.norm();
    if fabs(n - T::one()) > norm_tol() {
        bail!(Validation, "packet norm {n} differs from 1");
    }
    let tau = packet
        .grid
        .weights
        .iter()
        .zip(&packet.amplitudes)
        .fold(Matrix2::zeros(), |acc: Matrix2<C<T>>, (w, a)| acc + a * a.adjoint() * cr(*w));
    DensityMatrix::new(CMat::from_fn(2, 2, |i, j| tau[(i, j)]))
}

/// Discretization shared by the sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub points: usize,
    pub extent: T,
}

impl<T: Real> Default for GridSpec<T> {
    fn default() -> Self {
        Self { points: PacketSpec::<T>::DEFAULT_POINTS, extent: T::lit(4.0) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRow<T> {
    pub theta: T,
    pub beta: T,
    pub gamma: T,
    /// Natural-log von Neumann entropy of the boosted spin state.
    pub entropy: T,
}

fn rest_packet<T: Real>(delta_over_m: T, spin: [T; 3], grid: GridSpec<T>) -> Result<SpinorPacket<T>> {
    gaussian_packet(&PacketSpec::at_rest(T::one(), delta_over_m, spin).with_grid(grid.points, grid.extent))
}

/// Spin entropy in Bob's frame for a `+ẑ` spin packet at rest (`m = 1`).
/// At fixed Γ the entropy is largest for boosts along the spin axis.
pub fn entropy_surface<T: Real>(delta_over_m: T, betas: &[T], thetas: &[T], grid: GridSpec<T>) -> Result<Vec<EntropyRow<T>>> {
    if betas.is_empty() || thetas.is_empty() {
        bail!(Validation, "parameter lists must be non-empty");
    }
    let up = [T::zero(), T::zero(), T::one()];
    let packet = rest_packet(delta_over_m, up, grid)?;
    let mut rows = Vec::with_capacity(betas.len() * thetas.len());
    for &theta in thetas {
        for &beta in betas {
            let gamma = gamma_parameter(delta_over_m, T::one(), beta)?;
            let tau = reduced_spin(&boost_packet(&packet, &observer_boost(beta, theta)?)?)?;
            rows.push(EntropyRow { theta, beta, gamma, entropy: von_neumann_entropy(&tau, LogBase::E)? });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport<T> {
    pub gammas: Vec<T>,
    pub betas: Vec<T>,
    /// Helstrom error for the boosted up/down pair.
    pub error_probabilities: Vec<T>,
    /// Least-squares slope of `ln P′_E` against `ln Γ`.
    pub exponent: T,
    /// Error probability after boosting back, per Γ.
    pub restored: Vec<T>,
}

/// Up/down spin packets at rest, seen by observers moving at angle `theta`
/// with speeds chosen to hit each Γ.
pub fn packet_error_scaling<T: Real>(delta_over_m: T, gammas: &[T], theta: T, grid: GridSpec<T>) -> Result<ScalingReport<T>> {
    if gammas.len() < 2 {
        bail!(Validation, "need at least two Γ values to fit an exponent");
    }
    let z = T::zero();
    let up = rest_packet(delta_over_m, [z, z, T::one()], grid)?;
    let down = rest_packet(delta_over_m, [z, z, -T::one()], grid)?;
    let mut betas = Vec::new();
    let mut pe = Vec::new();
    let mut restored = Vec::new();
    for &g in gammas {
        let beta = beta_for_gamma(delta_over_m, g)?;
        let lambda = observer_boost(beta, theta)?;
        let (bu, bd) = (boost_packet(&up, &lambda)?, boost_packet(&down, &lambda)?);
        pe.push(error_probability(&reduced_spin(&bu)?, &reduced_spin(&bd)?)?);
        let inv = lambda.inverse();
        restored.push(error_probability(&reduced_spin(&boost_packet(&bu, &inv)?)?, &reduced_spin(&boost_packet(&bd, &inv)?)?)?);
        betas.push(beta);
    }
    let exponent = log_log_slope(gammas, &pe)?;
    Ok(ScalingReport { gammas: gammas.to_vec(), betas, error_probabilities: pe, exponent, restored })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() || x.len() < 2 {
        bail!(Dimension, "need matching series of length ≥ 2");
    }
    if x.iter().chain(y).any(|v| !(*v > T::zero())) {
        bail!(Domain, "log-log fit needs positive data");
    }
    let n = T::lit(x.len() as f64);
    let lx: Vec<T> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<T> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().fold(T::zero(), |a, b| a + *b) / n;
    let my = ly.iter().fold(T::zero(), |a, b| a + *b) / n;
    let sxy = lx.iter().zip(&ly).fold(T::zero(), |a, (u, v)| a + (*u - mx) * (*v - my));
    let sxx = lx.iter().fold(T::zero(), |a, u| a + (*u - mx) * (*u - mx));
    Ok(sxy / sxx)
}

/// Two packets with the same spin state `τ` but different momentum spreads
/// give boosted states with different spectra. Returns both spectra.
pub fn non_covariance_witness<T: Real>(
    deltas: (T, T),
    beta: T,
    theta: T,
    grid: GridSpec<T>,
) -> Result<([T; 2], [T; 2], [T; 2])> {
    let up = [T::zero(), T::zero(), T::one()];
    let a = rest_packet(deltas.0, up, grid)?;
    let b = rest_packet(deltas.1, up, grid)?;
    let tau_gap = crate::linalg::max_abs(&(reduced_spin(&a)?.into_matrix() - reduced_spin(&b)?.into_matrix()));
    let lambda = observer_boost(beta, theta)?;
    let sa = reduced_spin(&boost_packet(&a, &lambda)?)?.eigenvalues();
    let sb = reduced_spin(&boost_packet(&b, &lambda)?)?.eigenvalues();
    Ok(([tau_gap, T::zero()], [sa[0], sa[1]], [sb[0], sb[1]]))
}

/// Error probabilities of an up/down pair before (Bob's frame) and after the
/// inverse boost back to the rest frame. A CP map cannot lower `P_E`.
pub fn cp_failure_witness<T: Real>(delta_over_m: T, beta: T, theta: T, grid: GridSpec<T>) -> Result<(T, T)> {
    let z = T::zero();
    let lambda = observer_boost(beta, theta)?;
    let bu = boost_packet(&rest_packet(delta_over_m, [z, z, T::one()], grid)?, &lambda)?;
    let bd = boost_packet(&rest_packet(delta_over_m, [z, z, -T::one()], grid)?, &lambda)?;
    let before = error_probability(&reduced_spin(&bu)?, &reduced_spin(&bd)?)?;
    let inv = lambda.inverse();
    let after = error_probability(&reduced_spin(&boost_packet(&bu, &inv)?)?, &reduced_spin(&boost_packet(&bd, &inv)?)?)?;
    Ok((before, after))
}

/// Two massive spin-½ particles on a product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitePacket<T: Real> {
    masses: (T, T),
    grids: (MomentumGrid<T>, MomentumGrid<T>),
    /// Row-major over `(i, j)`; spin index `2σ₁ + σ₂`.
    amplitudes: Vec<Vector4<C<T>>>,
}

impl<T: Real> BipartitePacket<T> {
    pub fn new(masses: (T, T), grids: (MomentumGrid<T>, MomentumGrid<T>), amplitudes: Vec<Vector4<C<T>>>) -> Result<Self> {
        if amplitudes.len() != grids.0.len() * grids.1.len() {
            bail!(Dimension, "amplitude count does not match the product grid");
        }
        let packet = Self { masses, grids, amplitudes };
        let n = packet.norm();
        if fabs(n - T::one()) > T::lit(1e-6) {
            bail!(Validation, "bipartite norm {n} differs from 1");
        }
        Ok(packet)
    }

    pub fn norm(&self) -> T {
        let n2 = self.grids.1.len();
        let partial: Vec<T> = self
            .amplitudes
            .par_chunks(n2)
            .zip(self.grids.0.weights.par_iter())
            .map(|(row, w1)| row.iter().zip(&self.grids.1.weights).fold(T::zero(), |a, (g, w2)| a + *w1 * *w2 * g.norm_squared()))
            .collect();
        partial.into_iter().fold(T::zero(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteSpec<T> {
    pub masses: (T, T),
    pub deltas: (T, T),
    pub points: usize,
    pub extent: T,
}

impl<T: Real> BipartiteSpec<T> {
    pub const DEFAULT_POINTS: usize = 9;

    /// Equal masses `m = 1` and spreads `Δ`.
    pub fn symmetric(delta_over_m: T) -> Self {
        Self { masses: (T::one(), T::one()), deltas: (delta_over_m, delta_over_m), points: Self::DEFAULT_POINTS, extent: T::lit(4.0) }
    }
}

const BIPARTITE_NORM_TOL: f64 = 1e-3;

/// Spin singlet times independent Gaussians at rest.
pub fn singlet_packet<T: Real>(spec: &BipartiteSpec<T>) -> Result<BipartitePacket<T>> {
    let grid = |m: T, d: T| -> Result<(MomentumGrid<T>, Vec<T>)> {
        PacketSpec::at_rest(m, d, [T::zero(), T::zero(), T::one()]).with_grid(spec.points, spec.extent).validate()?;
        if spec.points < 3 {
            bail!(Validation, "bipartite grid needs at least 3 points per axis");
        }
        MomentumGrid::cartesian(m, [T::zero(); 3], spec.extent * d, spec.points)
    };
    let (g1, v1) = grid(spec.masses.0, spec.deltas.0)?;
    let (g2, v2) = grid(spec.masses.1, spec.deltas.1)?;
    let f = |g: &MomentumGrid<T>, v: &[T], d: T| -> Result<Vec<T>> {
        let dens: Vec<T> = g.momenta.iter().map(|p| gaussian_density(&p.spatial(), d)).collect();
        let q = dens.iter().zip(v).fold(T::zero(), |a, (x, y)| a + *x * *y);
        if fabs(q - T::one()) > T::lit(BIPARTITE_NORM_TOL) {
            bail!(Numerical, "grid too coarse: quadrature norm {q}");
        }
        Ok(g.momenta.iter().zip(&dens).map(|(p, x)| (p.t * *x / q).sqrt()).collect())
    };
    let (f1, f2) = (f(&g1, &v1, spec.deltas.0)?, f(&g2, &v2, spec.deltas.1)?);
    let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let singlet = Vector4::new(czero(), cr(h), cr(-h), czero());
    let amplitudes = f1.iter().flat_map(|a| f2.iter().map(move |b| singlet * cr(*a * *b))).collect();
    BipartitePacket::new(spec.masses, (g1, g2), amplitudes)
}

fn kron2<T: Real>(a: &Matrix2<C<T>>, b: &Matrix2<C<T>>) -> Matrix4<C<T>> {
    Matrix4::from_fn(|r, s| a[(r / 2, s / 2)] * b[(r % 2, s % 2)])
}

pub fn boost_bipartite<T: Real>(packet: &BipartitePacket<T>, lambda: &LorentzTransform<T>) -> Result<BipartitePacket<T>> {
    let d1 = packet.grids.0.wigner_matrices(lambda, packet.masses.0)?;
    let d2 = packet.grids.1.wigner_matrices(lambda, packet.masses.1)?;
    let n2 = d2.len();
    let mut amplitudes = packet.amplitudes.clone();
    amplitudes.par_chunks_mut(n2).zip(d1.par_iter()).for_each(|(row, a)| {
        for (g, b) in row.iter_mut().zip(&d2) {
            *g = kron2(a, b) * *g;
        }
    });
    Ok(BipartitePacket {
        masses: packet.masses,
        grids: (packet.grids.0.boosted(lambda), packet.grids.1.boosted(lambda)),
        amplitudes,
    })
}

/// Spin-spin state with both momenta traced out.
pub fn reduced_spin_pair<T: Real>(packet: &BipartitePacket<T>) -> Result<DensityMatrix<T>> {
    let n2 = packet.grids.1.len();
    let partial: Vec<Matrix4<C<T>>> = packet
        .amplitudes
        .par_chunks(n2)
        .zip(packet.grids.0.weights.par_iter())
        .map(|(row, w1)| {
            row.iter().zip(&packet.grids.1.weights).fold(Matrix4::zeros(), |acc, (g, w2)| acc + g * g.adjoint() * cr(*w1 * *w2))
        })
        .collect();
    let rho = partial.into_iter().fold(Matrix4::zeros(), |a, b| a + b);
    DensityMatrix::new(CMat::from_fn(4, 4, |i, j| rho[(i, j)]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceRow<T> {
    pub rapidity: T,
    pub concurrence: T,
    /// Concurrence after boosting back to the rest frame.
    pub restored: T,
}

/// Concurrence of the spin-spin state seen by observers moving along `axis`
/// with each rapidity.
pub fn bipartite_boost_concurrence<T: Real>(spec: &BipartiteSpec<T>, rapidities: &[T], axis: Vector3<T>) -> Result<Vec<ConcurrenceRow<T>>> {
    let packet = singlet_packet(spec)?;
    rapidities
        .iter()
        .map(|&eta| {
            let lambda = crate::lorentz::boost_rapidity(axis, -eta)?;
            let boosted = boost_bipartite(&packet, &lambda)?;
            let concurrence_now = concurrence(&reduced_spin_pair(&boosted)?)?;
            let back = boost_bipartite(&boosted, &lambda.inverse())?;
            Ok(ConcurrenceRow { rapidity: eta, concurrence: concurrence_now, restored: concurrence(&reduced_spin_pair(&back)?)? })
        })
        .collect()
}
