//! Seeded sampling of states, unitaries and instruments.
//!
//! Every Monte-Carlo loop derives a per-trial generator from `(seed, trial)`
//! so results do not depend on iteration order or thread scheduling.

use nalgebra::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMat, CVec};
use crate::scalar::{c, cr, Real};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 mixing of a base seed and a trial index.
pub fn derive_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, trial: u64) -> SeededRng {
    rng_from_seed(derive_seed(seed, trial))
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat<T> {
    let half = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    CMat::from_fn(rows, cols, |_, _| c(gaussian::<T, _>(rng) * half, gaussian::<T, _>(rng) * half))
}

/// Haar-distributed unit vector in `C^dim`.
pub fn haar_state<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVec<T> {
    let v = CVec::from_fn(dim, |_, _| c(gaussian::<T, _>(rng), gaussian::<T, _>(rng)));
    let norm = crate::linalg::vec_norm(&v);
    v / cr(norm)
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix of
/// Mezzadri).
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat<T> {
    let qr = QR::new(ginibre::<T, _>(dim, dim, rng));
    let (q, r) = (qr.q(), qr.r());
    let mut out = q.clone();
    for j in 0..dim {
        let d = r[(j, j)];
        let modulus = d.norm_sqr().sqrt();
        let phase = if modulus > T::zero() { d / cr(modulus) } else { cr(T::one()) };
        for i in 0..dim {
            out[(i, j)] = q[(i, j)] * phase;
        }
    }
    out
}

/// Random full-rank density matrix `G G† / tr(G G†)` (Hilbert–Schmidt measure).
pub fn random_density_matrix<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat<T> {
    random_density_matrix_rank(dim, dim, rng)
}

pub fn random_density_matrix_rank<T: Real, R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> CMat<T> {
    let g = ginibre::<T, _>(dim, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = crate::linalg::trace(&m).re;
    m / cr(tr)
}

/// Uniform point on the unit sphere.
pub fn unit_vector3<T: Real, R: Rng + ?Sized>(rng: &mut R) -> [T; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-9 {
            return [T::lit(v[0] / n), T::lit(v[1] / n), T::lit(v[2] / n)];
        }
    }
}

/// Uniform sample in `[lo, hi)`.
pub fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> T {
    T::lit(rng.random_range(lo..hi))
}
