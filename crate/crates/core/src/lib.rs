//! Numerics for relativistic quantum information.
//!
//! The library covers finite-dimensional states and channels (Kraus sets,
//! POVMs, Choi certification, semicausality probes, LOCC, teleportation,
//! CHSH), Lorentz kinematics with Wigner rotations and helicity phases,
//! spin-½ and photon wave packets seen by boosted observers, and horizon
//! thermodynamics (Unruh, Rindler, Hawking, evaporation).
//!
//! All numerical code is generic over the real scalar (`f32` or `f64`)
//! through [`scalar::Real`]. The aliases below fix it to `f64`.

// `!(x > 0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod channel;
pub mod error;
pub mod horizon;
pub mod linalg;
pub mod lorentz;
pub mod photon;
pub mod qstate;
pub mod quadrature;
pub mod random;
pub mod scalar;
pub mod wavepacket;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type CMatrix = linalg::CMat<f64>;
pub type CVector = linalg::CVec<f64>;
pub type DensityMatrix = qstate::DensityMatrix<f64>;
pub type PureState = qstate::PureState<f64>;
pub type KrausSet = channel::KrausSet<f64>;
pub type Povm = channel::Povm<f64>;
pub type BipartiteOperation = channel::BipartiteOperation<f64>;
pub type FourVector = lorentz::FourVector<f64>;
pub type LorentzTransform = lorentz::LorentzTransform<f64>;
pub type SpinorPacket = wavepacket::SpinorPacket<f64>;
pub type BipartitePacket = wavepacket::BipartitePacket<f64>;
pub type PhotonPacket = photon::PhotonPacket<f64>;
pub type PolarizationMatrix = photon::PolarizationMatrix<f64>;
pub type PhysicalConstants = horizon::PhysicalConstants<f64>;
pub type BlackHole = horizon::BlackHole<f64>;
