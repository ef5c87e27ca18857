//! Special-relativistic kinematics in natural units (`c = 1`), metric
//! `η = diag(+1, −1, −1, −1)`. All transforms are active.

use nalgebra::{Matrix3, Matrix4, Rotation3, Unit, UnitQuaternion, Vector3, Vector4};

use crate::error::{bail, Result};
use crate::linalg::{self, CMat};
use crate::scalar::{c, fabs, Real, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector<T: Real> {
    pub t: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> FourVector<T> {
    pub fn new(t: T, x: T, y: T, z: T) -> Self {
        Self { t, x, y, z }
    }

    /// On-shell momentum `(√(m² + |p|²), p)`.
    pub fn on_shell(m: T, p: Vector3<T>) -> Self {
        Self::new((m * m + p.norm_squared()).sqrt(), p.x, p.y, p.z)
    }

    pub fn from_vector(v: &Vector4<T>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vector(&self) -> Vector4<T> {
        Vector4::new(self.t, self.x, self.y, self.z)
    }

    pub fn spatial(&self) -> Vector3<T> {
        Vector3::new(self.x, self.y, self.z)
    }

    /// Minkowski square `t² − |x|²`.
    pub fn square(&self) -> T {
        self.t * self.t - self.spatial().norm_squared()
    }

    /// Polar and azimuthal angle of the spatial part.
    pub fn angles(&self) -> (T, T) {
        let s = self.spatial();
        let n = s.norm();
        if n == T::zero() {
            return (T::zero(), T::zero());
        }
        ((s.z / n).max(-T::one()).min(T::one()).acos(), s.y.atan2(s.x))
    }

    fn max_abs(&self) -> T {
        fabs(self.t).max(fabs(self.x)).max(fabs(self.y)).max(fabs(self.z))
    }
}

fn metric<T: Real>() -> Matrix4<T> {
    Matrix4::from_diagonal(&Vector4::new(T::one(), -T::one(), -T::one(), -T::one()))
}

/// Proper orthochronous Lorentz transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzTransform<T: Real> {
    matrix: Matrix4<T>,
}

const GROUP_TOL: f64 = 1e-12;

impl<T: Real> LorentzTransform<T> {
    /// Validates `ΛᵀηΛ = η` (relative to `|Λ|²`), `det Λ = 1` and `Λ⁰₀ ≥ 1`.
    pub fn new(matrix: Matrix4<T>) -> Result<Self> {
        let eta = metric::<T>();
        let scale = matrix.amax().max(T::one());
        let tol = T::lit(GROUP_TOL).max(T::eps() * T::lit(100.0)) * scale * scale;
        let defect = (matrix.transpose() * eta * matrix - eta).amax();
        if !(defect <= tol) {
            bail!(Validation, "matrix is not a Lorentz transformation (metric defect {defect})");
        }
        if !(matrix[(0, 0)] >= T::one() - tol) {
            bail!(Validation, "transformation is not orthochronous");
        }
        if matrix.determinant() < T::zero() {
            bail!(Validation, "transformation is not proper");
        }
        Ok(Self { matrix })
    }

    pub fn identity() -> Self {
        Self { matrix: Matrix4::identity() }
    }

    pub fn matrix(&self) -> &Matrix4<T> {
        &self.matrix
    }

    pub fn apply(&self, p: &FourVector<T>) -> FourVector<T> {
        FourVector::from_vector(&(self.matrix * p.to_vector()))
    }

    /// `η Λᵀ η`, exact up to rounding.
    pub fn inverse(&self) -> Self {
        let eta = metric::<T>();
        Self { matrix: eta * self.matrix.transpose() * eta }
    }

    /// Spatial 3×3 block.
    pub fn spatial_block(&self) -> Matrix3<T> {
        self.matrix.fixed_view::<3, 3>(1, 1).into_owned()
    }

    fn from_rotation_matrix(r: &Matrix3<T>) -> Self {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(r);
        Self { matrix: m }
    }
}

/// `Λ₂Λ₁` (apply `Λ₁` first).
pub fn compose<T: Real>(l2: &LorentzTransform<T>, l1: &LorentzTransform<T>) -> LorentzTransform<T> {
    LorentzTransform { matrix: l2.matrix * l1.matrix }
}

/// Pure boost carrying a particle at rest to velocity `v`.
pub fn boost<T: Real>(v: Vector3<T>) -> Result<LorentzTransform<T>> {
    let v2 = v.norm_squared();
    if !(v2 < T::one()) {
        bail!(Domain, "boost speed {} must be below 1", v2.sqrt());
    }
    let gamma = T::one() / (T::one() - v2).sqrt();
    let mut m = Matrix4::identity();
    m[(0, 0)] = gamma;
    for i in 0..3 {
        m[(0, i + 1)] = gamma * v[i];
        m[(i + 1, 0)] = gamma * v[i];
        for j in 0..3 {
            let k = if v2 > T::zero() { (gamma - T::one()) * v[i] * v[j] / v2 } else { T::zero() };
            m[(i + 1, j + 1)] += k;
        }
    }
    Ok(LorentzTransform { matrix: m })
}

/// Pure boost of rapidity `eta` along `axis`; stable for large rapidities.
pub fn boost_rapidity<T: Real>(axis: Vector3<T>, eta: T) -> Result<LorentzTransform<T>> {
    let n = axis.norm();
    if !(n > T::zero()) {
        bail!(Domain, "boost axis must be non-zero");
    }
    let u = axis / n;
    let (ch, sh) = (eta.cosh(), eta.sinh());
    let mut m = Matrix4::identity();
    m[(0, 0)] = ch;
    for i in 0..3 {
        m[(0, i + 1)] = sh * u[i];
        m[(i + 1, 0)] = sh * u[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] += (ch - T::one()) * u[i] * u[j];
        }
    }
    Ok(LorentzTransform { matrix: m })
}

pub fn rotation<T: Real>(axis: Vector3<T>, angle: T) -> Result<LorentzTransform<T>> {
    if !(axis.norm() > T::zero()) {
        bail!(Domain, "rotation axis must be non-zero");
    }
    let r = Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle);
    Ok(LorentzTransform::from_rotation_matrix(r.matrix()))
}

/// Standard rotation taking `ẑ` to `k̂(θ, φ)`: `R_z(φ) R_y(θ)`.
pub fn rotation_to_khat<T: Real>(theta: T, phi: T) -> Matrix3<T> {
    let (st, ct, sp, cp) = (theta.sin(), theta.cos(), phi.sin(), phi.cos());
    Matrix3::new(ct * cp, -sp, cp * st, ct * sp, cp, sp * st, -st, T::zero(), ct)
}

fn shell_tol<T: Real>(scale: T) -> T {
    T::lit(1e-9).max(T::eps() * T::lit(1e4)) * scale * scale
}

/// Canonical (rotation-free) boost with `L(p)(m, 0, 0, 0) = p`.
pub fn standard_boost_massive<T: Real>(p: &FourVector<T>, m: T) -> Result<LorentzTransform<T>> {
    if !(m > T::zero()) {
        bail!(Domain, "mass must be positive, got {m}");
    }
    if !(p.t > T::zero()) || fabs(p.square() - m * m) > shell_tol(p.max_abs().max(m)) {
        bail!(Validation, "momentum is off the mass shell m = {m}");
    }
    let q = p.spatial();
    let qn = q.norm();
    if qn == T::zero() {
        return Ok(LorentzTransform::identity());
    }
    boost_rapidity(q, (qn / m).asinh())
}

/// `L(k) = R(k̂) B_z(ln k⁰)`, mapping `(1, 0, 0, 1)` to the null vector `k`.
pub fn standard_boost_massless<T: Real>(k: &FourVector<T>) -> Result<LorentzTransform<T>> {
    if !(k.t > T::zero()) || fabs(k.square()) > shell_tol(k.max_abs()) {
        bail!(Validation, "momentum is not a future-directed null vector");
    }
    let (theta, phi) = k.angles();
    let bz = boost_rapidity(Vector3::z(), k.t.ln())?;
    Ok(compose(&LorentzTransform::from_rotation_matrix(&rotation_to_khat(theta, phi)), &bz))
}

/// Element of SO(3) with its SU(2) lift.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerRotation<T: Real> {
    pub rotation: Matrix3<T>,
    pub axis: [T; 3],
    /// In `[0, π]`.
    pub angle: T,
    pub su2: CMat<T>,
}

/// `exp(−iθ n·σ/2)`.
pub fn su2_from_axis_angle<T: Real>(axis: &[T; 3], angle: T) -> CMat<T> {
    let n = Vector3::new(axis[0], axis[1], axis[2]).normalize();
    let half = angle * T::lit(0.5);
    su2_from_quaternion(half.cos(), &(n * half.sin()))
}

fn su2_from_quaternion<T: Real>(w: T, v: &Vector3<T>) -> CMat<T> {
    CMat::from_row_slice(2, 2, &[c(w, -v.z), c(-v.y, -v.x), c(v.y, -v.x), c(w, v.z)])
}

/// `R_ij = ½ tr(σ_i U σ_j U†)`.
pub fn adjoint_rotation<T: Real>(u: &CMat<T>) -> Matrix3<T> {
    let p = linalg::paulis::<T>();
    Matrix3::from_fn(|i, j| linalg::trace(&(&p[i + 1] * u * &p[j + 1] * u.adjoint())).re * T::lit(0.5))
}

impl<T: Real> WignerRotation<T> {
    /// Lifts an orthogonal matrix (within `1e−10`) to SU(2).
    pub fn from_matrix(rotation: Matrix3<T>) -> Result<Self> {
        let tol = T::lit(1e-10).max(T::eps() * T::lit(1e3));
        if (rotation.transpose() * rotation - Matrix3::identity()).amax() > tol || rotation.determinant() < T::zero() {
            bail!(Numerical, "spatial block is not a rotation");
        }
        let mut q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(rotation));
        if q.w < T::zero() {
            q = UnitQuaternion::new_unchecked(-q.into_inner());
        }
        let v = q.imag();
        let s = v.norm();
        let angle = T::lit(2.0) * s.atan2(q.w);
        let axis = if s > T::zero() { v / s } else { Vector3::z() };
        Ok(Self { rotation, axis: [axis.x, axis.y, axis.z], angle, su2: su2_from_quaternion(q.w, &v) })
    }
}

/// `W(Λ, p) = L⁻¹(Λp) Λ L(p)` with canonical massive standard boosts.
pub fn wigner_rotation<T: Real>(lambda: &LorentzTransform<T>, p: &FourVector<T>, m: T) -> Result<WignerRotation<T>> {
    let lp = standard_boost_massive(p, m)?;
    let p_new = lambda.apply(p);
    // rebuild the image on shell to keep the check tolerance independent of Λ's size
    let p_new = FourVector::on_shell(m, p_new.spatial());
    let w = compose(&standard_boost_massive(&p_new, m)?.inverse(), &compose(lambda, &lp));
    let leak = w.matrix.row(0).iter().skip(1).chain(w.matrix.column(0).iter().skip(1)).fold(T::zero(), |a, &x| a.max(fabs(x)));
    let tol = T::lit(1e-8).max(T::eps() * T::lit(1e6)) * lambda.matrix.amax().max(T::one()).powi(2);
    if leak > tol || fabs(w.matrix[(0, 0)] - T::one()) > tol {
        bail!(Numerical, "little-group element does not fix the rest momentum (leak {leak})");
    }
    WignerRotation::from_matrix(w.spatial_block())
}

/// Helicity phase `ξ(Λ, k̂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityPhase<T> {
    /// Phase multiplying the `+` helicity amplitude when polarization is
    /// tracked by the geometric vectors `R(k̂)(1, ±i, 0)/√2`.
    pub xi: T,
    /// Rotation angle about `ẑ` of the little-group element at `(1, 0, 0, 1)`.
    /// For these vectors `ξ = −little_group_angle`.
    pub little_group_angle: T,
}

impl<T: Real> HelicityPhase<T> {
    pub fn factor(&self, helicity: i8) -> C<T> {
        crate::scalar::cis(self.xi * T::lit(helicity as f64))
    }
}

/// `R(k̂)(1, ±i, 0)/√2` as complex 3-vectors.
pub fn helicity_vectors<T: Real>(theta: T, phi: T) -> [[C<T>; 3]; 2] {
    let r = rotation_to_khat(theta, phi);
    let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    [T::one(), -T::one()].map(|s| std::array::from_fn(|i| c(r[(i, 0)] * h, s * r[(i, 1)] * h)))
}

pub fn helicity_phase<T: Real>(lambda: &LorentzTransform<T>, k: &FourVector<T>) -> Result<HelicityPhase<T>> {
    let lk = standard_boost_massless(k)?;
    let k_new = lambda.apply(k);
    let (th, ph) = k_new.angles();
    let norm = k_new.spatial().norm();
    let k_new = FourVector::new(norm, norm * th.sin() * ph.cos(), norm * th.sin() * ph.sin(), norm * th.cos());
    let e = compose(&standard_boost_massless(&k_new)?.inverse(), &compose(lambda, &lk)).matrix;
    let angle = e[(2, 1)].atan2(e[(1, 1)]);
    // factor out the rotation; the remainder must shift (0, 1, ±i, 0) only along (1, 0, 0, 1)
    let r = rotation(Vector3::z(), -angle)?.matrix;
    let s = e * r;
    let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let tol = T::lit(1e-10).max(T::eps() * T::lit(1e4)) * lambda.matrix.amax().max(T::one()).powi(2);
    for sign in [T::one(), -T::one()] {
        let re = Vector4::new(T::zero(), h, T::zero(), T::zero());
        let im = Vector4::new(T::zero(), T::zero(), sign * h, T::zero());
        for d in [s * re - re, s * im - im] {
            let off = fabs(d[1]).max(fabs(d[2])).max(fabs(d[3] - d[0]));
            if off > tol {
                bail!(Numerical, "little-group translation acts non-trivially on helicity states ({off})");
            }
        }
    }
    Ok(HelicityPhase { xi: -angle, little_group_angle: angle })
}

/// Photon direction and energy seen by an observer moving with velocity `v`
/// along `+ẑ`, for a photon of unit energy at polar angle `θ`.
/// Returns `(θ′, k′⁰)`; the azimuth is unchanged.
pub fn aberrate<T: Real>(theta: T, v: T) -> Result<(T, T)> {
    if !(fabs(v) < T::one()) {
        bail!(Domain, "observer speed {v} must be below 1");
    }
    if !(theta >= T::zero() && theta <= T::pi()) {
        bail!(Domain, "polar angle {theta} outside [0, π]");
    }
    let gamma = T::one() / (T::one() - v * v).sqrt();
    let d = T::one() - v * theta.cos();
    let cos = (theta.cos() - v) / d;
    let sin = theta.sin() / (gamma * d);
    Ok((sin.atan2(cos), gamma * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{trial_rng, uniform, unit_vector3};

    fn v3(a: [f64; 3]) -> Vector3<f64> {
        Vector3::new(a[0], a[1], a[2])
    }

    fn random_momentum(seed: u64, trial: u64) -> Vector3<f64> {
        let mut rng = trial_rng(seed, trial);
        let dir = v3(unit_vector3(&mut rng));
        dir * uniform::<f64, _>(&mut rng, 0.0, 5.0)
    }

    #[test]
    fn boost_basics() {
        assert_eq!(boost(Vector3::<f64>::zeros()).unwrap().matrix(), &Matrix4::identity());
        let r = rotation(Vector3::<f64>::z(), 2.0 * std::f64::consts::PI).unwrap();
        assert!((r.matrix() - Matrix4::identity()).amax() < 1e-15);
        let p = boost(Vector3::new(0.0, 0.0, 0.6)).unwrap().apply(&FourVector::new(1.0, 0.0, 0.0, 0.0));
        assert!((p.to_vector() - Vector4::new(1.25, 0.0, 0.0, 0.75)).amax() < 1e-15);
        assert!(boost(Vector3::new(0.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn group_properties() {
        for trial in 0..200 {
            let mut rng = trial_rng(3, trial);
            let v = v3(unit_vector3(&mut rng)) * uniform::<f64, _>(&mut rng, 0.0, 0.95);
            let ax = v3(unit_vector3(&mut rng));
            let ang = uniform::<f64, _>(&mut rng, -3.0, 3.0);
            let l = compose(&boost(v).unwrap(), &rotation(ax, ang).unwrap());
            assert!(LorentzTransform::new(*l.matrix()).is_ok());
            assert!((compose(&l.inverse(), &l).matrix() - Matrix4::identity()).amax() < 1e-12);
        }
        assert!(LorentzTransform::new(Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, 1.0))).is_err());
        assert!(LorentzTransform::new(Matrix4::from_diagonal(&Vector4::new(-1.0, -1.0, 1.0, 1.0))).is_err());
    }

    #[test]
    fn massive_standard_boost() {
        let m: f64 = 1.3;
        let rest = FourVector::new(m, 0.0, 0.0, 0.0);
        assert_eq!(standard_boost_massive(&rest, m).unwrap().matrix(), &Matrix4::identity());
        let q: f64 = 0.7;
        let l = standard_boost_massive(&FourVector::on_shell(m, Vector3::new(0.0, 0.0, q)), m).unwrap();
        let eta = (q / m).asinh();
        assert!((l.matrix()[(0, 0)] - eta.cosh()).abs() < 1e-14 && (l.matrix()[(0, 3)] - eta.sinh()).abs() < 1e-14);
        for trial in 0..1000 {
            let p = FourVector::on_shell(m, random_momentum(7, trial));
            let got = standard_boost_massive(&p, m).unwrap().apply(&rest);
            assert!((got.to_vector() - p.to_vector()).amax() < 1e-10);
        }
        assert!(standard_boost_massive(&FourVector::new(1.0, 0.5, 0.0, 0.0), m).is_err());
    }

    #[test]
    fn massless_standard_boost() {
        let ks = FourVector::new(1.0, 0.0, 0.0, 1.0);
        assert!((standard_boost_massless(&ks).unwrap().matrix() - Matrix4::identity()).amax() < 1e-15);
        let l = standard_boost_massless(&FourVector::new(2.0, 0.0, 0.0, 2.0)).unwrap();
        let b = boost_rapidity(Vector3::z(), 2f64.ln()).unwrap();
        assert!((l.matrix() - b.matrix()).amax() < 1e-15);
        let th: f64 = 0.8;
        let l = standard_boost_massless(&FourVector::new(1.0, th.sin(), 0.0, th.cos())).unwrap();
        let ry = rotation(Vector3::y(), th).unwrap();
        assert!((l.matrix() - ry.matrix()).amax() < 1e-14);
        for trial in 0..1000 {
            let q = random_momentum(8, trial);
            let k = FourVector::new(q.norm(), q.x, q.y, q.z);
            let got = standard_boost_massless(&k).unwrap().apply(&ks);
            assert!((got.to_vector() - k.to_vector()).amax() < 1e-10);
        }
        assert!(standard_boost_massless(&FourVector::new(1.0, 0.5, 0.0, 0.0)).is_err());
    }

    #[test]
    fn rotation_to_khat_matches_display() {
        assert_eq!(rotation_to_khat(0.0f64, 0.0), Matrix3::identity());
        let r = rotation_to_khat(std::f64::consts::FRAC_PI_2, 0.0);
        let expect = Matrix3::new(0.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 0.0);
        assert!((r - expect).amax() < 1e-15);
        let (t, p) = (1.1f64, -2.3f64);
        let z = rotation_to_khat(t, p) * Vector3::z();
        assert!((z - Vector3::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos())).amax() < 1e-15);
        assert!((rotation_to_khat(t, p).determinant() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wigner_for_rotations_and_collinear_boosts() {
        let m = 1.0;
        for trial in 0..200 {
            let mut rng = trial_rng(9, trial);
            let p = FourVector::on_shell(m, random_momentum(10, trial));
            let r = rotation(v3(unit_vector3(&mut rng)), uniform::<f64, _>(&mut rng, -3.0, 3.0)).unwrap();
            let w = wigner_rotation(&r, &p, m).unwrap();
            assert!((w.rotation - r.spatial_block()).amax() < 1e-10);
            assert!((w.rotation.transpose() * w.rotation - Matrix3::identity()).amax() < 1e-10);
            assert!((adjoint_rotation(&w.su2) - w.rotation).amax() < 1e-10);
        }
        let p = FourVector::on_shell(m, Vector3::new(0.0, 0.0, 2.0));
        let w = wigner_rotation(&boost(Vector3::new(0.0, 0.0, -0.7)).unwrap(), &p, m).unwrap();
        assert!((w.rotation - Matrix3::identity()).amax() < 1e-12 && w.angle.abs() < 1e-7);
    }

    #[test]
    fn perpendicular_boost_wigner_angle() {
        // independent matrices: x-boost and z-boost of rapidity 1, written out by hand
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let bx = Matrix4::new(ch, sh, 0.0, 0.0, sh, ch, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        let bz = Matrix4::new(ch, 0.0, 0.0, sh, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, sh, 0.0, 0.0, ch);
        let p_new = bx * bz * Vector4::new(1.0, 0.0, 0.0, 0.0);
        // canonical boost to p_new, inverted by hand
        let g = p_new[0];
        let u = Vector3::new(p_new[1], p_new[2], p_new[3]);
        let mut inv = Matrix4::identity();
        inv[(0, 0)] = g;
        for i in 0..3 {
            inv[(0, i + 1)] = -u[i];
            inv[(i + 1, 0)] = -u[i];
            for j in 0..3 {
                inv[(i + 1, j + 1)] += (g - 1.0) * u[i] * u[j] / u.norm_squared();
            }
        }
        let oracle = (inv * bx * bz).fixed_view::<3, 3>(1, 1).into_owned();
        let p = FourVector::new(ch, 0.0, 0.0, sh);
        let lambda = LorentzTransform::new(bx).unwrap();
        let w = wigner_rotation(&lambda, &p, 1.0).unwrap();
        assert!((w.rotation - oracle).amax() < 1e-12);
        assert!(w.axis[1].abs() > 1.0 - 1e-12);
        // Thomas-Wigner angle for perpendicular boosts
        let expect = ((2.0 * ch) / (1.0 + ch * ch)).acos();
        assert!((w.angle - expect).abs() < 1e-12);
    }

    #[test]
    fn su2_double_cover() {
        for trial in 0..100 {
            let mut rng = trial_rng(11, trial);
            let n = unit_vector3::<f64, _>(&mut rng);
            let a = uniform::<f64, _>(&mut rng, 0.0, 3.0);
            let u = su2_from_axis_angle(&n, a);
            let v = su2_from_axis_angle(&n.map(|x| -x), -a);
            assert!(linalg::max_abs(&(&u - &v)) < 1e-14);
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            assert!((det - crate::scalar::cr(1.0)).norm() < 1e-14);
            let r = Rotation3::from_axis_angle(&Unit::new_normalize(v3(n)), a);
            assert!((adjoint_rotation(&u) - r.matrix()).amax() < 1e-10);
        }
    }

    #[test]
    fn helicity_phase_examples() {
        let k = FourVector::new(1.0, 0.0, 0.0, 1.0);
        let phi: f64 = 0.4;
        let h = helicity_phase(&rotation(Vector3::z(), phi).unwrap(), &k).unwrap();
        assert!((h.little_group_angle - phi).abs() < 1e-14);
        assert!((h.xi + phi).abs() < 1e-14);
        let k = FourVector::<f64>::new(2.0, 2.0 * 0.6, 2.0 * 0.8, 0.0);
        let h = helicity_phase(&boost_rapidity(Vector3::new(0.6, 0.8, 0.0), 1.7).unwrap(), &k).unwrap();
        assert!(h.xi.abs() < 1e-12);
    }

    #[test]
    fn helicity_phase_matches_geometric_transport() {
        for trial in 0..300 {
            let mut rng = trial_rng(12, trial);
            let q = v3(unit_vector3(&mut rng)) * uniform::<f64, _>(&mut rng, 0.1, 3.0);
            let k = FourVector::new(q.norm(), q.x, q.y, q.z);
            let l = compose(
                &boost(v3(unit_vector3(&mut rng)) * uniform::<f64, _>(&mut rng, 0.0, 0.9)).unwrap(),
                &rotation(v3(unit_vector3(&mut rng)), uniform::<f64, _>(&mut rng, -3.0, 3.0)).unwrap(),
            );
            let h = helicity_phase(&l, &k).unwrap();
            let kn = l.apply(&k);
            let (t0, p0) = k.angles();
            let (t1, p1) = kn.angles();
            let before = helicity_vectors(t0, p0);
            let after = helicity_vectors(t1, p1);
            for (s, sign) in [(0usize, 1i8), (1, -1)] {
                // Λ acting on (0, ε) equals e^{±iξ}(0, ε') up to a multiple of k'
                let lm = l.matrix().map(crate::scalar::cr);
                let e4 = nalgebra::Vector4::new(crate::scalar::cr(0.0), before[s][0], before[s][1], before[s][2]);
                let img = lm * e4;
                let f = h.factor(sign);
                let target = nalgebra::Vector4::new(crate::scalar::cr(0.0), after[s][0] * f, after[s][1] * f, after[s][2] * f);
                let d = img - target;
                let gauge = d[0] / kn.t;
                let kv = kn.to_vector().map(crate::scalar::cr);
                let res = (d - kv * gauge).camax();
                assert!(res < 1e-10, "trial {trial}: {res}");
            }
        }
    }

    #[test]
    fn aberration_values() {
        let (t, k0) = aberrate(0.3f64, 0.0).unwrap();
        assert!((t - 0.3).abs() < 1e-15 && (k0 - 1.0).abs() < 1e-15);
        let (t, _) = aberrate(0.01f64, 0.6).unwrap();
        assert!((t / 0.01 - 2.0).abs() < 2e-3);
        let (t, _) = aberrate(std::f64::consts::FRAC_PI_2, 0.6).unwrap();
        assert!((t.cos() + 0.6).abs() < 1e-14 && (t - 2.2143).abs() < 1e-4);
        for i in 0..=100 {
            let th = std::f64::consts::PI * i as f64 / 100.0;
            for v in [-0.9, -0.3, 0.2, 0.75] {
                let (t1, _) = aberrate(th, v).unwrap();
                let (t2, _) = aberrate(t1, -v).unwrap();
                assert!((t2 - th).abs() < 1e-10);
            }
        }
        assert!(aberrate(0.1f64, 1.0).is_err());
    }

    #[test]
    fn aberration_agrees_with_boost() {
        let v = 0.6;
        let l = boost(Vector3::new(0.0, 0.0, -v)).unwrap();
        for th in [0.1f64, 1.0, 2.5] {
            let k = FourVector::new(1.0, th.sin(), 0.0, th.cos());
            let kn = l.apply(&k);
            let (t, k0) = aberrate(th, v).unwrap();
            assert!((kn.angles().0 - t).abs() < 1e-14 && (kn.t - k0).abs() < 1e-14);
        }
    }
}
