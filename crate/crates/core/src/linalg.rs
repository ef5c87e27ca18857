//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{bail, Result};
use crate::scalar::{c, cr, czero, fabs, Real, C};

pub type CMat<T> = DMatrix<C<T>>;
pub type CVec<T> = DVector<C<T>>;

pub fn identity<T: Real>(dim: usize) -> CMat<T> {
    CMat::identity(dim, dim)
}

pub fn zeros<T: Real>(rows: usize, cols: usize) -> CMat<T> {
    CMat::from_element(rows, cols, czero())
}

/// Builds a complex matrix from row-major real/imaginary pairs.
pub fn from_rows<T: Real>(rows: usize, cols: usize, entries: &[(f64, f64)]) -> CMat<T> {
    assert_eq!(entries.len(), rows * cols, "entry count");
    CMat::from_row_iterator(
        rows,
        cols,
        entries.iter().map(|&(re, im)| c(T::lit(re), T::lit(im))),
    )
}

pub fn from_real_rows<T: Real>(rows: usize, cols: usize, entries: &[f64]) -> CMat<T> {
    CMat::from_row_iterator(rows, cols, entries.iter().map(|&x| cr(T::lit(x))))
}

pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a.kronecker(b)
}

/// `|v⟩⟨v|`
pub fn outer<T: Real>(v: &CVec<T>) -> CMat<T> {
    v * v.adjoint()
}

/// Computational basis vector `|index⟩` in dimension `dim`.
pub fn basis<T: Real>(dim: usize, index: usize) -> CVec<T> {
    let mut v = CVec::from_element(dim, czero());
    v[index] = cr(T::one());
    v
}

pub fn trace<T: Real>(m: &CMat<T>) -> C<T> {
    m.diagonal().iter().fold(czero(), |acc, &x| acc + x)
}

/// `(M + M†)/2`.
pub fn hermitize<T: Real>(m: &CMat<T>) -> CMat<T> {
    (m + m.adjoint()) * cr(T::lit(0.5))
}

/// Largest entry modulus.
pub fn max_abs<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.norm_sqr().sqrt()))
}

pub fn is_hermitian<T: Real>(m: &CMat<T>, tol: T) -> bool {
    m.is_square() && max_abs(&(m - m.adjoint())) <= tol
}

pub fn is_unitary<T: Real>(m: &CMat<T>, tol: T) -> bool {
    m.is_square() && max_abs(&(m.adjoint() * m - identity::<T>(m.nrows()))) <= tol
}

/// Spectral decomposition of a Hermitian matrix. Eigenvalues are returned in
/// ascending order with matching eigenvector columns. The input is
/// symmetrized first.
pub fn eigh<T: Real>(m: &CMat<T>) -> (Vec<T>, CMat<T>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

pub fn eigvalsh<T: Real>(m: &CMat<T>) -> Vec<T> {
    eigh(m).0
}

/// Rebuilds `V diag(f(λ)) V†`.
pub fn spectral_map<T: Real>(values: &[T], vectors: &CMat<T>, f: impl Fn(T) -> T) -> CMat<T> {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (col, &lambda) in values.iter().enumerate() {
        let factor = cr(f(lambda));
        for r in 0..n {
            scaled[(r, col)] *= factor;
        }
    }
    scaled * vectors.adjoint()
}

/// Square root of a PSD matrix. Eigenvalues in `[-tol, 0)` are clipped to
/// zero; anything more negative is rejected.
pub fn psd_sqrt<T: Real>(m: &CMat<T>, tol: T) -> Result<CMat<T>> {
    let (values, vectors) = eigh(m);
    if let Some(&min) = values.first() {
        if min < -tol {
            bail!(Validation, "matrix not positive semidefinite (min eigenvalue {min})");
        }
    }
    Ok(spectral_map(&values, &vectors, |x| x.max(T::zero()).sqrt()))
}

/// Trace norm `tr|M|` of a Hermitian matrix.
pub fn trace_norm<T: Real>(m: &CMat<T>) -> T {
    eigvalsh(m).into_iter().fold(T::zero(), |acc, x| acc + fabs(x))
}

/// Projector onto the eigenspaces of a Hermitian matrix with positive eigenvalue.
pub fn positive_part_projector<T: Real>(m: &CMat<T>) -> CMat<T> {
    let (values, vectors) = eigh(m);
    spectral_map(&values, &vectors, |x| if x > T::zero() { T::one() } else { T::zero() })
}

/// Pauli matrices `[1, σx, σy, σz]`.
pub fn paulis<T: Real>() -> [CMat<T>; 4] {
    let (o, l) = (T::zero(), T::one());
    [
        identity(2),
        CMat::from_row_slice(2, 2, &[c(o, o), c(l, o), c(l, o), c(o, o)]),
        CMat::from_row_slice(2, 2, &[c(o, o), c(o, -l), c(o, l), c(o, o)]),
        CMat::from_row_slice(2, 2, &[c(l, o), c(o, o), c(o, o), c(-l, o)]),
    ]
}

/// Real-valued `n·σ` for a 3-vector `n`.
pub fn bloch_observable<T: Real>(n: &[T; 3]) -> CMat<T> {
    let p = paulis::<T>();
    &p[1] * cr(n[0]) + &p[2] * cr(n[1]) + &p[3] * cr(n[2])
}

/// Inner product `⟨a|b⟩`.
pub fn inner<T: Real>(a: &CVec<T>, b: &CVec<T>) -> C<T> {
    a.iter().zip(b.iter()).fold(czero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn vec_norm<T: Real>(v: &CVec<T>) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}
