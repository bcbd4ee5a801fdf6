//! Small dense linear-algebra helpers on top of nalgebra.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use crate::{CMat, Error, RMat, Result, C64};

/// Default relative tolerance for rank and membership tests.
pub const REL_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub const I: C64 = C64::new(0.0, 1.0);

pub fn cvec(v: &[C64]) -> DVector<C64> {
    DVector::from_column_slice(v)
}

/// Entrywise complex conjugate (no transpose).
pub fn conj_mat(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

pub fn re_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn im_part(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

/// Frobenius norm of a complex matrix.
pub fn cnorm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn rnorm(m: &RMat) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn inverse(m: &CMat, module: &'static str) -> Result<CMat> {
    if !m.is_square() {
        return Err(Error::dim(module, "inverse of a non-square matrix"));
    }
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::singular(module, "matrix is not invertible"))
}

pub fn rinverse(m: &RMat, module: &'static str) -> Result<RMat> {
    if !m.is_square() {
        return Err(Error::dim(module, "inverse of a non-square matrix"));
    }
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::singular(module, "matrix is not invertible"))
}

pub fn det(m: &CMat) -> C64 {
    m.clone().lu().determinant()
}

pub fn rdet(m: &RMat) -> f64 {
    m.clone().lu().determinant()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(s: &RMat) -> Vec<f64> {
    let sym = (s + s.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Eigen-decomposition of a real symmetric matrix: (eigenvalues, eigenvectors as columns).
pub fn symmetric_eigen(s: &RMat) -> (Vec<f64>, RMat) {
    let sym = (s + s.transpose()) * 0.5;
    let e = sym.symmetric_eigen();
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut sv: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Numerical rank with a tolerance relative to the largest singular value.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * top).count()
}

/// Counts of (positive, negative) eigenvalues, treating |λ| ≤ tol·max|λ| as zero.
pub fn inertia(eigs: &[f64], rel_tol: f64) -> (usize, usize) {
    let scale = eigs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let cut = rel_tol * scale.max(f64::MIN_POSITIVE);
    let pos = eigs.iter().filter(|e| **e > cut).count();
    let neg = eigs.iter().filter(|e| **e < -cut).count();
    (pos, neg)
}

pub fn is_symmetric(m: &CMat, rel_tol: f64) -> bool {
    m.is_square() && cnorm(&(m - m.transpose())) <= rel_tol * cnorm(m).max(1.0)
}

pub fn is_hermitian(m: &CMat, rel_tol: f64) -> bool {
    m.is_square() && cnorm(&(m - m.adjoint())) <= rel_tol * cnorm(m).max(1.0)
}

/// Block matrix `[[a, b], [c, d]]`.
pub fn block2<T: nalgebra::Scalar + num_traits::Zero>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    c: &DMatrix<T>,
    d: &DMatrix<T>,
) -> DMatrix<T> {
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut m = DMatrix::<T>::zeros(r1 + r2, c1 + c2);
    m.view_mut((0, 0), (r1, c1)).copy_from(a);
    m.view_mut((0, c1), (r1, c2)).copy_from(b);
    m.view_mut((r1, 0), (r2, c1)).copy_from(c);
    m.view_mut((r1, c1), (r2, c2)).copy_from(d);
    m
}

/// Bilinear dot product `Σ a_j b_j` (no conjugation).
pub fn bdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Matrix–vector product for slices.
pub fn matvec(m: &CMat, v: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Quadratic form `Q v · v` (bilinear).
pub fn quad_form(m: &CMat, v: &[C64]) -> C64 {
    bdot(&matvec(m, v), v)
}

/// Realify a complex vector: `(Re x, Im x)`.
pub fn realify(x: &[C64]) -> Vec<f64> {
    let mut v: Vec<f64> = x.iter().map(|z| z.re).collect();
    v.extend(x.iter().map(|z| z.im));
    v
}

pub fn complexify(v: &[f64]) -> Vec<C64> {
    let n = v.len() / 2;
    (0..n).map(|j| C64::new(v[j], v[n + j])).collect()
}

pub fn rquad(s: &RMat, v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..s.nrows() {
        for j in 0..s.ncols() {
            acc += v[i] * s[(i, j)] * v[j];
        }
    }
    acc
}
