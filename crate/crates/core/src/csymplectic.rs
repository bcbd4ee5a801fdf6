//! Complex symplectic linear algebra on `C^{2n}`: the form σ, canonical maps,
//! Lagrangian planes, the antilinear involution attached to a weight, the
//! Hermitian form `b`, positivity, and real quadratic forms on `C^n`.

use alloc::vec::Vec;
use nalgebra::DVector;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{
    self, block2, c, cnorm, conj_mat, inertia, rnorm, symmetric_eigenvalues, I, REL_TOL,
};
use crate::phase::FBIPhase;
use crate::{CMat, Error, RMat, Result, C64};

const MODULE: &str = "csymplectic";

/// A point `(x, ξ)` of `C^{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceVector {
    entries: DVector<C64>,
}

impl PhaseSpaceVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() || entries.len() % 2 != 0 {
            return Err(Error::dim(
                MODULE,
                "phase-space vectors need positive even length",
            ));
        }
        Ok(PhaseSpaceVector {
            entries: DVector::from_vec(entries),
        })
    }

    pub fn n(&self) -> usize {
        self.entries.len() / 2
    }

    pub fn entries(&self) -> &DVector<C64> {
        &self.entries
    }
}

/// `J = [[0, I], [-I, 0]]`.
pub fn j_matrix(n: usize) -> CMat {
    let z = CMat::zeros(n, n);
    let id = CMat::identity(n, n);
    block2(&z, &id, &(-&id), &z)
}

/// `σ(X, Y) = JX · Y` (bilinear).
pub fn symplectic_form(x: &PhaseSpaceVector, y: &PhaseSpaceVector) -> Result<C64> {
    if x.entries.len() != y.entries.len() {
        return Err(Error::dim(MODULE, "σ of vectors with different lengths"));
    }
    let jx = j_matrix(x.n()) * &x.entries;
    Ok(jx.iter().zip(y.entries.iter()).map(|(a, b)| a * b).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalityReport {
    pub canonical: bool,
    /// `‖MᵀJM − J‖_F`.
    pub defect: f64,
}

/// Test `MᵀJM = J`.
pub fn is_canonical(m: &CMat) -> CanonicalityReport {
    if !m.is_square() || m.nrows() % 2 != 0 || m.nrows() == 0 {
        return CanonicalityReport {
            canonical: false,
            defect: f64::INFINITY,
        };
    }
    let j = j_matrix(m.nrows() / 2);
    let defect = cnorm(&(m.transpose() * &j * m - &j));
    let scale = cnorm(m).powi(2).max(1.0);
    CanonicalityReport {
        canonical: defect <= 1e-9 * scale,
        defect,
    }
}

/// A σ-preserving linear map of `C^{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalMap {
    matrix: CMat,
}

impl CanonicalMap {
    pub fn new(matrix: CMat) -> Result<Self> {
        let rep = is_canonical(&matrix);
        if !rep.canonical {
            return Err(Error::input(
                MODULE,
                alloc::format!("not canonical (defect {:.3e})", rep.defect),
            ));
        }
        let d = linalg::det(&matrix);
        if (d - c(1.0, 0.0)).norm() > 1e-8 * cnorm(&matrix).powi(matrix.nrows() as i32).max(1.0) {
            return Err(Error::input(MODULE, "canonical map with determinant ≠ 1"));
        }
        Ok(CanonicalMap { matrix })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        linalg::matvec(&self.matrix, v)
    }

    pub fn compose(&self, other: &CanonicalMap) -> CanonicalMap {
        CanonicalMap {
            matrix: &self.matrix * &other.matrix,
        }
    }
}

/// A complex Lagrangian plane given by a `2n × n` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianPlane {
    basis: CMat,
}

impl LagrangianPlane {
    pub fn new(basis: CMat) -> Result<Self> {
        let (r, k) = basis.shape();
        if r != 2 * k || k == 0 {
            return Err(Error::dim(MODULE, "Lagrangian basis must be 2n × n"));
        }
        if linalg::rank(&basis, REL_TOL) != k {
            return Err(Error::input(MODULE, "Lagrangian basis is rank deficient"));
        }
        let j = j_matrix(k);
        let iso = cnorm(&(basis.transpose() * j * &basis));
        if iso > 1e-9 * cnorm(&basis).powi(2).max(1.0) {
            return Err(Error::input(
                MODULE,
                alloc::format!("σ does not vanish on the span ({iso:.3e})"),
            ));
        }
        Ok(LagrangianPlane { basis })
    }

    /// The graph `ξ = F x` of a symmetric `F`.
    pub fn graph(f: &CMat) -> Result<Self> {
        let n = f.nrows();
        let mut b = CMat::zeros(2 * n, n);
        b.view_mut((0, 0), (n, n)).copy_from(&CMat::identity(n, n));
        b.view_mut((n, 0), (n, n)).copy_from(f);
        Self::new(b)
    }

    /// The fiber `{(0, η)}`.
    pub fn fiber(n: usize) -> Self {
        let mut b = CMat::zeros(2 * n, n);
        b.view_mut((n, 0), (n, n)).copy_from(&CMat::identity(n, n));
        LagrangianPlane { basis: b }
    }

    /// The zero section `{(x, 0)}`.
    pub fn zero_section(n: usize) -> Self {
        let mut b = CMat::zeros(2 * n, n);
        b.view_mut((0, 0), (n, n)).copy_from(&CMat::identity(n, n));
        LagrangianPlane { basis: b }
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.ncols()
    }

    /// Image under a canonical map.
    pub fn image(&self, k: &CanonicalMap) -> Result<LagrangianPlane> {
        LagrangianPlane::new(k.matrix() * &self.basis)
    }
}

/// Antilinear map `Z ↦ G·conj(Z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearInvolution {
    g: CMat,
}

impl AntilinearInvolution {
    pub fn new(g: CMat) -> Result<Self> {
        if !g.is_square() || g.nrows() % 2 != 0 {
            return Err(Error::dim(MODULE, "involution matrix must be 2n × 2n"));
        }
        let n2 = g.nrows();
        let scale = cnorm(&g).powi(2).max(1.0);
        if cnorm(&(&g * conj_mat(&g) - CMat::identity(n2, n2))) > 1e-9 * scale {
            return Err(Error::input(MODULE, "G·conj(G) ≠ I: not an involution"));
        }
        let j = j_matrix(n2 / 2);
        if cnorm(&(g.transpose() * &j * &g - &j)) > 1e-9 * scale {
            return Err(Error::input(MODULE, "σ(ΓX,ΓY) ≠ conj σ(X,Y)"));
        }
        Ok(AntilinearInvolution { g })
    }

    /// Complex conjugation, the involution of `R^{2n}`.
    pub fn conjugation(n: usize) -> Self {
        AntilinearInvolution {
            g: CMat::identity(2 * n, 2 * n),
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.g
    }

    pub fn apply(&self, z: &[C64]) -> Vec<C64> {
        let zc: Vec<C64> = z.iter().map(|v| v.conj()).collect();
        linalg::matvec(&self.g, &zc)
    }
}

/// Real quadratic form on `C^n ≅ R^{2n}` (coordinates `Re x, Im x`), `q(v) = vᵀ S v`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealQuadraticForm2n {
    s: RMat,
}

impl RealQuadraticForm2n {
    pub fn new(s: RMat) -> Result<Self> {
        if !s.is_square() || s.nrows() % 2 != 0 || s.nrows() == 0 {
            return Err(Error::dim(MODULE, "real form must be 2n × 2n"));
        }
        if rnorm(&(&s - s.transpose())) > 1e-12 * rnorm(&s).max(1.0) {
            return Err(Error::input(MODULE, "real form is not symmetric"));
        }
        let s = (&s + s.transpose()) * 0.5;
        Ok(RealQuadraticForm2n { s })
    }

    pub fn matrix(&self) -> &RMat {
        &self.s
    }

    pub fn n(&self) -> usize {
        self.s.nrows() / 2
    }

    pub fn eval(&self, x: &[C64]) -> f64 {
        linalg::rquad(&self.s, &linalg::realify(x))
    }

    /// Real gradient `2 S v` in realified coordinates.
    pub fn real_gradient(&self, x: &[C64]) -> Vec<f64> {
        let v = linalg::realify(x);
        (0..v.len())
            .map(|i| 2.0 * (0..v.len()).map(|j| self.s[(i, j)] * v[j]).sum::<f64>())
            .collect()
    }

    pub fn add(&self, other: &RealQuadraticForm2n) -> RealQuadraticForm2n {
        RealQuadraticForm2n {
            s: &self.s + &other.s,
        }
    }

    pub fn scale(&self, a: f64) -> RealQuadraticForm2n {
        RealQuadraticForm2n { s: &self.s * a }
    }

    pub fn to_weight(&self) -> RealQuadraticWeight {
        RealQuadraticWeight::from_real_form(self)
    }

    pub fn is_psh(&self) -> bool {
        let (_, levi) = levi_decompose(self);
        let ev = symmetric_eigenvalues(&levi.s);
        let scale = ev
            .iter()
            .fold(0.0f64, |m, e| m.max(e.abs()))
            .max(rnorm(&self.s));
        ev.iter().all(|e| *e >= -REL_TOL * scale.max(1e-300))
    }
}

/// Real quadratic weight `Φ(x) = Re(P x·x) + (L x)·conj(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealQuadraticWeight {
    p: CMat,
    l: CMat,
}

impl RealQuadraticWeight {
    pub fn new(p: CMat, l: CMat) -> Result<Self> {
        if !p.is_square() || p.shape() != l.shape() || p.nrows() == 0 {
            return Err(Error::dim(MODULE, "P and L must be n × n"));
        }
        if !linalg::is_symmetric(&p, 1e-12) {
            return Err(Error::input(MODULE, "P must be complex symmetric"));
        }
        if !linalg::is_hermitian(&l, 1e-12) {
            return Err(Error::input(MODULE, "L must be Hermitian"));
        }
        let half = c(0.5, 0.0);
        Ok(RealQuadraticWeight {
            p: (&p + p.transpose()) * half,
            l: (&l + l.adjoint()) * half,
        })
    }

    /// `Φ = |x|²/2` in dimension `n`.
    pub fn standard(n: usize) -> Self {
        RealQuadraticWeight {
            p: CMat::zeros(n, n),
            l: CMat::identity(n, n) * c(0.5, 0.0),
        }
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    /// `Φ''_{xx}`.
    pub fn p(&self) -> &CMat {
        &self.p
    }

    /// Levi matrix `Φ''_{x̄x}`.
    pub fn l(&self) -> &CMat {
        &self.l
    }

    pub fn eval(&self, x: &[C64]) -> f64 {
        let px = linalg::quad_form(&self.p, x).re;
        let lx = linalg::matvec(&self.l, x);
        let herm: C64 = lx.iter().zip(x).map(|(a, b)| a * b.conj()).sum();
        px + herm.re
    }

    /// `∂_x Φ = P x + Lᵀ x̄`.
    pub fn holo_gradient(&self, x: &[C64]) -> Vec<C64> {
        let xc: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        let a = linalg::matvec(&self.p, x);
        let b = linalg::matvec(&self.l.transpose(), &xc);
        a.iter().zip(&b).map(|(u, v)| u + v).collect()
    }

    /// The fiber coordinate of `Λ_Φ` above `x`: `ξ = (2/i) ∂_x Φ(x)`.
    pub fn xi(&self, x: &[C64]) -> Vec<C64> {
        self.holo_gradient(x)
            .iter()
            .map(|g| g * c(0.0, -2.0))
            .collect()
    }

    pub fn levi_eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.l)
    }

    pub fn is_strictly_psh(&self) -> bool {
        self.levi_eigenvalues()
            .first()
            .map(|e| *e > 0.0)
            .unwrap_or(false)
    }

    pub fn to_real_form(&self) -> RealQuadraticForm2n {
        let pr = linalg::re_part(&self.p);
        let pi = linalg::im_part(&self.p);
        let lr = linalg::re_part(&self.l);
        let li = linalg::im_part(&self.l);
        let saa = &pr + &lr;
        let sbb = &lr - &pr;
        let sab = -(&pi + &li);
        let sba = sab.transpose();
        RealQuadraticForm2n {
            s: block2(&saa, &sab, &sba, &sbb),
        }
    }

    pub fn from_real_form(q: &RealQuadraticForm2n) -> Self {
        let n = q.n();
        let s = &q.s;
        let saa = s.view((0, 0), (n, n)).into_owned();
        let sbb = s.view((n, n), (n, n)).into_owned();
        let sab = s.view((0, n), (n, n)).into_owned();
        let lr = (&saa + &sbb) * 0.5;
        let pr = (&saa - &sbb) * 0.5;
        let pi = -(&sab + sab.transpose()) * 0.5;
        let li = -(&sab - sab.transpose()) * 0.5;
        let p = CMat::from_fn(n, n, |i, j| c(pr[(i, j)], pi[(i, j)]));
        let l = CMat::from_fn(n, n, |i, j| c(lr[(i, j)], li[(i, j)]));
        RealQuadraticWeight { p, l }
    }

    /// Basis of `Λ_Φ = {(x, (2/i)∂_xΦ(x))}` as a real-`2n`-dimensional plane:
    /// columns are images of `e_j` and `i e_j`.
    pub fn lambda_real_basis(&self) -> CMat {
        let n = self.n();
        let mut b = CMat::zeros(2 * n, 2 * n);
        for j in 0..2 * n {
            let mut x = alloc::vec![c(0.0, 0.0); n];
            x[j % n] = if j < n { c(1.0, 0.0) } else { I };
            let xi = self.xi(&x);
            for k in 0..n {
                b[(k, j)] = x[k];
                b[(n + k, j)] = xi[k];
            }
        }
        b
    }
}

/// The involution fixing `Λ_Φ` pointwise.
pub fn gamma_for_weight(w: &RealQuadraticWeight) -> Result<AntilinearInvolution> {
    let n = w.n();
    let linv = linalg::inverse(&w.l, MODULE)
        .map_err(|_| Error::singular(MODULE, "Levi matrix is singular"))?;
    let two_over_i = c(0.0, -2.0);
    let g11 = -(&linv * conj_mat(&w.p));
    let g12 = &linv * c(0.0, -0.5);
    let g21 = (&w.p * &g11 + w.l.transpose()) * two_over_i;
    let g22 = &w.p * &g12 * two_over_i;
    let g = block2(&g11, &g12, &g21, &g22);
    debug_assert_eq!(g.nrows(), 2 * n);
    AntilinearInvolution::new(g)
}

/// Matrix `H` of `b(X,Y) = (1/i)σ(X, ΓY)` on the plane basis: `b(Bu, Bu) = u* H u`.
pub fn hermitian_b(plane: &LagrangianPlane, gamma: &AntilinearInvolution) -> Result<CMat> {
    let b = plane.basis();
    if gamma.matrix().nrows() != b.nrows() {
        return Err(Error::dim(MODULE, "plane and involution dimensions differ"));
    }
    let j = j_matrix(plane.n());
    let m = (b.transpose() * j.transpose() * gamma.matrix() * conj_mat(b)) * c(0.0, -1.0);
    Ok(m.transpose())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positivity {
    Positive,
    Negative,
    Mixed,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub class: Positivity,
    pub eigenvalues: Vec<f64>,
}

pub fn classify_positivity(
    plane: &LagrangianPlane,
    gamma: &AntilinearInvolution,
) -> Result<PositivityReport> {
    let h = hermitian_b(plane, gamma)?;
    let eigenvalues = linalg::hermitian_eigenvalues(&h);
    let scale = cnorm(&h).max(cnorm(plane.basis()).powi(2) * 1e-300);
    let tol = REL_TOL * scale;
    let class = if eigenvalues.iter().any(|e| e.abs() <= tol) {
        Positivity::Degenerate
    } else if eigenvalues.iter().all(|e| *e > 0.0) {
        Positivity::Positive
    } else if eigenvalues.iter().all(|e| *e < 0.0) {
        Positivity::Negative
    } else {
        Positivity::Mixed
    };
    Ok(PositivityReport { class, eigenvalues })
}

/// Rank test for `Λ ∩ Σ ≠ {0}`, where `Σ` is the fixed set of `Γ`.
pub fn meets_fixed_set(plane: &LagrangianPlane, gamma: &AntilinearInvolution) -> bool {
    let b = plane.basis();
    let n = plane.n();
    let gb = gamma.matrix() * conj_mat(b);
    // Bu = G conj(Bu) with u = p + iq.
    let mp = &gb - b;
    let mq = (&gb + b) * c(0.0, -1.0);
    let rows = b.nrows();
    let mut real = RMat::zeros(2 * rows, 2 * n);
    for i in 0..rows {
        for j in 0..n {
            real[(i, j)] = mp[(i, j)].re;
            real[(rows + i, j)] = mp[(i, j)].im;
            real[(i, n + j)] = mq[(i, j)].re;
            real[(rows + i, n + j)] = mq[(i, j)].im;
        }
    }
    let sv = real.svd(false, false).singular_values;
    let top = sv.iter().fold(0.0f64, |m, s| m.max(*s));
    let r = sv.iter().filter(|s| **s > REL_TOL * top).count();
    r < 2 * n
}

/// Phase `φ(x,y) = ½A x·x + Bx·y − ½F₋ y·y`, `A = Bᵀ(F₊ − F₋)⁻¹B`, whose canonical map
/// sends `graph(F₊)` to `{ξ = 0}` and `graph(F₋)` to `{x = 0}`.
pub fn phase_from_pair(f_plus: &CMat, f_minus: &CMat, b: &CMat) -> Result<FBIPhase> {
    let n = f_plus.nrows();
    if f_minus.shape() != (n, n) || b.shape() != (n, n) || !f_plus.is_square() {
        return Err(Error::dim(MODULE, "F₊, F₋ and B must all be n × n"));
    }
    let im_plus = linalg::hermitian_eigenvalues(&linalg::to_complex(&linalg::im_part(f_plus)));
    let im_minus = linalg::hermitian_eigenvalues(&linalg::to_complex(&linalg::im_part(f_minus)));
    if im_plus.first().map(|e| *e <= 0.0).unwrap_or(true) {
        return Err(Error::pre(MODULE, "Im F₊ must be positive definite"));
    }
    if im_minus.last().map(|e| *e >= 0.0).unwrap_or(true) {
        return Err(Error::pre(MODULE, "Im F₋ must be negative definite"));
    }
    if linalg::det(b).norm() == 0.0 {
        return Err(Error::pre(MODULE, "B must be invertible"));
    }
    let diff = f_plus - f_minus;
    let dinv = linalg::inverse(&diff, MODULE)?;
    let a = b.transpose() * dinv * b;
    FBIPhase::new(a, b.clone(), -f_minus)
}

/// `(pluriharmonic part, Levi part)` of `q`: `h = (q − Jq)/2`, `ℓ = (q + Jq)/2`, `Jq(x) = q(ix)`.
pub fn levi_decompose(q: &RealQuadraticForm2n) -> (RealQuadraticForm2n, RealQuadraticForm2n) {
    let sj = j_action(&q.s);
    (
        RealQuadraticForm2n {
            s: (&q.s - &sj) * 0.5,
        },
        RealQuadraticForm2n {
            s: (&q.s + &sj) * 0.5,
        },
    )
}

/// Matrix of `x ↦ q(ix)`.
pub fn j_action(s: &RMat) -> RMat {
    let n = s.nrows() / 2;
    let z = RMat::zeros(n, n);
    let id = RMat::identity(n, n);
    let ic = block2(&z, &(-&id), &id, &z);
    ic.transpose() * s * ic
}

/// `(m₊, m₋)` for a real symmetric matrix, eigenvalue tolerance relative to the spectral radius.
pub fn signature_of(s: &RMat) -> (usize, usize) {
    inertia(&symmetric_eigenvalues(s), REL_TOL)
}

pub fn signature(q: &RealQuadraticForm2n) -> (usize, usize) {
    signature_of(&q.s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialCritical {
    /// `q'(x') = q(x', x''(x'))`.
    pub reduced: RMat,
    /// `x'' = M x'` at the critical point.
    pub critical_map: RMat,
    pub signature_full: (usize, usize),
    pub signature_reduced: (usize, usize),
    pub signature_fiber: (usize, usize),
}

/// Critical value of `q(x', x'')` in the last `d` variables (Schur complement).
pub fn partial_critical(q: &RMat, d: usize) -> Result<PartialCritical> {
    let m = q.nrows();
    if !q.is_square() || d == 0 || d >= m {
        return Err(Error::dim(MODULE, "split must leave both blocks non-empty"));
    }
    let k = m - d;
    let s11 = q.view((0, 0), (k, k)).into_owned();
    let s12 = q.view((0, k), (k, d)).into_owned();
    let s21 = q.view((k, 0), (d, k)).into_owned();
    let s22 = q.view((k, k), (d, d)).into_owned();
    let fiber_sig = signature_of(&s22);
    if fiber_sig.0 + fiber_sig.1 != d {
        return Err(Error::pre(MODULE, "q'' is degenerate"));
    }
    let s22inv = linalg::rinverse(&s22, MODULE)?;
    let critical_map = -(&s22inv * &s21);
    let reduced = &s11 - &s12 * &s22inv * &s21;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    Ok(PartialCritical {
        signature_full: signature_of(q),
        signature_reduced: signature_of(&reduced),
        signature_fiber: fiber_sig,
        reduced,
        critical_map,
    })
}

/// `Φ(x) = vc_y φ(x, y)` for a psh real form on `C^{n+k}` whose restriction to the
/// `y`-fiber is a col (signature `(k, k)`). Input realified as `(Re x, Re y, Im x, Im y)`.
pub fn critical_value_weight(phi: &RealQuadraticForm2n, k: usize) -> Result<RealQuadraticForm2n> {
    let total = phi.n();
    if k == 0 || k >= total {
        return Err(Error::dim(MODULE, "need 0 < k < n + k"));
    }
    if !phi.is_psh() {
        return Err(Error::pre(MODULE, "φ is not plurisubharmonic"));
    }
    let n = total - k;
    // Reorder to (Re x, Im x, Re y, Im y).
    let perm: Vec<usize> = (0..n)
        .chain(total..total + n)
        .chain(n..total)
        .chain(total + n..2 * total)
        .collect();
    let s = RMat::from_fn(2 * total, 2 * total, |i, j| phi.s[(perm[i], perm[j])]);
    let pc = partial_critical(&s, 2 * k)?;
    if pc.signature_fiber != (k, k) {
        return Err(Error::pre(MODULE, "∇²_y φ does not have signature (k, k)"));
    }
    let out = RealQuadraticForm2n::new(pc.reduced)?;
    if !out.is_psh() {
        return Err(Error::numerical(
            MODULE,
            "critical value is not plurisubharmonic",
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(n: usize, v: &[(f64, f64)]) -> CMat {
        CMat::from_row_slice(n, n, &v.iter().map(|&(a, b)| c(a, b)).collect::<Vec<_>>())
    }

    #[test]
    fn sigma_small_example() {
        let x = PhaseSpaceVector::new(alloc::vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let y = PhaseSpaceVector::new(alloc::vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(symplectic_form(&x, &y).unwrap(), c(-1.0, 0.0));
        assert_eq!(symplectic_form(&x, &x).unwrap(), c(0.0, 0.0));
        assert!(PhaseSpaceVector::new(alloc::vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn canonicality_examples() {
        assert!(is_canonical(&CMat::identity(2, 2)).canonical);
        assert!(is_canonical(&j_matrix(1)).canonical);
        let d = cm(2, &[(2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        assert!(!is_canonical(&d).canonical);
        let j = j_matrix(2);
        assert!(cnorm(&(&j * &j + CMat::identity(4, 4))) == 0.0);
    }

    #[test]
    fn gamma_of_standard_weight_fixes_lambda() {
        let w = RealQuadraticWeight::standard(1);
        let g = gamma_for_weight(&w).unwrap();
        for x in [c(0.3, -1.2), c(2.0, 0.5)] {
            let pt = alloc::vec![x, w.xi(&[x])[0]];
            let img = g.apply(&pt);
            assert!((img[0] - pt[0]).norm() < 1e-14 && (img[1] - pt[1]).norm() < 1e-14);
            // (x, (2/i) x̄/2)
            assert!((pt[1] - c(0.0, -1.0) * x.conj()).norm() < 1e-15);
        }
        let z = alloc::vec![c(0.1, 0.2), c(-0.7, 1.1)];
        let back = g.apply(&g.apply(&z));
        assert!((back[0] - z[0]).norm() < 1e-14 && (back[1] - z[1]).norm() < 1e-14);
    }

    #[test]
    fn b_on_graph_of_real_space() {
        let f = cm(1, &[(0.3, 1.0)]);
        let plane = LagrangianPlane::graph(&f).unwrap();
        let g = AntilinearInvolution::conjugation(1);
        let h = hermitian_b(&plane, &g).unwrap();
        // ½ b(X,X) = Im F |x|²
        assert!((h[(0, 0)] * 0.5 - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(
            classify_positivity(&plane, &g).unwrap().class,
            Positivity::Positive
        );
        let real = LagrangianPlane::zero_section(1);
        assert_eq!(cnorm(&hermitian_b(&real, &g).unwrap()), 0.0);
        assert_eq!(
            classify_positivity(&real, &g).unwrap().class,
            Positivity::Degenerate
        );
        assert!(meets_fixed_set(&real, &g));
        assert!(!meets_fixed_set(&plane, &g));
    }

    #[test]
    fn fiber_is_negative_for_psh_weight() {
        let w = RealQuadraticWeight::new(cm(1, &[(0.2, 0.1)]), cm(1, &[(0.7, 0.0)])).unwrap();
        let g = gamma_for_weight(&w).unwrap();
        let rep = classify_positivity(&LagrangianPlane::fiber(1), &g).unwrap();
        assert_eq!(rep.class, Positivity::Negative);
    }

    #[test]
    fn phase_from_pair_example() {
        let one = cm(1, &[(1.0, 0.0)]);
        let phi = phase_from_pair(&cm(1, &[(0.0, 1.0)]), &cm(1, &[(0.0, -1.0)]), &one).unwrap();
        assert!((phi.q_xx()[(0, 0)] - c(0.0, -0.5)).norm() < 1e-15);
        assert!((phi.q_yy()[(0, 0)] - c(0.0, 1.0)).norm() < 1e-15);
        assert!(phase_from_pair(&cm(1, &[(0.0, -1.0)]), &cm(1, &[(0.0, -1.0)]), &one).is_err());
    }

    #[test]
    fn levi_decomposition_examples() {
        let q =
            RealQuadraticForm2n::new(RMat::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0])).unwrap();
        let (h, l) = levi_decompose(&q);
        assert_eq!(
            h.matrix(),
            &RMat::from_row_slice(2, 2, &[-0.5, 0.0, 0.0, 0.5])
        );
        assert_eq!(
            l.matrix(),
            &RMat::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5])
        );
        let ab =
            RealQuadraticForm2n::new(RMat::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0])).unwrap();
        assert_eq!(rnorm(levi_decompose(&ab).1.matrix()), 0.0);
        assert_eq!(signature(&ab), (1, 1));
        let abs2 = RealQuadraticForm2n::new(RMat::identity(2, 2)).unwrap();
        assert_eq!(rnorm(levi_decompose(&abs2).0.matrix()), 0.0);
        assert_eq!(signature(&abs2), (2, 0));
    }

    #[test]
    fn partial_critical_example() {
        // q = x'² − (x'' − x')²
        let q = RMat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, -1.0]);
        let pc = partial_critical(&q, 1).unwrap();
        assert!((pc.reduced[(0, 0)] - 1.0).abs() < 1e-15);
        assert_eq!(pc.signature_fiber, (0, 1));
        assert_eq!(pc.signature_reduced, (1, 0));
        assert_eq!(pc.signature_full, (1, 1));
    }

    #[test]
    fn critical_value_weight_examples() {
        // φ(x,y) = Re((y−x)²)/2 + ε|x|² on C², realified (Re x, Re y, Im x, Im y).
        let eps = 0.3;
        let w = RealQuadraticWeight::new(
            cm(2, &[(0.5, 0.0), (-0.5, 0.0), (-0.5, 0.0), (0.5, 0.0)]),
            cm(2, &[(eps, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
        )
        .unwrap();
        let out = critical_value_weight(&w.to_real_form(), 1).unwrap();
        let expect = RMat::identity(2, 2) * eps;
        assert!(rnorm(&(out.matrix() - expect)) < 1e-14);
    }

    #[test]
    fn weight_real_form_roundtrip() {
        let w = RealQuadraticWeight::new(
            cm(2, &[(0.3, -0.2), (0.1, 0.4), (0.1, 0.4), (-0.5, 0.0)]),
            cm(2, &[(1.0, 0.0), (0.2, 0.3), (0.2, -0.3), (0.8, 0.0)]),
        )
        .unwrap();
        let q = w.to_real_form();
        let back = RealQuadraticWeight::from_real_form(&q);
        assert!(cnorm(&(back.p() - w.p())) < 1e-15 && cnorm(&(back.l() - w.l())) < 1e-15);
        let x = [c(0.4, -1.0), c(1.3, 0.2)];
        assert!((q.eval(&x) - w.eval(&x)).abs() < 1e-13);
    }
}
