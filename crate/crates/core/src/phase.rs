//! Quadratic FBI phases `φ(x,y) = ½Q_xx x·x + Q_xy x·y + ½Q_yy y·y` and the objects
//! derived from them: the weight Φ, the canonical map κ_φ, the polarization of Φ,
//! the unitarity constant and the Legendre-type dual weight.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::csymplectic::{signature_of, CanonicalMap, RealQuadraticForm2n, RealQuadraticWeight};
use crate::linalg::{self, block2, c, cnorm, conj_mat, I};
use crate::{CMat, Error, RMat, Result, C64};

const MODULE: &str = "phase";

#[derive(Debug, Clone, PartialEq)]
pub struct FBIPhase {
    q_xx: CMat,
    q_xy: CMat,
    q_yy: CMat,
}

impl FBIPhase {
    pub fn new(q_xx: CMat, q_xy: CMat, q_yy: CMat) -> Result<Self> {
        let n = q_xy.nrows();
        if n == 0 || q_xx.shape() != (n, n) || q_xy.shape() != (n, n) || q_yy.shape() != (n, n) {
            return Err(Error::dim(MODULE, "Q_xx, Q_xy, Q_yy must all be n × n"));
        }
        if !linalg::is_symmetric(&q_xx, 1e-12) || !linalg::is_symmetric(&q_yy, 1e-12) {
            return Err(Error::input(MODULE, "Q_xx and Q_yy must be symmetric"));
        }
        let scale = cnorm(&q_xy).powi(n as i32).max(1e-300);
        if linalg::det(&q_xy).norm() <= 1e-13 * scale {
            return Err(Error::pre(MODULE, "det Q_xy = 0"));
        }
        let b = linalg::im_part(&q_yy);
        let ev = linalg::symmetric_eigenvalues(&b);
        if ev.first().map(|e| *e <= 0.0).unwrap_or(true) {
            return Err(Error::pre(MODULE, "Im Q_yy is not positive definite"));
        }
        Ok(FBIPhase { q_xx, q_xy, q_yy })
    }

    /// `φ = i(x − y)²/2`.
    pub fn bargmann(n: usize) -> Self {
        let id = CMat::identity(n, n);
        FBIPhase {
            q_xx: &id * I,
            q_xy: &id * (-I),
            q_yy: &id * I,
        }
    }

    /// `φ = Ax·y + (i/2)By·y`.
    pub fn normal_form(a: CMat, b: RMat) -> Result<Self> {
        let n = a.nrows();
        FBIPhase::new(CMat::zeros(n, n), a, linalg::to_complex(&b) * I)
    }

    pub fn n(&self) -> usize {
        self.q_xy.nrows()
    }

    pub fn q_xx(&self) -> &CMat {
        &self.q_xx
    }

    pub fn q_xy(&self) -> &CMat {
        &self.q_xy
    }

    pub fn q_yy(&self) -> &CMat {
        &self.q_yy
    }

    pub fn eval(&self, x: &[C64], y: &[C64]) -> C64 {
        let qxy = linalg::matvec(&self.q_xy, x);
        linalg::quad_form(&self.q_xx, x) * 0.5
            + linalg::bdot(&qxy, y)
            + linalg::quad_form(&self.q_yy, y) * 0.5
    }

    /// `∂_y φ = Q_xy x + Q_yy y`.
    pub fn d_y(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let a = linalg::matvec(&self.q_xy, x);
        let b = linalg::matvec(&self.q_yy, y);
        a.iter().zip(&b).map(|(u, v)| u + v).collect()
    }

    /// `∂_x φ = Q_xx x + Q_xyᵀ y`.
    pub fn d_x(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let a = linalg::matvec(&self.q_xx, x);
        let b = linalg::matvec(&self.q_xy.transpose(), y);
        a.iter().zip(&b).map(|(u, v)| u + v).collect()
    }
}

/// Real-linear map `C^n → R^m` acting on `(Re x, Im x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealLinearMap {
    pub matrix: RMat,
}

impl RealLinearMap {
    pub fn apply(&self, x: &[C64]) -> Vec<f64> {
        let v = linalg::realify(x);
        (0..self.matrix.nrows())
            .map(|i| (0..v.len()).map(|j| self.matrix[(i, j)] * v[j]).sum())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseWeight {
    pub weight: RealQuadraticWeight,
    /// Real critical point `y(x)` of `y ↦ −Im φ(x, y)`.
    pub y_of_x: RealLinearMap,
    /// `η(x) = −∂_yφ(x, y(x))`, real.
    pub eta_of_x: RealLinearMap,
}

/// `Φ(x) = vc_{y∈R^n} (−Im φ(x, y))`.
pub fn weight_from_phase(phi: &FBIPhase) -> Result<PhaseWeight> {
    let n = phi.n();
    let b = linalg::im_part(&phi.q_yy);
    let binv = linalg::rinverse(&b, MODULE)?;
    let qr = linalg::re_part(&phi.q_xy);
    let qi = linalg::im_part(&phi.q_xy);
    // Im(Q_xy x) = K v, Re(Q_xy x) = R v with v = (Re x, Im x).
    let k = hcat(&qi, &qr);
    let r = hcat(&qr, &(-&qi));
    let s_y = &binv * &k;
    let quad = k.transpose() * &binv * &k * 0.5;
    let hol = RealQuadraticWeight::new(&phi.q_xx * c(0.0, 0.5), CMat::zeros(n, n))?.to_real_form();
    let total = RealQuadraticForm2n::new(hol.matrix() + (&quad + quad.transpose()) * 0.5)?;
    let weight = RealQuadraticWeight::from_real_form(&total);
    if !weight.is_strictly_psh() {
        return Err(Error::numerical(
            MODULE,
            "weight of a valid phase came out not strictly psh",
        ));
    }
    let y_map = -s_y;
    let eta = -(&r + linalg::re_part(&phi.q_yy) * &y_map);
    Ok(PhaseWeight {
        weight,
        y_of_x: RealLinearMap { matrix: y_map },
        eta_of_x: RealLinearMap { matrix: eta },
    })
}

fn hcat(a: &RMat, b: &RMat) -> RMat {
    let mut out = RMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// `κ_φ : (y, −∂_yφ) ↦ (x, ∂_xφ)`.
pub fn kappa_matrix(phi: &FBIPhase) -> Result<CanonicalMap> {
    let qinv = linalg::inverse(&phi.q_xy, MODULE)?;
    let x_y = -(&qinv * &phi.q_yy);
    let x_eta = -&qinv;
    let xi_y = &phi.q_xx * &x_y + phi.q_xy.transpose();
    let xi_eta = &phi.q_xx * &x_eta;
    CanonicalMap::new(block2(&x_y, &x_eta, &xi_y, &xi_eta))
}

/// Holomorphic `ψ(x, y) = ½P x·x + L x·y + ½P̄ y·y` with `ψ(x, x̄) = Φ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polarization {
    pub p: CMat,
    pub l: CMat,
}

impl Polarization {
    pub fn eval(&self, x: &[C64], y: &[C64]) -> C64 {
        let lx = linalg::matvec(&self.l, x);
        linalg::quad_form(&self.p, x) * 0.5
            + linalg::bdot(&lx, y)
            + linalg::quad_form(&conj_mat(&self.p), y) * 0.5
    }

    /// `∂_x ψ = P x + Lᵀ y`.
    pub fn d_x(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let a = linalg::matvec(&self.p, x);
        let b = linalg::matvec(&self.l.transpose(), y);
        a.iter().zip(&b).map(|(u, v)| u + v).collect()
    }

    /// `∂_y ψ = L x + P̄ y`.
    pub fn d_y(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let a = linalg::matvec(&self.l, x);
        let b = linalg::matvec(&conj_mat(&self.p), y);
        a.iter().zip(&b).map(|(u, v)| u + v).collect()
    }
}

pub fn polarization(w: &RealQuadraticWeight) -> Polarization {
    Polarization {
        p: w.p().clone(),
        l: w.l().clone(),
    }
}

/// `2^{−n/2} π^{−3n/4} (det Im Q_yy)^{−1/4} |det Q_xy|`.
pub fn unitarity_constant(phi: &FBIPhase) -> f64 {
    let n = phi.n() as f64;
    let db = linalg::rdet(&linalg::im_part(&phi.q_yy));
    let da = linalg::det(&phi.q_xy).norm();
    2f64.powf(-n / 2.0) * core::f64::consts::PI.powf(-0.75 * n) * db.powf(-0.25) * da
}

fn swap_w(n: usize) -> RMat {
    let z = RMat::zeros(n, n);
    let id = RMat::identity(n, n);
    block2(&z, &id, &id, &z)
}

/// `Φ*(ξ) = vc_x (Φ(x) + Im(x·ξ))`. The same formula inverts itself, so applying it twice
/// returns `Φ`.
pub fn legendre_weight(phi: &RealQuadraticForm2n) -> Result<RealQuadraticForm2n> {
    let n = phi.n();
    if signature_of(phi.matrix()) != (n, n) {
        return Err(Error::pre(
            MODULE,
            "real Hessian must be non-degenerate of signature (n, n)",
        ));
    }
    let w = swap_w(n);
    let sinv = linalg::rinverse(phi.matrix(), MODULE)?;
    let star = &w * sinv * &w * (-0.25);
    RealQuadraticForm2n::new((&star + star.transpose()) * 0.5)
}

/// Inverse transform `vc_ξ(−Im(x·ξ) + Φ*(ξ))`.
pub fn legendre_inverse(phi_star: &RealQuadraticForm2n) -> Result<RealQuadraticForm2n> {
    legendre_weight(phi_star)
}

/// Critical point `x(ξ)` of `x ↦ Φ(x) + Im(x·ξ)`.
pub fn dual_critical_point(phi: &RealQuadraticForm2n, xi: &[C64]) -> Result<Vec<C64>> {
    let n = phi.n();
    if xi.len() != n {
        return Err(Error::dim(MODULE, "ξ has the wrong length"));
    }
    let sinv = linalg::rinverse(phi.matrix(), MODULE)?;
    let w = swap_w(n);
    let m = sinv * w * (-0.5);
    let v = linalg::realify(xi);
    let out: Vec<f64> = (0..2 * n)
        .map(|i| (0..2 * n).map(|j| m[(i, j)] * v[j]).sum())
        .collect();
    Ok(linalg::complexify(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csymplectic::is_canonical;

    fn one(z: C64) -> CMat {
        CMat::from_element(1, 1, z)
    }

    #[test]
    fn bargmann_weight() {
        let pw = weight_from_phase(&FBIPhase::bargmann(1)).unwrap();
        for x in [c(0.3, 1.7), c(-2.0, 0.4)] {
            assert!((pw.weight.eval(&[x]) - x.im * x.im / 2.0).abs() < 1e-14);
            assert!((pw.y_of_x.apply(&[x])[0] - x.re).abs() < 1e-14);
        }
    }

    #[test]
    fn normal_form_weight_and_levi_determinant() {
        let a = CMat::from_row_slice(
            2,
            2,
            &[c(1.0, 0.5), c(0.2, 0.0), c(-0.3, 1.0), c(0.0, -2.0)],
        );
        let b = RMat::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let phi = FBIPhase::normal_form(a.clone(), b.clone()).unwrap();
        let pw = weight_from_phase(&phi).unwrap();
        let binv = b.clone().try_inverse().unwrap();
        let x = [c(0.7, -0.2), c(-1.1, 0.4)];
        let ax = linalg::matvec(&a, &x);
        let im: Vec<f64> = ax.iter().map(|z| z.im).collect();
        let expect: f64 = (0..2)
            .map(|i| (0..2).map(|j| binv[(i, j)] * im[i] * im[j]).sum::<f64>())
            .sum::<f64>()
            * 0.5;
        assert!((pw.weight.eval(&x) - expect).abs() < 1e-13);
        let levi = linalg::det(pw.weight.l()).re;
        let expect_det = 4f64.powi(-2) * linalg::det(&a).norm_sqr() / linalg::rdet(&b);
        assert!((levi - expect_det).abs() < 1e-13);
    }

    #[test]
    fn bargmann_kappa() {
        let k = kappa_matrix(&FBIPhase::bargmann(1)).unwrap();
        let m = k.matrix();
        assert!((m[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((m[(0, 1)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((m[(1, 0)]).norm() < 1e-15);
        assert!((m[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(is_canonical(m).canonical);
    }

    #[test]
    fn polarization_examples() {
        let p = polarization(&RealQuadraticWeight::standard(1));
        assert!(
            (p.eval(&[c(2.0, 1.0)], &[c(0.5, -1.0)]) - c(2.0, 1.0) * c(0.5, -1.0) * 0.5).norm()
                < 1e-15
        );
        let w = RealQuadraticWeight::new(one(c(-0.25, 0.0)), one(c(0.25, 0.0))).unwrap();
        let p = polarization(&w);
        let (x, y) = (c(0.3, 1.0), c(-1.0, 0.2));
        assert!((p.eval(&[x], &[y]) + (x - y) * (x - y) / 8.0).norm() < 1e-15);
        assert!((p.eval(&[x], &[x.conj()]).re - x.im * x.im / 2.0).abs() < 1e-15);
    }

    #[test]
    fn unitarity_constant_examples() {
        let phi = FBIPhase::normal_form(one(c(0.0, -1.0)), RMat::identity(1, 1)).unwrap();
        let c0 = unitarity_constant(&phi);
        let expect = 2f64.powf(-0.5) * core::f64::consts::PI.powf(-0.75);
        assert!((c0 - expect).abs() < 1e-15);
        let phi2 = FBIPhase::normal_form(one(c(0.0, -2.0)), RMat::identity(1, 1)).unwrap();
        assert!((unitarity_constant(&phi2) - 2.0 * expect).abs() < 1e-15);
    }

    #[test]
    fn legendre_examples() {
        let q =
            RealQuadraticForm2n::new(RMat::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0])).unwrap();
        let star = legendre_weight(&q).unwrap();
        assert!(linalg::rnorm(&(star.matrix() + q.matrix())) < 1e-15);
        let back = legendre_inverse(&star).unwrap();
        assert!(linalg::rnorm(&(back.matrix() - q.matrix())) < 1e-15);
        let xi = [c(0.4, -1.3)];
        let x = dual_critical_point(&q, &xi).unwrap();
        assert!((x[0] + xi[0]).norm() < 1e-15);
        let w = q.to_weight();
        assert!((w.xi(&x)[0] - xi[0]).norm() < 1e-14);
        let degenerate = RealQuadraticWeight::new(one(c(-0.25, 0.0)), one(c(0.25, 0.0))).unwrap();
        assert!(legendre_weight(&degenerate.to_real_form()).is_err());
    }

    #[test]
    fn rejects_invalid_phases() {
        assert!(FBIPhase::new(one(c(0.0, 0.0)), one(c(1.0, 0.0)), one(c(0.0, -1.0))).is_err());
        assert!(FBIPhase::new(one(c(0.0, 0.0)), one(c(0.0, 0.0)), one(c(0.0, 1.0))).is_err());
    }
}
