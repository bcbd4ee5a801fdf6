//! Stationary phase: the Gaussian expansion on the unit ball with its remainder bound,
//! the double-contour variant on `ξ = −C₂ i x̄`, and numerical steepest descent for
//! non-quadratic phases in one variable.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::c;
use crate::poly::{multi_indices, Poly};
use crate::quad::GaussLegendre;
use crate::series::Series;
use crate::{Error, Result, C64};

const MODULE: &str = "gaussian";

/// Remainder constants for the ball expansion, indexed by `n − 1`. Calibrated as twice the
/// largest observed ratio `|R_N| / (h^{n/2+N}(N+1)^{n/2}N!2^N sup|u|)` over `e^{a·x}`,
/// `cos(a·x)`, `1/(2 − a·x)` with `|a| = 1`, `1 ≤ N ≤ 8`, `h ∈ [0.02, 1]`.
pub const STP_REMAINDER_CONSTANT: [f64; 3] = [STP_C1, STP_C2, STP_C3];
const STP_C1: f64 = 0.65;
const STP_C2: f64 = 1.8;
const STP_C3: f64 = 4.8;

/// Remainder constant for the double-contour expansion (`n = 1` only), calibrated the same
/// way on `e^{x+ξ}`, `cos(x − ξ)`, `1/(2 − xξ)` with `C₁ = 1`, `C₂ ∈ {1, 1.5}`, `h ∈ [0.03, 1]`.
pub const DOUBLE_CONTOUR_REMAINDER_CONSTANT: [f64; 1] = [DC_C1];
const DC_C1: f64 = 0.27;

/// Largest allowed relative error budget of Cauchy-extracted Laplacian terms.
const CAUCHY_BUDGET: f64 = 1e-8;

/// A holomorphic integrand.
pub enum AnalyticIntegrand<'a> {
    Polynomial(Poly<C64>),
    /// `f` is holomorphic on the polydisc of radius `radius` and bounded by `sup` on the
    /// set where the remainder bound is taken.
    Evaluable {
        n: usize,
        f: &'a dyn Fn(&[C64]) -> C64,
        radius: f64,
        sup: f64,
    },
}

impl AnalyticIntegrand<'_> {
    pub fn nvars(&self) -> usize {
        match self {
            AnalyticIntegrand::Polynomial(p) => p.nvars(),
            AnalyticIntegrand::Evaluable { n, .. } => *n,
        }
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        match self {
            AnalyticIntegrand::Polynomial(p) => p.eval(z),
            AnalyticIntegrand::Evaluable { f, .. } => f(z),
        }
    }

    /// Upper bound for `|u|` on the polydisc of the given radii.
    fn sup_bound(&self, radii: &[f64]) -> f64 {
        match self {
            AnalyticIntegrand::Polynomial(p) => p.majorant(radii),
            AnalyticIntegrand::Evaluable { sup, .. } => *sup,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            AnalyticIntegrand::Polynomial(p) if p.nvars() == 0 => {
                Err(Error::dim(MODULE, "integrand has no variables"))
            }
            AnalyticIntegrand::Evaluable { n, radius, sup, .. } => {
                if *n == 0 {
                    Err(Error::dim(MODULE, "integrand has no variables"))
                } else if !(*radius > 0.0) || !sup.is_finite() || *sup < 0.0 {
                    Err(Error::input(
                        MODULE,
                        "need a positive holomorphy radius and finite sup bound",
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Taylor coefficients at 0 for the requested multi-indices.
    fn taylor_coefficients(&self, alphas: &[Vec<u32>]) -> Result<Vec<C64>> {
        match self {
            AnalyticIntegrand::Polynomial(p) => Ok(alphas.iter().map(|a| p.coeff(a)).collect()),
            AnalyticIntegrand::Evaluable { n, f, radius, .. } => {
                let top = alphas
                    .iter()
                    .flat_map(|a| a.iter())
                    .copied()
                    .max()
                    .unwrap_or(0) as usize;
                let r = 0.5 * radius.min(4.0);
                let m = (2 * top + 24).max(32);
                Ok(cauchy_coefficients(*n, f, r, m, alphas))
            }
        }
    }

    /// Rough absolute error of a Cauchy coefficient of total degree `k`.
    fn coefficient_error(&self, k: u32) -> f64 {
        match self {
            AnalyticIntegrand::Polynomial(_) => 0.0,
            AnalyticIntegrand::Evaluable { radius, sup, .. } => {
                let r = 0.5 * radius.min(4.0);
                1e-15 * sup.max(1.0) * r.powi(-(k as i32))
            }
        }
    }
}

/// Trapezoidal Cauchy integrals on the torus `|z_j| = r` with `m` nodes per variable.
fn cauchy_coefficients(
    n: usize,
    f: &dyn Fn(&[C64]) -> C64,
    r: f64,
    m: usize,
    alphas: &[Vec<u32>],
) -> Vec<C64> {
    let total = m.pow(n as u32);
    let mut out = alloc::vec![c(0.0, 0.0); alphas.len()];
    let mut idx = alloc::vec![0usize; n];
    let mut z = alloc::vec![c(0.0, 0.0); n];
    let two_pi = 2.0 * core::f64::consts::PI;
    for _ in 0..total {
        for j in 0..n {
            z[j] = C64::from_polar(r, two_pi * idx[j] as f64 / m as f64);
        }
        let v = f(&z);
        for (a, o) in alphas.iter().zip(out.iter_mut()) {
            let mut phase = 0.0;
            for j in 0..n {
                phase -= a[j] as f64 * two_pi * idx[j] as f64 / m as f64;
            }
            *o += v * C64::from_polar(1.0, phase);
        }
        for j in 0..n {
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
        }
    }
    for (a, o) in alphas.iter().zip(out.iter_mut()) {
        let deg: u32 = a.iter().sum();
        *o /= total as f64 * r.powi(deg as i32);
    }
    out
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expansion {
    pub value: C64,
    pub remainder_bound: f64,
}

/// `Σ_{ν<N} (2π)^{n/2} h^{n/2+ν} (½Δ)^ν u(0)/ν!` with the remainder bound for `∫_B e^{−x²/2h} u`.
pub fn stationary_phase_expand(u: &AnalyticIntegrand, order: usize, h: f64) -> Result<Expansion> {
    u.validate()?;
    if order == 0 {
        return Err(Error::input(MODULE, "order N must be at least 1"));
    }
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::input(MODULE, "h must lie in (0, 1]"));
    }
    let n = u.nvars();
    // (½Δ)^ν u(0)/ν! = 2^{−ν} Σ_{|β|=ν} (2β)!/β! c_{2β}
    let betas = multi_indices(n, (order - 1) as u32);
    let alphas: Vec<Vec<u32>> = betas
        .iter()
        .map(|b| b.iter().map(|k| 2 * k).collect())
        .collect();
    for a in &alphas {
        let k: u32 = a.iter().sum();
        let weight = a
            .iter()
            .map(|&j| factorial(j) / factorial(j / 2))
            .product::<f64>()
            * 0.5f64.powi(k as i32 / 2);
        if weight * u.coefficient_error(k) > CAUCHY_BUDGET {
            return Err(Error::numerical(
                MODULE,
                "order too large for the Cauchy coefficient precision budget",
            ));
        }
    }
    let coeffs = u.taylor_coefficients(&alphas)?;
    let nf = n as f64;
    let mut value = c(0.0, 0.0);
    for (b, cf) in betas.iter().zip(&coeffs) {
        let nu: u32 = b.iter().sum();
        let w: f64 = b
            .iter()
            .map(|&j| factorial(2 * j) / factorial(j))
            .product::<f64>()
            * 0.5f64.powi(nu as i32);
        value +=
            cf * (w * (2.0 * core::f64::consts::PI).powf(nf / 2.0) * h.powf(nf / 2.0 + nu as f64));
    }
    let cst = *STP_REMAINDER_CONSTANT.get(n - 1).ok_or_else(|| {
        Error::input(MODULE, "no calibrated remainder constant in this dimension")
    })?;
    let nn = order as f64;
    let sup = u.sup_bound(&alloc::vec![1.0; n]);
    let remainder_bound = cst
        * h.powf(nf / 2.0 + nn)
        * (nn + 1.0).powf(nf / 2.0)
        * factorial(order as u32)
        * 2f64.powi(order as i32)
        * sup;
    Ok(Expansion {
        value,
        remainder_bound,
    })
}

/// Expansion of `(2πh)^{−n} ∫∫_{|x|≤C₁, ξ=−C₂ix̄} e^{−ix·ξ/h} u(x, ξ) |dx dξ|`, variables of `u`
/// ordered `(x₁..x_n, ξ₁..ξ_n)`.
pub fn double_contour_expand(
    u: &AnalyticIntegrand,
    c1: f64,
    c2: f64,
    order: usize,
    h: f64,
) -> Result<Expansion> {
    u.validate()?;
    let m = u.nvars();
    if m % 2 != 0 {
        return Err(Error::dim(
            MODULE,
            "double-contour integrands need 2n variables",
        ));
    }
    if order == 0 || !(h > 0.0 && h <= 1.0) || !(c1 > 0.0) || !(c2 > 0.0) {
        return Err(Error::input(MODULE, "need N ≥ 1, 0 < h ≤ 1, C₁, C₂ > 0"));
    }
    let n = m / 2;
    let half = multi_indices(n, (order - 1) as u32);
    let alphas: Vec<Vec<u32>> = half
        .iter()
        .map(|a| a.iter().chain(a.iter()).copied().collect())
        .collect();
    for a in &half {
        let k: u32 = a.iter().sum();
        let w: f64 = a.iter().map(|&j| factorial(j)).product();
        if w * u.coefficient_error(2 * k) > CAUCHY_BUDGET {
            return Err(Error::numerical(
                MODULE,
                "order too large for the Cauchy coefficient precision budget",
            ));
        }
    }
    let coeffs = u.taylor_coefficients(&alphas)?;
    let h_over_i = c(0.0, -h);
    let mut value = c(0.0, 0.0);
    for (a, cf) in half.iter().zip(&coeffs) {
        let k: u32 = a.iter().sum();
        let w: f64 = a.iter().map(|&j| factorial(j)).product();
        value += cf * w * h_over_i.powu(k);
    }
    let cst = *DOUBLE_CONTOUR_REMAINDER_CONSTANT
        .get(n - 1)
        .ok_or_else(|| {
            Error::input(MODULE, "no calibrated remainder constant in this dimension")
        })?;
    let mut radii = alloc::vec![c1; n];
    radii.extend(core::iter::repeat(c1 * c2).take(n));
    let nn = order as f64;
    let remainder_bound = cst
        * (nn + 1.0).powi(n as i32)
        * factorial(order as u32)
        * (h / (c1 * c1 * c2)).powi(order as i32)
        * u.sup_bound(&radii);
    Ok(Expansion {
        value,
        remainder_bound,
    })
}

/// Direct quadrature of the double-contour integral for `n = 1` over the disc `|x| ≤ C₁`;
/// the oriented measure on the contour is `2C₂ dA`.
pub fn double_contour_quadrature_1d(u: &dyn Fn(C64, C64) -> C64, c1: f64, c2: f64, h: f64) -> C64 {
    let gl = GaussLegendre::new(24);
    let m_theta = 96;
    let radial_panels = (4.0 * c1 / h.sqrt()).ceil().max(4.0) as usize;
    let mut acc = c(0.0, 0.0);
    for k in 0..m_theta {
        let t = 2.0 * core::f64::consts::PI * k as f64 / m_theta as f64;
        let e = C64::from_polar(1.0, t);
        acc += gl.integrate_complex(
            |r| {
                let x = e * r;
                let xi = c(0.0, -c2) * x.conj();
                u(x, xi) * ((-c2 * r * r / h).exp() * r)
            },
            0.0,
            c1,
            radial_panels,
        );
    }
    acc * (2.0 * core::f64::consts::PI / m_theta as f64) * (2.0 * c2)
        / (2.0 * core::f64::consts::PI * h)
}

/// Quadrature of `∫_B e^{−|x|²/2h} u(x) dx` over the real unit ball for `n ≤ 3`.
pub fn ball_gaussian_quadrature(u: &dyn Fn(&[C64]) -> C64, n: usize, h: f64) -> Result<C64> {
    let gl = GaussLegendre::new(24);
    let panels = (4.0 / h.sqrt()).ceil().max(2.0) as usize;
    let w = |r: f64| (-r * r / (2.0 * h)).exp();
    match n {
        1 => Ok(gl.integrate_complex(|x| u(&[c(x, 0.0)]) * w(x), -1.0, 1.0, 2 * panels)),
        2 => {
            let m = 64;
            let mut acc = c(0.0, 0.0);
            for k in 0..m {
                let t = 2.0 * core::f64::consts::PI * k as f64 / m as f64;
                acc += gl.integrate_complex(
                    |r| u(&[c(r * t.cos(), 0.0), c(r * t.sin(), 0.0)]) * (w(r) * r),
                    0.0,
                    1.0,
                    panels,
                );
            }
            Ok(acc * (2.0 * core::f64::consts::PI / m as f64))
        }
        3 => {
            let m = 48;
            let gt = GaussLegendre::new(32);
            let mut acc = c(0.0, 0.0);
            for k in 0..m {
                let p = 2.0 * core::f64::consts::PI * k as f64 / m as f64;
                acc += gt.integrate_complex(
                    |ct| {
                        let st = (1.0 - ct * ct).max(0.0).sqrt();
                        gl.integrate_complex(
                            |r| {
                                u(&[
                                    c(r * st * p.cos(), 0.0),
                                    c(r * st * p.sin(), 0.0),
                                    c(r * ct, 0.0),
                                ]) * (w(r) * r * r)
                            },
                            0.0,
                            1.0,
                            panels,
                        )
                    },
                    -1.0,
                    1.0,
                    1,
                );
            }
            Ok(acc * (2.0 * core::f64::consts::PI / m as f64))
        }
        _ => Err(Error::input(
            MODULE,
            "ball quadrature implemented for n ≤ 3",
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteepestDescent {
    /// Quadrature along the deformed contour.
    pub value: C64,
    /// Truncated Morse-coordinate expansion with `K` terms.
    pub expansion: C64,
    pub delta: f64,
}

/// `∫_a^b e^{−φ(x)/h} u(x) dx` along `x ↦ x + δ·conj(φ'(x))`, closed back to the real endpoints
/// by straight segments, together with the Morse-coordinate expansion at the critical point 0.
pub fn steepest_descent_1d(
    phi: &dyn Fn(C64) -> C64,
    dphi: &dyn Fn(C64) -> C64,
    u: &dyn Fn(C64) -> C64,
    interval: (f64, f64),
    radius: f64,
    h: f64,
    terms: usize,
) -> Result<SteepestDescent> {
    let (a, b) = interval;
    if !(a < 0.0 && 0.0 < b) || !(radius > a.abs().max(b)) {
        return Err(Error::input(
            MODULE,
            "need a < 0 < b inside the holomorphy disc",
        ));
    }
    if !(h > 0.0 && h <= 1.0) || terms == 0 {
        return Err(Error::input(MODULE, "need 0 < h ≤ 1 and K ≥ 1"));
    }
    let z0 = c(0.0, 0.0);
    if phi(z0).norm() > 1e-12 || dphi(z0).norm() > 1e-12 {
        return Err(Error::pre(MODULE, "φ(0) and φ'(0) must vanish"));
    }
    if phi(c(a, 0.0)).re <= 0.0 || phi(c(b, 0.0)).re <= 0.0 {
        return Err(Error::pre(MODULE, "Re φ must be positive at the endpoints"));
    }
    let samples: Vec<f64> = crate::quad::linspace(a, b, 401);
    if samples.iter().any(|&x| phi(c(x, 0.0)).re < -1e-14) {
        return Err(Error::pre(MODULE, "Re φ < 0 on the real interval"));
    }
    let gamma = |x: f64, d: f64| c(x, 0.0) + dphi(c(x, 0.0)).conj() * d;
    let mut delta = None;
    for k in 1..30 {
        let d = 0.5f64.powi(k);
        let ok = samples.iter().all(|&x| {
            let z = gamma(x, d);
            let g = dphi(c(x, 0.0)).norm_sqr();
            z.norm() < radius && phi(z).re >= phi(c(x, 0.0)).re + 0.25 * d * g
        });
        if ok {
            delta = Some(d);
            break;
        }
    }
    let delta = delta.ok_or_else(|| {
        Error::numerical(MODULE, "no admissible δ keeps the contour in the domain")
    })?;
    let integrand = |z: C64| (-phi(z) / h).exp() * u(z);
    if integrand(gamma(a, delta)).norm() > 1e-3 * integrand(z0).norm().max(1e-300)
        && phi(c(a, 0.0)).re < h
    {
        return Err(Error::pre(
            MODULE,
            "integrand does not decay at the endpoints",
        ));
    }
    let gl = GaussLegendre::new(24);
    let panels = (8.0 * (b - a) / h.sqrt()).ceil() as usize;
    let fd = 1e-6;
    let main = gl.integrate_complex(
        |x| {
            let dz = (gamma(x + fd, delta) - gamma(x - fd, delta)) / (2.0 * fd);
            integrand(gamma(x, delta)) * dz
        },
        a,
        b,
        panels,
    );
    let segment = |from: C64, to: C64| {
        gl.integrate_complex(
            |t| integrand(from + (to - from) * t) * (to - from),
            0.0,
            1.0,
            4,
        )
    };
    let value = segment(c(a, 0.0), gamma(a, delta)) + main + segment(gamma(b, delta), c(b, 0.0));
    let expansion = morse_expansion_1d(phi, u, radius, h, terms)?;
    Ok(SteepestDescent {
        value,
        expansion,
        delta,
    })
}

/// `Σ_{k<K} (2πh)^{1/2} h^k (2k)!/(2^k k!) g_{2k}` where `g(w) = u(z(w)) z'(w)` in the Morse
/// coordinate `w = z·(2φ(z)/z²)^{1/2}`, branch `w'(0) = φ''(0)^{1/2}` with positive real part.
pub fn morse_expansion_1d(
    phi: &dyn Fn(C64) -> C64,
    u: &dyn Fn(C64) -> C64,
    radius: f64,
    h: f64,
    terms: usize,
) -> Result<C64> {
    let m = 2 * terms + 2;
    let r = 0.5 * radius.min(4.0);
    let samples = (4 * m + 64).max(128);
    let ps = Series::taylor(phi, c(0.0, 0.0), r, m + 2, samples);
    let us = Series::taylor(u, c(0.0, 0.0), r, m, samples);
    if ps.c[2].norm() == 0.0 {
        return Err(Error::pre(MODULE, "φ''(0) = 0"));
    }
    // 2φ/z² = Σ 2 c_{k+2} z^k
    let s = Series::new((0..=m).map(|k| ps.c[k + 2] * 2.0).collect(), m);
    let root0 = s.c[0].sqrt();
    let w_over_z = s.sqrt_with(root0)?;
    let mut w = Series::zeros(m);
    for k in 1..=m {
        w.c[k] = w_over_z.c[k - 1];
    }
    let z = w.revert()?;
    let g = us.compose(&z)?.mul(&z.derivative());
    let mut total = c(0.0, 0.0);
    let pref = (2.0 * core::f64::consts::PI * h).sqrt();
    for k in 0..terms {
        if 2 * k > g.order() {
            break;
        }
        let coef = factorial(2 * k as u32) / (2f64.powi(k as i32) * factorial(k as u32));
        total += g.c[2 * k] * (pref * h.powi(k as i32) * coef);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_quadratic_examples() {
        let one = AnalyticIntegrand::Polynomial(Poly::one(1));
        for &(n, h) in &[(1usize, 0.3), (4, 0.05)] {
            let e = stationary_phase_expand(&one, n, h).unwrap();
            assert!((e.value - c((2.0 * core::f64::consts::PI * h).sqrt(), 0.0)).norm() < 1e-15);
        }
        let x2 = AnalyticIntegrand::Polynomial(Poly::monomial(alloc::vec![2], c(1.0, 0.0)));
        let h = 0.2;
        let e = stationary_phase_expand(&x2, 2, h).unwrap();
        assert!((e.value.re - (2.0 * core::f64::consts::PI * h).sqrt() * h).abs() < 1e-15);
    }

    #[test]
    fn double_contour_examples() {
        let one = AnalyticIntegrand::Polynomial(Poly::one(2));
        assert_eq!(
            double_contour_expand(&one, 1.0, 1.0, 3, 0.1).unwrap().value,
            c(1.0, 0.0)
        );
        let h = 0.1;
        let xxi = AnalyticIntegrand::Polynomial(Poly::monomial(alloc::vec![1, 1], c(1.0, 0.0)));
        assert!(
            (double_contour_expand(&xxi, 1.0, 1.0, 3, h).unwrap().value - c(0.0, -h)).norm()
                < 1e-16
        );
        let x2xi2 = AnalyticIntegrand::Polynomial(Poly::monomial(alloc::vec![2, 2], c(1.0, 0.0)));
        let v = double_contour_expand(&x2xi2, 1.0, 1.0, 3, h).unwrap().value;
        assert!((v - c(0.0, -h).powu(2) * 2.0).norm() < 1e-16);
    }

    #[test]
    fn double_contour_measure_normalization() {
        let h = 0.02;
        let v = double_contour_quadrature_1d(&|_, _| c(1.0, 0.0), 1.0, 1.0, h);
        assert!((v - c(1.0, 0.0)).norm() < 1e-12);
        let v = double_contour_quadrature_1d(&|x, xi| x * xi, 1.0, 1.0, h);
        assert!((v - c(0.0, -h)).norm() < 1e-12);
    }

    #[test]
    fn quadratic_phase_descent() {
        let h = 0.05;
        let r = steepest_descent_1d(
            &|z| z * z * 0.5,
            &|z| z,
            &|_| c(1.0, 0.0),
            (-1.0, 1.0),
            3.0,
            h,
            3,
        )
        .unwrap();
        let exact = (2.0 * core::f64::consts::PI * h).sqrt()
            * crate::special::erf_real(1.0 / (2.0 * h).sqrt());
        assert!((r.value.re - exact).abs() < 1e-12);
        let odd =
            steepest_descent_1d(&|z| z * z * 0.5, &|z| z, &|z| z, (-1.0, 1.0), 3.0, h, 3).unwrap();
        assert!(odd.value.norm() < 1e-12);
    }
}
