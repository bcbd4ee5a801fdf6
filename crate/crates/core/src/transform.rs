//! The FBI transform `Tu(x) = C h^{−3n/4} ∫ e^{iφ(x,y)/h} u(y) dy` on sampled grids, its adjoint,
//! `H_Φ` norms, the Bergman projection, mean-value inversion along `Γ_R`, and the complex
//! Fourier pair `F`, `G` along affine good contours.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::csymplectic::{RealQuadraticForm2n, RealQuadraticWeight};
use crate::grid::{Axis, Grid, HoloSample, RealSamples};
use crate::linalg::{self, c, cnorm, I};
use crate::logc::LogC;
use crate::phase::{self, legendre_weight, polarization, unitarity_constant, FBIPhase};
use crate::quad::GaussLegendre;
use crate::special::{full_line_gaussian_log, half_line_gaussian_log};
use crate::{CMat, Error, Result, C64};

const MODULE: &str = "transform";

/// `p(y) e^{−a y²/2 + b y + c}`. Closed under multiplication by `y`, `hD_y` and
/// shift-multiplications `e^{iℓ(y, hD)/h}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPoly {
    pub coeffs: Vec<C64>,
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl GaussianPoly {
    /// `e^{−a y²/2}`.
    pub fn gaussian(a: f64) -> Self {
        GaussianPoly {
            coeffs: alloc::vec![c(1.0, 0.0)],
            a: c(a, 0.0),
            b: c(0.0, 0.0),
            c: c(0.0, 0.0),
        }
    }

    pub fn eval(&self, y: f64) -> C64 {
        let p = self
            .coeffs
            .iter()
            .rev()
            .fold(c(0.0, 0.0), |acc, k| acc * y + k);
        p * (-self.a * (y * y / 2.0) + self.b * y + self.c).exp()
    }

    pub fn mul_y(&self) -> Self {
        let mut coeffs = alloc::vec![c(0.0, 0.0)];
        coeffs.extend(self.coeffs.iter().copied());
        GaussianPoly {
            coeffs,
            ..self.clone()
        }
    }

    /// `(h/i) d/dy`.
    pub fn h_d(&self, h: f64) -> Self {
        let m = self.coeffs.len();
        let mut out = alloc::vec![c(0.0, 0.0); m + 1];
        for (k, ck) in self.coeffs.iter().enumerate() {
            if k > 0 {
                out[k - 1] += ck * k as f64;
            }
            out[k] += ck * self.b;
            out[k + 1] -= ck * self.a;
        }
        GaussianPoly {
            coeffs: out.iter().map(|v| v * c(0.0, -h)).collect(),
            ..self.clone()
        }
    }

    /// `e^{i(y*·y + η*·hD)/h} u = e^{iy*y/h} e^{iy*η*/2h} u(y + η*)`.
    pub fn shift_multiply(&self, y_star: f64, eta_star: f64, h: f64) -> Self {
        let s = eta_star;
        let m = self.coeffs.len();
        // p(y + s)
        let mut coeffs = alloc::vec![c(0.0, 0.0); m];
        for (k, ck) in self.coeffs.iter().enumerate() {
            let mut binom = 1.0;
            for j in 0..=k {
                coeffs[j] += ck * binom * s.powi((k - j) as i32);
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
        }
        // −a(y+s)²/2 + b(y+s) + c
        let b = self.b - self.a * s + c(0.0, y_star / h);
        let cc =
            self.c - self.a * (s * s / 2.0) + self.b * s + c(0.0, y_star * eta_star / (2.0 * h));
        GaussianPoly {
            coeffs,
            a: self.a,
            b,
            c: cc,
        }
    }

    pub fn add(&self, other: &GaussianPoly) -> Result<Self> {
        if self.a != other.a || self.b != other.b || self.c != other.c {
            return Err(Error::input(
                MODULE,
                "sum of Gaussian polynomials with different exponents",
            ));
        }
        let m = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &Vec<C64>, k: usize| v.get(k).copied().unwrap_or(c(0.0, 0.0));
        Ok(GaussianPoly {
            coeffs: (0..m)
                .map(|k| get(&self.coeffs, k) + get(&other.coeffs, k))
                .collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        GaussianPoly {
            coeffs: self.coeffs.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    /// Exact `L²(R)` norm; needs `Re a > 0`.
    pub fn l2_norm(&self) -> Result<f64> {
        if !(self.a.re > 0.0) {
            return Err(Error::input(MODULE, "L² norm needs Re a > 0"));
        }
        let alpha = c(2.0 * self.a.re, 0.0);
        let beta = c(2.0 * self.b.re, 0.0);
        let m = 2 * self.coeffs.len();
        let moments = gaussian_moments(alpha, beta, m);
        let mut acc = c(0.0, 0.0);
        for (j, pj) in self.coeffs.iter().enumerate() {
            for (k, pk) in self.coeffs.iter().enumerate() {
                acc += pj * pk.conj() * moments[j + k];
            }
        }
        let base = full_line_gaussian_log(alpha, beta) * LogC::from_ln(c(2.0 * self.c.re, 0.0));
        Ok((base.to_c64() * acc).re.max(0.0).sqrt())
    }
}

/// Normalized moments `M_k = ∫ y^k e^{−αy²/2+βy} / ∫ e^{−αy²/2+βy}`.
fn gaussian_moments(alpha: C64, beta: C64, m: usize) -> Vec<C64> {
    let mu = beta / alpha;
    let mut out = alloc::vec![c(1.0, 0.0); m + 1];
    if m >= 1 {
        out[1] = mu;
    }
    for k in 1..m {
        out[k + 1] = mu * out[k] + out[k - 1] * (k as f64) / alpha;
    }
    out
}

/// Real-side inputs with closed-form or one-dimensional pairings against `e^{iφ(x,·)/h}`.
#[derive(Debug, Clone, PartialEq)]
pub enum TestDistribution {
    Zero,
    Delta {
        y0: f64,
    },
    Heaviside,
    Abs,
    /// `e^{−a y²/2}`.
    Gaussian {
        a: f64,
    },
    Constant,
    Polynomial {
        coeffs: Vec<C64>,
    },
    GaussianPoly(GaussianPoly),
    /// `e^{−1/y}` for `y > 0`, `0` otherwise.
    SmoothNonanalytic,
}

impl TestDistribution {
    pub fn name(&self) -> &'static str {
        match self {
            TestDistribution::Zero => "zero",
            TestDistribution::Delta { .. } => "delta",
            TestDistribution::Heaviside => "heaviside",
            TestDistribution::Abs => "abs",
            TestDistribution::Gaussian { .. } => "gaussian",
            TestDistribution::Constant => "constant",
            TestDistribution::Polynomial { .. } => "polynomial",
            TestDistribution::GaussianPoly(_) => "gaussian_poly",
            TestDistribution::SmoothNonanalytic => "smooth_nonanalytic",
        }
    }

    /// Pointwise value where it is a function.
    pub fn eval(&self, y: f64) -> Option<C64> {
        Some(match self {
            TestDistribution::Zero => c(0.0, 0.0),
            TestDistribution::Delta { .. } => return None,
            TestDistribution::Heaviside => c(if y > 0.0 { 1.0 } else { 0.0 }, 0.0),
            TestDistribution::Abs => c(y.abs(), 0.0),
            TestDistribution::Gaussian { a } => c((-a * y * y / 2.0).exp(), 0.0),
            TestDistribution::Constant => c(1.0, 0.0),
            TestDistribution::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(c(0.0, 0.0), |acc, k| acc * y + k)
            }
            TestDistribution::GaussianPoly(g) => g.eval(y),
            TestDistribution::SmoothNonanalytic => {
                c(if y > 0.0 { (-1.0 / y).exp() } else { 0.0 }, 0.0)
            }
        })
    }

    pub fn as_gaussian_poly(&self) -> Option<GaussianPoly> {
        match self {
            TestDistribution::Gaussian { a } => Some(GaussianPoly::gaussian(*a)),
            TestDistribution::GaussianPoly(g) => Some(g.clone()),
            _ => None,
        }
    }

    pub fn l2_norm(&self) -> Result<f64> {
        match self {
            TestDistribution::Zero => Ok(0.0),
            _ => self
                .as_gaussian_poly()
                .ok_or_else(|| {
                    Error::input(MODULE, "L² norm available for Gaussian-type inputs only")
                })?
                .l2_norm(),
        }
    }
}

/// `∫ e^{i(½q_xx x² + q_xy x y + ½q_yy y²)/h} u(y) dy` in log form (`Im q_yy > 0`).
pub fn pairing_1d_log(
    u: &TestDistribution,
    qxx: C64,
    qxy: C64,
    qyy: C64,
    h: f64,
    x: C64,
) -> Result<LogC> {
    let alpha0 = -I * qyy / h;
    let beta0 = I * qxy * x / h;
    let gamma0 = I * qxx * x * x / (2.0 * h);
    let eg = LogC::from_ln(gamma0);
    Ok(match u {
        TestDistribution::Zero => LogC::ZERO,
        TestDistribution::Delta { y0 } => {
            LogC::from_ln(gamma0 + beta0 * *y0 - alpha0 * (y0 * y0 / 2.0))
        }
        TestDistribution::Constant => full_line_gaussian_log(alpha0, beta0) * eg,
        TestDistribution::Heaviside => half_line_gaussian_log(alpha0, beta0) * eg,
        TestDistribution::Abs => {
            (half_line_first_moment(alpha0, beta0) + half_line_first_moment(alpha0, -beta0)) * eg
        }
        TestDistribution::Polynomial { coeffs } => polynomial_pairing(coeffs, alpha0, beta0) * eg,
        TestDistribution::Gaussian { a } => full_line_gaussian_log(alpha0 + *a, beta0) * eg,
        TestDistribution::GaussianPoly(g) => {
            polynomial_pairing(&g.coeffs, alpha0 + g.a, beta0 + g.b) * LogC::from_ln(gamma0 + g.c)
        }
        TestDistribution::SmoothNonanalytic => smooth_nonanalytic_pairing(alpha0, beta0, h)? * eg,
    })
}

fn half_line_first_moment(alpha: C64, beta: C64) -> LogC {
    // J₁ = (β J₀ + 1)/α
    let j0 = half_line_gaussian_log(alpha, beta);
    (j0 * LogC::from_c64(beta) + LogC::ONE) * LogC::from_c64(c(1.0, 0.0) / alpha)
}

fn polynomial_pairing(coeffs: &[C64], alpha: C64, beta: C64) -> LogC {
    let moments = gaussian_moments(alpha, beta, coeffs.len().max(1));
    let s: C64 = coeffs.iter().zip(&moments).map(|(p, m)| p * m).sum();
    full_line_gaussian_log(alpha, beta) * LogC::from_c64(s)
}

fn smooth_nonanalytic_pairing(alpha: C64, beta: C64, h: f64) -> Result<LogC> {
    if !(alpha.re > 0.0) {
        return Err(Error::input(MODULE, "pairing needs Im q_yy > 0"));
    }
    let width = (1.0 / alpha.re).sqrt();
    let peak = (beta.re / alpha.re).max(0.0);
    let top = peak + 14.0 * width + 1.0;
    let expo = |y: f64| -alpha * (y * y / 2.0) + beta * y - 1.0 / y;
    // Factor out the largest modulus to stay in range.
    let probe = crate::quad::linspace(top * 1e-3, top, 400);
    let shift = probe
        .iter()
        .map(|&y| expo(y).re)
        .fold(f64::NEG_INFINITY, f64::max);
    let freq = beta.im.abs() + alpha.im.abs() * top;
    let panels =
        ((top * (freq / core::f64::consts::PI + 2.0 / width)).ceil() as usize).clamp(8, 20_000);
    let gl = GaussLegendre::new(16);
    let v = gl.integrate_complex(
        |y| {
            if y <= 0.0 {
                c(0.0, 0.0)
            } else {
                (expo(y) - shift).exp()
            }
        },
        0.0,
        top,
        panels,
    );
    let _ = h;
    Ok(LogC::from_c64(v) * LogC::from_ln(c(shift, 0.0)))
}

fn diagonal_entries(phi: &FBIPhase) -> Result<Vec<(C64, C64, C64)>> {
    let n = phi.n();
    let off = |m: &CMat| (0..n).any(|i| (0..n).any(|j| i != j && m[(i, j)].norm() > 0.0));
    if n > 1 && (off(phi.q_xx()) || off(phi.q_xy()) || off(phi.q_yy())) {
        return Err(Error::input(
            MODULE,
            "tensor-product inputs in n > 1 need a diagonal phase",
        ));
    }
    Ok((0..n)
        .map(|j| (phi.q_xx()[(j, j)], phi.q_xy()[(j, j)], phi.q_yy()[(j, j)]))
        .collect())
}

/// `log Tu(x)` for a tensor product of one-dimensional inputs.
pub fn fbi_value_log(u: &[TestDistribution], phi: &FBIPhase, h: f64, x: &[C64]) -> Result<LogC> {
    let n = phi.n();
    if u.len() != n || x.len() != n {
        return Err(Error::dim(
            MODULE,
            "one input factor and one coordinate per dimension",
        ));
    }
    if !(h > 0.0) {
        return Err(Error::input(MODULE, "h must be positive"));
    }
    let diag = diagonal_entries(phi)?;
    let pref = unitarity_constant(phi) * h.powf(-0.75 * n as f64);
    let mut acc = LogC::from_c64(c(pref, 0.0));
    for ((uj, &(qxx, qxy, qyy)), xj) in u.iter().zip(&diag).zip(x) {
        acc = acc * pairing_1d_log(uj, qxx, qxy, qyy, h, *xj)?;
    }
    Ok(acc)
}

fn check_grid(grid: &Grid, h: f64) -> Result<()> {
    if grid.max_spacing() > 0.5 * h.sqrt() {
        return Err(Error::input(
            MODULE,
            "grid too coarse for h (spacing must be ≤ √h/2)",
        ));
    }
    Ok(())
}

/// `Tu` sampled on `grid`, carrying the weight of `φ`.
pub fn fbi_forward(
    u: &[TestDistribution],
    phi: &FBIPhase,
    h: f64,
    grid: &Grid,
) -> Result<HoloSample> {
    check_grid(grid, h)?;
    let weight = phase::weight_from_phase(phi)?.weight;
    let mut values = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let v = fbi_value_log(u, phi, h, &grid.node(k))?;
        if v.log_abs() > 700.0 {
            return Err(Error::numerical(
                MODULE,
                "transform overflows f64 on this grid",
            ));
        }
        values.push(v.to_c64());
    }
    HoloSample::new(weight, h, grid.clone(), values)
}

/// `Tu` of uniform real samples by the trapezoid rule (`n = 1`).
pub fn fbi_forward_samples(
    u: &RealSamples,
    phi: &FBIPhase,
    h: f64,
    grid: &Grid,
) -> Result<HoloSample> {
    if phi.n() != 1 || grid.n() != 1 {
        return Err(Error::dim(MODULE, "sampled transforms are one-dimensional"));
    }
    check_grid(grid, h)?;
    let ax = u.axis;
    let peak = u.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let ends = u.values[0].norm().max(u.values[ax.steps - 1].norm());
    if ends > 1e-8 * peak.max(1e-300) {
        return Err(Error::pre(
            MODULE,
            "real samples do not vanish at the window edges",
        ));
    }
    let (qxx, qxy, qyy) = (phi.q_xx()[(0, 0)], phi.q_xy()[(0, 0)], phi.q_yy()[(0, 0)]);
    let dy = ax.spacing();
    let mut max_freq: f64 = 0.0;
    for a in grid.axes().iter().take(1) {
        for b in grid.axes().iter().skip(1).take(1) {
            for x in [
                c(a.min, b.min),
                c(a.min, b.max),
                c(a.max, b.min),
                c(a.max, b.max),
            ] {
                for y in [ax.min, ax.max] {
                    max_freq = max_freq.max((qxy * x + qyy * y).re.abs() / h);
                }
            }
        }
    }
    if dy * max_freq > core::f64::consts::PI / 2.0 || dy > 0.25 * h.sqrt() {
        return Err(Error::input(
            MODULE,
            "real sampling too coarse (Nyquist check against h)",
        ));
    }
    let weight = phase::weight_from_phase(phi)?.weight;
    let pref = unitarity_constant(phi) * h.powf(-0.75);
    let mut values = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let x = grid.node(k)[0];
        let mut acc = c(0.0, 0.0);
        for (j, uj) in u.values.iter().enumerate() {
            let y = ax.node(j);
            let ph = (qxx * x * x * 0.5 + qxy * x * y + qyy * (y * y * 0.5)) * I / h;
            acc += (ph).exp() * uj;
        }
        values.push(acc * (dy * pref));
    }
    HoloSample::new(weight, h, grid.clone(), values)
}

fn same_weight(a: &RealQuadraticWeight, b: &RealQuadraticWeight) -> bool {
    let s = cnorm(a.p()).max(cnorm(a.l())).max(1.0);
    cnorm(&(a.p() - b.p())) <= 1e-10 * s && cnorm(&(a.l() - b.l())) <= 1e-10 * s
}

/// `T*v(y) = C h^{−3n/4} ∫ conj(e^{iφ(x,y)/h}) v(x) e^{−2Φ(x)/h} L(dx)` on a real axis (`n = 1`).
pub fn fbi_adjoint(v: &HoloSample, phi: &FBIPhase, axis: Axis) -> Result<RealSamples> {
    if phi.n() != 1 || v.grid.n() != 1 {
        return Err(Error::dim(MODULE, "adjoint implemented for n = 1"));
    }
    let weight = phase::weight_from_phase(phi)?.weight;
    if !same_weight(&weight, &v.weight) {
        return Err(Error::input(
            MODULE,
            "field weight does not match the weight of φ",
        ));
    }
    let h = v.h;
    let (qxx, qxy, qyy) = (phi.q_xx()[(0, 0)], phi.q_xy()[(0, 0)], phi.q_yy()[(0, 0)]);
    let pref = unitarity_constant(phi) * h.powf(-0.75) * v.grid.cell_volume();
    let nodes: Vec<(C64, C64, f64)> = (0..v.grid.len())
        .filter(|&k| v.values[k] != c(0.0, 0.0))
        .map(|k| {
            let x = v.grid.node(k)[0];
            (x, v.values[k], weight.eval(&[x]))
        })
        .collect();
    let values = (0..axis.steps)
        .map(|j| {
            let y = axis.node(j);
            let mut acc = c(0.0, 0.0);
            for &(x, vx, phx) in &nodes {
                let ph = (qxx * x * x * 0.5 + qxy * x * y + qyy * (y * y * 0.5)) * I / h;
                acc += (ph.conj() - 2.0 * phx / h).exp() * vx;
            }
            acc * pref
        })
        .collect();
    RealSamples::new(axis, values)
}

/// `‖v‖_{H_Φ}` by the Riemann sum on the grid.
pub fn hphi_norm(v: &HoloSample) -> f64 {
    v.norm_on(None)
}

/// Width scale `√(h/λ_min)` of the Bergman kernel.
fn kernel_width(w: &RealQuadraticWeight, h: f64) -> Result<f64> {
    let lmin = w.levi_eigenvalues().first().copied().unwrap_or(0.0);
    if !(lmin > 0.0) {
        return Err(Error::pre(MODULE, "Φ is not strictly plurisubharmonic"));
    }
    Ok((h / lmin).sqrt())
}

/// `Πv(x)` at a single point, summing over grid nodes within `10·√(h/λ_min)` of `x`.
pub fn bergman_at(v: &HoloSample, x: &[C64]) -> Result<C64> {
    let w = &v.weight;
    let h = v.h;
    let width = kernel_width(w, h)?;
    if v.grid.max_spacing() > 0.5 * width {
        return Err(Error::input(
            MODULE,
            "grid spacing too coarse for the Bergman kernel width",
        ));
    }
    let n = w.n();
    let psi = polarization(w);
    let pref =
        2f64.powi(n as i32) * linalg::det(w.l()).re / (core::f64::consts::PI * h).powi(n as i32);
    let window = 10.0 * width;
    let mut acc = c(0.0, 0.0);
    for k in 0..v.grid.len() {
        let y = v.grid.node(k);
        let d2: f64 = y.iter().zip(x).map(|(a, b)| (a - b).norm_sqr()).sum();
        if d2 > window * window {
            continue;
        }
        let yc: Vec<C64> = y.iter().map(|z| z.conj()).collect();
        let e = psi.eval(x, &yc) * (2.0 / h) - 2.0 * w.eval(&y) / h;
        acc += e.exp() * v.values[k];
    }
    Ok(acc * (pref * v.grid.cell_volume()))
}

/// `Πv` at the listed nodes (others set to zero), or everywhere when `nodes` is `None`.
pub fn bergman_project(v: &HoloSample, nodes: Option<&[usize]>) -> Result<HoloSample> {
    let mut out = v.zeros_like();
    let all: Vec<usize>;
    let ks = match nodes {
        Some(k) => k,
        None => {
            all = (0..v.grid.len()).collect();
            &all
        }
    };
    for &k in ks {
        out.values[k] = bergman_at(v, &v.grid.node(k))?;
    }
    Ok(out)
}

/// Mean-value inversion along `Γ_R(x)`:
/// `(R/πh)^n ∫_{|y−x|<r} e^{(2/h)(x−y)·∂Φ(x) − R|x−y|²/h} v(y) L(dy)`.
pub fn mean_value_inversion(v: &HoloSample, x: &[C64], big_r: f64, r: f64) -> Result<C64> {
    let n = v.weight.n();
    if x.len() != n || !(big_r > 0.0 && r > 0.0) {
        return Err(Error::input(MODULE, "need a point of C^n and R, r > 0"));
    }
    let h = v.h;
    let dphi = v.weight.holo_gradient(x);
    let mut acc = c(0.0, 0.0);
    for k in 0..v.grid.len() {
        let y = v.grid.node(k);
        let d2: f64 = y.iter().zip(x).map(|(a, b)| (a - b).norm_sqr()).sum();
        if d2 >= r * r {
            continue;
        }
        let lin: C64 = x
            .iter()
            .zip(&y)
            .zip(&dphi)
            .map(|((a, b), g)| (a - b) * g)
            .sum();
        acc += (lin * (2.0 / h) - big_r * d2 / h).exp() * v.values[k];
    }
    Ok(acc * (big_r / (core::f64::consts::PI * h)).powi(n as i32) * v.grid.cell_volume())
}

/// Integration contours with a numerical good-contour certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum ContourSpec {
    /// `θ = (2/i)∂Φ(x) + iR·conj(x − y)`, `|x − y| < r`.
    GammaR { big_r: f64, radius: f64 },
    /// `θ = (2/i)∂Φ((x+y)/2) + (i/C)·conj(x − y)/⟨x − y⟩`.
    GammaC { c: f64 },
    /// `x₀ + t·direction`, `|t| ≤ radius`, for a real form `q` whose restriction must decay.
    Affine {
        base: C64,
        direction: C64,
        radius: f64,
    },
}

/// Largest value of `(weighted phase − critical value)/|Δ|²` on sample points. Negative means the
/// weighted phase decays quadratically along the contour (`|Δ|²/⟨Δ⟩` for `GammaC`).
pub fn contour_certificate(spec: &ContourSpec, w: &RealQuadraticWeight, x: C64) -> Result<f64> {
    if w.n() != 1 {
        return Err(Error::dim(
            MODULE,
            "contour certificates are one-dimensional",
        ));
    }
    let mut worst = f64::NEG_INFINITY;
    let dirs = 24;
    match spec {
        ContourSpec::GammaR { big_r, radius } => {
            let theta0 = w.xi(&[x])[0];
            for k in 0..dirs {
                for s in 1..=8 {
                    let t = radius * s as f64 / 8.0;
                    let d =
                        C64::from_polar(t, 2.0 * core::f64::consts::PI * k as f64 / dirs as f64);
                    let y = x + d;
                    let theta = theta0 + I * *big_r * (x - y).conj();
                    let val = -((x - y) * theta).im + w.eval(&[y]) - w.eval(&[x]);
                    worst = worst.max(val / (t * t));
                }
            }
        }
        ContourSpec::GammaC { c: cc } => {
            for k in 0..dirs {
                for s in 1..=12 {
                    let t = 0.25 * s as f64;
                    let d =
                        C64::from_polar(t, 2.0 * core::f64::consts::PI * k as f64 / dirs as f64);
                    let y = x - d;
                    let m = (x + y) * 0.5;
                    let jap = (1.0 + t * t).sqrt();
                    let theta = w.xi(&[m])[0] + I * d.conj() / (*cc * jap);
                    let val = -(d * theta).im + w.eval(&[y]) - w.eval(&[x]);
                    worst = worst.max(val * jap / (t * t));
                }
            }
        }
        ContourSpec::Affine {
            base,
            direction,
            radius,
        } => {
            let f0 = w.eval(&[*base]);
            let g = w.to_real_form().real_gradient(&[*base]);
            for s in 1..=16 {
                for sign in [-1.0, 1.0] {
                    let t = sign * radius * s as f64 / 16.0;
                    let z = *base + direction * t;
                    let lin = g[0] * (direction * t).re + g[1] * (direction * t).im;
                    worst = worst.max((w.eval(&[z]) - f0 - lin) / (t * t));
                }
            }
        }
    }
    Ok(worst)
}

/// Affine contours for the complex Fourier pair of a signature-`(1,1)` weight.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPair {
    pub weight: RealQuadraticForm2n,
    pub dual: RealQuadraticForm2n,
    /// Direction of `Γ_ξ` (forward leg), normalized with positive real part.
    pub forward_direction: C64,
    /// Direction of `Γ*_x` (inverse leg).
    pub inverse_direction: C64,
}

fn descent_direction(q: &RealQuadraticForm2n) -> Result<C64> {
    let (vals, vecs) = linalg::symmetric_eigen(q.matrix());
    let k = (0..vals.len())
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap_or(0);
    if !(vals[k] < 0.0) {
        return Err(Error::pre(
            MODULE,
            "no good affine contour: Hessian has no negative direction",
        ));
    }
    let mut d = c(vecs[(0, k)], vecs[(1, k)]);
    if d.re < 0.0 || (d.re == 0.0 && d.im < 0.0) {
        d = -d;
    }
    Ok(d / d.norm())
}

pub fn fourier_pair(phi: &RealQuadraticForm2n) -> Result<FourierPair> {
    if phi.n() != 1 {
        return Err(Error::dim(
            MODULE,
            "complex Fourier pair implemented for n = 1",
        ));
    }
    let dual = legendre_weight(phi)?;
    Ok(FourierPair {
        forward_direction: descent_direction(phi)?,
        inverse_direction: descent_direction(&dual)?,
        weight: phi.clone(),
        dual,
    })
}

fn contour_rule(radius: f64, h: f64) -> (Vec<f64>, Vec<f64>) {
    let gl = GaussLegendre::new(20);
    let panels = ((2.0 * radius / h.sqrt()) * 1.5).ceil().max(4.0) as usize;
    gl.composite(-radius, radius, panels)
}

/// `Fu(ξ) = ∫_{Γ_ξ} e^{−ixξ/h} u(x) dx`, `Γ_ξ = x(ξ) + t·d`, `|t| ≤ radius`.
pub fn complex_fourier(
    u: &dyn Fn(C64) -> C64,
    pair: &FourierPair,
    h: f64,
    xi: C64,
    radius: f64,
) -> Result<C64> {
    let x0 = phase::dual_critical_point(&pair.weight, &[xi])?[0];
    let d = pair.forward_direction;
    let (ts, ws) = contour_rule(radius, h);
    let mut acc = c(0.0, 0.0);
    for (t, wt) in ts.iter().zip(&ws) {
        let x = x0 + d * *t;
        acc += (-I * x * xi / h).exp() * u(x) * *wt;
    }
    Ok(acc * d)
}

/// `Gv(x) = (2πh)^{−1} ∫_{Γ*_x} e^{ixξ/h} v(ξ) dξ`, `Γ*_x = ξ(x) + s·e`, `|s| ≤ radius`.
pub fn complex_fourier_inverse(
    v: &dyn Fn(C64) -> C64,
    pair: &FourierPair,
    h: f64,
    x: C64,
    radius: f64,
) -> Result<C64> {
    let xi0 = pair.weight.to_weight().xi(&[x])[0];
    let e = pair.inverse_direction;
    let (ss, ws) = contour_rule(radius, h);
    let mut acc = c(0.0, 0.0);
    for (s, ws) in ss.iter().zip(&ws) {
        let xi = xi0 + e * *s;
        acc += (I * x * xi / h).exp() * v(xi) * *ws;
    }
    Ok(acc * e / (2.0 * core::f64::consts::PI * h))
}

/// `GFu(x)` by nested quadrature.
pub fn fourier_roundtrip(
    u: &dyn Fn(C64) -> C64,
    pair: &FourierPair,
    h: f64,
    x: C64,
    radius: f64,
) -> Result<C64> {
    let fu = |xi: C64| complex_fourier(u, pair, h, xi, radius).unwrap_or(c(f64::NAN, f64::NAN));
    let out = complex_fourier_inverse(&fu, pair, h, x, radius)?;
    if !(out.re.is_finite() && out.im.is_finite()) {
        return Err(Error::numerical(
            MODULE,
            "Fourier round trip produced a non-finite value",
        ));
    }
    Ok(out)
}

/// Covering grid for `Tu` with `u` concentrated in `window` (`n = 1`): the κ-image of
/// `window × [−k√h/2, k√h/2]`, widened by `k·√(h/4λ_min)`, spacing `spacing_factor·√h`.
pub fn covering_grid(
    phi: &FBIPhase,
    h: f64,
    window: (f64, f64),
    k: f64,
    spacing_factor: f64,
) -> Result<Grid> {
    if phi.n() != 1 {
        return Err(Error::dim(MODULE, "covering grids are built for n = 1"));
    }
    let pw = phase::weight_from_phase(phi)?;
    let lmin = pw.weight.levi_eigenvalues()[0];
    let (qxy, qyy) = (phi.q_xy()[(0, 0)], phi.q_yy()[(0, 0)]);
    let eta = 0.5 * k * h.sqrt();
    let mut re = (f64::INFINITY, f64::NEG_INFINITY);
    let mut im = (f64::INFINITY, f64::NEG_INFINITY);
    for y in [window.0, window.1] {
        for e in [-eta, eta] {
            let x = -(c(e, 0.0) + qyy * y) / qxy;
            re = (re.0.min(x.re), re.1.max(x.re));
            im = (im.0.min(x.im), im.1.max(x.im));
        }
    }
    let margin = k * (h / (4.0 * lmin)).sqrt();
    Grid::rect_1d(
        (re.0 - margin, re.1 + margin),
        (im.0 - margin, im.1 + margin),
        spacing_factor * h.sqrt(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_transform_closed_form() {
        let phi = FBIPhase::bargmann(1);
        let h = 0.1;
        let x = c(0.4, -0.3);
        let v = fbi_value_log(&[TestDistribution::Delta { y0: 0.0 }], &phi, h, &[x])
            .unwrap()
            .to_c64();
        let expect = (-(x * x) / (2.0 * h)).exp() * unitarity_constant(&phi) * h.powf(-0.75);
        assert!((v - expect).norm() < 1e-13 * expect.norm());
        let z = fbi_value_log(&[TestDistribution::Zero], &phi, h, &[x]).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let phi = FBIPhase::new(
            CMat::from_element(1, 1, c(0.3, 0.7)),
            CMat::from_element(1, 1, c(-0.4, -1.0)),
            CMat::from_element(1, 1, c(0.2, 1.3)),
        )
        .unwrap();
        let (qxx, qxy, qyy) = (phi.q_xx()[(0, 0)], phi.q_xy()[(0, 0)], phi.q_yy()[(0, 0)]);
        let h = 0.3;
        let x = c(0.5, 0.2);
        let gl = GaussLegendre::new(24);
        let kern = |y: f64| ((qxx * x * x * 0.5 + qxy * x * y + qyy * (y * y * 0.5)) * I / h).exp();
        let gp = GaussianPoly {
            coeffs: alloc::vec![c(0.5, 0.0), c(0.0, 1.0), c(2.0, -1.0)],
            a: c(0.7, 0.2),
            b: c(0.1, -0.3),
            c: c(0.0, 0.0),
        };
        let cases: Vec<(TestDistribution, f64)> = alloc::vec![
            (TestDistribution::Constant, -20.0),
            (TestDistribution::Heaviside, 0.0),
            (TestDistribution::Abs, -20.0),
            (TestDistribution::Gaussian { a: 1.5 }, -20.0),
            (
                TestDistribution::Polynomial {
                    coeffs: alloc::vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.0)]
                },
                -20.0
            ),
            (TestDistribution::GaussianPoly(gp), -20.0),
            (TestDistribution::SmoothNonanalytic, 0.0),
        ];
        for (u, lo) in cases {
            let exact = pairing_1d_log(&u, qxx, qxy, qyy, h, x).unwrap().to_c64();
            let quad = gl.integrate_complex(|y| kern(y) * u.eval(y).unwrap(), lo, 20.0, 400);
            assert!(
                (exact - quad).norm() < 1e-10 * quad.norm().max(1.0),
                "{}: {exact} vs {quad}",
                u.name()
            );
        }
    }

    #[test]
    fn gaussian_poly_operations() {
        let g = GaussianPoly {
            coeffs: alloc::vec![c(1.0, 0.0), c(0.5, 0.0)],
            a: c(1.0, 0.0),
            b: c(0.2, 0.0),
            c: c(0.0, 0.0),
        };
        let h = 0.1;
        let d = g.h_d(h);
        let s = g.shift_multiply(0.3, -0.2, h);
        for y in [-0.7, 0.1, 1.3] {
            let fd = (g.eval(y + 1e-5) - g.eval(y - 1e-5)) / 2e-5 * c(0.0, -h);
            assert!((d.eval(y) - fd).norm() < 1e-8);
            let expect =
                (I * 0.3 * y / h).exp() * (I * 0.3 * -0.2 / (2.0 * h)).exp() * g.eval(y - 0.2);
            assert!((s.eval(y) - expect).norm() < 1e-13);
            assert!((g.mul_y().eval(y) - g.eval(y) * y).norm() < 1e-15);
        }
        let gl = GaussLegendre::new(24);
        let n2 = gl.integrate(|y| g.eval(y).norm_sqr(), -15.0, 15.0, 60);
        assert!((g.l2_norm().unwrap() - n2.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fourier_pair_directions() {
        let q = RealQuadraticForm2n::new(crate::RMat::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]))
            .unwrap();
        let p = fourier_pair(&q).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((p.forward_direction - c(s, -s)).norm() < 1e-12);
        assert!((p.inverse_direction - c(s, s)).norm() < 1e-12);
    }
}
