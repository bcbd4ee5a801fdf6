//! Weyl quantization on the FBI side for symbols holomorphic in a tube around `Λ_Φ`, computed
//! by quadrature along the tilted contour `Γ_C`; exact real-side quantization of linear forms
//! and their exponentials; Egorov and quantization-multiplication residuals; small bounded
//! perturbations of the weight. All of it is one-dimensional.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::csymplectic::RealQuadraticWeight;
use crate::grid::{Grid, HoloSample, RealSamples};
use crate::linalg::{self, c, I};
use crate::phase::{kappa_matrix, FBIPhase};
use crate::poly::Poly;
use crate::transform::{fbi_forward, fbi_value_log, ContourSpec, GaussianPoly, TestDistribution};
use crate::{Error, Result, C64};

const MODULE: &str = "quantize";

/// Contour constant used for entire symbols, which impose no tube constraint.
pub const ENTIRE_CONTOUR_CONSTANT: f64 = 1.0;

/// Contributions whose weighted size falls below `e^{−WINDOW_DECAY}` are dropped.
const WINDOW_DECAY: f64 = 32.0;

/// Weighted samples at the grid edge must be this small relative to the peak.
const EDGE_DECAY: f64 = 1e-6;

#[derive(Debug, Clone)]
pub enum SymbolKind {
    /// Polynomial in `(x, ξ)`.
    Polynomial(Poly<C64>),
    /// `c₀ + x*·x + ξ*·ξ`.
    LinearForm {
        constant: C64,
        x_star: C64,
        xi_star: C64,
    },
    /// `e^{i(x*·x + ξ*·ξ)/h}`.
    ExpLinear { x_star: C64, xi_star: C64 },
    /// Holomorphic in `(x, ξ)` on `Λ_Φ + {|Δξ| < radius}`.
    Analytic(fn(C64, C64) -> C64),
}

/// Symbol `a(x, ξ)` holomorphic near `Λ_Φ`. `radius` is the tube half-width in the fiber
/// variable (`∞` for entire symbols); `sup` bounds `|a|` on the tube when known.
#[derive(Debug, Clone)]
pub struct TubeSymbol {
    pub kind: SymbolKind,
    pub radius: f64,
    pub sup: Option<f64>,
}

impl TubeSymbol {
    pub fn constant(value: C64) -> Self {
        TubeSymbol::linear(value, c(0.0, 0.0), c(0.0, 0.0))
    }

    pub fn linear(constant: C64, x_star: C64, xi_star: C64) -> Self {
        TubeSymbol {
            kind: SymbolKind::LinearForm {
                constant,
                x_star,
                xi_star,
            },
            radius: f64::INFINITY,
            sup: None,
        }
    }

    pub fn exp_linear(x_star: C64, xi_star: C64) -> Self {
        TubeSymbol {
            kind: SymbolKind::ExpLinear { x_star, xi_star },
            radius: f64::INFINITY,
            sup: None,
        }
    }

    pub fn polynomial(p: Poly<C64>) -> Result<Self> {
        if p.nvars() != 2 {
            return Err(Error::dim(MODULE, "symbols are polynomials in (x, ξ)"));
        }
        Ok(TubeSymbol {
            kind: SymbolKind::Polynomial(p),
            radius: f64::INFINITY,
            sup: None,
        })
    }

    pub fn analytic(f: fn(C64, C64) -> C64, radius: f64, sup: f64) -> Result<Self> {
        if !(radius > 0.0) || !(sup >= 0.0 && sup.is_finite()) {
            return Err(Error::input(
                MODULE,
                "tube radius must be positive and the sup bound finite",
            ));
        }
        Ok(TubeSymbol {
            kind: SymbolKind::Analytic(f),
            radius,
            sup: Some(sup),
        })
    }

    pub fn tag(&self) -> &'static str {
        match self.kind {
            SymbolKind::Polynomial(_) => "polynomial",
            SymbolKind::LinearForm { .. } => "linear_form",
            SymbolKind::ExpLinear { .. } => "exp_linear",
            SymbolKind::Analytic(_) => "analytic",
        }
    }

    /// `2/radius`, or [`ENTIRE_CONTOUR_CONSTANT`] for entire symbols.
    pub fn contour_constant(&self) -> f64 {
        if self.radius.is_finite() {
            2.0 / self.radius
        } else {
            ENTIRE_CONTOUR_CONSTANT
        }
    }

    /// `a(x, ξ)` split as `m·e^{s}` so that exponentials of linear forms stay in log form.
    fn split(&self, x: C64, xi: C64, h: f64) -> (C64, C64) {
        match &self.kind {
            SymbolKind::Polynomial(p) => (p.eval(&[x, xi]), c(0.0, 0.0)),
            SymbolKind::LinearForm {
                constant,
                x_star,
                xi_star,
            } => (constant + x_star * x + xi_star * xi, c(0.0, 0.0)),
            SymbolKind::ExpLinear { x_star, xi_star } => {
                (c(1.0, 0.0), I * (x_star * x + xi_star * xi) / h)
            }
            SymbolKind::Analytic(f) => (f(x, xi), c(0.0, 0.0)),
        }
    }

    pub fn eval(&self, x: C64, xi: C64, h: f64) -> C64 {
        let (m, s) = self.split(x, xi, h);
        m * s.exp()
    }

    /// Bound on `h·log|e^{s}|` gained by leaving `Λ_Φ` by at most `shift` in the fiber.
    fn exp_growth(&self, shift: f64) -> f64 {
        match self.kind {
            SymbolKind::ExpLinear { xi_star, .. } => xi_star.norm() * shift,
            _ => 0.0,
        }
    }
}

/// `Φ̃ = Φ + f` with the bump `f(x) = ε e^{−|x − x₀|²/w²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDeformation {
    pub base: RealQuadraticWeight,
    pub amplitude: f64,
    pub center: C64,
    pub width: f64,
}

impl WeightDeformation {
    pub fn new(base: RealQuadraticWeight, amplitude: f64, center: C64, width: f64) -> Result<Self> {
        if base.n() != 1 {
            return Err(Error::dim(
                MODULE,
                "weight deformations are one-dimensional",
            ));
        }
        if !amplitude.is_finite() || !(width > 0.0) {
            return Err(Error::input(
                MODULE,
                "bump needs a finite amplitude and positive width",
            ));
        }
        Ok(WeightDeformation {
            base,
            amplitude,
            center,
            width,
        })
    }

    /// The undeformed weight.
    pub fn none(base: RealQuadraticWeight) -> Result<Self> {
        WeightDeformation::new(base, 0.0, c(0.0, 0.0), 1.0)
    }

    fn bump(&self, x: C64) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        self.amplitude * (-(x - self.center).norm_sqr() / (self.width * self.width)).exp()
    }

    pub fn perturbation(&self, x: C64) -> f64 {
        self.bump(x)
    }

    fn base_eval(&self, x: C64) -> f64 {
        (self.base.p()[(0, 0)] * x * x).re + self.base.l()[(0, 0)].re * x.norm_sqr()
    }

    pub fn eval(&self, x: C64) -> f64 {
        self.base_eval(x) + self.bump(x)
    }

    /// `∂_x Φ̃`.
    pub fn holo_gradient(&self, x: C64) -> C64 {
        let z = x - self.center;
        let base = self.base.p()[(0, 0)] * x + x.conj() * self.base.l()[(0, 0)].re;
        base - z.conj() * (self.bump(x) / (self.width * self.width))
    }

    /// `ξ = (2/i)∂_x Φ̃`.
    pub fn xi(&self, x: C64) -> C64 {
        self.holo_gradient(x) * c(0.0, -2.0)
    }

    /// `∂_x∂_x̄ Φ̃`.
    pub fn levi(&self, x: C64) -> f64 {
        let w2 = self.width * self.width;
        self.base.l()[(0, 0)].re
            + self.bump(x) * ((x - self.center).norm_sqr() / (w2 * w2) - 1.0 / w2)
    }

    /// `‖∇f‖_∞` in real coordinates.
    pub fn gradient_sup(&self) -> f64 {
        self.amplitude.abs() * core::f64::consts::SQRT_2 * (-0.5f64).exp() / self.width
    }

    /// `‖∇²f‖_∞` in real coordinates.
    pub fn hessian_sup(&self) -> f64 {
        2.0 * self.amplitude.abs() / (self.width * self.width)
    }

    /// Both norms must stay below `1/(4C)` for the contour constant `C`.
    pub fn check(&self, contour_c: f64) -> Result<()> {
        let limit = 1.0 / (4.0 * contour_c);
        if self.gradient_sup() > limit || self.hessian_sup() > limit {
            return Err(Error::pre(
                MODULE,
                "weight perturbation exceeds the smallness threshold 1/(4C)",
            ));
        }
        Ok(())
    }

    /// `e^{−2Φ̃/h}`-weighted inner product over the listed nodes of a common grid.
    pub fn inner(&self, u: &HoloSample, v: &HoloSample, nodes: &[usize], cell: f64) -> C64 {
        let mut acc = c(0.0, 0.0);
        for &k in nodes {
            let x = u.grid.node(k)[0];
            let d = (-self.eval(x) / u.h).exp();
            acc += (u.values[k] * d) * (v.values[k] * d).conj();
        }
        acc * cell
    }

    pub fn norm(&self, v: &HoloSample, nodes: &[usize], cell: f64) -> f64 {
        self.inner(v, v, nodes, cell).re.max(0.0).sqrt()
    }
}

fn contour_constant(spec: &ContourSpec) -> Result<f64> {
    match spec {
        ContourSpec::GammaC { c: cc } if *cc > 0.0 && cc.is_finite() => Ok(*cc),
        ContourSpec::GammaC { .. } => {
            Err(Error::input(MODULE, "contour constant C must be positive"))
        }
        _ => Err(Error::input(
            MODULE,
            "FBI-side quantization integrates along Γ_C",
        )),
    }
}

/// Largest `|w|` with `|w|²/⟨w⟩ ≤ s`.
fn window_radius(s: f64) -> f64 {
    let s2 = s * s;
    ((s2 + (s2 * s2 + 4.0 * s2).sqrt()) / 2.0).sqrt()
}

fn check_field(v: &HoloSample, weight: &WeightDeformation) -> Result<()> {
    if v.grid.n() != 1 || v.weight.n() != 1 {
        return Err(Error::dim(
            MODULE,
            "FBI-side quantization is one-dimensional",
        ));
    }
    let scale = linalg::cnorm(v.weight.p())
        .max(linalg::cnorm(v.weight.l()))
        .max(1.0);
    let gap = linalg::cnorm(&(v.weight.p() - weight.base.p()))
        .max(linalg::cnorm(&(v.weight.l() - weight.base.l())));
    if gap > 1e-10 * scale {
        return Err(Error::input(
            MODULE,
            "field weight differs from the base of the deformation",
        ));
    }
    if v.grid.max_spacing() > 0.5 * v.h.sqrt() {
        return Err(Error::input(
            MODULE,
            "grid too coarse for h (spacing must be ≤ √h/2)",
        ));
    }
    let axes = v.grid.axes();
    let (nx, ny) = (axes[0].steps, axes[1].steps);
    let mut peak: f64 = 0.0;
    let mut edge: f64 = 0.0;
    for k in 0..v.grid.len() {
        let x = v.grid.node(k)[0];
        let m = v.values[k].norm() * (-weight.eval(x) / v.h).exp();
        peak = peak.max(m);
        let (i, j) = (k % nx, k / nx);
        if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
            edge = edge.max(m);
        }
    }
    if edge > EDGE_DECAY * peak {
        return Err(Error::pre(
            MODULE,
            "field is not negligible at the grid edge",
        ));
    }
    Ok(())
}

/// `Op_h^w(a)v` along `Γ_C` for the weight `Φ̃`, evaluated on the `stride`-coarsened grid.
/// Samples off the grid are treated as zero, so `v` must decay at the edge (checked).
pub fn deformed_weyl(
    a: &TubeSymbol,
    v: &HoloSample,
    weight: &WeightDeformation,
    contour: &ContourSpec,
    stride: usize,
) -> Result<HoloSample> {
    let cc = contour_constant(contour)?;
    if 1.0 / cc > a.radius {
        return Err(Error::pre(
            MODULE,
            "contour Γ_C leaves the tube of the symbol",
        ));
    }
    weight.check(cc)?;
    check_field(v, weight)?;
    let h = v.h;
    let (coarse, parents) = v.grid.coarsen(stride)?;
    let axes = v.grid.axes();
    let (ax, ay) = (axes[0], axes[1]);
    let (dx, dy) = (ax.spacing(), ay.spacing());
    let phy: Vec<f64> = (0..v.grid.len())
        .map(|k| weight.eval(v.grid.node(k)[0]))
        .collect();
    let weighted: Vec<C64> = (0..v.grid.len())
        .map(|k| v.values[k] * (-phy[k] / h).exp())
        .collect();
    // Midpoints (x + y)/2 of grid nodes lie on the half-spacing lattice.
    let (hx, hy) = (2 * ax.steps - 1, 2 * ay.steps - 1);
    let mut mid_xi = Vec::with_capacity(hx * hy);
    let mut mid_levi = Vec::with_capacity(hx * hy);
    for jj in 0..hy {
        for ii in 0..hx {
            let m = c(ax.min + 0.5 * dx * ii as f64, ay.min + 0.5 * dy * jj as f64);
            mid_xi.push(weight.xi(m));
            mid_levi.push(weight.levi(m));
        }
    }
    let reach = window_radius(cc * h * WINDOW_DECAY + cc * a.exp_growth(1.0 / cc));
    let pref = v.grid.cell_volume() / (2.0 * core::f64::consts::PI * h);
    let mut values = Vec::with_capacity(parents.len());
    for &k in &parents {
        let x = v.grid.node(k)[0];
        let (ix, jx) = (k % ax.steps, k / ax.steps);
        let phx = phy[k];
        let i0 = (((x.re - reach - ax.min) / dx).floor().max(0.0)) as usize;
        let i1 = (((x.re + reach - ax.min) / dx).ceil() as usize).min(ax.steps - 1);
        let j0 = (((x.im - reach - ay.min) / dy).floor().max(0.0)) as usize;
        let j1 = (((x.im + reach - ay.min) / dy).ceil() as usize).min(ay.steps - 1);
        let mut acc = c(0.0, 0.0);
        for j in j0..=j1 {
            for i in i0..=i1 {
                let q = j * ax.steps + i;
                if weighted[q] == c(0.0, 0.0) {
                    continue;
                }
                let y = c(ax.node(i), ay.node(j));
                let w = x - y;
                let r2 = w.norm_sqr();
                if r2 > reach * reach {
                    continue;
                }
                let jap = (1.0 + r2).sqrt();
                let m = (x + y) * 0.5;
                let mq = (jx + j) * hx + ix + i;
                let theta = mid_xi[mq] + I * w.conj() / (cc * jap);
                let density = 2.0 * mid_levi[mq] + (2.0 + r2) / (cc * jap * jap * jap);
                let (amp, s) = a.split(m, theta, h);
                let expo = I * w * theta / h + s + (phy[q] - phx) / h;
                acc += expo.exp() * amp * weighted[q] * density;
            }
        }
        values.push(acc * pref * (phx / h).exp());
    }
    HoloSample::new(v.weight.clone(), h, coarse, values)
}

/// `Op_h^w(a)v` along `Γ_C` for the weight of `v` itself.
pub fn weyl_fbi(
    a: &TubeSymbol,
    v: &HoloSample,
    contour: &ContourSpec,
    stride: usize,
) -> Result<HoloSample> {
    deformed_weyl(
        a,
        v,
        &WeightDeformation::none(v.weight.clone())?,
        contour,
        stride,
    )
}

/// Symbols on the real side with exact quantizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealSymbol {
    /// `c₀ + y*·y + η*·η`.
    LinearForm {
        constant: C64,
        y_star: C64,
        eta_star: C64,
    },
    /// `e^{i(y*·y + η*·η)/h}` with real `y*, η*`.
    ExpLinear { y_star: f64, eta_star: f64 },
}

/// `Op_h^w(b)u` on a Gaussian polynomial: `c₀u + y*·yu + η*·hD u`, or the shift-multiplication.
pub fn weyl_real(b: &RealSymbol, u: &GaussianPoly, h: f64) -> Result<GaussianPoly> {
    if !(h > 0.0) {
        return Err(Error::input(MODULE, "h must be positive"));
    }
    match *b {
        RealSymbol::LinearForm {
            constant,
            y_star,
            eta_star,
        } => {
            let pad = |g: GaussianPoly, len: usize| {
                let mut coeffs = g.coeffs;
                coeffs.resize(len, c(0.0, 0.0));
                GaussianPoly { coeffs, ..g }
            };
            let len = u.coeffs.len() + 1;
            let a = pad(u.scale(constant), len);
            let y = pad(u.mul_y().scale(y_star), len);
            let d = pad(u.h_d(h).scale(eta_star), len);
            a.add(&y)?.add(&d)
        }
        RealSymbol::ExpLinear { y_star, eta_star } => Ok(u.shift_multiply(y_star, eta_star, h)),
    }
}

/// `Op_h^w(b)u` on uniform samples. Derivatives use fourth-order central differences (the
/// samples must vanish at the window edges); shifts must be whole multiples of the spacing.
pub fn weyl_real_samples(b: &RealSymbol, u: &RealSamples, h: f64) -> Result<RealSamples> {
    let ax = u.axis;
    let dy = ax.spacing();
    let n = ax.steps;
    let get = |j: isize| {
        if j < 0 || j >= n as isize {
            c(0.0, 0.0)
        } else {
            u.values[j as usize]
        }
    };
    match *b {
        RealSymbol::LinearForm {
            constant,
            y_star,
            eta_star,
        } => {
            let values = (0..n)
                .map(|j| {
                    let k = j as isize;
                    let du = (get(k - 2) - get(k - 1) * 8.0 + get(k + 1) * 8.0 - get(k + 2))
                        / (12.0 * dy);
                    u.values[j] * (constant + y_star * ax.node(j)) + du * (eta_star * c(0.0, -h))
                })
                .collect();
            RealSamples::new(ax, values)
        }
        RealSymbol::ExpLinear { y_star, eta_star } => {
            let shift = eta_star / dy;
            if (shift - shift.round()).abs() > 1e-9 {
                return Err(Error::input(
                    MODULE,
                    "sampled shifts must be whole multiples of the spacing",
                ));
            }
            let s = shift.round() as isize;
            let values = (0..n)
                .map(|j| {
                    let y = ax.node(j);
                    get(j as isize + s) * (I * (y_star * y + y_star * eta_star / 2.0) / h).exp()
                })
                .collect();
            RealSamples::new(ax, values)
        }
    }
}

/// `(y*, η*) = κᵀ(x*, ξ*)`, so that `k∘κ = ℓ` for `k = x*·x + ξ*·ξ`.
fn pull_back(phi: &FBIPhase, x_star: C64, xi_star: C64) -> Result<(C64, C64)> {
    let k = kappa_matrix(phi)?;
    let m = k.matrix();
    Ok((
        m[(0, 0)] * x_star + m[(1, 0)] * xi_star,
        m[(0, 1)] * x_star + m[(1, 1)] * xi_star,
    ))
}

/// The symbol `a∘κ_T` on the real side, for linear forms and bounded exponentials.
pub fn real_side_symbol(a: &TubeSymbol, phi: &FBIPhase) -> Result<RealSymbol> {
    if phi.n() != 1 {
        return Err(Error::dim(MODULE, "Egorov transfer is one-dimensional"));
    }
    match a.kind {
        SymbolKind::LinearForm {
            constant,
            x_star,
            xi_star,
        } => {
            let (y_star, eta_star) = pull_back(phi, x_star, xi_star)?;
            Ok(RealSymbol::LinearForm {
                constant,
                y_star,
                eta_star,
            })
        }
        SymbolKind::ExpLinear { x_star, xi_star } => {
            let (y_star, eta_star) = pull_back(phi, x_star, xi_star)?;
            let scale = y_star.norm().max(eta_star.norm()).max(1.0);
            if y_star.im.abs() > 1e-12 * scale || eta_star.im.abs() > 1e-12 * scale {
                return Err(Error::input(
                    MODULE,
                    "exponential is unbounded on the real side",
                ));
            }
            Ok(RealSymbol::ExpLinear {
                y_star: y_star.re,
                eta_star: eta_star.re,
            })
        }
        _ => Err(Error::input(
            MODULE,
            "Egorov transfer implemented for linear forms and their exponentials",
        )),
    }
}

/// The FBI-side symbol `k = ℓ∘κ_T⁻¹` of a real linear form or its exponential.
pub fn fbi_side_symbol(b: &RealSymbol, phi: &FBIPhase) -> Result<TubeSymbol> {
    if phi.n() != 1 {
        return Err(Error::dim(MODULE, "Egorov transfer is one-dimensional"));
    }
    let k = kappa_matrix(phi)?;
    let mt = linalg::inverse(&k.matrix().transpose(), MODULE)?;
    let push = |ys: C64, es: C64| {
        (
            mt[(0, 0)] * ys + mt[(0, 1)] * es,
            mt[(1, 0)] * ys + mt[(1, 1)] * es,
        )
    };
    Ok(match *b {
        RealSymbol::LinearForm {
            constant,
            y_star,
            eta_star,
        } => {
            let (xs, ks) = push(y_star, eta_star);
            TubeSymbol::linear(constant, xs, ks)
        }
        RealSymbol::ExpLinear { y_star, eta_star } => {
            let (xs, ks) = push(c(y_star, 0.0), c(eta_star, 0.0));
            TubeSymbol::exp_linear(xs, ks)
        }
    })
}

/// `‖Op(a)Tu − T Op(a∘κ_T)u‖_{H_Φ} / ‖Tu‖_{H_Φ}`, measured on the `stride`-coarsened `grid`.
pub fn egorov_residual(
    a: &TubeSymbol,
    phi: &FBIPhase,
    u: &TestDistribution,
    h: f64,
    grid: &Grid,
    stride: usize,
) -> Result<f64> {
    let g = u
        .as_gaussian_poly()
        .ok_or_else(|| Error::input(MODULE, "Egorov residual needs a Gaussian-polynomial input"))?;
    let b = real_side_symbol(a, phi)?;
    let bu = weyl_real(&b, &g, h)?;
    let tu = fbi_forward(core::slice::from_ref(u), phi, h, grid)?;
    let lhs = weyl_fbi(
        a,
        &tu,
        &ContourSpec::GammaC {
            c: a.contour_constant(),
        },
        stride,
    )?;
    let rhs_in = [TestDistribution::GaussianPoly(bu)];
    let mut diff = 0.0;
    let mut base = 0.0;
    for k in 0..lhs.grid.len() {
        let x = lhs.grid.node(k);
        let d = (-2.0 * tu.weight.eval(&x) / h).exp();
        let r = fbi_value_log(&rhs_in, phi, h, &x)?.to_c64();
        let t = fbi_value_log(core::slice::from_ref(u), phi, h, &x)?.to_c64();
        diff += (lhs.values[k] - r).norm_sqr() * d;
        base += t.norm_sqr() * d;
    }
    if !(base > 0.0) {
        return Err(Error::numerical(MODULE, "Tu vanishes on the grid"));
    }
    Ok((diff / base).sqrt())
}

/// `|⟨Op(a)u, v⟩_{H_Φ̃} − ∫ a(x, ξ̃(x)) u v̄ e^{−2Φ̃/h}| / (‖u‖‖v‖)`, every integral taken on the
/// `stride`-coarsened grid.
pub fn quant_mult_residual(
    a: &TubeSymbol,
    u: &HoloSample,
    v: &HoloSample,
    weight: &WeightDeformation,
    stride: usize,
) -> Result<f64> {
    if u.grid != v.grid || u.h != v.h {
        return Err(Error::input(
            MODULE,
            "u and v must share grid, weight and h",
        ));
    }
    let h = u.h;
    let cc = a.contour_constant();
    let opu = deformed_weyl(a, u, weight, &ContourSpec::GammaC { c: cc }, stride)?;
    let (_, parents) = u.grid.coarsen(stride)?;
    let cell = opu.grid.cell_volume();
    let mut lhs = c(0.0, 0.0);
    let mut rhs = c(0.0, 0.0);
    for (kc, &k) in parents.iter().enumerate() {
        let x = u.grid.node(k)[0];
        let d = (-weight.eval(x) / h).exp();
        let vb = (v.values[k] * d).conj();
        lhs += opu.values[kc] * d * vb;
        rhs += a.eval(x, weight.xi(x), h) * u.values[k] * d * vb;
    }
    let nu = weight.norm(u, &parents, cell);
    let nv = weight.norm(v, &parents, cell);
    if !(nu > 0.0 && nv > 0.0) {
        return Err(Error::numerical(MODULE, "u or v vanishes on the grid"));
    }
    Ok(((lhs - rhs) * cell).norm() / (nu * nv))
}

/// Largest measured `|reduced kernel| / ((2πh)^{-1}·max density·e^{−|x−y|²/(Ch⟨x−y⟩)})` of `Op(a)`
/// over sample pairs; at most `sup|a|` whenever the Gaussian bound along `Γ_C` holds.
pub fn reduced_kernel_ratio(
    a: &TubeSymbol,
    weight: &WeightDeformation,
    contour_c: f64,
    h: f64,
    samples: &[(C64, C64)],
) -> f64 {
    let mut worst: f64 = 0.0;
    let dmax = 2.0 * (weight.base.l()[(0, 0)].re + weight.hessian_sup()) + 2.0 / contour_c;
    for &(x, y) in samples {
        let w = x - y;
        let r2 = w.norm_sqr();
        let jap = (1.0 + r2).sqrt();
        let m = (x + y) * 0.5;
        let theta = weight.xi(m) + I * w.conj() / (contour_c * jap);
        let density = 2.0 * weight.levi(m) + (2.0 + r2) / (contour_c * jap * jap * jap);
        let (amp, s) = a.split(m, theta, h);
        let expo = I * w * theta / h + s + (weight.eval(y) - weight.eval(x)) / h;
        let reduced =
            expo.exp().norm() * amp.norm() * density.abs() / (2.0 * core::f64::consts::PI * h);
        let envelope =
            dmax / (2.0 * core::f64::consts::PI * h) * (-r2 / (contour_c * h * jap)).exp();
        worst = worst.max(reduced / envelope);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::covering_grid;

    #[test]
    fn window_radius_inverts_the_profile() {
        for s in [0.5, 3.0, 12.0] {
            let r = window_radius(s);
            assert!((r * r / (1.0 + r * r).sqrt() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn real_side_linear_forms() {
        let h = 0.1;
        let u = GaussianPoly::gaussian(1.0);
        let d = weyl_real(
            &RealSymbol::LinearForm {
                constant: c(0.0, 0.0),
                y_star: c(0.0, 0.0),
                eta_star: c(1.0, 0.0),
            },
            &u,
            h,
        )
        .unwrap();
        // (h/i)(−y e^{−y²/2})
        for y in [-0.7, 0.2, 1.3] {
            assert!((d.eval(y) - c(0.0, h * y) * (-y * y / 2.0).exp()).norm() < 1e-15);
        }
        let e = weyl_real(
            &RealSymbol::ExpLinear {
                y_star: 0.4,
                eta_star: 0.0,
            },
            &u,
            h,
        )
        .unwrap();
        assert!((e.eval(0.5) - (c(0.0, 0.4 * 0.5 / h)).exp() * (-0.125f64).exp()).norm() < 1e-14);
    }

    #[test]
    fn sampled_derivative_matches_closed_form() {
        let h = 0.1;
        let ax = crate::grid::Axis::new(-8.0, 8.0, 1601).unwrap();
        let g = GaussianPoly::gaussian(1.0);
        let s = RealSamples::from_fn(ax, |y| g.eval(y));
        let b = RealSymbol::LinearForm {
            constant: c(0.5, 0.0),
            y_star: c(1.0, 0.0),
            eta_star: c(1.0, 0.0),
        };
        let out = weyl_real_samples(&b, &s, h).unwrap();
        let exact = weyl_real(&b, &g, h).unwrap();
        let err = out
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| (v - exact.eval(ax.node(j))).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn bargmann_symbols_transfer_as_expected() {
        let phi = FBIPhase::bargmann(1);
        // ℓ = y ⇒ k = x + iξ
        let k = fbi_side_symbol(
            &RealSymbol::LinearForm {
                constant: c(0.0, 0.0),
                y_star: c(1.0, 0.0),
                eta_star: c(0.0, 0.0),
            },
            &phi,
        )
        .unwrap();
        match k.kind {
            SymbolKind::LinearForm {
                x_star, xi_star, ..
            } => {
                assert!(
                    (x_star - c(1.0, 0.0)).norm() < 1e-14 && (xi_star - c(0.0, 1.0)).norm() < 1e-14
                );
            }
            _ => unreachable!(),
        }
        let back = real_side_symbol(&k, &phi).unwrap();
        assert_eq!(
            back,
            RealSymbol::LinearForm {
                constant: c(0.0, 0.0),
                y_star: c(1.0, 0.0),
                eta_star: c(0.0, 0.0)
            }
        );
    }

    #[test]
    fn identity_symbol_reproduces_the_field() {
        let phi = FBIPhase::bargmann(1);
        let h = 0.1;
        let grid = covering_grid(&phi, h, (-5.5, 5.5), 8.0, 1.0 / 6.0).unwrap();
        let tu = fbi_forward(&[TestDistribution::Gaussian { a: 1.0 }], &phi, h, &grid).unwrap();
        let out = weyl_fbi(
            &TubeSymbol::constant(c(1.0, 0.0)),
            &tu,
            &ContourSpec::GammaC { c: 1.0 },
            6,
        )
        .unwrap();
        let (_, parents) = grid.coarsen(6).unwrap();
        let mut diff = 0.0;
        let mut base = 0.0;
        for (kc, &k) in parents.iter().enumerate() {
            let d = tu.density(k);
            diff += (out.values[kc] - tu.values[k]).norm_sqr() * d;
            base += tu.values[k].norm_sqr() * d;
        }
        assert!((diff / base).sqrt() < 1e-6, "{}", (diff / base).sqrt());
    }

    #[test]
    fn deformation_norms_and_threshold() {
        let w = RealQuadraticWeight::standard(1);
        let d = WeightDeformation::new(w.clone(), 0.01, c(0.3, 0.0), 0.5).unwrap();
        assert!((d.hessian_sup() - 0.08).abs() < 1e-15);
        assert!(d.check(1.0).is_ok());
        assert!(WeightDeformation::new(w, 0.2, c(0.0, 0.0), 0.5)
            .unwrap()
            .check(1.0)
            .is_err());
        // levi of the bump at its center is −ε/w²
        assert!((d.levi(c(0.3, 0.0)) - (0.5 - 0.04)).abs() < 1e-15);
    }
}
