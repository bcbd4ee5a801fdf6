//! Computations shared by the subcommands and the acceptance runner.

use fbi_core::csymplectic::{RealQuadraticForm2n, RealQuadraticWeight};
use fbi_core::fit::loglog_slope;
use fbi_core::gaussian::{ball_gaussian_quadrature, stationary_phase_expand, AnalyticIntegrand};
use fbi_core::grid::{Axis, Grid, HoloSample};
use fbi_core::phase::FBIPhase;
use fbi_core::poly::Poly;
use fbi_core::quantize::{
    egorov_residual, fbi_side_symbol, quant_mult_residual, RealSymbol, TubeSymbol,
    WeightDeformation,
};
use fbi_core::transform::{
    bergman_at, covering_grid, fbi_adjoint, fbi_forward, fbi_forward_samples, fourier_pair,
    fourier_roundtrip, hphi_norm, TestDistribution,
};
use fbi_core::{RMat, C64};

use crate::config::GridSpec;
use crate::error::CliError;

fn c(a: f64, b: f64) -> C64 {
    C64::new(a, b)
}

/// `‖Tu‖_{H_Φ} / ‖u‖_{L²}` on a covering grid.
pub fn isometry_ratio(
    phi: &FBIPhase,
    u: &TestDistribution,
    h: f64,
    grid: &GridSpec,
) -> Result<f64, CliError> {
    let g = covering_grid(
        phi,
        h,
        (grid.window[0], grid.window[1]),
        grid.k,
        grid.spacing_factor,
    )?;
    let tu = fbi_forward(std::slice::from_ref(u), phi, h, &g)?;
    Ok(hphi_norm(&tu) / u.l2_norm()?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BergmanCheck {
    pub label: &'static str,
    pub x: C64,
    pub value: C64,
    pub expected: C64,
    pub error: f64,
    pub tol: f64,
}

impl BergmanCheck {
    pub fn pass(&self) -> bool {
        self.error <= self.tol
    }
}

/// `Π1 = 1`, `Πx̄ = 0`, `Π|x|² = h` on `Φ = |x|²/2`, at three points.
pub fn bergman_identities(h: f64) -> Result<Vec<BergmanCheck>, CliError> {
    let w = RealQuadraticWeight::standard(1);
    let grid = Grid::rect_1d((-3.5, 3.5), (-3.5, 3.5), h.sqrt() / 6.0)?;
    let field = |f: &dyn Fn(C64) -> C64| HoloSample::from_fn(w.clone(), h, grid.clone(), |x| f(x[0]));
    let cases: [(&'static str, HoloSample, fn(C64, f64) -> (C64, f64)); 3] = [
        ("one", field(&|_| c(1.0, 0.0))?, |_, _| (c(1.0, 0.0), 1e-2)),
        ("conj_x", field(&|x| x.conj())?, |x, h| (c(0.0, 0.0), 1e-2 * x.norm().max(h))),
        ("abs_x_sq", field(&|x| c(x.norm_sqr(), 0.0))?, |_, h| (c(h, 0.0), 1e-2 * h)),
    ];
    let mut out = Vec::new();
    for (label, v, expect) in &cases {
        for x in [c(0.0, 0.0), c(0.4, -0.3), c(-0.5, 0.5)] {
            let value = bergman_at(v, &[x])?;
            let (expected, tol) = expect(x, h);
            out.push(BergmanCheck {
                label,
                x,
                value,
                expected,
                error: (value - expected).norm(),
                tol,
            });
        }
    }
    Ok(out)
}

/// Relative `‖TT*v − Πv‖/‖Πv‖` for `v = (1 + g)·T(gaussian)` with a non-holomorphic `g`.
pub fn bergman_adjoint_gaps(h: f64) -> Result<Vec<(&'static str, f64)>, CliError> {
    let phi = FBIPhase::bargmann(1);
    let grid = covering_grid(&phi, h, (-6.0, 6.0), 8.0, 1.0 / 6.0)?;
    let tu = fbi_forward(&[TestDistribution::Gaussian { a: 1.0 }], &phi, h, &grid)?;
    let battery: [(&'static str, fn(C64) -> C64); 3] = [
        ("0.3*conj(x)", |x| x.conj() * 0.3),
        ("0.1*conj(x)^2", |x| x.conj() * x.conj() * 0.1),
        ("0.2*|x|^2", |x| c(0.2 * x.norm_sqr(), 0.0)),
    ];
    let axis = Axis::new(-7.0, 7.0, 561)?;
    let coarse = Grid::rect_1d((-2.0, 2.0), (-0.6, 0.6), h.sqrt() / 3.0)?;
    let mut out = Vec::new();
    for (label, g) in battery {
        let v = HoloSample {
            values: (0..grid.len())
                .map(|k| tu.values[k] * (c(1.0, 0.0) + g(grid.node(k)[0])))
                .collect(),
            ..tu.clone()
        };
        let tstar = fbi_adjoint(&v, &phi, axis.clone())?;
        let ttv = fbi_forward_samples(&tstar, &phi, h, &coarse)?;
        let (mut diff, mut base) = (0.0, 0.0);
        for k in 0..coarse.len() {
            let x = coarse.node(k);
            let pv = bergman_at(&v, &x)?;
            let d = (-2.0 * tu.weight.eval(&x) / h).exp();
            diff += (ttv.values[k] - pv).norm_sqr() * d;
            base += pv.norm_sqr() * d;
        }
        out.push((label, (diff / base).sqrt()));
    }
    Ok(out)
}

fn linear(ys: f64, es: f64) -> RealSymbol {
    RealSymbol::LinearForm {
        constant: c(0.0, 0.0),
        y_star: c(ys, 0.0),
        eta_star: c(es, 0.0),
    }
}

/// Egorov residuals for `ℓ ∈ {η, y, y + η}`.
pub fn egorov_residuals(
    phi: &FBIPhase,
    u: &TestDistribution,
    h: f64,
) -> Result<Vec<(&'static str, f64)>, CliError> {
    let grid = covering_grid(phi, h, (-5.5, 5.5), 8.0, 1.0 / 6.0)?;
    [("eta", linear(0.0, 1.0)), ("y", linear(1.0, 0.0)), ("y+eta", linear(1.0, 1.0))]
        .into_iter()
        .map(|(label, b)| {
            let a = fbi_side_symbol(&b, phi)?;
            Ok((label, egorov_residual(&a, phi, u, h, &grid, 6)?))
        })
        .collect()
}

/// `ξ` or `ξ²` as FBI-side symbols.
pub fn fiber_symbol(power: u32) -> Result<TubeSymbol, CliError> {
    Ok(match power {
        1 => TubeSymbol::linear(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
        p => TubeSymbol::polynomial(Poly::monomial(vec![0, p], c(1.0, 0.0)))?,
    })
}

/// Quantization-multiplication residual of `a` on `T(e^{−y²})` against a bump-deformed weight.
pub fn quant_mult(a: &TubeSymbol, h: f64) -> Result<f64, CliError> {
    let phi = FBIPhase::bargmann(1);
    let grid = covering_grid(&phi, h, (-4.0, 4.0), 8.0, 1.0 / 6.0)?;
    let v = fbi_forward(&[TestDistribution::Gaussian { a: 2.0 }], &phi, h, &grid)?;
    let def = WeightDeformation::new(v.weight.clone(), 0.02, c(0.5, 0.0), 0.6)?;
    Ok(quant_mult_residual(a, &v, &v, &def, 6)?)
}

/// Log-log slope, or `None` when some residual vanishes to rounding.
pub fn residual_slope(hs: &[f64], r: &[f64]) -> Option<f64> {
    if r.iter().any(|x| !(*x > 1e-13)) {
        return None;
    }
    loglog_slope(hs, r).ok()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryRow {
    pub name: &'static str,
    pub h: f64,
    pub order: usize,
    pub remainder: f64,
    pub bound: f64,
}

/// Remainders of the ball expansion of `∫ e^{−|x|²/2h} u` for `u ∈ {e^x, cos x, 1/(2−x)}`.
pub fn stationary_phase_battery(
    hs: &[f64],
    orders: std::ops::RangeInclusive<usize>,
) -> Result<Vec<StationaryRow>, CliError> {
    let battery: [(&'static str, fn(&[C64]) -> C64, f64); 3] = [
        ("exp", |z| z[0].exp(), 1f64.exp()),
        ("cos", |z| z[0].cos(), 1f64.cosh()),
        ("pole", |z| c(1.0, 0.0) / (c(2.0, 0.0) - z[0]), 1.0),
    ];
    let mut rows = Vec::new();
    for (name, f, sup) in battery {
        for &h in hs {
            let exact = ball_gaussian_quadrature(&f, 1, h)?;
            for order in orders.clone() {
                let u = AnalyticIntegrand::Evaluable {
                    n: 1,
                    f: &f,
                    radius: 2.0,
                    sup,
                };
                let e = stationary_phase_expand(&u, order, h)?;
                rows.push(StationaryRow {
                    name,
                    h,
                    order,
                    remainder: (exact - e.value).norm(),
                    bound: e.remainder_bound,
                });
            }
        }
    }
    Ok(rows)
}

/// Relative error of the expansion against exact Gaussian moments for a degree-6 polynomial.
pub fn polynomial_moment_error(h: f64) -> Result<f64, CliError> {
    let coeffs = [
        c(1.0, 0.0),
        c(0.3, -1.0),
        c(-2.0, 0.5),
        c(0.0, 1.0),
        c(0.25, 0.0),
        c(1.0, 1.0),
        c(-0.5, 0.0),
    ];
    let p = Poly::from_terms(
        1,
        coeffs.iter().enumerate().map(|(k, &a)| (vec![k as u32], a)),
    );
    let mut exact = c(0.0, 0.0);
    let mut dfact = 1.0;
    for j in 0..=3 {
        if j > 0 {
            dfact *= (2 * j - 1) as f64;
        }
        exact += coeffs[2 * j] * (h.powi(j as i32) * dfact);
    }
    exact *= (2.0 * std::f64::consts::PI * h).sqrt();
    let e = stationary_phase_expand(&AnalyticIntegrand::Polynomial(p), 4, h)?;
    Ok((e.value - exact).norm() / exact.norm())
}

/// `Φ = Re x · Im x`.
pub fn split_weight() -> RealQuadraticForm2n {
    RealQuadraticForm2n::new(RMat::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]))
        .expect("symmetric")
}

/// `GF(1)(0)` for the pair attached to `Φ = Re x · Im x`.
pub fn fourier_of_one(h: f64) -> Result<C64, CliError> {
    let pair = fourier_pair(&split_weight())?;
    Ok(fourier_roundtrip(
        &|_| c(1.0, 0.0),
        &pair,
        h,
        c(0.0, 0.0),
        1.5,
    )?)
}
