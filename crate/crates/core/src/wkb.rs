//! One-dimensional analytic WKB: eikonal branch following, the transport recursion, and
//! exponentially accurate quasi-modes for non-self-adjoint differential operators.
//!
//! Coefficients are truncated Taylor series in `x − x₀` ([`Series`]); the operator is
//! `P = Σ_j a_j(x; h)(hD_x)^j` with `a_j = Σ_k h^k a_j^k`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cas::{realization_order, QuasiNormProfile};
use crate::fit::{line, weighted_least_squares};
use crate::poly::Poly;
use crate::series::Series;
use crate::{Error, Result, C64};

const MODULE: &str = "wkb";

/// Relative size below which series coefficients count as zero.
const SERIES_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `{a, b} = a'_ξ b'_x − a'_x b'_ξ` at `(x, ξ)` for polynomials in `(x, ξ)`.
pub fn poisson_bracket(a: &Poly<C64>, b: &Poly<C64>, x: C64, xi: C64) -> C64 {
    let z = [x, xi];
    a.derivative(1).eval(&z) * b.derivative(0).eval(&z)
        - a.derivative(0).eval(&z) * b.derivative(1).eval(&z)
}

/// `Σ_j a_j(x; h)(hD_x)^j` near a real point `x₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOperator {
    pub x0: f64,
    /// `coeffs[j][k]` is the Taylor series of `a_j^k` in `x − x₀`.
    pub coeffs: Vec<Vec<Series>>,
}

impl ModelOperator {
    pub fn new(x0: f64, coeffs: Vec<Vec<Series>>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|a| a.is_empty()) {
            return Err(Error::input(
                MODULE,
                "every coefficient needs at least its principal term",
            ));
        }
        if coeffs.len() > 4 {
            return Err(Error::input(
                MODULE,
                "operators of order above 3 are not supported",
            ));
        }
        if !x0.is_finite() {
            return Err(Error::input(MODULE, "base point must be finite"));
        }
        Ok(ModelOperator { x0, coeffs })
    }

    /// `hD_x − ix` expanded at `x₀`, to Taylor degree `m`.
    pub fn hd_minus_ix(x0: f64, m: usize) -> Self {
        let a0 = Series::new(vec![c(0.0, -x0), c(0.0, -1.0)], m);
        let a1 = Series::constant(c(1.0, 0.0), m);
        ModelOperator {
            x0,
            coeffs: vec![vec![a0], vec![a1]],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .flatten()
            .map(|s| s.order())
            .min()
            .unwrap_or(0)
    }

    /// `P − z`.
    pub fn shift(&self, z: C64) -> Self {
        let mut out = self.clone();
        out.coeffs[0][0].c[0] -= z;
        out
    }

    /// Principal symbol `p(x, ξ) = Σ a_j^0(x)ξ^j` as a polynomial in `(x − x₀, ξ)`.
    pub fn principal_poly(&self) -> Poly<C64> {
        let mut p = Poly::zero(2);
        for (j, a) in self.coeffs.iter().enumerate() {
            for (d, &v) in a[0].c.iter().enumerate() {
                p.add_term(vec![d as u32, j as u32], v);
            }
        }
        p
    }

    pub fn principal(&self, x: C64, xi: C64) -> C64 {
        let t = x - self.x0;
        self.coeffs
            .iter()
            .rev()
            .fold(c(0.0, 0.0), |acc, a| acc * xi + a[0].eval(t))
    }

    /// `(1/2i){p, p̄}(x₀, ξ₀)` for real `(x₀, ξ₀)`: `Im(p'_ξ · conj p'_x)`.
    pub fn bracket_condition(&self, xi0: f64) -> f64 {
        let p = self.principal_poly();
        let z = [c(0.0, 0.0), c(xi0, 0.0)];
        (p.derivative(1).eval(&z) * p.derivative(0).eval(&z).conj()).im
    }

    /// `e^{−iφ/h} P e^{iφ/h} b` for an `h`-independent `b`, listed by powers of `h`.
    fn conjugated(&self, lambda: &Series, b: &Series) -> Vec<Series> {
        let m = b.order();
        let kmax = self.coeffs.iter().map(|a| a.len() - 1).max().unwrap_or(0) + self.order();
        let mut out = vec![Series::zeros(m); kmax + 1];
        let mut v = vec![b.clone()];
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                // (λ + hD)v with hD = −ih∂.
                let mut next = vec![Series::zeros(m); v.len() + 1];
                for (l, vl) in v.iter().enumerate() {
                    next[l] = next[l].add(&lambda.mul(vl));
                    next[l + 1] = next[l + 1].add(&vl.derivative().scale(c(0.0, -1.0)));
                }
                v = next;
            }
            for (k, ak) in a.iter().enumerate() {
                for (l, vl) in v.iter().enumerate() {
                    out[k + l] = out[k + l].add(&ak.mul(vl));
                }
            }
        }
        out
    }
}

/// Phase `φ` with `φ(x₀) = 0`, `φ' = λ` solving `p(x, λ(x)) = 0`, as Taylor series in `x − x₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct EikonalSolution {
    pub x0: f64,
    pub xi0: f64,
    pub lambda: Series,
    pub phi: Series,
}

impl EikonalSolution {
    pub fn im_hessian(&self) -> f64 {
        self.lambda.c[1].im
    }

    pub fn eval_phi(&self, x: f64) -> C64 {
        self.phi.eval(c(x - self.x0, 0.0))
    }

    /// `(1/i)σ(t, t̄)` for the tangent `t = (1, φ''(x₀))` of `Λ_φ`.
    pub fn tangent_positivity(&self) -> f64 {
        let (x1, xi1) = (c(1.0, 0.0), self.lambda.c[1]);
        let (x2, xi2) = (x1.conj(), xi1.conj());
        ((xi1 * x2 - x1 * xi2) / c(0.0, 1.0)).re
    }

    /// Radius of convergence estimated from the tail of `λ`; infinite for polynomials.
    pub fn validity_radius(&self) -> f64 {
        let m = self.lambda.order();
        let scale = self
            .lambda
            .c
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        let tail: Vec<(usize, f64)> = (m / 2 + 1..=m)
            .map(|k| (k, self.lambda.c[k].norm()))
            .filter(|(_, v)| *v > SERIES_TOL * scale)
            .collect();
        tail.iter()
            .map(|&(k, v)| v.powf(-1.0 / k as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Branch `ξ = λ(x)` of `p(x, ξ) = 0` through `(x₀, ξ₀)` by Newton iteration on series,
/// integrated to `φ`.
pub fn eikonal_1d(p: &ModelOperator, xi0: f64, degree: usize) -> Result<EikonalSolution> {
    let pc = p.principal(c(p.x0, 0.0), c(xi0, 0.0));
    if pc.norm() > 1e-10 {
        return Err(Error::pre(
            MODULE,
            "(x₀, ξ₀) is not on the characteristic set",
        ));
    }
    if !(p.bracket_condition(xi0) > 0.0) {
        return Err(Error::pre(
            MODULE,
            "bracket condition (1/2i){p, p̄} > 0 fails",
        ));
    }
    let m = degree.min(p.degree());
    let mut lambda = Series::constant(c(xi0, 0.0), m);
    let eval = |lam: &Series| {
        let mut f = Series::zeros(m);
        let mut fxi = Series::zeros(m);
        let mut pw = Series::constant(c(1.0, 0.0), m);
        for (j, a) in p.coeffs.iter().enumerate() {
            if j > 0 {
                fxi = fxi.add(&a[0].mul(&pw).scale(c(j as f64, 0.0)));
                pw = pw.mul(lam);
            }
            f = f.add(&a[0].mul(&pw));
        }
        (f, fxi)
    };
    let mut steps = 0;
    loop {
        let (f, fxi) = eval(&lambda);
        if fxi.c[0].norm() < 1e-12 {
            return Err(Error::numerical(MODULE, "p'_ξ vanishes along the branch"));
        }
        let scale = lambda.c.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if f.c.iter().all(|v| v.norm() <= SERIES_TOL * scale) {
            break;
        }
        steps += 1;
        if steps > 64 {
            return Err(Error::numerical(
                MODULE,
                "branch continuation did not converge",
            ));
        }
        lambda = lambda.sub(&f.mul(&fxi.recip()?));
    }
    let mut phi = Series::zeros(m + 1);
    for k in 0..=m {
        phi.c[k + 1] = lambda.c[k] / (k + 1) as f64;
    }
    let e = EikonalSolution {
        x0: p.x0,
        xi0,
        lambda,
        phi,
    };
    if !(e.im_hessian() > 0.0) {
        return Err(Error::numerical(MODULE, "Im φ''(x₀) is not positive"));
    }
    Ok(e)
}

/// Solve `α u' + β u = f` with `u(0) = w` in power series; `α(0) ≠ 0`.
fn first_order(alpha: &Series, beta: &Series, f: &Series, w: C64) -> Result<Series> {
    let g = alpha.recip()?;
    let m = f.order();
    let mut u = Series::zeros(m);
    u.c[0] = w;
    for n in 0..m {
        let rhs: C64 = (0..=n)
            .map(|i| {
                let j = n - i;
                let bu: C64 = (0..=j).map(|l| beta.c[l] * u.c[j - l]).sum();
                g.c[i] * (f.c[j] - bu)
            })
            .sum();
        u.c[n + 1] = rhs / (n + 1) as f64;
    }
    Ok(u)
}

/// Solution `u = Σ h^k u_k` of `e^{−iφ/h}Pe^{iφ/h}u = hv`, `u(x₀) = w`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transport {
    pub u: Vec<Series>,
}

/// Order-by-order transport recursion.
///
/// At order `h^{N}` the equation reads `L u_{N−1} = v_{N−1} − Σ_{k ≤ N−2} [Q u_k]_{N−k}` with
/// `L = −i p'_ξ(x, φ') ∂_x + β` the first-order part of the conjugated operator `Q`.
/// The zeroth-order term `β` (the subprincipal part) is removed by the integrating factor
/// implicit in the series solve.
pub fn transport_solve(
    p: &ModelOperator,
    eik: &EikonalSolution,
    v: &[Series],
    w: &[C64],
    k_out: usize,
) -> Result<Transport> {
    let m = eik.lambda.order();
    let one = Series::constant(c(1.0, 0.0), m);
    let q1 = p.conjugated(&eik.lambda, &one);
    let beta = q1.get(1).cloned().unwrap_or_else(|| Series::zeros(m));
    let mut alpha = Series::zeros(m);
    let mut pw = one.clone();
    for (j, a) in p.coeffs.iter().enumerate().skip(1) {
        alpha = alpha.add(&a[0].mul(&pw).scale(c(0.0, -(j as f64))));
        pw = pw.mul(&eik.lambda);
    }
    let mut u: Vec<Series> = Vec::with_capacity(k_out + 1);
    let mut qu: Vec<Vec<Series>> = Vec::with_capacity(k_out + 1);
    for n in 1..=k_out + 1 {
        let mut f = v
            .get(n - 1)
            .map(|s| Series::new(s.c.clone(), m))
            .unwrap_or_else(|| Series::zeros(m));
        for (k, q) in qu.iter().enumerate().take(n - 1) {
            if let Some(t) = q.get(n - k) {
                f = f.sub(t);
            }
        }
        let wk = w.get(n - 1).copied().unwrap_or(c(0.0, 0.0));
        let uk = first_order(&alpha, &beta, &f, wk)?;
        qu.push(p.conjugated(&eik.lambda, &uk));
        u.push(uk);
    }
    Ok(Transport { u })
}

/// Largest Taylor coefficient of `[Q u]_N − v_{N−1}` for each order `N ≤ K + 1`.
/// Orders `1..=K+1` vanish up to series truncation; order 0 is the eikonal residual.
pub fn transport_residual(
    p: &ModelOperator,
    eik: &EikonalSolution,
    t: &Transport,
    v: &[Series],
    compare_degree: usize,
) -> Vec<f64> {
    let m = eik.lambda.order();
    let kmax = t.u.len();
    let mut total = vec![Series::zeros(m); kmax + 1];
    for (k, uk) in t.u.iter().enumerate() {
        for (l, s) in p.conjugated(&eik.lambda, uk).iter().enumerate() {
            if k + l <= kmax {
                total[k + l] = total[k + l].add(s);
            }
        }
    }
    for (n, tn) in total.iter_mut().enumerate().skip(1) {
        if let Some(vn) = v.get(n - 1) {
            *tn = tn.sub(&Series::new(vn.c.clone(), m));
        }
    }
    total
        .iter()
        .map(|s| {
            s.c.iter()
                .take(compare_degree + 1)
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Growth profile `f(u, k) = sup_{0<t≤r} sup_{|x−x₀|<r−t}|u_k| t^k/k^k` over the discs
/// `Ω_t = {|x − x₀| < r − t}` (majorant bound for the sup).
pub fn transport_profile(t: &Transport, r: f64) -> QuasiNormProfile {
    let f =
        t.u.iter()
            .enumerate()
            .map(|(k, s)| {
                let kk = if k == 0 {
                    1.0
                } else {
                    (k as f64).powi(k as i32)
                };
                (0..=200)
                    .map(|i| {
                        let tt = r * i as f64 / 200.0;
                        let rad = r - tt;
                        let maj: f64 =
                            s.c.iter()
                                .enumerate()
                                .map(|(d, v)| v.norm() * rad.powi(d as i32))
                                .sum();
                        maj * tt.powi(k as i32) / kk
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
    QuasiNormProfile { f }
}

/// `χ ≡ 1` on `|x − x₀| ≤ r_in`, `0` beyond `r_out`, with the degree-7 smoothstep between
/// (`C³`, so operators up to order 3 are applied exactly).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub r_in: f64,
    pub r_out: f64,
}

impl Cutoff {
    pub const NAME: &'static str = "smoothstep7";

    pub fn new(r_in: f64, r_out: f64) -> Result<Self> {
        if !(r_in > 0.0 && r_out > r_in && r_out.is_finite()) {
            return Err(Error::input(MODULE, "need 0 < r_in < r_out"));
        }
        Ok(Cutoff { r_in, r_out })
    }

    /// `(χ, χ', χ'', χ''')` at offset `t = x − x₀`.
    pub fn jet(&self, t: f64) -> [f64; 4] {
        let a = t.abs();
        if a <= self.r_in {
            return [1.0, 0.0, 0.0, 0.0];
        }
        if a >= self.r_out {
            return [0.0; 4];
        }
        let d = self.r_out - self.r_in;
        let s = (a - self.r_in) / d;
        // S(s) = 35s⁴ − 84s⁵ + 70s⁶ − 20s⁷ and its derivatives.
        let s0 = s.powi(4) * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s.powi(3));
        let s1 = 140.0 * s.powi(3) * (1.0 - s).powi(3);
        let s2 = 420.0 * s * s * (1.0 - s).powi(2) * (1.0 - 2.0 * s);
        let s3 = 840.0 * s * (1.0 - s) * (1.0 - 5.0 * s + 5.0 * s * s);
        let g = t.signum() / d;
        [1.0 - s0, -s1 * g, -s2 * g * g, -s3 * g * g * g]
    }
}

/// One rung of a quasi-mode ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderPoint {
    pub h: f64,
    /// `‖(P − z₀)u_h‖/‖u_h‖`.
    pub residual: f64,
    /// `‖u_h‖_{L²}`.
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasimodeReport {
    pub z0: C64,
    pub x0: f64,
    pub xi0: f64,
    pub r_in: f64,
    pub r_out: f64,
    pub cutoff: String,
    pub ladder: Vec<LadderPoint>,
    /// Slope of `log residual` against `1/h`.
    pub slope: f64,
    /// Slope of `1/h` in the fit `log residual = a + γ log h + s/h`.
    pub slope_corrected: f64,
    /// `−min Im φ` over the cutoff annulus.
    pub predicted_slope: f64,
}

impl QuasimodeReport {
    pub fn norm_ratio(&self, h: f64) -> Option<f64> {
        self.ladder
            .iter()
            .find(|p| (p.h - h).abs() < 1e-12)
            .map(|p| p.norm / h.powf(0.25))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasimodeConfig {
    pub xi0: f64,
    pub cutoff: Cutoff,
    pub ladder: Vec<f64>,
    /// Order cap of the transport expansion.
    pub k_out: usize,
    /// Taylor degree of the eikonal and transport series.
    pub degree: usize,
    /// Realization constant: orders `k ≤ 1/(eCh)` are summed.
    pub c_real: f64,
}

impl QuasimodeConfig {
    pub fn default_ladder() -> Vec<f64> {
        vec![0.1, 0.08, 0.0625, 0.05, 0.04, 0.03125, 0.025]
    }
}

/// Quasi-mode `u_h = χ b e^{iφ/h}` of `P − z₀` at `(x₀, ξ₀)` with `b = c^{−1/2}u`, where `u`
/// solves the transport equations with `u(x₀) = 1` and `c = c₀ = (π/Im φ''(x₀))^{1/2}` is
/// the leading stationary-phase value of `h^{−1/2}‖χ u e^{iφ/h}‖²`.
pub fn quasimode(p: &ModelOperator, z0: C64, cfg: &QuasimodeConfig) -> Result<QuasimodeReport> {
    if cfg.ladder.len() < 3 || cfg.ladder.iter().any(|&h| !(h > 0.0)) {
        return Err(Error::input(
            MODULE,
            "ladder needs at least three positive h",
        ));
    }
    let pz = p.shift(z0);
    let eik = eikonal_1d(&pz, cfg.xi0, cfg.degree)?;
    let r_out = cfg.cutoff.r_out;
    if r_out >= 0.9 * eik.validity_radius() {
        return Err(Error::pre(
            MODULE,
            "cutoff radius exceeds the eikonal series' validity radius",
        ));
    }
    let transport = transport_solve(&pz, &eik, &[], &[c(1.0, 0.0)], cfg.k_out)?;
    let c0 = (core::f64::consts::PI / eik.im_hessian()).sqrt();
    let scale = c0.powf(-0.5);
    // Exponential smallness needs Im φ > 0 away from x₀ on the support of χ.
    let probe = 400;
    let mut min_annulus = f64::INFINITY;
    for i in 0..=probe {
        let t = -r_out + 2.0 * r_out * i as f64 / probe as f64;
        let im = eik.eval_phi(p.x0 + t).im;
        if t.abs() > 1e-9 && !(im > 0.0) {
            return Err(Error::pre(
                MODULE,
                "Im φ is not positive on the cutoff support",
            ));
        }
    }
    for i in 0..=probe {
        let r = cfg.cutoff.r_in + (r_out - cfg.cutoff.r_in) * i as f64 / probe as f64;
        for t in [r, -r] {
            min_annulus = min_annulus.min(eik.eval_phi(p.x0 + t).im);
        }
    }
    let derivs: Vec<Vec<Series>> = transport
        .u
        .iter()
        .map(|s| {
            let mut d = vec![s.clone()];
            for j in 1..=p.order() {
                let next = d[j - 1].derivative();
                d.push(next);
            }
            d
        })
        .collect();
    let lam_d: Vec<Series> = {
        let mut d = vec![eik.lambda.clone()];
        for j in 1..p.order() {
            let next = d[j - 1].derivative();
            d.push(next);
        }
        d
    };
    let mut ladder = Vec::with_capacity(cfg.ladder.len());
    for &h in &cfg.ladder {
        let kmax = realization_order(cfg.c_real, h).min(cfg.k_out);
        let dx = (h.sqrt() / 6.0).min((r_out - cfg.cutoff.r_in) / 200.0);
        let steps = (2.0 * r_out / dx).ceil() as usize;
        let dx = 2.0 * r_out / steps as f64;
        let (mut res2, mut norm2) = (0.0, 0.0);
        for i in 0..=steps {
            let t = -r_out + dx * i as f64;
            let tc = c(t, 0.0);
            let chi = cfg.cutoff.jet(t);
            // Jet of b at t, realized to order kmax.
            let mut b = vec![c(0.0, 0.0); p.order() + 1];
            let mut hk = scale;
            for d in derivs.iter().take(kmax + 1) {
                for (j, bj) in b.iter_mut().enumerate() {
                    *bj += d[j].eval(tc) * hk;
                }
                hk *= h;
            }
            // F = χb by Leibniz, then (λ + hD)^j F on jets.
            let mut f = vec![c(0.0, 0.0); p.order() + 1];
            for (j, fj) in f.iter_mut().enumerate() {
                for l in 0..=j {
                    *fj += b[j - l] * chi[l] * binom(j, l);
                }
            }
            let lam: Vec<C64> = lam_d.iter().map(|s| s.eval(tc)).collect();
            let mut acc = c(0.0, 0.0);
            let mut g = f.clone();
            for (j, a) in pz.coeffs.iter().enumerate() {
                if j > 0 {
                    let len = g.len() - 1;
                    let mut next = vec![c(0.0, 0.0); len];
                    for (r, nr) in next.iter_mut().enumerate() {
                        let mut v = g[r + 1] * c(0.0, -h);
                        for l in 0..=r {
                            v += lam[l] * g[r - l] * binom(r, l);
                        }
                        *nr = v;
                    }
                    g = next;
                }
                let mut ah = c(0.0, 0.0);
                let mut hk = 1.0;
                for ak in a {
                    ah += ak.eval(tc) * hk;
                    hk *= h;
                }
                acc += ah * g[0];
            }
            let w = (-2.0 * eik.eval_phi(p.x0 + t).im / h).exp() * dx;
            res2 += acc.norm_sqr() * w;
            norm2 += f[0].norm_sqr() * w;
        }
        let norm = norm2.sqrt();
        ladder.push(LadderPoint {
            h,
            residual: res2.sqrt() / norm,
            norm,
        });
    }
    let inv_h: Vec<f64> = ladder.iter().map(|p| 1.0 / p.h).collect();
    if ladder.iter().any(|p| !(p.residual > 0.0)) {
        return Err(Error::numerical(
            MODULE,
            "residual vanished; no decay rate to fit",
        ));
    }
    let logs: Vec<f64> = ladder.iter().map(|p| p.residual.ln()).collect();
    let (_, slope) = line(&inv_h, &logs)?;
    let design: Vec<Vec<f64>> = ladder
        .iter()
        .map(|p| vec![1.0, p.h.ln(), 1.0 / p.h])
        .collect();
    let corrected = weighted_least_squares(&design, &logs, &vec![1.0; logs.len()])?;
    Ok(QuasimodeReport {
        z0,
        x0: p.x0,
        xi0: cfg.xi0,
        r_in: cfg.cutoff.r_in,
        r_out,
        cutoff: String::from(Cutoff::NAME),
        ladder,
        slope,
        slope_corrected: corrected.coefficients[2],
        predicted_slope: -min_annulus,
    })
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_examples() {
        let x = Poly::var(2, 0);
        let xi = Poly::var(2, 1);
        let o = c(0.0, 0.0);
        assert_eq!(poisson_bracket(&xi, &x, o, o), c(1.0, 0.0));
        assert_eq!(poisson_bracket(&xi, &xi, o, o), o);
        let p = ModelOperator::hd_minus_ix(0.0, 4);
        assert_eq!(p.bracket_condition(0.0), 1.0);
    }

    #[test]
    fn model_eikonal_is_gaussian() {
        let p = ModelOperator::hd_minus_ix(0.0, 8);
        let e = eikonal_1d(&p, 0.0, 8).unwrap();
        assert!((e.phi.c[2] - c(0.0, 0.5)).norm() < 1e-14);
        assert!(e
            .phi
            .c
            .iter()
            .enumerate()
            .all(|(k, v)| k == 2 || v.norm() < 1e-14));
        assert!((e.im_hessian() - 1.0).abs() < 1e-14);
        assert!((e.tangent_positivity() - 2.0).abs() < 1e-14);
        assert_eq!(e.validity_radius(), f64::INFINITY);
    }

    #[test]
    fn wrong_sign_bracket_is_rejected() {
        let mut p = ModelOperator::hd_minus_ix(0.0, 4);
        p.coeffs[0][0].c[1] = c(0.0, 1.0);
        assert!(eikonal_1d(&p, 0.0, 4).is_err());
    }

    #[test]
    fn cutoff_jet_matches_differences() {
        let ch = Cutoff::new(1.0, 2.0).unwrap();
        let e = 1e-5;
        for t in [1.2, 1.5, -1.7] {
            let j = ch.jet(t);
            for k in 0..3 {
                let fd = (ch.jet(t + e)[k] - ch.jet(t - e)[k]) / (2.0 * e);
                assert!((fd - j[k + 1]).abs() < 1e-6, "t={t} k={k}");
            }
        }
        assert_eq!(ch.jet(0.5), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(ch.jet(2.5), [0.0; 4]);
    }
}
