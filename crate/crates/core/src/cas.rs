//! Formal classical analytic symbols `p = Σ h^k p_k` with polynomial coefficients: the
//! composition `#`, the conjugated operator family `A_k`, quasi-norm profiles over nested
//! polydiscs, elliptic inversion, realization, and the symbol of an operator with amplitude.
//!
//! Coefficients are polynomials in the shifted variables `(x − x₀, ξ − ξ₀)` (`2n` variables,
//! `x` first). All identities hold "at truncation": up to the order cap `K` and, where
//! degree truncation is involved, up to the stated degree.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::poly::{factorial, multi_factorial, multi_indices, Coeff, Poly};
use crate::{Error, Result, C64};

const MODULE: &str = "cas";

/// Samples per unit interval when maximizing over the split `s = λt`.
const SPLIT_SAMPLES: usize = 400;

/// `Σ_{k ≤ K} h^k p_k`, an `h`-expansion with polynomial coefficients around a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSymbol<S> {
    pub n: usize,
    /// `(x₀, ξ₀)` in `C^{2n}`.
    pub base: Vec<S>,
    /// Order offset: the symbol stands for `h^{−m} Σ h^k p_k`.
    pub m: i32,
    /// Degree cap `D` on every coefficient.
    pub degree_cap: u32,
    pub coeffs: Vec<Poly<S>>,
    /// Accumulated rounding bound on coefficient magnitudes (zero for exact fields).
    pub rounding: f64,
}

impl<S: Coeff> FormalSymbol<S> {
    pub fn new(
        n: usize,
        base: Vec<S>,
        m: i32,
        degree_cap: u32,
        coeffs: Vec<Poly<S>>,
    ) -> Result<Self> {
        if n == 0 || base.len() != 2 * n {
            return Err(Error::dim(
                MODULE,
                "base point must lie in C^{2n} with n ≥ 1",
            ));
        }
        if coeffs.is_empty() {
            return Err(Error::input(
                MODULE,
                "at least the principal coefficient is required",
            ));
        }
        for p in &coeffs {
            if p.nvars() != 2 * n {
                return Err(Error::dim(
                    MODULE,
                    "coefficients are polynomials in 2n variables",
                ));
            }
            if p.degree().is_some_and(|d| d > degree_cap) {
                return Err(Error::input(MODULE, "coefficient exceeds the degree cap"));
            }
        }
        Ok(FormalSymbol {
            n,
            base,
            m,
            degree_cap,
            coeffs,
            rounding: 0.0,
        })
    }

    /// `h`-independent symbol `p₀`, padded with zeros up to order `k_max`.
    pub fn principal(
        n: usize,
        base: Vec<S>,
        degree_cap: u32,
        p0: Poly<S>,
        k_max: usize,
    ) -> Result<Self> {
        let mut coeffs = vec![Poly::zero(2 * n); k_max + 1];
        coeffs[0] = p0;
        FormalSymbol::new(n, base, 0, degree_cap, coeffs)
    }

    pub fn order_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The shifted coordinate `x_j − x₀_j` as a polynomial.
    pub fn x_var(n: usize, j: usize) -> Poly<S> {
        Poly::var(2 * n, j)
    }

    /// The shifted coordinate `ξ_j − ξ₀_j` as a polynomial.
    pub fn xi_var(n: usize, j: usize) -> Poly<S> {
        Poly::var(2 * n, n + j)
    }

    pub fn truncate_degree(&self, d: u32) -> Self {
        FormalSymbol {
            coeffs: self.coeffs.iter().map(|p| p.truncate(d)).collect(),
            degree_cap: d.min(self.degree_cap),
            ..self.clone()
        }
    }

    pub fn truncate_order(&self, k: usize) -> Self {
        FormalSymbol {
            coeffs: self.coeffs[..=k.min(self.order_cap())].to_vec(),
            ..self.clone()
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::dim(MODULE, "symbols live in different dimensions"));
        }
        if self.base != other.base {
            return Err(Error::input(MODULE, "base points differ"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        if self.m != other.m {
            return Err(Error::input(MODULE, "order offsets differ"));
        }
        let k = self.order_cap().min(other.order_cap());
        Ok(FormalSymbol {
            coeffs: (0..=k)
                .map(|j| &self.coeffs[j] + &other.coeffs[j])
                .collect(),
            degree_cap: self.degree_cap.max(other.degree_cap),
            rounding: self.rounding + other.rounding,
            ..self.clone()
        })
    }

    pub fn scale(&self, a: &S) -> Self {
        FormalSymbol {
            coeffs: self.coeffs.iter().map(|p| p.scale(a)).collect(),
            rounding: self.rounding * a.to_c64().norm(),
            ..self.clone()
        }
    }

    /// Largest coefficient difference over all orders up to the common cap.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let k = self.order_cap().min(other.order_cap());
        (0..=k)
            .map(|j| self.coeffs[j].max_abs_coeff_diff(&other.coeffs[j]))
            .fold(0.0, f64::max)
    }

    /// `Σ_k Σ |c|`, the coefficient `ℓ¹` mass.
    fn l1(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|p| p.terms().map(|(_, c)| c.to_c64().norm()))
            .sum()
    }
}

fn pad_x(n: usize, alpha: &[u32]) -> Vec<u32> {
    let mut e = alpha.to_vec();
    e.resize(2 * n, 0);
    e
}

fn pad_xi(n: usize, alpha: &[u32]) -> Vec<u32> {
    let mut e = vec![0; n];
    e.extend_from_slice(alpha);
    e
}

/// `(−i)^j`, the constant of `D = −i∂`.
fn minus_i_pow<S: Coeff>(j: u32) -> S {
    let mut z = S::one();
    for _ in 0..j {
        z = z * -S::imag_unit();
    }
    z
}

/// `p#q = Σ_α (h^{|α|}/α!) ∂_ξ^α p D_x^α q`, exact per power of `h` up to `k_out`.
///
/// No degree truncation is applied: the output degree cap is the sum of the input caps.
pub fn compose<S: Coeff>(
    p: &FormalSymbol<S>,
    q: &FormalSymbol<S>,
    k_out: usize,
) -> Result<FormalSymbol<S>> {
    p.compatible(q)?;
    if k_out > p.order_cap().min(q.order_cap()) {
        return Err(Error::input(
            MODULE,
            "requested order exceeds the available orders",
        ));
    }
    let n = p.n;
    let mut out = vec![Poly::zero(2 * n); k_out + 1];
    let mut mass = 0.0;
    for alpha in multi_indices(n, k_out as u32) {
        let a = alpha.iter().sum::<u32>() as usize;
        let c: S = minus_i_pow::<S>(a as u32) * S::from_ratio(1, multi_factorial(&alpha));
        let dp: Vec<Poly<S>> = p.coeffs[..=k_out - a]
            .iter()
            .map(|f| f.derivative_multi(&pad_xi(n, &alpha)))
            .collect();
        let dq: Vec<Poly<S>> = q.coeffs[..=k_out - a]
            .iter()
            .map(|f| f.derivative_multi(&pad_x(n, &alpha)))
            .collect();
        for (nu, pn) in dp.iter().enumerate() {
            if pn.is_zero() {
                continue;
            }
            for (mu, qm) in dq.iter().enumerate().take(k_out - a - nu + 1) {
                if qm.is_zero() {
                    continue;
                }
                let t = (pn * qm).scale(&c);
                if !S::exact() {
                    mass += t.terms().map(|(_, v)| v.to_c64().norm()).sum::<f64>();
                }
                out[nu + mu + a] = &out[nu + mu + a] + &t;
            }
        }
    }
    let rounding = if S::exact() {
        0.0
    } else {
        p.rounding * q.l1() + q.rounding * p.l1() + 4.0 * f64::EPSILON * mass
    };
    Ok(FormalSymbol {
        n,
        base: p.base.clone(),
        m: p.m + q.m,
        degree_cap: p.degree_cap + q.degree_cap,
        coeffs: out,
        rounding,
    })
}

/// Linear differential operator `Σ_α c_α(x, ξ) D_x^α` with polynomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp<S> {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, Poly<S>>,
}

impl<S: Coeff> DiffOp<S> {
    pub fn zero(n: usize) -> Self {
        DiffOp {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, alpha: Vec<u32>, c: Poly<S>) {
        let slot = self
            .terms
            .entry(alpha.clone())
            .or_insert_with(|| Poly::zero(2 * self.n));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    /// Differential order; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.iter().sum()).max()
    }

    pub fn apply(&self, f: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero(2 * self.n);
        for (alpha, c) in &self.terms {
            let d = f
                .derivative_multi(&pad_x(self.n, alpha))
                .scale(&minus_i_pow(alpha.iter().sum()));
            out = &out + &(c * &d);
        }
        out
    }

    /// Operator product `self ∘ other` by the Leibniz rule.
    pub fn compose(&self, other: &DiffOp<S>) -> DiffOp<S> {
        let mut out = DiffOp::zero(self.n);
        for (alpha, a) in &self.terms {
            for (beta, b) in &other.terms {
                for gamma in sub_indices(alpha) {
                    let binom: i64 = alpha
                        .iter()
                        .zip(&gamma)
                        .map(|(&x, &g)| binomial(x, g))
                        .product();
                    let g = gamma.iter().sum::<u32>();
                    let db = b
                        .derivative_multi(&pad_x(self.n, &gamma))
                        .scale(&(minus_i_pow::<S>(g) * S::from_ratio(binom, 1)));
                    let order: Vec<u32> = alpha
                        .iter()
                        .zip(&gamma)
                        .zip(beta)
                        .map(|((x, g), y)| x - g + y)
                        .collect();
                    out.add_term(order, a * &db);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DiffOp<S>) -> DiffOp<S> {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// All `γ ≤ α` componentwise.
fn sub_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|g| (0..=a).map(move |j| [g.as_slice(), &[j]].concat()))
            .collect();
    }
    out
}

/// `A_k = Σ_{ν+|α|=k} (1/α!)(∂_ξ^α p_ν) D_x^α` for `k ≤ K`, so that
/// `p(x, ξ + hD_x; h) = Σ h^k A_k`.
pub fn conjugated_family<S: Coeff>(p: &FormalSymbol<S>) -> Vec<DiffOp<S>> {
    let n = p.n;
    (0..=p.order_cap())
        .map(|k| {
            let mut a = DiffOp::zero(n);
            for alpha in multi_indices(n, k as u32) {
                let nu = k - alpha.iter().sum::<u32>() as usize;
                let c = p.coeffs[nu]
                    .derivative_multi(&pad_xi(n, &alpha))
                    .scale(&S::from_ratio(1, multi_factorial(&alpha)));
                a.add_term(alpha, c);
            }
            a
        })
        .collect()
}

/// Nested polydiscs `Ω_t = {|x − x₀|_∞ < t, |ξ − ξ₀|_∞ < ξ-radius}`, `0 ≤ t ≤ t₀`.
///
/// The `x`-radius grows exactly with `t`, which gives the inclusion property
/// `(y, ξ) ∈ Ω_s, |x − y|_∞ < t − s ⟹ (x, ξ) ∈ Ω_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainFamily {
    pub center: Vec<C64>,
    pub t0: f64,
    pub xi_radius: f64,
}

impl DomainFamily {
    pub fn new(center: Vec<C64>, t0: f64, xi_radius: f64) -> Result<Self> {
        if center.is_empty() || center.len() % 2 != 0 {
            return Err(Error::dim(MODULE, "center must lie in C^{2n}"));
        }
        if !(t0 > 0.0 && t0.is_finite() && xi_radius >= 0.0 && xi_radius.is_finite()) {
            return Err(Error::input(MODULE, "need t₀ > 0 and a finite ξ-radius"));
        }
        Ok(DomainFamily {
            center,
            t0,
            xi_radius,
        })
    }

    pub fn n(&self) -> usize {
        self.center.len() / 2
    }

    pub fn contains(&self, point: &[C64], t: f64) -> bool {
        let n = self.n();
        point.len() == 2 * n
            && (0..n).all(|j| (point[j] - self.center[j]).norm() < t)
            && (n..2 * n).all(|j| (point[j] - self.center[j]).norm() < self.xi_radius)
    }

    /// Polydisc radii of `Ω_t` in the shifted variables.
    pub fn radii(&self, t: f64) -> Vec<f64> {
        let n = self.n();
        (0..2 * n)
            .map(|j| if j < n { t } else { self.xi_radius })
            .collect()
    }
}

/// Growth profile `f̂_k`, `k = 0..K`, of a conjugated family.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiNormProfile {
    pub f: Vec<f64>,
}

impl QuasiNormProfile {
    /// `‖A‖_ρ = Σ ρ^k f̂_k` over the available orders.
    pub fn rho_norm(&self, rho: f64) -> f64 {
        self.f.iter().rev().fold(0.0, |acc, &fk| acc * rho + fk)
    }

    /// Cauchy product `(f * g)_k = Σ_{ν+μ=k} f_ν g_μ`, truncated to the shorter profile.
    pub fn convolve(&self, other: &QuasiNormProfile) -> QuasiNormProfile {
        let k = self.f.len().min(other.f.len());
        QuasiNormProfile {
            f: (0..k)
                .map(|j| (0..=j).map(|i| self.f[i] * other.f[j - i]).sum())
                .collect(),
        }
    }
}

pub fn rho_norm(profile: &QuasiNormProfile, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::input(MODULE, "ρ must be positive"));
    }
    Ok(profile.rho_norm(rho))
}

/// Quasi-norm profile in the scale `B_t` of holomorphic functions on `Ω_t` normed by the
/// weighted Taylor-coefficient sum `Σ |f_{βγ}| t^{|β|} r_ξ^{|γ|}` (a majorant of the sup norm).
///
/// In this scale `‖D_x^α‖_{t,s} ≤ α!/(t−s)^{|α|}` holds and operator norms are attained on
/// monomials, so `f̂_k = sup_{s<t} ‖A_k‖_{t,s}(t−s)^k/k^k` is computed directly as a
/// supremum over monomial inputs and the split `s = λt` (the supremum in `t` sits at `t₀`).
/// Being a genuine operator-norm profile, it satisfies `f̂(A∘B) ≤ f̂(A)*f̂(B)`.
pub fn quasi_norm<S: Coeff>(family: &[DiffOp<S>], dom: &DomainFamily) -> Result<QuasiNormProfile> {
    let f = family
        .iter()
        .enumerate()
        .map(|(k, a)| {
            if a.n != dom.n() {
                return Err(Error::dim(MODULE, "operator and domain dimensions differ"));
            }
            Ok(operator_profile(a, k as u32, dom))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(QuasiNormProfile { f })
}

fn operator_profile<S: Coeff>(a: &DiffOp<S>, k: u32, dom: &DomainFamily) -> f64 {
    if a.terms.is_empty() {
        return 0.0;
    }
    let n = a.n;
    let coeffs: Vec<(Vec<u32>, Vec<(Vec<u32>, C64)>)> = a
        .terms
        .iter()
        .map(|(alpha, c)| {
            let ph = minus_i_pow::<S>(alpha.iter().sum()).to_c64();
            (
                alpha.clone(),
                c.terms()
                    .map(|(e, v)| (e.clone(), v.to_c64() * ph))
                    .collect(),
            )
        })
        .collect();
    let deg_x = coeffs
        .iter()
        .flat_map(|(_, ts)| ts.iter().map(|(e, _)| e[..n].iter().sum::<u32>()))
        .max()
        .unwrap_or(0);
    // Past this box the monomial ratios decay; the supremum sits at small exponents.
    let cap = 2 * (k + deg_x) + 4;
    let kk = if k == 0 {
        1.0
    } else {
        (k as f64).powi(k as i32)
    };
    let mut best: f64 = 0.0;
    for beta in box_indices(n, cap) {
        // Collect A_k(x^β) by output monomial; each carries the power of λ and the t₀, r_ξ weights.
        let mut out: BTreeMap<Vec<u32>, C64> = BTreeMap::new();
        for (alpha, ts) in &coeffs {
            if alpha.iter().zip(&beta).any(|(a, b)| a > b) {
                continue;
            }
            let ff: f64 = alpha
                .iter()
                .zip(&beta)
                .map(|(&a, &b)| ((b - a + 1)..=b).map(|j| j as f64).product::<f64>())
                .product();
            for (e, v) in ts {
                let mut key: Vec<u32> = (0..n).map(|j| beta[j] - alpha[j] + e[j]).collect();
                key.extend_from_slice(&e[n..]);
                *out.entry(key).or_insert(C64::new(0.0, 0.0)) += v * ff;
            }
        }
        let b: u32 = beta.iter().sum();
        let poly: Vec<(i32, f64)> = out
            .iter()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(key, v)| {
                let px: u32 = key[..n].iter().sum();
                let pxi: u32 = key[n..].iter().sum();
                let w = v.norm()
                    * dom.t0.powi((px + k) as i32 - b as i32)
                    * dom.xi_radius.powi(pxi as i32);
                (px as i32, w)
            })
            .collect();
        if poly.is_empty() {
            continue;
        }
        let g = |lam: f64| {
            (1.0 - lam).powi(k as i32) * poly.iter().map(|&(p, w)| w * lam.powi(p)).sum::<f64>()
        };
        best = best.max(maximize_unit(&g));
    }
    best / kk
}

fn box_indices(n: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|g| (0..=cap).map(move |j| [g.as_slice(), &[j]].concat()))
            .collect();
    }
    out
}

/// Maximum of a smooth function on `[0, 1]`: dense sampling, then golden-section refinement.
fn maximize_unit(g: &dyn Fn(f64) -> f64) -> f64 {
    let (mut best_i, mut best) = (0, g(0.0));
    for i in 1..=SPLIT_SAMPLES {
        let v = g(i as f64 / SPLIT_SAMPLES as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let step = 1.0 / SPLIT_SAMPLES as f64;
    let (mut lo, mut hi) = (
        ((best_i as f64 - 1.0) * step).max(0.0),
        ((best_i as f64 + 1.0) * step).min(1.0),
    );
    let r = 0.5 * (5.0f64.sqrt() - 1.0);
    for _ in 0..60 {
        let (m1, m2) = (hi - r * (hi - lo), lo + r * (hi - lo));
        let (v1, v2) = (g(m1), g(m2));
        best = best.max(v1).max(v2);
        if v1 < v2 {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best
}

/// Quasi-norm profile of a symbol: the profile of its conjugated family.
pub fn symbol_profile<S: Coeff>(
    p: &FormalSymbol<S>,
    dom: &DomainFamily,
) -> Result<QuasiNormProfile> {
    quasi_norm(&conjugated_family(p), dom)
}

/// Parametrix `q` of an elliptic symbol, `p#q = 1` at truncation.
///
/// Built as `q = q₀#(1 + r + r#r + ..)` with `q₀ = 1/p₀` expanded to degree `D` and
/// `r = 1 − p#q₀`. Every intermediate product is truncated at degree `D`; the `h^k`
/// coefficient of `p#q − 1` then vanishes in all degrees `≤ D − k`.
pub fn elliptic_inverse<S: Coeff>(
    p: &FormalSymbol<S>,
    k_out: usize,
    dom: &DomainFamily,
) -> Result<FormalSymbol<S>> {
    if k_out > p.order_cap() {
        return Err(Error::input(
            MODULE,
            "requested order exceeds the available orders",
        ));
    }
    let d = p.degree_cap;
    let n = p.n;
    let p0 = &p.coeffs[0];
    let c0 = p0.coeff(&vec![0; 2 * n]);
    let rest = p0 - &Poly::constant(2 * n, c0.clone());
    if c0.is_zero() || rest.majorant(&dom.radii(dom.t0)) >= c0.to_c64().norm() {
        return Err(Error::pre(MODULE, "principal symbol may vanish on Ω_{t₀}"));
    }
    // 1/p₀ = (1/c)Σ(−u)^j with u = (p₀ − c)/c vanishing at the base point.
    let inv_c = S::one() / c0;
    let neg_u = rest.scale(&-inv_c.clone());
    let mut q0 = Poly::one(2 * n);
    let mut pw = Poly::one(2 * n);
    for _ in 0..d {
        pw = (&pw * &neg_u).truncate(d);
        q0 = &q0 + &pw;
    }
    let q0 = FormalSymbol {
        m: -p.m,
        ..FormalSymbol::principal(n, p.base.clone(), d, q0.scale(&inv_c), k_out)?
    };
    let one = FormalSymbol::principal(n, p.base.clone(), 0, Poly::one(2 * n), k_out)?;
    let pq0 = compose(&p.truncate_order(k_out), &q0, k_out)?;
    let r = FormalSymbol {
        m: 0,
        ..one
            .add(&FormalSymbol {
                m: 0,
                ..pq0.scale(&-S::one())
            })?
            .truncate_degree(d)
    };
    let mut series = one.clone();
    let mut pw = one;
    for _ in 0..k_out {
        pw = compose(&pw, &r, k_out)?.truncate_degree(d);
        series = series.add(&pw)?;
    }
    Ok(compose(&q0, &series, k_out)?.truncate_degree(d))
}

/// `r = 1 − p#q₀` and `q₀ = 1/p₀`, the ingredients of [`elliptic_inverse`].
pub fn inverse_ingredients<S: Coeff>(
    p: &FormalSymbol<S>,
    k_out: usize,
    dom: &DomainFamily,
) -> Result<(FormalSymbol<S>, FormalSymbol<S>)> {
    let q0 = elliptic_inverse(&p.truncate_order(0), 0, dom)?;
    let mut coeffs = vec![Poly::zero(2 * p.n); k_out + 1];
    coeffs[0] = q0.coeffs[0].clone();
    let q0 = FormalSymbol { coeffs, ..q0 };
    let pq0 = compose(&p.truncate_order(k_out), &q0, k_out)?.truncate_degree(p.degree_cap);
    let one = FormalSymbol::principal(p.n, p.base.clone(), 0, Poly::one(2 * p.n), k_out)?;
    let r = one.add(&FormalSymbol {
        m: 0,
        ..pq0.scale(&-S::one())
    })?;
    Ok((q0, r))
}

/// Largest `ρ` (by bisection on `(0, ρ_max]`) with `‖r‖_ρ ≤ 1/2`.
pub fn inversion_radius(r: &QuasiNormProfile, rho_max: f64) -> f64 {
    if r.rho_norm(rho_max) <= 0.5 {
        return rho_max;
    }
    let (mut lo, mut hi) = (0.0, rho_max);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if r.rho_norm(mid) <= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Truncation index `⌊1/(e·C·h)⌋` of a realization.
pub fn realization_order(c_real: f64, h: f64) -> usize {
    (1.0 / (core::f64::consts::E * c_real * h)).floor() as usize
}

/// `Σ_{k ≤ 1/(eCh)} a_k(point) h^k`; orders beyond the stored cap contribute nothing.
pub fn realize<S: Coeff>(a: &FormalSymbol<S>, c_real: f64, h: f64, point: &[C64]) -> Result<C64> {
    if !(c_real > 0.0 && h > 0.0) {
        return Err(Error::input(MODULE, "C and h must be positive"));
    }
    if point.len() != 2 * a.n {
        return Err(Error::dim(MODULE, "point must lie in C^{2n}"));
    }
    let z: Vec<C64> = point
        .iter()
        .zip(&a.base)
        .map(|(p, b)| p - b.to_c64())
        .collect();
    let kmax = realization_order(c_real, h).min(a.order_cap());
    let mut acc = C64::new(0.0, 0.0);
    let mut hk = 1.0;
    for k in 0..=kmax {
        acc += a.coeffs[k].eval(&z) * hk;
        hk *= h;
    }
    Ok(acc)
}

/// Amplitude `a(x, y, θ; h) = Σ h^k a_k` of `Au(x) = (2πh)^{−n}∬ e^{i(x−y)·θ/h} a u(y) dy dθ`.
/// Coefficients are polynomials in `3n` shifted variables ordered `(x, y, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplitude<S> {
    pub n: usize,
    /// `(x₀, y₀, θ₀)`.
    pub base: Vec<S>,
    pub coeffs: Vec<Poly<S>>,
}

impl<S: Coeff> Amplitude<S> {
    pub fn new(n: usize, base: Vec<S>, coeffs: Vec<Poly<S>>) -> Result<Self> {
        if n == 0
            || base.len() != 3 * n
            || coeffs.is_empty()
            || coeffs.iter().any(|p| p.nvars() != 3 * n)
        {
            return Err(Error::dim(
                MODULE,
                "amplitudes are polynomials in 3n variables",
            ));
        }
        Ok(Amplitude { n, base, coeffs })
    }

    /// Lift a symbol `b(x, θ)` to the amplitude `b(x, θ)`.
    pub fn left(b: &FormalSymbol<S>) -> Self {
        let n = b.n;
        let map: Vec<usize> = (0..n).chain(2 * n..3 * n).collect();
        let mut base = b.base[..n].to_vec();
        base.extend_from_slice(&b.base[..n]);
        base.extend_from_slice(&b.base[n..]);
        Amplitude {
            n,
            base,
            coeffs: b.coeffs.iter().map(|p| p.embed(3 * n, &map)).collect(),
        }
    }

    /// Lift a symbol `a(y, θ)` to the amplitude `a(y, θ)`.
    pub fn right(a: &FormalSymbol<S>) -> Self {
        let n = a.n;
        let map: Vec<usize> = (n..3 * n).collect();
        let mut base = a.base[..n].to_vec();
        base.extend_from_slice(&a.base[..n]);
        base.extend_from_slice(&a.base[n..]);
        Amplitude {
            n,
            base,
            coeffs: a.coeffs.iter().map(|p| p.embed(3 * n, &map)).collect(),
        }
    }

    /// Pointwise product (Cauchy product in `h`) of two amplitudes on the same base.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.base != other.base {
            return Err(Error::input(MODULE, "amplitudes live on different bases"));
        }
        let k = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..k)
            .map(|j| {
                (0..=j).fold(Poly::zero(3 * self.n), |acc, i| {
                    &acc + &(&self.coeffs[i] * &other.coeffs[j - i])
                })
            })
            .collect();
        Ok(Amplitude {
            coeffs,
            ..self.clone()
        })
    }
}

/// `σ_A = Σ_α (h^{|α|}/α!)(∂_θ^α D_y^α a)(x, x, θ)`, truncated at the amplitude's order cap.
pub fn symbol_of_op<S: Coeff>(a: &Amplitude<S>) -> Result<FormalSymbol<S>> {
    let n = a.n;
    let kmax = a.coeffs.len() - 1;
    // y − y₀ = (x − x₀) + (x₀ − y₀) on the diagonal.
    let subs: Vec<Poly<S>> = (0..3 * n)
        .map(|j| match j {
            j if j < n => Poly::var(2 * n, j),
            j if j < 2 * n => {
                let shift = a.base[j - n].clone() - a.base[j].clone();
                &Poly::var(2 * n, j - n) + &Poly::constant(2 * n, shift)
            }
            j => Poly::var(2 * n, j - n),
        })
        .collect();
    let mut out = vec![Poly::zero(2 * n); kmax + 1];
    for alpha in multi_indices(n, kmax as u32) {
        let s = alpha.iter().sum::<u32>() as usize;
        let mut e = vec![0; n];
        e.extend_from_slice(&alpha);
        e.extend_from_slice(&alpha);
        let c = minus_i_pow::<S>(s as u32) * S::from_ratio(1, multi_factorial(&alpha));
        for nu in 0..=kmax - s {
            let t = a.coeffs[nu]
                .derivative_multi(&e)
                .scale(&c)
                .substitute(&subs);
            out[nu + s] = &out[nu + s] + &t;
        }
    }
    let mut base = a.base[..n].to_vec();
    base.extend_from_slice(&a.base[2 * n..]);
    let cap = out.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    FormalSymbol::new(n, base, 0, cap, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{qc, QC};
    use num_traits::{One, Zero};

    fn base1() -> Vec<QC> {
        vec![QC::zero(), QC::zero()]
    }

    fn sym(coeffs: Vec<Poly<QC>>) -> FormalSymbol<QC> {
        FormalSymbol::new(1, base1(), 0, 8, coeffs).unwrap()
    }

    fn x() -> Poly<QC> {
        FormalSymbol::<QC>::x_var(1, 0)
    }

    fn xi() -> Poly<QC> {
        FormalSymbol::<QC>::xi_var(1, 0)
    }

    fn z() -> Poly<QC> {
        Poly::zero(2)
    }

    #[test]
    fn canonical_commutation() {
        let p = sym(vec![xi(), z()]);
        let q = sym(vec![x(), z()]);
        let pq = compose(&p, &q, 1).unwrap();
        assert_eq!(pq.coeffs[0], &x() * &xi());
        assert_eq!(pq.coeffs[1], Poly::constant(2, qc((0, 1), (-1, 1))));
        let qp = compose(&q, &p, 1).unwrap();
        assert!(qp.coeffs[1].is_zero());
        let one = sym(vec![Poly::one(2), z()]);
        assert_eq!(compose(&one, &q, 1).unwrap().coeffs, q.coeffs);
    }

    #[test]
    fn family_of_fiber_variable() {
        let fam = conjugated_family(&sym(vec![xi(), z()]));
        assert_eq!(fam[0].terms.get(&vec![0]), Some(&xi()));
        assert_eq!(fam[1].terms.get(&vec![1]), Some(&Poly::one(2)));
        assert_eq!(fam[1].terms.len(), 1);
    }

    #[test]
    fn profiles_of_simple_families() {
        let dom = DomainFamily::new(vec![C64::new(0.0, 0.0); 2], 1.0, 0.5).unwrap();
        let unit = symbol_profile(&sym(vec![xi(), z()]), &dom).unwrap();
        assert!((unit.f[1] - 1.0).abs() < 1e-12, "{:?}", unit.f);
        assert!((unit.f[0] - 0.5).abs() < 1e-12);
        let zero = symbol_profile(&sym(vec![z(), z(), z()]), &dom).unwrap();
        assert!(zero.f.iter().all(|&v| v == 0.0));
        assert_eq!(
            rho_norm(
                &QuasiNormProfile {
                    f: vec![1.0, 1.0, 0.0]
                },
                0.5
            )
            .unwrap(),
            1.5
        );
    }

    #[test]
    fn realization_truncates_and_sums() {
        let a = FormalSymbol::principal(
            1,
            vec![C64::new(0.0, 0.0); 2],
            0,
            Poly::constant(2, C64::new(5.0, 0.0)),
            4,
        )
        .unwrap();
        assert_eq!(
            realize(&a, 1.0, 0.1, &[C64::new(0.3, 0.0), C64::new(0.0, 0.0)]).unwrap(),
            C64::new(5.0, 0.0)
        );
        assert_eq!(realization_order(1.0, 0.1), 3);
        assert_eq!(realization_order(1.0, 0.05), 7);
    }

    #[test]
    fn amplitude_in_y_gives_commutator_term() {
        let mut e = Poly::<QC>::zero(3);
        e.add_term(vec![0, 1, 1], QC::one());
        let a = Amplitude::new(1, vec![QC::zero(); 3], vec![e, Poly::zero(3)]).unwrap();
        let s = symbol_of_op(&a).unwrap();
        assert_eq!(s.coeffs[0], &x() * &xi());
        assert_eq!(s.coeffs[1], Poly::constant(2, qc((0, 1), (-1, 1))));
    }
}
