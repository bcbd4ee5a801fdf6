//! Sparse multivariate polynomials over an exact or floating coefficient field.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::Ratio;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::C64;

/// Coefficient field for polynomials: complex doubles or exact complex rationals.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
    fn imag_unit() -> Self;
    fn to_c64(&self) -> C64;
    fn conj(&self) -> Self;
    /// `true` when arithmetic is exact (no rounding).
    fn exact() -> bool;
}

/// Exact complex rational.
pub type QC = Complex<Ratio<i128>>;

impl Coeff for C64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }
    fn imag_unit() -> Self {
        C64::new(0.0, 1.0)
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn exact() -> bool {
        false
    }
}

impl Coeff for QC {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(Ratio::new(num as i128, den as i128), Ratio::zero())
    }
    fn imag_unit() -> Self {
        Complex::new(Ratio::zero(), Ratio::one())
    }
    fn to_c64(&self) -> C64 {
        let f = |r: &Ratio<i128>| *r.numer() as f64 / *r.denom() as f64;
        C64::new(f(&self.re), f(&self.im))
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn exact() -> bool {
        true
    }
}

/// Build an exact complex rational `(a/b) + i(c/d)`.
pub fn qc(re: (i64, i64), im: (i64, i64)) -> QC {
    Complex::new(
        Ratio::new(re.0 as i128, re.1 as i128),
        Ratio::new(im.0 as i128, im.1 as i128),
    )
}

/// Sparse polynomial in `nvars` variables; keys are exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Coeff> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::monomial(alloc::vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    /// The coordinate function `z_j`.
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = alloc::vec![0; nvars];
        e[j] = 1;
        Self::monomial(e, S::one())
    }

    pub fn monomial(exps: Vec<u32>, c: S) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(
                e.len(),
                nvars,
                "exponent length must equal the number of variables"
            );
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> S {
        self.terms.get(exps).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&exps) {
            Some(old) => old.clone() + c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, sum);
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<T: Coeff>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, v)| (e.clone(), f(v))),
        )
    }

    /// Conjugate coefficients: the holomorphic extension of `conj(p(conj z))`.
    pub fn conj_coeffs(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    /// `∂/∂z_j`.
    pub fn derivative(&self, j: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[j] -= 1;
            out.add_term(f, c.clone() * S::from_ratio(e[j] as i64, 1));
        }
        out
    }

    /// `∂^α` with `α` indexed over all variables.
    pub fn derivative_multi(&self, alpha: &[u32]) -> Self {
        let mut out = Self::zero(self.nvars);
        'terms: for (e, c) in &self.terms {
            let mut f = e.clone();
            let mut factor: i64 = 1;
            for j in 0..self.nvars {
                if e[j] < alpha[j] {
                    continue 'terms;
                }
                for t in 0..alpha[j] {
                    factor *= (e[j] - t) as i64;
                }
                f[j] -= alpha[j];
            }
            out.add_term(f, c.clone() * S::from_ratio(factor, 1));
        }
        out
    }

    /// Antiderivative in `z_j` vanishing on `z_j = 0`.
    pub fn integrate(&self, j: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[j] += 1;
            let k = f[j] as i64;
            out.add_term(f, c.clone() * S::from_ratio(1, k));
        }
        out
    }

    /// Drop all terms of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        assert_eq!(z.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = c.to_c64();
                for (zj, &ej) in z.iter().zip(e) {
                    m *= zj.powu(ej);
                }
                m
            })
            .sum()
    }

    /// Exact evaluation in the coefficient field.
    pub fn eval_exact(&self, z: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (zj, &ej) in z.iter().zip(e) {
                for _ in 0..ej {
                    m = m * zj.clone();
                }
            }
            acc = acc + m;
        }
        acc
    }

    /// Majorant `Σ |c_β| r^β`: an upper bound for `sup |p|` on the polydisc of radii `r`.
    pub fn majorant(&self, radii: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = c.to_c64().norm();
                for (r, &ej) in radii.iter().zip(e) {
                    m *= r.powi(ej as i32);
                }
                m
            })
            .sum()
    }

    /// Substitute a polynomial for each variable (all in a common ring of `m` variables).
    pub fn substitute(&self, subs: &[Poly<S>]) -> Poly<S> {
        assert_eq!(subs.len(), self.nvars);
        let m = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (j, &ej) in e.iter().enumerate() {
                for _ in 0..ej {
                    t = &t * &subs[j];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Embed into a ring with more variables, mapping variable `j` to `map[j]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly<S> {
        Poly::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut f = alloc::vec![0; nvars];
                for (j, &ej) in e.iter().enumerate() {
                    f[map[j]] += ej;
                }
                (f, c.clone())
            }),
        )
    }

    pub fn max_abs_coeff_diff(&self, other: &Poly<S>) -> f64 {
        let d = self - other;
        d.terms
            .values()
            .map(|c| c.to_c64().norm())
            .fold(0.0, f64::max)
    }
}

impl<S: Coeff> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<S: Coeff> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<S: Coeff> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<S: Coeff> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        self.scale(&-S::one())
    }
}

/// All multi-indices of length `n` with total degree `≤ max`, graded order.
pub fn multi_indices(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=max {
        let mut cur = alloc::vec![0u32; n];
        fill(&mut out, &mut cur, 0, total);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, remaining: u32) {
    let n = cur.len();
    if n == 0 {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for v in (0..=remaining).rev() {
        cur[pos] = v;
        fill(out, cur, pos + 1, remaining - v);
    }
    cur[pos] = 0;
}

pub fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

pub fn multi_factorial(alpha: &[u32]) -> i64 {
    alpha.iter().map(|&a| factorial(a)).product()
}
