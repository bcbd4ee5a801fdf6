//! Truncated power series in one complex variable, `Σ_{k≤M} c_k z^k`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub c: Vec<C64>,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

impl Series {
    pub fn new(mut c: Vec<C64>, m: usize) -> Self {
        c.resize(m + 1, zero());
        Series { c }
    }

    pub fn zeros(m: usize) -> Self {
        Series {
            c: alloc::vec![zero(); m + 1],
        }
    }

    pub fn constant(a: C64, m: usize) -> Self {
        let mut s = Self::zeros(m);
        s.c[0] = a;
        s
    }

    /// The identity series `z`.
    pub fn ident(m: usize) -> Self {
        let mut s = Self::zeros(m);
        if m >= 1 {
            s.c[1] = C64::new(1.0, 0.0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.c.iter().rev().fold(zero(), |acc, a| acc * z + a)
    }

    pub fn add(&self, o: &Series) -> Series {
        let m = self.order().min(o.order());
        Series {
            c: (0..=m).map(|k| self.c[k] + o.c[k]).collect(),
        }
    }

    pub fn sub(&self, o: &Series) -> Series {
        let m = self.order().min(o.order());
        Series {
            c: (0..=m).map(|k| self.c[k] - o.c[k]).collect(),
        }
    }

    pub fn scale(&self, a: C64) -> Series {
        Series {
            c: self.c.iter().map(|x| x * a).collect(),
        }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let m = self.order().min(o.order());
        let mut c = alloc::vec![zero(); m + 1];
        for i in 0..=m {
            if self.c[i] == zero() {
                continue;
            }
            for j in 0..=(m - i) {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Series { c }
    }

    pub fn recip(&self) -> Result<Series> {
        let a0 = self.c[0];
        if a0.norm() == 0.0 {
            return Err(Error::singular(
                "series",
                "reciprocal of a series with zero constant term",
            ));
        }
        let m = self.order();
        let mut r = alloc::vec![zero(); m + 1];
        r[0] = C64::new(1.0, 0.0) / a0;
        for k in 1..=m {
            let s: C64 = (1..=k).map(|j| self.c[j] * r[k - j]).sum();
            r[k] = -s / a0;
        }
        Ok(Series { c: r })
    }

    /// Square root with prescribed value of the constant term (branch choice).
    pub fn sqrt_with(&self, root0: C64) -> Result<Series> {
        if (root0 * root0 - self.c[0]).norm() > 1e-10 * self.c[0].norm().max(1.0) {
            return Err(Error::input(
                "series",
                "prescribed root does not square to the constant term",
            ));
        }
        if root0.norm() == 0.0 {
            return Err(Error::singular(
                "series",
                "square root at a zero constant term",
            ));
        }
        let m = self.order();
        let mut r = alloc::vec![zero(); m + 1];
        r[0] = root0;
        for k in 1..=m {
            let s: C64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r[k] = (self.c[k] - s) / (root0 * 2.0);
        }
        Ok(Series { c: r })
    }

    pub fn derivative(&self) -> Series {
        let m = self.order();
        let mut c: Vec<C64> = (1..=m).map(|k| self.c[k] * k as f64).collect();
        c.push(zero());
        Series { c }
    }

    /// Antiderivative vanishing at 0 (the top coefficient is dropped to keep the order).
    pub fn integral(&self) -> Series {
        let m = self.order();
        let mut c = alloc::vec![zero(); m + 1];
        for k in 1..=m {
            c[k] = self.c[k - 1] / k as f64;
        }
        Series { c }
    }

    /// `exp(s)`.
    pub fn exp(&self) -> Series {
        let m = self.order();
        let d = self.derivative();
        let mut e = alloc::vec![zero(); m + 1];
        e[0] = self.c[0].exp();
        // e' = s' e
        for k in 1..=m {
            let s: C64 = (0..k).map(|j| d.c[j] * e[k - 1 - j]).sum();
            e[k] = s / k as f64;
        }
        Series { c: e }
    }

    /// `self ∘ g` with `g(0) = 0`.
    pub fn compose(&self, g: &Series) -> Result<Series> {
        if g.c[0].norm() != 0.0 {
            return Err(Error::input("series", "inner series must vanish at 0"));
        }
        let m = self.order().min(g.order());
        let mut out = Series::zeros(m);
        let mut pw = Series::constant(C64::new(1.0, 0.0), m);
        let g = Series::new(g.c.clone(), m);
        for k in 0..=m {
            out = out.add(&pw.scale(self.c[k]));
            pw = pw.mul(&g);
        }
        Ok(out)
    }

    /// Compositional inverse of `f` with `f(0) = 0`, `f'(0) ≠ 0`.
    pub fn revert(&self) -> Result<Series> {
        if self.c[0].norm() != 0.0 || self.order() == 0 || self.c[1].norm() == 0.0 {
            return Err(Error::input("series", "reversion needs f(0)=0 and f'(0)≠0"));
        }
        let m = self.order();
        // Newton-free order-by-order solve of f(g(w)) = w.
        let mut g = Series::zeros(m);
        g.c[1] = C64::new(1.0, 0.0) / self.c[1];
        for k in 2..=m {
            let fg = self.compose(&g)?;
            g.c[k] = -fg.c[k] / self.c[1];
        }
        Ok(g)
    }

    /// Taylor coefficients of a holomorphic `f` at `center` by trapezoidal Cauchy integrals
    /// on the circle of radius `r` with `samples` nodes.
    pub fn taylor<F: Fn(C64) -> C64>(
        f: F,
        center: C64,
        r: f64,
        m: usize,
        samples: usize,
    ) -> Series {
        let vals: Vec<C64> = (0..samples)
            .map(|j| {
                let t = 2.0 * core::f64::consts::PI * j as f64 / samples as f64;
                f(center + C64::from_polar(r, t))
            })
            .collect();
        let mut c = alloc::vec![zero(); m + 1];
        for (k, ck) in c.iter_mut().enumerate() {
            let mut acc = zero();
            for (j, v) in vals.iter().enumerate() {
                let t = 2.0 * core::f64::consts::PI * j as f64 / samples as f64;
                acc += v * C64::from_polar(1.0, -(k as f64) * t);
            }
            *ck = acc / (samples as f64 * r.powi(k as i32));
        }
        Series { c }
    }
}
