//! Complex numbers stored through their logarithm.
//!
//! FBI transform values span hundreds of orders of magnitude along an
//! h-ladder; keeping `ln z` avoids overflow and lets decay rates be read off
//! directly from `Re ln z`.

use core::ops::{Add, Mul, Neg, Sub};

use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogC {
    /// `ln z`; zero is represented by `re = -∞`.
    pub ln: C64,
}

impl LogC {
    pub const ZERO: LogC = LogC {
        ln: C64::new(f64::NEG_INFINITY, 0.0),
    };
    pub const ONE: LogC = LogC {
        ln: C64::new(0.0, 0.0),
    };

    pub fn from_ln(ln: C64) -> Self {
        LogC { ln }
    }

    pub fn from_c64(z: C64) -> Self {
        if z == C64::new(0.0, 0.0) {
            Self::ZERO
        } else {
            LogC { ln: z.ln() }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ln.re == f64::NEG_INFINITY
    }

    pub fn log_abs(&self) -> f64 {
        self.ln.re
    }

    pub fn to_c64(&self) -> C64 {
        if self.is_zero() {
            C64::new(0.0, 0.0)
        } else {
            self.ln.exp()
        }
    }

    pub fn scale_real(self, s: f64) -> Self {
        self * LogC::from_c64(C64::new(s, 0.0))
    }
}

impl Mul for LogC {
    type Output = LogC;
    fn mul(self, rhs: LogC) -> LogC {
        if self.is_zero() || rhs.is_zero() {
            LogC::ZERO
        } else {
            LogC {
                ln: self.ln + rhs.ln,
            }
        }
    }
}

impl Add for LogC {
    type Output = LogC;
    fn add(self, rhs: LogC) -> LogC {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.ln.re >= rhs.ln.re {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let ratio = (small.ln - big.ln).exp();
        let s = C64::new(1.0, 0.0) + ratio;
        if s == C64::new(0.0, 0.0) {
            LogC::ZERO
        } else {
            LogC {
                ln: big.ln + s.ln(),
            }
        }
    }
}

impl Neg for LogC {
    type Output = LogC;
    fn neg(self) -> LogC {
        if self.is_zero() {
            self
        } else {
            LogC {
                ln: self.ln + C64::new(0.0, core::f64::consts::PI),
            }
        }
    }
}

impl Sub for LogC {
    type Output = LogC;
    fn sub(self, rhs: LogC) -> LogC {
        self + (-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_plain_complex() {
        let a = C64::new(1.5, -2.0);
        let b = C64::new(-0.25, 0.75);
        let la = LogC::from_c64(a);
        let lb = LogC::from_c64(b);
        assert!(((la + lb).to_c64() - (a + b)).norm() < 1e-14);
        assert!(((la * lb).to_c64() - (a * b)).norm() < 1e-14);
        assert!(((la - lb).to_c64() - (a - b)).norm() < 1e-14);
        assert!((la + LogC::ZERO).to_c64() == la.to_c64());
    }

    #[test]
    fn huge_magnitudes_do_not_overflow() {
        let big = LogC::from_ln(C64::new(2000.0, 0.3));
        let s = big + big;
        assert!((s.log_abs() - (2000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
