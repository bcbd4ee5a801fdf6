//! Weighted linear least squares for ladder fits.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, RMat, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub coefficients: Vec<f64>,
    /// Standard errors of the coefficients from the weighted residual scatter.
    pub std_errors: Vec<f64>,
    pub residual_rms: f64,
}

/// Solve `min Σ w_i (y_i − Σ_j c_j f_j(x_i))²` for the basis columns given as rows of `design`.
pub fn weighted_least_squares(design: &[Vec<f64>], y: &[f64], w: &[f64]) -> Result<LinearFit> {
    let m = y.len();
    let p = design.first().map(|r| r.len()).unwrap_or(0);
    if m == 0 || p == 0 || design.len() != m || w.len() != m {
        return Err(Error::dim(
            "fit",
            "design, data and weights must have matching lengths",
        ));
    }
    if m < p {
        return Err(Error::input("fit", "fewer data points than parameters"));
    }
    let mut a = RMat::zeros(p, p);
    let mut b = RMat::zeros(p, 1);
    for i in 0..m {
        for j in 0..p {
            b[(j, 0)] += w[i] * design[i][j] * y[i];
            for k in 0..p {
                a[(j, k)] += w[i] * design[i][j] * design[i][k];
            }
        }
    }
    let inv = a
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::singular("fit", "normal equations are singular"))?;
    let c = &inv * b;
    let coefficients: Vec<f64> = c.iter().copied().collect();
    let mut ss = 0.0;
    let mut wsum = 0.0;
    for i in 0..m {
        let pred: f64 = (0..p).map(|j| design[i][j] * coefficients[j]).sum();
        ss += w[i] * (y[i] - pred).powi(2);
        wsum += w[i];
    }
    let dof = (m - p).max(1) as f64;
    let sigma2 = ss / dof;
    let std_errors = (0..p)
        .map(|j| (sigma2 * inv[(j, j)]).max(0.0).sqrt())
        .collect();
    Ok(LinearFit {
        coefficients,
        std_errors,
        residual_rms: (ss / wsum).sqrt(),
    })
}

/// Ordinary least-squares line `y = a + b x`, returned as `(a, b)`.
pub fn line(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let design: Vec<Vec<f64>> = x.iter().map(|&t| alloc::vec![1.0, t]).collect();
    let w = alloc::vec![1.0; x.len()];
    let f = weighted_least_squares(&design, y, &w)?;
    Ok((f.coefficients[0], f.coefficients[1]))
}

/// Slope of `log y` against `log x`; every value must be positive.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::dim("fit", "need at least two matching points"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::input("fit", "log-log fit needs positive data"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    Ok(line(&lx, &ly)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|t| 2.0 - 0.5 * t).collect();
        let (a, b) = line(&x, &y).unwrap();
        assert!((a - 2.0).abs() < 1e-12 && (b + 0.5).abs() < 1e-12);
    }

    #[test]
    fn power_law_slope() {
        let x = [0.2, 0.1, 0.05];
        let y: Vec<f64> = x.iter().map(|t: &f64| 3.0 * t.powf(1.5)).collect();
        assert!((loglog_slope(&x, &y).unwrap() - 1.5).abs() < 1e-12);
        assert!(loglog_slope(&x, &[1.0, 0.0, 1.0]).is_err());
    }
}
