//! Faddeeva function `w(z) = e^{-z²} erfc(-iz)` (Weideman's rational
//! approximation with 40 terms), in plain and logarithmic form.

#[allow(unused_imports)]
use num_traits::Float;

use crate::logc::LogC;
use crate::C64;

const L: f64 = 5.318_295_896_944_988_6;

/// Coefficients `a_1..a_40` of `p(Z) = Σ a_n Z^{n-1}`.
#[rustfmt::skip]
const A: [f64; 40] = [
    2.89962450938970528e+00,
    2.61605415276186015e+00,
    2.20151379487831189e+00,
    1.72538308481797786e+00,
    1.25638156757651331e+00,
    8.47217457659381834e-01,
    5.26652898827708604e-01,
    2.99894379961500646e-01,
    1.55042638024794954e-01,
    7.18236177907433659e-02,
    2.92029164712418673e-02,
    1.00481862427834242e-02,
    2.70540563307379144e-03,
    4.39807015986966809e-04,
    -3.93936314548956899e-05,
    -5.59130926424831809e-05,
    -1.80074471447509562e-05,
    -1.06601389849471431e-06,
    1.48356611322007808e-06,
    5.91213695189949436e-07,
    1.41986423999356739e-08,
    -6.35177348504429047e-08,
    -1.83156167830404618e-08,
    3.24974651804369725e-09,
    3.01778054000907068e-09,
    2.10860063470665174e-10,
    -3.56323398659765332e-10,
    -9.05512445092829225e-11,
    3.47272670930455001e-11,
    1.77144952140111921e-11,
    -2.72760231582004522e-12,
    -2.90768834218286691e-12,
    1.20314582193879887e-13,
    4.53296667826067269e-13,
    1.37256205867155002e-14,
    -7.07408626028685501e-14,
    -5.40931028288214225e-15,
    1.13576871989992415e-14,
    1.12807356236440206e-15,
    -1.89969494739492709e-15,
];

fn w_upper(z: C64) -> C64 {
    let iz = C64::new(-z.im, z.re);
    let den = C64::new(L, 0.0) - iz;
    let zz = (C64::new(L, 0.0) + iz) / den;
    let mut p = C64::new(0.0, 0.0);
    for a in A.iter().rev() {
        p = p * zz + a;
    }
    p * 2.0 / (den * den) + 1.0 / (core::f64::consts::PI.sqrt() * den)
}

/// Faddeeva function. Overflows for `Im z` very negative; use [`faddeeva_log`] there.
pub fn faddeeva(z: C64) -> C64 {
    if z.im >= 0.0 {
        w_upper(z)
    } else {
        (-(z * z)).exp() * 2.0 - w_upper(-z)
    }
}

/// `ln w(z)` without overflow.
pub fn faddeeva_log(z: C64) -> LogC {
    if z.im >= 0.0 {
        LogC::from_c64(w_upper(z))
    } else {
        let gauss = LogC::from_ln(C64::new(2f64.ln(), 0.0) - z * z);
        gauss - LogC::from_c64(w_upper(-z))
    }
}

/// Real error function via `erfc(x) = e^{−x²} w(ix)`.
pub fn erf_real(x: f64) -> f64 {
    let a = x.abs();
    let erfc = (-a * a).exp() * w_upper(C64::new(0.0, a)).re;
    (1.0 - erfc).copysign(x)
}

/// `∫_0^∞ exp(-α y²/2 + β y) dy` for `Re α > 0`, as a logarithm.
pub fn half_line_gaussian_log(alpha: C64, beta: C64) -> LogC {
    let s = (alpha * 2.0).sqrt();
    let pref = (C64::new(core::f64::consts::PI, 0.0) / (alpha * 2.0)).sqrt();
    let arg = C64::new(0.0, -1.0) * beta / s;
    LogC::from_c64(pref) * faddeeva_log(arg)
}

/// `∫_R exp(-α y²/2 + β y) dy` for `Re α > 0`, as a logarithm.
pub fn full_line_gaussian_log(alpha: C64, beta: C64) -> LogC {
    let pref = (C64::new(2.0 * core::f64::consts::PI, 0.0) / alpha).sqrt();
    LogC::from_c64(pref) * LogC::from_ln(beta * beta / (alpha * 2.0))
}
