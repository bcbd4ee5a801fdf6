use fbi_core::gaussian::*;
use fbi_core::poly::Poly;
use fbi_core::quad::GaussLegendre;
use fbi_core::C64;

fn c(a: f64, b: f64) -> C64 {
    C64::new(a, b)
}

fn battery() -> Vec<(&'static str, Box<dyn Fn(&[C64]) -> C64>, f64)> {
    // sup over the unit disc
    vec![
        ("exp", Box::new(|z: &[C64]| z[0].exp()), 1f64.exp()),
        ("cos", Box::new(|z: &[C64]| z[0].cos()), 1f64.cosh()),
        (
            "pole",
            Box::new(|z: &[C64]| c(1.0, 0.0) / (c(2.0, 0.0) - z[0])),
            1.0,
        ),
    ]
}

#[test]
fn ball_remainder_stays_below_calibrated_bound() {
    for (name, f, sup) in battery() {
        for h in [0.2, 0.1, 0.05] {
            let exact = ball_gaussian_quadrature(&*f, 1, h).unwrap();
            for order in 1..=6 {
                let u = AnalyticIntegrand::Evaluable {
                    n: 1,
                    f: &*f,
                    radius: 2.0,
                    sup,
                };
                let e = stationary_phase_expand(&u, order, h).unwrap();
                let r = (exact - e.value).norm();
                assert!(
                    r <= e.remainder_bound,
                    "{name} N={order} h={h}: {r:e} > {:e}",
                    e.remainder_bound
                );
            }
        }
    }
}

#[test]
fn ball_remainder_in_two_variables() {
    let f = |z: &[C64]| (z[0] + z[1] * 0.5).exp();
    let sup = 1.5f64.exp();
    for h in [0.2, 0.1] {
        let exact = ball_gaussian_quadrature(&f, 2, h).unwrap();
        for order in 1..=4 {
            let u = AnalyticIntegrand::Evaluable {
                n: 2,
                f: &f,
                radius: 2.0,
                sup,
            };
            let e = stationary_phase_expand(&u, order, h).unwrap();
            assert!((exact - e.value).norm() <= e.remainder_bound);
        }
    }
}

#[test]
fn polynomial_moments_are_exact() {
    // Σ_k c_k x^k against the full-line moments √(2πh) h^j (2j−1)!!
    let h: f64 = 0.07;
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
    let e = stationary_phase_expand(&AnalyticIntegrand::Polynomial(p), 4, h).unwrap();
    assert!((e.value - exact).norm() <= 4.0 * f64::EPSILON * exact.norm());
}

#[test]
fn double_contour_remainder_below_bound() {
    let fs: Vec<(Box<dyn Fn(C64, C64) -> C64>, Box<dyn Fn(&[C64]) -> C64>)> = vec![
        (
            Box::new(|x, xi| (x + xi).exp()),
            Box::new(|z: &[C64]| (z[0] + z[1]).exp()),
        ),
        (
            Box::new(|x, xi| (x - xi).cos()),
            Box::new(|z: &[C64]| (z[0] - z[1]).cos()),
        ),
    ];
    let (c1, c2) = (1.0f64, 1.5);
    for (f2, fv) in &fs {
        let sup = (c1 + c1 * c2).exp();
        for h in [0.2, 0.1, 0.05] {
            let exact = double_contour_quadrature_1d(&**f2, c1, c2, h);
            for order in 1..=4 {
                let u = AnalyticIntegrand::Evaluable {
                    n: 2,
                    f: &**fv,
                    radius: 4.0,
                    sup,
                };
                let e = double_contour_expand(&u, c1, c2, order, h).unwrap();
                assert!(
                    (exact - e.value).norm() <= e.remainder_bound,
                    "h={h} N={order}"
                );
            }
        }
    }
}

#[test]
fn steepest_descent_matches_real_line_and_morse_series() {
    let phi = |z: C64| z * z * 0.5 - c(0.0, 1.0) * z * z * z / 3.0;
    let dphi = |z: C64| z - c(0.0, 1.0) * z * z;
    let u = |z: C64| c(1.0, 0.0) / (c(2.0, 0.0) - z);
    let gl = GaussLegendre::new(24);
    for terms in 1..=4 {
        let mut gaps = Vec::new();
        for h in [0.025, 0.0125] {
            let r = steepest_descent_1d(&phi, &dphi, &u, (-1.0, 1.0), 1.8, h, terms).unwrap();
            let direct = gl.integrate_complex(
                |x| (-phi(c(x, 0.0)) / h).exp() * u(c(x, 0.0)),
                -1.0,
                1.0,
                400,
            );
            assert!((r.value - direct).norm() < 1e-10);
            gaps.push((r.value - r.expansion).norm());
        }
        // The error of K terms is O(h^{K+1/2}).
        let slope = (gaps[0] / gaps[1]).log2();
        assert!(slope > terms as f64 + 0.5 - 0.4, "K={terms}: slope {slope}");
    }
}

#[test]
fn steepest_descent_rejects_bad_intervals() {
    let phi = |z: C64| z * z * 0.5;
    let dphi = |z: C64| z;
    let one = |_: C64| c(1.0, 0.0);
    assert!(steepest_descent_1d(&phi, &dphi, &one, (0.5, 1.0), 3.0, 0.1, 2).is_err());
    assert!(steepest_descent_1d(&phi, &dphi, &one, (-1.0, 1.0), 0.5, 0.1, 2).is_err());
}
