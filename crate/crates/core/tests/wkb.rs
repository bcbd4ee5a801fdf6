use fbi_core::series::Series;
use fbi_core::wkb::*;
use fbi_core::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `(1 + x²/4)hD − ix + h·0.3x`: variable transport speed and a subprincipal term.
fn variable_speed(m: usize) -> ModelOperator {
    let a0 = vec![
        Series::new(vec![c(0.0, 0.0), c(0.0, -1.0)], m),
        Series::new(vec![c(0.0, 0.0), c(0.3, 0.0)], m),
    ];
    let a1 = vec![Series::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.25, 0.0)], m)];
    ModelOperator::new(0.0, vec![a0, a1]).unwrap()
}

fn config(r_in: f64, r_out: f64) -> QuasimodeConfig {
    QuasimodeConfig {
        xi0: 0.0,
        cutoff: Cutoff::new(r_in, r_out).unwrap(),
        ladder: QuasimodeConfig::default_ladder(),
        k_out: 6,
        degree: 40,
        c_real: 1.0,
    }
}

#[test]
fn eikonal_follows_the_branch() {
    let p = variable_speed(40);
    let e = eikonal_1d(&p, 0.0, 40).unwrap();
    // φ = 2i log(1 + x²/4).
    for x in [0.3, -0.8, 1.2] {
        let exact = c(0.0, 2.0 * (1.0 + x * x / 4.0f64).ln());
        assert!((e.eval_phi(x) - exact).norm() < 1e-9, "x={x}");
    }
    assert!(
        (e.validity_radius() - 2.0).abs() < 0.2,
        "radius {}",
        e.validity_radius()
    );
    assert!(e.tangent_positivity() > 0.0);
}

#[test]
fn model_transport_integrates_the_source() {
    let p = ModelOperator::hd_minus_ix(0.0, 12);
    let e = eikonal_1d(&p, 0.0, 12).unwrap();
    let t = transport_solve(&p, &e, &[], &[c(1.0, 0.0)], 3).unwrap();
    assert_eq!(t.u[0].c[0], c(1.0, 0.0));
    assert!(t
        .u
        .iter()
        .flat_map(|s| s.c.iter().skip(1))
        .all(|v| v.norm() == 0.0));
    assert!(t.u[1..].iter().all(|s| s.c[0].norm() == 0.0));
    // (h/i)u' = h v  ⇒  u₀ = w₀ + i∫v₀.
    let v = vec![Series::new(vec![c(1.0, 0.0), c(2.0, 0.0)], 12)];
    let t = transport_solve(&p, &e, &v, &[c(0.5, 0.0)], 1).unwrap();
    assert!((t.u[0].c[0] - c(0.5, 0.0)).norm() < 1e-15);
    assert!((t.u[0].c[1] - c(0.0, 1.0)).norm() < 1e-15);
    assert!((t.u[0].c[2] - c(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn transport_residual_vanishes_through_the_order_cap() {
    let p = variable_speed(30);
    let e = eikonal_1d(&p, 0.0, 30).unwrap();
    let v = vec![Series::new(vec![c(0.2, 0.1)], 30)];
    let t = transport_solve(&p, &e, &v, &[c(1.0, 0.0)], 4).unwrap();
    let r = transport_residual(&p, &e, &t, &v, 20);
    assert!(r.iter().all(|&x| x < 1e-10), "residuals {r:?}");
    let prof = transport_profile(&t, 1.0);
    assert!(prof.f.iter().all(|f| f.is_finite()));
    assert!(prof.rho_norm(0.1) < f64::INFINITY);
}

#[test]
fn model_quasimode_decays_at_the_predicted_rate() {
    let p = ModelOperator::hd_minus_ix(0.0, 8);
    let rep = quasimode(&p, c(0.0, 0.0), &config(1.0, 2.0)).unwrap();
    assert!((rep.predicted_slope + 0.5).abs() < 1e-12);
    assert!(rep.slope < 0.0);
    assert!(
        (-0.625..=-0.375).contains(&rep.slope_corrected),
        "corrected slope {}",
        rep.slope_corrected
    );
    let ratio = rep.norm_ratio(0.05).unwrap();
    assert!((ratio - 1.0).abs() < 5e-2, "‖u_h‖/h^(1/4) = {ratio}");
    let mut last = f64::INFINITY;
    for pt in &rep.ladder {
        assert!(pt.residual < last);
        last = pt.residual;
    }
}

#[test]
fn shifted_spectral_parameter() {
    // p − 0.1i vanishes at (−0.1, 0).
    let p = ModelOperator::hd_minus_ix(-0.1, 8);
    let rep = quasimode(&p, c(0.0, 0.1), &config(1.0, 2.0)).unwrap();
    assert!(
        (-0.625..=-0.375).contains(&rep.slope_corrected),
        "corrected slope {}",
        rep.slope_corrected
    );
}

#[test]
fn variable_speed_quasimode() {
    let p = variable_speed(40);
    let rep = quasimode(&p, c(0.0, 0.0), &config(0.8, 1.4)).unwrap();
    let pred = rep.predicted_slope;
    assert!((pred + 2.0 * (1.0 + 0.16f64).ln()).abs() < 1e-6);
    assert!(
        (rep.slope_corrected - pred).abs() < 0.25 * pred.abs(),
        "{} vs {pred}",
        rep.slope_corrected
    );
    assert!((rep.norm_ratio(0.05).unwrap() - 1.0).abs() < 0.1);
}

#[test]
fn cutoff_beyond_validity_is_rejected() {
    let p = variable_speed(40);
    assert!(quasimode(&p, c(0.0, 0.0), &config(1.0, 1.9)).is_err());
}
