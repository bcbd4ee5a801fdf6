use fbi_core::phase::FBIPhase;
use fbi_core::transform::TestDistribution as T;
use fbi_core::wavefront::*;
use fbi_core::{CMat, RMat, C64};

const YS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];
const ETAS: [f64; 5] = [-1.0, -0.5, 0.5, 1.0, 2.0];

fn normal_form() -> FBIPhase {
    FBIPhase::normal_form(
        CMat::from_element(1, 1, C64::new(0.0, -1.0)),
        RMat::from_element(1, 1, 1.0),
    )
    .unwrap()
}

/// A phase with a real part in `Q_yy`, so that `κ` shears `η` by `y`.
fn chirped() -> FBIPhase {
    let e = |re: f64, im: f64| CMat::from_element(1, 1, C64::new(re, im));
    FBIPhase::new(e(0.0, 0.0), e(0.0, -1.0), e(0.5, 1.0)).unwrap()
}

fn zoo() -> Vec<T> {
    vec![
        T::Delta { y0: 0.0 },
        T::Heaviside,
        T::Abs,
        T::Gaussian { a: 1.0 },
        T::Constant,
    ]
}

#[test]
fn delta_rate_is_half_the_squared_offset() {
    let phi = FBIPhase::bargmann(1);
    let u = [T::Delta { y0: 0.0 }];
    let p = ProbePoint::new(vec![1.0], vec![1.0]).unwrap();
    let r = decay_rate(&u, &p, &phi, &default_ladder(), 0.0).unwrap();
    // The h^{-3/4} prefactor biases the line fit by (3/4)·(h log h) extrapolated.
    assert!((r.center.intercept - 0.5).abs() < 0.1, "{}", r.center.intercept);
    let exact = decay_rate(&u, &p, &phi, &[1e-6, 1e-7, 1e-8], 0.0).unwrap();
    assert!((exact.center.intercept - 0.5).abs() < 1e-5);
    let p0 = ProbePoint::new(vec![0.0], vec![1.0]).unwrap();
    let r0 = decay_rate(&u, &p0, &phi, &default_ladder(), 0.05).unwrap();
    assert_eq!(r0.rate, 0.0);
    assert_eq!(r0.classification, Classification::InWF);
    assert!(r0.ladder.windows(2).all(|w| w[1].h < w[0].h));
}

#[test]
fn heaviside_decays_only_polynomially_over_the_jump() {
    let p = ProbePoint::new(vec![0.0], vec![1.0]).unwrap();
    let r = decay_rate(&[T::Heaviside], &p, &FBIPhase::bargmann(1), &default_ladder(), 0.0).unwrap();
    assert!(r.rate < 0.06, "rate {}", r.rate);
}

#[test]
fn delta_and_heaviside_scan_to_the_origin_column() {
    for phi in [FBIPhase::bargmann(1), normal_form(), chirped()] {
        for u in [T::Delta { y0: 0.0 }, T::Heaviside] {
            let s = scan(&u, &phi, &YS, &ETAS, &default_ladder()).unwrap();
            assert_eq!(s.projection, vec![0.0], "{}", u.name());
            assert_eq!(s.in_wf().count(), ETAS.len(), "{}", u.name());
            assert!(s.tau > 0.0 && s.tau < 0.1, "τ = {}", s.tau);
        }
    }
}

#[test]
fn analytic_inputs_have_empty_wavefront() {
    for phi in [FBIPhase::bargmann(1), normal_form(), chirped()] {
        for u in [T::Gaussian { a: 1.0 }, T::Constant, T::Gaussian { a: 3.0 }] {
            let s = scan(&u, &phi, &YS, &ETAS, &default_ladder()).unwrap();
            assert_eq!(s.in_wf().count(), 0, "{}", u.name());
        }
    }
}

#[test]
fn abs_is_detected_at_small_covectors() {
    let s = scan(&T::Abs, &FBIPhase::bargmann(1), &YS, &ETAS, &default_ladder()).unwrap();
    assert_eq!(s.projection, vec![0.0]);
    // Its h^{5/4} prefactor outweighs τ once |η₀| ≥ 1.
    assert!(s.in_wf().all(|r| r.probe.eta0[0].abs() < 1.0));
}

#[test]
fn classification_does_not_depend_on_the_phase() {
    let probes = probe_grid(&YS, &ETAS).unwrap();
    for u in zoo() {
        for other in [normal_form(), chirped()] {
            let rep = phase_independence(
                &[u.clone()],
                &probes,
                &FBIPhase::bargmann(1),
                &other,
                &default_ladder(),
            )
            .unwrap();
            assert!(rep.agree(), "{}: agreement {}", u.name(), rep.agreement());
        }
    }
}

#[test]
fn classification_is_conic() {
    let probes = probe_grid(&YS, &[-1.0, 1.0, 2.0]).unwrap();
    for u in [T::Delta { y0: 0.0 }, T::Heaviside, T::Gaussian { a: 1.0 }, T::Constant] {
        let frac = conicity(&[u.clone()], &probes, &FBIPhase::bargmann(1), &default_ladder()).unwrap();
        assert_eq!(frac, 1.0, "{}", u.name());
    }
}

#[test]
fn jump_propagates_along_its_bicharacteristic() {
    let phi = FBIPhase::bargmann(2);
    let ts = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let lad = default_ladder();
    let h = propagation_smoke(&T::Heaviside, &phi, &ts, [1.0, 0.0], &lad).unwrap();
    assert!(h.constant());
    assert_eq!(h.reports[0].classification, Classification::InWF);
    let g = propagation_smoke(&T::Gaussian { a: 1.0 }, &phi, &ts, [1.0, 0.0], &lad).unwrap();
    assert!(g.constant());
    assert_eq!(g.reports[0].classification, Classification::NotInWF);
    let mixed = propagation_smoke(&T::Heaviside, &phi, &ts, [0.0, 1.0], &lad).unwrap();
    assert!(mixed
        .reports
        .iter()
        .all(|r| r.classification == Classification::NotInWF));
}

#[test]
fn detections_lie_on_the_characteristic_set() {
    // P = y·D_y annihilates the jump, so WF_a(u) ⊂ {y η = 0}.
    let demo = elliptic_regularity_demo(
        &T::Heaviside,
        |y, eta| y * eta,
        &FBIPhase::bargmann(1),
        &YS,
        &ETAS,
        &default_ladder(),
    )
    .unwrap();
    assert!(demo.holds(), "{:?}", demo.off_characteristic);
    assert!(demo.scan.in_wf().count() > 0);
}

#[test]
fn transforms_grow_at_most_like_the_weight() {
    let probes = probe_grid(&YS, &ETAS).unwrap();
    for phi in [FBIPhase::bargmann(1), chirped()] {
        for u in zoo() {
            let c = growth_log_constant(&[u.clone()], &phi, &probes, &default_ladder(), 0.1).unwrap();
            assert!(c < 5.0, "{}: log C = {c}", u.name());
        }
    }
}
