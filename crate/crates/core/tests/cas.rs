use fbi_core::cas::*;
use fbi_core::poly::{qc, Poly, QC};
use fbi_core::C64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn origin(n: usize) -> Vec<QC> {
    vec![QC::zero(); 2 * n]
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> Poly<QC> {
    let mut p = Poly::zero(2 * n);
    for e in fbi_core::poly::multi_indices(2 * n, deg) {
        if rng.gen_bool(0.5) {
            p.add_term(
                e,
                qc(
                    (rng.gen_range(-3..=3), rng.gen_range(1..=3)),
                    (rng.gen_range(-2..=2), rng.gen_range(1..=2)),
                ),
            );
        }
    }
    p
}

fn random_symbol(rng: &mut ChaCha8Rng, n: usize, k: usize, deg: u32) -> FormalSymbol<QC> {
    let coeffs = (0..=k).map(|_| random_poly(rng, n, deg)).collect();
    FormalSymbol::new(n, origin(n), 0, deg, coeffs).unwrap()
}

fn sym1(coeffs: Vec<Poly<QC>>, cap: u32) -> FormalSymbol<QC> {
    FormalSymbol::new(1, origin(1), 0, cap, coeffs).unwrap()
}

fn dom(n: usize) -> DomainFamily {
    DomainFamily::new(vec![C64::new(0.0, 0.0); 2 * n], 0.8, 0.6).unwrap()
}

#[test]
fn commutator_is_h_over_i() {
    let xi = sym1(vec![FormalSymbol::xi_var(1, 0), Poly::zero(2)], 1);
    let x = sym1(vec![FormalSymbol::x_var(1, 0), Poly::zero(2)], 1);
    let a = compose(&xi, &x, 1).unwrap();
    let b = compose(&x, &xi, 1).unwrap();
    let d = a.add(&b.scale(&-QC::one())).unwrap();
    assert!(d.coeffs[0].is_zero());
    assert_eq!(d.coeffs[1], Poly::constant(2, qc((0, 1), (-1, 1))));
}

#[test]
fn composition_is_associative_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 0..20 {
        let n = if t % 5 == 4 { 2 } else { 1 };
        let (p, q, r) = (
            random_symbol(&mut rng, n, 3, 2),
            random_symbol(&mut rng, n, 3, 2),
            random_symbol(&mut rng, n, 3, 2),
        );
        let left = compose(&compose(&p, &q, 3).unwrap(), &r, 3).unwrap();
        let right = compose(&p, &compose(&q, &r, 3).unwrap(), 3).unwrap();
        assert_eq!(left.coeffs, right.coeffs, "triple {t}");
    }
}

#[test]
fn composed_family_is_the_operator_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [1, 2] {
        let (p, q) = (
            random_symbol(&mut rng, n, 3, 2),
            random_symbol(&mut rng, n, 3, 2),
        );
        let (fa, fb) = (conjugated_family(&p), conjugated_family(&q));
        let fc = conjugated_family(&compose(&p, &q, 3).unwrap());
        for k in 0..=3 {
            let sum = (0..=k).fold(DiffOp::zero(n), |acc, nu| {
                acc.add(&fa[nu].compose(&fb[k - nu]))
            });
            assert_eq!(fc[k], sum, "n={n} k={k}");
            assert!(fc[k].order().unwrap_or(0) as usize <= k);
        }
    }
}

#[test]
fn family_term_count_is_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [1, 2] {
        let p = random_symbol(&mut rng, n, 4, 3);
        for (k, a) in conjugated_family(&p).iter().enumerate() {
            assert!(a.terms.len() <= (1 + k).pow(n as u32 + 1));
        }
    }
}

#[test]
fn quasi_norms_are_submultiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for t in 0..50 {
        let n = if t % 10 == 9 { 2 } else { 1 };
        let (p, q) = (
            random_symbol(&mut rng, n, 3, 2),
            random_symbol(&mut rng, n, 3, 2),
        );
        let c = compose(&p, &q, 3).unwrap();
        let (fa, fb, fc) = (
            symbol_profile(&p, &dom(n)).unwrap(),
            symbol_profile(&q, &dom(n)).unwrap(),
            symbol_profile(&c, &dom(n)).unwrap(),
        );
        let conv = fa.convolve(&fb);
        for k in 0..=3 {
            assert!(
                fc.f[k] <= conv.f[k] * (1.0 + 1e-9),
                "pair {t} k={k}: {} > {}",
                fc.f[k],
                conv.f[k]
            );
        }
        for rho in [0.1, 0.5, 1.0, 2.0] {
            assert!(fc.rho_norm(rho) <= fa.rho_norm(rho) * fb.rho_norm(rho) * (1.0 + 1e-9));
        }
    }
}

#[test]
fn fiber_only_symbol_inverts_to_geometric_series() {
    let xi = FormalSymbol::<QC>::xi_var(1, 0);
    let mut coeffs = vec![Poly::zero(2); 9];
    coeffs[0] = Poly::one(2);
    coeffs[1] = xi.clone();
    let p = sym1(coeffs, 8);
    let q = elliptic_inverse(&p, 8, &dom(1)).unwrap();
    let mut pw = Poly::one(2);
    for k in 0..=8 {
        let sign = if k % 2 == 0 { QC::one() } else { -QC::one() };
        assert_eq!(q.coeffs[k], pw.scale(&sign), "order {k}");
        pw = &pw * &xi;
    }
    let pq = compose(&p, &q, 8).unwrap();
    assert_eq!(pq.coeffs[0], Poly::one(2));
    assert!(pq.coeffs[1..].iter().all(|c| c.truncate(8).is_zero()));
}

#[test]
fn affine_symbol_inverts_at_truncation() {
    let d = 10;
    let mut coeffs = vec![Poly::zero(2); 9];
    coeffs[0] = &FormalSymbol::x_var(1, 0) + &Poly::constant(2, qc((2, 1), (0, 1)));
    coeffs[1] = FormalSymbol::xi_var(1, 0);
    let p = sym1(coeffs, d);
    let q = elliptic_inverse(&p, 8, &dom(1)).unwrap();
    // q₀ is the Taylor polynomial of 1/(x+2).
    for j in 0..=d {
        let c = q.coeffs[0].coeff(&[j, 0]);
        let sign = if j % 2 == 0 { 1 } else { -1 };
        assert_eq!(c, qc((sign, 1i64 << (j + 1)), (0, 1)));
    }
    let pq = compose(&p, &q, 8).unwrap();
    for (k, c) in pq.coeffs.iter().enumerate() {
        let expect = if k == 0 { Poly::one(2) } else { Poly::zero(2) };
        assert_eq!(c.truncate(d - k as u32), expect, "order {k}");
    }
}

#[test]
fn inverse_norm_is_controlled_at_the_bisected_radius() {
    for p0 in [
        Poly::one(2),
        &FormalSymbol::x_var(1, 0) + &Poly::constant(2, qc((2, 1), (0, 1))),
    ] {
        let mut coeffs = vec![Poly::zero(2); 9];
        coeffs[0] = p0;
        coeffs[1] = FormalSymbol::xi_var(1, 0);
        let p = sym1(coeffs, 10);
        let (q0, r) = inverse_ingredients(&p, 8, &dom(1)).unwrap();
        let rp = symbol_profile(&r, &dom(1)).unwrap();
        assert_eq!(rp.f[0], 0.0);
        let rho = inversion_radius(&rp, 4.0);
        assert!(rho > 0.0 && rp.rho_norm(rho) <= 0.5 + 1e-12);
        let q = elliptic_inverse(&p, 8, &dom(1)).unwrap();
        let nq = symbol_profile(&q, &dom(1)).unwrap().rho_norm(rho);
        let nq0 = symbol_profile(&q0, &dom(1)).unwrap().rho_norm(rho);
        assert!(nq <= 2.0 * nq0, "‖q‖ = {nq}, ‖q₀‖ = {nq0}, ρ = {rho}");
    }
}

#[test]
fn vanishing_principal_symbol_is_rejected() {
    let p = sym1(vec![FormalSymbol::x_var(1, 0), Poly::zero(2)], 2);
    assert!(elliptic_inverse(&p, 1, &dom(1)).is_err());
}

#[test]
fn saturated_symbol_realizes_within_bound() {
    // a_k = k^k is the extremal growth with C = 1.
    let coeffs = (0..=40)
        .map(|k: i32| Poly::constant(2, C64::new((k as f64).powi(k), 0.0)))
        .collect();
    let a = FormalSymbol::new(1, vec![C64::new(0.0, 0.0); 2], 0, 0, coeffs).unwrap();
    let e = std::f64::consts::E;
    for h in [0.1, 0.05, 0.025] {
        let v = realize(&a, 1.0, h, &[C64::new(0.0, 0.0); 2]).unwrap();
        assert!(v.norm() <= e / (e - 1.0), "h={h}: {v}");
    }
}

#[test]
fn factorial_squared_growth_is_detected() {
    let coeffs = (0..=20u32)
        .map(|k| {
            Poly::constant(
                2,
                C64::new((1..=k).map(f64::from).product::<f64>().powi(2), 0.0),
            )
        })
        .collect();
    let a = FormalSymbol::new(1, vec![C64::new(0.0, 0.0); 2], 0, 0, coeffs).unwrap();
    let f = symbol_profile(&a, &dom(1)).unwrap().f;
    // Successive ratios grow linearly in k, so ρ^k f̂_k eventually increases for every ρ > 0.
    let ratios: Vec<f64> = f.windows(2).map(|w| w[1] / w[0]).collect();
    assert!(ratios.windows(2).all(|r| r[1] > r[0]), "ratios {ratios:?}");
    assert!(
        ratios
            .iter()
            .enumerate()
            .skip(4)
            .all(|(k, r)| r / (k + 1) as f64 > 0.25),
        "ratios {ratios:?}"
    );
    for rho in [0.25f64, 0.5, 1.0] {
        assert!(
            rho.powi(20) * f[20] > rho.powi(19) * f[19],
            "ρ={rho}: terms still shrinking"
        );
    }
}

#[test]
fn operator_symbol_composes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (a, b) = (
        random_symbol(&mut rng, 1, 2, 2),
        random_symbol(&mut rng, 1, 2, 2),
    );
    let y_free = symbol_of_op(&Amplitude::left(&b)).unwrap();
    assert_eq!(y_free.coeffs, b.coeffs);
    let sa = symbol_of_op(&Amplitude::right(&a)).unwrap();
    let sba = symbol_of_op(&Amplitude::left(&b).mul(&Amplitude::right(&a)).unwrap()).unwrap();
    assert_eq!(sba.coeffs, compose(&b, &sa, 2).unwrap().coeffs);
}
