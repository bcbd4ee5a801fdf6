//! The ten acceptance criteria, each reduced to one PASS/FAIL line.

use fbi_core::cas::{
    compose, elliptic_inverse, inverse_ingredients, inversion_radius, symbol_profile,
    DomainFamily, FormalSymbol,
};
use fbi_core::csymplectic::{
    classify_positivity, gamma_for_weight, partial_critical, signature, LagrangianPlane,
    Positivity, RealQuadraticForm2n, RealQuadraticWeight,
};
use fbi_core::linalg::{rnorm, symmetric_eigenvalues};
use fbi_core::phase::{legendre_inverse, legendre_weight, FBIPhase};
use fbi_core::poly::{multi_indices, qc, Poly, QC};
use fbi_core::transform::{GaussianPoly, TestDistribution};
use fbi_core::wavefront::{self, default_ladder, Classification};
use fbi_core::wkb::{quasimode, Cutoff, ModelOperator, QuasimodeConfig};
use fbi_core::{CMat, RMat, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{GridSpec, ProbeGridSpec};
use crate::error::CliError;
use crate::experiments::*;

pub const TITLES: [&str; 10] = [
    "unitarity",
    "bergman projection",
    "egorov",
    "quantization-multiplication",
    "stationary phase",
    "symbol calculus",
    "complex fourier pair",
    "wkb quasi-mode",
    "wavefront detector",
    "quadratic-form layer",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {}: {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

type Check = Result<(bool, String), CliError>;

pub fn run_criterion(id: usize, seed: u64) -> CriterionResult {
    let out: Check = match id {
        1 => unitarity(),
        2 => bergman(),
        3 => egorov(),
        4 => quant_mult_slope(),
        5 => stationary_phase(),
        6 => symbol_calculus(seed),
        7 => fourier(seed),
        8 => wkb(),
        9 => wavefront_detector(),
        10 => quadratic_forms(seed),
        _ => Err(CliError::usage(format!("no criterion {id}"))),
    };
    let (pass, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        pass,
        detail,
    }
}

/// All criteria, in order; independent criteria run in parallel.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=10)
        .into_par_iter()
        .map(|id| run_criterion(id, seed))
        .collect()
}

fn normal_form() -> FBIPhase {
    FBIPhase::normal_form(
        CMat::from_element(1, 1, C64::new(0.0, -1.0)),
        RMat::identity(1, 1),
    )
    .expect("valid phase")
}

fn unitarity() -> Check {
    let inputs = [
        TestDistribution::Gaussian { a: 1.0 },
        TestDistribution::Gaussian { a: 2.0 },
        TestDistribution::GaussianPoly(GaussianPoly::gaussian(1.0).mul_y()),
    ];
    let mut jobs = Vec::new();
    for phi in [FBIPhase::bargmann(1), normal_form()] {
        for u in &inputs {
            for h in [0.2, 0.1, 0.05] {
                jobs.push((phi.clone(), u.clone(), h));
            }
        }
    }
    let dev = jobs
        .par_iter()
        .map(|(phi, u, h)| Ok((isometry_ratio(phi, u, *h, &GridSpec::default())? - 1.0).abs()))
        .collect::<Result<Vec<f64>, CliError>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((
        dev <= 1e-3,
        format!("max |ratio − 1| = {dev:.2e} over {} cases (tol 1e-3)", jobs.len()),
    ))
}

fn bergman() -> Check {
    let ids = bergman_identities(0.1)?;
    let worst = ids
        .iter()
        .map(|c| c.error / c.tol)
        .fold(0.0, f64::max);
    let gaps = bergman_adjoint_gaps(0.1)?;
    let gap = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    Ok((
        ids.iter().all(|c| c.pass()) && gap <= 1e-2,
        format!(
            "identities at {:.2} of tolerance; max ‖TT*v − Πv‖/‖v‖ = {gap:.2e} over {} perturbations",
            worst,
            gaps.len()
        ),
    ))
}

fn egorov() -> Check {
    let r = egorov_residuals(
        &FBIPhase::bargmann(1),
        &TestDistribution::Gaussian { a: 1.0 },
        0.1,
    )?;
    let worst = r.iter().map(|x| x.1).fold(0.0, f64::max);
    Ok((
        worst <= 1e-2,
        format!("max residual {worst:.2e} over η, y, y+η (tol 1e-2)"),
    ))
}

pub const QUANT_MULT_LADDER: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

fn quant_mult_slope() -> Check {
    let xi = fiber_symbol(1)?;
    let r: Vec<f64> = QUANT_MULT_LADDER
        .iter()
        .map(|&h| quant_mult(&xi, h))
        .collect::<Result<_, _>>()?;
    let ladder: Vec<String> = r.iter().map(|x| format!("{x:.1e}")).collect();
    match residual_slope(&QUANT_MULT_LADDER, &r) {
        Some(s) => Ok((
            (0.8..=1.3).contains(&s),
            format!("a = ξ slope {s:.3} (window [0.8, 1.3])"),
        )),
        None => {
            let xi2 = fiber_symbol(2)?;
            let hs = [0.2, 0.1, 0.05];
            let q: Vec<f64> = hs
                .iter()
                .map(|&h| quant_mult(&xi2, h))
                .collect::<Result<_, _>>()?;
            let diag = residual_slope(&hs, &q)
                .map(|s| format!("{s:.3}"))
                .unwrap_or_else(|| "undefined".into());
            Ok((
                false,
                format!(
                    "a = ξ residuals [{}] carry no power of h (the O(h) term vanishes identically; what remains is discretization noise), so the slope is undefined; diagnostic a = ξ² slope {diag}",
                    ladder.join(", ")
                ),
            ))
        }
    }
}

fn stationary_phase() -> Check {
    let rows = stationary_phase_battery(&[0.2, 0.1, 0.05], 1..=6)?;
    let worst = rows
        .iter()
        .map(|r| r.remainder / r.bound)
        .fold(0.0, f64::max);
    let poly = polynomial_moment_error(0.07)?;
    Ok((
        worst <= 1.0 && poly <= 4.0 * f64::EPSILON,
        format!(
            "max remainder/bound {worst:.3} over {} cases; polynomial moments relative error {poly:.1e}",
            rows.len()
        ),
    ))
}

fn q(re: i64) -> QC {
    qc((re, 1), (0, 1))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> Poly<QC> {
    let mut p = Poly::zero(2 * n);
    for e in multi_indices(2 * n, deg) {
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

fn random_symbol(rng: &mut ChaCha8Rng, n: usize) -> Result<FormalSymbol<QC>, CliError> {
    let coeffs = (0..=3).map(|_| random_poly(rng, n, 2)).collect();
    Ok(FormalSymbol::new(n, vec![q(0); 2 * n], 0, 2, coeffs)?)
}

fn sym1(coeffs: Vec<Poly<QC>>, cap: u32) -> Result<FormalSymbol<QC>, CliError> {
    Ok(FormalSymbol::new(1, vec![q(0); 2], 0, cap, coeffs)?)
}

fn dom(n: usize) -> Result<DomainFamily, CliError> {
    Ok(DomainFamily::new(vec![C64::new(0.0, 0.0); 2 * n], 0.8, 0.6)?)
}

fn symbol_calculus(seed: u64) -> Check {
    let mut notes = Vec::new();
    // (a) ξ#x − x#ξ = h/i
    let xi = sym1(vec![FormalSymbol::xi_var(1, 0), Poly::zero(2)], 1)?;
    let x = sym1(vec![FormalSymbol::x_var(1, 0), Poly::zero(2)], 1)?;
    let d = compose(&xi, &x, 1)?.add(&compose(&x, &xi, 1)?.scale(&q(-1)))?;
    let a = d.coeffs[0].is_zero() && d.coeffs[1] == Poly::constant(2, qc((0, 1), (-1, 1)));
    notes.push(format!("commutator {}", if a { "exact" } else { "wrong" }));

    // (b) associativity
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa550c);
    let mut assoc = 0;
    for t in 0..20 {
        let n = if t % 5 == 4 { 2 } else { 1 };
        let (p, q1, r) = (
            random_symbol(&mut rng, n)?,
            random_symbol(&mut rng, n)?,
            random_symbol(&mut rng, n)?,
        );
        let left = compose(&compose(&p, &q1, 3)?, &r, 3)?;
        let right = compose(&p, &compose(&q1, &r, 3)?, 3)?;
        if left.coeffs == right.coeffs {
            assoc += 1;
        }
    }
    notes.push(format!("associativity {assoc}/20"));

    // (c) quasi-norm inequalities
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5b3);
    let mut sub = 0;
    for t in 0..50 {
        let n = if t % 10 == 9 { 2 } else { 1 };
        let (p, q1) = (random_symbol(&mut rng, n)?, random_symbol(&mut rng, n)?);
        let c = compose(&p, &q1, 3)?;
        let dm = dom(n)?;
        let (fa, fb, fc) = (
            symbol_profile(&p, &dm)?,
            symbol_profile(&q1, &dm)?,
            symbol_profile(&c, &dm)?,
        );
        let conv = fa.convolve(&fb);
        let termwise = (0..=3).all(|k| fc.f[k] <= conv.f[k] * (1.0 + 1e-9));
        let normwise = [0.1, 0.5, 1.0, 2.0]
            .iter()
            .all(|&rho| fc.rho_norm(rho) <= fa.rho_norm(rho) * fb.rho_norm(rho) * (1.0 + 1e-9));
        if termwise && normwise {
            sub += 1;
        }
    }
    notes.push(format!("quasi-norm inequalities {sub}/50"));

    // (d) inverses of 1 + hξ and (x + 2) + hξ
    let mut inv_ok = 0;
    let mut ratios = Vec::new();
    for p0 in [
        Poly::one(2),
        &FormalSymbol::x_var(1, 0) + &Poly::constant(2, q(2)),
    ] {
        let cap = 10;
        let mut coeffs = vec![Poly::zero(2); 9];
        coeffs[0] = p0;
        coeffs[1] = FormalSymbol::xi_var(1, 0);
        let p = sym1(coeffs, cap)?;
        let dm = dom(1)?;
        let qinv = elliptic_inverse(&p, 8, &dm)?;
        let pq = compose(&p, &qinv, 8)?;
        let exact = pq.coeffs.iter().enumerate().all(|(k, c)| {
            let expect = if k == 0 { Poly::one(2) } else { Poly::zero(2) };
            c.truncate(cap - k as u32) == expect
        });
        let (q0, r) = inverse_ingredients(&p, 8, &dm)?;
        let rho = inversion_radius(&symbol_profile(&r, &dm)?, 4.0);
        let nq = symbol_profile(&qinv, &dm)?.rho_norm(rho);
        let nq0 = symbol_profile(&q0, &dm)?.rho_norm(rho);
        ratios.push(nq / nq0);
        if exact && rho > 0.0 && nq <= 2.0 * nq0 {
            inv_ok += 1;
        }
    }
    notes.push(format!(
        "inverses {inv_ok}/2 (‖q‖/‖q₀‖ = {:.3}, {:.3})",
        ratios[0], ratios[1]
    ));
    Ok((a && assoc == 20 && sub == 50 && inv_ok == 2, notes.join("; ")))
}

/// Random form `[[u, t], [t, −u]] + e·|(t, u)|·I` of signature (1, 1).
fn signature_11(rng: &mut ChaCha8Rng) -> RealQuadraticForm2n {
    loop {
        let t = rng.gen_range::<f64, _>(0.2..2.0);
        let u = rng.gen_range::<f64, _>(-1.0..1.0);
        let e = rng.gen_range::<f64, _>(-0.9..0.9);
        let s = RMat::from_row_slice(2, 2, &[u, t, t, -u])
            + RMat::identity(2, 2) * (e * (t * t + u * u).sqrt());
        let qf = RealQuadraticForm2n::new(s).expect("symmetric");
        if signature(&qf) == (1, 1) {
            return qf;
        }
    }
}

fn fourier(seed: u64) -> Check {
    let v = fourier_of_one(0.05)?;
    let err = (v - C64::new(1.0, 0.0)).norm();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf0f);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let qf = signature_11(&mut rng);
        let back = legendre_inverse(&legendre_weight(&qf)?)?;
        let ev = symmetric_eigenvalues(&(back.matrix() - qf.matrix()));
        let e = ev.iter().fold(0.0f64, |m, x| m.max(x.abs())) / rnorm(qf.matrix());
        worst = worst.max(e);
    }
    Ok((
        err <= 1e-3 && worst <= 1e-10,
        format!("|GF(1)(0) − 1| = {err:.2e}; Legendre involution max relative gap {worst:.1e} on 10 forms"),
    ))
}

fn wkb() -> Check {
    let p = ModelOperator::hd_minus_ix(0.0, 40);
    let cfg = QuasimodeConfig {
        xi0: 0.0,
        cutoff: Cutoff::new(1.0, 2.0)?,
        ladder: QuasimodeConfig::default_ladder(),
        k_out: 6,
        degree: 40,
        c_real: 1.0,
    };
    let rep = quasimode(&p, C64::new(0.0, 0.0), &cfg)?;
    let ratio = rep
        .norm_ratio(0.05)
        .ok_or_else(|| CliError::usage("h = 0.05 missing from the ladder"))?;
    Ok((
        (-0.625..=-0.375).contains(&rep.slope_corrected) && (ratio - 1.0).abs() <= 5e-2,
        format!(
            "slope {:.3} (prefactor-corrected; plain fit {:.3}, predicted {:.3}); ‖u_h‖/h^(1/4) = {ratio:.4} at h = 0.05",
            rep.slope_corrected, rep.slope, rep.predicted_slope
        ),
    ))
}

fn wavefront_detector() -> Check {
    let grid = ProbeGridSpec::default();
    let (ys, etas) = (&grid.ys, &grid.etas);
    let lad = default_ladder();
    let phi = FBIPhase::bargmann(1);
    let mut notes = Vec::new();
    let mut ok = true;
    for u in [TestDistribution::Delta { y0: 0.0 }, TestDistribution::Heaviside] {
        let s = wavefront::scan(&u, &phi, ys, etas, &lad)?;
        let column = s.in_wf().count() == etas.len() && s.projection == [0.0];
        ok &= column;
        notes.push(format!(
            "{} {}",
            u.name(),
            if column { "on y=0 only" } else { "off column" }
        ));
    }
    for u in [TestDistribution::Gaussian { a: 1.0 }, TestDistribution::Constant] {
        let count = wavefront::scan(&u, &phi, ys, etas, &lad)?.in_wf().count();
        ok &= count == 0;
        notes.push(format!("{} {count} detections", u.name()));
    }
    let probes = wavefront::probe_grid(ys, etas)?;
    let zoo = [
        TestDistribution::Delta { y0: 0.0 },
        TestDistribution::Heaviside,
        TestDistribution::Abs,
        TestDistribution::Gaussian { a: 1.0 },
        TestDistribution::Constant,
    ];
    let (mut agree, mut total) = (0usize, 0usize);
    for u in &zoo {
        let rep = wavefront::phase_independence(
            std::slice::from_ref(u),
            &probes,
            &phi,
            &normal_form(),
            &lad,
        )?;
        agree += rep.rows.iter().filter(|(c, _)| c[0] == c[1]).count();
        total += rep.rows.len();
    }
    ok &= agree == total;
    notes.push(format!("cross-phase agreement {agree}/{total}"));
    let demo = wavefront::elliptic_regularity_demo(
        &TestDistribution::Heaviside,
        |y, eta| y * eta,
        &phi,
        ys,
        etas,
        &lad,
    )?;
    let detections = demo
        .scan
        .reports
        .iter()
        .filter(|r| r.classification == Classification::InWF)
        .count();
    ok &= demo.holds() && detections > 0;
    notes.push(format!(
        "yD_y demo {}/{detections} detections on yη = 0",
        detections - demo.off_characteristic.len()
    ));
    Ok((ok, notes.join("; ")))
}

fn random_cmat(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// `P` symmetric, `L = AA* + εI`.
fn random_weight(rng: &mut ChaCha8Rng, n: usize, eps: f64) -> Result<RealQuadraticWeight, CliError> {
    let s = rng.gen_range(0.0..4.0);
    let p = random_cmat(rng, n);
    let p = (&p + p.transpose()) * C64::new(0.5 * s, 0.0);
    let a = random_cmat(rng, n);
    let l = &a * a.adjoint() + CMat::identity(n, n) * C64::new(eps, 0.0);
    Ok(RealQuadraticWeight::new(p, l)?)
}

fn quadratic_forms(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9f);
    let mut cif1 = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let qf = random_weight(&mut rng, n, 0.0)?.to_real_form();
        let (mp, mm) = signature(&qf);
        if qf.is_psh() && mp >= mm {
            cif1 += 1;
        }
    }
    let mut cif3 = 0;
    let mut tried = 0;
    while tried < 100 {
        let m = rng.gen_range(2..=6);
        let d = rng.gen_range(1..m);
        let a = RMat::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
        let qm = &a + a.transpose();
        // Splits with a degenerate fiber block are redrawn.
        let Ok(pc) = partial_critical(&qm, d) else {
            continue;
        };
        tried += 1;
        let (f, r, g) = (pc.signature_full, pc.signature_reduced, pc.signature_fiber);
        if f.0 == r.0 + g.0 && f.1 == r.1 + g.1 {
            cif3 += 1;
        }
    }
    let mut neg = 0;
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let eps = rng.gen_range(0.05..1.0);
        let g = gamma_for_weight(&random_weight(&mut rng, n, eps)?)?;
        if classify_positivity(&LagrangianPlane::fiber(n), &g)?.class == Positivity::Negative {
            neg += 1;
        }
    }
    Ok((
        cif1 == 100 && cif3 == 100 && neg == 20,
        format!("m₊ ≥ m₋ {cif1}/100; signature additivity {cif3}/100; fiber negativity {neg}/20"),
    ))
}
