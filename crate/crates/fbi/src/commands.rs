//! Subcommand implementations: each turns a validated configuration into tables and a summary.

use fbi_core::cas::{compose, elliptic_inverse, symbol_profile, DomainFamily, FormalSymbol};
use fbi_core::phase::FBIPhase;
use fbi_core::series::Series;
use fbi_core::transform::TestDistribution;
use fbi_core::wavefront::{self, decay_rate, default_ladder, DecayReport, ProbePoint};
use fbi_core::wkb::{quasimode, Cutoff, ModelOperator, QuasimodeConfig};
use fbi_core::C64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::acceptance;
use crate::config::{RunConfig, WkbSpec};
use crate::dto::{cx, from_cx, DistributionSpec, FormalSymbolDto, PhaseSpec};
use crate::error::CliError;
use crate::experiments::*;
use crate::output::{num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolOp {
    Compose,
    Invert,
    Norms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavefrontOp {
    Probe,
    Scan,
    Independence,
    Propagation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Unitarity,
    Bergman,
    Egorov,
    QuantMult,
    StationaryPhase,
    FourierPair,
    Symbol(SymbolOp),
    Wkb,
    Wavefront(WavefrontOp),
    Acceptance,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Unitarity => "unitarity",
            Command::Bergman => "bergman",
            Command::Egorov => "egorov",
            Command::QuantMult => "quantmult",
            Command::StationaryPhase => "stationary-phase",
            Command::FourierPair => "fourier-pair",
            Command::Symbol(SymbolOp::Compose) => "symbol-compose",
            Command::Symbol(SymbolOp::Invert) => "symbol-invert",
            Command::Symbol(SymbolOp::Norms) => "symbol-norms",
            Command::Wkb => "wkb",
            Command::Wavefront(WavefrontOp::Probe) => "wavefront-probe",
            Command::Wavefront(WavefrontOp::Scan) => "wavefront-scan",
            Command::Wavefront(WavefrontOp::Independence) => "wavefront-independence",
            Command::Wavefront(WavefrontOp::Propagation) => "wavefront-propagation",
            Command::Acceptance => "acceptance",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub summary: Value,
    /// False when a checked property failed; maps to exit code 1.
    pub passed: bool,
    /// Human-readable lines for stdout.
    pub lines: Vec<String>,
}

impl Outcome {
    fn new(tables: Vec<Table>, summary: Value, passed: bool) -> Self {
        Outcome {
            tables,
            summary,
            passed,
            lines: Vec::new(),
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    if let Some(tag) = &cfg.command {
        if tag != cmd.name() {
            return Err(CliError::usage(format!(
                "config is tagged for '{tag}' but '{}' was requested",
                cmd.name()
            )));
        }
    }
    match cmd {
        Command::Unitarity => unitarity(cfg),
        Command::Bergman => bergman(cfg),
        Command::Egorov => egorov(cfg),
        Command::QuantMult => quantmult(cfg),
        Command::StationaryPhase => stationary(cfg),
        Command::FourierPair => fourier(cfg),
        Command::Symbol(op) => symbol(op, cfg),
        Command::Wkb => wkb(cfg),
        Command::Wavefront(op) => wave(op, cfg),
        Command::Acceptance => accept(cfg),
    }
}

fn require_n1(cfg: &RunConfig, what: &str) -> Result<(), CliError> {
    if cfg.n != 1 {
        return Err(CliError::usage(format!("{what} runs with n = 1")));
    }
    Ok(())
}

fn unitarity(cfg: &RunConfig) -> Result<Outcome, CliError> {
    require_n1(cfg, "unitarity")?;
    let phi = cfg.phase_or_bargmann().build(1)?;
    let inputs = match &cfg.distribution {
        Some(d) => vec![d.clone()],
        None => vec![
            DistributionSpec::Gaussian { a: 1.0 },
            DistributionSpec::Gaussian { a: 2.0 },
            DistributionSpec::YGaussian { a: 1.0 },
        ],
    };
    let ladder = cfg.ladder_or(&[0.2, 0.1, 0.05]);
    let grid = cfg.grid.clone().unwrap_or_default();
    let mut jobs = Vec::new();
    for d in &inputs {
        for &h in &ladder {
            jobs.push((d.label(), d.build()?, h));
        }
    }
    let ratios = jobs
        .par_iter()
        .map(|(_, u, h)| isometry_ratio(&phi, u, *h, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new("ratios", &["distribution", "h", "ratio", "deviation"]);
    let mut worst = 0.0f64;
    for ((label, _, h), r) in jobs.iter().zip(&ratios) {
        worst = worst.max((r - 1.0).abs());
        t.push(vec![label.clone(), num(*h), num(*r), num((r - 1.0).abs())]);
    }
    let passed = worst <= 1e-3;
    Ok(Outcome::new(
        vec![t],
        json!({"max_deviation": worst, "tolerance": 1e-3, "passed": passed}),
        passed,
    ))
}

fn bergman(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let h = cfg.ladder_or(&[0.1])[0];
    let ids = bergman_identities(h)?;
    let mut t = Table::new(
        "identities",
        &["function", "x_re", "x_im", "value_re", "value_im", "expected_re", "expected_im", "error", "tol"],
    );
    for c in &ids {
        t.push(vec![
            c.label.into(),
            num(c.x.re),
            num(c.x.im),
            num(c.value.re),
            num(c.value.im),
            num(c.expected.re),
            num(c.expected.im),
            num(c.error),
            num(c.tol),
        ]);
    }
    let gaps = bergman_adjoint_gaps(h)?;
    let mut g = Table::new("adjoint", &["perturbation", "relative_gap", "tol"]);
    for (label, gap) in &gaps {
        g.push(vec![label.to_string(), num(*gap), num(1e-2)]);
    }
    let passed = ids.iter().all(|c| c.pass()) && gaps.iter().all(|g| g.1 <= 1e-2);
    Ok(Outcome::new(vec![t, g], json!({"h": h, "passed": passed}), passed))
}

fn egorov(cfg: &RunConfig) -> Result<Outcome, CliError> {
    require_n1(cfg, "egorov")?;
    let phi = cfg.phase_or_bargmann().build(1)?;
    let u = cfg
        .distribution
        .clone()
        .unwrap_or(DistributionSpec::Gaussian { a: 1.0 })
        .build()?;
    let mut t = Table::new("residuals", &["h", "symbol", "residual"]);
    let mut worst = 0.0f64;
    for h in cfg.ladder_or(&[0.1]) {
        for (label, r) in egorov_residuals(&phi, &u, h)? {
            worst = worst.max(r);
            t.push(vec![num(h), label.into(), num(r)]);
        }
    }
    let passed = worst <= 1e-2;
    Ok(Outcome::new(
        vec![t],
        json!({"max_residual": worst, "tolerance": 1e-2, "passed": passed}),
        passed,
    ))
}

fn quantmult(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ladder = cfg.ladder_or(&acceptance::QUANT_MULT_LADDER);
    let mut t = Table::new("residuals", &["symbol", "h", "residual"]);
    let mut slopes = Vec::new();
    for (label, power) in [("xi", 1), ("xi^2", 2)] {
        let a = fiber_symbol(power)?;
        let r = ladder
            .par_iter()
            .map(|&h| quant_mult(&a, h))
            .collect::<Result<Vec<_>, _>>()?;
        for (h, x) in ladder.iter().zip(&r) {
            t.push(vec![label.into(), num(*h), num(*x)]);
        }
        slopes.push(residual_slope(&ladder, &r));
    }
    // The checked property is the slope for a = ξ; it is undefined when that residual vanishes.
    let passed = slopes[0].is_some_and(|s| (0.8..=1.3).contains(&s));
    Ok(Outcome::new(
        vec![t],
        json!({"slope_xi": slopes[0], "slope_xi2": slopes[1], "window": [0.8, 1.3], "passed": passed}),
        passed,
    ))
}

fn stationary(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ladder = cfg.ladder_or(&[0.2, 0.1, 0.05]);
    let rows = stationary_phase_battery(&ladder, 1..=6)?;
    let mut t = Table::new("remainders", &["function", "h", "order", "remainder", "bound", "within"]);
    for r in &rows {
        t.push(vec![
            r.name.into(),
            num(r.h),
            r.order.to_string(),
            num(r.remainder),
            num(r.bound),
            (r.remainder <= r.bound).to_string(),
        ]);
    }
    let poly = polynomial_moment_error(0.07)?;
    let passed = rows.iter().all(|r| r.remainder <= r.bound) && poly <= 4.0 * f64::EPSILON;
    Ok(Outcome::new(
        vec![t],
        json!({"polynomial_relative_error": poly, "passed": passed}),
        passed,
    ))
}

fn fourier(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut t = Table::new("gf_one", &["h", "re", "im", "error"]);
    let mut worst = 0.0f64;
    for h in cfg.ladder_or(&[0.05]) {
        let v = fourier_of_one(h)?;
        let e = (v - C64::new(1.0, 0.0)).norm();
        worst = worst.max(e);
        t.push(vec![num(h), num(v.re), num(v.im), num(e)]);
    }
    let passed = worst <= 1e-3;
    Ok(Outcome::new(
        vec![t],
        json!({"weight": "Re x * Im x", "max_error": worst, "tolerance": 1e-3, "passed": passed}),
        passed,
    ))
}

fn symbol(op: SymbolOp, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = cfg
        .symbol
        .as_ref()
        .ok_or_else(|| CliError::usage("symbol commands need a 'symbol' section"))?;
    let p = spec.p.to_symbol()?;
    let dom = DomainFamily::new(p.base.clone(), spec.t0, spec.xi_radius)?;
    let k_default = p.coeffs.len() - 1;
    match op {
        SymbolOp::Compose => {
            let q = spec
                .q
                .as_ref()
                .ok_or_else(|| CliError::usage("symbol compose needs 'q'"))?
                .to_symbol()?;
            let k = spec.k_out.unwrap_or(k_default.min(q.coeffs.len() - 1));
            let r = compose(&p, &q, k)?;
            Ok(Outcome::new(
                vec![coefficient_table(&r)],
                json!({"symbol": FormalSymbolDto::from_symbol(&r), "rounding": r.rounding}),
                true,
            ))
        }
        SymbolOp::Invert => {
            let k = spec.k_out.unwrap_or(k_default);
            let q = elliptic_inverse(&p, k, &dom)?;
            let pq = compose(&p, &q, k)?;
            let mut t = Table::new("residual", &["order", "max_coeff_gap"]);
            let mut worst = 0.0f64;
            for (j, c) in pq.coeffs.iter().enumerate() {
                let keep = p.degree_cap.saturating_sub(j as u32);
                let target = if j == 0 {
                    fbi_core::poly::Poly::one(c.nvars())
                } else {
                    fbi_core::poly::Poly::zero(c.nvars())
                };
                let gap = c.truncate(keep).max_abs_coeff_diff(&target);
                worst = worst.max(gap);
                t.push(vec![j.to_string(), num(gap)]);
            }
            let passed = worst <= 1e-9 + 10.0 * pq.rounding;
            Ok(Outcome::new(
                vec![coefficient_table(&q), t],
                json!({"symbol": FormalSymbolDto::from_symbol(&q), "max_gap": worst, "passed": passed}),
                passed,
            ))
        }
        SymbolOp::Norms => {
            let prof = symbol_profile(&p, &dom)?;
            let mut t = Table::new("profile", &["k", "f_k"]);
            for (k, f) in prof.f.iter().enumerate() {
                t.push(vec![k.to_string(), num(*f)]);
            }
            let mut r = Table::new("rho_norms", &["rho", "norm"]);
            for &rho in &spec.rho {
                r.push(vec![num(rho), num(prof.rho_norm(rho))]);
            }
            Ok(Outcome::new(vec![t, r], json!({"profile": prof.f}), true))
        }
    }
}

fn coefficient_table(s: &FormalSymbol<C64>) -> Table {
    let mut t = Table::new("coefficients", &["order", "exponents", "re", "im"]);
    for (k, p) in s.coeffs.iter().enumerate() {
        for (e, c) in p.terms() {
            let exps: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            t.push(vec![k.to_string(), exps.join(" "), num(c.re), num(c.im)]);
        }
    }
    t
}

fn model_operator(w: &WkbSpec) -> Result<ModelOperator, CliError> {
    match &w.operator {
        None => Ok(ModelOperator::hd_minus_ix(w.x0, w.degree)),
        Some(ops) => {
            let coeffs = ops
                .iter()
                .map(|by_h| {
                    by_h.iter()
                        .map(|taylor| {
                            Series::new(taylor.iter().map(|c| from_cx(*c)).collect(), w.degree)
                        })
                        .collect()
                })
                .collect();
            Ok(ModelOperator::new(w.x0, coeffs)?)
        }
    }
}

fn wkb(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let w = cfg.wkb.clone().unwrap_or_default();
    let p = model_operator(&w)?;
    let qc = QuasimodeConfig {
        xi0: w.xi0,
        cutoff: Cutoff::new(w.r_in, w.r_out)?,
        ladder: cfg.ladder_or(&QuasimodeConfig::default_ladder()),
        k_out: w.k_out,
        degree: w.degree,
        c_real: w.c_real,
    };
    let rep = quasimode(&p, from_cx(w.z0), &qc)?;
    let mut t = Table::new("ladder", &["h", "residual", "norm", "norm_ratio"]);
    for pt in &rep.ladder {
        t.push(vec![
            num(pt.h),
            num(pt.residual),
            num(pt.norm),
            num(pt.norm / pt.h.powf(0.25)),
        ]);
    }
    let pred = rep.predicted_slope;
    let passed = (rep.slope_corrected - pred).abs() <= 0.25 * pred.abs();
    Ok(Outcome::new(
        vec![t],
        json!({
            "z0": cx(rep.z0),
            "x0": rep.x0,
            "cutoff": rep.cutoff,
            "r_in": rep.r_in,
            "r_out": rep.r_out,
            "slope": rep.slope,
            "slope_corrected": rep.slope_corrected,
            "predicted_slope": pred,
            "passed": passed,
        }),
        passed,
    ))
}

fn rate_str(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        num(x)
    }
}

fn input_factors(cfg: &RunConfig, default: DistributionSpec) -> Result<Vec<TestDistribution>, CliError> {
    let first = cfg.distribution.clone().unwrap_or(default).build()?;
    let mut u = vec![first];
    u.resize(cfg.n, TestDistribution::Constant);
    Ok(u)
}

fn report_json(r: &DecayReport) -> Value {
    json!({
        "y0": r.probe.y0,
        "eta0": r.probe.eta0,
        "x0": r.x0.iter().map(|z| cx(*z)).collect::<Vec<_>>(),
        "rate": if r.rate.is_finite() { json!(r.rate) } else { json!("inf") },
        "sigma": r.sigma,
        "tau": r.tau,
        "underflow": r.underflow,
        "classification": r.classification.as_str(),
    })
}

fn wave(op: WavefrontOp, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ladder = cfg.ladder_or(&default_ladder());
    match op {
        WavefrontOp::Probe => {
            let phi = cfg.phase_or_bargmann().build(cfg.n)?;
            let (y0, eta0) = match &cfg.probe {
                Some(p) => (p.y0.clone(), p.eta0.clone()),
                None => (vec![0.0; cfg.n], {
                    let mut e = vec![0.0; cfg.n];
                    e[0] = 1.0;
                    e
                }),
            };
            let probe = ProbePoint::new(y0, eta0)?;
            let u = input_factors(cfg, DistributionSpec::Heaviside)?;
            let tau = wavefront::threshold(&phi, std::slice::from_ref(&probe), &ladder)?;
            let r = decay_rate(&u, &probe, &phi, &ladder, tau)?;
            let mut t = Table::new("decay", &["h", "d"]);
            for p in &r.ladder {
                t.push(vec![num(p.h), rate_str(p.d)]);
            }
            Ok(Outcome::new(vec![t], report_json(&r), true))
        }
        WavefrontOp::Scan => {
            require_n1(cfg, "wavefront scan")?;
            let phi = cfg.phase_or_bargmann().build(1)?;
            let spec = cfg.distribution.clone().unwrap_or(DistributionSpec::Heaviside);
            let u = [spec.build()?];
            let grid = cfg.probes.clone().unwrap_or_default();
            let probes = wavefront::probe_grid(&grid.ys, &grid.etas)?;
            let tau = wavefront::threshold(&phi, &probes, &ladder)?;
            let reports = probes
                .par_iter()
                .map(|p| decay_rate(&u, p, &phi, &ladder, tau))
                .collect::<Result<Vec<_>, _>>()?;
            let mut t = Table::new("scan", &["y", "eta", "rate", "sigma", "classification"]);
            for r in &reports {
                t.push(vec![
                    num(r.probe.y0[0]),
                    num(r.probe.eta0[0]),
                    rate_str(r.rate),
                    num(r.sigma),
                    r.classification.as_str().into(),
                ]);
            }
            let projection = wavefront::projection(&reports);
            Ok(Outcome::new(
                vec![t],
                json!({"distribution": spec.label(), "tau": tau, "projection": projection}),
                true,
            ))
        }
        WavefrontOp::Independence => {
            require_n1(cfg, "wavefront independence")?;
            let phi1 = FBIPhase::bargmann(1);
            let phi2 = cfg
                .phase
                .clone()
                .unwrap_or(PhaseSpec::NormalForm {
                    a: vec![vec![[0.0, -1.0]]],
                    b: vec![vec![1.0]],
                })
                .build(1)?;
            let zoo = match &cfg.distribution {
                Some(d) => vec![d.clone()],
                None => vec![
                    DistributionSpec::Delta { y0: 0.0 },
                    DistributionSpec::Heaviside,
                    DistributionSpec::Abs,
                    DistributionSpec::Gaussian { a: 1.0 },
                    DistributionSpec::Constant,
                ],
            };
            let grid = cfg.probes.clone().unwrap_or_default();
            let probes = wavefront::probe_grid(&grid.ys, &grid.etas)?;
            let reps = zoo
                .par_iter()
                .map(|d| {
                    wavefront::phase_independence(&[d.build()?], &probes, &phi1, &phi2, &ladder)
                        .map_err(CliError::from)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut t = Table::new(
                "agreement",
                &["distribution", "y", "eta", "class_1", "class_2", "rate_1", "rate_2"],
            );
            let mut agree = true;
            for (d, rep) in zoo.iter().zip(&reps) {
                agree &= rep.agree();
                for (p, (c, r)) in probes.iter().zip(&rep.rows) {
                    t.push(vec![
                        d.label(),
                        num(p.y0[0]),
                        num(p.eta0[0]),
                        c[0].as_str().into(),
                        c[1].as_str().into(),
                        rate_str(r[0]),
                        rate_str(r[1]),
                    ]);
                }
            }
            Ok(Outcome::new(vec![t], json!({"agree": agree}), agree))
        }
        WavefrontOp::Propagation => {
            if cfg.n != 2 {
                return Err(CliError::usage("wavefront propagation runs with n = 2"));
            }
            let phi = cfg.phase_or_bargmann().build(2)?;
            let line = cfg.line.clone().unwrap_or_default();
            let f = cfg
                .distribution
                .clone()
                .unwrap_or(DistributionSpec::Heaviside)
                .build()?;
            let rep = wavefront::propagation_smoke(&f, &phi, &line.ts, line.eta, &ladder)?;
            let mut t = Table::new("line", &["t", "rate", "classification"]);
            for (tv, r) in line.ts.iter().zip(&rep.reports) {
                t.push(vec![num(*tv), rate_str(r.rate), r.classification.as_str().into()]);
            }
            let constant = rep.constant();
            Ok(Outcome::new(
                vec![t],
                json!({"tau": rep.tau, "constant": constant}),
                constant,
            ))
        }
    }
}

fn accept(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let results = acceptance::run_all(cfg.seed.unwrap_or(0));
    let mut t = Table::new("criteria", &["criterion", "title", "status", "detail"]);
    for r in &results {
        t.push(vec![
            r.id.to_string(),
            r.title.into(),
            if r.pass { "PASS" } else { "FAIL" }.into(),
            r.detail.clone(),
        ]);
    }
    let passed = results.iter().all(|r| r.pass);
    let mut out = Outcome::new(
        vec![t],
        json!({"passed": passed, "failed": results.iter().filter(|r| !r.pass).map(|r| r.id).collect::<Vec<_>>()}),
        passed,
    );
    out.lines = results.iter().map(|r| r.line()).collect();
    Ok(out)
}
