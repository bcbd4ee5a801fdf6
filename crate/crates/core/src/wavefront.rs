//! Analytic wavefront detection from the exponential decay of FBI transforms.
//!
//! At a probe `(y₀, η₀)` the transform is evaluated at `x₀ = π_x κ_φ(y₀, η₀)`
//! along an h-ladder. The weighted decay `d(h) = −h log(e^{−Φ(x₀)/h}|Tu(x₀)|)`
//! tends to the exponential rate, read off as the intercept of a line fit in `h`.
//! A point is classified as lying in the wavefront set when the rate does not
//! exceed a threshold calibrated on the analytic input `u = 1`.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::fit::weighted_least_squares;
use crate::phase::{kappa_matrix, weight_from_phase, FBIPhase, PhaseWeight};
use crate::transform::{fbi_value_log, TestDistribution};
use crate::{Error, Result, C64};

const MODULE: &str = "wavefront";

/// Offset of the 3×3 stencil in the real and imaginary directions of each coordinate.
pub const STENCIL_STEP: f64 = 0.05;
/// Ratio of the classification threshold to the noise floor.
pub const TAU_FACTOR: f64 = 3.0;
/// Step at which `d(h)` is taken as the exact rate when measuring the noise floor.
const REFERENCE_H: f64 = 1e-9;

pub fn default_ladder() -> Vec<f64> {
    vec![0.2, 0.14, 0.1, 0.07, 0.05]
}

/// Phase-space probe `(y₀, η₀)` with `η₀ ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePoint {
    pub y0: Vec<f64>,
    pub eta0: Vec<f64>,
}

impl ProbePoint {
    pub fn new(y0: Vec<f64>, eta0: Vec<f64>) -> Result<Self> {
        if y0.is_empty() || y0.len() != eta0.len() {
            return Err(Error::dim(MODULE, "y₀ and η₀ must have the same length n ≥ 1"));
        }
        if eta0.iter().all(|e| *e == 0.0) {
            return Err(Error::input(MODULE, "η₀ must be nonzero"));
        }
        if y0.iter().chain(&eta0).any(|v| !v.is_finite()) {
            return Err(Error::input(MODULE, "probe coordinates must be finite"));
        }
        Ok(ProbePoint { y0, eta0 })
    }

    pub fn n(&self) -> usize {
        self.y0.len()
    }

    /// `π_x κ_φ(y₀, η₀)`.
    pub fn x0(&self, phi: &FBIPhase) -> Result<Vec<C64>> {
        let n = phi.n();
        if self.n() != n {
            return Err(Error::dim(MODULE, "probe and phase dimensions differ"));
        }
        let k = kappa_matrix(phi)?;
        let v: Vec<C64> = self
            .y0
            .iter()
            .chain(&self.eta0)
            .map(|&t| C64::new(t, 0.0))
            .collect();
        Ok(k.apply(&v)[..n].to_vec())
    }

    /// The dilated probe `(y₀, s·η₀)`.
    pub fn dilate(&self, s: f64) -> Result<Self> {
        ProbePoint::new(self.y0.clone(), self.eta0.iter().map(|e| e * s).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    InWF,
    NotInWF,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::InWF => "in_WF",
            Classification::NotInWF => "not_in_WF",
        }
    }

    fn of(rate: f64, tau: f64) -> Self {
        if rate <= tau {
            Classification::InWF
        } else {
            Classification::NotInWF
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPoint {
    pub h: f64,
    /// `−h log(e^{−Φ(x₀)/h}|Tu(x₀; h)|)`; `+∞` when the transform vanishes.
    pub d: f64,
}

/// Line fit of `d(h)` against `h` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// Intercept of the fit, unclamped; `+∞` on underflow.
    pub intercept: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub probe: ProbePoint,
    pub x0: Vec<C64>,
    /// Decay profile at `x₀` itself, strictly decreasing in `h`.
    pub ladder: Vec<DecayPoint>,
    /// Fit at `x₀`.
    pub center: RateFit,
    /// Largest fitted rate over the stencil, clamped at zero.
    pub rate: f64,
    /// Standard error of the intercept that attains `rate`.
    pub sigma: f64,
    /// True when some stencil point underflowed.
    pub underflow: bool,
    pub tau: f64,
    pub classification: Classification,
}

fn check_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.len() < 3 {
        return Err(Error::input(MODULE, "ladder needs at least three steps"));
    }
    if ladder.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        return Err(Error::input(MODULE, "ladder steps must be positive"));
    }
    if ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::input(MODULE, "ladder must be strictly decreasing"));
    }
    Ok(())
}

fn decay_profile(
    u: &[TestDistribution],
    phi: &FBIPhase,
    w: &PhaseWeight,
    ladder: &[f64],
    x: &[C64],
) -> Result<Vec<DecayPoint>> {
    let big_phi = w.weight.eval(x);
    ladder
        .iter()
        .map(|&h| {
            let v = fbi_value_log(u, phi, h, x)?;
            let d = if v.is_zero() {
                f64::INFINITY
            } else {
                -h * v.log_abs() + big_phi
            };
            Ok(DecayPoint { h, d })
        })
        .collect()
}

/// Intercept of the least-squares line through `(h, d(h))`, the two smallest `h` weighted double.
pub fn fit_rate(profile: &[DecayPoint]) -> Result<RateFit> {
    if profile.iter().any(|p| p.d == f64::INFINITY) {
        return Ok(RateFit {
            intercept: f64::INFINITY,
            sigma: 0.0,
        });
    }
    if profile.iter().any(|p| !p.d.is_finite()) {
        return Err(Error::numerical(MODULE, "non-finite decay value"));
    }
    let m = profile.len();
    let design: Vec<Vec<f64>> = profile.iter().map(|p| vec![1.0, p.h]).collect();
    let d: Vec<f64> = profile.iter().map(|p| p.d).collect();
    let w: Vec<f64> = (0..m).map(|i| if i + 2 >= m { 2.0 } else { 1.0 }).collect();
    let f = weighted_least_squares(&design, &d, &w)?;
    Ok(RateFit {
        intercept: f.coefficients[0],
        sigma: f.std_errors[0],
    })
}

/// `x₀` and its neighbours shifted by `±δ` and `±iδ` (and the four diagonals), one coordinate at a time.
fn stencil(x0: &[C64]) -> Vec<Vec<C64>> {
    let mut out = vec![x0.to_vec()];
    for j in 0..x0.len() {
        for a in [-1.0, 0.0, 1.0] {
            for b in [-1.0, 0.0, 1.0] {
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                let mut x = x0.to_vec();
                x[j] += C64::new(a, b) * STENCIL_STEP;
                out.push(x);
            }
        }
    }
    out
}

/// Decay report at one probe against a given threshold `τ`.
pub fn decay_rate(
    u: &[TestDistribution],
    probe: &ProbePoint,
    phi: &FBIPhase,
    ladder: &[f64],
    tau: f64,
) -> Result<DecayReport> {
    check_ladder(ladder)?;
    if u.len() != phi.n() {
        return Err(Error::dim(MODULE, "one input factor per dimension"));
    }
    let w = weight_from_phase(phi)?;
    let x0 = probe.x0(phi)?;
    let pts = stencil(&x0);
    let profile = decay_profile(u, phi, &w, ladder, &pts[0])?;
    let center = fit_rate(&profile)?;
    let mut best = center;
    for x in &pts[1..] {
        let f = fit_rate(&decay_profile(u, phi, &w, ladder, x)?)?;
        if f.intercept > best.intercept {
            best = f;
        }
    }
    let rate = best.intercept.max(0.0);
    Ok(DecayReport {
        probe: probe.clone(),
        x0,
        ladder: profile,
        center,
        rate,
        sigma: best.sigma,
        underflow: rate == f64::INFINITY,
        tau,
        classification: Classification::of(rate, tau),
    })
}

/// Largest gap between the fitted and the exact rate of `u = 1` over the probes.
///
/// For `u = 1` the transform has a closed form, so `d` at a vanishing step is
/// its exact rate; the gap measures the bias the polynomial prefactors leave in the fit.
pub fn noise_floor(phi: &FBIPhase, probes: &[ProbePoint], ladder: &[f64]) -> Result<f64> {
    check_ladder(ladder)?;
    let w = weight_from_phase(phi)?;
    let one = vec![TestDistribution::Constant; phi.n()];
    let mut floor = 0.0f64;
    for p in probes {
        let x0 = p.x0(phi)?;
        let fit = fit_rate(&decay_profile(&one, phi, &w, ladder, &x0)?)?;
        let exact = decay_profile(&one, phi, &w, &[REFERENCE_H], &x0)?[0].d;
        floor = floor.max((fit.intercept - exact).abs());
    }
    Ok(floor)
}

pub fn threshold(phi: &FBIPhase, probes: &[ProbePoint], ladder: &[f64]) -> Result<f64> {
    Ok(TAU_FACTOR * noise_floor(phi, probes, ladder)?)
}

/// Probes on the product grid `ys × etas` (n = 1), row-major in `y`.
pub fn probe_grid(ys: &[f64], etas: &[f64]) -> Result<Vec<ProbePoint>> {
    let mut out = Vec::with_capacity(ys.len() * etas.len());
    for &y in ys {
        for &e in etas {
            out.push(ProbePoint::new(vec![y], vec![e])?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub tau: f64,
    pub reports: Vec<DecayReport>,
    /// Sorted distinct `y₀` of the points classified in the wavefront set.
    pub projection: Vec<f64>,
}

impl ScanReport {
    pub fn in_wf(&self) -> impl Iterator<Item = &DecayReport> {
        self.reports
            .iter()
            .filter(|r| r.classification == Classification::InWF)
    }
}

/// Decay reports over a probe grid for one-dimensional `u`, with `τ` calibrated on the same probes.
pub fn scan(
    u: &TestDistribution,
    phi: &FBIPhase,
    ys: &[f64],
    etas: &[f64],
    ladder: &[f64],
) -> Result<ScanReport> {
    if phi.n() != 1 {
        return Err(Error::dim(MODULE, "scan works in one dimension"));
    }
    let probes = probe_grid(ys, etas)?;
    let tau = threshold(phi, &probes, ladder)?;
    let reports = probes
        .iter()
        .map(|p| decay_rate(core::slice::from_ref(u), p, phi, ladder, tau))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport {
        tau,
        projection: projection(&reports),
        reports,
    })
}

pub fn projection(reports: &[DecayReport]) -> Vec<f64> {
    let mut ys: Vec<f64> = reports
        .iter()
        .filter(|r| r.classification == Classification::InWF)
        .map(|r| r.probe.y0[0])
        .collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub tau: [f64; 2],
    /// Per probe: the two classifications and the two rates.
    pub rows: Vec<([Classification; 2], [f64; 2])>,
}

impl IndependenceReport {
    pub fn agree(&self) -> bool {
        self.rows.iter().all(|(c, _)| c[0] == c[1])
    }

    pub fn agreement(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        let n = self.rows.iter().filter(|(c, _)| c[0] == c[1]).count();
        n as f64 / self.rows.len() as f64
    }
}

/// Classifies `u` at each probe under two phases, each with its own `κ` and `τ`.
pub fn phase_independence(
    u: &[TestDistribution],
    probes: &[ProbePoint],
    phi1: &FBIPhase,
    phi2: &FBIPhase,
    ladder: &[f64],
) -> Result<IndependenceReport> {
    let tau = [
        threshold(phi1, probes, ladder)?,
        threshold(phi2, probes, ladder)?,
    ];
    let rows = probes
        .iter()
        .map(|p| {
            let a = decay_rate(u, p, phi1, ladder, tau[0])?;
            let b = decay_rate(u, p, phi2, ladder, tau[1])?;
            Ok(([a.classification, b.classification], [a.rate, b.rate]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IndependenceReport { tau, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationReport {
    pub tau: f64,
    pub reports: Vec<DecayReport>,
}

impl PropagationReport {
    /// Whether every probe received the same classification.
    pub fn constant(&self) -> bool {
        self.reports
            .windows(2)
            .all(|w| w[0].classification == w[1].classification)
    }
}

/// Classifies `f ⊗ 1` on R² along the line `{(0, t)}` with fixed covector `eta`.
pub fn propagation_smoke(
    f: &TestDistribution,
    phi: &FBIPhase,
    ts: &[f64],
    eta: [f64; 2],
    ladder: &[f64],
) -> Result<PropagationReport> {
    if phi.n() != 2 {
        return Err(Error::dim(MODULE, "propagation check works on R²"));
    }
    let probes = ts
        .iter()
        .map(|&t| ProbePoint::new(vec![0.0, t], eta.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let tau = threshold(phi, &probes, ladder)?;
    let u = [f.clone(), TestDistribution::Constant];
    let reports = probes
        .iter()
        .map(|p| decay_rate(&u, p, phi, ladder, tau))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropagationReport { tau, reports })
}

/// Fraction of probes whose classification survives `η₀ ↦ 2η₀`.
pub fn conicity(
    u: &[TestDistribution],
    probes: &[ProbePoint],
    phi: &FBIPhase,
    ladder: &[f64],
) -> Result<f64> {
    let dilated = probes
        .iter()
        .map(|p| p.dilate(2.0))
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<ProbePoint> = probes.iter().chain(&dilated).cloned().collect();
    let tau = threshold(phi, &all, ladder)?;
    let mut same = 0;
    for (p, q) in probes.iter().zip(&dilated) {
        let a = decay_rate(u, p, phi, ladder, tau)?;
        let b = decay_rate(u, q, phi, ladder, tau)?;
        if a.classification == b.classification {
            same += 1;
        }
    }
    Ok(if probes.is_empty() {
        1.0
    } else {
        same as f64 / probes.len() as f64
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticDemo {
    pub scan: ScanReport,
    /// Detected points `(y₀, η₀)` with `|p(y₀, η₀)| > tol`.
    pub off_characteristic: Vec<(f64, f64)>,
}

impl EllipticDemo {
    pub fn holds(&self) -> bool {
        self.off_characteristic.is_empty()
    }
}

/// Scans `u` and checks every detection against the characteristic set of the principal symbol `p`.
pub fn elliptic_regularity_demo(
    u: &TestDistribution,
    p: impl Fn(f64, f64) -> f64,
    phi: &FBIPhase,
    ys: &[f64],
    etas: &[f64],
    ladder: &[f64],
) -> Result<EllipticDemo> {
    let scan = scan(u, phi, ys, etas, ladder)?;
    let off_characteristic = scan
        .in_wf()
        .map(|r| (r.probe.y0[0], r.probe.eta0[0]))
        .filter(|&(y, e)| p(y, e).abs() > 1e-12)
        .collect();
    Ok(EllipticDemo {
        scan,
        off_characteristic,
    })
}

/// Smallest `log C` with `|Tu(x)| ≤ C e^{(Φ(x)+ε)/h}` over the probe points and the ladder.
pub fn growth_log_constant(
    u: &[TestDistribution],
    phi: &FBIPhase,
    probes: &[ProbePoint],
    ladder: &[f64],
    eps: f64,
) -> Result<f64> {
    check_ladder(ladder)?;
    let w = weight_from_phase(phi)?;
    let mut worst = f64::NEG_INFINITY;
    for p in probes {
        for x in stencil(&p.x0(phi)?) {
            for pt in decay_profile(u, phi, &w, ladder, &x)? {
                worst = worst.max(-(pt.d + eps) / pt.h);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bargmann_probe_maps_to_y_minus_i_eta() {
        let p = ProbePoint::new(vec![0.7], vec![-0.3]).unwrap();
        let x = p.x0(&FBIPhase::bargmann(1)).unwrap();
        assert!((x[0] - C64::new(0.7, 0.3)).norm() < 1e-14);
    }

    #[test]
    fn zero_covector_is_rejected() {
        assert!(ProbePoint::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn fit_recovers_an_affine_profile() {
        let prof: Vec<DecayPoint> = default_ladder()
            .into_iter()
            .map(|h| DecayPoint {
                h,
                d: 0.3 - 2.0 * h,
            })
            .collect();
        let f = fit_rate(&prof).unwrap();
        assert!((f.intercept - 0.3).abs() < 1e-12);
        assert!(f.sigma < 1e-10);
    }

    #[test]
    fn underflow_gives_infinite_rate() {
        let p = ProbePoint::new(vec![0.0], vec![1.0]).unwrap();
        let r = decay_rate(
            &[TestDistribution::Zero],
            &p,
            &FBIPhase::bargmann(1),
            &default_ladder(),
            0.1,
        )
        .unwrap();
        assert!(r.underflow && r.rate == f64::INFINITY);
        assert_eq!(r.classification, Classification::NotInWF);
    }

    #[test]
    fn unsorted_ladder_is_rejected() {
        let p = ProbePoint::new(vec![0.0], vec![1.0]).unwrap();
        let u = [TestDistribution::Constant];
        let phi = FBIPhase::bargmann(1);
        assert!(decay_rate(&u, &p, &phi, &[0.1, 0.2, 0.05], 0.1).is_err());
        assert!(decay_rate(&u, &p, &phi, &[0.2, 0.1], 0.1).is_err());
    }
}
