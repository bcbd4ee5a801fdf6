//! Serde mirrors of the core types. Complex numbers are `[re, im]` pairs.

use fbi_core::cas::FormalSymbol;
use fbi_core::csymplectic::RealQuadraticWeight;
use fbi_core::grid::{Axis, Grid, HoloSample};
use fbi_core::phase::FBIPhase;
use fbi_core::poly::Poly;
use fbi_core::transform::{GaussianPoly, TestDistribution};
use fbi_core::{CMat, RMat, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub type Cx = [f64; 2];

pub fn cx(z: C64) -> Cx {
    [z.re, z.im]
}

pub fn from_cx(c: Cx) -> C64 {
    C64::new(c[0], c[1])
}

pub fn cmat_from(rows: &[Vec<Cx>], n: usize, what: &str) -> Result<CMat, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::usage(format!("{what} must be {n} × {n}")));
    }
    Ok(CMat::from_fn(n, n, |i, j| from_cx(rows[i][j])))
}

pub fn cmat_to(m: &CMat) -> Vec<Vec<Cx>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| cx(m[(i, j)])).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseSpec {
    /// `φ = i(x − y)²/2`.
    Bargmann,
    /// `φ = Ax·y + (i/2)By·y`.
    NormalForm { a: Vec<Vec<Cx>>, b: Vec<Vec<f64>> },
    General {
        q_xx: Vec<Vec<Cx>>,
        q_xy: Vec<Vec<Cx>>,
        q_yy: Vec<Vec<Cx>>,
    },
}

impl PhaseSpec {
    pub fn build(&self, n: usize) -> Result<FBIPhase, CliError> {
        Ok(match self {
            PhaseSpec::Bargmann => FBIPhase::bargmann(n),
            PhaseSpec::NormalForm { a, b } => {
                if b.len() != n || b.iter().any(|r| r.len() != n) {
                    return Err(CliError::usage(format!("normal-form B must be {n} × {n}")));
                }
                let bm = RMat::from_fn(n, n, |i, j| b[i][j]);
                FBIPhase::normal_form(cmat_from(a, n, "normal-form A")?, bm)?
            }
            PhaseSpec::General { q_xx, q_xy, q_yy } => FBIPhase::new(
                cmat_from(q_xx, n, "q_xx")?,
                cmat_from(q_xy, n, "q_xy")?,
                cmat_from(q_yy, n, "q_yy")?,
            )?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Zero,
    Delta { y0: f64 },
    Heaviside,
    Abs,
    Gaussian { a: f64 },
    /// `y·e^{−a y²/2}`.
    YGaussian { a: f64 },
    Constant,
    Polynomial { coeffs: Vec<Cx> },
    SmoothNonanalytic,
}

impl DistributionSpec {
    pub fn build(&self) -> Result<TestDistribution, CliError> {
        let positive = |a: f64| {
            if a > 0.0 && a.is_finite() {
                Ok(())
            } else {
                Err(CliError::usage("Gaussian width a must be positive"))
            }
        };
        Ok(match self {
            DistributionSpec::Zero => TestDistribution::Zero,
            DistributionSpec::Delta { y0 } => TestDistribution::Delta { y0: *y0 },
            DistributionSpec::Heaviside => TestDistribution::Heaviside,
            DistributionSpec::Abs => TestDistribution::Abs,
            DistributionSpec::Gaussian { a } => {
                positive(*a)?;
                TestDistribution::Gaussian { a: *a }
            }
            DistributionSpec::YGaussian { a } => {
                positive(*a)?;
                TestDistribution::GaussianPoly(GaussianPoly::gaussian(*a).mul_y())
            }
            DistributionSpec::Constant => TestDistribution::Constant,
            DistributionSpec::Polynomial { coeffs } => TestDistribution::Polynomial {
                coeffs: coeffs.iter().map(|c| from_cx(*c)).collect(),
            },
            DistributionSpec::SmoothNonanalytic => TestDistribution::SmoothNonanalytic,
        })
    }

    pub fn label(&self) -> String {
        match self {
            DistributionSpec::Delta { y0 } => format!("delta({y0})"),
            DistributionSpec::Gaussian { a } => format!("gaussian({a})"),
            DistributionSpec::YGaussian { a } => format!("y_gaussian({a})"),
            other => other.build().map(|d| d.name().to_string()).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    /// Exponents of `(x, ξ − ξ₀)` measured from the base point, `2n` entries.
    pub e: Vec<u32>,
    pub c: Cx,
}

/// `h^{−m} Σ_{k ≤ K} h^k p_k`, each `p_k` a sparse polynomial of degree ≤ `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormalSymbolDto {
    pub n: usize,
    pub base: Vec<Cx>,
    #[serde(default)]
    pub m: i32,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub coeffs: Vec<Vec<TermDto>>,
}

impl FormalSymbolDto {
    pub fn from_symbol(s: &FormalSymbol<C64>) -> Self {
        FormalSymbolDto {
            n: s.n,
            base: s.base.iter().map(|z| cx(*z)).collect(),
            m: s.m,
            k: s.coeffs.len() - 1,
            d: s.degree_cap,
            coeffs: s
                .coeffs
                .iter()
                .map(|p| {
                    p.terms()
                        .map(|(e, c)| TermDto {
                            e: e.clone(),
                            c: cx(*c),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_symbol(&self) -> Result<FormalSymbol<C64>, CliError> {
        if self.coeffs.len() != self.k + 1 {
            return Err(CliError::usage(format!(
                "symbol lists {} orders but K = {}",
                self.coeffs.len(),
                self.k
            )));
        }
        let nv = 2 * self.n;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for terms in &self.coeffs {
            let mut p = Poly::zero(nv);
            for t in terms {
                if t.e.len() != nv {
                    return Err(CliError::usage(format!(
                        "symbol exponents need {nv} entries"
                    )));
                }
                p.add_term(t.e.clone(), from_cx(t.c));
            }
            coeffs.push(p);
        }
        let base = self.base.iter().map(|c| from_cx(*c)).collect();
        Ok(FormalSymbol::new(self.n, base, self.m, self.d, coeffs)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisDto {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

/// `v(x)` on a grid together with the weight `Φ(x) = Re(P x·x) + L x·x̄` it is measured against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoloSampleDto {
    pub weight_p: Vec<Vec<Cx>>,
    pub weight_l: Vec<Vec<Cx>>,
    pub h: f64,
    pub axes: Vec<AxisDto>,
    pub values: Vec<Cx>,
}

impl HoloSampleDto {
    pub fn from_sample(v: &HoloSample) -> Self {
        HoloSampleDto {
            weight_p: cmat_to(v.weight.p()),
            weight_l: cmat_to(v.weight.l()),
            h: v.h,
            axes: v
                .grid
                .axes()
                .iter()
                .map(|a| AxisDto {
                    min: a.min,
                    max: a.max,
                    steps: a.steps,
                })
                .collect(),
            values: v.values.iter().map(|z| cx(*z)).collect(),
        }
    }

    pub fn to_sample(&self) -> Result<HoloSample, CliError> {
        let n = self.weight_p.len();
        let w = RealQuadraticWeight::new(
            cmat_from(&self.weight_p, n, "weight_p")?,
            cmat_from(&self.weight_l, n, "weight_l")?,
        )?;
        let axes = self
            .axes
            .iter()
            .map(|a| Axis::new(a.min, a.max, a.steps))
            .collect::<Result<Vec<_>, _>>()?;
        let values = self.values.iter().map(|c| from_cx(*c)).collect();
        Ok(HoloSample::new(w, self.h, Grid::new(axes)?, values)?)
    }
}
