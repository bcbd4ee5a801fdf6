//! Run configuration: JSON in, validated before any computation starts.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dto::{Cx, DistributionSpec, FormalSymbolDto, PhaseSpec};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional command tag; must match the subcommand when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default = "one")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<ProbeGridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wkb: Option<WkbSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn one() -> usize {
    1
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            n: 1,
            ladder: None,
            phase: None,
            grid: None,
            distribution: None,
            probe: None,
            probes: None,
            line: None,
            symbol: None,
            wkb: None,
            output: None,
            seed: None,
        }
    }
}

/// Covering grid for `Tu`: the κ-image of `window × [−k√h/2, k√h/2]`, spacing `spacing_factor·√h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub window: [f64; 2],
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default = "default_spacing")]
    pub spacing_factor: f64,
}

fn default_k() -> f64 {
    8.0
}

fn default_spacing() -> f64 {
    1.0 / 6.0
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            window: [-4.5, 4.5],
            k: default_k(),
            spacing_factor: default_spacing(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub y0: Vec<f64>,
    pub eta0: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeGridSpec {
    pub ys: Vec<f64>,
    pub etas: Vec<f64>,
}

impl Default for ProbeGridSpec {
    fn default() -> Self {
        ProbeGridSpec {
            ys: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            etas: vec![-1.0, -0.5, 0.5, 1.0, 2.0],
        }
    }
}

/// Probes `(0, t)` on R² with a fixed covector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSpec {
    pub ts: Vec<f64>,
    pub eta: [f64; 2],
}

impl Default for LineSpec {
    fn default() -> Self {
        LineSpec {
            ts: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            eta: [1.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub p: FormalSymbolDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<FormalSymbolDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_out: Option<usize>,
    #[serde(default = "default_t0")]
    pub t0: f64,
    #[serde(default = "default_xi_radius")]
    pub xi_radius: f64,
    #[serde(default = "default_rho")]
    pub rho: Vec<f64>,
}

fn default_t0() -> f64 {
    0.8
}

fn default_xi_radius() -> f64 {
    0.6
}

fn default_rho() -> Vec<f64> {
    vec![0.1, 0.5, 1.0, 2.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WkbSpec {
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub z0: Cx,
    #[serde(default)]
    pub xi0: f64,
    #[serde(default = "default_r_in")]
    pub r_in: f64,
    #[serde(default = "default_r_out")]
    pub r_out: f64,
    #[serde(default = "default_k_out")]
    pub k_out: usize,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_c_real")]
    pub c_real: f64,
    /// `operator[j][l][i]`: coefficient of `(x − x₀)^i h^l (hD)^j`; `hD − ix` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<Vec<Vec<Vec<Cx>>>>,
}

fn default_r_in() -> f64 {
    1.0
}

fn default_r_out() -> f64 {
    2.0
}

fn default_k_out() -> usize {
    6
}

fn default_degree() -> usize {
    40
}

fn default_c_real() -> f64 {
    1.0
}

impl Default for WkbSpec {
    fn default() -> Self {
        WkbSpec {
            x0: 0.0,
            z0: [0.0, 0.0],
            xi0: 0.0,
            r_in: default_r_in(),
            r_out: default_r_out(),
            k_out: default_k_out(),
            degree: default_degree(),
            c_real: default_c_real(),
            operator: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// File stem for the artifacts; the command name when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the constraints the schema states but serde cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 || self.n > 2 {
            return Err(CliError::usage("n must be 1 or 2"));
        }
        if let Some(l) = &self.ladder {
            if l.is_empty() {
                return Err(CliError::usage("ladder must not be empty"));
            }
            if l.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
                return Err(CliError::usage("ladder steps must be positive and finite"));
            }
        }
        if let Some(g) = &self.grid {
            if !(g.window[0] < g.window[1]) || !(g.k > 0.0) || !(g.spacing_factor > 0.0) {
                return Err(CliError::usage(
                    "grid needs window[0] < window[1] and positive k, spacing_factor",
                ));
            }
        }
        if let Some(p) = &self.probe {
            if p.y0.len() != self.n || p.eta0.len() != self.n {
                return Err(CliError::usage("probe y0 and eta0 need n entries"));
            }
        }
        if let Some(p) = &self.probes {
            if p.ys.is_empty() || p.etas.is_empty() {
                return Err(CliError::usage("probe grid must not be empty"));
            }
        }
        if let Some(l) = &self.line {
            if l.ts.is_empty() {
                return Err(CliError::usage("line needs at least one t"));
            }
        }
        if let Some(w) = &self.wkb {
            if !(0.0 < w.r_in && w.r_in < w.r_out) {
                return Err(CliError::usage("wkb needs 0 < r_in < r_out"));
            }
        }
        if let Some(o) = &self.output {
            if let Some(s) = &o.stem {
                if s.is_empty() || s.contains(['/', '\\']) {
                    return Err(CliError::usage("output stem must be a plain file name"));
                }
            }
        }
        if let Some(s) = &self.symbol {
            if s.rho.iter().any(|r| !(*r > 0.0)) || !(s.t0 > 0.0) || !(s.xi_radius > 0.0) {
                return Err(CliError::usage("symbol t0, xi_radius and rho must be positive"));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form (after the seed override).
    pub fn sha256(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn ladder_or(&self, default: &[f64]) -> Vec<f64> {
        self.ladder.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn phase_or_bargmann(&self) -> PhaseSpec {
        self.phase.clone().unwrap_or(PhaseSpec::Bargmann)
    }
}
