//! Versioned JSON experiment configuration.

use hol_core::eigen::{DEFAULT_EPS_QUAD, DEFAULT_NODES, DEFAULT_N_TILE};
use hol_core::geometry::{to_normal_form, GeneralAutomorphismParams, NormalFormConjugacy};
use hol_core::hardy::{
    DEFAULT_EPS_CONST, DEFAULT_EPS_E, DEFAULT_EPS_FIT, DEFAULT_SUBDISC,
};
use hol_core::io::AtomJson;
use hol_core::{Complex64, DiscPoint, NonEllipticNormalForm};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Classify,
    Iterate,
    ThinSelect,
    ConstructThin,
    OrbitLimits,
    EstimateE,
    SpanClassify,
    EigBlaschke,
    EigOuter,
    EigSingular,
    #[serde(alias = "eigen-verify")]
    EigVerify,
    #[serde(alias = "fundamental-domain")]
    DomainPlot,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Classify => "classify",
            Self::Iterate => "iterate",
            Self::ThinSelect => "thin-select",
            Self::ConstructThin => "construct-thin",
            Self::OrbitLimits => "orbit-limits",
            Self::EstimateE => "estimate-e",
            Self::SpanClassify => "span-classify",
            Self::EigBlaschke => "eig-blaschke",
            Self::EigOuter => "eig-outer",
            Self::EigSingular => "eig-singular",
            Self::EigVerify => "eig-verify",
            Self::DomainPlot => "domain-plot",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AutomorphismSpec {
    Hyperbolic { alpha: f64 },
    Parabolic { t: f64 },
    /// `e^{i theta} (p - z)/(1 - conj(p) z)`.
    General { theta: f64, p: [f64; 2] },
}

impl Default for AutomorphismSpec {
    fn default() -> Self {
        Self::Hyperbolic { alpha: 2.0 }
    }
}

impl AutomorphismSpec {
    /// The normal form and, for general input, the conjugacy to it.
    pub fn normal_form(&self) -> Result<(NonEllipticNormalForm, Option<NormalFormConjugacy>), CliError> {
        Ok(match *self {
            Self::Hyperbolic { alpha } => (NonEllipticNormalForm::hyperbolic(alpha)?, None),
            Self::Parabolic { t } => (NonEllipticNormalForm::parabolic(t)?, None),
            Self::General { theta, p } => {
                let c = to_normal_form(&GeneralAutomorphismParams::new(
                    theta,
                    Complex64::new(p[0], p[1]),
                )?)?;
                (c.form, Some(c))
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub automorphism: AutomorphismSpec,
    #[serde(default)]
    pub seed: u64,
    /// Truncation level: tiles for eigenfunctions, orbit length elsewhere.
    #[serde(default)]
    pub n_tile: Option<u32>,
    /// Overrides the main assertion tolerance of the experiment.
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl ExperimentConfig {
    pub fn default_for(experiment: ExperimentKind) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment,
            automorphism: AutomorphismSpec::default(),
            seed: 0,
            n_tile: None,
            tolerance: None,
            params: serde_json::Value::Null,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        let c: Self = serde_json::from_str(s).map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
        if c.schema_version != SCHEMA_VERSION {
            return Err(CliError::ConfigInvalid(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                c.schema_version
            )));
        }
        Ok(c)
    }

    /// Experiment parameters with every default filled in.
    pub fn params<T: for<'de> Deserialize<'de> + Default>(&self) -> Result<T, CliError> {
        if self.params.is_null() {
            return Ok(T::default());
        }
        serde_json::from_value(self.params.clone())
            .map_err(|e| CliError::ConfigInvalid(format!("params: {e}")))
    }

    pub fn tolerance_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    pub fn n_tile_or(&self, default: u32) -> u32 {
        self.n_tile.unwrap_or(default)
    }
}

pub fn disc_points(pts: &[[f64; 2]]) -> Result<Vec<DiscPoint>, CliError> {
    pts.iter()
        .map(|p| DiscPoint::from_re_im(p[0], p[1]).map_err(CliError::from))
        .collect()
}

fn default_seeds() -> Vec<[f64; 2]> {
    vec![[0.3, 0.2]]
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyParams {
    /// Expected class: "elliptic", "parabolic" or "hyperbolic".
    pub expect: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IterateParams {
    pub points: Vec<[f64; 2]>,
    /// Iterates `|n| <= n_max` are written; also the group-law range.
    pub n_max: i64,
    pub samples: usize,
    pub bound_samples: usize,
    pub bound_n_max: i64,
}

impl Default for IterateParams {
    fn default() -> Self {
        Self {
            points: vec![[0.0, 0.0], [0.3, 0.2]],
            n_max: 20,
            samples: 10_000,
            bound_samples: 1000,
            bound_n_max: 30,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThinSelectParams {
    pub k: usize,
    pub trials: usize,
    /// Thinness targets `delta_k`; dyadic when absent.
    pub deltas: Option<Vec<f64>>,
    /// Ball radius `r_k` for every element.
    pub radius: f64,
}

impl Default for ThinSelectParams {
    fn default() -> Self {
        Self {
            k: 8,
            trials: 100,
            deltas: None,
            radius: 0.36,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstructParams {
    pub seeds: Vec<[f64; 2]>,
    pub k: usize,
    pub deltas: Option<Vec<f64>>,
}

impl Default for ConstructParams {
    fn default() -> Self {
        Self {
            seeds: default_seeds(),
            k: 16,
            deltas: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitLimitParams {
    pub seeds: Vec<[f64; 2]>,
    pub k: usize,
    pub radius: f64,
    pub n_points: usize,
    pub eps_const: f64,
    pub eps_fit: f64,
    /// Required H^2 distance of the last fit.
    pub eps_h2: f64,
}

impl Default for OrbitLimitParams {
    fn default() -> Self {
        Self {
            seeds: default_seeds(),
            k: 32,
            radius: 0.7,
            n_points: 200,
            eps_const: DEFAULT_EPS_CONST,
            eps_fit: DEFAULT_EPS_FIT,
            eps_h2: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateEParams {
    pub seeds: Vec<[f64; 2]>,
    pub k: usize,
    pub window: i64,
    pub eps_e: f64,
    pub subdisc: f64,
    pub min_distinct: usize,
}

impl Default for EstimateEParams {
    fn default() -> Self {
        Self {
            seeds: default_seeds(),
            k: 16,
            window: 100_000,
            eps_e: DEFAULT_EPS_E,
            subdisc: DEFAULT_SUBDISC,
            min_distinct: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetSpec {
    /// Explicit points.
    Points { points: Vec<[f64; 2]> },
    /// `{phi^(n)(w) : |n| <= n}` for each seed.
    Orbit { seeds: Vec<[f64; 2]>, n: i64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpanParams {
    pub set: SetSpec,
    pub blaschke_intent: bool,
    /// Expected case: "WholeSpace", "ConstantsOnly" or "ModelSpace".
    pub expect: Option<String>,
    pub subdisc: f64,
    pub grid_radius: f64,
    pub grid_points: usize,
}

impl Default for SpanParams {
    fn default() -> Self {
        Self {
            set: SetSpec::Orbit {
                seeds: default_seeds(),
                n: 40,
            },
            blaschke_intent: true,
            expect: None,
            subdisc: DEFAULT_SUBDISC,
            grid_radius: 0.5,
            grid_points: 200,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlaschkeParams {
    pub seeds: Vec<[f64; 2]>,
    /// Orbit truncation; `n_tile` when absent, else 32.
    pub n_orbit: Option<u32>,
    pub max_drift: f64,
}

impl Default for BlaschkeParams {
    fn default() -> Self {
        Self {
            seeds: default_seeds(),
            n_orbit: None,
            max_drift: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModulusSpec {
    /// `1 + sum_k c_k cos(pi k u)` on every arc, with `c_k` drawn from the seed
    /// when `coefficients` is absent.
    Trig {
        #[serde(default)]
        coefficients: Option<Vec<f64>>,
        #[serde(default = "default_terms")]
        terms: usize,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    /// Samples per arc, uniform in the arc parameter.
    Samples { arcs: Vec<Vec<f64>> },
    /// CSV with columns `arc_param,value` (and optionally `arc`).
    Csv { path: String },
}

fn default_terms() -> usize {
    4
}

fn default_amplitude() -> f64 {
    0.15
}

fn default_samples() -> usize {
    257
}

impl Default for ModulusSpec {
    fn default() -> Self {
        Self::Trig {
            coefficients: None,
            terms: default_terms(),
            amplitude: default_amplitude(),
            samples: default_samples(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OuterParams {
    pub f0: ModulusSpec,
    pub lambda: f64,
    /// Exponent `p`; a string `"inf"` selects `p = infinity`.
    pub p: serde_json::Value,
    pub nodes: usize,
    pub eps_quad: f64,
    pub lp_n: u32,
    pub check_points: usize,
    pub check_radius: f64,
    /// `lambda` values whose `gamma` must agree with this one.
    pub gamma_compare: Vec<f64>,
    pub max_gamma_error: f64,
}

impl Default for OuterParams {
    fn default() -> Self {
        Self {
            f0: ModulusSpec::default(),
            lambda: 1.2,
            p: serde_json::json!(2.0),
            nodes: DEFAULT_NODES,
            eps_quad: DEFAULT_EPS_QUAD,
            lp_n: 60,
            check_points: 100,
            check_radius: 0.7,
            gamma_compare: vec![1.0],
            max_gamma_error: 1e-8,
        }
    }
}

impl OuterParams {
    pub fn exponent(&self) -> Result<f64, CliError> {
        match &self.p {
            serde_json::Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| CliError::ConfigInvalid("p is not a number".into())),
            serde_json::Value::String(s) if s == "inf" => Ok(f64::INFINITY),
            other => Err(CliError::ConfigInvalid(format!("p = {other} is not a number or \"inf\""))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SingularParams {
    /// Atoms of `nu_0` in `J`; the midpoint of the first arc when empty.
    pub atoms: Vec<AtomJson>,
    /// Mass at the attracting fixed point `1` (parabolic only).
    pub fixed_mass: f64,
    pub check_points: usize,
    pub check_radius: f64,
}

impl Default for SingularParams {
    fn default() -> Self {
        Self {
            atoms: vec![],
            fixed_mass: 0.0,
            check_points: 100,
            check_radius: 0.7,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyParams {
    pub outer: Option<OuterParams>,
    pub blaschke: Option<BlaschkeParams>,
    pub singular: Option<SingularParams>,
    pub grid_radius: f64,
    pub rings: usize,
    pub per_ring: usize,
    pub max_arg_dispersion: f64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            outer: Some(OuterParams::default()),
            blaschke: Some(BlaschkeParams::default()),
            singular: Some(SingularParams::default()),
            grid_radius: 0.7,
            rings: 6,
            per_ring: 20,
            max_arg_dispersion: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainParams {
    pub n_max: i64,
    pub samples: usize,
}

impl Default for DomainParams {
    fn default() -> Self {
        Self {
            n_max: 8,
            samples: 64,
        }
    }
}

pub const DEFAULT_BLASCHKE_ORBIT: u32 = 32;
pub const DEFAULT_OUTER_TILES: u32 = DEFAULT_N_TILE;
