//! Scenario files: a small envelope around a subcommand-specific config blob.
//!
//! ```json
//! { "subcommand": "euler", "seed": 7, "out": "runs/top",
//!   "tolerances": { "energy_drift": 1e-9 },
//!   "config": { "algebra": "so3", "principal_moments": [1, 2, 3], ... } }
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use phasecraft_core::lie_core::{fixtures, AlgebraDoc, LieAlgebraSpec};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Euler,
    Affine,
    Ensemble,
    Wigner,
    Cohomology,
    Selftest,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Euler => "euler",
            Subcommand::Affine => "affine",
            Subcommand::Ensemble => "ensemble",
            Subcommand::Wigner => "wigner",
            Subcommand::Cohomology => "cohomology",
            Subcommand::Selftest => "selftest",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<C> {
    #[serde(default)]
    subcommand: Option<String>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    config: C,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub subcommand: Subcommand,
    pub config: Config,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone)]
pub enum Config {
    Euler(EulerConfig),
    Affine(AffineConfig),
    Ensemble(EnsembleConfig),
    Wigner(WignerConfig),
    Cohomology(CohomologyConfig),
    Selftest(SelftestConfig),
}

pub type Rows = Vec<Vec<f64>>;

fn default_dt() -> f64 {
    1e-3
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    #[default]
    LieMidpoint,
    Rk4,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiralityName {
    #[default]
    Left,
    Right,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    #[default]
    None,
    HeavyTop { weight: f64, center: [f64; 3] },
}

/// A bundled fixture by name, or an inline algebra document.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Fixture(String),
    Inline(AlgebraDoc),
}

impl AlgebraRef {
    pub fn resolve(&self) -> Result<LieAlgebraSpec, CliError> {
        match self {
            AlgebraRef::Fixture(name) => fixtures::by_name(name).ok_or_else(|| {
                CliError::Invalid(format!("unknown algebra fixture {name:?}; bundled: {}", fixtures::NAMES.join(", ")))
            }),
            AlgebraRef::Inline(doc) => Ok(LieAlgebraSpec::from_document(doc)?),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerInitial {
    #[serde(default)]
    pub g: Option<Rows>,
    pub sigma: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerConfig {
    pub algebra: AlgebraRef,
    #[serde(default)]
    pub metric: Option<Rows>,
    #[serde(default)]
    pub principal_moments: Option<Vec<f64>>,
    #[serde(default)]
    pub chirality: ChiralityName,
    #[serde(default)]
    pub potential: PotentialSpec,
    pub initial: EulerInitial,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub method: MethodName,
    /// Write every `every`-th step; defaults to about a thousand rows.
    #[serde(default)]
    pub every: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AffineModelName {
    Standard,
    AffineLeft,
    AffineRight,
    Hyperbolic,
    Trigonometric,
    Calogero,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineConstantsSpec {
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub inv_b: f64,
    #[serde(default)]
    pub inv_c: f64,
    /// Isotropic inertia `J = I·Id` of the standard model and the Calogero lattice.
    #[serde(default)]
    pub inertia: Option<f64>,
    #[serde(default)]
    pub dilatation_well: f64,
}

/// Either a configuration `{phi, sigma_hat, x, p}` or lattice data `{L, q, R, p, M, N}`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineInitial {
    #[serde(default)]
    pub phi: Option<Rows>,
    #[serde(default)]
    pub sigma_hat: Option<Rows>,
    #[serde(default)]
    pub x: Option<Vec<f64>>,
    #[serde(default)]
    pub p: Option<Vec<f64>>,
    #[serde(default, rename = "L")]
    pub l: Option<Rows>,
    #[serde(default, rename = "R")]
    pub r: Option<Rows>,
    #[serde(default)]
    pub q: Option<Vec<f64>>,
    #[serde(default, rename = "M")]
    pub m: Option<Rows>,
    #[serde(default, rename = "N")]
    pub n: Option<Rows>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineConfig {
    pub model: AffineModelName,
    pub constants: AffineConstantsSpec,
    pub initial: AffineInitial,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub every: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSpec {
    pub a: Rows,
    #[serde(default)]
    pub b: Option<Vec<f64>>,
    #[serde(default)]
    pub c: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    /// `½ Σ (q² + p²)`
    Harmonic,
    /// `½ Σ p²`
    Free,
    /// `Σ (½ p² − cos q)`
    Pendulum,
    /// `zᵀ a z + b·z + c` with `z = (q, p)`.
    Quadratic(QuadraticSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub q: Vec<[f64; 2]>,
    pub p: Vec<[f64; 2]>,
    #[serde(default)]
    pub periodic_q: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub observable: ObservableSpec,
    pub a: f64,
    pub epsilon: f64,
    #[serde(rename = "box")]
    pub region: BoxSpec,
    #[serde(default = "one")]
    pub hbar: f64,
    pub samples: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateSpec {
    HoGround,
    HoExcited {
        k: usize,
    },
    Gaussian {
        sigma: f64,
        #[serde(default)]
        q0: f64,
        #[serde(default)]
        p0: f64,
    },
    Cat {
        d: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub qmin: f64,
    pub qmax: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerConfig {
    pub state: StateSpec,
    pub grid: GridSpec,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "one")]
    pub omega: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyConfig {
    pub algebra: AlgebraRef,
    /// Antisymmetric matrix `ω_ab` of a two-form.
    #[serde(default)]
    pub omega: Option<Rows>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestConfig {
    /// Criterion numbers to run; all when empty.
    #[serde(default)]
    pub only: Vec<usize>,
}

fn decode<C: DeserializeOwned>(path: &Path, text: &str) -> Result<Envelope<C>, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Reads and validates a scenario for `subcommand`; no computation happens here.
pub fn parse_scenario(subcommand: Subcommand, path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scenario_str(subcommand, path, &text)
}

pub fn parse_scenario_str(subcommand: Subcommand, path: &Path, text: &str) -> Result<Scenario, CliError> {
    // the tag is checked first so a scenario handed to the wrong subcommand
    // is reported as such rather than as a pile of schema complaints
    #[derive(Deserialize)]
    struct Tag {
        subcommand: Option<String>,
    }
    if let Ok(Tag { subcommand: Some(tag) }) = serde_json::from_str::<Tag>(text) {
        if tag != subcommand.name() {
            return Err(CliError::Invalid(format!(
                "{}: scenario is tagged {tag:?} but was given to {subcommand}",
                path.display()
            )));
        }
    }
    macro_rules! envelope {
        ($ty:ty, $variant:ident) => {{
            let e: Envelope<$ty> = decode(path, text)?;
            (e.subcommand, e.out, e.seed, e.tolerances, Config::$variant(e.config))
        }};
    }
    let (_, out, seed, tolerances, config) = match subcommand {
        Subcommand::Euler => envelope!(EulerConfig, Euler),
        Subcommand::Affine => envelope!(AffineConfig, Affine),
        Subcommand::Ensemble => envelope!(EnsembleConfig, Ensemble),
        Subcommand::Wigner => envelope!(WignerConfig, Wigner),
        Subcommand::Cohomology => envelope!(CohomologyConfig, Cohomology),
        Subcommand::Selftest => envelope!(SelftestConfig, Selftest),
    };
    Ok(Scenario { subcommand, config, out, seed, tolerances })
}

pub fn matrix(name: &str, rows: &Rows) -> Result<DMatrix<f64>, CliError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::Invalid(format!("{name} must be a non-empty rectangular list of rows")));
    }
    Ok(DMatrix::from_row_iterator(nrows, ncols, rows.iter().flatten().copied()))
}

pub fn square(name: &str, rows: &Rows, n: usize) -> Result<DMatrix<f64>, CliError> {
    let m = matrix(name, rows)?;
    if m.nrows() != n || m.ncols() != n {
        return Err(CliError::Invalid(format!("{name} must be {n}×{n}, got {}×{}", m.nrows(), m.ncols())));
    }
    Ok(m)
}

pub fn vector(name: &str, v: &[f64], n: usize) -> Result<DVector<f64>, CliError> {
    if v.len() != n {
        return Err(CliError::Invalid(format!("{name} must have {n} entries, got {}", v.len())));
    }
    Ok(DVector::from_column_slice(v))
}
