//! Run configuration: a strict TOML schema plus validation into the typed
//! parameters of the library. Every section is optional and has defaults,
//! so `helmlab <command>` without `--config` runs a small bundled example.

use std::fmt;
use std::path::{Path, PathBuf};

use helmlab::annulus::{CounterexampleId, MultiplierSpec};
use helmlab::normlab::{rational_from_f64, ExponentPair, RegionId, TestFamily, Q};
use helmlab::resolvent::{FrequencyParams, StepPotential};
use helmlab::spectral::GridSpec;
use serde::{Deserialize, Serialize};

/// Invalid configuration. Maps to exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

fn lib<T>(r: helmlab::Result<T>, what: &str) -> Result<T, ConfigError> {
    r.map_err(|e| ConfigError(format!("{what}: {e}")))
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub grid: Option<GridConfig>,
    pub physics: Option<PhysicsConfig>,
    pub multiplier: Option<MultiplierConfig>,
    pub source: Option<SourceConfig>,
    pub solve: Option<SolveConfig>,
    pub kernel: Option<KernelConfig>,
    pub scaling: Option<ScalingConfig>,
    pub counterexample: Option<CounterexampleConfig>,
    pub regions: Option<RegionsConfig>,
    pub mp_check: Option<MpCheckConfig>,
}

/// Either a cube (`ndim`, `n`, `half_width`) or per-axis `points` and
/// `half_widths`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub ndim: Option<usize>,
    pub n: Option<usize>,
    pub half_width: Option<f64>,
    pub points: Option<Vec<usize>>,
    pub half_widths: Option<Vec<f64>>,
}

impl GridConfig {
    pub fn cube(ndim: usize, n: usize, half_width: f64) -> Self {
        Self { ndim: Some(ndim), n: Some(n), half_width: Some(half_width), points: None, half_widths: None }
    }

    fn build(&self) -> Result<GridSpec, ConfigError> {
        let spec = match (&self.points, &self.half_widths) {
            (Some(p), Some(l)) => {
                if self.ndim.is_some() || self.n.is_some() || self.half_width.is_some() {
                    return bad("grid: give either ndim/n/half_width or points/half_widths");
                }
                GridSpec::new(p.clone(), l.clone())
            }
            (None, None) => match (self.ndim, self.n, self.half_width) {
                (Some(d), Some(n), Some(l)) => GridSpec::cube(d, n, l),
                _ => return bad("grid: ndim, n and half_width are all required"),
            },
            _ => return bad("grid: points and half_widths go together"),
        };
        lib(spec, "grid")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    pub lambda: f64,
    #[serde(default)]
    pub eps: f64,
    pub v1: f64,
    pub v2: f64,
}

impl PhysicsConfig {
    fn build(&self) -> Result<FrequencyParams, ConfigError> {
        let v = lib(StepPotential::new(self.v1, self.v2), "physics")?;
        lib(FrequencyParams::new(self.lambda, self.eps, v), "physics")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplierConfig {
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    #[serde(default)]
    pub lambda: f64,
}

impl MultiplierConfig {
    fn build(&self) -> Result<MultiplierSpec, ConfigError> {
        lib(MultiplierSpec::new(self.d, self.a, self.b, self.alpha, self.lambda), "multiplier")
    }
}

/// Right-hand side for `solve` and `decompose`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    /// `amplitude · e^{-|x-centre|²/width²}`.
    Gaussian { centre: Vec<f64>, width: f64, #[serde(default = "one")] amplitude: f64 },
    /// An HLZF file in the physical domain.
    File { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    /// `ε > 0`, periodic lateral evaluation.
    #[default]
    Periodic,
    /// `ε > 0`, lateral integrals over the whole line.
    Continuum,
    /// `ε = 0` limit on the chosen branch.
    Limiting,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    #[serde(default)]
    pub method: SolveMethod,
    #[serde(default)]
    pub incoming: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub z_min: f64,
    pub z_max: f64,
    pub samples: usize,
    #[serde(default)]
    pub spacing: Spacing,
    /// Envelope peaks below this `z` are left out of the slope fit.
    pub fit_from: Option<f64>,
}

/// Test inputs for norm estimation. `random` draws its seed from the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyConfig {
    GaussianBumps,
    WavePackets { radius: f64 },
    Counterexamples { members: Vec<CounterexampleId> },
    Random,
}

impl FamilyConfig {
    pub fn build(&self, seed: u64) -> TestFamily {
        match self {
            FamilyConfig::GaussianBumps => TestFamily::GaussianBumps,
            FamilyConfig::WavePackets { radius } => TestFamily::WavePackets { radius: *radius },
            FamilyConfig::Counterexamples { members } => TestFamily::Counterexamples { members: members.clone() },
            FamilyConfig::Random => TestFamily::Random { seed },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    /// `[p, q]` as strings: `"4/3"`, `"2"`, `"inf"`.
    pub pairs: Vec<[String; 2]>,
    pub lambdas: Vec<f64>,
    pub budget: usize,
    pub families: Vec<FamilyConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::enum_variant_names)]
pub enum CounterexampleFamily {
    BetaFamily,
    EpsFamily,
    LogFamily,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleConfig {
    pub family: CounterexampleFamily,
    pub beta: Option<f64>,
    pub eps: Option<f64>,
    pub k: Option<u64>,
    pub alpha: Option<f64>,
    /// Use the periodic synthesis instead of the exact samples.
    #[serde(default)]
    pub periodic: bool,
    /// Points where `T_{λ,α} f` is evaluated (1-dim).
    #[serde(default)]
    pub points: Vec<f64>,
}

impl CounterexampleConfig {
    pub fn id(&self) -> Result<CounterexampleId, ConfigError> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| ConfigError(format!("counterexample: {name} is required")));
        let (used, id) = match self.family {
            CounterexampleFamily::BetaFamily => ([true, false, false, false], CounterexampleId::BetaFamily { beta: need(self.beta, "beta")? }),
            CounterexampleFamily::EpsFamily => (
                [true, true, false, false],
                CounterexampleId::EpsFamily { beta: need(self.beta, "beta")?, eps: need(self.eps, "eps")? },
            ),
            CounterexampleFamily::LogFamily => (
                [false, false, true, true],
                CounterexampleId::LogFamily {
                    k: self.k.ok_or_else(|| ConfigError("counterexample: k is required".into()))?,
                    alpha: need(self.alpha, "alpha")?,
                },
            ),
        };
        let given = [self.beta.is_some(), self.eps.is_some(), self.k.is_some(), self.alpha.is_some()];
        for (i, name) in ["beta", "eps", "k", "alpha"].iter().enumerate() {
            if given[i] && !used[i] {
                return bad(format!("counterexample: key `{name}` does not apply to this family"));
            }
        }
        lib(id.validate(), "counterexample")?;
        Ok(id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionName {
    #[serde(rename = "D")]
    D,
    #[serde(rename = "D_tilde")]
    DTilde,
    #[serde(rename = "D_alpha")]
    DAlpha,
    #[serde(rename = "cal_D_alpha")]
    CalDAlpha,
    #[serde(rename = "largefreq")]
    LargeFreq,
    #[serde(rename = "smallfreq")]
    SmallFreq,
    #[serde(rename = "annulus_d1")]
    AnnulusLine,
}

impl std::str::FromStr for RegionName {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "D" => RegionName::D,
            "D_tilde" => RegionName::DTilde,
            "D_alpha" => RegionName::DAlpha,
            "cal_D_alpha" => RegionName::CalDAlpha,
            "largefreq" => RegionName::LargeFreq,
            "smallfreq" => RegionName::SmallFreq,
            "annulus_d1" => RegionName::AnnulusLine,
            _ => return bad(format!("unknown region `{s}`")),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionsConfig {
    pub region: RegionName,
    /// Dimension `n` (resolvent regions) or `d` (annulus regions).
    pub n: u32,
    /// `α`, as a string (`"1/4"`) or decimal.
    pub alpha: Option<String>,
    #[serde(default = "default_max_den")]
    pub max_den: i64,
    /// Only pairs with `1/p + 1/q = 1`.
    #[serde(default)]
    pub selfdual: bool,
}

fn default_max_den() -> i64 {
    40
}

/// A profile `ŵ(ξ) = amplitude · (1 - t²)³`, `t = (|ξ| - centre)/width`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub centre: f64,
    pub width: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpCheckConfig {
    pub profiles: Vec<ProfileConfig>,
}

/// Parses TOML, naming the offending key and line on failure.
pub fn parse(text: &str, origin: &Path) -> Result<RunConfig, ConfigError> {
    toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        let msg = e.message().replace('\n', " ");
        let msg = match msg.strip_prefix("unknown field ") {
            Some(rest) => format!("unknown key {rest}"),
            None => msg,
        };
        match line {
            Some(l) => ConfigError(format!("{}:{l}: {msg}", origin.display())),
            None => ConfigError(format!("{}: {msg}", origin.display())),
        }
    })
}

/// Command-line overrides for `regions`.
#[derive(Clone, Debug, Default)]
pub struct RegionOverrides {
    pub region: Option<String>,
    pub n: Option<u32>,
    pub alpha: Option<String>,
    pub max_den: Option<i64>,
    pub selfdual: bool,
}

/// Fully validated parameters for one pipeline.
pub enum Plan {
    Solve { grid: GridSpec, params: FrequencyParams, source: SourceConfig, solve: SolveConfig },
    Decompose { grid: GridSpec, params: FrequencyParams, source: SourceConfig },
    Kernel { spec: MultiplierSpec, kernel: KernelConfig },
    Scaling { grid: GridSpec, spec: MultiplierSpec, alpha: Q, pairs: Vec<ExponentPair>, lambdas: Vec<f64>, budget: usize, families: Vec<TestFamily> },
    Counterexample { grid: GridSpec, spec: MultiplierSpec, id: CounterexampleId, ce: CounterexampleConfig },
    Regions { region: RegionId, selfdual: bool, max_den: i64, gamma: Option<(u32, Q)> },
    MpCheck { grid: GridSpec, params: FrequencyParams, profiles: Vec<ProfileConfig> },
}

fn check_source(source: &SourceConfig, grid: &GridSpec) -> Result<(), ConfigError> {
    match source {
        SourceConfig::Gaussian { centre, width, amplitude } => {
            if centre.len() != grid.ndim() {
                return bad(format!("source: centre has {} coordinates, grid has {}", centre.len(), grid.ndim()));
            }
            if !(*width > 0.0 && width.is_finite()) || !amplitude.is_finite() {
                return bad("source: width must be positive and finite");
            }
        }
        SourceConfig::File { path } => {
            if !path.is_file() {
                return bad(format!("source: input field {} does not exist", path.display()));
            }
        }
    }
    Ok(())
}

fn default_source(grid: &GridSpec) -> SourceConfig {
    let mut centre = vec![0.0; grid.ndim()];
    centre[grid.ndim() - 1] = 0.5;
    if grid.ndim() > 1 {
        centre[0] = 0.2;
    }
    SourceConfig::Gaussian { centre, width: 1.0, amplitude: 1.0 }
}

fn parse_alpha(s: &str) -> Result<Q, ConfigError> {
    let q = lib(helmlab::normlab::parse_rational(s), "alpha")?;
    q.ok_or_else(|| ConfigError("alpha: must be finite".into()))
}

impl RunConfig {
    /// Validates the sections `command` uses and builds its parameters.
    /// Nothing is computed before this succeeds.
    pub fn plan(&self, command: &str, seed: u64, regions: &RegionOverrides) -> Result<Plan, ConfigError> {
        let grid_or = |d: GridConfig| self.grid.clone().unwrap_or(d).build();
        let physics_or = |d: PhysicsConfig| self.physics.clone().unwrap_or(d).build();
        let step = PhysicsConfig { lambda: 5.0, eps: 0.25, v1: 1.0, v2: 0.0 };
        match command {
            "solve" | "decompose" => {
                let grid = grid_or(GridConfig::cube(2, 256, 8.0))?;
                if grid.ndim() < 2 {
                    return bad("grid: the resolvent needs ndim ≥ 2");
                }
                let params = physics_or(step)?;
                let source = self.source.clone().unwrap_or_else(|| default_source(&grid));
                check_source(&source, &grid)?;
                if command == "decompose" {
                    return Ok(Plan::Decompose { grid, params, source });
                }
                let solve = self.solve.clone().unwrap_or_default();
                if solve.method != SolveMethod::Limiting && params.eps <= 0.0 {
                    return bad("physics: eps must be positive unless solve.method = \"limiting\"");
                }
                Ok(Plan::Solve { grid, params, source, solve })
            }
            "kernel" => {
                let spec = self
                    .multiplier
                    .clone()
                    .unwrap_or(MultiplierConfig { d: 1, a: 1.0, b: 2.0, alpha: 0.5, lambda: 0.0 })
                    .build()?;
                let kernel = self.kernel.clone().unwrap_or(KernelConfig {
                    z_min: 1.0,
                    z_max: 1000.0,
                    samples: 400,
                    spacing: Spacing::Log,
                    fit_from: None,
                });
                let k = &kernel;
                if !(k.z_min.is_finite() && k.z_max.is_finite() && k.z_min < k.z_max) || k.samples < 2 {
                    return bad("kernel: need finite z_min < z_max and samples ≥ 2");
                }
                if k.spacing == Spacing::Log && k.z_min <= 0.0 {
                    return bad("kernel: log spacing needs z_min > 0");
                }
                Ok(Plan::Kernel { spec, kernel })
            }
            "scaling" => {
                let grid = grid_or(GridConfig::cube(1, 2048, 256.0))?;
                let spec = self
                    .multiplier
                    .clone()
                    .unwrap_or(MultiplierConfig { d: 1, a: 1.0, b: 2.0, alpha: 0.5, lambda: 0.0 })
                    .build()?;
                if spec.d != grid.ndim() {
                    return bad("multiplier: d must equal grid ndim");
                }
                let alpha = lib(rational_from_f64(spec.alpha), "multiplier.alpha")?;
                let sc = self.scaling.clone().unwrap_or(ScalingConfig {
                    pairs: vec![["4/3".into(), "4".into()]],
                    lambdas: vec![1.0, 2.0, 4.0, 8.0],
                    budget: 40,
                    families: vec![FamilyConfig::GaussianBumps, FamilyConfig::WavePackets { radius: 1.0 }],
                });
                if sc.pairs.is_empty() || sc.families.is_empty() || sc.budget == 0 {
                    return bad("scaling: pairs, families and budget must be non-empty");
                }
                if sc.lambdas.len() < 2 || sc.lambdas.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
                    return bad("scaling: need at least two finite lambdas ≥ 0");
                }
                let pairs = sc
                    .pairs
                    .iter()
                    .map(|[p, q]| lib(ExponentPair::parse(p, q), "scaling.pairs"))
                    .collect::<Result<Vec<_>, _>>()?;
                for e in &pairs {
                    lib(helmlab::normlab::predicted_gamma(e, spec.d as u32, alpha), "scaling.pairs")?;
                }
                let families = sc.families.iter().map(|f| f.build(seed)).collect();
                Ok(Plan::Scaling { grid, spec, alpha, pairs, lambdas: sc.lambdas, budget: sc.budget, families })
            }
            "counterexample" => {
                let ce = self.counterexample.clone().unwrap_or(CounterexampleConfig {
                    family: CounterexampleFamily::LogFamily,
                    beta: None,
                    eps: None,
                    k: Some(100),
                    alpha: Some(0.5),
                    periodic: false,
                    points: vec![0.0],
                });
                let id = ce.id()?;
                let alpha = match id {
                    CounterexampleId::LogFamily { alpha, .. } => alpha,
                    _ => 0.5,
                };
                let spec = self
                    .multiplier
                    .clone()
                    .unwrap_or(MultiplierConfig { d: 1, a: 1.0, b: 2.0, alpha, lambda: 0.0 })
                    .build()?;
                if spec.d != 1 {
                    return bad("counterexample: the families are one-dimensional (multiplier.d = 1)");
                }
                let grid = match &self.grid {
                    Some(g) => g.build()?,
                    None => default_counterexample_grid(&id)?,
                };
                if grid.ndim() != 1 {
                    return bad("counterexample: grid must be one-dimensional");
                }
                Ok(Plan::Counterexample { grid, spec, id, ce })
            }
            "regions" => {
                let base = self.regions.clone();
                let name: RegionName = match (&regions.region, &base) {
                    (Some(s), _) => s.parse()?,
                    (None, Some(b)) => b.region,
                    (None, None) => return bad("regions: no region given (--region or [regions])"),
                };
                let n = regions.n.or(base.as_ref().map(|b| b.n)).unwrap_or(3);
                let alpha_s = regions.alpha.clone().or_else(|| base.as_ref().and_then(|b| b.alpha.clone()));
                let max_den = regions.max_den.or(base.as_ref().map(|b| b.max_den)).unwrap_or(default_max_den());
                let selfdual = regions.selfdual || base.as_ref().is_some_and(|b| b.selfdual);
                if !(1..=400).contains(&max_den) {
                    return bad("regions: max_den must lie in [1, 400]");
                }
                let alpha = || -> Result<Q, ConfigError> {
                    match &alpha_s {
                        Some(s) => parse_alpha(s),
                        None => bad("regions: this region needs alpha"),
                    }
                };
                let (region, gamma) = match name {
                    RegionName::D => (RegionId::DN { n }, None),
                    RegionName::DTilde => (RegionId::DTildeN { n }, None),
                    RegionName::LargeFreq => (RegionId::LargeFreq { n }, None),
                    RegionName::SmallFreq => (RegionId::SmallFreq { n }, None),
                    RegionName::DAlpha => {
                        let a = alpha()?;
                        (RegionId::DAlphaAnnulus { d: n, alpha: a }, Some((n, a)))
                    }
                    RegionName::CalDAlpha => (RegionId::CalDAlpha { d: n, alpha: alpha()? }, None),
                    RegionName::AnnulusLine => (RegionId::AnnulusLine { alpha: alpha()? }, None),
                };
                lib(region.validate(), "regions")?;
                Ok(Plan::Regions { region, selfdual, max_den, gamma })
            }
            "mp-check" => {
                let grid = grid_or(GridConfig::cube(1, 512, 32.0))?;
                let mut params = physics_or(PhysicsConfig { lambda: 2.0, eps: 0.0, v1: 1.0, v2: 0.0 })?;
                if params.eps != 0.0 {
                    params = lib(params.with_eps(0.0), "physics")?;
                }
                let profiles = self.mp_check.clone().map(|m| m.profiles).unwrap_or_else(|| {
                    vec![
                        ProfileConfig { centre: 3.0, width: 1.0, amplitude: 1.0 },
                        ProfileConfig { centre: 1.0, width: 0.5, amplitude: 1.0 },
                    ]
                });
                if profiles.is_empty() || profiles.iter().any(|p| !(p.width > 0.0 && p.centre.is_finite())) {
                    return bad("mp_check: need profiles with positive width");
                }
                Ok(Plan::MpCheck { grid, params, profiles })
            }
            other => bad(format!("unknown command `{other}`")),
        }
    }
}

/// A box holding `[1, k+1]` with four samples per unit length.
fn default_counterexample_grid(id: &CounterexampleId) -> Result<GridSpec, ConfigError> {
    let grid = match *id {
        CounterexampleId::LogFamily { k, .. } => {
            let l = (k as f64 + 2.0).max(16.0).log2().ceil().exp2();
            GridSpec::cube(1, (4.0 * l) as usize, l)
        }
        _ => GridSpec::cube(1, 4096, 512.0),
    };
    lib(grid, "grid")
}
