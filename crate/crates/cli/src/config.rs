//! Scenario files: TOML by default, JSON when the file ends in `.json`.
//!
//! See the README for the full grammar. Unknown keys are rejected so typos
//! surface as errors instead of silently falling back to defaults.

use std::path::{Path, PathBuf};

use relaxwave_core::constants::PhysicalConstants;
use relaxwave_core::export::Format;
use relaxwave_core::grid::{Boundary, SpatialGrid};
use relaxwave_core::quantum::SeScheme;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Telegraph,
    Fourier,
    Wave,
    Se,
    ModifiedSe,
    PilotWave,
    Modes,
    Dispersion,
    Relaxation,
    Planck,
}

impl Scenario {
    pub const ALL: [Scenario; 10] = [
        Scenario::Telegraph,
        Scenario::Fourier,
        Scenario::Wave,
        Scenario::Se,
        Scenario::ModifiedSe,
        Scenario::PilotWave,
        Scenario::Modes,
        Scenario::Dispersion,
        Scenario::Relaxation,
        Scenario::Planck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Telegraph => "telegraph",
            Scenario::Fourier => "fourier",
            Scenario::Wave => "wave",
            Scenario::Se => "se",
            Scenario::ModifiedSe => "modified-se",
            Scenario::PilotWave => "pilot-wave",
            Scenario::Modes => "modes",
            Scenario::Dispersion => "dispersion",
            Scenario::Relaxation => "relaxation",
            Scenario::Planck => "planck",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Scenarios that march a field in time.
    pub fn is_evolution(self) -> bool {
        matches!(
            self,
            Scenario::Telegraph
                | Scenario::Fourier
                | Scenario::Wave
                | Scenario::Se
                | Scenario::ModifiedSe
                | Scenario::PilotWave
        )
    }

    pub fn is_quantum(self) -> bool {
        matches!(self, Scenario::Se | Scenario::ModifiedSe | Scenario::PilotWave)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Natural,
    Si,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    #[serde(default = "default_boundary")]
    pub boundary: Boundary,
}

fn default_boundary() -> Boundary {
    Boundary::Periodic
}

impl GridConfig {
    pub fn build(&self) -> Result<SpatialGrid, CliError> {
        SpatialGrid::new(self.x_min, self.x_max, self.n_points, self.boundary)
            .map_err(|e| CliError::invalid("grid", e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    #[default]
    Gaussian,
    Sine,
    Cosine,
    PlaneWave,
    Uniform,
    Zero,
}

/// How the initial time derivative is chosen for second-order equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialRate {
    /// `consistent` for telegraph and modified-se, `rest` otherwise.
    #[default]
    Auto,
    Rest,
    /// The rate of the first-order limit equation at t = 0.
    Consistent,
    /// f(x − vt): rate −v·f′.
    RightMoving,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default)]
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    /// Standard deviation of the Gaussian profile itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Wavenumber of sine/cosine/plane-wave shapes; carrier e^{ikx} on a
    /// Gaussian in quantum scenarios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavenumber: Option<f64>,
    #[serde(default)]
    pub rate: InitialRate,
}

/// Sampled initial profile and its x-derivative.
pub struct Profile {
    pub shape: Shape,
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
    pub wavenumber: f64,
}

impl Profile {
    /// (f, f′) at x; complex carrier only when `complex` is set.
    pub fn eval(&self, x: f64, complex: bool) -> (relaxwave_core::Complex64, relaxwave_core::Complex64) {
        use relaxwave_core::Complex64 as C;
        let (a, k) = (self.amplitude, self.wavenumber);
        match self.shape {
            Shape::Gaussian => {
                let s = x - self.center;
                let g = a * (-s * s / (2.0 * self.width * self.width)).exp();
                let dg = -s / (self.width * self.width) * g;
                if complex && k != 0.0 {
                    let carrier = C::from_polar(1.0, k * x);
                    (carrier * g, carrier * C::new(dg, k * g))
                } else {
                    (C::new(g, 0.0), C::new(dg, 0.0))
                }
            }
            Shape::Sine => (C::new(a * (k * x).sin(), 0.0), C::new(a * k * (k * x).cos(), 0.0)),
            Shape::Cosine => (C::new(a * (k * x).cos(), 0.0), C::new(-a * k * (k * x).sin(), 0.0)),
            Shape::PlaneWave => {
                if complex {
                    let f = C::from_polar(a, k * x);
                    (f, C::new(0.0, k) * f)
                } else {
                    (C::new(a * (k * x).cos(), 0.0), C::new(-a * k * (k * x).sin(), 0.0))
                }
            }
            Shape::Uniform => (C::new(a, 0.0), C::new(0.0, 0.0)),
            Shape::Zero => (C::new(0.0, 0.0), C::new(0.0, 0.0)),
        }
    }
}

impl InitialConfig {
    pub fn profile(&self, grid: &SpatialGrid) -> Result<Profile, CliError> {
        let width = self.width.unwrap_or(grid.length() / 20.0);
        if !(width > 0.0 && width.is_finite()) {
            return Err(CliError::invalid(
                "initial.width",
                format!("must be positive, got {width}"),
            ));
        }
        for (name, v) in [
            ("initial.center", self.center),
            ("initial.amplitude", self.amplitude),
            ("initial.wavenumber", self.wavenumber),
        ] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(CliError::invalid(name, format!("must be finite, got {v}")));
                }
            }
        }
        Ok(Profile {
            shape: self.shape,
            center: self.center.unwrap_or(0.5 * (grid.x_min + grid.x_max)),
            width,
            amplitude: self.amplitude.unwrap_or(1.0),
            wavenumber: self.wavenumber.unwrap_or(0.0),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    #[default]
    Zero,
    Uniform,
    /// ½·m·ω²·(x − center)².
    Harmonic,
    /// `value` on |x − center| < width/2, zero elsewhere.
    Barrier,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    #[serde(default)]
    pub kind: PotentialKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
}

impl PotentialConfig {
    pub fn sample(&self, grid: &SpatialGrid, mass: f64) -> Result<Vec<f64>, CliError> {
        let center = self.center.unwrap_or(0.5 * (grid.x_min + grid.x_max));
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| CliError::invalid(format!("params.potential.{name}"), "required for this kind"))
        };
        let xs = grid.coordinates();
        let v = match self.kind {
            PotentialKind::Zero => vec![0.0; xs.len()],
            PotentialKind::Uniform => vec![need("value", self.value)?; xs.len()],
            PotentialKind::Harmonic => {
                let w = need("omega", self.omega)?;
                xs.iter().map(|x| 0.5 * mass * w * w * (x - center).powi(2)).collect()
            }
            PotentialKind::Barrier => {
                let (v0, width) = (need("value", self.value)?, need("width", self.width)?);
                xs.iter()
                    .map(|x| if (x - center).abs() < 0.5 * width { v0 } else { 0.0 })
                    .collect()
            }
        };
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::invalid("params.potential", "produces non-finite values"));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diffusivity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Route telegraph runs to the undamped wave equation.
    #[serde(default)]
    pub ballistic: bool,
    #[serde(default)]
    pub scheme: SeScheme,
    #[serde(default)]
    pub potential: PotentialConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// `V` for modes, `k` for dispersion, otherwise a dotted config key such
    /// as `params.tau`.
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// `start:stop:step`, both ends inclusive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<String>,
}

impl SweepConfig {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let pts = match (&self.values, &self.range) {
            (Some(v), None) => v.clone(),
            (None, Some(r)) => parse_range(r).map_err(|m| CliError::invalid("sweep.range", m))?,
            _ => {
                return Err(CliError::invalid("sweep", "give exactly one of `values` or `range`"));
            }
        };
        if pts.is_empty() || pts.iter().any(|v| !v.is_finite()) {
            return Err(CliError::invalid("sweep", "needs at least one finite value"));
        }
        Ok(pts)
    }
}

/// `a:b:s` → a, a+s, …, up to b inclusive. Points are a + i·s, not a running
/// sum, so they do not drift.
pub fn parse_range(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, s] = parts[..] else {
        return Err(format!("expected start:stop:step, got `{text}`"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    let (a, b, s) = (num(a)?, num(b)?, num(s)?);
    if !(s > 0.0) || !(b >= a) || ![a, b, s].iter().all(|v| v.is_finite()) {
        return Err(format!("need finite start <= stop and step > 0, got `{text}`"));
    }
    let n = ((b - a) / s + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(format!("range `{text}` has more than a million points"));
    }
    Ok((0..=n).map(|i| a + i as f64 * s).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub label: String,
    /// Explicit relaxation time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// With `speed`: τ = ħ/(2·mass·speed²).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxationConfig {
    pub channels: Vec<ChannelConfig>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl OutputConfig {
    pub fn resolved_format(&self) -> Format {
        self.format.unwrap_or_else(|| match &self.path {
            Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
            _ => Format::Csv,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub units: Units,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    /// Steps between snapshots; only the initial and final states when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relaxation: Option<RelaxationConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ScenarioConfig {
    pub fn parse(text: &str, origin: &Path) -> Result<Self, CliError> {
        let is_json = origin.extension().is_some_and(|e| e == "json");
        let parsed = if is_json {
            serde_json::from_str(text).map_err(|e| e.to_string())
        } else {
            toml::from_str(text).map_err(|e| e.to_string())
        };
        parsed.map_err(|message| CliError::Parse {
            origin: origin.display().to_string(),
            message: message.trim_end().to_owned(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text, path)
    }

    /// Built-in configuration for `run <scenario-name>`.
    pub fn preset(scenario: Scenario) -> Self {
        let grid = |x_min, x_max, n_points| {
            Some(GridConfig {
                x_min,
                x_max,
                n_points,
                boundary: Boundary::Periodic,
            })
        };
        let mut cfg = ScenarioConfig {
            scenario,
            units: Units::Natural,
            dt: None,
            t_end: None,
            snapshot_every: None,
            grid: None,
            initial: InitialConfig::default(),
            params: ParamsConfig::default(),
            constants: None,
            sweep: None,
            relaxation: None,
            output: OutputConfig::default(),
        };
        match scenario {
            Scenario::Telegraph | Scenario::Fourier | Scenario::Wave => {
                cfg.grid = grid(0.0, 1.0, 256);
                cfg.initial.width = Some(0.05);
                cfg.params.tau = Some(0.05);
                cfg.params.diffusivity = Some(1e-3);
                cfg.dt = Some(1e-3);
                cfg.t_end = Some(0.25);
                if scenario == Scenario::Wave {
                    cfg.params.diffusivity = Some(0.05);
                    cfg.initial.rate = InitialRate::RightMoving;
                }
            }
            Scenario::Se | Scenario::ModifiedSe => {
                cfg.grid = grid(-20.0, 20.0, 256);
                cfg.initial.width = Some(1.0);
                cfg.initial.wavenumber = Some(1.0);
                cfg.params.mass = Some(1.0);
                cfg.dt = Some(0.01);
                cfg.t_end = Some(1.0);
                if scenario == Scenario::ModifiedSe {
                    cfg.params.tau = Some(1e-3);
                }
            }
            Scenario::PilotWave => {
                cfg.grid = grid(-10.0, 10.0, 256);
                cfg.initial.width = Some(0.5);
                cfg.initial.rate = InitialRate::RightMoving;
                cfg.dt = Some(0.05);
                cfg.t_end = Some(20.0);
            }
            Scenario::Modes => {
                cfg.sweep = Some(SweepConfig {
                    parameter: "V".into(),
                    values: None,
                    range: Some("0:2:0.1".into()),
                });
            }
            Scenario::Dispersion => {
                cfg.params.mass = Some(1.0);
                cfg.sweep = Some(SweepConfig {
                    parameter: "k".into(),
                    values: None,
                    range: Some("0:1.5:0.05".into()),
                });
            }
            Scenario::Relaxation => {
                cfg.units = Units::Si;
                cfg.relaxation = Some(RelaxationConfig {
                    channels: vec![
                        ChannelConfig {
                            label: "electron-phonon".into(),
                            tau: Some(1e-17),
                            mass: None,
                            speed: None,
                        },
                        ChannelConfig {
                            label: "planck".into(),
                            tau: None,
                            mass: None,
                            speed: None,
                        },
                    ],
                });
            }
            Scenario::Planck => cfg.units = Units::Si,
        }
        cfg
    }

    pub fn physical_constants(&self) -> Result<PhysicalConstants, CliError> {
        let base = match self.units {
            Units::Natural => PhysicalConstants::natural(),
            Units::Si => PhysicalConstants::codata_2018(),
        };
        let Some(over) = &self.constants else {
            return Ok(base);
        };
        PhysicalConstants::new(
            over.hbar.unwrap_or(base.hbar),
            over.c.unwrap_or(base.c),
            over.g.unwrap_or(base.g),
        )
        .map_err(|e| CliError::invalid("constants", e.to_string()))
    }

    /// Number of steps and checks shared by all evolution scenarios.
    pub fn steps(&self) -> Result<(f64, usize), CliError> {
        let dt = self
            .dt
            .ok_or_else(|| CliError::invalid("dt", "required for this scenario"))?;
        let t_end = self
            .t_end
            .ok_or_else(|| CliError::invalid("t_end", "required for this scenario"))?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(CliError::invalid("dt", format!("must be > 0, got {dt}")));
        }
        if !(t_end >= dt && t_end.is_finite()) {
            return Err(CliError::invalid("t_end", format!("must be >= dt = {dt}, got {t_end}")));
        }
        let n = (t_end / dt).round();
        if ((n * dt - t_end) / t_end).abs() > 1e-9 {
            return Err(CliError::invalid(
                "t_end",
                format!("{t_end} is not a whole number of steps of dt = {dt}"),
            ));
        }
        if n > 1e9 {
            return Err(CliError::invalid("t_end", "more than 1e9 steps"));
        }
        Ok((dt, n as usize))
    }

    pub fn grid(&self) -> Result<SpatialGrid, CliError> {
        self.grid
            .as_ref()
            .ok_or_else(|| CliError::invalid("grid", "required for this scenario"))?
            .build()
    }

    pub fn require(&self, field: &str, value: Option<f64>) -> Result<f64, CliError> {
        value.ok_or_else(|| CliError::invalid(field, format!("required for scenario `{}`", self.scenario.name())))
    }

    /// One configuration per sweep value, with the sweep removed.
    pub fn sweep_points(&self) -> Result<Vec<(f64, ScenarioConfig)>, CliError> {
        let Some(sweep) = &self.sweep else {
            return Ok(Vec::new());
        };
        let mut base = self.clone();
        base.sweep = None;
        sweep
            .points()?
            .into_iter()
            .map(|v| Ok((v, base.with_override(&sweep.parameter, &literal(v))?)))
            .collect()
    }

    /// Checks that do not need a run: grid, step count, required parameters.
    /// A swept evolution config is checked point by point, so the sweep may
    /// supply a required parameter.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.sweep.is_some() && self.scenario.is_evolution() {
            for (_, point) in self.sweep_points()? {
                point.validate()?;
            }
            return Ok(());
        }
        self.physical_constants()?;
        if let Some(0) = self.snapshot_every {
            return Err(CliError::invalid("snapshot_every", "must be at least 1"));
        }
        if self.scenario.is_evolution() {
            self.steps()?;
            let grid = self.grid()?;
            self.initial.profile(&grid)?;
        }
        for (name, v) in [
            ("params.tau", self.params.tau),
            ("params.diffusivity", self.params.diffusivity),
            ("params.mass", self.params.mass),
        ] {
            if let Some(v) = v {
                if !v.is_finite() || v < 0.0 {
                    return Err(CliError::invalid(name, format!("must be finite and >= 0, got {v}")));
                }
            }
        }
        match self.scenario {
            Scenario::Telegraph | Scenario::Fourier | Scenario::Wave => {
                let d = self.require("params.diffusivity", self.params.diffusivity)?;
                if d <= 0.0 {
                    return Err(CliError::invalid("params.diffusivity", "must be > 0"));
                }
                if self.scenario != Scenario::Fourier {
                    self.require("params.tau", self.params.tau)?;
                }
            }
            Scenario::Se | Scenario::ModifiedSe | Scenario::Dispersion => {
                let m = self.require("params.mass", self.params.mass)?;
                if m <= 0.0 {
                    return Err(CliError::invalid("params.mass", "must be > 0"));
                }
                if self.scenario != Scenario::Dispersion {
                    self.params.potential.sample(&self.grid()?, m)?;
                }
            }
            Scenario::PilotWave | Scenario::Planck => {}
            Scenario::Modes => {}
            Scenario::Relaxation => {
                let r = self
                    .relaxation
                    .as_ref()
                    .ok_or_else(|| CliError::invalid("relaxation", "required for scenario `relaxation`"))?;
                if r.channels.is_empty() {
                    return Err(CliError::invalid("relaxation.channels", "needs at least one channel"));
                }
            }
        }
        if let Some(s) = &self.sweep {
            s.points()?;
            let intrinsic = matches!(
                (self.scenario, s.parameter.as_str()),
                (Scenario::Modes, "V") | (Scenario::Dispersion, "k")
            );
            if !intrinsic && !self.scenario.is_evolution() {
                return Err(CliError::invalid(
                    "sweep.parameter",
                    format!(
                        "`{}` cannot be swept for scenario `{}`",
                        s.parameter,
                        self.scenario.name()
                    ),
                ));
            }
        } else if matches!(self.scenario, Scenario::Modes | Scenario::Dispersion) {
            return Err(CliError::invalid(
                "sweep",
                format!("scenario `{}` needs a sweep", self.scenario.name()),
            ));
        }
        Ok(())
    }

    /// Set a dotted key (`params.tau`, `grid.n_points`, …) to a TOML value.
    pub fn with_override(&self, key: &str, raw: &str) -> Result<Self, CliError> {
        let bad = |m: String| CliError::invalid(format!("--override {key}"), m);
        let mut doc = toml::Table::try_from(self).map_err(|e| bad(e.to_string()))?;
        let value = parse_value(raw);
        let parts: Vec<&str> = key.split('.').collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(bad("empty key segment".into()));
        }
        let (last, path) = parts.split_last().expect("split yields at least one part");
        let mut table = &mut doc;
        for p in path {
            let entry = table
                .entry(p.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            table = entry
                .as_table_mut()
                .ok_or_else(|| bad(format!("`{p}` is not a section")))?;
        }
        table.insert(last.to_string(), value);
        toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| bad(e.message().to_owned()))
    }
}

/// A TOML literal when it parses as one, a bare string otherwise.
/// TOML literal for a swept value; whole numbers stay integers so integer
/// keys such as `grid.n_points` can be swept.
fn literal(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:e}")
    }
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_owned()))
}
