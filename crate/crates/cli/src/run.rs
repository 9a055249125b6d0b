//! One module operation per scenario; the runner only wires configuration to
//! the solvers and collects rows.

use rayon::prelude::*;
use relaxwave_core::constants::{
    matthiessen_combine, matthiessen_deviation, planck_scales, quantum_relaxation_time, PhysicalConstants,
    RelaxationBudget, RelaxationChannel,
};
use relaxwave_core::export::{Cell, Table};
use relaxwave_core::grid::SpatialGrid;
use relaxwave_core::modes::{dispersion_omega, pilot_wave_advance, string_modes, PilotField};
use relaxwave_core::quantum::{evolve_modified_se, evolve_se, initial_time_derivative, QuantumParams, WaveField};
use relaxwave_core::telegraph::{
    diffusive_rate, evolve_fourier, evolve_telegraph, evolve_wave, TelegraphParams, ThermalField,
};
use relaxwave_core::Complex64;

use crate::config::{InitialRate, Scenario, ScenarioConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldState {
    Thermal {
        field: ThermalField,
        rate: Option<Vec<f64>>,
    },
    Wave(WaveField),
    Pilot(PilotField),
}

impl FieldState {
    pub fn grid(&self) -> SpatialGrid {
        match self {
            FieldState::Thermal { field, .. } => field.grid,
            FieldState::Wave(w) => w.grid,
            FieldState::Pilot(p) => p.grid,
        }
    }

    pub fn time(&self) -> f64 {
        match self {
            FieldState::Thermal { field, .. } => field.time,
            FieldState::Wave(w) => w.time,
            FieldState::Pilot(p) => p.time,
        }
    }

    pub fn values(&self) -> Vec<Complex64> {
        match self {
            FieldState::Thermal { field, .. } => field.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            FieldState::Wave(w) => w.psi.clone(),
            FieldState::Pilot(p) => p.psi.clone(),
        }
    }
}

#[derive(Debug, Clone)]
enum Stepper {
    Telegraph(TelegraphParams),
    Fourier(TelegraphParams),
    Wave(TelegraphParams),
    Se(QuantumParams),
    ModifiedSe(QuantumParams),
    Pilot(PhysicalConstants),
}

/// An evolution scenario with its initial state built and checked.
#[derive(Debug, Clone)]
pub struct Simulation {
    stepper: Stepper,
    pub state: FieldState,
    pub dt: f64,
    pub n_steps: usize,
    pub notes: Vec<String>,
}

impl Simulation {
    pub fn prepare(cfg: &ScenarioConfig) -> Result<Self, CliError> {
        cfg.validate()?;
        let constants = cfg.physical_constants()?;
        let grid = cfg.grid()?;
        let (dt, n_steps) = cfg.steps()?;
        let profile = cfg.initial.profile(&grid)?;
        let complex = cfg.scenario.is_quantum();
        let samples: Vec<(Complex64, Complex64)> =
            grid.coordinates().iter().map(|&x| profile.eval(x, complex)).collect();
        let f: Vec<Complex64> = samples.iter().map(|s| s.0).collect();
        let df: Vec<Complex64> = samples.iter().map(|s| s.1).collect();
        let mut notes = Vec::new();

        let rate_kind = cfg.initial.rate;
        let reject_rate = |what: &str| {
            CliError::invalid(
                "initial.rate",
                format!("`{what}` does not apply to scenario `{}`", cfg.scenario.name()),
            )
        };

        let (stepper, state) = match cfg.scenario {
            Scenario::Telegraph | Scenario::Fourier | Scenario::Wave => {
                let d = cfg.require("params.diffusivity", cfg.params.diffusivity)?;
                let tau = cfg.params.tau.unwrap_or(0.0);
                let field = ThermalField::new(grid, f.iter().map(|v| v.re).collect(), 0.0)?;
                let mut scenario = cfg.scenario;
                if scenario == Scenario::Telegraph && tau == 0.0 {
                    notes.push(
                        "tau = 0: the telegraph equation reduces to the heat equation; running scenario `fourier`"
                            .into(),
                    );
                    scenario = Scenario::Fourier;
                }
                if scenario == Scenario::Telegraph && cfg.params.ballistic {
                    notes.push("ballistic flag set: running scenario `wave`".into());
                    scenario = Scenario::Wave;
                }
                match scenario {
                    Scenario::Fourier => {
                        let p = TelegraphParams::new(tau, d)?;
                        (Stepper::Fourier(p), FieldState::Thermal { field, rate: None })
                    }
                    Scenario::Wave => {
                        let p = TelegraphParams::ballistic(tau, d)?;
                        let v = p.speed().unwrap_or(0.0);
                        let rate = match rate_kind {
                            InitialRate::Auto | InitialRate::Rest => vec![0.0; grid.n_points],
                            InitialRate::RightMoving => df.iter().map(|z| -v * z.re).collect(),
                            InitialRate::Consistent => diffusive_rate(&field, &p)?,
                        };
                        (
                            Stepper::Wave(p),
                            FieldState::Thermal {
                                field,
                                rate: Some(rate),
                            },
                        )
                    }
                    _ => {
                        let p = TelegraphParams::new(tau, d)?;
                        let v = p.speed().unwrap_or(0.0);
                        let rate = match rate_kind {
                            InitialRate::Auto | InitialRate::Consistent => diffusive_rate(&field, &p)?,
                            InitialRate::Rest => vec![0.0; grid.n_points],
                            InitialRate::RightMoving => df.iter().map(|z| -v * z.re).collect(),
                        };
                        (
                            Stepper::Telegraph(p),
                            FieldState::Thermal {
                                field,
                                rate: Some(rate),
                            },
                        )
                    }
                }
            }
            Scenario::Se | Scenario::ModifiedSe => {
                let mass = cfg.require("params.mass", cfg.params.mass)?;
                let potential = cfg.params.potential.sample(&grid, mass)?;
                let mut p = QuantumParams::new(mass, potential, &constants)?.with_scheme(cfg.params.scheme);
                if let Some(tau) = cfg.params.tau {
                    p = p.with_tau(tau);
                }
                let mut field = WaveField::new(grid, f, 0.0)?;
                if cfg.scenario == Scenario::Se {
                    (Stepper::Se(p), FieldState::Wave(field))
                } else {
                    let rate = match rate_kind {
                        InitialRate::Auto | InitialRate::Consistent => initial_time_derivative(&field, &p)?,
                        InitialRate::Rest => vec![Complex64::new(0.0, 0.0); grid.n_points],
                        InitialRate::RightMoving => return Err(reject_rate("right-moving")),
                    };
                    field = field.with_time_derivative(rate)?;
                    (Stepper::ModifiedSe(p), FieldState::Wave(field))
                }
            }
            Scenario::PilotWave => {
                let c = constants.c;
                let rate = match rate_kind {
                    InitialRate::Auto | InitialRate::Rest => vec![Complex64::new(0.0, 0.0); grid.n_points],
                    InitialRate::RightMoving => df.iter().map(|z| -c * z).collect(),
                    InitialRate::Consistent => return Err(reject_rate("consistent")),
                };
                let field = PilotField::new(grid, f, rate, 0.0)?;
                (Stepper::Pilot(constants), FieldState::Pilot(field))
            }
            other => {
                return Err(CliError::invalid(
                    "scenario",
                    format!("`{}` is not an evolution scenario", other.name()),
                ))
            }
        };
        Ok(Simulation {
            stepper,
            state,
            dt,
            n_steps,
            notes,
        })
    }

    fn advance(&mut self, n: usize) -> relaxwave_core::Result<()> {
        let dt = self.dt;
        self.state = match (&self.stepper, &self.state) {
            (Stepper::Telegraph(p), FieldState::Thermal { field, rate: Some(r) }) => {
                let (field, rate) = evolve_telegraph(field, r, p, dt, n)?;
                FieldState::Thermal {
                    field,
                    rate: Some(rate),
                }
            }
            (Stepper::Wave(p), FieldState::Thermal { field, rate: Some(r) }) => {
                let (field, rate) = evolve_wave(field, r, p, dt, n)?;
                FieldState::Thermal {
                    field,
                    rate: Some(rate),
                }
            }
            (Stepper::Fourier(p), FieldState::Thermal { field, .. }) => FieldState::Thermal {
                field: evolve_fourier(field, p, dt, n)?,
                rate: None,
            },
            (Stepper::Se(p), FieldState::Wave(w)) => FieldState::Wave(evolve_se(w, p, dt, n)?),
            (Stepper::ModifiedSe(p), FieldState::Wave(w)) => FieldState::Wave(evolve_modified_se(w, p, dt, n)?),
            (Stepper::Pilot(k), FieldState::Pilot(f)) => FieldState::Pilot(pilot_wave_advance(f, dt, n, k)?),
            _ => unreachable!("stepper and state are built together"),
        };
        Ok(())
    }

    /// Run to the end, calling `observe` on the initial state, every
    /// `snapshot_every` steps and on the final state.
    pub fn run(
        mut self,
        snapshot_every: Option<usize>,
        mut observe: impl FnMut(&FieldState),
    ) -> Result<FieldState, CliError> {
        observe(&self.state);
        let chunk = snapshot_every.unwrap_or(self.n_steps).max(1);
        let mut done = 0;
        while done < self.n_steps {
            let n = chunk.min(self.n_steps - done);
            self.advance(n).map_err(|e| e.offset_step(done))?;
            done += n;
            observe(&self.state);
        }
        Ok(self.state)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: Table,
    pub norm_log: Option<Table>,
    pub notes: Vec<String>,
}

fn evolve(cfg: &ScenarioConfig) -> Result<RunOutput, CliError> {
    let sim = Simulation::prepare(cfg)?;
    let notes = sim.notes.clone();
    let quantum = matches!(sim.state, FieldState::Wave(_) | FieldState::Pilot(_));
    let mut table = if quantum {
        Table::quantum_snapshots()
    } else {
        Table::thermal_snapshots()
    };
    let mut norm_log = matches!(sim.state, FieldState::Wave(_)).then(Table::norm_log);
    sim.run(cfg.snapshot_every, |state| match state {
        FieldState::Thermal { field, .. } => table.push_thermal(field),
        FieldState::Wave(w) => {
            table.push_wave(w);
            if let Some(log) = norm_log.as_mut() {
                log.push_norm(w.time, w.norm());
            }
        }
        FieldState::Pilot(p) => {
            let as_wave = WaveField {
                grid: p.grid,
                psi: p.psi.clone(),
                dpsi_dt: None,
                time: p.time,
            };
            table.push_wave(&as_wave);
        }
    })?;
    Ok(RunOutput { table, norm_log, notes })
}

fn modes(constants: &PhysicalConstants, points: &[f64]) -> Result<RunOutput, CliError> {
    let pairs = points
        .par_iter()
        .map(|&v| string_modes(v, constants))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::mode_table();
    for p in &pairs {
        table.push_mode(p);
    }
    let rest = planck_scales(constants)?.rest_energy(constants);
    Ok(RunOutput {
        table,
        norm_log: None,
        notes: vec![format!("regime boundary V = M_P c^2 / 2 = {:e}", 0.5 * rest)],
    })
}

fn dispersion(cfg: &ScenarioConfig, constants: &PhysicalConstants, points: &[f64]) -> Result<RunOutput, CliError> {
    let mass = cfg.require("params.mass", cfg.params.mass)?;
    let roots = points
        .par_iter()
        .map(|&k| dispersion_omega(k, mass, constants))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::dispersion_table();
    for (k, r) in points.iter().zip(&roots) {
        table.push_dispersion(*k, r);
    }
    Ok(RunOutput {
        table,
        norm_log: None,
        notes: Vec::new(),
    })
}

fn relaxation(cfg: &ScenarioConfig, constants: &PhysicalConstants) -> Result<RunOutput, CliError> {
    let spec = cfg
        .relaxation
        .as_ref()
        .ok_or_else(|| CliError::invalid("relaxation", "required"))?;
    let tau_p = planck_scales(constants)?.tau_planck;
    let mut channels = Vec::new();
    for (i, ch) in spec.channels.iter().enumerate() {
        let field = |name: &str| format!("relaxation.channels[{i}].{name}");
        let tau = match (ch.tau, ch.mass, ch.speed) {
            (Some(t), None, None) => t,
            (None, Some(m), Some(v)) => {
                quantum_relaxation_time(m, v, constants).map_err(|e| CliError::invalid(field("mass"), e.to_string()))?
            }
            (None, None, None) => tau_p,
            _ => {
                return Err(CliError::invalid(
                    field("tau"),
                    "give `tau`, or `mass` with `speed`, or neither for the Planck channel",
                ))
            }
        };
        channels.push(RelaxationChannel {
            label: ch.label.clone(),
            tau,
        });
    }
    let budget =
        RelaxationBudget::new(channels).map_err(|e| CliError::invalid("relaxation.channels", e.to_string()))?;
    let combined = matthiessen_combine(&budget)?;
    let mut table = Table::new(["label", "tau", "rate"]);
    for ch in budget.channels() {
        table.push(vec![ch.label.as_str().into(), ch.tau.into(), (1.0 / ch.tau).into()]);
    }
    table.push(vec!["combined".into(), combined.into(), (1.0 / combined).into()]);
    Ok(RunOutput {
        table,
        norm_log: None,
        notes: vec![format!(
            "combined tau differs from the fastest channel by {:e} (relative)",
            matthiessen_deviation(&budget)?
        )],
    })
}

pub fn planck_table(constants: &PhysicalConstants, si: bool) -> Result<Table, CliError> {
    let s = planck_scales(constants)?;
    let unit = |u: &'static str| if si { u } else { "1" };
    let mut table = Table::new(["quantity", "value", "unit"]);
    for (name, value, u) in [
        ("mass_planck", s.mass_planck, "kg"),
        ("length_planck", s.length_planck, "m"),
        ("time_planck", s.time_planck, "s"),
        ("tau_planck", s.tau_planck, "s"),
        ("rest_energy_planck", s.rest_energy(constants), "J"),
    ] {
        table.push(vec![name.into(), value.into(), unit(u).into()]);
    }
    Ok(table)
}

fn prefix(table: Table, index: usize, name: &str, value: f64) -> Table {
    let mut out = Table::new(
        ["sweep_index".to_owned(), name.to_owned()]
            .into_iter()
            .chain(table.columns),
    );
    for row in table.rows {
        let mut cells: Vec<Cell> = vec![index.into(), value.into()];
        cells.extend(row);
        out.push(cells);
    }
    out
}

/// Evaluate a configuration. Sweep points run in parallel on the current
/// rayon pool; results are gathered in sweep order.
pub fn run_config(cfg: &ScenarioConfig) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    let constants = cfg.physical_constants()?;
    match cfg.scenario {
        Scenario::Modes => modes(&constants, &cfg.sweep.as_ref().expect("validated").points()?),
        Scenario::Dispersion => dispersion(cfg, &constants, &cfg.sweep.as_ref().expect("validated").points()?),
        Scenario::Relaxation => relaxation(cfg, &constants),
        Scenario::Planck => Ok(RunOutput {
            table: planck_table(&constants, cfg.units == crate::config::Units::Si)?,
            norm_log: None,
            notes: Vec::new(),
        }),
        _ => match &cfg.sweep {
            None => evolve(cfg),
            Some(sweep) => {
                let runs = cfg
                    .sweep_points()?
                    .par_iter()
                    .enumerate()
                    .map(|(i, (v, point))| evolve(point).map(|out| (i, *v, out)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                let mut table: Option<Table> = None;
                let mut norm_log: Option<Table> = None;
                let mut notes = Vec::new();
                for (i, v, out) in runs {
                    let t = prefix(out.table, i, &sweep.parameter, v);
                    match table.as_mut() {
                        Some(acc) => acc.extend(t),
                        None => table = Some(t),
                    }
                    if let Some(log) = out.norm_log {
                        let l = prefix(log, i, &sweep.parameter, v);
                        match norm_log.as_mut() {
                            Some(acc) => acc.extend(l),
                            None => norm_log = Some(l),
                        }
                    }
                    for n in out.notes {
                        if !notes.contains(&n) {
                            notes.push(n);
                        }
                    }
                }
                Ok(RunOutput {
                    table: table.expect("sweep has at least one point"),
                    norm_log,
                    notes,
                })
            }
        },
    }
}
