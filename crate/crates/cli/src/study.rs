//! Convergence studies: refine one parameter by halving and report the
//! observed order from successive error ratios.

use rayon::prelude::*;
use relaxwave_core::export::{Cell, Table};
use relaxwave_core::grid::{l2_distance, SpatialGrid};
use relaxwave_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Scenario, ScenarioConfig};
use crate::error::CliError;
use crate::run::Simulation;

/// Errors below this are treated as roundoff; their ratios carry no order.
pub const ERROR_FLOOR: f64 = 1e-10;

pub const MIN_LEVELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyParam {
    Tau,
    Dt,
    Dx,
}

impl StudyParam {
    pub fn name(self) -> &'static str {
        match self {
            StudyParam::Tau => "tau",
            StudyParam::Dt => "dt",
            StudyParam::Dx => "dx",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Observed(f64),
    /// Both errors at the roundoff floor.
    AtFloor(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub level: usize,
    pub value: f64,
    pub error: f64,
    pub order: Option<Order>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub param: StudyParam,
    pub rows: Vec<StudyRow>,
    pub monotone: bool,
}

fn final_values(cfg: &ScenarioConfig) -> Result<(SpatialGrid, Vec<Complex64>), CliError> {
    let sim = Simulation::prepare(cfg)?;
    let state = sim.run(None, |_| {})?;
    Ok((state.grid(), state.values()))
}

pub fn convergence_study(cfg: &ScenarioConfig, param: StudyParam, levels: usize) -> Result<StudyReport, CliError> {
    if levels < MIN_LEVELS {
        return Err(CliError::invalid(
            "--levels",
            format!("need at least {MIN_LEVELS}, got {levels}"),
        ));
    }
    if !cfg.scenario.is_evolution() {
        return Err(CliError::invalid(
            "scenario",
            format!("`{}` has no time stepping to study", cfg.scenario.name()),
        ));
    }
    if cfg.sweep.is_some() {
        return Err(CliError::invalid("sweep", "studies refine one run; remove the sweep"));
    }
    cfg.validate()?;
    let mut base = cfg.clone();
    base.snapshot_every = None;
    let scale = |i: usize| 0.5f64.powi(i as i32);

    let (values, errors): (Vec<f64>, Vec<f64>) = match param {
        StudyParam::Tau => {
            let limit_scenario = match cfg.scenario {
                Scenario::Telegraph => Scenario::Fourier,
                Scenario::ModifiedSe => Scenario::Se,
                other => {
                    return Err(CliError::invalid(
                        "scenario",
                        format!("a tau study needs `telegraph` or `modified-se`, got `{}`", other.name()),
                    ))
                }
            };
            let tau0 = cfg.require("params.tau", cfg.params.tau)?;
            if tau0 <= 0.0 {
                return Err(CliError::invalid("params.tau", "must be > 0 for a tau study"));
            }
            let mut limit = base.clone();
            limit.scenario = limit_scenario;
            let (grid, reference) = final_values(&limit)?;
            let taus: Vec<f64> = (0..levels).map(|i| tau0 * scale(i)).collect();
            let errors = taus
                .par_iter()
                .map(|&tau| {
                    let mut c = base.clone();
                    c.params.tau = Some(tau);
                    final_values(&c).map(|(_, u)| l2_distance(&grid, &u, &reference))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (taus, errors)
        }
        StudyParam::Dt => {
            let (dt0, n0) = cfg.steps()?;
            let runs = (0..=levels)
                .into_par_iter()
                .map(|i| {
                    let mut c = base.clone();
                    c.dt = Some(dt0 * scale(i));
                    c.t_end = Some(n0 as f64 * dt0);
                    final_values(&c)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let errors = runs
                .windows(2)
                .map(|w| l2_distance(&w[0].0, &w[0].1, &w[1].1))
                .collect();
            ((0..levels).map(|i| dt0 * scale(i)).collect(), errors)
        }
        StudyParam::Dx => {
            let g0 = cfg.grid.clone().expect("validated");
            let runs = (0..=levels)
                .into_par_iter()
                .map(|i| {
                    let mut c = base.clone();
                    c.grid.as_mut().expect("validated").n_points = g0.n_points << i;
                    final_values(&c)
                })
                .collect::<Result<Vec<_>, _>>()?;
            // coarse node j coincides with fine node 2j
            let errors = runs
                .windows(2)
                .map(|w| {
                    w[0].1
                        .iter()
                        .enumerate()
                        .map(|(j, a)| (a - w[1].1[2 * j]).norm())
                        .fold(0.0, f64::max)
                })
                .collect();
            ((0..levels).map(|i| runs[i].0.dx()).collect(), errors)
        }
    };

    let floor_label = if param == StudyParam::Dx { "spectral" } else { "exact" };
    let mut monotone = true;
    let rows = (0..levels)
        .map(|i| {
            let order = (i > 0).then(|| {
                let (e0, e1) = (errors[i - 1], errors[i]);
                if e0 < ERROR_FLOOR && e1 < ERROR_FLOOR {
                    Order::AtFloor(floor_label)
                } else {
                    if e1 > e0 {
                        monotone = false;
                    }
                    Order::Observed((e0 / e1).ln() / (values[i - 1] / values[i]).ln())
                }
            });
            StudyRow {
                level: i,
                value: values[i],
                error: errors[i],
                order,
            }
        })
        .collect();
    Ok(StudyReport { param, rows, monotone })
}

impl StudyReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(["level", self.param.name(), "error", "observed_order"]);
        for r in &self.rows {
            let order: Cell = match r.order {
                None => "".into(),
                Some(Order::Observed(p)) => p.into(),
                Some(Order::AtFloor(label)) => label.into(),
            };
            t.push(vec![r.level.into(), r.value.into(), r.error.into(), order]);
        }
        t
    }

    /// Last observed order, if any level produced one.
    pub fn final_order(&self) -> Option<Order> {
        self.rows.iter().rev().find_map(|r| r.order)
    }

    pub fn notes(&self) -> Vec<String> {
        let mut notes = vec![
            format!("study parameter: {}", self.param.name()),
            format!("levels: {}", self.rows.len()),
            format!("monotone: {}", if self.monotone { "yes" } else { "no" }),
        ];
        if !self.monotone {
            notes.push("error sequence is not monotone".into());
        }
        notes
    }

    /// Fails when any observed order falls below 0.5.
    pub fn check(&self) -> Result<(), CliError> {
        for r in &self.rows {
            if let Some(Order::Observed(p)) = r.order {
                if !(p >= 0.5) {
                    return Err(CliError::OrderTooLow {
                        level: r.level,
                        order: p,
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn needs_three_levels() {
        let cfg = ScenarioConfig::preset(Scenario::Telegraph);
        assert!(convergence_study(&cfg, StudyParam::Tau, 2).is_err());
    }

    #[test]
    fn tau_study_rejects_first_order_scenarios() {
        let cfg = ScenarioConfig::preset(Scenario::Se);
        let err = convergence_study(&cfg, StudyParam::Tau, 3).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn exact_stepping_hits_the_floor() {
        let mut cfg = ScenarioConfig::preset(Scenario::Fourier);
        cfg.grid.as_mut().unwrap().n_points = 32;
        cfg.t_end = Some(0.01);
        let r = convergence_study(&cfg, StudyParam::Dt, 3).unwrap();
        assert_eq!(r.final_order(), Some(Order::AtFloor("exact")));
        r.check().unwrap();
    }

    #[test]
    fn low_order_fails_check() {
        let r = StudyReport {
            param: StudyParam::Dt,
            rows: vec![
                StudyRow {
                    level: 0,
                    value: 1.0,
                    error: 1.0,
                    order: None,
                },
                StudyRow {
                    level: 1,
                    value: 0.5,
                    error: 0.9,
                    order: Some(Order::Observed(0.15)),
                },
            ],
            monotone: true,
        };
        assert_eq!(r.check().unwrap_err().exit_code(), 3);
    }
}
