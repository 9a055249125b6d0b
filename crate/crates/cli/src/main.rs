use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use relaxwave_cli::{
    execute_run, execute_study, load_config, Adjustments, CliError, Scenario, ScenarioConfig, StudyParam, Units,
};

#[derive(Parser)]
#[command(
    name = "relaxwave",
    version,
    about = "Telegraph, relaxation-modified Schrödinger and string-mode scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitsArg {
    Si,
    Natural,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Si => Units::Si,
            UnitsArg::Natural => Units::Natural,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamArg {
    Tau,
    Dt,
    Dx,
}

#[derive(clap::Args)]
struct Common {
    /// Scenario file (TOML, or JSON by extension) or a built-in scenario name
    config: String,
    /// Set a configuration key, e.g. `params.tau=0.01`
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads for sweeps and study levels
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    units: Option<UnitsArg>,
    /// Write here instead of `output.path` (studies print to stdout without it)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario
    Run {
        #[command(flatten)]
        common: Common,
        /// Potential sweep for `modes` as start:stop:step
        #[arg(long, value_name = "A:B:S")]
        v_sweep: Option<String>,
    },
    /// Refine one parameter and report the observed order
    Study {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        param: ParamArg,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Print the Planck scales
    Planck {
        #[arg(long, value_enum, default_value = "si")]
        units: UnitsArg,
    },
}

fn adjustments(c: &Common, v_sweep: Option<String>) -> Adjustments {
    Adjustments {
        overrides: c.overrides.clone(),
        units: c.units.map(Into::into),
        v_sweep,
        output: c.output.clone(),
    }
}

fn report(notes: &[String], written: &[PathBuf]) {
    for n in notes {
        eprintln!("note: {n}");
    }
    for w in written {
        eprintln!("wrote {}", w.display());
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { common, v_sweep } => {
            let cfg = load_config(&common.config, &adjustments(&common, v_sweep))?;
            let (notes, written) = execute_run(&cfg, common.threads)?;
            report(&notes, &written);
        }
        Command::Study { common, param, levels } => {
            let mut cfg = load_config(&common.config, &adjustments(&common, None))?;
            // `output.path` names the run's data; a study only writes where asked
            cfg.output.path = common.output.clone();
            let param = match param {
                ParamArg::Tau => StudyParam::Tau,
                ParamArg::Dt => StudyParam::Dt,
                ParamArg::Dx => StudyParam::Dx,
            };
            let (study, written) = execute_study(&cfg, param, levels, common.threads)?;
            report(&study.notes(), &written);
            study.check()?;
        }
        Command::Planck { units } => {
            let mut cfg = ScenarioConfig::preset(Scenario::Planck);
            cfg.units = units.into();
            execute_run(&cfg, None)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
