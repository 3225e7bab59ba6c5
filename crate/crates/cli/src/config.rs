//! Resolution of command-line flags, config-file values and defaults into
//! one validated [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory, FromArgMatches};
use modnuc::Tolerances;
use serde::{Deserialize, Serialize};

use crate::args::{Cli, Command, Golden, Verify};

pub const MAX_MODES: usize = 14;
pub const MAX_BASIS: usize = 64;
pub const MAX_POINTS: usize = 1_000_000;
pub const MAX_DEGREE: usize = 8;
pub const MAX_INSTANCES: usize = 1_000_000;

/// Keys accepted in a `--config` TOML file. Every key is optional and
/// applies only to the commands that take it.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub modes: Option<usize>,
    pub trials: Option<usize>,
    pub instances: Option<usize>,
    pub degree: Option<usize>,
    pub order: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub max_norm: Option<f64>,
    pub mass: Option<f64>,
    pub x0: Option<f64>,
    pub x1: Option<f64>,
    pub beta: Option<f64>,
    pub basis: Option<usize>,
    pub kappa: Option<f64>,
    pub theta_max: Option<f64>,
    pub n_points: Option<usize>,
    pub tol_structural: Option<f64>,
    pub tol_derived: Option<f64>,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub fixture: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e.message().trim()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Parameters {
    Car {
        modes: usize,
        trials: usize,
        seed: u64,
    },
    Derivations {
        modes: usize,
        instances: usize,
        degree: usize,
        seed: u64,
    },
    Expansion {
        modes: usize,
        instances: usize,
        order: usize,
        degree: usize,
        seed: u64,
    },
    Bound {
        modes: usize,
        instances: usize,
        samples: usize,
        seed: u64,
    },
    FermiBose {
        modes: usize,
        trials: usize,
        max_norm: f64,
        seed: u64,
    },
    Intersect {
        modes: usize,
    },
    Ising {
        mass: f64,
        x0: f64,
        x1: f64,
        basis: usize,
        kappa: f64,
        theta_max: f64,
        n_points: usize,
    },
    Energy {
        mass: f64,
        beta: f64,
        basis: usize,
        kappa: f64,
        theta_max: f64,
        n_points: usize,
    },
    Golden {
        write: bool,
        fixture: PathBuf,
    },
}

/// Fully resolved run: every value the command reads, after flags,
/// config file and defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub parameters: Parameters,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// Malformed input: a one-line diagnostic, exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Malformed(pub String);

impl std::fmt::Display for Malformed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Outcome of argument parsing short of a run.
#[derive(Debug)]
pub enum ParseExit {
    /// `--help` or `--version`; print and exit 0.
    Display(String),
    Malformed(Malformed),
}

pub fn default_fixture() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/golden.json"))
}

/// Which flags were typed on the command line, looked up in the matches of
/// the innermost subcommand (global flags propagate there).
struct Sources<'a> {
    leaf: &'a ArgMatches,
}

impl Sources<'_> {
    fn given(&self, id: &str) -> bool {
        self.leaf.try_contains_id(id).unwrap_or(false) && self.leaf.value_source(id) == Some(ValueSource::CommandLine)
    }

    fn pick<T>(&self, id: &str, flag: T, file: Option<T>) -> T {
        if self.given(id) {
            flag
        } else {
            file.unwrap_or(flag)
        }
    }
}

fn leaf(matches: &ArgMatches) -> &ArgMatches {
    match matches.subcommand() {
        Some((_, sub)) => leaf(sub),
        None => matches,
    }
}

pub fn parse<I, T>(args: I) -> Result<RunConfig, ParseExit>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    let matches = Cli::command().try_get_matches_from(args).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseExit::Display(e.to_string()),
        _ => ParseExit::Malformed(Malformed(first_line(&e.to_string()))),
    })?;
    let cli = Cli::from_arg_matches(&matches).map_err(|e| ParseExit::Malformed(Malformed(first_line(&e.to_string()))))?;
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(|e| ParseExit::Malformed(Malformed(e)))?,
        None => FileConfig::default(),
    };
    let config = resolve(&cli, &file, leaf(&matches)).map_err(ParseExit::Malformed)?;
    config.validate().map_err(ParseExit::Malformed)?;
    Ok(config)
}

fn first_line(message: &str) -> String {
    message.lines().find(|l| !l.trim().is_empty()).unwrap_or("malformed arguments").trim().to_string()
}

fn resolve(cli: &Cli, file: &FileConfig, leaf: &ArgMatches) -> Result<RunConfig, Malformed> {
    let s = Sources { leaf };
    let seed = s.pick("seed", cli.seed, file.seed);
    let (command, parameters) = match &cli.command {
        Command::Verify(Verify::Car(a)) => (
            "verify car",
            Parameters::Car {
                modes: s.pick("modes", a.modes, file.modes),
                trials: s.pick("trials", a.trials, file.trials),
                seed,
            },
        ),
        Command::Verify(Verify::Derivations(a)) => (
            "verify derivations",
            Parameters::Derivations {
                modes: s.pick("modes", a.modes, file.modes),
                instances: s.pick("instances", a.instances, file.instances),
                degree: s.pick("degree", a.degree, file.degree),
                seed,
            },
        ),
        Command::Verify(v @ (Verify::Identity(a) | Verify::Estimate(a))) => (
            if matches!(v, Verify::Identity(_)) { "verify identity" } else { "verify estimate" },
            Parameters::Expansion {
                modes: s.pick("modes", a.modes, file.modes),
                instances: s.pick("instances", a.instances, file.instances),
                order: s.pick("order", a.order, file.order),
                degree: s.pick("degree", a.degree, file.degree),
                seed,
            },
        ),
        Command::Bound(a) => (
            "bound",
            Parameters::Bound {
                modes: s.pick("modes", a.modes, file.modes),
                instances: s.pick("instances", a.instances, file.instances),
                samples: s.pick("samples", a.samples, file.samples),
                seed,
            },
        ),
        Command::FermiBose(a) => (
            "fermi-bose",
            Parameters::FermiBose {
                modes: s.pick("modes", a.modes, file.modes),
                trials: s.pick("trials", a.trials, file.trials),
                max_norm: s.pick("max_norm", a.max_norm, file.max_norm),
                seed,
            },
        ),
        Command::Intersect => ("intersect", Parameters::Intersect { modes: 3 }),
        Command::Ising(a) => (
            "ising",
            Parameters::Ising {
                mass: s.pick("mass", a.mass, file.mass),
                x0: s.pick("x0", a.x0, file.x0),
                x1: s.pick("x1", a.x1, file.x1),
                basis: s.pick("basis", a.basis, file.basis),
                kappa: s.pick("kappa", a.kappa, file.kappa),
                theta_max: s.pick("theta_max", a.theta_max, file.theta_max),
                n_points: s.pick("n_points", a.n_points, file.n_points),
            },
        ),
        Command::Energy(a) => (
            "energy",
            Parameters::Energy {
                mass: s.pick("mass", a.mass, file.mass),
                beta: s.pick("beta", a.beta, file.beta),
                basis: s.pick("basis", a.basis, file.basis),
                kappa: s.pick("kappa", a.kappa, file.kappa),
                theta_max: s.pick("theta_max", a.theta_max, file.theta_max),
                n_points: s.pick("n_points", a.n_points, file.n_points),
            },
        ),
        Command::Golden(g) => {
            let (name, write, a) = match g {
                Golden::Check(a) => ("golden check", false, a),
                Golden::Write(a) => ("golden write", true, a),
            };
            let fixture = a.fixture.clone().or_else(|| file.fixture.clone()).unwrap_or_else(default_fixture);
            (name, Parameters::Golden { write, fixture })
        }
    };
    Ok(RunConfig {
        command: command.to_string(),
        parameters,
        tolerances: Tolerances {
            structural: s.pick("tol_structural", cli.tol_structural, file.tol_structural),
            derived: s.pick("tol_derived", cli.tol_derived, file.tol_derived),
            ..Tolerances::default()
        },
        output: cli.output.clone().or_else(|| file.output.clone()),
        csv: cli.csv.clone().or_else(|| file.csv.clone()),
    })
}

fn within(name: &str, value: usize, lo: usize, hi: usize) -> Result<(), Malformed> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(Malformed(format!("{name} = {value} is outside {lo}..={hi}")))
    }
}

fn positive(name: &str, value: f64) -> Result<(), Malformed> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Malformed(format!("{name} = {value} must be positive and finite")))
    }
}

fn finite(name: &str, value: f64) -> Result<(), Malformed> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Malformed(format!("{name} = {value} must be finite")))
    }
}

impl RunConfig {
    /// Documented ranges: `modes ≤ 14`, `basis ≤ 64`, `n_points ≤ 10⁶`.
    pub fn validate(&self) -> Result<(), Malformed> {
        positive("tol_structural", self.tolerances.structural)?;
        positive("tol_derived", self.tolerances.derived)?;
        match self.parameters {
            Parameters::Car { modes, trials, .. } => {
                within("modes", modes, 1, MAX_MODES)?;
                within("trials", trials, 1, MAX_INSTANCES)
            }
            Parameters::Derivations {
                modes, instances, degree, ..
            } => {
                within("modes", modes, 1, MAX_MODES)?;
                within("instances", instances, 1, MAX_INSTANCES)?;
                within("degree", degree, 1, MAX_DEGREE)
            }
            Parameters::Expansion {
                modes,
                instances,
                order,
                degree,
                ..
            } => {
                within("modes", modes, 1, MAX_MODES)?;
                within("instances", instances, 1, MAX_INSTANCES)?;
                within("order", order, 0, MAX_MODES)?;
                within("degree", degree, 1, MAX_DEGREE)
            }
            Parameters::Bound {
                modes, instances, samples, ..
            } => {
                within("modes", modes, 1, MAX_MODES)?;
                within("instances", instances, 1, MAX_INSTANCES)?;
                within("samples", samples, 1, MAX_INSTANCES)
            }
            Parameters::FermiBose {
                modes, trials, max_norm, ..
            } => {
                within("modes", modes, 1, MAX_MODES)?;
                within("trials", trials, 1, MAX_INSTANCES)?;
                if max_norm > 0.0 && max_norm < 1.0 {
                    Ok(())
                } else {
                    Err(Malformed(format!("max_norm = {max_norm} must lie in (0, 1)")))
                }
            }
            Parameters::Intersect { .. } | Parameters::Golden { .. } => Ok(()),
            Parameters::Ising {
                mass,
                x0,
                x1,
                basis,
                kappa,
                theta_max,
                n_points,
            } => {
                positive("mass", mass)?;
                finite("x0", x0)?;
                finite("x1", x1)?;
                spectral_ranges(basis, kappa, theta_max, n_points)
            }
            Parameters::Energy {
                mass,
                beta,
                basis,
                kappa,
                theta_max,
                n_points,
            } => {
                positive("mass", mass)?;
                positive("beta", beta)?;
                spectral_ranges(basis, kappa, theta_max, n_points)
            }
        }
    }
}

fn spectral_ranges(basis: usize, kappa: f64, theta_max: f64, n_points: usize) -> Result<(), Malformed> {
    within("basis", basis, 1, MAX_BASIS)?;
    positive("kappa", kappa)?;
    positive("theta_max", theta_max)?;
    within("n_points", n_points, 10, MAX_POINTS)?;
    if !n_points.is_multiple_of(modnuc::ising::PANEL_ORDER) {
        return Err(Malformed(format!(
            "n_points = {n_points} must be a multiple of {}",
            modnuc::ising::PANEL_ORDER
        )));
    }
    Ok(())
}
