use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "modnuc",
    version,
    about = "Fermionic Fock-space audits and nuclearity bound reports",
    after_help = "Exit status: 0 all contracts held, 1 a numerical contract was violated, \
                  2 malformed input, 3 quadrature did not converge.\n\
                  NUCLEARITY_THREADS caps the number of worker threads."
)]
pub struct Cli {
    /// TOML file of parameter values; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Write the JSON report to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Write numeric tables as `index,value` CSV files into DIR
    #[arg(long, global = true, value_name = "DIR")]
    pub csv: Option<PathBuf>,

    /// Master seed of the randomized audits
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Threshold for exact algebraic identities
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_structural: f64,

    /// Threshold for derived inequalities
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_derived: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Randomized audits of the operator identities
    #[command(subcommand)]
    Verify(Verify),
    /// Bound chain on random pairs and the empirical nuclear sum
    Bound(BoundArgs),
    /// Fermionic bound against the bosonic determinant
    FermiBose(FermiBoseArgs),
    /// Intersection of the nested three-mode field algebras
    Intersect,
    /// Modular nuclearity report for a translated wedge
    Ising(IsingArgs),
    /// Energy nuclearity report at inverse temperature beta
    Energy(EnergyArgs),
    /// Golden regression values
    #[command(subcommand)]
    Golden(Golden),
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Canonical anticommutation relations and creator norms
    Car(CarArgs),
    /// Leibniz rule, norm bounds and closed forms of the graded derivations
    Derivations(DerivationArgs),
    /// Commutator expansion of the vacuum overlaps
    Identity(ExpansionArgs),
    /// Estimate of the vacuum overlaps through the one-particle operator
    Estimate(ExpansionArgs),
}

#[derive(Debug, Args)]
pub struct CarArgs {
    /// Largest mode count; every d from 1 up is audited
    #[arg(long, default_value_t = 8)]
    pub modes: usize,
    /// Random pairs per mode count
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct DerivationArgs {
    /// Largest mode count; instances cycle through 1..=modes
    #[arg(long, default_value_t = 4)]
    pub modes: usize,
    #[arg(long, default_value_t = 500)]
    pub instances: usize,
    /// Largest degree of the random field polynomials
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
}

#[derive(Debug, Args)]
pub struct ExpansionArgs {
    /// Largest mode count; instances cycle through 1..=modes
    #[arg(long, default_value_t = 4)]
    pub modes: usize,
    #[arg(long, default_value_t = 500)]
    pub instances: usize,
    /// Largest number of creators applied to the vacuum
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    /// Largest degree of the random field polynomials
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 6)]
    pub modes: usize,
    #[arg(long, default_value_t = 200)]
    pub instances: usize,
    /// Random field monomials per instance in the empirical sum
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct FermiBoseArgs {
    #[arg(long, default_value_t = 6)]
    pub modes: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Operator-norm cap of the random contractions
    #[arg(long, default_value_t = 0.95)]
    pub max_norm: f64,
}

#[derive(Debug, Args)]
pub struct IsingArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Time component of the translation
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x0: f64,
    /// Space component of the translation; the left wedge needs x1 < -|x0|
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub x1: f64,
    /// Basis functions per field family
    #[arg(long, default_value_t = 8)]
    pub basis: usize,
    /// Scale of the rational basis functions
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Rapidity cutoff of the quadrature grid
    #[arg(long, default_value_t = 12.0)]
    pub theta_max: f64,
    /// Quadrature nodes, a multiple of 10
    #[arg(long, default_value_t = 2000)]
    pub n_points: usize,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Inverse temperature
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Basis functions per field family
    #[arg(long, default_value_t = 8)]
    pub basis: usize,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 12.0)]
    pub theta_max: f64,
    /// Quadrature nodes, a multiple of 10
    #[arg(long, default_value_t = 2000)]
    pub n_points: usize,
}

#[derive(Debug, Subcommand)]
pub enum Golden {
    /// Recompute the golden values and compare with the fixture
    Check(GoldenArgs),
    /// Recompute the golden values and overwrite the fixture
    Write(GoldenArgs),
}

#[derive(Debug, Args)]
pub struct GoldenArgs {
    /// Fixture file [default: the fixture shipped with the crate]
    #[arg(long, value_name = "FILE")]
    pub fixture: Option<PathBuf>,
}
