use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mushy_core::FaceCondition;

use crate::scenario::{CaseSpec, Format};

#[derive(Debug, Parser)]
#[command(
    name = "mushy",
    version,
    about = "One-phase solidification with an isothermal mushy zone: explicit solutions and coefficient identification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recover the unknown coefficient and ξ, or solve directly with every coefficient known.
    Solve(ScenarioArgs),
    /// Temperature profile (t, x, T, region) and fronts (t, s, r).
    Profile(ProfileArgs),
    /// Convective solutions as h0 grows, compared with the Dirichlet solution.
    Limit(LimitArgs),
    /// Residuals of the heat equation and of every boundary condition.
    Verify(VerifyArgs),
    /// Write a consistent scenario built from a chosen ξ.
    Manufacture(ManufactureArgs),
    /// Evaluate the data restrictions of the scenario's case.
    CheckRestrictions(ScenarioArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Override the scenario's problem.
    #[arg(long, value_parser = parse_face)]
    pub problem: Option<FaceCondition>,
    /// Override the scenario's case; the named coefficient is dropped from the data.
    #[arg(long, value_parser = parse_case)]
    pub case: Option<CaseSpec>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Root-finding tolerance (solve, profile, limit) or residual tolerance (verify).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario file (TOML, or JSON).
    pub scenario: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    pub scenario: PathBuf,
    #[command(flatten)]
    pub common: Common,
    /// Times, comma separated.
    #[arg(long = "t", value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Points per time on [0, s(t)] (or [0, x-max]).
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Fronts file; defaults to `<out>.fronts.csv` when --out is given.
    #[arg(long)]
    pub fronts_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    pub scenario: PathBuf,
    #[command(flatten)]
    pub common: Common,
    /// h0 values, comma separated; default 1e1, 1e2, ..., 1e6.
    #[arg(long, value_delimiter = ',')]
    pub h0_grid: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub scenario: PathBuf,
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "t", value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Relative finite-difference step.
    #[arg(long)]
    pub fd_step: Option<f64>,
    /// Added to ξ before building the solution.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub xi_offset: f64,
    /// Tolerance of the normalised PDE residual.
    #[arg(long, default_value_t = 1e-6)]
    pub pde_tol: f64,
}

#[derive(Debug, Args)]
pub struct ManufactureArgs {
    #[arg(long)]
    pub xi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q0: f64,
    #[arg(long, default_value_t = 2.0)]
    pub h0: f64,
    #[command(flatten)]
    pub common: Common,
}

fn parse_face(s: &str) -> Result<FaceCondition, String> {
    s.parse()
        .map_err(|_| format!("expected convective or dirichlet, got '{s}'"))
}

fn parse_case(s: &str) -> Result<CaseSpec, String> {
    s.parse()
}
