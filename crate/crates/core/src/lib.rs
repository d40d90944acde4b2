//! Explicit similarity solutions for one-phase solidification with an
//! isothermal mushy zone, and identification of one thermal coefficient
//! from an overspecified face condition.
//!
//! - [`direct`]: the solution for fully known data.
//! - [`inverse::convective`] / [`inverse::dirichlet`]: the six inverse cases
//!   for each overspecifying condition, with their data restrictions.
//! - [`verify`]: residual checks that do not trust the production code paths.

// `!(a < b)` is used on purpose: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod direct;
pub mod inverse;
pub mod manufacture;
pub mod model;
pub mod rootfind;
pub mod specfun;
pub mod verify;

pub use direct::{build_solution, consistency_residuals, solve_stefan_xi, ConsistencyResiduals, Region, Temperature};
pub use inverse::dirichlet::{limit_study, LimitRow, LimitStudy};
pub use inverse::{solve, SolveError};
pub use manufacture::{manufacture, ManufactureInput, ManufacturedScenario};
pub use model::{
    validate, BoundaryData, CaseResult, Coefficient, CoefficientSet, FaceCondition, ModelError, MushyCoefficients,
    Problem, RestrictionId, RestrictionReport, SimilaritySolution, ThermalCoefficients, UnknownCase,
};
pub use rootfind::{MonotoneEquation, RootError};
pub use specfun::{erf, erf_inv, erfc, Precision, SpecFunError};
pub use verify::{ConditionId, GridSpec, ResidualGrid, VerifyError};
