//! Identification of one unknown thermal coefficient together with ξ.
//!
//! Both overspecified problems share the same closed forms; the Dirichlet
//! versions are the convective ones with the face factor
//! `Φ = 1 - q0/(h0·D∞)` replaced by 1. The functions in this module take Φ
//! explicitly so that both solvers evaluate literally the same expressions.

pub mod convective;
pub mod dirichlet;

use thiserror::Error;

use crate::direct::{build_solution, DirectError};
use crate::model::{
    BoundaryData, CaseResult, Coefficient, CoefficientSet, FaceCondition, ModelError, MushyCoefficients, Problem,
    RestrictionReport, ThermalCoefficients, UnknownCase,
};
use crate::rootfind::RootError;
use crate::specfun::{erf, erf_prime, is_near_saturation, SpecFunError, FRAC_2_SQRT_PI};

pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("data restriction violated: {}", violated_summary(.reports))]
    Restriction { reports: Vec<RestrictionReport> },
    #[error("root finding failed: {0}")]
    Root(#[from] RootError),
    #[error("special function failure: {0}")]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Direct(#[from] DirectError),
}

fn violated_summary(reports: &[RestrictionReport]) -> String {
    reports
        .iter()
        .filter(|r| !r.satisfied)
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl SolveError {
    /// The unsatisfied reports of a restriction failure; empty otherwise.
    pub fn violated(&self) -> Vec<&RestrictionReport> {
        match self {
            SolveError::Restriction { reports } => reports.iter().filter(|r| !r.satisfied).collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_restriction(&self) -> bool {
        matches!(self, SolveError::Restriction { .. })
    }
}

/// Fail with every report evaluated so far if any of them is violated.
pub(crate) fn guard(reports: &[RestrictionReport]) -> Result<(), SolveError> {
    if reports.iter().all(|r| r.satisfied) {
        Ok(())
    } else {
        Err(SolveError::Restriction {
            reports: reports.to_vec(),
        })
    }
}

/// f2(x) = x·exp(x²)
pub fn f2(x: f64) -> f64 {
    x * (x * x).exp()
}

pub fn f2_prime(x: f64) -> f64 {
    (x * x).exp() * (1.0 + 2.0 * x * x)
}

/// (D∞/q0)·√(kρc/π)·Φ; erf(ξ) equals this on a solution.
pub fn face_argument(k: f64, rho: f64, c: f64, q0: f64, d_inf: f64, factor: f64) -> f64 {
    d_inf / q0 * (k * rho * c).sqrt() / SQRT_PI * factor
}

/// (q0/l)·√(c/(ρk)), the right side of the latent-heat balance.
pub fn stefan_target(l: f64, k: f64, rho: f64, c: f64, q0: f64) -> f64 {
    q0 / l * (c / (rho * k)).sqrt()
}

/// l = √(c/(ρk))·q0·e^{-ξ²} / [ξ + γ(1-ε)√(kρc)/(2q0)·e^{ξ²}]
pub fn latent_heat(xi: f64, k: f64, rho: f64, c: f64, epsilon: f64, gamma: f64, q0: f64) -> f64 {
    let e = (xi * xi).exp();
    let weight = gamma * (1.0 - epsilon) * (k * rho * c).sqrt() / (2.0 * q0);
    (c / (rho * k)).sqrt() * q0 / e / (xi + weight * e)
}

/// γ = 2q0/((1-ε)√(kρc))·((q0/l)√(c/(ρk)) - f2(ξ))·e^{-2ξ²}
pub fn mushy_gamma(xi: f64, l: f64, k: f64, rho: f64, c: f64, epsilon: f64, q0: f64) -> f64 {
    let gap = stefan_target(l, k, rho, c, q0) - f2(xi);
    2.0 * q0 / ((1.0 - epsilon) * (k * rho * c).sqrt()) * gap * (-2.0 * xi * xi).exp()
}

/// ε = 1 - 2q0/(γ√(kρc))·((q0/l)√(c/(ρk)) - f2(ξ))·e^{-2ξ²}
pub fn mushy_epsilon(xi: f64, l: f64, k: f64, rho: f64, c: f64, gamma: f64, q0: f64) -> f64 {
    let gap = stefan_target(l, k, rho, c, q0) - f2(xi);
    1.0 - 2.0 * q0 / (gamma * (k * rho * c).sqrt()) * gap * (-2.0 * xi * xi).exp()
}

/// π·[q0·erf(ξ)/(D∞·Φ)]², which equals kρc on a solution. Dividing by the
/// product of the two known members gives k, ρ or c.
pub fn effusivity_squared(xi: f64, q0: f64, d_inf: f64, factor: f64) -> f64 {
    let g = q0 * erf(xi) / (d_inf * factor);
    std::f64::consts::PI * g * g
}

/// γ√π(1-ε)/(2D∞Φ), the weight of the mushy term in f4/F4 and f6/F6.
pub fn mushy_weight(epsilon: f64, gamma: f64, d_inf: f64, factor: f64) -> f64 {
    gamma * SQRT_PI * (1.0 - epsilon) / (2.0 * d_inf * factor)
}

/// f4(x) = [x + m·erf(x)e^{x²}]·erf(x)e^{x²}; F4 is the same with Φ = 1 in m.
/// Returns (value, derivative).
pub fn f4(weight: f64, x: f64) -> (f64, f64) {
    let e = (x * x).exp();
    let u = erf(x) * e;
    let du = FRAC_2_SQRT_PI + 2.0 * x * u;
    (x * u + weight * u * u, u + x * du + 2.0 * weight * u * du)
}

/// x/erf(x) and its derivative, continuous through x → 0⁺.
fn x_over_erf(x: f64) -> (f64, f64) {
    if x < 1e-2 {
        // (√π/2)(1 + x²/3 + x⁴/90 - 11x⁶/1890)
        let z = x * x;
        let v = 0.5 * SQRT_PI * (1.0 + z * (1.0 / 3.0 + z * (1.0 / 90.0 - z * 11.0 / 1890.0)));
        let dv = 0.5 * SQRT_PI * x * (2.0 / 3.0 + z * (4.0 / 90.0 - z * 66.0 / 1890.0));
        return (v, dv);
    }
    let e = erf(x);
    (x / e, (e - x * erf_prime(x)) / (e * e))
}

/// f6(x) = [x/erf(x) + m·e^{x²}]·e^{x²}; F6 is the same with Φ = 1 in m.
/// Returns (value, derivative).
pub fn f6(weight: f64, x: f64) -> (f64, f64) {
    let e = (x * x).exp();
    let (v, dv) = x_over_erf(x);
    let inner = v + weight * e;
    let value = inner * e;
    let slope = (dv + 2.0 * x * weight * e) * e + 2.0 * x * value;
    (value, slope)
}

/// f6(0⁺) = √π/2 + m.
pub fn f6_lower_limit(weight: f64) -> f64 {
    0.5 * SQRT_PI + weight
}

/// Known inputs for one case, pulled from a validated problem.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Knowns {
    pub set: CoefficientSet,
    pub boundary: BoundaryData,
    pub face: FaceCondition,
    pub case: UnknownCase,
}

impl Knowns {
    pub fn from_problem(p: &Problem, case: UnknownCase) -> Self {
        Self {
            set: p.known,
            boundary: p.boundary,
            face: p.face,
            case,
        }
    }

    pub fn get(&self, slot: Coefficient) -> f64 {
        // validated: every slot except the unknown is present
        self.set.get(slot).expect("validated coefficient set")
    }

    pub fn factor(&self) -> f64 {
        self.boundary.face_factor(self.face)
    }

    /// Complete the coefficient set with the recovered value and assemble the result.
    pub fn finish(
        &self,
        value: f64,
        xi: f64,
        reports: Vec<RestrictionReport>,
        mut warnings: Vec<String>,
    ) -> Result<CaseResult, SolveError> {
        let full = self.set.with(self.case, value);
        let thermal = ThermalCoefficients::new(
            full.require(Coefficient::L)?,
            full.require(Coefficient::K)?,
            full.require(Coefficient::Rho)?,
            full.require(Coefficient::C)?,
        )?;
        let mushy = MushyCoefficients::new(full.require(Coefficient::Epsilon)?, full.require(Coefficient::Gamma)?)?;
        let solution = build_solution(&thermal, &mushy, &self.boundary, xi)?;
        if !(solution.mu > solution.xi) {
            warnings.push(format!("mushy zone width underflows: mu = xi = {xi}"));
        }
        Ok(CaseResult {
            face: self.face,
            case: self.case,
            value,
            xi,
            thermal,
            mushy,
            boundary: self.boundary,
            solution,
            reports,
            warnings,
        })
    }
}

pub(crate) fn saturation_warning(arg: f64) -> Vec<String> {
    if is_near_saturation(arg) {
        vec![format!(
            "erf argument {arg} is within 1e-12 of 1; xi is ill-conditioned"
        )]
    } else {
        Vec::new()
    }
}

/// Dispatch to the solver of `problem.face` for `problem.case`.
pub fn solve(problem: &Problem, prec: &crate::specfun::Precision) -> Result<CaseResult, SolveError> {
    let case = problem.case.ok_or(ModelError::NoUnknown)?;
    match problem.face {
        FaceCondition::Convective => convective::solve(case, &problem.known, &problem.boundary, prec),
        FaceCondition::Dirichlet => dirichlet::solve_dirichlet_case(case, &problem.known, &problem.boundary, prec),
    }
}
