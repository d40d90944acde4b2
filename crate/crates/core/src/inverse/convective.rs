//! The six cases of the problem overspecified by the convective condition
//! `k T_x(0,t) = (h0/√t)(T(0,t) + D∞)`, with restrictions R1-R5.
//!
//! Restrictions are evaluated before any numerics; every successful result
//! carries the full list, every restriction error carries the failing one.

use crate::model::{
    BoundaryData, CaseResult, Coefficient, CoefficientSet, FaceCondition, RestrictionId, RestrictionReport, UnknownCase,
};
use crate::rootfind::{solve_increasing, MonotoneEquation};
use crate::specfun::{erf_inv_with, Precision};

use super::{
    effusivity_squared, f2, f4, f6, f6_lower_limit, face_argument, guard, latent_heat, mushy_epsilon, mushy_gamma,
    mushy_weight, saturation_warning, stefan_target, Knowns, SolveError, SQRT_PI,
};

use Coefficient::{Epsilon, Gamma, C, K, L};

const FACE: FaceCondition = FaceCondition::Convective;

fn knowns(known: &CoefficientSet, boundary: &BoundaryData, case: UnknownCase) -> Result<Knowns, SolveError> {
    let problem = crate::model::validate(known, boundary, FACE, Some(case))?;
    Ok(Knowns::from_problem(&problem, case))
}

/// R1: q0 < h0·D∞, i.e. 1 - q0/(h0·D∞) > 0.
pub fn check_r1(boundary: &BoundaryData) -> RestrictionReport {
    let h0 = boundary.h0.unwrap_or(f64::INFINITY);
    RestrictionReport::new(RestrictionId::R1, boundary.q0, h0 * boundary.d_inf)
}

fn argument(kn: &Knowns) -> f64 {
    face_argument(
        kn.get(K),
        kn.get(Coefficient::Rho),
        kn.get(C),
        kn.boundary.q0,
        kn.boundary.d_inf,
        kn.factor(),
    )
}

/// R1 and R2, then ξ = erf⁻¹(arg). Shared by cases 1-3.
fn xi_from_face(kn: &Knowns, prec: &Precision) -> Result<(f64, Vec<RestrictionReport>, Vec<String>), SolveError> {
    let arg = argument(kn);
    let reports = vec![
        check_r1(&kn.boundary),
        RestrictionReport::new(RestrictionId::R2, arg, 1.0),
    ];
    guard(&reports)?;
    let xi = erf_inv_with(arg, prec)?;
    Ok((xi, reports, saturation_warning(arg)))
}

fn r3(kn: &Knowns, xi: f64) -> RestrictionReport {
    let target = stefan_target(
        kn.get(L),
        kn.get(K),
        kn.get(Coefficient::Rho),
        kn.get(C),
        kn.boundary.q0,
    );
    RestrictionReport::new(RestrictionId::R3, f2(xi), target)
}

/// Case 1: latent heat l.
pub fn solve_case1_l(known: &CoefficientSet, boundary: &BoundaryData) -> Result<CaseResult, SolveError> {
    let kn = knowns(known, boundary, L)?;
    let (xi, reports, warnings) = xi_from_face(&kn, &Precision::default())?;
    let l = latent_heat(
        xi,
        kn.get(K),
        kn.get(Coefficient::Rho),
        kn.get(C),
        kn.get(Epsilon),
        kn.get(Gamma),
        kn.boundary.q0,
    );
    kn.finish(l, xi, reports, warnings)
}

/// Case 2: mushy-width constant γ.
pub fn solve_case2_gamma(known: &CoefficientSet, boundary: &BoundaryData) -> Result<CaseResult, SolveError> {
    let kn = knowns(known, boundary, Gamma)?;
    let (xi, mut reports, warnings) = xi_from_face(&kn, &Precision::default())?;
    reports.push(r3(&kn, xi));
    guard(&reports)?;
    let gamma = mushy_gamma(
        xi,
        kn.get(L),
        kn.get(K),
        kn.get(Coefficient::Rho),
        kn.get(C),
        kn.get(Epsilon),
        kn.boundary.q0,
    );
    kn.finish(gamma, xi, reports, warnings)
}

/// Case 3: latent-heat fraction ε.
pub fn solve_case3_epsilon(known: &CoefficientSet, boundary: &BoundaryData) -> Result<CaseResult, SolveError> {
    let kn = knowns(known, boundary, Epsilon)?;
    let (xi, mut reports, warnings) = xi_from_face(&kn, &Precision::default())?;
    let (k, rho, c, q0) = (kn.get(K), kn.get(Coefficient::Rho), kn.get(C), kn.boundary.q0);
    let gamma = kn.get(Gamma);
    reports.push(r3(&kn, xi));
    let r4_rhs = gamma * (k * rho * c).sqrt() / (2.0 * q0) * (2.0 * xi * xi).exp() + f2(xi);
    reports.push(RestrictionReport::new(
        RestrictionId::R4,
        stefan_target(kn.get(L), k, rho, c, q0),
        r4_rhs,
    ));
    guard(&reports)?;
    let epsilon = mushy_epsilon(xi, kn.get(L), k, rho, c, gamma, q0);
    kn.finish(epsilon, xi, reports, warnings)
}

/// ξ from f4(x) = cD∞Φ/(l√π) (cases 4 and 5).
fn xi_from_f4(kn: &Knowns, prec: &Precision) -> Result<f64, SolveError> {
    let factor = kn.factor();
    let d_inf = kn.boundary.d_inf;
    let weight = mushy_weight(kn.get(Epsilon), kn.get(Gamma), d_inf, factor);
    let target = kn.get(C) * d_inf * factor / (kn.get(L) * SQRT_PI);
    let eq = MonotoneEquation::new(|x| f4(weight, x), target, 0.0);
    Ok(solve_increasing(&eq, prec)?)
}

fn thermal_from_f4(kn: &Knowns, prec: &Precision) -> Result<(f64, f64, Vec<RestrictionReport>), SolveError> {
    let reports = vec![check_r1(&kn.boundary)];
    guard(&reports)?;
    let xi = xi_from_f4(kn, prec)?;
    let product = effusivity_squared(xi, kn.boundary.q0, kn.boundary.d_inf, kn.factor());
    Ok((xi, product, reports))
}

/// Case 4: thermal conductivity k.
pub fn solve_case4_k(
    known: &CoefficientSet,
    boundary: &BoundaryData,
    prec: &Precision,
) -> Result<CaseResult, SolveError> {
    let kn = knowns(known, boundary, K)?;
    let (xi, product, reports) = thermal_from_f4(&kn, prec)?;
    let k = product / (kn.get(Coefficient::Rho) * kn.get(C));
    kn.finish(k, xi, reports, Vec::new())
}

/// Case 5: mass density ρ.
pub fn solve_case5_rho(
    known: &CoefficientSet,
    boundary: &BoundaryData,
    prec: &Precision,
) -> Result<CaseResult, SolveError> {
    let kn = knowns(known, boundary, Coefficient::Rho)?;
    let (xi, product, reports) = thermal_from_f4(&kn, prec)?;
    let rho = product / (kn.get(K) * kn.get(C));
    kn.finish(rho, xi, reports, Vec::new())
}

/// R5: Φ < (2q0²/(ρlk) - γ(1-ε))/D∞, equivalent to target > f6(0⁺).
fn r5(kn: &Knowns) -> RestrictionReport {
    let q0 = kn.boundary.q0;
    let d_inf = kn.boundary.d_inf;
    let rhs = (2.0 * q0 * q0 / (kn.get(Coefficient::Rho) * kn.get(L) * kn.get(K))
        - kn.get(Gamma) * (1.0 - kn.get(Epsilon)))
        / d_inf;
    RestrictionReport::new(RestrictionId::R5, kn.factor(), rhs)
}

/// Case 6: specific heat c.
pub fn solve_case6_c(
    known: &CoefficientSet,
    boundary: &BoundaryData,
    prec: &Precision,
) -> Result<CaseResult, SolveError> {
    let kn = knowns(known, boundary, C)?;
    let reports = vec![check_r1(&kn.boundary), r5(&kn)];
    guard(&reports)?;
    let (rho, l, k, q0) = (kn.get(Coefficient::Rho), kn.get(L), kn.get(K), kn.boundary.q0);
    let factor = kn.factor();
    let d_inf = kn.boundary.d_inf;
    let weight = mushy_weight(kn.get(Epsilon), kn.get(Gamma), d_inf, factor);
    let target = q0 * q0 * SQRT_PI / (rho * l * k * d_inf * factor);
    let eq = MonotoneEquation::new(|x| f6(weight, x), target, f6_lower_limit(weight));
    let xi = solve_increasing(&eq, prec)?;
    let c = effusivity_squared(xi, q0, d_inf, factor) / (rho * k);
    kn.finish(c, xi, reports, Vec::new())
}

/// Solve the case selected by `case`.
pub fn solve(
    case: UnknownCase,
    known: &CoefficientSet,
    boundary: &BoundaryData,
    prec: &Precision,
) -> Result<CaseResult, SolveError> {
    match case {
        L => solve_case1_l(known, boundary),
        Gamma => solve_case2_gamma(known, boundary),
        Epsilon => solve_case3_epsilon(known, boundary),
        K => solve_case4_k(known, boundary, prec),
        Coefficient::Rho => solve_case5_rho(known, boundary, prec),
        C => solve_case6_c(known, boundary, prec),
    }
}

/// Every restriction relevant to `case`, evaluated as far as the data allow
/// (R3/R4 need ξ and therefore R1 and R2).
pub fn check_restrictions(
    case: UnknownCase,
    known: &CoefficientSet,
    boundary: &BoundaryData,
) -> Result<Vec<RestrictionReport>, SolveError> {
    let result = solve(case, known, boundary, &Precision::default());
    match result {
        Ok(r) => Ok(r.reports),
        Err(SolveError::Restriction { reports }) => Ok(reports),
        Err(e) => Err(e),
    }
}
