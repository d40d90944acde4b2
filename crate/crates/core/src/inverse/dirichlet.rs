//! The six cases of the problem overspecified by the Dirichlet condition
//! `T(0,t) = -D∞`, restrictions R6-R9, and the study of the convective
//! solutions as h0 grows.

use serde::{Deserialize, Serialize};

use crate::direct::stefan_balance;
use crate::model::{
    BoundaryData, CaseResult, Coefficient, CoefficientSet, FaceCondition, ModelError, RestrictionId, RestrictionReport,
    UnknownCase,
};
use crate::rootfind::{solve_increasing, MonotoneEquation, RootError};
use crate::specfun::{erf, erf_inv_with, Precision};

use super::{
    convective, effusivity_squared, f2, f2_prime, f4, f6, f6_lower_limit, face_argument, guard, latent_heat,
    mushy_epsilon, mushy_gamma, mushy_weight, saturation_warning, stefan_target, Knowns, SolveError, SQRT_PI,
};

use Coefficient::{Epsilon, Gamma, Rho, C, K, L};

const FACE: FaceCondition = FaceCondition::Dirichlet;

fn knowns(known: &CoefficientSet, boundary: &BoundaryData, case: UnknownCase) -> Result<Knowns, SolveError> {
    let problem = crate::model::validate(known, boundary, FACE, Some(case))?;
    Ok(Knowns::from_problem(&problem, case))
}

fn require_all(known: &CoefficientSet, slots: &[Coefficient]) -> Result<(), ModelError> {
    for &s in slots {
        let v = known.require(s)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(ModelError::NotPositive {
                name: s.name(),
                value: v,
            });
        }
    }
    Ok(())
}

/// Root of f2(x) = (q0/l)√(c/(ρk)).
pub fn solve_eta_r7(known: &CoefficientSet, q0: f64, prec: &Precision) -> Result<f64, SolveError> {
    require_all(known, &[L, K, Rho, C])?;
    let target = stefan_target(
        known.require(L)?,
        known.require(K)?,
        known.require(Rho)?,
        known.require(C)?,
        q0,
    );
    let eq = MonotoneEquation::new(|x| (f2(x), f2_prime(x)), target, 0.0);
    Ok(solve_increasing(&eq, prec)?)
}

/// Root of f2(x) + γ√(kρc)/(2q0)·e^{2x²} = (q0/l)√(c/(ρk)). Fails with
/// [`RootError::NoRoot`] when the left side at 0⁺ already reaches the right.
pub fn solve_eta_r8(known: &CoefficientSet, q0: f64, prec: &Precision) -> Result<f64, SolveError> {
    require_all(known, &[L, K, Rho, C, Gamma])?;
    let (k, rho, c) = (known.require(K)?, known.require(Rho)?, known.require(C)?);
    let target = stefan_target(known.require(L)?, k, rho, c, q0);
    let weight = known.require(Gamma)? * (k * rho * c).sqrt() / (2.0 * q0);
    let eq = MonotoneEquation::new(|x| stefan_balance(weight, x), target, weight);
    Ok(solve_increasing(&eq, prec)?)
}

fn argument(kn: &Knowns) -> f64 {
    face_argument(
        kn.get(K),
        kn.get(Rho),
        kn.get(C),
        kn.boundary.q0,
        kn.boundary.d_inf,
        1.0,
    )
}

fn r6(kn: &Knowns) -> RestrictionReport {
    RestrictionReport::new(RestrictionId::R6, argument(kn), 1.0)
}

fn r7(kn: &Knowns, prec: &Precision) -> Result<RestrictionReport, SolveError> {
    let eta = solve_eta_r7(&kn.set, kn.boundary.q0, prec)?;
    Ok(RestrictionReport::new(RestrictionId::R7, argument(kn), erf(eta)))
}

fn r8(kn: &Knowns, prec: &Precision) -> Result<RestrictionReport, SolveError> {
    let eta = match solve_eta_r8(&kn.set, kn.boundary.q0, prec) {
        Ok(eta) => eta,
        // no positive root: the balance exceeds the target for every ξ > 0, so
        // ε > 0 holds for any ξ and the inequality reduces to 0 < arg
        Err(SolveError::Root(RootError::NoRoot { .. })) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(RestrictionReport::new(RestrictionId::R8, erf(eta), argument(kn)))
}

/// R9, the h0 → ∞ limit of R5: ρlk(D∞ + γ(1-ε))/(2q0²) < 1.
fn r9(kn: &Knowns) -> RestrictionReport {
    let q0 = kn.boundary.q0;
    let lhs = kn.get(Rho) * kn.get(L) * kn.get(K) * (kn.boundary.d_inf + kn.get(Gamma) * (1.0 - kn.get(Epsilon)))
        / (2.0 * q0 * q0);
    RestrictionReport::new(RestrictionId::R9, lhs, 1.0)
}

fn closed_form(kn: &Knowns, prec: &Precision) -> Result<CaseResult, SolveError> {
    let mut reports = vec![r6(kn)];
    guard(&reports)?;
    match kn.case {
        Gamma => reports.push(r7(kn, prec)?),
        Epsilon => {
            reports.push(r7(kn, prec)?);
            reports.push(r8(kn, prec)?);
        }
        _ => {}
    }
    guard(&reports)?;
    let arg = argument(kn);
    let xi = erf_inv_with(arg, prec)?;
    let q0 = kn.boundary.q0;
    let value = match kn.case {
        L => latent_heat(
            xi,
            kn.get(K),
            kn.get(Rho),
            kn.get(C),
            kn.get(Epsilon),
            kn.get(Gamma),
            q0,
        ),
        Gamma => mushy_gamma(xi, kn.get(L), kn.get(K), kn.get(Rho), kn.get(C), kn.get(Epsilon), q0),
        _ => mushy_epsilon(xi, kn.get(L), kn.get(K), kn.get(Rho), kn.get(C), kn.get(Gamma), q0),
    };
    kn.finish(value, xi, reports, saturation_warning(arg))
}

fn from_f4(kn: &Knowns, prec: &Precision) -> Result<CaseResult, SolveError> {
    let d_inf = kn.boundary.d_inf;
    let weight = mushy_weight(kn.get(Epsilon), kn.get(Gamma), d_inf, 1.0);
    let target = kn.get(C) * d_inf / (kn.get(L) * SQRT_PI);
    let eq = MonotoneEquation::new(|x| f4(weight, x), target, 0.0);
    let xi = solve_increasing(&eq, prec)?;
    let product = effusivity_squared(xi, kn.boundary.q0, d_inf, 1.0);
    let value = match kn.case {
        K => product / (kn.get(Rho) * kn.get(C)),
        _ => product / (kn.get(K) * kn.get(C)),
    };
    kn.finish(value, xi, Vec::new(), Vec::new())
}

fn from_f6(kn: &Knowns, prec: &Precision) -> Result<CaseResult, SolveError> {
    let reports = vec![r9(kn)];
    guard(&reports)?;
    let (rho, l, k, q0) = (kn.get(Rho), kn.get(L), kn.get(K), kn.boundary.q0);
    let d_inf = kn.boundary.d_inf;
    let weight = mushy_weight(kn.get(Epsilon), kn.get(Gamma), d_inf, 1.0);
    let target = q0 * q0 * SQRT_PI / (rho * l * k * d_inf);
    let eq = MonotoneEquation::new(|x| f6(weight, x), target, f6_lower_limit(weight));
    let xi = solve_increasing(&eq, prec)?;
    let c = effusivity_squared(xi, q0, d_inf, 1.0) / (rho * k);
    kn.finish(c, xi, reports, Vec::new())
}

/// Solve one case of the Dirichlet-overspecified problem. Any `h0` in
/// `boundary` is ignored.
pub fn solve_dirichlet_case(
    case: UnknownCase,
    known: &CoefficientSet,
    boundary: &BoundaryData,
    prec: &Precision,
) -> Result<CaseResult, SolveError> {
    let kn = knowns(known, boundary, case)?;
    match case {
        L | Gamma | Epsilon => closed_form(&kn, prec),
        K | Rho => from_f4(&kn, prec),
        C => from_f6(&kn, prec),
    }
}

/// Every restriction relevant to `case`, evaluated as far as the data allow.
pub fn check_restrictions(
    case: UnknownCase,
    known: &CoefficientSet,
    boundary: &BoundaryData,
) -> Result<Vec<RestrictionReport>, SolveError> {
    match solve_dirichlet_case(case, known, boundary, &Precision::default()) {
        Ok(r) => Ok(r.reports),
        Err(SolveError::Restriction { reports }) => Ok(reports),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub h0: f64,
    pub xi_conv: f64,
    /// |ξ_conv − ξ_D|
    pub diff: f64,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedEntry {
    pub h0: f64,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<RestrictionReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitStudy {
    pub case: UnknownCase,
    /// Strictly increasing; the processed grid after sorting.
    pub h0_grid: Vec<f64>,
    pub rows: Vec<LimitRow>,
    pub excluded: Vec<ExcludedEntry>,
    pub xi_dirichlet: f64,
    pub coefficient_dirichlet: f64,
    /// Least-squares slope of ln|ξ_conv − ξ_D| against ln h0; `None` with
    /// fewer than two usable rows.
    pub fitted_slope: Option<f64>,
    /// The supplied grid was not strictly increasing and has been sorted.
    pub resorted: bool,
}

impl LimitStudy {
    pub fn xi_conv(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.xi_conv).collect()
    }
}

/// Least-squares slope of y against x.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Solve `case` with the Dirichlet condition, then with the convective
/// condition for each h0 in `h0_grid` on the same data.
pub fn limit_study(
    known: &CoefficientSet,
    boundary: &BoundaryData,
    case: UnknownCase,
    h0_grid: &[f64],
    prec: &Precision,
) -> Result<LimitStudy, SolveError> {
    for &h in h0_grid {
        if !(h > 0.0 && h.is_finite()) {
            return Err(ModelError::NotPositive { name: "h0", value: h }.into());
        }
    }
    let mut grid = h0_grid.to_vec();
    let resorted = grid.windows(2).any(|w| w[0] >= w[1]);
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let reference = solve_dirichlet_case(case, known, boundary, prec)?;
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for &h0 in &grid {
        let b = BoundaryData::convective(boundary.q0, h0, boundary.d_inf);
        match convective::solve(case, known, &b, prec) {
            Ok(r) => rows.push(LimitRow {
                h0,
                xi_conv: r.xi,
                diff: (r.xi - reference.xi).abs(),
                coefficient: r.value,
            }),
            Err(SolveError::Restriction { reports }) => excluded.push(ExcludedEntry {
                h0,
                reason: super::violated_summary(&reports),
                reports,
            }),
            Err(e) => excluded.push(ExcludedEntry {
                h0,
                reason: e.to_string(),
                reports: Vec::new(),
            }),
        }
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.diff > 0.0)
        .map(|r| (r.h0.ln(), r.diff.ln()))
        .collect();
    Ok(LimitStudy {
        case,
        h0_grid: grid,
        rows,
        excluded,
        xi_dirichlet: reference.xi,
        coefficient_dirichlet: reference.value,
        fitted_slope: least_squares_slope(&points),
        resorted,
    })
}
