//! Forward evaluation of the explicit similarity solution: coefficients,
//! temperature profile, free boundaries, analytic derivatives and the
//! residuals of the two consistency equations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{BoundaryData, FaceCondition, MushyCoefficients, SimilaritySolution, ThermalCoefficients};
use crate::rootfind::{solve_increasing, MonotoneEquation, RootError};
use crate::specfun::{erf, erf_prime, Precision};

const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DirectError {
    #[error("time must be positive and finite, got {0}")]
    BadTime(f64),
    #[error("position must be non-negative and finite, got {0}")]
    BadPosition(f64),
    #[error("similarity coefficient xi must be positive and finite, got {0}")]
    BadXi(f64),
}

/// Phase region of a point (x, t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// 0 ≤ x ≤ s(t), T < 0 except T = 0 on x = s(t)
    Solid,
    /// s(t) < x < r(t), T = 0
    Mushy,
    /// x ≥ r(t), T = 0
    Liquid,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Solid => "solid",
            Region::Mushy => "mushy",
            Region::Liquid => "liquid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Temperature {
    pub value: f64,
    pub region: Region,
}

/// Residuals of the two consistency equations in ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyResiduals {
    /// `[ξ + G e^{ξ²}] e^{ξ²} - q0/(ρ l √α)` with G = γk(1-ε)/(2q0√α).
    pub res_stefan: f64,
    /// `erf(ξ) - (D∞/q0)√(kρc/π)·Φ`, Φ = 1 - q0/(h0 D∞) (convective) or 1 (Dirichlet).
    pub res_face: f64,
    /// Magnitude of the Stefan equation's right-hand side.
    pub stefan_scale: f64,
}

impl ConsistencyResiduals {
    /// `|res| <= tol·max(1, scale)` for both equations.
    pub fn within(&self, tol: f64) -> bool {
        self.res_stefan.abs() <= tol * self.stefan_scale.max(1.0) && self.res_face.abs() <= tol
    }
}

/// Coefficients A, B, μ for a given ξ. Uses k/√α = √(kρc).
pub fn build_solution(
    thermal: &ThermalCoefficients,
    mushy: &MushyCoefficients,
    boundary: &BoundaryData,
    xi: f64,
) -> Result<SimilaritySolution, DirectError> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(DirectError::BadXi(xi));
    }
    let effusivity = thermal.effusivity();
    let b_coef = boundary.q0 * SQRT_PI / effusivity;
    let mu = xi + mushy.gamma * effusivity / (2.0 * boundary.q0) * (xi * xi).exp();
    Ok(SimilaritySolution {
        a_coef: -b_coef * erf(xi),
        b_coef,
        xi,
        mu,
        alpha: thermal.alpha(),
    })
}

fn check_time(t: f64) -> Result<f64, DirectError> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(DirectError::BadTime(t))
    }
}

fn check_position(x: f64) -> Result<f64, DirectError> {
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(DirectError::BadPosition(x))
    }
}

fn front(coef: f64, alpha: f64, t: f64) -> Result<f64, DirectError> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(DirectError::BadTime(t));
    }
    Ok(2.0 * coef * (alpha * t).sqrt())
}

/// s(t) = 2ξ√(αt)
pub fn front_s(sol: &SimilaritySolution, t: f64) -> Result<f64, DirectError> {
    front(sol.xi, sol.alpha, t)
}

/// r(t) = 2μ√(αt)
pub fn front_r(sol: &SimilaritySolution, t: f64) -> Result<f64, DirectError> {
    front(sol.mu, sol.alpha, t)
}

/// ṡ(t) = ξ√(α/t)
pub fn front_s_rate(sol: &SimilaritySolution, t: f64) -> Result<f64, DirectError> {
    Ok(sol.xi * (sol.alpha / check_time(t)?).sqrt())
}

/// ṙ(t) = μ√(α/t)
pub fn front_r_rate(sol: &SimilaritySolution, t: f64) -> Result<f64, DirectError> {
    Ok(sol.mu * (sol.alpha / check_time(t)?).sqrt())
}

/// Similarity variable x/(2√(αt)).
fn similarity_variable(sol: &SimilaritySolution, x: f64, t: f64) -> f64 {
    x / (2.0 * (sol.alpha * t).sqrt())
}

/// T(x, t), with the region of the point. Zero in the mushy and liquid regions.
pub fn temperature(sol: &SimilaritySolution, x: f64, t: f64) -> Result<Temperature, DirectError> {
    let t = check_time(t)?;
    let x = check_position(x)?;
    let s = front_s(sol, t)?;
    if x > s {
        let region = if x < front_r(sol, t)? {
            Region::Mushy
        } else {
            Region::Liquid
        };
        return Ok(Temperature { value: 0.0, region });
    }
    // x/s·ξ lands exactly on ξ at the front, so T(s, t) = 0 with no rounding
    let eta = if s > 0.0 { x / s * sol.xi } else { 0.0 };
    Ok(Temperature {
        value: sol.a_coef + sol.b_coef * erf(eta),
        region: Region::Solid,
    })
}

/// Analytic T_x of the solid-phase expression (valid for any x ≥ 0).
pub fn temperature_x(sol: &SimilaritySolution, x: f64, t: f64) -> Result<f64, DirectError> {
    let t = check_time(t)?;
    let eta = similarity_variable(sol, check_position(x)?, t);
    Ok(sol.b_coef * erf_prime(eta) / (2.0 * (sol.alpha * t).sqrt()))
}

/// Analytic T_xx of the solid-phase expression.
pub fn temperature_xx(sol: &SimilaritySolution, x: f64, t: f64) -> Result<f64, DirectError> {
    let t = check_time(t)?;
    let eta = similarity_variable(sol, check_position(x)?, t);
    Ok(-sol.b_coef * erf_prime(eta) * eta / (2.0 * sol.alpha * t))
}

/// Analytic T_t of the solid-phase expression.
pub fn temperature_t(sol: &SimilaritySolution, x: f64, t: f64) -> Result<f64, DirectError> {
    let t = check_time(t)?;
    let eta = similarity_variable(sol, check_position(x)?, t);
    Ok(-sol.b_coef * erf_prime(eta) * eta / (2.0 * t))
}

/// Residuals of the two equations that ξ and the data must satisfy.
pub fn consistency_residuals(
    thermal: &ThermalCoefficients,
    mushy: &MushyCoefficients,
    boundary: &BoundaryData,
    xi: f64,
    face: FaceCondition,
) -> ConsistencyResiduals {
    let effusivity = thermal.effusivity();
    let q0 = boundary.q0;
    let weight = mushy.gamma * (1.0 - mushy.epsilon) * effusivity / (2.0 * q0);
    let e = (xi * xi).exp();
    // q0/(ρ l √α) = (q0/l)√(c/(ρk))
    let rhs = q0 / thermal.l * (thermal.c / (thermal.rho * thermal.k)).sqrt();
    let face_rhs = boundary.d_inf / q0 * effusivity / SQRT_PI * boundary.face_factor(face);
    ConsistencyResiduals {
        res_stefan: (xi + weight * e) * e - rhs,
        res_face: erf(xi) - face_rhs,
        stefan_scale: rhs,
    }
}

/// Left side of the latent-heat balance written in ξ:
/// `x e^{x²} + w e^{2x²}`, increasing from `w` at 0⁺. Returns (value, derivative).
pub fn stefan_balance(weight: f64, x: f64) -> (f64, f64) {
    let e = (x * x).exp();
    let value = x * e + weight * e * e;
    let slope = e * (1.0 + 2.0 * x * x) + 4.0 * x * weight * e * e;
    (value, slope)
}

/// ξ from the latent-heat balance alone, with every coefficient known. The
/// face condition is then only checked, not imposed.
pub fn solve_stefan_xi(
    thermal: &ThermalCoefficients,
    mushy: &MushyCoefficients,
    q0: f64,
    prec: &Precision,
) -> Result<f64, RootError> {
    let weight = mushy.gamma * (1.0 - mushy.epsilon) * thermal.effusivity() / (2.0 * q0);
    let target = q0 / thermal.l * (thermal.c / (thermal.rho * thermal.k)).sqrt();
    let eq = MonotoneEquation::new(|x| stefan_balance(weight, x), target, weight);
    solve_increasing(&eq, prec)
}
