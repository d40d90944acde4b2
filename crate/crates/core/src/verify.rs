//! Independent checks of a similarity solution.
//!
//! The PDE check differentiates numerically a temperature evaluated with
//! [`reference_erf`], a positive-term series that shares no code with
//! [`crate::specfun`]. The boundary and free-boundary conditions use the
//! analytic derivatives of [`crate::direct`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::direct::{front_r, front_r_rate, front_s, front_s_rate, temperature, temperature_x, DirectError};
use crate::model::{BoundaryData, FaceCondition, MushyCoefficients, SimilaritySolution, ThermalCoefficients};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("reference erf is limited to |x| <= 6, got {0}")]
    OutOfRange(f64),
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("grid point x = {x} at t = {t} is outside the solid region (0, {s})")]
    OutsideSolid { x: f64, t: f64, s: f64 },
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Direct(#[from] DirectError),
}

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// erf by the series (2/√π)·e^{-x²}·Σ 2ⁿx^{2n+1}/(1·3·…·(2n+1)).
///
/// Every term is positive, so there is no cancellation; summation stops
/// once the geometric bound on the tail is below 1e-17 of the partial sum.
pub fn reference_erf(x: f64) -> Result<f64, VerifyError> {
    if x.is_nan() || x.abs() > 6.0 {
        return Err(VerifyError::OutOfRange(x));
    }
    if x < 0.0 {
        return reference_erf(-x).map(|v| -v);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let z = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut comp = 0.0;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= z / f64::from(2 * n + 1);
        // Kahan summation
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let ratio = z / f64::from(2 * n + 3);
        if ratio < 1.0 && term * ratio / (1.0 - ratio) <= 1e-17 * sum {
            break;
        }
    }
    Ok((TWO_OVER_SQRT_PI * (-x * x).exp() * sum).min(1.0))
}

/// Plain bisection of a sign change of `f` on [lo, hi] down to width 1e-14
/// (or the floating-point resolution, whichever is coarser).
pub fn brute_bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64, VerifyError> {
    let (mut lo, mut hi) = (lo, hi);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.signum() != f_hi.signum()) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(VerifyError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let rising = f_lo < 0.0;
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if (v < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    #[serde(rename = "PDE")]
    Pde,
    #[serde(rename = "T-at-s")]
    TAtS,
    Stefan,
    MushyWidth,
    Flux,
    Face,
}

impl ConditionId {
    pub const CONDITIONS: [ConditionId; 5] = [
        ConditionId::TAtS,
        ConditionId::Stefan,
        ConditionId::MushyWidth,
        ConditionId::Flux,
        ConditionId::Face,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::Pde => "PDE",
            ConditionId::TAtS => "T-at-s",
            ConditionId::Stefan => "Stefan",
            ConditionId::MushyWidth => "MushyWidth",
            ConditionId::Flux => "Flux",
            ConditionId::Face => "Face",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where to evaluate: x as fractions of s(t), strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_fractions: Vec<f64>,
    pub t_points: Vec<f64>,
    /// Relative step: h = fd_step·2√(αt) in x, τ = fd_step·t in t.
    pub fd_step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_fractions: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            t_points: vec![0.5, 1.0, 2.0, 4.0],
            fd_step: 1e-4,
        }
    }
}

impl GridSpec {
    fn check(&self) -> Result<(), VerifyError> {
        if !(self.fd_step > 0.0 && self.fd_step < 1.0) {
            return Err(VerifyError::BadGrid(format!(
                "fd_step must lie in (0, 1), got {}",
                self.fd_step
            )));
        }
        if self.t_points.is_empty() || self.t_points.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(VerifyError::BadGrid("t_points must be non-empty and positive".into()));
        }
        if self.x_fractions.is_empty() {
            return Err(VerifyError::BadGrid("x_fractions must be non-empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualGrid {
    pub x_points: Vec<f64>,
    pub t_points: Vec<f64>,
    pub fd_step: f64,
    pub pde_residual_max: Option<f64>,
    pub condition_residuals: BTreeMap<ConditionId, f64>,
}

impl ResidualGrid {
    /// All residuals including the PDE one, keyed by condition.
    pub fn all(&self) -> BTreeMap<ConditionId, f64> {
        let mut m = self.condition_residuals.clone();
        if let Some(p) = self.pde_residual_max {
            m.insert(ConditionId::Pde, p);
        }
        m
    }

    /// Conditions whose residual exceeds `tol` (or `pde_tol` for the PDE).
    pub fn failures(&self, tol: f64, pde_tol: f64) -> Vec<(ConditionId, f64)> {
        self.all()
            .into_iter()
            .filter(|&(id, r)| {
                let limit = if id == ConditionId::Pde { pde_tol } else { tol };
                !(r <= limit)
            })
            .collect()
    }
}

fn reference_temperature(sol: &SimilaritySolution, x: f64, t: f64) -> Result<f64, VerifyError> {
    Ok(sol.a_coef + sol.b_coef * reference_erf(x / (2.0 * (sol.alpha * t).sqrt()))?)
}

/// Max over the grid of |T_t − αT_xx|·t_min/|T|_max with both derivatives
/// taken by central differences.
pub fn pde_residual(sol: &SimilaritySolution, grid: &GridSpec) -> Result<ResidualGrid, VerifyError> {
    grid.check()?;
    let t_min = grid.t_points.iter().copied().fold(f64::INFINITY, f64::min);
    let mut x_points = Vec::new();
    let mut t_max_abs = 0.0_f64;
    let mut worst = 0.0_f64;
    for &t in &grid.t_points {
        let s = front_s(sol, t)?;
        let length = 2.0 * (sol.alpha * t).sqrt();
        let h = grid.fd_step * length;
        let tau = grid.fd_step * t;
        for &frac in &grid.x_fractions {
            let x = frac * s;
            if !(x > 0.0 && x < s) {
                return Err(VerifyError::OutsideSolid { x, t, s });
            }
            x_points.push(x);
            let centre = reference_temperature(sol, x, t)?;
            let txx = (reference_temperature(sol, x + h, t)? - 2.0 * centre + reference_temperature(sol, x - h, t)?)
                / (h * h);
            let tt = (reference_temperature(sol, x, t + tau)? - reference_temperature(sol, x, t - tau)?) / (2.0 * tau);
            worst = worst.max((tt - sol.alpha * txx).abs());
            t_max_abs = t_max_abs.max(centre.abs());
        }
    }
    let normalized = if t_max_abs > 0.0 {
        worst * t_min / t_max_abs
    } else {
        0.0
    };
    Ok(ResidualGrid {
        x_points,
        t_points: grid.t_points.clone(),
        fd_step: grid.fd_step,
        pde_residual_max: Some(normalized),
        condition_residuals: BTreeMap::new(),
    })
}

/// |a − b| relative to the largest magnitude among `scale`.
fn relative(a: f64, b: f64, scale: &[f64]) -> f64 {
    let m = scale.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if m > 0.0 {
        (a - b).abs() / m
    } else {
        (a - b).abs()
    }
}

/// The five interface and face conditions at each t, with analytic derivatives.
pub fn condition_residuals(
    sol: &SimilaritySolution,
    thermal: &ThermalCoefficients,
    mushy: &MushyCoefficients,
    boundary: &BoundaryData,
    t_points: &[f64],
    face: FaceCondition,
) -> Result<ResidualGrid, VerifyError> {
    if t_points.is_empty() {
        return Err(VerifyError::BadGrid("t_points must be non-empty".into()));
    }
    let mut out: BTreeMap<ConditionId, f64> = ConditionId::CONDITIONS.iter().map(|&c| (c, 0.0)).collect();
    let mut bump = |id: ConditionId, v: f64| {
        let e = out.get_mut(&id).expect("initialised");
        // NaN must surface as a failure
        if v.is_nan() || v > *e {
            *e = v;
        }
    };
    let (k, rho, l) = (thermal.k, thermal.rho, thermal.l);
    let (eps, gamma) = (mushy.epsilon, mushy.gamma);
    let q0 = boundary.q0;
    for &t in t_points {
        let s = front_s(sol, t)?;
        let r = front_r(sol, t)?;
        let t_s = temperature(sol, s, t)?.value;
        bump(
            ConditionId::TAtS,
            relative(t_s, 0.0, &[sol.a_coef, sol.b_coef * crate::specfun::erf(sol.xi)]),
        );

        let grad_s = temperature_x(sol, s, t)?;
        let latent = rho * l * (eps * front_s_rate(sol, t)? + (1.0 - eps) * front_r_rate(sol, t)?);
        bump(ConditionId::Stefan, relative(k * grad_s, latent, &[k * grad_s, latent]));
        bump(
            ConditionId::MushyWidth,
            relative(grad_s * (r - s), gamma, &[grad_s * (r - s), gamma]),
        );

        let grad_0 = temperature_x(sol, 0.0, t)?;
        let flux = q0 / t.sqrt();
        bump(ConditionId::Flux, relative(k * grad_0, flux, &[k * grad_0, flux]));

        let t_0 = temperature(sol, 0.0, t)?.value;
        let face_res = match face {
            FaceCondition::Convective => {
                let h = boundary.h0.unwrap_or(f64::NAN) / t.sqrt();
                let rhs = h * (t_0 + boundary.d_inf);
                relative(k * grad_0, rhs, &[k * grad_0, h * t_0, h * boundary.d_inf])
            }
            FaceCondition::Dirichlet => relative(t_0, -boundary.d_inf, &[t_0, boundary.d_inf]),
        };
        bump(ConditionId::Face, face_res);
    }
    Ok(ResidualGrid {
        x_points: Vec::new(),
        t_points: t_points.to_vec(),
        fd_step: 0.0,
        pde_residual_max: None,
        condition_residuals: out,
    })
}

/// PDE and condition residuals on one grid.
pub fn full_check(
    sol: &SimilaritySolution,
    thermal: &ThermalCoefficients,
    mushy: &MushyCoefficients,
    boundary: &BoundaryData,
    face: FaceCondition,
    grid: &GridSpec,
) -> Result<ResidualGrid, VerifyError> {
    let mut g = pde_residual(sol, grid)?;
    g.condition_residuals =
        condition_residuals(sol, thermal, mushy, boundary, &grid.t_points, face)?.condition_residuals;
    Ok(g)
}

/// Relative FD steps spanning one decade, where truncation dominates roundoff.
pub const CONVERGENCE_STEPS: [f64; 4] = [1e-2, 2e-2, 5e-2, 1e-1];

/// Observed order of the PDE residual: log-log slope over `steps`.
pub fn pde_convergence_order(sol: &SimilaritySolution, grid: &GridSpec, steps: &[f64]) -> Result<f64, VerifyError> {
    let mut points = Vec::with_capacity(steps.len());
    for &h in steps {
        let g = GridSpec {
            fd_step: h,
            ..grid.clone()
        };
        let r = pde_residual(sol, &g)?.pde_residual_max.unwrap_or(0.0);
        if !(r > 0.0) {
            return Err(VerifyError::BadGrid(format!(
                "zero PDE residual at step {h}; order undefined"
            )));
        }
        points.push((h.ln(), r.ln()));
    }
    crate::inverse::dirichlet::least_squares_slope(&points)
        .ok_or_else(|| VerifyError::BadGrid("need at least two distinct steps".into()))
}
