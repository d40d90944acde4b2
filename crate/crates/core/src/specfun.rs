//! Error function kernel.
//!
//! `erf`/`erfc` use the piecewise rational approximations of the classic
//! SunPro `s_erf.c` (FreeBSD msun), accurate to below one ulp on the whole
//! real line. `erf_inv` refines a cheap closed-form guess with a bracketed
//! Newton iteration on `erf` itself.
//
// ====================================================
// Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//
// Developed at SunPro, a Sun Microsystems, Inc. business.
// Permission to use, copy, modify, and distribute this
// software is freely granted, provided that this notice
// is preserved.
// ====================================================

#![allow(clippy::excessive_precision)]

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 2/√π
pub const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Inputs to `erf_inv` closer to ±1 than this are flagged as ill-conditioned.
pub const SATURATION_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecFunError {
    #[error("non-finite argument {0}")]
    NonFinite(f64),
    #[error("inverse error function argument {0} outside (-1, 1)")]
    OutOfDomain(f64),
    #[error("inverse error function did not converge for argument {0}")]
    NoConvergence(f64),
}

/// Tolerance and iteration budget shared by the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl Precision {
    pub fn new(abs_tol: f64, max_iter: usize) -> Option<Self> {
        (abs_tol > 0.0 && abs_tol.is_finite() && max_iter >= 1).then_some(Self { abs_tol, max_iter })
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_iter: 200,
        }
    }
}

const ERX: f64 = 8.45062911510467529297e-01;

// [0, 0.84375]
const EFX: f64 = 1.28379167095512586316e-01;
const EFX8: f64 = 1.02703333676410069053e+00;
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 6] = [
    1.0,
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];

// [0.84375, 1.25]
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 7] = [
    1.0,
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];

// erfc on [1.25, 1/0.35]
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 9] = [
    1.0,
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];

// erfc on [1/0.35, 28]
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 8] = [
    1.0,
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

#[inline]
fn horner(z: f64, coeffs: &[f64]) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// `erf(|x|) - x*...` core for |x| < 0.84375, returned as the correction `x*R(x²)`.
#[inline]
fn small_correction(x: f64) -> f64 {
    let z = x * x;
    x * (horner(z, &PP) / horner(z, &QQ))
}

/// erfc(x) for x in [1.25, 28): exp(-x² - 0.5625 + R/S) / x.
#[inline]
fn erfc_tail(x: f64) -> f64 {
    let s = 1.0 / (x * x);
    let ratio = if x < 1.0 / 0.35 {
        horner(s, &RA) / horner(s, &SA)
    } else {
        horner(s, &RB) / horner(s, &SB)
    };
    // x rounded to its top 32 bits so that z*z is exact
    let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
    (-z * z - 0.5625).exp() * ((z - x) * (z + x) + ratio).exp() / x
}

fn erf_abs(ax: f64) -> f64 {
    if ax < 0.84375 {
        if ax < 3.725_290_298_461_914e-9 {
            if ax < 2.848_094_538_889_218e-306 {
                return 0.125 * (8.0 * ax + EFX8 * ax);
            }
            return ax + EFX * ax;
        }
        return ax + small_correction(ax);
    }
    if ax < 1.25 {
        let s = ax - 1.0;
        return ERX + horner(s, &PA) / horner(s, &QA);
    }
    if ax >= 6.0 {
        return 1.0;
    }
    1.0 - erfc_tail(ax)
}

/// Error function. Returns NaN for NaN input and ±1 at ±∞; see [`erf_checked`]
/// for the variant that rejects non-finite arguments.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return x.signum();
    }
    let v = erf_abs(x.abs());
    if x.is_sign_negative() {
        -v
    } else {
        v
    }
}

pub fn erf_checked(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite(x));
    }
    Ok(erf(x))
}

/// Complementary error function `1 - erf(x)`, without cancellation for large x.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let ax = x.abs();
    let neg = x < 0.0;
    if ax < 0.84375 {
        if ax < 1.387_778_780_781_445_7e-17 {
            return 1.0 - x;
        }
        let y = small_correction(ax);
        if neg {
            return 1.0 + (ax + y);
        }
        if ax < 0.25 {
            return 1.0 - (ax + y);
        }
        return 0.5 - (y + (ax - 0.5));
    }
    if ax < 1.25 {
        let s = ax - 1.0;
        let p = horner(s, &PA) / horner(s, &QA);
        return if neg { 1.0 + ERX + p } else { 1.0 - ERX - p };
    }
    if ax < 28.0 {
        if neg && ax >= 6.0 {
            return 2.0;
        }
        let r = erfc_tail(ax);
        return if neg { 2.0 - r } else { r };
    }
    if neg {
        2.0
    } else {
        0.0
    }
}

/// Derivative of erf: 2/√π · exp(-x²).
#[inline]
pub fn erf_prime(x: f64) -> f64 {
    FRAC_2_SQRT_PI * (-x * x).exp()
}

/// True when `y` is close enough to ±1 that `erf_inv(y)` is ill-conditioned.
pub fn is_near_saturation(y: f64) -> bool {
    y.abs() > 1.0 - SATURATION_GAP
}

/// Single-precision-grade starting point (M. Giles' polynomial fit in
/// `w = -ln(1 - y²)`).
fn initial_guess(y: f64) -> f64 {
    let mut w = -((1.0 - y) * (1.0 + y)).ln();
    let p = if w < 5.0 {
        w -= 2.5;
        horner(
            w,
            &[
                1.50140941,
                0.246640727,
                -0.00417768164,
                -0.00125372503,
                0.00021858087,
                -4.39150654e-06,
                -3.5233877e-06,
                3.43273939e-07,
                2.81022636e-08,
            ],
        )
    } else {
        w = w.sqrt() - 3.0;
        horner(
            w,
            &[
                2.83297682,
                1.00167406,
                0.00943887047,
                -0.0076224613,
                0.00573950773,
                -0.00367342844,
                0.00134934322,
                0.000100950558,
                -0.000200214257,
            ],
        )
    };
    p * y
}

/// Inverse error function with the default [`Precision`].
pub fn erf_inv(y: f64) -> Result<f64, SpecFunError> {
    erf_inv_with(y, &Precision::default())
}

/// Inverse error function: the unique `x` with `erf(x) = y`, for `-1 < y < 1`.
pub fn erf_inv_with(y: f64, prec: &Precision) -> Result<f64, SpecFunError> {
    if !y.is_finite() {
        return Err(SpecFunError::NonFinite(y));
    }
    if y.abs() >= 1.0 {
        return Err(SpecFunError::OutOfDomain(y));
    }
    if y == 0.0 {
        return Ok(y);
    }
    let target = y.abs();
    let x = refine(target, prec).ok_or(SpecFunError::NoConvergence(y))?;
    Ok(if y < 0.0 { -x } else { x })
}

/// Newton on an increasing residual `g(x)`, kept inside a shrinking bracket.
/// For targets above 1/2 the residual is written through erfc so that `1 - y`
/// (exact by Sterbenz) carries the information instead of `y`.
fn refine(target: f64, prec: &Precision) -> Option<f64> {
    let tail = 1.0 - target;
    let residual = |x: f64| {
        if target > 0.5 {
            tail - erfc(x)
        } else {
            erf(x) - target
        }
    };
    let (mut lo, mut hi) = (0.0_f64, 6.0_f64);
    let mut x = initial_guess(target).clamp(lo, hi);
    if !(x > 0.0) {
        x = 0.5 * hi;
    }
    for _ in 0..prec.max_iter.max(64) {
        let g = residual(x);
        if g == 0.0 {
            return Some(x);
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = erf_prime(x);
        let mut next = x - g / d;
        if !(next > lo && next < hi) || d == 0.0 {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 2.0 * f64::EPSILON * x || hi - lo <= 2.0 * f64::EPSILON * x {
            break;
        }
    }
    ((erf(x) - target).abs() <= prec.abs_tol.max(4.0 * f64::EPSILON)).then_some(x)
}
