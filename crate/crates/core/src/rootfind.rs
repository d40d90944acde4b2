//! Safeguarded Newton iteration for `f(x) = target` with `f` strictly
//! increasing on (0, ∞).
//!
//! The bracket `[lo, hi]` always satisfies `f(lo) < target < f(hi)`, where
//! `f(0)` is read as the supplied lower limit `f(0⁺)` and never evaluated.
//! Newton steps that leave the bracket, or that fail to halve the previous
//! step, are replaced by bisection.

use thiserror::Error;

use crate::specfun::Precision;

/// Bracket expansion stops here; exp(x²) has long overflowed.
pub const BRACKET_CAP: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RootError {
    #[error("no positive root: target {target} does not exceed f(0+) = {lower_limit}")]
    NoRoot { lower_limit: f64, target: f64 },
    #[error("no bracket found up to x = {hi}: f({hi}) = {value} <= target {target}")]
    Unbounded { hi: f64, value: f64, target: f64 },
    #[error("function returned a non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },
    #[error("no convergence after {iterations} iterations, bracket [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64, iterations: usize },
}

/// `f(x) = target` on x > 0 where `f` is strictly increasing and returns
/// `(value, derivative)`.
pub struct MonotoneEquation<F> {
    pub f: F,
    pub target: f64,
    /// `f(0⁺)`; a root exists only if this is below `target`.
    pub lower_limit: f64,
    pub bracket_hint: Option<f64>,
}

impl<F> MonotoneEquation<F>
where
    F: Fn(f64) -> (f64, f64),
{
    pub fn new(f: F, target: f64, lower_limit: f64) -> Self {
        Self {
            f,
            target,
            lower_limit,
            bracket_hint: None,
        }
    }

    pub fn with_hint(mut self, hint: f64) -> Self {
        self.bracket_hint = Some(hint);
        self
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x).0
    }
}

/// Root plus the final bracket, for callers that want to audit convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    pub residual: f64,
    pub iterations: usize,
}

pub fn solve_increasing<F>(eq: &MonotoneEquation<F>, prec: &Precision) -> Result<f64, RootError>
where
    F: Fn(f64) -> (f64, f64),
{
    solve_increasing_traced(eq, prec).map(|r| r.x)
}

pub fn solve_increasing_traced<F>(eq: &MonotoneEquation<F>, prec: &Precision) -> Result<Root, RootError>
where
    F: Fn(f64) -> (f64, f64),
{
    let target = eq.target;
    if !(eq.lower_limit < target) {
        return Err(RootError::NoRoot {
            lower_limit: eq.lower_limit,
            target,
        });
    }
    let ftol = prec.abs_tol * target.abs().max(1.0);

    let (mut lo, mut hi) = (
        0.0_f64,
        eq.bracket_hint.filter(|h| *h > 0.0).unwrap_or(1.0).min(BRACKET_CAP),
    );
    let mut iterations = 0;
    loop {
        let (value, _) = (eq.f)(hi);
        iterations += 1;
        if value.is_nan() {
            return Err(RootError::NonFinite { x: hi, value });
        }
        if value == target {
            return Ok(Root {
                x: hi,
                lo: hi,
                hi,
                residual: 0.0,
                iterations,
            });
        }
        if value > target {
            break;
        }
        if hi >= BRACKET_CAP {
            return Err(RootError::Unbounded { hi, value, target });
        }
        lo = hi;
        hi = (2.0 * hi).min(BRACKET_CAP);
    }

    let mut x = hi;
    let mut last_step = hi - lo;
    let mut best: Option<(f64, f64)> = None;
    while iterations < prec.max_iter {
        let (value, slope) = (eq.f)(x);
        iterations += 1;
        if value.is_nan() {
            return Err(RootError::NonFinite { x, value });
        }
        let g = value - target;
        if g == 0.0 {
            return Ok(Root {
                x,
                lo: x,
                hi: x,
                residual: 0.0,
                iterations,
            });
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if g.abs() <= ftol && best.is_none_or(|(_, r)| g.abs() <= r) {
            best = Some((x, g.abs()));
        }
        let xtol = prec.abs_tol * x.abs().max(1.0);
        if let Some((bx, br)) = best {
            if hi - lo <= xtol {
                return Ok(Root {
                    x: bx,
                    lo,
                    hi,
                    residual: br,
                    iterations,
                });
            }
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            // bracket collapsed to a few ulps but the residual is still above tolerance
            break;
        }

        let next = if g.abs() <= ftol {
            // residual is fine; straddle the root to close the far side of the
            // bracket. Aim from the Newton estimate: on a flat f the residual
            // test admits points far more than xtol away from the root.
            let estimate = if slope.is_finite() && slope > 0.0 {
                x - g / slope
            } else {
                x
            };
            let probe = if g < 0.0 {
                estimate + 0.5 * xtol
            } else {
                estimate - 0.5 * xtol
            };
            probe.clamp(lo + 0.25 * (hi - lo).min(xtol), hi - 0.25 * (hi - lo).min(xtol))
        } else {
            let newton = x - g / slope;
            let step = (newton - x).abs();
            if slope.is_finite() && slope > 0.0 && newton > lo && newton < hi && step <= 0.5 * last_step {
                last_step = step;
                newton
            } else {
                last_step = 0.5 * (hi - lo);
                lo + 0.5 * (hi - lo)
            }
        };
        x = next;
    }
    Err(RootError::NoConvergence { lo, hi, iterations })
}
