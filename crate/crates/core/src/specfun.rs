//! Real-valued special functions used by the closed-form power-law solver.
//!
//! Only the parameter families reachable from power-law intensities need to
//! be robust: ₂F₁(1, b; c; z) with z ≤ 0 (evaluated through the Pfaff
//! transform) and 0 ≤ z < 1 (direct series).

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Stopping rule for hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tolerance: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tolerance: 1e-12,
            max_terms: 1_000_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tolerance: f64, max_terms: usize) -> Result<Self> {
        let ctl = Self {
            rel_tolerance,
            max_terms,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tolerance > 0.0) {
            return Err(invalid(format!(
                "rel_tolerance must be positive, got {}",
                self.rel_tolerance
            )));
        }
        if self.max_terms == 0 {
            return Err(invalid("max_terms must be at least 1"));
        }
        Ok(())
    }
}

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real z < 1.
///
/// Non-negative arguments are summed directly. Negative arguments go through
/// the Pfaff transform
///
/// ```text
/// ₂F₁(a, b; c; z) = (1 − z)^(−a) ₂F₁(a, c − b; c; z / (z − 1))
/// ```
///
/// whose argument lies in [0, 1), so the summed series never alternates.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    ctl.validate()?;
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(invalid("hyp2f1 arguments must be finite"));
    }
    if is_non_positive_integer(c) {
        return Err(invalid(format!("c = {c} is a non-positive integer")));
    }
    if z >= 1.0 {
        return Err(invalid(format!("hyp2f1 requires z < 1, got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < 0.0 {
        let w = z / (z - 1.0);
        let prefactor = (1.0 - z).powf(-a);
        return Ok(prefactor * series(a, c - b, c, w, ctl)?);
    }
    series(a, b, c, z, ctl)
}

/// Direct power series for 0 ≤ z < 1.
///
/// Stops once the current term, inflated by a geometric bound on the
/// remaining tail, is below `rel_tolerance` times the partial sum.
fn series(a: f64, b: f64, c: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    debug_assert!((0.0..1.0).contains(&z));
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut last_rel = f64::INFINITY;
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        let rho = ratio.abs().max(z);
        let tail = if rho < 1.0 {
            term.abs() * rho / (1.0 - rho)
        } else {
            f64::INFINITY
        };
        last_rel = term.abs() / sum.abs();
        if tail.max(term.abs()) <= ctl.rel_tolerance * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        terms: ctl.max_terms,
        last_rel,
    })
}

/// Distance from `ratio` to the nearest integer below which `pi_csc` reports a pole.
pub const POLE_THRESHOLD: f64 = 1e-12;

/// π csc(π(2+ε)/α).
pub fn pi_csc(alpha: f64, epsilon: f64) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(invalid(format!("alpha must exceed 2, got {alpha}")));
    }
    if !(epsilon > -2.0) || !epsilon.is_finite() {
        return Err(invalid(format!("epsilon must exceed -2, got {epsilon}")));
    }
    let ratio = (2.0 + epsilon) / alpha;
    if (ratio - ratio.round()).abs() < POLE_THRESHOLD {
        return Err(Error::PoleError { ratio });
    }
    Ok(PI / (PI * ratio).sin())
}
