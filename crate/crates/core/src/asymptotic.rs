//! Deterministic predictions of the normalized SINR.
//!
//! The normalized SINR β solves
//!
//! ```text
//! 1 − βσ² = βc ∫ x dH(x) / (1 + xβ)
//! ```
//!
//! for a limiting scaled-power distribution `H`. [`solve_general`] evaluates
//! the integral numerically for any `H`; [`solve_power_law`] uses the closed
//! form available when `H(x) = 1 − x^(−s)` with `s = (2+ε)/α < 1`:
//!
//! ```text
//! 1 − βσ² = c s β^s π csc(πs) − (2+ε)βc/(α−2−ε) · ₂F₁(1, 1−s; 2−s; −β)
//! ```
//!
//! Both right-hand sides increase strictly in β, so the residual is strictly
//! decreasing and bisection always finds the unique root.

use crate::error::{invalid, Error, Result};
use crate::model::{radius_for_count, PowerLawIntensity, ScaledPowerDistribution};
use crate::quadrature::{self, Tolerance};
use crate::specfun::{hyp2f1, pi_csc, SeriesControl};

/// Default bound on `|residual|` at the returned root.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Refuse the closed form when `|α − (2+ε)|` is below this.
pub const POLE_BAND: f64 = 1e-9;

const MAX_BRACKET: f64 = (1u64 << 60) as f64;
const MAX_BISECTIONS: usize = 4000;

#[derive(Debug, Clone)]
pub struct FixedPointProblem {
    c: f64,
    sigma2: f64,
    dist: ScaledPowerDistribution,
}

impl FixedPointProblem {
    pub fn new(c: f64, sigma2: f64, dist: ScaledPowerDistribution) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(invalid(format!("c must be positive, got {c}")));
        }
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return Err(invalid(format!("sigma2 must be non-negative, got {sigma2}")));
        }
        Ok(Self { c, sigma2, dist })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn dist(&self) -> &ScaledPowerDistribution {
        &self.dist
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticSolution {
    /// Interferers per antenna the solution was computed for.
    pub c: f64,
    pub beta: f64,
    /// `c^(α/(2+ε)) β`; only defined for power-law distributions.
    pub eta: Option<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Target link: distance to the desired transmitter and path-loss exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParameters {
    r_t: f64,
    alpha: f64,
}

impl LinkParameters {
    pub fn new(r_t: f64, alpha: f64) -> Result<Self> {
        if !(r_t > 0.0 && r_t.is_finite()) {
            return Err(invalid(format!("r_T must be positive, got {r_t}")));
        }
        if !(alpha > 2.0 && alpha.is_finite()) {
            return Err(invalid(format!("alpha must exceed 2, got {alpha}")));
        }
        Ok(Self { r_t, alpha })
    }

    pub fn r_t(&self) -> f64 {
        self.r_t
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Received target power `r_T^(−α)`.
    pub fn target_power(&self) -> f64 {
        self.r_t.powf(-self.alpha)
    }
}

/// Zero noise with `c ≤ 1` lets the receiver null every interferer; the
/// right-hand side then stays below 1 for all finite β.
fn check_finite_root(c: f64, sigma2: f64) -> Result<()> {
    if sigma2 == 0.0 && c <= 1.0 {
        return Err(Error::NoFiniteRoot { c });
    }
    Ok(())
}

/// Bisection on a strictly decreasing residual with `residual(0) = 1`.
fn bisect<F>(mut residual: F, tol: f64) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let mut iterations = 0;
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut r_hi = residual(hi)?;
    iterations += 1;
    while r_hi > 0.0 {
        if r_hi < tol {
            return Ok((hi, r_hi, iterations));
        }
        lo = hi;
        hi *= 2.0;
        if hi > MAX_BRACKET {
            return Err(Error::BracketFailure { upper: MAX_BRACKET });
        }
        r_hi = residual(hi)?;
        iterations += 1;
    }
    if r_hi.abs() < tol {
        return Ok((hi, r_hi, iterations));
    }
    let mut best = (hi, r_hi);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = residual(mid)?;
        iterations += 1;
        if r.abs() < best.1.abs() {
            best = (mid, r);
        }
        if r.abs() < tol {
            return Ok((mid, r, iterations));
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Bracket collapsed to adjacent floats: the root is as exact as f64 allows.
    Ok((best.0, best.1, iterations))
}

/// `I(β) = ∫ x dH(x) / (1 + xβ)` by quadrature after `u = 1/x`.
///
/// Succeeds once the error estimate is below `max(abs_tol, rel_tol · I)`.
pub fn scaled_power_integral(
    dist: &ScaledPowerDistribution,
    beta: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<quadrature::Estimate> {
    let upper = 1.0 / dist.support_lower();
    // x h(x) dx / (1 + βx) with x = 1/u becomes h(1/u) du / (u² (u + β)).
    let integrand = |u: f64| {
        let dens = dist.density(1.0 / u);
        if dens == 0.0 {
            0.0
        } else {
            dens / u / (u * (u + beta))
        }
    };
    quadrature::integrate(
        integrand,
        0.0,
        upper,
        Tolerance {
            abs_tol,
            rel_tol,
            max_intervals: 20_000,
        },
    )
}

/// Relative accuracy floor for `βc I(β)`. Near the root `βc I ≤ 1`, so the
/// absolute target `tol / 10` governs there.
const INTEGRAL_REL_FLOOR: f64 = 1e-13;

/// Residual `1 − βσ² − βc I(β)` with the integral done numerically.
///
/// The error on `βc I(β)` is held below `max(tol / 10, 1e-13 · βc I(β))`.
pub fn general_residual(problem: &FixedPointProblem, beta: f64, tol: f64) -> Result<f64> {
    let scale = beta * problem.c;
    let target = tol / 10.0;
    let est = scaled_power_integral(&problem.dist, beta, target / scale, INTEGRAL_REL_FLOOR)
        .map_err(|e| match e {
            Error::QuadratureFailure { estimate, target } => Error::QuadratureFailure {
                estimate: estimate * scale,
                target: target * scale,
            },
            other => other,
        })?;
    Ok(1.0 - beta * problem.sigma2 - scale * est.value)
}

fn power_law_eta(alpha: f64, epsilon: f64, c: f64, beta: f64) -> f64 {
    c.powf(alpha / (2.0 + epsilon)) * beta
}

/// Solves the fixed-point equation for any scaled-power distribution.
pub fn solve_general(problem: &FixedPointProblem, tol: f64) -> Result<AsymptoticSolution> {
    check_finite_root(problem.c, problem.sigma2)?;
    let (beta, residual, iterations) = bisect(|b| general_residual(problem, b, tol), tol)?;
    let eta = match problem.dist {
        ScaledPowerDistribution::PowerLaw { alpha, epsilon } => {
            Some(power_law_eta(alpha, epsilon, problem.c, beta))
        }
        ScaledPowerDistribution::General(_) => None,
    };
    Ok(AsymptoticSolution {
        c: problem.c,
        beta,
        eta,
        residual,
        iterations,
    })
}

/// Precomputed constants of the closed-form residual.
#[derive(Debug, Clone, Copy)]
struct PowerLawTerms {
    s: f64,
    pi_csc: f64,
    tail_coeff: f64,
}

impl PowerLawTerms {
    fn new(alpha: f64, epsilon: f64) -> Result<Self> {
        let pi_csc = pi_csc(alpha, epsilon)?;
        let order = 2.0 + epsilon;
        if (alpha - order).abs() < POLE_BAND {
            return Err(Error::PoleError {
                ratio: order / alpha,
            });
        }
        if alpha < order {
            return Err(Error::DomainError(format!(
                "closed form needs alpha > 2 + epsilon (alpha = {alpha}, epsilon = {epsilon})"
            )));
        }
        Ok(Self {
            s: order / alpha,
            pi_csc,
            tail_coeff: order / (alpha - order),
        })
    }

    /// Right-hand side divided by c.
    fn rhs_per_c(&self, beta: f64) -> Result<f64> {
        let s = self.s;
        let f = hyp2f1(1.0, 1.0 - s, 2.0 - s, -beta, SeriesControl::default())?;
        Ok(s * beta.powf(s) * self.pi_csc - self.tail_coeff * beta * f)
    }
}

/// Residual of the closed-form power-law equation.
pub fn power_law_residual(alpha: f64, epsilon: f64, c: f64, sigma2: f64, beta: f64) -> Result<f64> {
    let terms = PowerLawTerms::new(alpha, epsilon)?;
    Ok(1.0 - beta * sigma2 - c * terms.rhs_per_c(beta)?)
}

/// Solves the power-law fixed point through its closed form.
pub fn solve_power_law(
    alpha: f64,
    epsilon: f64,
    c: f64,
    sigma2: f64,
    tol: f64,
) -> Result<AsymptoticSolution> {
    let terms = PowerLawTerms::new(alpha, epsilon)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid(format!("c must be positive, got {c}")));
    }
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(invalid(format!("sigma2 must be non-negative, got {sigma2}")));
    }
    check_finite_root(c, sigma2)?;
    let (beta, residual, iterations) =
        bisect(|b| Ok(1.0 - b * sigma2 - c * terms.rhs_per_c(b)?), tol)?;
    Ok(AsymptoticSolution {
        c,
        beta,
        eta: Some(power_law_eta(alpha, epsilon, c, beta)),
        residual,
        iterations,
    })
}

/// Large-c limit of η: the root of `s η^s π csc(πs) = 1`.
pub fn eta_limit(alpha: f64, epsilon: f64) -> Result<f64> {
    let s = (2.0 + epsilon) / alpha;
    Ok((s * pi_csc(alpha, epsilon)?).powf(-1.0 / s))
}

/// Undoes the normalization: `r_T^(−α) β g(round(Nc))^α`.
pub fn sinr_from_beta(
    sol: &AsymptoticSolution,
    link: &LinkParameters,
    intensity: &PowerLawIntensity,
    antennas: usize,
) -> Result<f64> {
    if antennas == 0 {
        return Err(invalid("antenna count must be at least 1"));
    }
    let n = (antennas as f64 * sol.c).round();
    let radius = radius_for_count(intensity, n)?;
    Ok(link.target_power() * sol.beta * radius.powf(link.alpha))
}

fn check_approx_domain(link: &LinkParameters, epsilon: f64, rho: f64) -> Result<()> {
    if !(epsilon > -2.0) {
        return Err(invalid(format!("epsilon must exceed -2, got {epsilon}")));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(invalid(format!("rho must be positive, got {rho}")));
    }
    if link.alpha <= 2.0 + epsilon {
        return Err(Error::DomainError(format!(
            "approximation needs alpha > 2 + epsilon (alpha = {}, epsilon = {epsilon})",
            link.alpha
        )));
    }
    Ok(())
}

/// Large-network SINR approximation
/// `r_T^(−α) (α sin(πs) / (2π²))^(1/s) (N/ρ)^(1/s)` with `s = (2+ε)/α`.
///
/// `antennas` is real so planner output can be fed back unrounded.
pub fn sinr_approx(link: &LinkParameters, epsilon: f64, rho: f64, antennas: f64) -> Result<f64> {
    check_approx_domain(link, epsilon, rho)?;
    if !(antennas >= 0.0 && antennas.is_finite()) {
        return Err(invalid(format!("antenna count must be non-negative, got {antennas}")));
    }
    let alpha = link.alpha;
    let inv_s = alpha / (2.0 + epsilon);
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let gain = alpha / (2.0 * pi2) / (pi_csc(alpha, epsilon)? / std::f64::consts::PI);
    Ok(link.target_power() * (gain * antennas / rho).powf(inv_s))
}

/// Spectral efficiency `log₂(1 + sinr_approx)` in bits/s/Hz.
pub fn spec_eff_approx(link: &LinkParameters, epsilon: f64, rho: f64, antennas: f64) -> Result<f64> {
    Ok(sinr_approx(link, epsilon, rho, antennas)?.ln_1p() / std::f64::consts::LN_2)
}

/// Real-valued antenna count needed for spectral efficiency `gamma`;
/// the inverse of [`spec_eff_approx`] in `N`.
pub fn antennas_required(gamma: f64, link: &LinkParameters, epsilon: f64, rho: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid(format!("target spectral efficiency must be positive, got {gamma}")));
    }
    check_approx_domain(link, epsilon, rho)?;
    let order = 2.0 + epsilon;
    let s = order / link.alpha;
    let sinr = gamma.exp2() - 1.0;
    let pi = std::f64::consts::PI;
    Ok(rho * link.r_t.powf(order) * sinr.powf(s) * (2.0 * pi / link.alpha) * pi_csc(link.alpha, epsilon)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_only_limit() {
        let sol = solve_power_law(4.0, 0.0, 1e-12, 1.0, DEFAULT_TOL).unwrap();
        assert!((sol.beta - 1.0).abs() < 1e-6);
        let dist = ScaledPowerDistribution::power_law(3.0, -0.5).unwrap();
        let p = FixedPointProblem::new(1e-12, 1.0, dist).unwrap();
        let sol = solve_general(&p, DEFAULT_TOL).unwrap();
        assert!((sol.beta - 1.0).abs() < 1e-6);
    }

    #[test]
    fn degenerate_problems() {
        assert!(matches!(
            solve_power_law(4.0, 0.0, 1.0, 0.0, DEFAULT_TOL),
            Err(Error::NoFiniteRoot { .. })
        ));
        assert!(matches!(
            solve_power_law(2.5, 0.5, 10.0, 0.0, DEFAULT_TOL),
            Err(Error::PoleError { .. })
        ));
        assert!(matches!(
            solve_power_law(2.5, 1.0, 10.0, 0.0, DEFAULT_TOL),
            Err(Error::DomainError(_))
        ));
        assert!(FixedPointProblem::new(0.0, 1.0, ScaledPowerDistribution::power_law(3.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn general_solver_handles_closed_form_gap() {
        // α < 2+ε has no closed form but the integral is still finite.
        let dist = ScaledPowerDistribution::power_law(2.5, 1.0).unwrap();
        let p = FixedPointProblem::new(10.0, 0.0, dist).unwrap();
        let sol = solve_general(&p, DEFAULT_TOL).unwrap();
        assert!(sol.beta > 0.0 && sol.residual.abs() < DEFAULT_TOL);
    }

    #[test]
    fn approximation_examples() {
        let link = LinkParameters::new(10.0, 4.0).unwrap();
        let sinr = sinr_approx(&link, 0.0, 0.01, 10.0).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        let expect = (4.0 / (2.0 * pi2)).powi(2) * 1e6 * 1e-4;
        assert!((sinr - expect).abs() < 1e-12 * expect);
        assert!((sinr - 4.106).abs() < 1e-3);
        let gamma = spec_eff_approx(&link, 0.0, 0.01, 10.0).unwrap();
        assert!((gamma - 2.352).abs() < 1e-3);
        let n = antennas_required(gamma, &link, 0.0, 0.01).unwrap();
        assert!((n - 10.0).abs() < 1e-9);
        assert!(matches!(
            sinr_approx(&LinkParameters::new(10.0, 2.5).unwrap(), 0.5, 0.01, 10.0),
            Err(Error::DomainError(_))
        ));
    }
}
