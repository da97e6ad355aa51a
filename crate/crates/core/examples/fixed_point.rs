//! Normalized SINR from the fixed-point equation, solved two ways:
//! the hypergeometric closed form and direct quadrature. The quadrature
//! route also accepts an arbitrary scaled-power law.

use nonhom::asymptotic::{eta_limit, solve_general, solve_power_law, FixedPointProblem, DEFAULT_TOL};
use nonhom::model::{GeneralDistribution, ScaledPowerDistribution};

fn main() -> nonhom::Result<()> {
    let (alpha, epsilon) = (3.0, -0.5);
    println!("alpha = {alpha}, epsilon = {epsilon}, eta limit = {:.6}", eta_limit(alpha, epsilon)?);
    println!("{:>8} {:>8} {:>22} {:>22} {:>10}", "c", "sigma2", "beta (closed form)", "beta (quadrature)", "eta");
    for c in [10.0, 100.0, 1000.0] {
        for sigma2 in [0.0, 0.1] {
            let closed = solve_power_law(alpha, epsilon, c, sigma2, DEFAULT_TOL)?;
            let problem = FixedPointProblem::new(c, sigma2, ScaledPowerDistribution::power_law(alpha, epsilon)?)?;
            let quad = solve_general(&problem, DEFAULT_TOL)?;
            println!(
                "{c:>8} {sigma2:>8} {:>22.15e} {:>22.15e} {:>10.6}",
                closed.beta,
                quad.beta,
                closed.eta.unwrap_or(f64::NAN)
            );
        }
    }

    // A non-power-law example: unit-rate exponential powers shifted to start at 1.
    let shifted_exp = GeneralDistribution::new(
        |x: f64| if x < 1.0 { 0.0 } else { 1.0 - (1.0 - x).exp() },
        |x: f64| if x < 1.0 { 0.0 } else { (1.0 - x).exp() },
        1.0,
    )?;
    let problem = FixedPointProblem::new(5.0, 0.1, ScaledPowerDistribution::General(shifted_exp))?;
    let sol = solve_general(&problem, DEFAULT_TOL)?;
    println!("shifted exponential, c = 5, sigma2 = 0.1: beta = {:.12}, residual = {:.1e}", sol.beta, sol.residual);
    Ok(())
}
