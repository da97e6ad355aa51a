mod common;

use common::rel_diff;
use nonhom::asymptotic::{
    antennas_required, eta_limit, power_law_residual, sinr_approx, sinr_from_beta, solve_general,
    solve_power_law, spec_eff_approx, FixedPointProblem, LinkParameters, DEFAULT_TOL,
};
use nonhom::model::{GeneralDistribution, PowerLawIntensity, ScaledPowerDistribution};
use nonhom::Error;
use proptest::prelude::*;

/// Right-hand side `βc ∫ x dH(x)/(1+xβ)` by trapezoid on `x = eᵗ`, with the
/// analytic tail beyond the truncation point.
fn trapezoid_rhs(s: f64, c: f64, beta: f64) -> f64 {
    let t_max = (1.0 / beta).ln().max(0.0) + 60.0 / s;
    let steps = 400_000;
    let h = t_max / steps as f64;
    let f = |t: f64| s * ((1.0 - s) * t).exp() / (1.0 + beta * t.exp());
    let mut acc = 0.5 * (f(0.0) + f(t_max));
    for k in 1..steps {
        acc += f(k as f64 * h);
    }
    let tail = (-s * t_max).exp() / beta;
    beta * c * (acc * h + tail)
}

fn brute_force_beta(s: f64, c: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while 1.0 - trapezoid_rhs(s, c, hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - trapezoid_rhs(s, c, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn brute_force_oracle() {
    let beta = brute_force_beta(0.5, 100.0);
    let closed = solve_power_law(3.0, -0.5, 100.0, 0.0, DEFAULT_TOL).unwrap().beta;
    assert!(rel_diff(closed, beta) < 1e-6, "{closed} vs {beta}");
}

/// Reference roots from 50-digit arithmetic, rounded to f64.
#[test]
fn high_precision_references() {
    for (alpha, eps, c, want) in [
        (4.0, 0.0, 10.0, 0.004418347716647622),
        (3.0, -1.0, 10.0, 0.000_570_447_974_542_758_2),
        (3.0, -0.5, 100.0, 4.086_034_707_640_57e-5),
    ] {
        let got = solve_power_law(alpha, eps, c, 0.0, DEFAULT_TOL).unwrap().beta;
        assert!(rel_diff(got, want) < 1e-8, "({alpha},{eps},{c}): {got} vs {want}");
    }
}

#[test]
fn noise_only_limit() {
    let sol = solve_power_law(4.0, 0.0, 1e-12, 1.0, DEFAULT_TOL).unwrap();
    assert!((sol.beta - 1.0).abs() < 1e-9);
    let sol = solve_power_law(3.0, -0.5, 1e-9, 4.0, DEFAULT_TOL).unwrap();
    assert!((sol.beta - 0.25).abs() < 1e-9);
}

#[test]
fn residual_is_strictly_decreasing() {
    for (alpha, eps) in [(3.0, -0.5), (4.0, 0.0), (2.5, -1.0), (4.5, -0.25)] {
        for (c, sigma2) in [(10.0, 0.0), (100.0, 0.1), (1.0, 0.1)] {
            let r: Vec<f64> = (0..100)
                .map(|k| 10f64.powf(-8.0 + 0.12 * k as f64))
                .map(|b| power_law_residual(alpha, eps, c, sigma2, b).unwrap())
                .collect();
            assert!(r.windows(2).all(|w| w[1] < w[0]), "alpha={alpha} eps={eps} c={c}");
            assert!(r[0] > 0.0 && r[99] < 0.0);
        }
    }
}

#[test]
fn beta_decreases_with_noise() {
    let betas: Vec<f64> = [0.0, 0.01, 0.1, 1.0, 10.0]
        .iter()
        .map(|&s2| solve_power_law(3.0, -0.5, 10.0, s2, DEFAULT_TOL).unwrap().beta)
        .collect();
    assert!(betas.windows(2).all(|w| w[1] < w[0]), "{betas:?}");
}

#[test]
fn eta_approaches_large_network_limit() {
    for (alpha, eps) in [(3.0, -0.5), (4.0, 0.0), (4.5, -1.0)] {
        let limit = eta_limit(alpha, eps).unwrap();
        let gaps: Vec<f64> = [10.0, 1e2, 1e3, 1e4, 1e6]
            .iter()
            .map(|&c| {
                let eta = solve_power_law(alpha, eps, c, 0.0, DEFAULT_TOL).unwrap().eta.unwrap();
                rel_diff(eta, limit)
            })
            .collect();
        // Beyond c ≈ 10⁴ the gap sits at the solver tolerance.
        assert!(gaps[..4].windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
        assert!(gaps[3] < 1e-3 && gaps[4] < 1e-3, "{gaps:?}");
    }
}

#[test]
fn general_distribution_matches_closed_form() {
    let (alpha, eps) = (3.5, -0.25);
    let s = (2.0 + eps) / alpha;
    let custom = GeneralDistribution::new(
        move |x: f64| if x < 1.0 { 0.0 } else { 1.0 - x.powf(-s) },
        move |x: f64| if x < 1.0 { 0.0 } else { s * x.powf(-s - 1.0) },
        1.0,
    )
    .unwrap();
    for (c, sigma2) in [(10.0, 0.0), (100.0, 0.1)] {
        let p = FixedPointProblem::new(c, sigma2, ScaledPowerDistribution::General(custom.clone())).unwrap();
        let g = solve_general(&p, DEFAULT_TOL).unwrap();
        let cf = solve_power_law(alpha, eps, c, sigma2, DEFAULT_TOL).unwrap();
        assert!(rel_diff(g.beta, cf.beta) < 1e-8);
        assert!(g.eta.is_none());
    }
}

#[test]
fn quadrature_path_below_critical_exponent() {
    // α < 2+ε: only the quadrature route exists.
    assert!(matches!(solve_power_law(2.5, 1.0, 10.0, 0.1, DEFAULT_TOL), Err(Error::DomainError(_))));
    let p = FixedPointProblem::new(10.0, 0.1, ScaledPowerDistribution::power_law(2.5, 1.0).unwrap()).unwrap();
    let sol = solve_general(&p, DEFAULT_TOL).unwrap();
    assert!(sol.beta > 0.0 && sol.residual.abs() < DEFAULT_TOL);
}

#[test]
fn unbounded_root_is_reported() {
    assert!(matches!(solve_power_law(4.0, 0.0, 1.0, 0.0, DEFAULT_TOL), Err(Error::NoFiniteRoot { .. })));
    let p = FixedPointProblem::new(0.5, 0.0, ScaledPowerDistribution::power_law(4.0, 0.0).unwrap()).unwrap();
    assert!(matches!(solve_general(&p, DEFAULT_TOL), Err(Error::NoFiniteRoot { .. })));
}

#[test]
fn approximation_reference_values() {
    let link = LinkParameters::new(10.0, 4.0).unwrap();
    let sinr = sinr_approx(&link, 0.0, 0.01, 10.0).unwrap();
    assert!((sinr - 4.106).abs() < 5e-4, "{sinr}");
    let gamma = spec_eff_approx(&link, 0.0, 0.01, 10.0).unwrap();
    assert!((gamma - 2.352).abs() < 5e-4, "{gamma}");
    let n = antennas_required(gamma, &link, 0.0, 0.01).unwrap();
    assert!(rel_diff(n, 10.0) < 1e-12);
    assert!(matches!(sinr_approx(&link, 2.0, 0.01, 10.0), Err(Error::DomainError(_))));
}

#[test]
fn antennas_grow_with_epsilon() {
    let link = LinkParameters::new(10.0, 3.0).unwrap();
    let lo = antennas_required(1.0, &link, -1.0, 0.01).unwrap();
    let hi = antennas_required(1.0, &link, 0.0, 0.01).unwrap();
    assert!(hi > lo);
}

#[test]
fn sinr_from_beta_undoes_normalization() {
    let intensity = PowerLawIntensity::new(0.01, -0.5).unwrap();
    let link = LinkParameters::new(10.0, 3.0).unwrap();
    let sol = solve_power_law(3.0, -0.5, 10_000.0 / 16.0, 0.0, DEFAULT_TOL).unwrap();
    let sinr = sinr_from_beta(&sol, &link, &intensity, 16).unwrap();
    // η = ((2+ε)N/(2πρ))^(−α/(2+ε)) r_T^α SINR
    let scale = (1.5 * 16.0 / (2.0 * std::f64::consts::PI * 0.01)).powf(-3.0 / 1.5) * 1000.0;
    assert!(rel_diff(scale * sinr, sol.eta.unwrap()) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solution_satisfies_equation(
        alpha in 2.6f64..5.0,
        eps in -1.0f64..0.0,
        c in 1.5f64..1e4,
        sigma2 in 0.0f64..1.0,
    ) {
        let s = (2.0 + eps) / alpha;
        prop_assume!((s - s.round()).abs() > 1e-6);
        let sol = solve_power_law(alpha, eps, c, sigma2, DEFAULT_TOL).unwrap();
        prop_assert!(sol.beta > 0.0);
        prop_assert!(sol.residual.abs() < DEFAULT_TOL);
        prop_assert!(sigma2 == 0.0 || sol.beta < 1.0 / sigma2);
    }

    #[test]
    fn planner_inverts_approximation(alpha in 2.6f64..5.0, eps in -1.0f64..0.0, gamma in 0.1f64..8.0) {
        let link = LinkParameters::new(10.0, alpha).unwrap();
        let n = antennas_required(gamma, &link, eps, 0.01).unwrap();
        prop_assert!(rel_diff(spec_eff_approx(&link, eps, 0.01, n).unwrap(), gamma) < 1e-9);
    }
}
