//! Single Monte Carlo trials built from the simulation building blocks:
//! node sampling, channel draws, covariance, and the MMSE SINR.

use nonhom::model::{empirical_scaled_powers, sample_nodes, NetworkGeometry, PowerLawIntensity};
use nonhom::rng::{stream, Purpose, StreamKey};
use nonhom::simulate::{run_trial, SimConfig};

fn main() -> nonhom::Result<()> {
    let intensity = PowerLawIntensity::new(0.01, -0.5)?;
    let geometry = NetworkGeometry::from_count(intensity, 10_000)?;
    println!("10^4 nodes with rho = 0.01, eps = -0.5 fill a disk of radius {:.2}", geometry.radius());

    let mut rng = stream(1, StreamKey::new(Purpose::Nodes, 1, 0));
    let nodes = sample_nodes(&geometry, &mut rng);
    let mut powers = empirical_scaled_powers(&nodes, geometry.radius(), 3.0)?;
    powers.sort_by(f64::total_cmp);
    println!(
        "scaled powers (r/R)^-alpha: min {:.3}, median {:.3}, max {:.3e}",
        powers[0],
        powers[powers.len() / 2],
        powers[powers.len() - 1]
    );

    for antennas in [4, 16] {
        let cfg = SimConfig::reference(3.0, -0.5, antennas, 1)?;
        for trial in 0..3 {
            let t = run_trial(&cfg, trial)?;
            println!(
                "N = {antennas:>2}, trial {trial}: SINR = {:>9.3}, eta_N = {:.4}, gamma = {:.3}",
                t.sinr, t.eta_n, t.spec_eff
            );
        }
    }
    Ok(())
}
