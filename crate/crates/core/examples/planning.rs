//! Large-network approximations: spectral efficiency for a given array size
//! and the inverse, the array size needed for a target efficiency.

use nonhom::asymptotic::{antennas_required, sinr_approx, spec_eff_approx, LinkParameters};

fn main() -> nonhom::Result<()> {
    let rho = 0.01;
    let link = LinkParameters::new(10.0, 4.0)?;
    for n in [2.0, 4.0, 8.0, 16.0, 32.0] {
        let sinr = sinr_approx(&link, 0.0, rho, n)?;
        println!(
            "alpha = 4, eps = 0, N = {n:>4}: SINR = {sinr:>10.3} ({:>6.2} dB), gamma = {:.3} bit/s/Hz",
            10.0 * sinr.log10(),
            spec_eff_approx(&link, 0.0, rho, n)?
        );
    }

    // Clustering towards the receiver (smaller eps) saves antennas.
    let link = LinkParameters::new(10.0, 3.0)?;
    println!("\nantennas for alpha = 3:");
    for eps in [-1.0, -0.5, 0.0] {
        let row: Vec<String> = [1.0, 2.0, 3.0]
            .iter()
            .map(|&g| antennas_required(g, &link, eps, rho).map(|n| format!("gamma {g}: {n:8.2}")))
            .collect::<Result<_, _>>()?;
        println!("  eps = {eps:>5}: {}", row.join("   "));
    }
    Ok(())
}
