//! A parallel sweep over array sizes compared against the large-network
//! prediction. Pass a trial count as the first argument (default 200).

use nonhom::simulate::{run_sweep, SimConfig};

fn main() -> nonhom::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let mut cfg = SimConfig::reference(4.0, -0.5, 2, 2024)?;
    cfg.trials = trials;
    let summary = run_sweep(&cfg, &[2, 4, 8, 16, 32])?;
    println!("alpha = 4, eps = -0.5, {trials} trials per point");
    println!("{:>4} {:>10} {:>10} {:>10} {:>9} {:>10}", "N", "mean gamma", "std", "predicted", "rel err", "mean eta");
    for r in &summary.rows {
        println!(
            "{:>4} {:>10.4} {:>10.4} {:>10.4} {:>8.2}% {:>10.4}",
            r.antennas,
            r.mean_spec_eff,
            r.std_spec_eff,
            r.asymptotic_spec_eff.unwrap_or(f64::NAN),
            100.0 * r.rel_error.unwrap_or(f64::NAN),
            r.mean_eta
        );
    }
    Ok(())
}
