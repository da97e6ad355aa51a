//! Gauss hypergeometric series, its Pfaff-transformed evaluation on the
//! negative axis, and the `π csc(π s)` factor with its pole guard.

use nonhom::specfun::{hyp2f1, pi_csc, SeriesControl};

fn main() -> nonhom::Result<()> {
    let ctl = SeriesControl::default();

    // 2F1(1,1;2;z) = -ln(1-z)/z
    for z in [-50.0f64, -2.0, -0.5, 0.5, 0.9] {
        let series = hyp2f1(1.0, 1.0, 2.0, z, ctl)?;
        let closed = -(-z).ln_1p() / z;
        println!("z = {z:>6}: 2F1 = {series:.15}  closed form = {closed:.15}");
    }

    // The tail term of the closed-form fixed point uses 2F1(1, 1-s; 2-s; -β).
    let s = 2.5 / 3.0;
    for beta in [1e-3, 1.0, 1e3] {
        println!("beta = {beta:>6}: 2F1(1, 1-s; 2-s; -beta) = {:.12e}", hyp2f1(1.0, 1.0 - s, 2.0 - s, -beta, ctl)?);
    }

    println!("pi csc(pi s) for alpha = 3, eps = -0.5: {}", pi_csc(3.0, -0.5)?);
    match pi_csc(2.5, 0.5) {
        Err(e) => println!("alpha = 2 + eps is rejected: {e}"),
        Ok(v) => println!("unexpected value {v}"),
    }
    Ok(())
}
