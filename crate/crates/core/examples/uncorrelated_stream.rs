//! Stream of n ancillas without ancilla–ancilla correlations: best η_joint and
//! η_acc over the second collision angle for n = 1..6 and three rotation angles.

use std::f64::consts::PI;

use colltherm::protocols::{argmax_by, sweep, ProtocolConfig, Scenario, SweepAxis, SweepGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for theta in [1.0 / 6.0, 0.25, 1.0 / 3.0] {
        println!("theta = {theta:.4}π");
        println!("{:>3} {:>12} {:>10} {:>12} {:>10}", "n", "max η_joint", "at gτ₂/π", "max η_acc", "at gτ₂/π");
        for n in 1..=6 {
            let base = ProtocolConfig::two_bath(2.0, 1.0, 0.5, 0.5, 0.0).with_theta(theta * PI).with_ancillas(n);
            let grid = SweepGrid::range(SweepAxis::Collision(1), 0.0, 1.0, 0.01, base)?;
            let rows = sweep(&grid, Scenario::Uncorrelated);
            let j = argmax_by(&rows, |r| r.eta_joint).ok_or("no finite η_joint")?;
            let a = argmax_by(&rows, |r| r.eta_acc).ok_or("no finite η_acc")?;
            println!(
                "{n:>3} {:>12.4} {:>10.2} {:>12.4} {:>10.2}",
                rows[j].eta_joint, rows[j].axis_value, rows[a].eta_acc, rows[a].axis_value
            );
        }
    }
    Ok(())
}
