//! One ancilla, two baths (T = 2, 1), rotation exp(-iπσx/4) between the
//! collisions: η_joint and η_acc along the second collision angle.

use colltherm::protocols::{argmax_by, sweep, ProtocolConfig, Scenario, SweepAxis, SweepGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = ProtocolConfig::two_bath(2.0, 1.0, 0.5, 0.5, 0.0);
    let grid = SweepGrid::range(SweepAxis::Collision(1), 0.0, 1.0, 0.05, base)?;
    let rows = sweep(&grid, Scenario::Single);
    println!("{:>9} {:>10} {:>10} {:>12}", "gτ₂/π", "η_joint", "η_acc", "det F_Q");
    for r in &rows {
        println!("{:>9.2} {:>10.4} {:>10.4} {:>12.4e}", r.axis_value, r.eta_joint, r.eta_acc, r.det_qfim);
    }
    if let Some(i) = argmax_by(&rows, |r| r.eta_acc) {
        println!("max η_acc = {:.4} at gτ₂/π = {:.2}", rows[i].eta_acc, rows[i].axis_value);
    }
    Ok(())
}
