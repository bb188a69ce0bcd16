//! Three baths (T = 2, 1, 3) probed by qutrit ancillas, with the qubit-ancilla
//! version of the same problem for comparison.

use colltherm::protocols::{argmax_by, sweep, ProtocolConfig, Scenario, SweepAxis, SweepGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [1, 3, 5] {
        let qutrit = ProtocolConfig::three_bath([2.0, 1.0, 3.0], 0.5, [0.5, 0.2, 0.0]).with_ancillas(n);
        let qubit = qutrit.clone().with_ancilla_dim(2);
        let grid = |cfg: ProtocolConfig| SweepGrid::range(SweepAxis::Collision(2), 0.0, 1.0, 0.02, cfg);
        let rows3 = sweep(&grid(qutrit)?, Scenario::Qutrit);
        let rows2 = sweep(&grid(qubit)?, Scenario::Uncorrelated);

        let j = argmax_by(&rows3, |r| r.eta_joint).ok_or("no finite η_joint")?;
        let a = argmax_by(&rows3, |r| r.eta_acc).ok_or("no finite η_acc")?;
        let min_det = rows3.iter().map(|r| r.det_qfim).fold(f64::INFINITY, f64::min);
        println!("n = {n}");
        println!("  qutrit: max η_joint {:.4} (gτ₃/π = {:.2}), max η_acc {:.4} (gτ₃/π = {:.2}), min det {:.2e}",
            rows3[j].eta_joint, rows3[j].axis_value, rows3[a].eta_acc, rows3[a].axis_value, min_det);
        println!("  qubit at the qutrit optimum: η_acc {:.4}", rows2[a].eta_acc);
    }
    Ok(())
}
