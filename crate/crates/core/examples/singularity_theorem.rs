//! Without a rotation between the collisions both temperature derivatives of
//! the final qubit are proportional and the QFIM is singular; the rotation
//! removes the proportionality.

use colltherm::estimation::{finite_diff_derivatives, qfim, singularity_test};
use colltherm::protocols::{ancilla_stream, ProtocolConfig};
use colltherm::error::ProtocolError;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (label, cfg) in [
        ("no rotation  ", ProtocolConfig::two_bath(2.0, 1.0, 0.5, 0.3, 0.3).without_rotation()),
        ("with rotation", ProtocolConfig::two_bath(2.0, 1.0, 0.5, 0.3, 0.3)),
    ] {
        let pd = finite_diff_derivatives::<ProtocolError, _>(
            |t: &[f64]| Ok(ancilla_stream(&cfg, t)?.remove(0)),
            &cfg.temperatures(),
            None,
        )?;
        let verdict = singularity_test(&pd)?;
        let f = qfim(&pd)?;
        println!(
            "{label}: singular = {:<5} c = {:<22} det F_Q = {:.3e}  ‖[L₁,L₂]‖ = {:.3e}",
            verdict.singular,
            format!("{:?}", verdict.c),
            f.matrix.determinant(),
            f.commutator_norm()
        );
    }
    Ok(())
}
