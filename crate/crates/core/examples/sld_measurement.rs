//! Single-temperature estimation: measuring in the eigenbasis of the SLD makes
//! the classical Fisher information reach the quantum one, while a
//! computational-basis readout of the rotated state does not.

use colltherm::error::ProtocolError;
use colltherm::estimation::{classical_fim, eigenbasis_povm, finite_diff_derivatives, qfim};
use colltherm::linalg::{ComplexMatrix, DensityMatrix};
use colltherm::protocols::{ancilla_stream, ProtocolConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ProtocolConfig::two_bath(2.0, 1.0, 0.5, 0.5, 0.3);
    // estimate T₁ alone, with T₂ held at its nominal value
    let family = |t: &[f64]| -> Result<DensityMatrix, ProtocolError> { Ok(ancilla_stream(&cfg, &[t[0], 1.0])?.remove(0)) };
    let theta = [2.0];
    let pd = finite_diff_derivatives(family, &theta, None)?;
    let q = qfim(&pd)?;
    let sld_basis = eigenbasis_povm(&q.slds[0])?;
    let computational = vec![ComplexMatrix::basis_projector(2, 0), ComplexMatrix::basis_projector(2, 1)];
    let f_sld = classical_fim(family, &theta, &sld_basis, 1e-5)?;
    let f_comp = classical_fim(family, &theta, &computational, 1e-5)?;
    println!("QFI                          {:.6e}", q.matrix[(0, 0)]);
    println!("FI, SLD eigenbasis           {:.6e}", f_sld[(0, 0)]);
    println!("FI, computational basis      {:.6e}", f_comp[(0, 0)]);
    Ok(())
}
