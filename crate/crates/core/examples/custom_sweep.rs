//! Builds a sweep programmatically: rotation angle θ for a four-ancilla stream,
//! written as CSV to standard output.

use colltherm::protocols::{sweep, ProtocolConfig, Scenario, SweepAxis, SweepGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = ProtocolConfig::two_bath(2.0, 1.0, 0.5, 0.5, 0.27).with_ancillas(4);
    let grid = SweepGrid::range(SweepAxis::Theta, 0.0, 0.5, 1.0 / 24.0, base)?;
    let mut out = csv::Writer::from_writer(std::io::stdout());
    out.write_record([grid.axis.column().as_str(), "eta_joint", "eta_acc", "singular"])?;
    for row in sweep(&grid, Scenario::Uncorrelated) {
        out.write_record([
            format!("{:.6}", row.axis_value),
            format!("{:.6}", row.eta_joint),
            format!("{:.6}", row.eta_acc),
            row.singular.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
