//! Built-in presets `fig2`…`fig5`: T = (2, 1[, 3]), γt = 0.5, gτ₁/π = 0.5, sweeps of
//! the last collision angle over [0, 1] in steps of 0.01.

use std::f64::consts::PI;

use crate::protocols::{ProtocolConfig, Scenario, SweepAxis, SweepGrid};

use super::CliError;

pub const PRESETS: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];

/// One curve of a preset.
#[derive(Debug, Clone)]
pub struct PresetSeries {
    pub scenario: Scenario,
    pub grid: SweepGrid,
}

const STEP: f64 = 0.01;

fn two_bath_series(scenario: Scenario, n: usize, theta_pi: f64) -> Result<PresetSeries, CliError> {
    let cfg = ProtocolConfig::two_bath(2.0, 1.0, 0.5, 0.5, 0.0).with_ancillas(n).with_theta(theta_pi * PI);
    Ok(PresetSeries { scenario, grid: SweepGrid::range(SweepAxis::Collision(1), 0.0, 1.0, STEP, cfg)? })
}

fn three_bath_series(scenario: Scenario, n: usize, ancilla_dim: usize) -> Result<PresetSeries, CliError> {
    let cfg = ProtocolConfig::three_bath([2.0, 1.0, 3.0], 0.5, [0.5, 0.2, 0.0])
        .with_ancillas(n)
        .with_ancilla_dim(ancilla_dim);
    Ok(PresetSeries { scenario, grid: SweepGrid::range(SweepAxis::Collision(2), 0.0, 1.0, STEP, cfg)? })
}

pub fn preset(name: &str) -> Result<Vec<PresetSeries>, CliError> {
    match name {
        // single ancilla with rotation
        "fig2" => Ok(vec![two_bath_series(Scenario::Single, 1, 0.25)?]),
        // uncorrelated streams, n = 1..6, three rotation angles
        "fig3" => {
            let mut out = Vec::new();
            for theta in [1.0 / 6.0, 0.25, 1.0 / 3.0] {
                for n in 1..=6 {
                    out.push(two_bath_series(Scenario::Uncorrelated, n, theta)?);
                }
            }
            Ok(out)
        }
        // correlated against uncorrelated
        "fig4" => {
            let mut out = Vec::new();
            for n in [2, 3, 4] {
                out.push(two_bath_series(Scenario::Correlated, n, 0.25)?);
                out.push(two_bath_series(Scenario::Uncorrelated, n, 0.25)?);
            }
            Ok(out)
        }
        // three baths: qutrit ancillas, plus qubit ancillas on the same problem
        "fig5" => {
            let mut out = Vec::new();
            for n in [1, 3, 5] {
                out.push(three_bath_series(Scenario::Qutrit, n, 3)?);
            }
            for n in [1, 3, 5] {
                out.push(three_bath_series(Scenario::Uncorrelated, n, 2)?);
            }
            Ok(out)
        }
        other => Err(CliError::Config(format!("unknown scenario preset `{other}` (expected one of {})", PRESETS.join(", ")))),
    }
}
