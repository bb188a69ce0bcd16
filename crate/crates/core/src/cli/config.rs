//! TOML configuration schema. Temperatures are in units of ħω/k_B; collision
//! angles gτ and the rotation angle θ are in units of π.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channels::{Axis, BathSpec, CollisionSpec, RotationSpec};
use crate::error::ProtocolError;
use crate::protocols::{ProtocolConfig, Scenario, SweepAxis, SweepGrid};

use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// single | uncorrelated | correlated | qutrit; inferred from the other fields when absent.
    #[serde(default)]
    pub scenario: Option<Scenario>,
    pub baths: Vec<BathSpec>,
    /// gτ/π for each bath, in collision order.
    pub collision_angles: Vec<f64>,
    #[serde(default)]
    pub ancilla: AncillaSection,
    #[serde(default)]
    pub rotation: RotationSection,
    #[serde(default)]
    pub correlated: bool,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AncillaSection {
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_count")]
    pub count: usize,
    /// Initial basis state; defaults to the last level (dim − 1).
    #[serde(default)]
    pub init: Option<usize>,
}

fn default_dim() -> usize {
    2
}

fn default_count() -> usize {
    1
}

impl Default for AncillaSection {
    fn default() -> Self {
        Self { dim: 2, count: 1, init: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSection {
    #[serde(default = "yes")]
    pub enabled: bool,
    /// θ/π
    #[serde(default = "quarter")]
    pub theta: f64,
    #[serde(default = "x_axis")]
    pub axis: Axis,
    #[serde(default)]
    pub after_last: bool,
}

fn yes() -> bool {
    true
}

fn quarter() -> f64 {
    0.25
}

fn x_axis() -> Axis {
    Axis::X
}

impl Default for RotationSection {
    fn default() -> Self {
        Self { enabled: true, theta: 0.25, axis: Axis::X, after_last: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// g1..g3, theta, gamma_t, t1..t3, n_ancillas
    pub axis: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Validated protocol configuration (angles converted to radians).
    pub fn protocol(&self) -> Result<ProtocolConfig, CliError> {
        let cfg = ProtocolConfig {
            baths: self.baths.clone(),
            ancilla_dim: self.ancilla.dim,
            ancilla_count: self.ancilla.count,
            ancilla_init: self.ancilla.init.unwrap_or(self.ancilla.dim.saturating_sub(1)),
            collisions: self.collision_angles.iter().map(|&g| CollisionSpec::from_pi_units(g)).collect(),
            rotation: RotationSpec::new(self.rotation.theta * PI, self.rotation.axis),
            rotation_enabled: self.rotation.enabled,
            correlated: self.correlated,
            apply_rotation_after_last: self.rotation.after_last,
        };
        for (i, g) in self.collision_angles.iter().enumerate() {
            if !(g.is_finite() && *g >= 0.0) {
                return Err(ProtocolError::config(format!("collision_angles[{i}]"), format!("must be ≥ 0, got {g}")).into());
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn scenario(&self, cfg: &ProtocolConfig) -> Scenario {
        self.scenario.unwrap_or_else(|| Scenario::from_config(cfg))
    }

    /// The configured sweep, or a one-point grid on the last collision angle.
    pub fn grid(&self, cfg: &ProtocolConfig) -> Result<SweepGrid, CliError> {
        match &self.sweep {
            Some(s) => {
                let axis: SweepAxis = s.axis.parse().map_err(|e: String| CliError::Config(format!("sweep.axis: {e}")))?;
                Ok(SweepGrid::range(axis, s.start, s.stop, s.step, cfg.clone())?)
            }
            None => {
                let last = cfg.collisions.len() - 1;
                let value = self.collision_angles[last];
                Ok(SweepGrid::new(SweepAxis::Collision(last), vec![value], cfg.clone())?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
scenario = "uncorrelated"
collision_angles = [0.5, 0.27]
correlated = false

[ancilla]
count = 4

[rotation]
theta = 0.25

[[baths]]
temperature = 2.0
gamma = 1.0
therm_time = 0.5

[[baths]]
temperature = 1.0
gamma = 1.0
therm_time = 0.5

[sweep]
axis = "g2"
start = 0.0
stop = 1.0
step = 0.1
"#;

    #[test]
    fn parses_sample() {
        let f = ConfigFile::parse(SAMPLE).unwrap();
        let cfg = f.protocol().unwrap();
        assert_eq!(cfg.ancilla_count, 4);
        assert_eq!(cfg.ancilla_init, 1);
        assert!((cfg.rotation.theta - PI / 4.0).abs() < 1e-15);
        assert!((cfg.collisions[0].angle() - PI / 2.0).abs() < 1e-15);
        assert_eq!(f.grid(&cfg).unwrap().values.len(), 11);
        assert_eq!(f.scenario(&cfg), Scenario::Uncorrelated);
    }

    #[test]
    fn negative_temperature_names_field() {
        let text = SAMPLE.replacen("temperature = 2.0", "temperature = -2.0", 1);
        let err = ConfigFile::parse(&text).unwrap().protocol().unwrap_err();
        assert!(err.to_string().contains("baths[0].temperature"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = SAMPLE.replace("correlated = false", "corelated = false");
        assert!(matches!(ConfigFile::parse(&text), Err(CliError::Config(_))));
    }
}
