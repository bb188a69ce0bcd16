//! Experiment families built from the channels: a single ancilla crossing the
//! probes, a stream of ancillas (product of marginals or fully correlated),
//! and the three-bath qutrit variant, plus parameter sweeps over them.
//!
//! Every evaluator is a pure function of the temperature vector so that the
//! QFIM derivatives see both ways temperatures enter: the initial probe Gibbs
//! states and the partial-thermalization channels between collisions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{
    collision_unitary, rotation_superoperator, thermal_state, thermalization_channel, Axis, BathSpec, CollisionSpec,
    RotationSpec,
};
use crate::error::ProtocolError;
use crate::estimation::{finite_diff_derivatives_multi, qfim, thermal_fim, EstimationReport, Qfim, RealMatrix};
use crate::linalg::{ComplexMatrix, DensityMatrix, Superoperator};

/// Largest joint probe⊗ancilla dimension simulated in correlated mode.
pub const DIMENSION_CAP: usize = 256;

/// Full description of one protocol instance. Angles are in radians here;
/// configuration files use π units.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub baths: Vec<BathSpec>,
    pub ancilla_dim: usize,
    pub ancilla_count: usize,
    /// Basis index of the initial ancilla state.
    pub ancilla_init: usize,
    /// One collision per bath, in the order the ancilla meets the probes.
    pub collisions: Vec<CollisionSpec>,
    pub rotation: RotationSpec,
    pub rotation_enabled: bool,
    pub correlated: bool,
    pub apply_rotation_after_last: bool,
}

impl ProtocolConfig {
    /// Two baths, one qubit ancilla starting in |1⟩, exp(−iπσ_x/4) between collisions.
    /// Collision angles are given in π units.
    pub fn two_bath(t1: f64, t2: f64, gamma_t: f64, g1_pi: f64, g2_pi: f64) -> Self {
        Self {
            baths: vec![BathSpec::new(t1, gamma_t), BathSpec::new(t2, gamma_t)],
            ancilla_dim: 2,
            ancilla_count: 1,
            ancilla_init: 1,
            collisions: vec![CollisionSpec::from_pi_units(g1_pi), CollisionSpec::from_pi_units(g2_pi)],
            rotation: RotationSpec::new(PI / 4.0, Axis::X),
            rotation_enabled: true,
            correlated: false,
            apply_rotation_after_last: false,
        }
    }

    /// Three baths with qutrit ancillas starting in the m = −1 level.
    pub fn three_bath(temperatures: [f64; 3], gamma_t: f64, angles_pi: [f64; 3]) -> Self {
        Self {
            baths: temperatures.iter().map(|&t| BathSpec::new(t, gamma_t)).collect(),
            ancilla_dim: 3,
            ancilla_count: 1,
            ancilla_init: 2,
            collisions: angles_pi.iter().map(|&g| CollisionSpec::from_pi_units(g)).collect(),
            rotation: RotationSpec::new(PI / 4.0, Axis::X),
            rotation_enabled: true,
            correlated: false,
            apply_rotation_after_last: false,
        }
    }

    pub fn with_ancillas(mut self, n: usize) -> Self {
        self.ancilla_count = n;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.rotation.theta = theta;
        self
    }

    pub fn without_rotation(mut self) -> Self {
        self.rotation_enabled = false;
        self
    }

    pub fn correlated(mut self, correlated: bool) -> Self {
        self.correlated = correlated;
        self
    }

    pub fn rotate_after_last(mut self, yes: bool) -> Self {
        self.apply_rotation_after_last = yes;
        self
    }

    /// Switches the ancilla dimension and resets the initial state to the last level.
    pub fn with_ancilla_dim(mut self, dim: usize) -> Self {
        self.ancilla_dim = dim;
        self.ancilla_init = dim.saturating_sub(1);
        self
    }

    pub fn with_collision_pi(mut self, stage: usize, units: f64) -> Self {
        self.collisions[stage] = CollisionSpec::from_pi_units(units);
        self
    }

    pub fn temperatures(&self) -> Vec<f64> {
        self.baths.iter().map(|b| b.temperature).collect()
    }

    pub fn joint_dim(&self) -> usize {
        (2usize.pow(self.baths.len() as u32)).saturating_mul(self.ancilla_dim.saturating_pow(self.ancilla_count as u32))
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        let n = self.baths.len();
        if !(2..=3).contains(&n) {
            return Err(ProtocolError::config("baths", format!("need 2 or 3 baths, got {n}")));
        }
        for (i, b) in self.baths.iter().enumerate() {
            b.validate().map_err(|e| field_error(format!("baths[{i}]"), e))?;
        }
        if self.collisions.len() != n {
            return Err(ProtocolError::config(
                "collision_angles",
                format!("need one angle per bath ({n}), got {}", self.collisions.len()),
            ));
        }
        for (i, c) in self.collisions.iter().enumerate() {
            c.validate().map_err(|e| field_error(format!("collisions[{i}]"), e))?;
        }
        if !matches!(self.ancilla_dim, 2 | 3) {
            return Err(ProtocolError::config("ancilla_dim", format!("must be 2 or 3, got {}", self.ancilla_dim)));
        }
        if self.ancilla_count == 0 {
            return Err(ProtocolError::config("ancilla_count", "must be at least 1"));
        }
        if self.ancilla_init >= self.ancilla_dim {
            return Err(ProtocolError::config(
                "ancilla_init",
                format!("index {} out of range for dimension {}", self.ancilla_init, self.ancilla_dim),
            ));
        }
        if !self.rotation.theta.is_finite() {
            return Err(ProtocolError::config("rotation.theta", "must be finite"));
        }
        if self.correlated && self.joint_dim() > DIMENSION_CAP {
            return Err(ProtocolError::DimensionCap { dim: self.joint_dim(), cap: DIMENSION_CAP });
        }
        Ok(())
    }
}

fn field_error(prefix: String, e: crate::error::ChannelError) -> ProtocolError {
    match e {
        crate::error::ChannelError::InvalidParameter { field, requirement, value } => {
            ProtocolError::config(format!("{prefix}.{field}"), format!("must be {requirement}, got {value}"))
        }
        other => other.into(),
    }
}

/// The four experiment families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Single,
    Uncorrelated,
    Correlated,
    Qutrit,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::Single, Scenario::Uncorrelated, Scenario::Correlated, Scenario::Qutrit];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Single => "single",
            Scenario::Uncorrelated => "uncorrelated",
            Scenario::Correlated => "correlated",
            Scenario::Qutrit => "qutrit",
        }
    }

    /// The scenario a configuration describes on its own.
    pub fn from_config(config: &ProtocolConfig) -> Self {
        if config.correlated {
            Scenario::Correlated
        } else if config.ancilla_dim == 3 && config.baths.len() == 3 {
            Scenario::Qutrit
        } else if config.ancilla_count == 1 {
            Scenario::Single
        } else {
            Scenario::Uncorrelated
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| format!("unknown scenario `{s}` (expected single, uncorrelated, correlated or qutrit)"))
    }
}

/// Temperature-independent pieces of a protocol.
struct Prepared {
    collisions: Vec<ComplexMatrix>,
    rotation: Superoperator,
}

impl Prepared {
    fn new(config: &ProtocolConfig) -> Result<Self, ProtocolError> {
        let collisions = config
            .collisions
            .iter()
            .map(|c| collision_unitary(c, config.ancilla_dim))
            .collect::<Result<_, _>>()?;
        let rotation = rotation_superoperator(&config.rotation, config.ancilla_dim)?;
        Ok(Self { collisions, rotation })
    }

    fn rotates_after(&self, config: &ProtocolConfig, stage: usize) -> bool {
        config.rotation_enabled && (stage + 1 < config.baths.len() || config.apply_rotation_after_last)
    }
}

/// Temperature-dependent pieces: probe Gibbs states and thermalization channels.
fn bath_maps(config: &ProtocolConfig, temps: &[f64]) -> Result<(Vec<DensityMatrix>, Vec<Superoperator>), ProtocolError> {
    if temps.len() != config.baths.len() {
        return Err(crate::error::EstimationError::ParameterCount(temps.len(), config.baths.len()).into());
    }
    let mut states = Vec::with_capacity(temps.len());
    let mut channels = Vec::with_capacity(temps.len());
    for (bath, &t) in config.baths.iter().zip(temps) {
        let b = bath.with_temperature(t);
        states.push(thermal_state(b.omega, t)?);
        channels.push(thermalization_channel(&b)?);
    }
    Ok((states, channels))
}

/// Final marginal states of the ancillas of a stream in which probes keep
/// their state between ancillas (relaxing through Λ after each collision) and
/// ancilla–ancilla correlations are discarded.
pub fn ancilla_stream(config: &ProtocolConfig, temps: &[f64]) -> Result<Vec<DensityMatrix>, ProtocolError> {
    let prep = Prepared::new(config)?;
    let (mut probes, relax) = bath_maps(config, temps)?;
    let d = config.ancilla_dim;
    let mut out = Vec::with_capacity(config.ancilla_count);
    for _ in 0..config.ancilla_count {
        let mut ancilla = DensityMatrix::basis_state(d, config.ancilla_init);
        for (i, u) in prep.collisions.iter().enumerate() {
            let joint = probes[i].tensor(&ancilla).apply_local_unitary(&[0, 1], u)?;
            ancilla = joint.partial_trace(&[1])?;
            let probe = joint.partial_trace(&[0])?;
            if prep.rotates_after(config, i) {
                ancilla = DensityMatrix::from_parts(prep.rotation.apply(ancilla.matrix()), vec![d])?;
            }
            probes[i] = DensityMatrix::from_parts(relax[i].apply(probe.matrix()), vec![2])?;
        }
        out.push(ancilla);
    }
    Ok(out)
}

/// Joint state of all ancillas when probes and ancillas evolve together and
/// the probes are traced out only at the end. Factor order: probes, then ancillas.
pub fn correlated_ancillas(config: &ProtocolConfig, temps: &[f64]) -> Result<DensityMatrix, ProtocolError> {
    let dim = config.joint_dim();
    if dim > DIMENSION_CAP {
        return Err(ProtocolError::DimensionCap { dim, cap: DIMENSION_CAP });
    }
    let prep = Prepared::new(config)?;
    let (probes, relax) = bath_maps(config, temps)?;
    let nb = config.baths.len();
    let fresh = DensityMatrix::basis_state(config.ancilla_dim, config.ancilla_init);
    let mut factors: Vec<&DensityMatrix> = probes.iter().collect();
    factors.extend(std::iter::repeat_n(&fresh, config.ancilla_count));
    let mut state = DensityMatrix::product(&factors);

    for k in 0..config.ancilla_count {
        let site = nb + k;
        for (i, u) in prep.collisions.iter().enumerate() {
            state = state.apply_local_unitary(&[i, site], u)?;
            if prep.rotates_after(config, i) {
                state = state.apply_local_superoperator(&[site], &prep.rotation)?;
            }
            state = state.apply_local_superoperator(&[i], &relax[i])?;
        }
    }
    let keep: Vec<usize> = (nb..nb + config.ancilla_count).collect();
    Ok(state.partial_trace(&keep)?)
}

/// Result of evaluating a protocol: final states at the nominal temperatures
/// and the estimation report.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Per-ancilla marginals (stream modes) or the joint ancilla state (correlated).
    pub states: Vec<DensityMatrix>,
    pub report: EstimationReport,
}

fn report_from_states<F>(config: &ProtocolConfig, states_fn: F) -> Result<Evaluation, ProtocolError>
where
    F: Fn(&[f64]) -> Result<Vec<DensityMatrix>, ProtocolError>,
{
    let temps = config.temperatures();
    let pds = finite_diff_derivatives_multi(&states_fn, &temps, None)?;
    let mut components: Vec<Qfim> = Vec::with_capacity(pds.len());
    let mut states = Vec::with_capacity(pds.len());
    for pd in pds {
        pd.base_state.validate()?;
        components.push(qfim(&pd)?);
        states.push(pd.base_state);
    }
    let thermal = thermal_fim(&config.baths)?;
    Ok(Evaluation { states, report: EstimationReport::from_components(components, thermal)? })
}

/// One ancilla crossing all probes.
pub fn single_run(config: &ProtocolConfig) -> Result<(DensityMatrix, EstimationReport), ProtocolError> {
    config.validate()?;
    if config.ancilla_count != 1 {
        return Err(ProtocolError::config("ancilla_count", "single run needs exactly one ancilla"));
    }
    let mut eval = report_from_states(config, |t: &[f64]| ancilla_stream(config, t))?;
    Ok((eval.states.remove(0), eval.report))
}

/// Stream of n ancillas; QFIM is the sum of the marginal QFIMs.
pub fn multi_ancilla_uncorrelated(config: &ProtocolConfig) -> Result<Evaluation, ProtocolError> {
    config.validate()?;
    if config.correlated {
        return Err(ProtocolError::config("correlated", "uncorrelated mode requires correlated = false"));
    }
    report_from_states(config, |t: &[f64]| ancilla_stream(config, t))
}

/// Stream of n ancillas simulated jointly; QFIM of the joint ancilla state.
pub fn multi_ancilla_correlated(config: &ProtocolConfig) -> Result<Evaluation, ProtocolError> {
    let mut cfg = config.clone();
    cfg.correlated = true;
    cfg.validate()?;
    report_from_states(&cfg, |t: &[f64]| correlated_ancillas(&cfg, t).map(|s| vec![s]))
}

/// Three baths probed by a stream of qutrit ancillas (marginal-product mode).
pub fn three_bath_qutrit(config: &ProtocolConfig) -> Result<Evaluation, ProtocolError> {
    if config.baths.len() != 3 {
        return Err(ProtocolError::config("baths", "qutrit scenario needs three baths"));
    }
    if config.ancilla_dim != 3 {
        return Err(ProtocolError::config("ancilla_dim", "qutrit scenario needs ancilla_dim = 3"));
    }
    multi_ancilla_uncorrelated(config)
}

/// Evaluates `config` as the given scenario.
pub fn evaluate(config: &ProtocolConfig, scenario: Scenario) -> Result<Evaluation, ProtocolError> {
    match scenario {
        Scenario::Single => {
            let (state, report) = single_run(config)?;
            Ok(Evaluation { states: vec![state], report })
        }
        Scenario::Uncorrelated => multi_ancilla_uncorrelated(&config.clone().correlated(false)),
        Scenario::Correlated => multi_ancilla_correlated(config),
        Scenario::Qutrit => three_bath_qutrit(&config.clone().correlated(false)),
    }
}

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// gτ of the collision with probe `i` (0-based), in π units.
    Collision(usize),
    /// Rotation angle, in π units.
    Theta,
    /// γ·t_SB of every bath.
    GammaT,
    /// Temperature of bath `i` (0-based), in ħω/k_B.
    Temperature(usize),
    AncillaCount,
}

impl SweepAxis {
    /// Name used on the command line: g1, g2, g3, theta, gamma_t, t1, t2, t3, n_ancillas.
    pub fn name(&self) -> String {
        match self {
            SweepAxis::Collision(i) => format!("g{}", i + 1),
            SweepAxis::Theta => "theta".into(),
            SweepAxis::GammaT => "gamma_t".into(),
            SweepAxis::Temperature(i) => format!("t{}", i + 1),
            SweepAxis::AncillaCount => "n_ancillas".into(),
        }
    }

    /// CSV column header for the axis values.
    pub fn column(&self) -> String {
        match self {
            SweepAxis::Collision(i) => format!("g_t{}_over_pi", i + 1),
            SweepAxis::Theta => "theta_over_pi".into(),
            SweepAxis::GammaT => "gamma_t".into(),
            SweepAxis::Temperature(i) => format!("temperature_{}", i + 1),
            SweepAxis::AncillaCount => "n_ancillas".into(),
        }
    }

    /// `config` with this axis set to `value`.
    pub fn apply(&self, config: &ProtocolConfig, value: f64) -> Result<ProtocolConfig, ProtocolError> {
        let mut cfg = config.clone();
        let nb = cfg.baths.len();
        let stage_check = |i: usize| {
            if i < nb {
                Ok(())
            } else {
                Err(ProtocolError::config(self.name(), format!("only {nb} baths configured")))
            }
        };
        match *self {
            SweepAxis::Collision(i) => {
                stage_check(i)?;
                cfg.collisions[i] = CollisionSpec::from_pi_units(value);
            }
            SweepAxis::Theta => cfg.rotation.theta = value * PI,
            SweepAxis::GammaT => {
                for b in &mut cfg.baths {
                    if b.gamma > 0.0 {
                        b.therm_time = value / b.gamma;
                    } else {
                        b.gamma = 1.0;
                        b.therm_time = value;
                    }
                }
            }
            SweepAxis::Temperature(i) => {
                stage_check(i)?;
                cfg.baths[i].temperature = value;
            }
            SweepAxis::AncillaCount => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(ProtocolError::config("n_ancillas", format!("must be a positive integer, got {value}")));
                }
                cfg.ancilla_count = value as usize;
            }
        }
        Ok(cfg)
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let indexed = |rest: &str| rest.parse::<usize>().ok().filter(|&i| (1..=3).contains(&i)).map(|i| i - 1);
        match s {
            "theta" => Ok(SweepAxis::Theta),
            "gamma_t" => Ok(SweepAxis::GammaT),
            "n_ancillas" => Ok(SweepAxis::AncillaCount),
            _ => {
                if let Some(i) = s.strip_prefix('g').and_then(indexed) {
                    Ok(SweepAxis::Collision(i))
                } else if let Some(i) = s.strip_prefix('t').and_then(indexed) {
                    Ok(SweepAxis::Temperature(i))
                } else {
                    Err(format!("unknown sweep axis `{s}` (expected g1..g3, theta, gamma_t, t1..t3, n_ancillas)"))
                }
            }
        }
    }
}

/// Axis values (strictly increasing) applied on top of a fixed configuration.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub fixed: ProtocolConfig,
}

impl SweepGrid {
    pub fn new(axis: SweepAxis, values: Vec<f64>, fixed: ProtocolConfig) -> Result<Self, ProtocolError> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ProtocolError::config("values", "grid values must be finite"));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ProtocolError::config("values", "grid values must be strictly increasing"));
        }
        Ok(Self { axis, values, fixed })
    }

    /// start, start+step, … up to stop inclusive (the end point is kept when it
    /// lies within 1e-9·step of the lattice).
    pub fn range(axis: SweepAxis, start: f64, stop: f64, step: f64, fixed: ProtocolConfig) -> Result<Self, ProtocolError> {
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() || !stop.is_finite() {
            return Err(ProtocolError::config("step", "need finite start/stop and a positive step"));
        }
        if stop < start {
            return Self::new(axis, Vec::new(), fixed);
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        let values = (0..=count).map(|k| round_grid(start + k as f64 * step)).collect();
        Self::new(axis, values, fixed)
    }
}

/// Removes accumulated binary noise from lattice values (1e-12 resolution).
fn round_grid(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis_value: f64,
    pub eta_joint: f64,
    pub eta_acc: f64,
    pub det_qfim: f64,
    pub trace_qfim: f64,
    pub singular: bool,
    pub qfim: Option<RealMatrix>,
    /// Failure message when the point could not be evaluated.
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(axis_value: f64, err: ProtocolError) -> Self {
        Self {
            axis_value,
            eta_joint: f64::NAN,
            eta_acc: f64::NAN,
            det_qfim: f64::NAN,
            trace_qfim: f64::NAN,
            singular: false,
            qfim: None,
            error: Some(err.to_string()),
        }
    }
}

/// Evaluates every grid point (in parallel on the current rayon pool); rows
/// come back in grid order and failures are recorded per row.
pub fn sweep(grid: &SweepGrid, scenario: Scenario) -> Vec<SweepRow> {
    grid.values
        .par_iter()
        .map(|&x| {
            let result = grid.axis.apply(&grid.fixed, x).and_then(|cfg| evaluate(&cfg, scenario));
            match result {
                Ok(ev) => SweepRow {
                    axis_value: x,
                    eta_joint: ev.report.eta_joint,
                    eta_acc: ev.report.eta_acc,
                    det_qfim: ev.report.det_qfim(),
                    trace_qfim: ev.report.trace_qfim(),
                    singular: ev.report.singular,
                    qfim: Some(ev.report.qfim),
                    error: None,
                },
                Err(e) => SweepRow::failed(x, e),
            }
        })
        .collect()
}

/// Index of the row with the largest finite value of `metric` (first on ties).
pub fn argmax_by(rows: &[SweepRow], metric: impl Fn(&SweepRow) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in rows.iter().enumerate() {
        let v = metric(row);
        if row.error.is_some() || !v.is_finite() {
            continue;
        }
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}
