//! Physical maps of the protocol: thermal probe states, probe–ancilla
//! collisions, ancilla rotations and the partial-thermalization channel.
//!
//! Energy convention: a probe has H = ω σ_z / 2 with σ_z|0⟩ = |0⟩, so |0⟩ is
//! the excited level (+ω/2) and |1⟩ the ground level (−ω/2). Thermal
//! populations are indexed by the computational basis, λ_j = e^{−E_j/T}/Z.
//! Qutrit ancillas use the spin-1 basis ordered m = +1, 0, −1.

use serde::{Deserialize, Serialize};

use crate::error::ChannelError;
use crate::linalg::{c, kron, matrix_exp, pauli, r, ComplexMatrix, DensityMatrix, Superoperator, ZERO};

/// One bath and the probe thermalizing with it. Units: k_B = ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSpec {
    pub temperature: f64,
    #[serde(default = "default_omega")]
    pub omega: f64,
    /// Probe–bath coupling rate γ.
    #[serde(default)]
    pub gamma: f64,
    /// Partial-thermalization time t_SB between successive collisions.
    #[serde(default)]
    pub therm_time: f64,
}

fn default_omega() -> f64 {
    1.0
}

impl BathSpec {
    /// Bath with ω = 1 and the given γ·t_SB product (γ = 1).
    pub fn new(temperature: f64, gamma_t: f64) -> Self {
        Self { temperature, omega: 1.0, gamma: 1.0, therm_time: gamma_t }
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        positive_finite("temperature", self.temperature)?;
        positive_finite("omega", self.omega)?;
        non_negative("gamma", self.gamma)?;
        non_negative("therm_time", self.therm_time)?;
        Ok(())
    }

    /// Bose occupation n̄ = 1/(e^{ω/T} − 1) at the probe frequency.
    pub fn mean_occupation(&self) -> f64 {
        1.0 / (self.omega / self.temperature).exp_m1()
    }

    pub fn populations(&self) -> Result<[f64; 2], ChannelError> {
        thermal_populations(self.omega, self.temperature)
    }
}

fn positive_finite(field: &'static str, value: f64) -> Result<(), ChannelError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ChannelError::InvalidParameter { field, requirement: "positive and finite", value })
    }
}

fn non_negative(field: &'static str, value: f64) -> Result<(), ChannelError> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ChannelError::InvalidParameter { field, requirement: "non-negative and finite", value })
    }
}

/// Probe–ancilla collision. Only the product g·τ enters the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionSpec {
    pub g: f64,
    pub tau: f64,
}

impl CollisionSpec {
    pub fn from_angle(angle: f64) -> Self {
        Self { g: angle, tau: 1.0 }
    }

    /// Collision with g·τ = `units · π`.
    pub fn from_pi_units(units: f64) -> Self {
        Self::from_angle(units * std::f64::consts::PI)
    }

    pub fn angle(&self) -> f64 {
        self.g * self.tau
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        non_negative("g", self.g)?;
        non_negative("tau", self.tau)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Ancilla rotation exp(−iθ G) with G = σ_axis (qubit) or S_axis (qutrit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub theta: f64,
    pub axis: Axis,
}

impl RotationSpec {
    pub fn new(theta: f64, axis: Axis) -> Self {
        Self { theta, axis }
    }

    pub fn generator(&self, dim: usize) -> Result<ComplexMatrix, ChannelError> {
        match (dim, self.axis) {
            (2, Axis::X) => Ok(pauli::x()),
            (2, Axis::Y) => Ok(pauli::y()),
            (2, Axis::Z) => Ok(pauli::z()),
            (3, Axis::X) => Ok(spin1::x()),
            (3, Axis::Y) => Ok(spin1::y()),
            (3, Axis::Z) => Ok(spin1::z()),
            (d, _) => Err(ChannelError::UnsupportedDimension(d)),
        }
    }

    pub fn unitary(&self, dim: usize) -> Result<ComplexMatrix, ChannelError> {
        Ok(matrix_exp(&self.generator(dim)?, c(0.0, -self.theta)))
    }
}

/// Spin-1 operators in the basis (m = +1, 0, −1).
pub mod spin1 {
    use crate::linalg::{c, r, ComplexMatrix, ZERO};

    pub fn x() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real_rows(&[vec![0.0, s, 0.0], vec![s, 0.0, s], vec![0.0, s, 0.0]])
    }

    pub fn y() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_rows(&[
            vec![ZERO, c(0.0, -s), ZERO],
            vec![c(0.0, s), ZERO, c(0.0, -s)],
            vec![ZERO, c(0.0, s), ZERO],
        ])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[r(1.0), ZERO, r(-1.0)])
    }

    /// Q₊ = (S_x + iS_y)/2
    pub fn q_plus() -> ComplexMatrix {
        (&x() + &y().scale(c(0.0, 1.0))).scale_real(0.5)
    }

    /// Q₋ = (S_x − iS_y)/2
    pub fn q_minus() -> ComplexMatrix {
        (&x() - &y().scale(c(0.0, 1.0))).scale_real(0.5)
    }
}

/// Kraus operators of a channel, all of the same dimension.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    /// ‖Σ K†K − I‖_max
    pub fn completeness_defect(&self) -> f64 {
        let d = self.operators[0].cols();
        let mut sum = ComplexMatrix::zeros(d, d);
        for k in &self.operators {
            sum = &sum + &k.adjoint().matmul(k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let d = rho.rows();
        self.operators.iter().fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &rho.conjugate_by(k))
    }

    pub fn superoperator(&self) -> Superoperator {
        Superoperator::from_kraus(&self.operators)
    }
}

/// Gibbs populations (λ₀, λ₁) of H = ωσ_z/2. `T = ∞` gives (½, ½).
pub fn thermal_populations(omega: f64, temperature: f64) -> Result<[f64; 2], ChannelError> {
    if !(temperature > 0.0) {
        return Err(ChannelError::InvalidParameter {
            field: "temperature",
            requirement: "positive",
            value: temperature,
        });
    }
    // λ₀ = e^{-ω/2T}/Z = 1/(1 + e^{ω/T})
    let excited = 1.0 / (1.0 + (omega / temperature).exp());
    Ok([excited, 1.0 - excited])
}

pub fn thermal_state(omega: f64, temperature: f64) -> Result<DensityMatrix, ChannelError> {
    let [l0, l1] = thermal_populations(omega, temperature)?;
    Ok(DensityMatrix::single(ComplexMatrix::real_diagonal(&[l0, l1]))?)
}

/// g(σ₊⊗σ₋ + σ₋⊗σ₊) = g(|01⟩⟨10| + |10⟩⟨01|), probe factor first.
pub fn exchange_hamiltonian_qubit(g: f64) -> ComplexMatrix {
    let h = &kron(&pauli::raising(), &pauli::lowering()) + &kron(&pauli::lowering(), &pauli::raising());
    h.scale_real(g)
}

/// g(σ₊Q₋ + σ₋Q₊) on probe ⊗ qutrit.
pub fn exchange_hamiltonian_qutrit(g: f64) -> ComplexMatrix {
    let h = &kron(&pauli::raising(), &spin1::q_minus()) + &kron(&pauli::lowering(), &spin1::q_plus());
    h.scale_real(g)
}

/// exp(−i g τ (|01⟩⟨10| + |10⟩⟨01|)) in closed form.
pub fn collision_unitary_qubit(spec: &CollisionSpec) -> ComplexMatrix {
    let a = spec.angle();
    let (s, co) = a.sin_cos();
    ComplexMatrix::from_rows(&[
        vec![r(1.0), ZERO, ZERO, ZERO],
        vec![ZERO, r(co), c(0.0, -s), ZERO],
        vec![ZERO, c(0.0, -s), r(co), ZERO],
        vec![ZERO, ZERO, ZERO, r(1.0)],
    ])
}

pub fn collision_unitary_qubit_qutrit(spec: &CollisionSpec) -> ComplexMatrix {
    matrix_exp(&exchange_hamiltonian_qutrit(spec.g), c(0.0, -spec.tau))
}

/// Collision unitary on probe ⊗ ancilla for a qubit or qutrit ancilla.
pub fn collision_unitary(spec: &CollisionSpec, ancilla_dim: usize) -> Result<ComplexMatrix, ChannelError> {
    match ancilla_dim {
        2 => Ok(collision_unitary_qubit(spec)),
        3 => Ok(collision_unitary_qubit_qutrit(spec)),
        d => Err(ChannelError::UnsupportedDimension(d)),
    }
}

/// K_ij = √λ_j ⟨i|U|j⟩ for an environment state diagonal in the computational
/// basis, environment factor first in `u`.
pub fn kraus_from_collision(u: &ComplexMatrix, rho_env: &DensityMatrix) -> Result<KrausSet, ChannelError> {
    let env = rho_env.matrix();
    let de = env.rows();
    let mut off = 0.0_f64;
    for i in 0..de {
        for j in 0..de {
            if i != j {
                off = off.max(env[(i, j)].norm());
            }
        }
    }
    if off > 1e-12 {
        return Err(ChannelError::NonDiagonalEnvironment(off));
    }
    let da = u.rows() / de;
    let mut ops = Vec::with_capacity(de * de);
    for i in 0..de {
        for j in 0..de {
            let lam = env[(j, j)].re.max(0.0);
            if lam == 0.0 {
                continue;
            }
            let s = lam.sqrt();
            let k = ComplexMatrix::from_fn(da, da, |a, b| u[(i * da + a, j * da + b)] * s);
            if k.max_abs() > 0.0 {
                ops.push(k);
            }
        }
    }
    Ok(KrausSet { operators: ops })
}

/// Ancilla channel of one collision with a fully thermal probe.
pub fn collision_superoperator(spec: &CollisionSpec, bath: &BathSpec, ancilla_dim: usize) -> Result<Superoperator, ChannelError> {
    let u = collision_unitary(spec, ancilla_dim)?;
    let env = thermal_state(bath.omega, bath.temperature)?;
    Ok(kraus_from_collision(&u, &env)?.superoperator())
}

pub fn rotation_superoperator(spec: &RotationSpec, dim: usize) -> Result<Superoperator, ChannelError> {
    Ok(Superoperator::from_unitary(&spec.unitary(dim)?))
}

/// Vectorized GKSL generator γ(n̄+1)D[σ₋] + γn̄D[σ₊] with D[O]ρ = OρO† − ½{O†O, ρ}.
pub fn lindbladian(bath: &BathSpec) -> Result<Superoperator, ChannelError> {
    bath.validate()?;
    let nbar = bath.mean_occupation();
    let id = ComplexMatrix::identity(2);
    let mut gen = ComplexMatrix::zeros(4, 4);
    for (rate, op) in [(bath.gamma * (nbar + 1.0), pauli::lowering()), (bath.gamma * nbar, pauli::raising())] {
        let od = op.adjoint();
        let odo = od.matmul(&op);
        let jump = Superoperator::sandwich(&op, &od);
        let left = Superoperator::sandwich(&odo, &id);
        let right = Superoperator::sandwich(&id, &odo);
        let d = &(&left.matrix().scale_real(0.5) + &right.matrix().scale_real(0.5));
        gen = &gen + &(jump.matrix() - d).scale_real(rate);
    }
    Ok(Superoperator::from_matrix(2, gen).expect("4x4"))
}

/// exp(L · t_SB): partial relaxation of the probe toward its Gibbs state.
pub fn thermalization_channel(bath: &BathSpec) -> Result<Superoperator, ChannelError> {
    let gen = lindbladian(bath)?;
    let m = matrix_exp(gen.matrix(), r(bath.therm_time));
    Ok(Superoperator::from_matrix(2, m).expect("4x4"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{vectorize_matrix, Superoperator};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let rho = thermal_state(1.0, f64::INFINITY).unwrap();
        assert!(rho.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn gibbs_populations_against_formula() {
        // independent: Boltzmann weights with explicit energies (+ω/2, −ω/2)
        for (omega, t) in [(1.0_f64, 2.0_f64), (1.0, 1.0), (0.7, 0.3)] {
            let w0 = (-(omega / 2.0) / t).exp();
            let w1 = ((omega / 2.0) / t as f64).exp();
            let [l0, l1] = thermal_populations(omega, t).unwrap();
            assert!((l0 - w0 / (w0 + w1)).abs() < 1e-15);
            assert!((l1 - w1 / (w0 + w1)).abs() < 1e-15);
        }
        let [_, ground] = thermal_populations(1.0, 2.0).unwrap();
        assert!((ground - 0.622_459_331_201_854_6).abs() < 1e-12);
        let [e, g] = thermal_populations(1.0, 1.0).unwrap();
        assert!((g - 0.731_058_578_630_004_9).abs() < 1e-12);
        assert!((e - 0.268_941_421_369_995_1).abs() < 1e-12);
    }

    #[test]
    fn nonpositive_temperature_rejected() {
        assert!(thermal_state(1.0, 0.0).is_err());
        assert!(thermal_state(1.0, -1.0).is_err());
        assert!(BathSpec::new(f64::NAN, 0.5).validate().is_err());
    }

    #[test]
    fn qubit_collision_matches_exponential() {
        for angle in [0.0, 0.3, FRAC_PI_4, FRAC_PI_2, 2.9] {
            let spec = CollisionSpec::from_angle(angle);
            let closed = collision_unitary_qubit(&spec);
            let numeric = matrix_exp(&exchange_hamiltonian_qubit(spec.g), c(0.0, -spec.tau));
            assert!(closed.max_abs_diff(&numeric) < 1e-14);
            assert!(closed.unitarity_defect() < 1e-14);
        }
        assert!(collision_unitary_qubit(&CollisionSpec::from_angle(0.0)).max_abs_diff(&ComplexMatrix::identity(4)) == 0.0);
    }

    #[test]
    fn phased_swap_at_half_pi() {
        let u = collision_unitary_qubit(&CollisionSpec::from_pi_units(0.5));
        // U|01> = -i|10>, U|10> = -i|01>
        assert!((u[(2, 1)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((u[(1, 2)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!(u[(1, 1)].norm() < 1e-15 && u[(2, 2)].norm() < 1e-15);
    }

    #[test]
    fn half_angle_block_entries() {
        let u = collision_unitary_qubit(&CollisionSpec::from_angle(FRAC_PI_4));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u[(1, 1)].re - s).abs() < 1e-15);
        assert!((u[(1, 2)].im + s).abs() < 1e-15);
    }

    #[test]
    fn qutrit_collision_conserves_excitations() {
        let h = exchange_hamiltonian_qutrit(1.3);
        let n_exc = &kron(&pauli::z().scale_real(0.5), &ComplexMatrix::identity(3))
            + &kron(&ComplexMatrix::identity(2), &spin1::z());
        assert!(h.commutator(&n_exc).max_abs() < 1e-15);
        let u = collision_unitary_qubit_qutrit(&CollisionSpec { g: 1.3, tau: 0.8 });
        assert!(u.commutator(&n_exc).max_abs() < 1e-12);
        assert!(u.unitarity_defect() < 1e-12);
        assert!(collision_unitary_qubit_qutrit(&CollisionSpec::from_angle(0.0))
            .max_abs_diff(&ComplexMatrix::identity(6))
            < 1e-15);
    }

    #[test]
    fn qutrit_collision_matches_taylor_series() {
        let spec = CollisionSpec { g: 0.9, tau: 1.1 };
        let m = exchange_hamiltonian_qutrit(spec.g).scale(c(0.0, -spec.tau));
        let mut term = ComplexMatrix::identity(6);
        let mut sum = ComplexMatrix::identity(6);
        for k in 1..60 {
            term = term.matmul(&m).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        assert!(collision_unitary_qubit_qutrit(&spec).max_abs_diff(&sum) < 1e-10);
        // excitation blocks rotate by gτ/√2: |0_S, m=0> <-> |1_S, m=+1>
        let u = collision_unitary_qubit_qutrit(&spec);
        let phi = spec.angle() * std::f64::consts::FRAC_1_SQRT_2;
        assert!((u[(1, 1)].re - phi.cos()).abs() < 1e-12);
        assert!((u[(3, 1)] - c(0.0, -phi.sin())).norm() < 1e-12);
    }

    #[test]
    fn identity_collision_gives_identity_channel() {
        let u = ComplexMatrix::identity(4);
        let env = thermal_state(1.0, 1.5).unwrap();
        let k = kraus_from_collision(&u, &env).unwrap();
        assert_eq!(k.operators.len(), 2);
        assert!(k.superoperator().matrix().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn non_diagonal_environment_rejected() {
        let env = DensityMatrix::pure(&[r(1.0), r(1.0)]).unwrap();
        let err = kraus_from_collision(&ComplexMatrix::identity(4), &env).unwrap_err();
        assert!(matches!(err, ChannelError::NonDiagonalEnvironment(_)));
    }

    #[test]
    fn kraus_channel_equals_partial_trace_evolution() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let angle = rng.gen_range(0.0..PI);
            let t = rng.gen_range(0.2..5.0);
            let env = thermal_state(1.0, t).unwrap();
            let u = collision_unitary_qubit(&CollisionSpec::from_angle(angle));
            let k = kraus_from_collision(&u, &env).unwrap();
            assert!(k.completeness_defect() < 1e-12);
            let psi = [c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
            let rho = DensityMatrix::pure(&psi).unwrap();
            let joint = env.tensor(&rho).apply_local_unitary(&[0, 1], &u).unwrap();
            let reduced = joint.partial_trace(&[1]).unwrap();
            assert!(k.apply(rho.matrix()).max_abs_diff(reduced.matrix()) < 1e-12);
        }
    }

    #[test]
    fn full_swap_transfers_thermal_populations() {
        // direct 4x4 oracle: U(ρ_th ⊗ |1><1|)U† then sum over probe index
        let t1 = 2.0;
        let env = thermal_state(1.0, t1).unwrap();
        let u = collision_unitary_qubit(&CollisionSpec::from_pi_units(0.5));
        let joint = kron(env.matrix(), &ComplexMatrix::basis_projector(2, 1)).conjugate_by(&u);
        let mut red = ComplexMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                red[(a, b)] = joint[(a, b)] + joint[(2 + a, 2 + b)];
            }
        }
        let [l0, l1] = thermal_populations(1.0, t1).unwrap();
        assert!(red.max_abs_diff(&ComplexMatrix::real_diagonal(&[l0, l1])) < 1e-15);
    }

    #[test]
    fn zero_angle_collision_is_identity_channel() {
        let s = collision_superoperator(&CollisionSpec::from_angle(0.0), &BathSpec::new(1.3, 0.0), 2).unwrap();
        assert!(s.matrix().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn rotation_superoperator_pi_half_flips() {
        let s = rotation_superoperator(&RotationSpec::new(FRAC_PI_2, Axis::X), 2).unwrap();
        let out = s.apply(&ComplexMatrix::basis_projector(2, 0));
        assert!(out.max_abs_diff(&ComplexMatrix::basis_projector(2, 1)) < 1e-15);
        let id = rotation_superoperator(&RotationSpec::new(0.0, Axis::Z), 3).unwrap();
        assert!(id.matrix().max_abs_diff(&ComplexMatrix::identity(9)) < 1e-15);
    }

    #[test]
    fn rotations_are_unitary() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            for dim in [2, 3] {
                let u = RotationSpec::new(0.77, axis).unitary(dim).unwrap();
                assert!(u.unitarity_defect() < 1e-12);
            }
        }
        assert!(RotationSpec::new(0.1, Axis::X).unitary(4).is_err());
    }

    #[test]
    fn thermalization_zero_time_is_identity() {
        let bath = BathSpec { temperature: 1.0, omega: 1.0, gamma: 1.0, therm_time: 0.0 };
        let s = thermalization_channel(&bath).unwrap();
        assert!(s.matrix().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn thermalization_long_time_reaches_gibbs() {
        for t in [0.5, 1.0, 2.0, 3.0] {
            let bath = BathSpec::new(t, 50.0);
            let s = thermalization_channel(&bath).unwrap();
            let th = thermal_state(1.0, t).unwrap();
            for rho in [
                ComplexMatrix::basis_projector(2, 0),
                ComplexMatrix::basis_projector(2, 1),
                DensityMatrix::pure(&[r(1.0), c(0.0, 1.0)]).unwrap().into_matrix(),
            ] {
                assert!(s.apply(&rho).max_abs_diff(th.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn thermalization_matches_closed_form_relaxation() {
        // generalized amplitude damping: gap decays at γ(2n̄+1), coherences at half that rate
        let bath = BathSpec { temperature: 1.4, omega: 1.0, gamma: 0.8, therm_time: 0.625 };
        let s = thermalization_channel(&bath).unwrap();
        let nbar = 1.0 / ((1.0_f64 / 1.4).exp() - 1.0);
        let rate = bath.gamma * (2.0 * nbar + 1.0);
        let t = bath.therm_time;
        let p_th = nbar / (2.0 * nbar + 1.0);
        let rho = ComplexMatrix::from_rows(&[vec![r(0.9), c(0.2, -0.1)], vec![c(0.2, 0.1), r(0.1)]]);
        let out = s.apply(&rho);
        let p0 = p_th + (0.9 - p_th) * (-rate * t).exp();
        let coh = c(0.2, -0.1) * (-rate * t / 2.0).exp();
        let expected = ComplexMatrix::from_rows(&[vec![r(p0), coh], vec![coh.conj(), r(1.0 - p0)]]);
        assert!(out.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn constructed_maps_are_cptp() {
        let bath = BathSpec::new(1.7, 0.5);
        let maps: Vec<Superoperator> = vec![
            collision_superoperator(&CollisionSpec::from_angle(1.1), &bath, 2).unwrap(),
            collision_superoperator(&CollisionSpec::from_angle(1.1), &bath, 3).unwrap(),
            rotation_superoperator(&RotationSpec::new(0.4, Axis::Y), 2).unwrap(),
            rotation_superoperator(&RotationSpec::new(0.4, Axis::X), 3).unwrap(),
            thermalization_channel(&bath).unwrap(),
        ];
        for s in &maps {
            assert!(s.trace_preservation_defect() < 1e-12);
            assert!(s.choi_min_eigenvalue().unwrap() > -1e-10);
        }
    }

    #[test]
    fn collision_superoperator_column_for_ground_input() {
        let spec = CollisionSpec::from_angle(0.9);
        let bath = BathSpec::new(1.2, 0.0);
        let s = collision_superoperator(&spec, &bath, 2).unwrap();
        let [l0, l1] = bath.populations().unwrap();
        let (sn, cs) = spec.angle().sin_cos();
        let col = s.matrix().column(0);
        let expected = vec![r(l0 + l1 * cs * cs), ZERO, ZERO, r(l1 * sn * sn)];
        for (a, b) in col.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-15);
        }
        let coh = s.apply(&ComplexMatrix::ket_bra(2, 0, 1));
        assert!(coh.max_abs_diff(&ComplexMatrix::ket_bra(2, 0, 1).scale_real(cs)) < 1e-15);
        assert_eq!(vectorize_matrix(&coh).len(), 4);
    }
}
