//! Runtime self-checks against closed forms, grouped for `colltherm verify`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{self, reference};
use crate::channels::{
    collision_superoperator, kraus_from_collision, collision_unitary_qubit, rotation_superoperator, thermal_state,
    thermalization_channel, Axis, BathSpec, CollisionSpec, RotationSpec,
};
use crate::estimation::{is_singular, qfim, singularity_test, ParamDerivatives};
use crate::linalg::{c, pauli, ComplexMatrix, DensityMatrix, Superoperator};
use crate::protocols::{ancilla_stream, ProtocolConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Appendix,
    Theorem1,
    FixedPoint,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::Appendix => "appendix",
            Group::Theorem1 => "theorem1",
            Group::FixedPoint => "fixedpoint",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Group>, String> {
        match s {
            "all" => Ok(vec![Group::Appendix, Group::Theorem1, Group::FixedPoint]),
            "appendix" => Ok(vec![Group::Appendix]),
            "theorem1" => Ok(vec![Group::Theorem1]),
            "fixedpoint" => Ok(vec![Group::FixedPoint]),
            other => Err(format!("unknown group `{other}` (expected appendix, theorem1, fixedpoint or all)")),
        }
    }
}

/// Outcome of one oracle: the worst residual seen and its tolerance.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub group: Group,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl OracleResult {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
}

pub fn run_group(group: Group, opts: &VerifyOptions) -> Vec<OracleResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    let mut push = |name: &str, residual: f64, tolerance: f64| {
        out.push(OracleResult { group, name: name.into(), residual, tolerance })
    };
    match group {
        Group::Appendix => appendix(&mut rng, &mut push),
        Group::Theorem1 => theorem1(&mut rng, opts.trials, &mut push),
        Group::FixedPoint => fixed_point(&mut rng, &mut push),
    }
    out
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN residuals must fail, so they propagate as +inf
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = a.matmul(&a.adjoint());
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

fn appendix(rng: &mut ChaCha8Rng, push: &mut impl FnMut(&str, f64, f64)) {
    let mut coll = Vec::new();
    let mut kraus = Vec::new();
    let mut rotated = Vec::new();
    let mut plain = Vec::new();
    let mut states = Vec::new();
    for _ in 0..20 {
        let g = rng.gen_range(0.0..PI);
        let (t1, t2) = (rng.gen_range(0.3..5.0), rng.gen_range(0.3..5.0));
        let (b1, b2) = (BathSpec::new(t1, 0.0), BathSpec::new(t2, 0.0));
        let ([p, p1], [q, _]) = match (b1.populations(), b2.populations()) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return push("collision channel", f64::INFINITY, 1e-12),
        };
        let e1 = collision_superoperator(&CollisionSpec::from_angle(g), &b1, 2);
        let e2 = collision_superoperator(&CollisionSpec::from_angle(g), &b2, 2);
        let rot = rotation_superoperator(&RotationSpec::new(PI / 4.0, Axis::X), 2);
        let (Ok(e1), Ok(e2), Ok(rot)) = (e1, e2, rot) else {
            return push("collision channel", f64::INFINITY, 1e-12);
        };
        coll.push(e1.matrix().max_abs_diff(&reference::collision(g, p, p1)));
        kraus.push(Superoperator::from_kraus(&reference::kraus(g, p, p1)).matrix().max_abs_diff(e1.matrix()));
        rotated.push(e2.after(&rot.after(&e1)).matrix().max_abs_diff(&reference::composed_with_rotation(g, p, q)));
        // the reference u, v carry the probe labels in the opposite order
        plain.push(e2.after(&e1).matrix().max_abs_diff(&reference::composed_no_rotation(g, q, p)));

        let g2 = rng.gen_range(0.0..PI);
        let cfg = ProtocolConfig::two_bath(t1, t2, 0.5, g / PI, g2 / PI);
        let (mu, chi) = analytic::rotated_entries(g, g2, p, q);
        let got = ancilla_stream(&cfg, &[t1, t2]).map(|mut s| s.remove(0));
        states.push(got.map_or(f64::INFINITY, |s| s.matrix().max_abs_diff(&analytic::rotated_state(mu, chi))));
    }
    push("collision channel vs closed form (20 random gτ, T)", worst(coll), 1e-12);
    push("Kraus list K_ij reproduces the collision channel", worst(kraus), 1e-12);
    let rot = rotation_superoperator(&RotationSpec::new(PI / 4.0, Axis::X), 2)
        .map_or(f64::INFINITY, |r| r.matrix().max_abs_diff(&reference::rotation_quarter_x()));
    push("rotation exp(-iπσx/4) vs closed form", rot, 1e-12);
    push("two collisions with rotation vs closed form", worst(rotated), 1e-12);
    push("two collisions without rotation vs block form (u, v)", worst(plain), 1e-12);
    push("single-run final state vs [[μ, -iχ], [iχ, 1-μ]]", worst(states), 1e-10);
}

fn random_bloch(rng: &mut ChaCha8Rng, max_norm: f64) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() < max_norm {
            return v;
        }
    }
}

fn bloch_op(v: [f64; 3]) -> ComplexMatrix {
    &(&pauli::x().scale_real(v[0]) + &pauli::y().scale_real(v[1])) + &pauli::z().scale_real(v[2])
}

/// Random full-rank qubit states with derivative pairs that are proportional
/// in half of the trials; the proportionality test must agree with det(F_Q).
fn theorem1(rng: &mut ChaCha8Rng, trials: usize, push: &mut impl FnMut(&str, f64, f64)) {
    let mut disagreements = 0usize;
    for k in 0..trials {
        let r0 = random_bloch(rng, 0.9);
        let rho = (&ComplexMatrix::identity(2) + &bloch_op(r0)).scale_real(0.5);
        let d2 = random_bloch(rng, 1.0);
        let d1 = if k % 2 == 0 {
            let s = rng.gen_range(-3.0..3.0);
            [s * d2[0], s * d2[1], s * d2[2]]
        } else {
            random_bloch(rng, 1.0)
        };
        let agree = DensityMatrix::single(rho)
            .map_err(|e| e.to_string())
            .and_then(|st| {
                ParamDerivatives::new(st, vec![bloch_op(d1).scale_real(0.5), bloch_op(d2).scale_real(0.5)])
                    .map_err(|e| e.to_string())
            })
            .and_then(|pd| {
                let verdict = singularity_test(&pd).map_err(|e| e.to_string())?;
                let f = qfim(&pd).map_err(|e| e.to_string())?;
                Ok(verdict.singular == is_singular(&f.matrix))
            })
            .unwrap_or(false);
        if !agree {
            disagreements += 1;
        }
    }
    push(&format!("proportionality test agrees with det(F_Q) ({trials} families)"), disagreements as f64, 0.0);
}

fn fixed_point(rng: &mut ChaCha8Rng, push: &mut impl FnMut(&str, f64, f64)) {
    let mut fixed = Vec::new();
    let mut tp = Vec::new();
    let mut cp = Vec::new();
    let mut completeness = Vec::new();
    for _ in 0..20 {
        let t = rng.gen_range(0.3..5.0);
        let gibbs = match thermal_state(1.0, t) {
            Ok(s) => s,
            Err(_) => return push("thermalization fixed point", f64::INFINITY, 1e-10),
        };
        let (Ok(long), Ok(short)) =
            (thermalization_channel(&BathSpec::new(t, 50.0)), thermalization_channel(&BathSpec::new(t, 0.5)))
        else {
            return push("thermalization fixed point", f64::INFINITY, 1e-10);
        };
        let input = random_state(rng, 2);
        fixed.push(long.apply(&input).max_abs_diff(gibbs.matrix()));
        fixed.push(short.apply(gibbs.matrix()).max_abs_diff(gibbs.matrix()));

        let g = rng.gen_range(0.0..PI);
        let coll = collision_superoperator(&CollisionSpec::from_angle(g), &BathSpec::new(t, 0.0), 2);
        let Ok(coll) = coll else {
            return push("collision channel trace preservation", f64::INFINITY, 1e-12);
        };
        for s in [&short, &coll] {
            tp.push(s.trace_preservation_defect());
            cp.push(s.choi_min_eigenvalue().map_or(f64::INFINITY, |m| (-m).max(0.0)));
        }
        let kraus = kraus_from_collision(&collision_unitary_qubit(&CollisionSpec::from_angle(g)), &gibbs);
        completeness.push(kraus.map_or(f64::INFINITY, |k| k.completeness_defect()));
    }
    push("thermalization channel fixed point = Gibbs state", worst(fixed), 1e-10);
    push("trace preservation (thermalization, collision)", worst(tp), 1e-12);
    push("complete positivity: Choi eigenvalues ≥ -1e-10", worst(cp), 1e-10);
    push("Kraus completeness Σ K†K = I", worst(completeness), 1e-10);
}
