//! Closed forms for one qubit ancilla colliding with two thermal qubit probes.
//!
//! Used as oracles for the numerical pipeline. `p = λ₀(T₁)` and `q = λ₀(T₂)`
//! are the excited-state populations of the two probes; the ancilla starts
//! in |1⟩⟨1|.

use num_complex::Complex64;

use crate::linalg::{c, r, ComplexMatrix};

/// dλ₀/dT = (ω/T²)·λ₀·λ₁ for the excited population λ₀ = 1/(1 + e^{ω/T}).
pub fn excited_population_derivative(omega: f64, temperature: f64) -> f64 {
    let l0 = 1.0 / (1.0 + (omega / temperature).exp());
    omega / (temperature * temperature) * l0 * (1.0 - l0)
}

/// Excited population of the ancilla after collisions at angles `g1`, `g2`
/// with no rotation: v = q sin²g₂ + p sin²g₁ cos²g₂.
pub fn no_rotation_population(g1: f64, g2: f64, p: f64, q: f64) -> f64 {
    q * g2.sin().powi(2) + p * g1.sin().powi(2) * g2.cos().powi(2)
}

/// (∂v/∂p, ∂v/∂q) for [`no_rotation_population`].
pub fn no_rotation_population_gradient(g1: f64, g2: f64) -> (f64, f64) {
    (g1.sin().powi(2) * g2.cos().powi(2), g2.sin().powi(2))
}

/// (μ, χ) of the final state [[μ, −iχ], [iχ, 1−μ]] with an exp(−iπσ_x/4)
/// rotation between the collisions: μ = ½(cos²g₂ + 2q sin²g₂),
/// χ = ½(1 − 2p sin²g₁) cos g₂.
pub fn rotated_entries(g1: f64, g2: f64, p: f64, q: f64) -> (f64, f64) {
    let mu = 0.5 * (g2.cos().powi(2) + 2.0 * q * g2.sin().powi(2));
    let chi = 0.5 * (1.0 - 2.0 * p * g1.sin().powi(2)) * g2.cos();
    (mu, chi)
}

/// (∂μ/∂q, ∂χ/∂p) for [`rotated_entries`].
pub fn rotated_entries_gradient(g1: f64, g2: f64) -> (f64, f64) {
    (g2.sin().powi(2), -g1.sin().powi(2) * g2.cos())
}

pub fn rotated_state(mu: f64, chi: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![r(mu), c(0.0, -chi)], vec![c(0.0, chi), r(1.0 - mu)]])
}

/// Rank-one QFIM (1/(v(1−v)))·∇v∇vᵀ of the diagonal family diag(v, 1−v).
pub fn rank_one_qfim(v: f64, dv1: f64, dv2: f64) -> [[f64; 2]; 2] {
    let s = 1.0 / (v * (1.0 - v));
    [[s * dv1 * dv1, s * dv1 * dv2], [s * dv2 * dv1, s * dv2 * dv2]]
}

/// Spectral data and SLDs of [[μ, −iχ], [iχ, 1−μ]] with ∂₁ρ = χ̇σ_y, ∂₂ρ = μ̇σ_z.
#[derive(Debug, Clone)]
pub struct RotatedSlds {
    /// α₀ ≥ α₁
    pub alpha: [f64; 2],
    /// β_k = (α_k − μ)/χ
    pub beta: [f64; 2],
    /// |α_k⟩ = (1, iβ_k)/√(1+β_k²)
    pub vectors: [[Complex64; 2]; 2],
    pub l1: ComplexMatrix,
    pub l2: ComplexMatrix,
}

/// SLDs written in the eigenbasis |α_k⟩ = (1, iβ_k)/√(1 + β_k²):
///
/// L₁ = χ̇{Σ_k 2β_k/(α_k(1+β_k²))|α_k⟩⟨α_k| + 2(β₀+β₁)/√((1+β₀²)(1+β₁²))(|α₀⟩⟨α₁| + h.c.)}
/// L₂ = μ̇{Σ_k (1−β_k²)/(α_k(1+β_k²))|α_k⟩⟨α_k| + 2(1−β₀β₁)/√((1+β₀²)(1+β₁²))(|α₀⟩⟨α₁| + h.c.)}
///
/// Requires χ ≠ 0 (otherwise the eigenvectors are not of this form).
pub fn rotated_slds(mu: f64, chi: f64, dmu: f64, dchi: f64) -> RotatedSlds {
    let det = mu * (1.0 - mu) - chi * chi;
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    let alpha = [0.5 * (1.0 + disc), 0.5 * (1.0 - disc)];
    let beta = [(alpha[0] - mu) / chi, (alpha[1] - mu) / chi];
    let ket = |b: f64| {
        let n = 1.0 / (1.0 + b * b).sqrt();
        [r(n), c(0.0, b * n)]
    };
    let vectors = [ket(beta[0]), ket(beta[1])];
    let proj = |j: usize, k: usize| ComplexMatrix::outer(&vectors[j], &vectors[k]);
    let cross = &proj(0, 1) + &proj(1, 0);
    let norm = ((1.0 + beta[0] * beta[0]) * (1.0 + beta[1] * beta[1])).sqrt();

    let mut l1 = cross.scale_real(2.0 * (beta[0] + beta[1]) / norm);
    let mut l2 = cross.scale_real(2.0 * (1.0 - beta[0] * beta[1]) / norm);
    for k in 0..2 {
        let nk = 1.0 + beta[k] * beta[k];
        l1 = &l1 + &proj(k, k).scale_real(2.0 * beta[k] / (alpha[k] * nk));
        l2 = &l2 + &proj(k, k).scale_real((1.0 - beta[k] * beta[k]) / (alpha[k] * nk));
    }
    RotatedSlds { alpha, beta, vectors, l1: l1.scale_real(dchi), l2: l2.scale_real(dmu) }
}

/// Reference closed-form matrices for the two-collision protocol with equal
/// angles g = gτ. `u` and `v` label the probes in the opposite order from
/// [`no_rotation_population`]: `v(g, p, q)` equals it with p and q exchanged.
pub mod reference {
    use super::*;

    pub fn zeta(g: f64) -> f64 {
        g.cos().powi(2)
    }

    pub fn mu(g: f64, q: f64) -> f64 {
        0.25 * ((1.0 + 2.0 * q) + (1.0 - 2.0 * q) * (2.0 * g).cos())
    }

    pub fn chi(g: f64, p: f64) -> f64 {
        0.5 * ((1.0 - p) + p * (2.0 * g).cos()) * g.cos()
    }

    pub fn u(g: f64, p: f64, q: f64) -> f64 {
        g.sin().powi(2) * (1.0 - p + (1.0 - q) * g.cos().powi(2))
    }

    pub fn v(g: f64, p: f64, q: f64) -> f64 {
        g.sin().powi(2) * (p + q * g.cos().powi(2))
    }

    /// Vectorized single-collision channel for a probe with populations (λ₀, λ₁).
    pub fn collision(g: f64, l0: f64, l1: f64) -> ComplexMatrix {
        let (s2, c2, co) = (g.sin().powi(2), g.cos().powi(2), g.cos());
        ComplexMatrix::from_real_rows(&[
            vec![l0 + l1 * c2, 0.0, 0.0, l0 * s2],
            vec![0.0, co, 0.0, 0.0],
            vec![0.0, 0.0, co, 0.0],
            vec![l1 * s2, 0.0, 0.0, l1 + l0 * c2],
        ])
    }

    /// Vectorized exp(−iπσ_x/4) conjugation.
    pub fn rotation_quarter_x() -> ComplexMatrix {
        let (o, i, m) = (r(0.5), c(0.0, 0.5), c(0.0, -0.5));
        ComplexMatrix::from_rows(&[vec![o, i, m, o], vec![i, o, o, m], vec![m, o, o, i], vec![o, m, i, o]])
    }

    pub fn composed_no_rotation(g: f64, p: f64, q: f64) -> ComplexMatrix {
        let (uu, vv, c2) = (u(g, p, q), v(g, p, q), g.cos().powi(2));
        ComplexMatrix::from_real_rows(&[
            vec![1.0 - uu, 0.0, 0.0, vv],
            vec![0.0, c2, 0.0, 0.0],
            vec![0.0, 0.0, c2, 0.0],
            vec![uu, 0.0, 0.0, 1.0 - vv],
        ])
    }

    pub fn composed_with_rotation(g: f64, p: f64, q: f64) -> ComplexMatrix {
        let (m, z, co) = (mu(g, q), zeta(g), g.cos());
        let (xp, xq) = (chi(g, p), chi(g, 1.0 - p));
        let zc = 0.5 * z * co;
        ComplexMatrix::from_rows(&[
            vec![r(m), c(0.0, zc), c(0.0, -zc), r(m)],
            vec![c(0.0, xq), r(0.5 * z), r(0.5 * z), c(0.0, -xp)],
            vec![c(0.0, -xq), r(0.5 * z), r(0.5 * z), c(0.0, xp)],
            vec![r(1.0 - m), c(0.0, -zc), c(0.0, zc), r(1.0 - m)],
        ])
    }

    /// Kraus operators K_ij = √λ_j⟨i|U|j⟩, in the order K₀₀, K₀₁, K₁₀, K₁₁.
    pub fn kraus(g: f64, l0: f64, l1: f64) -> [ComplexMatrix; 4] {
        let (s, co) = (g.sin(), g.cos());
        let k00 = ComplexMatrix::real_diagonal(&[l0.sqrt(), l0.sqrt() * co]);
        let mut k01 = ComplexMatrix::zeros(2, 2);
        k01[(1, 0)] = c(0.0, -s * l1.sqrt());
        let mut k10 = ComplexMatrix::zeros(2, 2);
        k10[(0, 1)] = c(0.0, s * l0.sqrt());
        let k11 = ComplexMatrix::real_diagonal(&[l1.sqrt() * co, l1.sqrt()]);
        [k00, k01, k10, k11]
    }
}
