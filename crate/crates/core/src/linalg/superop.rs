use num_complex::Complex64;

use super::eig::herm_eig;
use super::matrix::{kron, ComplexMatrix};
use crate::error::LinalgError;

/// Linear map on D×D operators, stored as a D²×D² matrix acting on
/// row-major vectorized operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self, LinalgError> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(LinalgError::ShapeMismatch { expected: dim.pow(4), found: matrix.rows() * matrix.cols() });
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, matrix: ComplexMatrix::identity(dim * dim) }
    }

    /// ρ ↦ UρU†, i.e. U ⊗ U* in the row-major convention.
    pub fn from_unitary(u: &ComplexMatrix) -> Self {
        Self { dim: u.rows(), matrix: kron(u, &u.conj()) }
    }

    /// ρ ↦ Σ K ρ K†.
    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Self {
        let dim = kraus[0].rows();
        let mut m = ComplexMatrix::zeros(dim * dim, dim * dim);
        for k in kraus {
            m = &m + &kron(k, &k.conj());
        }
        Self { dim, matrix: m }
    }

    /// Vectorized generator of ρ ↦ AρB, i.e. A ⊗ Bᵀ.
    pub fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        Self { dim: a.rows(), matrix: kron(a, &b.transpose()) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, op: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(op.rows(), self.dim, "superoperator dimension mismatch");
        let v = self.matrix.matvec(op.as_slice());
        ComplexMatrix::from_vec(self.dim, self.dim, v).expect("square by construction")
    }

    /// `self` after `first`: the map ρ ↦ self(first(ρ)).
    pub fn after(&self, first: &Superoperator) -> Superoperator {
        Superoperator { dim: self.dim, matrix: self.matrix.matmul(&first.matrix) }
    }

    /// Choi matrix Σ_ij |i⟩⟨j| ⊗ S(|i⟩⟨j|).
    pub fn choi(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let img = self.apply(&ComplexMatrix::ket_bra(d, i, j));
                for a in 0..d {
                    for b in 0..d {
                        out[(i * d + a, j * d + b)] = img[(a, b)];
                    }
                }
            }
        }
        out
    }

    /// Smallest eigenvalue of the Choi matrix (≥ 0 for a CP map).
    pub fn choi_min_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(herm_eig(&self.choi())?.values[0])
    }

    /// max_{ij} |Tr S(|i⟩⟨j|) − δ_ij|; zero for a trace-preserving map.
    pub fn trace_preservation_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let tr = self.apply(&ComplexMatrix::ket_bra(d, i, j)).trace();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((tr - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Kraus operators from the Choi spectrum; eigenvalues below `cutoff` are dropped.
    pub fn to_kraus(&self, cutoff: f64) -> Result<Vec<ComplexMatrix>, LinalgError> {
        let d = self.dim;
        let eig = herm_eig(&self.choi())?;
        let mut out = Vec::new();
        for (k, &w) in eig.values.iter().enumerate() {
            if w <= cutoff {
                continue;
            }
            let s = w.sqrt();
            let v = eig.vector(k);
            out.push(ComplexMatrix::from_fn(d, d, |a, i| v[i * d + a] * s));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{c, r};
    use crate::linalg::eig::matrix_exp;

    fn hadamard_like() -> ComplexMatrix {
        let sy = ComplexMatrix::from_rows(&[vec![r(0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), r(0.0)]]);
        matrix_exp(&sy, c(0.0, -0.37))
    }

    #[test]
    fn unitary_superoperator_matches_conjugation() {
        let u = hadamard_like();
        let rho = ComplexMatrix::from_rows(&[vec![r(0.3), c(0.1, 0.2)], vec![c(0.1, -0.2), r(0.7)]]);
        let s = Superoperator::from_unitary(&u);
        assert!(s.apply(&rho).max_abs_diff(&rho.conjugate_by(&u)) < 1e-15);
    }

    #[test]
    fn kraus_round_trip_through_choi() {
        let p = 0.3_f64;
        let k0 = ComplexMatrix::real_diagonal(&[1.0, (1.0 - p).sqrt()]);
        let k1 = ComplexMatrix::from_real_rows(&[vec![0.0, p.sqrt()], vec![0.0, 0.0]]);
        let s = Superoperator::from_kraus(&[k0, k1]);
        let rebuilt = Superoperator::from_kraus(&s.to_kraus(1e-14).unwrap());
        assert!(rebuilt.matrix().max_abs_diff(s.matrix()) < 1e-14);
        assert!(s.trace_preservation_defect() < 1e-15);
        assert!(s.choi_min_eigenvalue().unwrap() > -1e-12);
    }

    #[test]
    fn transpose_map_is_not_cp() {
        let mut m = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                m[(j * 2 + i, i * 2 + j)] = r(1.0);
            }
        }
        let t = Superoperator::from_matrix(2, m).unwrap();
        assert!(t.choi_min_eigenvalue().unwrap() < -0.5);
    }
}
