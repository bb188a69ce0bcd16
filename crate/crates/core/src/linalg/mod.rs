//! Dense complex linear algebra for small Hilbert spaces (dimension up to 2⁸).
//!
//! Operators are row-major [`ComplexMatrix`] values. States carry their tensor
//! factor dimensions so partial traces and local maps can address subsystems
//! by index. Vectorization is row-major, |i⟩⟨j| ↦ e_{D·i+j}, under which the
//! superoperator of ρ ↦ UρU† is U ⊗ U*.

mod density;
mod eig;
mod matrix;
mod superop;

pub use density::{
    devectorize, devectorize_matrix, vectorize, vectorize_matrix, DensityMatrix, VectorizedState, HERMITIAN_TOL,
    POSITIVITY_TOL, TRACE_TOL,
};
pub use eig::{herm_eig, herm_fn, matrix_exp, HermEig, HERMITIAN_INPUT_TOL};
pub use matrix::{c, kron, kron_all, r, ComplexMatrix, I, ONE, ZERO};
pub use superop::Superoperator;

/// Pauli and ladder operators in the computational basis (σ_z|0⟩ = |0⟩).
pub mod pauli {
    use super::{c, r, ComplexMatrix};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![r(0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), r(0.0)]])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::real_diagonal(&[1.0, -1.0])
    }

    /// σ₊ = |0⟩⟨1|, raising toward the σ_z = +1 state.
    pub fn raising() -> ComplexMatrix {
        ComplexMatrix::ket_bra(2, 0, 1)
    }

    /// σ₋ = |1⟩⟨0|
    pub fn lowering() -> ComplexMatrix {
        ComplexMatrix::ket_bra(2, 1, 0)
    }
}
