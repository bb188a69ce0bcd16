use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::LinalgError;

/// Input Hermiticity tolerance for [`herm_eig`].
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;

/// Spectral decomposition `h = V diag(values) V†`.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermEig {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::real_diagonal(&self.values);
        self.vectors.matmul(&d).matmul(&self.vectors.adjoint())
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending. Each eigenvector has its first component
/// with modulus above 1e-12 rotated onto the positive real axis, so the
/// output does not depend on the solver's arbitrary phases.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEig, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_INPUT_TOL {
        return Err(LinalgError::NotHermitian(defect));
    }
    let n = h.rows();
    // feed the exactly Hermitian part so the solver sees a symmetric problem
    let sym = h.hermitian_part().to_nalgebra();
    let eig = sym.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let phase = v
            .iter()
            .find(|z| z.norm() > 1e-12)
            .map(|z| z.conj() / z.norm())
            .unwrap_or(Complex64::new(1.0, 0.0));
        for i in 0..n {
            vectors[(i, col)] = v[i] * phase;
        }
    }
    Ok(HermEig { values, vectors })
}

/// `exp(scale · m)` by Padé scaling-and-squaring.
pub fn matrix_exp(m: &ComplexMatrix, scale: Complex64) -> ComplexMatrix {
    assert!(m.is_square(), "matrix_exp needs a square matrix");
    let scaled = m.scale(scale).to_nalgebra();
    ComplexMatrix::from_nalgebra(&scaled.exp())
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn herm_fn(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix, LinalgError> {
    let e = herm_eig(h)?;
    let mapped: Vec<f64> = e.values.iter().map(|&x| f(x)).collect();
    let d = ComplexMatrix::real_diagonal(&mapped);
    Ok(e.vectors.matmul(&d).matmul(&e.vectors.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{c, r};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        a.hermitian_part()
    }

    /// Truncated Taylor series, independent of the Padé path.
    fn exp_series(m: &ComplexMatrix) -> ComplexMatrix {
        let n = m.rows();
        let mut term = ComplexMatrix::identity(n);
        let mut sum = ComplexMatrix::identity(n);
        for k in 1..60 {
            term = term.matmul(m).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn sigma_z_spectrum() {
        let e = herm_eig(&ComplexMatrix::real_diagonal(&[1.0, -1.0])).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        assert!((e.vectors[(1, 0)] - r(1.0)).norm() < 1e-15);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let h = random_hermitian(4, &mut rng);
            let e = herm_eig(&h).unwrap();
            let hv = h.matmul(&e.vectors);
            let vl = e.vectors.matmul(&ComplexMatrix::real_diagonal(&e.values));
            assert!(hv.max_abs_diff(&vl) <= 1e-10);
            assert!(e.reconstruct().max_abs_diff(&h) <= 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            assert!(e.vectors.unitarity_defect() < 1e-12);
            for k in 0..4 {
                let first = e.vectors.column(k).into_iter().find(|z| z.norm() > 1e-12).unwrap();
                assert!(first.im.abs() < 1e-14 && first.re > 0.0);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![r(0.0), r(1.0)], vec![r(0.0), r(0.0)]]);
        assert!(matches!(herm_eig(&m), Err(LinalgError::NotHermitian(_))));
    }

    #[test]
    fn exp_zero_is_identity() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64));
        let e = matrix_exp(&m, c(0.0, 0.0));
        assert!(e.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn exp_rotation_closed_form() {
        let sx = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let u = matrix_exp(&sx, c(0.0, -std::f64::consts::FRAC_PI_4));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_rows(&[vec![r(s), c(0.0, -s)], vec![c(0.0, -s), r(s)]]);
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn exp_matches_series_on_random_2x2() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = ComplexMatrix::from_fn(2, 2, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let a = matrix_exp(&m, r(1.0));
            let b = exp_series(&m);
            assert!(a.max_abs_diff(&b) / b.max_abs() <= 1e-12);
        }
    }
}
