use num_complex::Complex64;

use super::eig::herm_eig;
use super::matrix::{kron, ComplexMatrix, ZERO};
use super::superop::Superoperator;
use crate::error::LinalgError;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = -1e-10;

/// A state on a tensor product of subsystems with dimensions `factor_dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    factor_dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(matrix: ComplexMatrix, factor_dims: Vec<usize>) -> Result<Self, LinalgError> {
        let state = Self::from_parts(matrix, factor_dims)?;
        state.validate()?;
        Ok(state)
    }

    /// Checks shapes only. Used for intermediate results of trace-preserving maps,
    /// which carry rounding noise but no physics violations.
    pub fn from_parts(matrix: ComplexMatrix, factor_dims: Vec<usize>) -> Result<Self, LinalgError> {
        if !matrix.is_square() {
            return Err(LinalgError::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let product: usize = factor_dims.iter().product();
        if product != matrix.rows() || factor_dims.is_empty() {
            return Err(LinalgError::FactorDims { dims: factor_dims, dim: matrix.rows() });
        }
        Ok(Self { matrix, factor_dims })
    }

    /// Single-factor state.
    pub fn single(matrix: ComplexMatrix) -> Result<Self, LinalgError> {
        let d = matrix.rows();
        Self::new(matrix, vec![d])
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        Self { matrix: ComplexMatrix::basis_projector(dim, index), factor_dims: vec![dim] }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64), factor_dims: vec![dim] }
    }

    pub fn pure(psi: &[Complex64]) -> Result<Self, LinalgError> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v), vec![psi.len()])
    }

    /// Tensor product of states, factors concatenated in order.
    pub fn product(states: &[&DensityMatrix]) -> Self {
        let mut matrix = ComplexMatrix::identity(1);
        let mut dims = Vec::new();
        for s in states {
            matrix = kron(&matrix, &s.matrix);
            dims.extend_from_slice(&s.factor_dims);
        }
        Self { matrix, factor_dims: dims }
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Self {
        Self::product(&[self, other])
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn min_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(herm_eig(&self.matrix)?.values[0])
    }

    pub fn validate(&self) -> Result<(), LinalgError> {
        let herm = self.matrix.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(LinalgError::InvalidState(format!("Hermiticity defect {herm:.3e}")));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(LinalgError::InvalidState(format!("trace {tr}")));
        }
        let min = self.min_eigenvalue()?;
        if min < POSITIVITY_TOL {
            return Err(LinalgError::InvalidState(format!("minimum eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Reduced state on the factors in `keep` (kept in their original order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, LinalgError> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(LinalgError::EmptyKeep);
        }
        let layout = SiteLayout::new(&self.factor_dims, &keep)?;
        let (sub, rest) = (layout.sub_dim, layout.rest_dim);
        let mut out = ComplexMatrix::zeros(sub, sub);
        for a in 0..sub {
            for ap in 0..sub {
                let mut acc = ZERO;
                for b in 0..rest {
                    acc += self.matrix[(layout.full(a, b), layout.full(ap, b))];
                }
                out[(a, ap)] = acc;
            }
        }
        let dims = keep.iter().map(|&k| self.factor_dims[k]).collect();
        Ok(DensityMatrix { matrix: out, factor_dims: dims })
    }

    /// `Σ_k K_k ρ K_k†` with every `K_k` acting on the factors `sites` (in that order).
    pub fn apply_local_kraus(&self, sites: &[usize], kraus: &[ComplexMatrix]) -> Result<DensityMatrix, LinalgError> {
        let layout = SiteLayout::new(&self.factor_dims, sites)?;
        let d = self.dim();
        let mut out = ComplexMatrix::zeros(d, d);
        for k in kraus {
            if k.rows() != layout.sub_dim || k.cols() != layout.sub_dim {
                return Err(LinalgError::OperatorDim { op: k.rows(), sub: layout.sub_dim });
            }
            let left = layout.left_multiply(k, &self.matrix);
            let both = layout.right_multiply_adjoint(k, &left);
            out = &out + &both;
        }
        Ok(DensityMatrix { matrix: out, factor_dims: self.factor_dims.clone() })
    }

    /// `U ρ U†` with `U` acting on `sites`.
    pub fn apply_local_unitary(&self, sites: &[usize], u: &ComplexMatrix) -> Result<DensityMatrix, LinalgError> {
        self.apply_local_kraus(sites, std::slice::from_ref(u))
    }

    /// (S ⊗ id)(ρ) for a superoperator `S` acting on `sites`.
    pub fn apply_local_superoperator(&self, sites: &[usize], s: &Superoperator) -> Result<DensityMatrix, LinalgError> {
        let layout = SiteLayout::new(&self.factor_dims, sites)?;
        let sub = layout.sub_dim;
        if s.dim() != sub {
            return Err(LinalgError::OperatorDim { op: s.dim(), sub });
        }
        let d = self.dim();
        let mut out = ComplexMatrix::zeros(d, d);
        let mut block = vec![ZERO; sub * sub];
        for b in 0..layout.rest_dim {
            for bp in 0..layout.rest_dim {
                for c in 0..sub {
                    for cp in 0..sub {
                        block[c * sub + cp] = self.matrix[(layout.full(c, b), layout.full(cp, bp))];
                    }
                }
                let mapped = s.matrix().matvec(&block);
                for a in 0..sub {
                    for ap in 0..sub {
                        out[(layout.full(a, b), layout.full(ap, bp))] = mapped[a * sub + ap];
                    }
                }
            }
        }
        Ok(DensityMatrix { matrix: out, factor_dims: self.factor_dims.clone() })
    }
}

/// Index bookkeeping for an operator acting on a subset of tensor factors.
///
/// A full basis index is split into `a` (multi-index over `sites`, in the given
/// order) and `b` (multi-index over the remaining factors in ascending order).
struct SiteLayout {
    sub_dim: usize,
    rest_dim: usize,
    table: Vec<usize>,
}

impl SiteLayout {
    fn new(dims: &[usize], sites: &[usize]) -> Result<Self, LinalgError> {
        let n = dims.len();
        for (pos, &s) in sites.iter().enumerate() {
            if s >= n {
                return Err(LinalgError::FactorIndex { index: s, factors: n });
            }
            if sites[..pos].contains(&s) {
                return Err(LinalgError::FactorIndex { index: s, factors: n });
            }
        }
        let rest: Vec<usize> = (0..n).filter(|k| !sites.contains(k)).collect();
        let sub_dim: usize = sites.iter().map(|&s| dims[s]).product();
        let rest_dim: usize = rest.iter().map(|&s| dims[s]).product();
        let total = sub_dim * rest_dim;

        let mut strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let mut table = vec![0usize; total];
        let mut digits = vec![0usize; n];
        for full in 0..total {
            let mut rem = full;
            for k in 0..n {
                digits[k] = rem / strides[k];
                rem %= strides[k];
            }
            let a = sites.iter().fold(0, |acc, &s| acc * dims[s] + digits[s]);
            let b = rest.iter().fold(0, |acc, &s| acc * dims[s] + digits[s]);
            table[a * rest_dim + b] = full;
        }
        Ok(Self { sub_dim, rest_dim, table })
    }

    #[inline]
    fn full(&self, a: usize, b: usize) -> usize {
        self.table[a * self.rest_dim + b]
    }

    /// (K ⊗ I) · m
    fn left_multiply(&self, k: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
        let d = m.rows();
        let mut out = ComplexMatrix::zeros(d, d);
        for b in 0..self.rest_dim {
            for a in 0..self.sub_dim {
                let row_out = self.full(a, b);
                for ap in 0..self.sub_dim {
                    let coeff = k[(a, ap)];
                    if coeff == ZERO {
                        continue;
                    }
                    let row_in = self.full(ap, b);
                    let src = &m.as_slice()[row_in * d..(row_in + 1) * d];
                    let dst = &mut out.as_mut_slice()[row_out * d..(row_out + 1) * d];
                    for (o, &x) in dst.iter_mut().zip(src) {
                        *o += coeff * x;
                    }
                }
            }
        }
        out
    }

    /// m · (K ⊗ I)†
    fn right_multiply_adjoint(&self, k: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
        let d = m.rows();
        let mut out = ComplexMatrix::zeros(d, d);
        for row in 0..d {
            let src = &m.as_slice()[row * d..(row + 1) * d];
            let dst = &mut out.as_mut_slice()[row * d..(row + 1) * d];
            for b in 0..self.rest_dim {
                for a in 0..self.sub_dim {
                    let col_out = self.full(a, b);
                    let mut acc = ZERO;
                    for ap in 0..self.sub_dim {
                        let coeff = k[(a, ap)];
                        if coeff != ZERO {
                            acc += src[self.full(ap, b)] * coeff.conj();
                        }
                    }
                    dst[col_out] = acc;
                }
            }
        }
        out
    }
}

/// Row-major vectorization |i⟩⟨j| ↦ e_{D·i + j}.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorizedState {
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

pub fn vectorize(rho: &DensityMatrix) -> VectorizedState {
    VectorizedState { dim: rho.dim(), entries: rho.matrix().as_slice().to_vec() }
}

pub fn vectorize_matrix(m: &ComplexMatrix) -> Vec<Complex64> {
    m.as_slice().to_vec()
}

pub fn devectorize(v: &VectorizedState, factor_dims: &[usize]) -> Result<DensityMatrix, LinalgError> {
    if v.entries.len() != v.dim * v.dim {
        return Err(LinalgError::ShapeMismatch { expected: v.dim * v.dim, found: v.entries.len() });
    }
    let m = ComplexMatrix::from_vec(v.dim, v.dim, v.entries.clone())?;
    DensityMatrix::new(m, factor_dims.to_vec())
}

pub fn devectorize_matrix(entries: &[Complex64], dim: usize) -> Result<ComplexMatrix, LinalgError> {
    ComplexMatrix::from_vec(dim, dim, entries.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{c, r};

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [r(s), r(0.0), r(0.0), r(s)];
        let m = ComplexMatrix::outer(&psi, &psi);
        DensityMatrix::new(m, vec![2, 2]).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let red = bell().partial_trace(&[1]).unwrap();
        assert!(red.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
        let red0 = bell().partial_trace(&[0]).unwrap();
        assert!(red0.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn product_state_factorizes() {
        let a = DensityMatrix::single(ComplexMatrix::real_diagonal(&[0.3, 0.7])).unwrap();
        let b = DensityMatrix::pure(&[r(1.0), c(0.0, 1.0), r(0.5)]).unwrap();
        let ab = a.tensor(&b);
        assert_eq!(ab.factor_dims(), &[2, 3]);
        assert!(ab.partial_trace(&[1]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
        assert!(ab.partial_trace(&[0]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        assert_eq!(bell().partial_trace(&[]), Err(LinalgError::EmptyKeep));
        assert!(matches!(bell().partial_trace(&[2]), Err(LinalgError::FactorIndex { .. })));
    }

    #[test]
    fn vectorization_convention() {
        let v0 = vectorize(&DensityMatrix::basis_state(2, 0));
        assert_eq!(v0.entries, vec![r(1.0), r(0.0), r(0.0), r(0.0)]);
        let v1 = vectorize(&DensityMatrix::basis_state(2, 1));
        assert_eq!(v1.entries, vec![r(0.0), r(0.0), r(0.0), r(1.0)]);
        let sx_half = ComplexMatrix::from_real_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]);
        assert_eq!(vectorize_matrix(&sx_half), vec![r(0.0), r(0.5), r(0.5), r(0.0)]);
    }

    #[test]
    fn devectorize_dimension_mismatch() {
        let v = VectorizedState { dim: 2, entries: vec![r(1.0); 3] };
        assert!(devectorize(&v, &[2]).is_err());
        let v = VectorizedState { dim: 2, entries: vec![r(0.5), r(0.0), r(0.0), r(0.5)] };
        assert!(devectorize(&v, &[3]).is_err());
    }

    #[test]
    fn local_unitary_matches_full_embedding() {
        // X on the middle factor of a 2x3x2 product
        let a = DensityMatrix::single(ComplexMatrix::real_diagonal(&[0.2, 0.8])).unwrap();
        let b = DensityMatrix::pure(&[r(1.0), c(0.3, 0.2), r(-0.5)]).unwrap();
        let cst = DensityMatrix::pure(&[r(0.6), c(0.0, 0.8)]).unwrap();
        let abc = DensityMatrix::product(&[&a, &b, &cst]);
        let u = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]);
        let full = kron(&kron(&ComplexMatrix::identity(2), &u), &ComplexMatrix::identity(2));
        let expected = abc.matrix().conjugate_by(&full);
        let got = abc.apply_local_unitary(&[1], &u).unwrap();
        assert!(got.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn two_site_operator_respects_site_order() {
        // swap-like operator on sites (2, 0) of a 2x2x2 register
        let a = DensityMatrix::basis_state(2, 0);
        let b = DensityMatrix::basis_state(2, 1);
        let cc = DensityMatrix::basis_state(2, 1);
        let abc = DensityMatrix::product(&[&a, &b, &cc]);
        // CNOT with control = first listed site (2), target = second (0)
        let cnot = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ]);
        let out = abc.apply_local_unitary(&[2, 0], &cnot).unwrap();
        // site 2 is |1> so site 0 flips: |011> -> |111>, index 7
        assert!((out.matrix()[(7, 7)] - r(1.0)).norm() < 1e-15);
    }

    #[test]
    fn local_superoperator_matches_local_kraus() {
        let p = 0.3_f64;
        let k0 = ComplexMatrix::real_diagonal(&[1.0, (1.0 - p).sqrt()]);
        let k1 = ComplexMatrix::from_real_rows(&[vec![0.0, p.sqrt()], vec![0.0, 0.0]]);
        let kraus = [k0, k1];
        let s = Superoperator::from_kraus(&kraus);
        let psi = [r(0.5), c(0.1, 0.3), r(-0.2), c(0.0, 0.4), r(0.3), r(0.1), c(0.2, -0.1), r(0.6)];
        let rho = DensityMatrix::from_parts(DensityMatrix::pure(&psi).unwrap().into_matrix(), vec![2, 2, 2]).unwrap();
        for site in 0..3 {
            let a = rho.apply_local_kraus(&[site], &kraus).unwrap();
            let b = rho.apply_local_superoperator(&[site], &s).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
        }
    }
}
