//! Symmetric logarithmic derivatives, quantum and classical Fisher
//! information, the thermal benchmark and the two figures of merit.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channels::{thermal_populations, BathSpec};
use crate::error::EstimationError;
use crate::linalg::{herm_eig, ComplexMatrix, DensityMatrix, HermEig, ZERO};

/// Real N×N matrix (Fisher information matrices).
pub type RealMatrix = DMatrix<f64>;

/// Pairs (j, k) of eigenvalues with α_j + α_k below this are outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Largest tolerated derivative weight between kernel directions.
pub const KERNEL_LEAK_TOL: f64 = 1e-8;
/// det(F_Q) at or below this gives the η_acc = −∞ sentinel.
pub const ETA_ACC_DET_FLOOR: f64 = 1e-14;
pub const SINGULAR_DET_TOL: f64 = 1e-12;
pub const DERIVATIVE_TOL: f64 = 1e-9;

/// A state together with its derivatives with respect to each parameter.
#[derive(Debug, Clone)]
pub struct ParamDerivatives {
    pub base_state: DensityMatrix,
    pub derivs: Vec<ComplexMatrix>,
}

impl ParamDerivatives {
    pub fn new(base_state: DensityMatrix, derivs: Vec<ComplexMatrix>) -> Result<Self, EstimationError> {
        for (mu, d) in derivs.iter().enumerate() {
            if d.rows() != base_state.dim() || !d.is_square() {
                return Err(crate::error::LinalgError::OperatorDim { op: d.rows(), sub: base_state.dim() }.into());
            }
            let herm = d.hermiticity_defect();
            let tr = d.trace().norm();
            if herm > DERIVATIVE_TOL || tr > DERIVATIVE_TOL {
                return Err(crate::error::LinalgError::InvalidState(format!(
                    "derivative {mu} not Hermitian/traceless (defects {herm:.3e}, {tr:.3e})"
                ))
                .into());
            }
        }
        Ok(Self { base_state, derivs })
    }

    pub fn num_params(&self) -> usize {
        self.derivs.len()
    }
}

/// Quantum Fisher information matrix of one state, with its SLDs.
#[derive(Debug, Clone)]
pub struct Qfim {
    pub matrix: RealMatrix,
    pub slds: Vec<ComplexMatrix>,
    /// Number of eigenvalues of ρ above the support cutoff.
    pub support_dim: usize,
}

impl Qfim {
    /// max over pairs of ‖[L_i, L_j]‖_max
    pub fn commutator_norm(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.slds.len() {
            for j in i + 1..self.slds.len() {
                worst = worst.max(self.slds[i].commutator(&self.slds[j]).max_abs());
            }
        }
        worst
    }
}

/// Diagonal thermal benchmark diag(F_th¹, …, F_th^N).
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalFim {
    pub diagonal: Vec<f64>,
}

impl ThermalFim {
    pub fn matrix(&self) -> RealMatrix {
        RealMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.diagonal.clone()))
    }

    pub fn trace(&self) -> f64 {
        self.diagonal.iter().sum()
    }

    pub fn det(&self) -> f64 {
        self.diagonal.iter().product()
    }
}

/// Everything reported for one protocol evaluation.
#[derive(Debug, Clone)]
pub struct EstimationReport {
    /// Total QFIM (sum of `components` for product states).
    pub qfim: RealMatrix,
    /// Per-factor QFIMs whose sum is `qfim`; a single entry for one joint state.
    pub components: Vec<Qfim>,
    pub thermal: ThermalFim,
    pub eta_joint: f64,
    /// Natural log; `-inf` when det(F_Q) is at or below [`ETA_ACC_DET_FLOOR`].
    pub eta_acc: f64,
    /// ‖[L_i, L_j]‖_max of the total SLDs, maximized over parameter pairs.
    pub sld_commutator_norm: f64,
    pub singular: bool,
}

impl EstimationReport {
    pub fn from_components(components: Vec<Qfim>, thermal: ThermalFim) -> Result<Self, EstimationError> {
        let n = thermal.diagonal.len();
        let mut total = RealMatrix::zeros(n, n);
        for c in &components {
            if c.matrix.nrows() != n {
                return Err(EstimationError::ParameterCount(c.matrix.nrows(), n));
            }
            total += &c.matrix;
        }
        let (eta_joint, eta_acc) = eta_metrics(&total, &thermal)?;
        Ok(Self {
            sld_commutator_norm: product_commutator_norm(&components),
            singular: is_singular(&total),
            qfim: total,
            components,
            thermal,
            eta_joint,
            eta_acc,
        })
    }

    pub fn det_qfim(&self) -> f64 {
        self.qfim.determinant()
    }

    pub fn trace_qfim(&self) -> f64 {
        self.qfim.trace()
    }
}

/// ‖[Σ_k L_i^{(k)}, Σ_k L_j^{(k)}]‖_max for local SLDs on distinct tensor factors.
///
/// The joint commutator is Σ_k C_k (each C_k embedded on factor k). Off-diagonal
/// entries of the sum come from a single C_k; diagonal entries add, and since
/// each C_k is anti-Hermitian its diagonal is imaginary, so the extreme diagonal
/// entry picks the largest (or smallest) imaginary part from every factor.
fn product_commutator_norm(components: &[Qfim]) -> f64 {
    let params = components.first().map_or(0, |c| c.slds.len());
    let mut worst = 0.0_f64;
    for i in 0..params {
        for j in i + 1..params {
            let mut off = 0.0_f64;
            let (mut hi, mut lo) = (0.0_f64, 0.0_f64);
            for comp in components {
                let cm = comp.slds[i].commutator(&comp.slds[j]);
                let d = cm.rows();
                let (mut h, mut l) = (f64::NEG_INFINITY, f64::INFINITY);
                for a in 0..d {
                    for b in 0..d {
                        if a == b {
                            h = h.max(cm[(a, a)].im);
                            l = l.min(cm[(a, a)].im);
                        } else {
                            off = off.max(cm[(a, b)].norm());
                        }
                    }
                }
                hi += h;
                lo += l;
            }
            worst = worst.max(off).max(hi.abs()).max(lo.abs());
        }
    }
    worst
}

/// det(F) ≤ 1e-12 for N ≤ 2; det(F) ≤ 1e-12·‖F‖_max^N for larger N.
pub fn is_singular(f: &RealMatrix) -> bool {
    let n = f.nrows();
    let det = f.determinant();
    if n <= 2 {
        return det <= SINGULAR_DET_TOL;
    }
    let scale = f.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    det <= SINGULAR_DET_TOL * scale.powi(n as i32)
}

fn sld_in_eigenbasis(eig: &HermEig, drho: &ComplexMatrix) -> Result<ComplexMatrix, EstimationError> {
    let v = &eig.vectors;
    let d_eig = v.adjoint().matmul(drho).matmul(v);
    let n = d_eig.rows();
    let alphas: Vec<f64> = eig.values.iter().map(|a| a.max(0.0)).collect();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let s = alphas[j] + alphas[k];
            if s > SUPPORT_CUTOFF {
                l[(j, k)] = d_eig[(j, k)] * (2.0 / s);
            } else if d_eig[(j, k)].norm() > KERNEL_LEAK_TOL {
                return Err(EstimationError::SupportLeak(d_eig[(j, k)].norm()));
            }
        }
    }
    Ok(l)
}

/// SLD L solving ∂ρ = ½(Lρ + ρL) on the support of ρ.
pub fn sld(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<ComplexMatrix, EstimationError> {
    let eig = herm_eig(rho.matrix())?;
    let l = sld_in_eigenbasis(&eig, drho)?;
    Ok(eig.vectors.matmul(&l).matmul(&eig.vectors.adjoint()))
}

/// F_ij = ½Tr[ρ(L_iL_j + L_jL_i)], evaluated in the eigenbasis of ρ as
/// Σ_{jk} 2 Re(∂_iρ_{jk} conj(∂_jρ_{jk}))/(α_j + α_k).
pub fn qfim(pd: &ParamDerivatives) -> Result<Qfim, EstimationError> {
    let eig = herm_eig(pd.base_state.matrix())?;
    let v = &eig.vectors;
    let vd = v.adjoint();
    let np = pd.num_params();
    let d = pd.base_state.dim();
    let alphas: Vec<f64> = eig.values.iter().map(|a| a.max(0.0)).collect();

    let mut rotated = Vec::with_capacity(np);
    let mut slds = Vec::with_capacity(np);
    for drho in &pd.derivs {
        let de = vd.matmul(drho).matmul(v);
        let l = sld_in_eigenbasis(&eig, drho)?;
        slds.push(v.matmul(&l).matmul(&vd));
        rotated.push(de);
    }

    let mut f = RealMatrix::zeros(np, np);
    for a in 0..np {
        for b in a..np {
            let mut acc = 0.0;
            for j in 0..d {
                for k in 0..d {
                    let s = alphas[j] + alphas[k];
                    if s > SUPPORT_CUTOFF {
                        let prod: Complex64 = rotated[a][(j, k)] * rotated[b][(j, k)].conj();
                        acc += 2.0 * prod.re / s;
                    }
                }
            }
            f[(a, b)] = acc;
            f[(b, a)] = acc;
        }
    }
    let support_dim = alphas.iter().filter(|&&a| a > SUPPORT_CUTOFF).count();
    Ok(Qfim { matrix: f, slds, support_dim })
}

/// Var(H_S)/T⁴ per bath for H_S = ωσ_z/2.
pub fn thermal_fim(baths: &[BathSpec]) -> Result<ThermalFim, EstimationError> {
    let mut diagonal = Vec::with_capacity(baths.len());
    for b in baths {
        let [l0, l1] = thermal_populations(b.omega, b.temperature)?;
        let e = b.omega / 2.0;
        let mean = e * l0 - e * l1;
        let second = e * e * (l0 + l1);
        diagonal.push((second - mean * mean) / b.temperature.powi(4));
    }
    Ok(ThermalFim { diagonal })
}

/// (η_joint, η_acc) = (Tr F_Q / Tr F_th, ln[det F_Q / det F_th]).
pub fn eta_metrics(qfim: &RealMatrix, thermal: &ThermalFim) -> Result<(f64, f64), EstimationError> {
    let (trace, det) = (thermal.trace(), thermal.det());
    if !(trace > 0.0) || !(det > 0.0) {
        return Err(EstimationError::DegenerateBenchmark { trace, det });
    }
    let eta_joint = qfim.trace() / trace;
    let det_q = qfim.determinant();
    let eta_acc = if det_q <= ETA_ACC_DET_FLOOR { f64::NEG_INFINITY } else { (det_q / det).ln() };
    Ok((eta_joint, eta_acc))
}

/// Outcome of the derivative-proportionality test for a biparametrized qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityVerdict {
    pub singular: bool,
    /// c with ∂₁ρ = c ∂₂ρ, when singular.
    pub c: Option<f64>,
}

/// Checks ∂₁ρ = c ∂₂ρ for real c via Cauchy–Schwarz equality in the
/// Frobenius inner product.
pub fn singularity_test(pd: &ParamDerivatives) -> Result<SingularityVerdict, EstimationError> {
    let dim = pd.base_state.dim();
    if dim != 2 || pd.num_params() != 2 {
        return Err(EstimationError::NotBiparametrizedQubit { dim, params: pd.num_params() });
    }
    let (d1, d2) = (&pd.derivs[0], &pd.derivs[1]);
    let n1 = d1.frobenius_norm();
    let n2 = d2.frobenius_norm();
    if n1 <= 1e-14 || n2 <= 1e-14 {
        return Ok(SingularityVerdict { singular: true, c: Some(0.0) });
    }
    let inner = d2.frobenius_inner(d1);
    let cs_gap = 1.0 - inner.norm_sqr() / (n1 * n1 * n2 * n2);
    let ratio = inner / (n2 * n2);
    let real = ratio.im.abs() <= 1e-10 * ratio.norm().max(1.0);
    if cs_gap <= 1e-10 && real {
        Ok(SingularityVerdict { singular: true, c: Some(ratio.re) })
    } else {
        Ok(SingularityVerdict { singular: false, c: None })
    }
}

/// Default central-difference step for a parameter value.
pub fn default_step(theta: f64) -> f64 {
    (1e-6 * theta.abs()).max(1e-5)
}

/// Central-difference derivatives of several states that share one parameter
/// vector. Each derivative is computed at steps h and h/2; the two must agree
/// to 1e-6 relative (plus a 1e-9 absolute floor for vanishing derivatives),
/// and the Richardson combination (4·D_{h/2} − D_h)/3 is returned.
pub fn finite_diff_derivatives_multi<E, F>(
    rho_fn: F,
    theta: &[f64],
    steps: Option<&[f64]>,
) -> Result<Vec<ParamDerivatives>, E>
where
    F: Fn(&[f64]) -> Result<Vec<DensityMatrix>, E>,
    E: From<EstimationError>,
{
    let np = theta.len();
    let steps: Vec<f64> = match steps {
        Some(s) if s.len() == np => s.to_vec(),
        Some(s) => return Err(EstimationError::ParameterCount(s.len(), np).into()),
        None => theta.iter().map(|&t| default_step(t)).collect(),
    };
    let base = rho_fn(theta)?;
    let mut derivs: Vec<Vec<ComplexMatrix>> = vec![Vec::with_capacity(np); base.len()];

    let central = |mu: usize, h: f64| -> Result<Vec<ComplexMatrix>, E> {
        let mut plus = theta.to_vec();
        let mut minus = theta.to_vec();
        plus[mu] += h;
        minus[mu] -= h;
        let sp = rho_fn(&plus)?;
        let sm = rho_fn(&minus)?;
        Ok(sp.iter().zip(&sm).map(|(p, m)| (p.matrix() - m.matrix()).scale_real(0.5 / h)).collect())
    };

    for mu in 0..np {
        let h = steps[mu];
        let coarse = central(mu, h)?;
        let fine = central(mu, h / 2.0)?;
        for (k, (dc, df)) in coarse.iter().zip(&fine).enumerate() {
            let change = dc.max_abs_diff(df);
            let tolerance = 1e-6 * df.max_abs() + 1e-9;
            if change > tolerance {
                return Err(EstimationError::Richardson { param: mu, change, tolerance }.into());
            }
            let extrapolated = (&df.scale_real(4.0) - dc).scale_real(1.0 / 3.0);
            // states have unit trace (checked on validation), so the trace
            // of a difference quotient is rounding noise amplified by 1/h
            derivs[k].push(traceless_part(&extrapolated.hermitian_part()));
        }
    }
    base.into_iter()
        .zip(derivs)
        .map(|(b, d)| ParamDerivatives::new(b, d).map_err(E::from))
        .collect()
}

fn traceless_part(m: &ComplexMatrix) -> ComplexMatrix {
    let shift = m.trace().re / m.rows() as f64;
    m - &ComplexMatrix::identity(m.rows()).scale_real(shift)
}

/// Single-state form of [`finite_diff_derivatives_multi`].
pub fn finite_diff_derivatives<E, F>(rho_fn: F, theta: &[f64], steps: Option<&[f64]>) -> Result<ParamDerivatives, E>
where
    F: Fn(&[f64]) -> Result<DensityMatrix, E>,
    E: From<EstimationError>,
{
    let mut out = finite_diff_derivatives_multi(|t: &[f64]| rho_fn(t).map(|s| vec![s]), theta, steps)?;
    Ok(out.remove(0))
}

/// Validates effects: Hermitian, PSD to −1e-10, summing to I within 1e-10.
pub fn validate_povm(povm: &[ComplexMatrix]) -> Result<(), EstimationError> {
    let first = povm.first().ok_or_else(|| EstimationError::InvalidPovm("no effects".into()))?;
    let d = first.rows();
    let mut sum = ComplexMatrix::zeros(d, d);
    for (k, e) in povm.iter().enumerate() {
        if e.rows() != d || !e.is_square() {
            return Err(EstimationError::InvalidPovm(format!("effect {k} has the wrong shape")));
        }
        let eig = herm_eig(e).map_err(|_| EstimationError::InvalidPovm(format!("effect {k} is not Hermitian")))?;
        if eig.values[0] < -1e-10 {
            return Err(EstimationError::InvalidPovm(format!("effect {k} has eigenvalue {:.3e}", eig.values[0])));
        }
        sum = &sum + e;
    }
    let defect = sum.max_abs_diff(&ComplexMatrix::identity(d));
    if defect > 1e-10 {
        return Err(EstimationError::InvalidPovm(format!("effects sum to identity only within {defect:.3e}")));
    }
    Ok(())
}

/// Classical Fisher information of the outcome distribution p_j = Tr[ρ(θ)Π_j],
/// with probability derivatives from central differences of step `h`.
/// Outcomes with p_j < 1e-12 are skipped.
pub fn classical_fim<E, F>(rho_fn: F, theta: &[f64], povm: &[ComplexMatrix], h: f64) -> Result<RealMatrix, E>
where
    F: Fn(&[f64]) -> Result<DensityMatrix, E>,
    E: From<EstimationError>,
{
    validate_povm(povm)?;
    let probs = |rho: &DensityMatrix| -> Vec<f64> {
        povm.iter().map(|e| rho.matrix().matmul(e).trace().re).collect()
    };
    let np = theta.len();
    let p0 = probs(&rho_fn(theta)?);
    let mut grads = vec![vec![0.0; povm.len()]; np];
    for mu in 0..np {
        let mut plus = theta.to_vec();
        let mut minus = theta.to_vec();
        plus[mu] += h;
        minus[mu] -= h;
        let pp = probs(&rho_fn(&plus)?);
        let pm = probs(&rho_fn(&minus)?);
        for j in 0..povm.len() {
            grads[mu][j] = (pp[j] - pm[j]) / (2.0 * h);
        }
    }
    let mut f = RealMatrix::zeros(np, np);
    for (j, &p) in p0.iter().enumerate() {
        if p < 1e-12 {
            continue;
        }
        for a in 0..np {
            for b in 0..np {
                f[(a, b)] += grads[a][j] * grads[b][j] / p;
            }
        }
    }
    Ok(f)
}

/// Projectors onto the eigenvectors of a Hermitian operator.
pub fn eigenbasis_povm(op: &ComplexMatrix) -> Result<Vec<ComplexMatrix>, EstimationError> {
    let eig = herm_eig(op)?;
    Ok((0..op.rows())
        .map(|k| {
            let v = eig.vector(k);
            ComplexMatrix::outer(&v, &v)
        })
        .collect())
}

/// Zero-valued derivative list, used for parameter-independent factors.
pub fn zero_derivatives(dim: usize, params: usize) -> Vec<ComplexMatrix> {
    vec![ComplexMatrix::from_fn(dim, dim, |_, _| ZERO); params]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::thermal_state;
    use crate::linalg::{c, pauli, r};

    fn diag_state(v: f64) -> DensityMatrix {
        DensityMatrix::single(ComplexMatrix::real_diagonal(&[v, 1.0 - v])).unwrap()
    }

    #[test]
    fn sld_diagonal_family() {
        let (v, dv) = (0.3, 0.17);
        let rho = diag_state(v);
        let drho = ComplexMatrix::real_diagonal(&[dv, -dv]);
        let l = sld(&rho, &drho).unwrap();
        let expected = ComplexMatrix::real_diagonal(&[dv / v, -dv / (1.0 - v)]);
        assert!(l.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn sld_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(2);
        let drho = pauli::x().scale_real(0.2);
        let l = sld(&rho, &drho).unwrap();
        assert!(l.max_abs_diff(&pauli::x().scale_real(0.4)) < 1e-14);
    }

    #[test]
    fn sld_rejects_kernel_leak() {
        let rho = DensityMatrix::basis_state(3, 0);
        let mut drho = ComplexMatrix::zeros(3, 3);
        drho[(1, 1)] = r(0.5);
        drho[(2, 2)] = r(-0.5);
        assert!(matches!(sld(&rho, &drho), Err(EstimationError::SupportLeak(_))));
    }

    #[test]
    fn sld_on_pure_state_support() {
        // |ψ(θ)> = cos θ|0> + sin θ|1>: QFI = 4
        let th = 0.4_f64;
        let psi = [r(th.cos()), r(th.sin())];
        let dpsi = [r(-th.sin()), r(th.cos())];
        let rho = DensityMatrix::pure(&psi).unwrap();
        let drho = &ComplexMatrix::outer(&dpsi, &psi) + &ComplexMatrix::outer(&psi, &dpsi);
        let q = qfim(&ParamDerivatives::new(rho.clone(), vec![drho.clone()]).unwrap()).unwrap();
        assert!((q.matrix[(0, 0)] - 4.0).abs() < 1e-12);
        assert_eq!(q.support_dim, 1);
        let l = &q.slds[0];
        let resid = &(&l.matmul(rho.matrix()) + &rho.matrix().matmul(l)).scale_real(0.5) - &drho;
        assert!(resid.max_abs() < 1e-12);
    }

    #[test]
    fn scalar_qfi_binomial() {
        let (v, dv) = (0.42, 0.3);
        let pd = ParamDerivatives::new(diag_state(v), vec![ComplexMatrix::real_diagonal(&[dv, -dv])]).unwrap();
        let q = qfim(&pd).unwrap();
        assert!((q.matrix[(0, 0)] - dv * dv / (v * (1.0 - v))).abs() < 1e-13);
    }

    #[test]
    fn derivative_validation() {
        let bad = ComplexMatrix::real_diagonal(&[1.0, 0.0]);
        assert!(ParamDerivatives::new(diag_state(0.5), vec![bad]).is_err());
    }

    #[test]
    fn thermal_benchmark_values() {
        let baths: Vec<BathSpec> = [2.0, 1.0, 3.0].iter().map(|&t| BathSpec::new(t, 0.0)).collect();
        let th = thermal_fim(&baths).unwrap();
        for (f, b) in th.diagonal.iter().zip(&baths) {
            let x = b.omega / (2.0 * b.temperature);
            let closed = b.omega.powi(2) / x.cosh().powi(2) / (4.0 * b.temperature.powi(4));
            assert!((f - closed).abs() < 1e-15);
        }
        assert!((th.diagonal[0] - 0.015).abs() < 0.001);
        assert!((th.diagonal[1] - 0.197).abs() < 0.001);
        assert!((th.diagonal[2] - 0.003).abs() < 0.0005);
    }

    #[test]
    fn eta_values() {
        let th = ThermalFim { diagonal: vec![0.015, 0.197] };
        let (j, a) = eta_metrics(&th.matrix(), &th).unwrap();
        assert!((j - 1.0).abs() < 1e-15 && a.abs() < 1e-12);
        let (j, a) = eta_metrics(&(th.matrix() * 2.0), &th).unwrap();
        assert!((j - 2.0).abs() < 1e-14 && (a - 4f64.ln()).abs() < 1e-12);
        let rank1 = RealMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(eta_metrics(&rank1, &th).unwrap().1, f64::NEG_INFINITY);
        let degenerate = ThermalFim { diagonal: vec![0.0, 1.0] };
        assert!(eta_metrics(&rank1, &degenerate).is_err());
    }

    #[test]
    fn singularity_examples() {
        let rho = DensityMatrix::maximally_mixed(2);
        let pd = ParamDerivatives::new(rho.clone(), vec![pauli::x().scale_real(1.0 / 3.0), pauli::x().scale_real(1.0 / 7.0)])
            .unwrap();
        let v = singularity_test(&pd).unwrap();
        assert!(v.singular);
        assert!((v.c.unwrap() - 7.0 / 3.0).abs() < 1e-12);

        let pd = ParamDerivatives::new(rho.clone(), vec![pauli::y().scale_real(0.2), pauli::z().scale_real(0.1)]).unwrap();
        assert!(!singularity_test(&pd).unwrap().singular);

        let pd = ParamDerivatives::new(rho, vec![ComplexMatrix::zeros(2, 2), pauli::z()]).unwrap();
        assert_eq!(singularity_test(&pd).unwrap(), SingularityVerdict { singular: true, c: Some(0.0) });

        let pd = ParamDerivatives::new(DensityMatrix::maximally_mixed(3), vec![ComplexMatrix::zeros(3, 3); 2]).unwrap();
        assert!(singularity_test(&pd).is_err());
    }

    #[test]
    fn finite_difference_thermal_family() {
        let omega = 1.0;
        for t in [0.5, 1.0, 2.0] {
            let pd = finite_diff_derivatives::<EstimationError, _>(
                |th: &[f64]| Ok(thermal_state(omega, th[0])?),
                &[t],
                None,
            )
            .unwrap();
            // dλ₀/dT = (ω/T²) λ₀ λ₁ for the excited population
            let [l0, l1] = thermal_populations(omega, t).unwrap();
            let d0 = omega / (t * t) * l0 * l1;
            let expected = ComplexMatrix::real_diagonal(&[d0, -d0]);
            assert!(pd.derivs[0].max_abs_diff(&expected) < 1e-7);
        }
    }

    #[test]
    fn finite_difference_constant_family() {
        let pd = finite_diff_derivatives::<EstimationError, _>(
            |_: &[f64]| Ok(DensityMatrix::maximally_mixed(2)),
            &[1.0, 2.0],
            None,
        )
        .unwrap();
        assert!(pd.derivs.iter().all(|d| d.max_abs() == 0.0));
    }

    #[test]
    fn finite_difference_detects_kink() {
        let res = finite_diff_derivatives::<EstimationError, _>(
            |th: &[f64]| {
                let v = 0.5 + 0.3 * (th[0] - 1.0 - 3e-6).abs().sqrt();
                Ok(DensityMatrix::single(ComplexMatrix::real_diagonal(&[v, 1.0 - v]))?)
            },
            &[1.0],
            None,
        );
        assert!(matches!(res, Err(EstimationError::Richardson { .. })));
    }

    #[test]
    fn classical_fim_cases() {
        let family = |th: &[f64]| -> Result<DensityMatrix, EstimationError> {
            let v = 0.3 + 0.2 * th[0].sin();
            Ok(DensityMatrix::single(ComplexMatrix::real_diagonal(&[v, 1.0 - v]))?)
        };
        let th = [0.7];
        let v = 0.3 + 0.2 * 0.7_f64.sin();
        let dv = 0.2 * 0.7_f64.cos();
        let comp = vec![ComplexMatrix::basis_projector(2, 0), ComplexMatrix::basis_projector(2, 1)];
        let f = classical_fim(family, &th, &comp, 1e-5).unwrap();
        assert!((f[(0, 0)] - dv * dv / (v * (1.0 - v))).abs() < 1e-8);

        let trivial = classical_fim(family, &th, &[ComplexMatrix::identity(2)], 1e-5).unwrap();
        assert!(trivial[(0, 0)].abs() < 1e-15);

        let bad = vec![ComplexMatrix::basis_projector(2, 0)];
        assert!(matches!(classical_fim(family, &th, &bad, 1e-5), Err(EstimationError::InvalidPovm(_))));
    }

    #[test]
    fn classical_fim_saturates_qfi_in_sld_basis() {
        // rotating, partially mixed qubit
        let family = |th: &[f64]| -> Result<DensityMatrix, EstimationError> {
            let (s, co) = th[0].sin_cos();
            let rvec = [0.7 * co, 0.7 * s * 0.6, 0.7 * s * 0.8];
            let m = ComplexMatrix::from_rows(&[
                vec![r(0.5 * (1.0 + rvec[2])), c(0.5 * rvec[0], -0.5 * rvec[1])],
                vec![c(0.5 * rvec[0], 0.5 * rvec[1]), r(0.5 * (1.0 - rvec[2]))],
            ]);
            Ok(DensityMatrix::single(m)?)
        };
        let th = [0.9];
        let pd = finite_diff_derivatives(family, &th, None).unwrap();
        let q = qfim(&pd).unwrap();
        let povm = eigenbasis_povm(&q.slds[0]).unwrap();
        let f = classical_fim(family, &th, &povm, 1e-5).unwrap();
        assert!((f[(0, 0)] - q.matrix[(0, 0)]).abs() < 1e-6);
    }
}
