//! Schatten norms, trace distance, fidelity and the PPT test.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{argument, domain, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator};
use crate::spectral::{eigh, psd_sqrt, singular_values};
use crate::state::FactoredState;

/// Fidelity inputs may dip this far below zero before being rejected.
pub const FIDELITY_PSD_TOL: f64 = 1e-9;
/// Negative eigenvalues of sqrt(sigma) rho sqrt(sigma) above this are clipped.
pub const FIDELITY_CLIP: f64 = 1e-10;

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(argument(alloc::format!("Schatten exponent must be in [1, inf], got {p}")));
    }
    Ok(())
}

fn p_norm(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p == f64::INFINITY {
        values.fold(0.0, f64::max)
    } else if p == 1.0 {
        values.sum()
    } else if p == 2.0 {
        values.map(|s| s * s).sum::<f64>().sqrt()
    } else {
        values.map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Schatten p-norm from singular values; `p = f64::INFINITY` is the operator norm.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    check_p(p)?;
    let sv = singular_values(a)?;
    Ok(p_norm(sv.into_iter(), p))
}

/// Schatten p-norm of a Hermitian operator via |eigenvalues|.
pub fn hermitian_schatten_norm(a: &HermitianOperator, p: f64) -> Result<f64> {
    check_p(p)?;
    let eig = eigh(a)?;
    Ok(p_norm(eig.values.iter().map(|v| v.abs()), p))
}

pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    schatten_norm(a, 1.0)
}

/// ||rho - sigma||_1 between two Hermitian operators (no 1/2 factor).
pub fn operator_trace_distance(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(argument(alloc::format!("dimension mismatch: {} vs {}", rho.dim(), sigma.dim())));
    }
    let diff = HermitianOperator::from_hermitian_part(&(rho.matrix() - sigma.matrix()));
    hermitian_schatten_norm(&diff, 1.0)
}

/// ||rho - sigma||_1, in [0, 2] for states.
pub fn trace_distance(rho: &FactoredState, sigma: &FactoredState) -> Result<f64> {
    operator_trace_distance(rho.operator(), sigma.operator())
}

/// F(rho, sigma) = Tr sqrt(sqrt(sigma) rho sqrt(sigma)).
pub fn operator_fidelity(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(argument(alloc::format!("dimension mismatch: {} vs {}", rho.dim(), sigma.dim())));
    }
    let rho_min = eigh(rho)?.min();
    if rho_min < -FIDELITY_PSD_TOL {
        return Err(domain(alloc::format!("first argument is not PSD (eigenvalue {rho_min:e})")));
    }
    let root = psd_sqrt(sigma, FIDELITY_PSD_TOL)?;
    let m = HermitianOperator::from_hermitian_part(&root.matmul(rho.matrix()).matmul(&root));
    let eig = eigh(&m)?;
    if eig.min() < -FIDELITY_CLIP {
        return Err(domain(alloc::format!("sqrt(sigma) rho sqrt(sigma) has eigenvalue {:e}", eig.min())));
    }
    Ok(eig.flushed_values().iter().map(|&l| l.max(0.0).sqrt()).sum())
}

pub fn fidelity(rho: &FactoredState, sigma: &FactoredState) -> Result<f64> {
    operator_fidelity(rho.operator(), sigma.operator())
}

pub fn min_eigenvalue(a: &HermitianOperator) -> Result<f64> {
    Ok(eigh(a)?.min())
}

pub fn max_eigenvalue(a: &HermitianOperator) -> Result<f64> {
    Ok(eigh(a)?.max())
}

/// Outcome of the PPT test, with the eigenvalue that decided it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptCheck {
    pub ppt: bool,
    pub min_eigenvalue: f64,
}

pub fn is_ppt(s: &FactoredState, tol: f64) -> Result<PptCheck> {
    let min = min_eigenvalue(&s.partial_transpose())?;
    Ok(PptCheck { ppt: min >= -tol, min_eigenvalue: min })
}

/// Sorted spectrum; convenience for reports.
pub fn spectrum(a: &HermitianOperator) -> Result<Vec<f64>> {
    Ok(eigh(a)?.values)
}
