use crate::error::{argument, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator};

use super::{feasibility_residual, make_feasible, psd_projection, Cut, SolverReport};

/// Schatten-2 projection onto PPT states.
#[derive(Debug, Clone)]
pub struct Projection {
    /// The last Dykstra iterate (unit trace, cones satisfied up to the residual).
    pub point: HermitianOperator,
    /// `value` is the Schatten-2 distance from the input to `point`; the
    /// certificate is `point` nudged toward I/n until exactly feasible.
    pub report: SolverReport,
}

/// Dykstra's alternating projection onto PSD, then PT-PSD, then the unit
/// trace hyperplane. Stops when successive iterates move less than `tol` in
/// Schatten-2 norm; a run that hits `max_iter` is reported as not converged.
pub fn project_ppt(m: &HermitianOperator, cut: &Cut, tol: f64, max_iter: usize) -> Result<Projection> {
    let n = m.dim();
    if n != cut.dim() {
        return Err(argument(alloc::format!("operator dimension {n} does not match factors {:?}", cut.dims)));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(argument("tolerance must be positive"));
    }
    let id = ComplexMatrix::identity(n);
    let mut x = m.matrix().clone();
    let mut p1 = ComplexMatrix::zeros(n, n);
    let mut p2 = ComplexMatrix::zeros(n, n);
    let mut iterations = 0;
    let mut moved = f64::INFINITY;
    while iterations < max_iter {
        iterations += 1;
        let y = psd_projection(&(&x + &p1))?;
        p1 = &(&x + &p1) - &y;
        let yp = &y + &p2;
        let z = cut.pt(&psd_projection(&cut.pt(&yp))?);
        p2 = &yp - &z;
        // The trace hyperplane is affine, so its correction term vanishes.
        let shift = (z.trace().re - 1.0) / n as f64;
        let w = &z - &id.scale(shift);
        moved = (&w - &x).frobenius_norm();
        x = w;
        if moved < tol {
            break;
        }
    }
    let residual = feasibility_residual(&x, cut)?;
    let point = HermitianOperator::from_hermitian_part(&x);
    let (certificate, _) = make_feasible(&x, cut)?;
    let report = SolverReport {
        value: (point.matrix() - m.matrix()).frobenius_norm(),
        feasibility_residual: residual,
        iterations,
        converged: moved < tol && residual <= tol.max(1e-9),
        certificate: Some(certificate),
        upper_bound: None,
    };
    Ok(Projection { point, report })
}
