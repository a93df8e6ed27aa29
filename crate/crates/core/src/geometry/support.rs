use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::pure_ppt_fidelity;
use crate::error::{argument, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator, C64};
use crate::random::random_state;
use crate::spectral::eigh;

use super::{feasibility_residual, make_feasible, psd_projection, spectraplex_projection, Cut, Direction, GeometryConfig, SolverReport};
use super::seesaw::h_sep_seesaw;

struct Run {
    lower: f64,
    upper: f64,
    residual: f64,
    iterations: usize,
    converged: bool,
    certificate: crate::state::FactoredState,
}

/// Splitting method for `max <rho, u>` over states with `rho^G >= 0`, using
/// the copy `Z = rho^G`:
///
/// ```text
/// rho <- P_states((Z - W)^G + u/beta)
/// Z   <- P_psd(rho^G + W)
/// W   <- W + rho^G - Z
/// ```
///
/// W stays negative semidefinite, so `lambda_max(u - beta W^G)` bounds the
/// optimum from above for every iterate.
fn admm_run(u: &ComplexMatrix, cut: &Cut, cfg: &GeometryConfig, start: &ComplexMatrix) -> Result<Run> {
    let n = u.rows();
    let beta = cfg.beta;
    let drive = u.scale(1.0 / beta);
    let mut z = psd_projection(&cut.pt(start))?;
    let mut w = ComplexMatrix::zeros(n, n);
    let mut rho = start.clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        iterations += 1;
        rho = spectraplex_projection(&(&cut.pt(&(&z - &w)) + &drive))?;
        let rho_pt = cut.pt(&rho);
        let z_next = psd_projection(&(&rho_pt + &w))?;
        let primal = (&rho_pt - &z_next).frobenius_norm();
        let dual = beta * (&z_next - &z).frobenius_norm();
        w = &(&w + &rho_pt) - &z_next;
        z = z_next;
        if primal < cfg.solver_tol && dual < cfg.solver_tol {
            converged = true;
            break;
        }
    }
    let residual = feasibility_residual(&rho, cut)?;
    let (certificate, _) = make_feasible(&rho, cut)?;
    let lower = certificate.matrix().hs_inner(u);
    let dual_op = HermitianOperator::from_hermitian_part(&(u - &cut.pt(&w).scale(beta)));
    let upper = eigh(&dual_op)?.max();
    Ok(Run { lower, upper, residual, iterations, converged, certificate })
}

/// Support function `h_PPT(u) = max <rho, u>` over PPT states of the cut.
///
/// The first run starts from I/n and the others from random states with
/// fixed seeds; the report carries the best feasible value, the smallest
/// dual bound and the run count. It is converged when every run met the
/// residual test, the raw iterate is feasible within `tol_feas`, the first
/// run agrees with the best within `tol_value` and the duality gap is
/// below `tol_value`.
pub fn h_ppt(u: &Direction, cut: &Cut, cfg: &GeometryConfig) -> Result<SolverReport> {
    let n = u.n();
    if n != cut.dim() {
        return Err(argument(alloc::format!("direction dimension {n} does not match factors {:?}", cut.dims)));
    }
    let mut runs: Vec<Run> = Vec::with_capacity(cfg.restarts.max(1));
    for k in 0..cfg.restarts.max(1) {
        let start = if k == 0 {
            ComplexMatrix::identity(n).scale(1.0 / n as f64)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
            random_state(n, &mut rng).into_matrix()
        };
        runs.push(admm_run(u.matrix(), cut, cfg, &start)?);
    }
    let best = runs.iter().enumerate().max_by(|a, b| a.1.lower.total_cmp(&b.1.lower)).map(|(i, _)| i).unwrap_or(0);
    let upper = runs.iter().map(|r| r.upper).fold(f64::INFINITY, f64::min);
    let value = runs[best].lower;
    let converged = runs.iter().all(|r| r.converged)
        && runs[best].residual <= cfg.tol_feas
        && value - runs[0].lower <= cfg.tol_value
        && upper - value <= cfg.tol_value;
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let best_run = runs.swap_remove(best);
    Ok(SolverReport {
        value,
        feasibility_residual: best_run.residual,
        iterations,
        converged,
        certificate: Some(best_run.certificate),
        upper_bound: Some(upper),
    })
}

/// `max Tr(|psi><psi| sigma)` over PPT sigma on `d (x) d`, where psi has
/// Schmidt coefficients `schmidt` in the computational basis. The value is
/// the overlap itself (the fidelity is its square root).
pub fn max_overlap_ppt(schmidt: &[f64], cfg: &GeometryConfig) -> Result<SolverReport> {
    pure_ppt_fidelity(schmidt)?;
    let d = schmidt.len();
    if !(2..=4).contains(&d) {
        return Err(argument(alloc::format!("Schmidt rank must be between 2 and 4, got {d}")));
    }
    let n = d * d;
    let mut psi = alloc::vec![C64::new(0.0, 0.0); n];
    for (i, &a) in schmidt.iter().enumerate() {
        psi[i * d + i] = C64::new(a, 0.0);
    }
    let projector = HermitianOperator::from_hermitian_part(&ComplexMatrix::outer(&psi, &psi));
    let direction = Direction::from_operator(&projector)?;
    // P = h u + I/n with h = ||P - I/n||_2 = sqrt(1 - 1/n).
    let h = (1.0 - 1.0 / n as f64).sqrt();
    let mut report = h_ppt(&direction, &Cut::bipartite(d, d)?, cfg)?;
    report.value = report.value * h + 1.0 / n as f64;
    report.upper_bound = report.upper_bound.map(|v| v * h + 1.0 / n as f64);
    Ok(report)
}

/// `(h_PPT(u) - h_sep(u)) / ||u||_inf`. The seesaw value is a lower bound on
/// h_SEP, so the gap over-estimates the true one.
#[derive(Debug, Clone)]
pub struct WitnessGap {
    pub h_ppt: SolverReport,
    pub h_sep_lower: f64,
    pub opnorm: f64,
    pub gap_estimate: f64,
}

pub fn witness_gap<R: Rng + ?Sized>(u: &Direction, d_a: usize, d_b: usize, cfg: &GeometryConfig, rng: &mut R) -> Result<WitnessGap> {
    let h_ppt_report = h_ppt(u, &Cut::bipartite(d_a, d_b)?, cfg)?;
    let sep = h_sep_seesaw(u.operator(), d_a, d_b, cfg.seesaw_restarts, cfg.seesaw_sweeps, rng)?;
    let opnorm = u.opnorm()?;
    let gap_estimate = (h_ppt_report.value - sep.value) / opnorm;
    Ok(WitnessGap { h_ppt: h_ppt_report, h_sep_lower: sep.value, opnorm, gap_estimate })
}
