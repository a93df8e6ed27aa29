//! Convex geometry of the state space: sampled directions, support functions
//! of the PPT and separable sets, projections onto PPT states and width
//! experiments.
//!
//! Every estimate says which side of the true value it sits on: PPT values
//! come from feasible certificates (lower bounds) paired with dual upper
//! bounds, and seesaw values on the separable set are lower bounds.

mod closest;
mod direction;
mod projection;
mod seesaw;
mod support;
mod width;

pub use closest::{closest_ppt_trace_ub, ClosestPpt};
pub use direction::{sample_direction, Direction};
pub use projection::{project_ppt, Projection};
pub use seesaw::{h_sep_seesaw, SeesawResult};
pub use support::{h_ppt, max_overlap_ppt, witness_gap, WitnessGap};
pub use width::{summarize, width_sample, Stats, WidthSample, WidthSummary};

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::matrix::{ComplexMatrix, HermitianOperator};
use crate::spectral::eigh;
use crate::state::FactoredState;
use crate::subsystem::partial_transpose;

/// Solver knobs shared by the geometry routines.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryConfig {
    /// Maximum cone/trace violation accepted for a converged report.
    pub tol_feas: f64,
    /// Agreement required between restarts and against closed forms.
    pub tol_value: f64,
    /// Residual threshold that stops the splitting iterations.
    pub solver_tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
    /// Penalty parameter of the splitting method.
    pub beta: f64,
    pub seesaw_restarts: usize,
    pub seesaw_sweeps: usize,
    /// Stop the alternating projection once iterates move less than this.
    pub projection_tol: f64,
    pub projection_max_iter: usize,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            tol_feas: 1e-7,
            tol_value: 1e-4,
            solver_tol: 1e-10,
            max_iter: 20_000,
            restarts: 5,
            beta: 1.0,
            seesaw_restarts: 64,
            seesaw_sweeps: 200,
            projection_tol: 1e-9,
            projection_max_iter: 20_000,
        }
    }
}

/// Outcome of an optimization run.
#[derive(Debug, Clone)]
pub struct SolverReport {
    pub value: f64,
    /// Largest violation of PSD, PT-PSD or unit trace by the raw iterate.
    pub feasibility_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Exactly feasible point attaining `value` (or the projection itself).
    pub certificate: Option<FactoredState>,
    /// Dual bound on the optimum, when the method provides one.
    pub upper_bound: Option<f64>,
}

/// The cone data every PPT routine needs: factor dimensions and the cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub dims: Vec<usize>,
    pub transpose: Vec<usize>,
}

impl Cut {
    pub fn new(dims: Vec<usize>, transpose: Vec<usize>) -> Result<Self> {
        // FactoredState owns the structural checks.
        let probe = FactoredState::maximally_mixed(dims, transpose)?;
        Ok(Cut::of(&probe))
    }

    /// Bipartite `d_a (x) d_b` with the second factor transposed.
    pub fn bipartite(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(alloc::vec![d_a, d_b], alloc::vec![1])
    }

    pub fn of(state: &FactoredState) -> Self {
        Cut { dims: state.factor_dims().to_vec(), transpose: state.transpose_set().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub(crate) fn pt(&self, m: &ComplexMatrix) -> ComplexMatrix {
        partial_transpose(m, &self.dims, &self.transpose).expect("cut matches operator").hermitian_part()
    }
}

pub(crate) fn psd_projection(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(&HermitianOperator::from_hermitian_part(m))?;
    Ok(eig.reconstruct_with(|l| l.max(0.0)))
}

/// Euclidean projection of `v` onto the probability simplex.
pub(crate) fn simplex_projection(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &s) in sorted.iter().enumerate() {
        cumulative += s;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if s - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Projection onto density matrices (PSD, unit trace).
pub(crate) fn spectraplex_projection(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(&HermitianOperator::from_hermitian_part(m))?;
    Ok(eig.reconstruct_from(&simplex_projection(&eig.values)))
}

/// `max(-lambda_min(m), -lambda_min(m^G), |Tr m - 1|, 0)`.
pub(crate) fn feasibility_residual(m: &ComplexMatrix, cut: &Cut) -> Result<f64> {
    let h = HermitianOperator::from_hermitian_part(m);
    let a = eigh(&h)?.min();
    let b = eigh(&HermitianOperator::from_hermitian_part(&cut.pt(m)))?.min();
    Ok((-a).max(-b).max((h.trace() - 1.0).abs()).max(0.0))
}

/// Normalizes the trace and mixes toward `I/n` by the least amount that
/// makes `m` and `m^G` positive semidefinite. Returns the state and the
/// mixing weight.
pub(crate) fn make_feasible(m: &ComplexMatrix, cut: &Cut) -> Result<(FactoredState, f64)> {
    let n = m.rows();
    let h = HermitianOperator::from_hermitian_part(m);
    let normalized = h.matrix().scale(1.0 / h.trace());
    let lam_a = eigh(&HermitianOperator::from_hermitian_part(&normalized))?.min();
    let lam_b = eigh(&HermitianOperator::from_hermitian_part(&cut.pt(&normalized)))?.min();
    let lam = lam_a.min(lam_b);
    let t = if lam < 0.0 { -lam * n as f64 / (1.0 - lam * n as f64) } else { 0.0 };
    let mixed = &normalized.scale(1.0 - t) + &ComplexMatrix::identity(n).scale(t / n as f64);
    let state = FactoredState::new(HermitianOperator::from_hermitian_part(&mixed), cut.dims.clone(), cut.transpose.clone())?;
    Ok((state, t))
}
