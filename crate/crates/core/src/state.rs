use alloc::vec::Vec;

use crate::error::{argument, domain, Result};
use crate::matrix::{Capacity, ComplexMatrix, HermitianOperator};
use crate::spectral::eigh;
use crate::subsystem::{partial_trace, partial_transpose, permute_subsystems, tensor_product};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// A density matrix together with its tensor-factor structure and the set
/// of factors that the partial transpose acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredState {
    state: HermitianOperator,
    factor_dims: Vec<usize>,
    transpose_set: Vec<usize>,
}

impl FactoredState {
    /// Validates trace, positivity and the factor structure.
    pub fn new(state: HermitianOperator, factor_dims: Vec<usize>, transpose_set: Vec<usize>) -> Result<Self> {
        let s = Self::structured(state, factor_dims, transpose_set)?;
        let tr = s.state.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(domain(alloc::format!("state has trace {tr}")));
        }
        let min = eigh(&s.state)?.min();
        if min < -PSD_TOL {
            return Err(domain(alloc::format!("state has negative eigenvalue {min:e}")));
        }
        Ok(s)
    }

    /// Checks only the factor structure; for results of operations that
    /// preserve positivity and trace exactly (tensor products, conjugations).
    pub(crate) fn structured(state: HermitianOperator, factor_dims: Vec<usize>, mut transpose_set: Vec<usize>) -> Result<Self> {
        let total = factor_dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or_else(|| argument("factor dimensions overflow"))?;
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(argument("factor dimensions must be non-empty and positive"));
        }
        if total != state.dim() {
            return Err(argument(alloc::format!("factor dimensions multiply to {total}, state has dimension {}", state.dim())));
        }
        transpose_set.sort_unstable();
        transpose_set.dedup();
        if transpose_set.iter().any(|&k| k >= factor_dims.len()) {
            return Err(argument("transpose set refers to a missing factor"));
        }
        Ok(FactoredState { state, factor_dims, transpose_set })
    }

    /// Maximally mixed state on the given factors.
    pub fn maximally_mixed(factor_dims: Vec<usize>, transpose_set: Vec<usize>) -> Result<Self> {
        let n: usize = factor_dims.iter().product();
        let op = HermitianOperator::new(ComplexMatrix::identity(n).scale(1.0 / n as f64))?;
        Self::structured(op, factor_dims, transpose_set)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn transpose_set(&self) -> &[usize] {
        &self.transpose_set
    }

    pub fn with_transpose_set(&self, transpose_set: Vec<usize>) -> Result<Self> {
        Self::structured(self.state.clone(), self.factor_dims.clone(), transpose_set)
    }

    /// Partial transpose over this state's own cut.
    pub fn partial_transpose(&self) -> HermitianOperator {
        let m = partial_transpose(self.matrix(), &self.factor_dims, &self.transpose_set).expect("validated factor structure");
        HermitianOperator::from_hermitian_part(&m)
    }

    /// Reduced state on the factors not listed in `subset`.
    pub fn reduce(&self, subset: &[usize]) -> Result<HermitianOperator> {
        Ok(HermitianOperator::from_hermitian_part(&partial_trace(self.matrix(), &self.factor_dims, subset)?))
    }

    pub fn tensor(&self, other: &FactoredState, cap: Capacity) -> Result<FactoredState> {
        let m = tensor_product(self.matrix(), other.matrix(), cap)?;
        let mut dims = self.factor_dims.clone();
        dims.extend_from_slice(&other.factor_dims);
        let offset = self.factor_dims.len();
        let mut set = self.transpose_set.clone();
        set.extend(other.transpose_set.iter().map(|k| k + offset));
        Self::structured(HermitianOperator::from_hermitian_part(&m), dims, set)
    }

    /// Reorders factors so that output factor `t` is input factor `order[t]`.
    pub fn permute_factors(&self, order: &[usize]) -> Result<FactoredState> {
        let m = permute_subsystems(self.matrix(), &self.factor_dims, order)?;
        let dims = order.iter().map(|&o| self.factor_dims[o]).collect();
        let set = (0..order.len()).filter(|&t| self.transpose_set.contains(&order[t])).collect();
        Self::structured(HermitianOperator::from_hermitian_part(&m), dims, set)
    }

    /// Fuses runs of consecutive factors; `group_sizes` counts factors per run.
    /// A fused factor is transposed only when all of its parts were.
    pub fn merge_factors(&self, group_sizes: &[usize]) -> Result<FactoredState> {
        if group_sizes.iter().sum::<usize>() != self.factor_dims.len() || group_sizes.contains(&0) {
            return Err(argument("group sizes must partition the factors"));
        }
        let mut dims = Vec::with_capacity(group_sizes.len());
        let mut set = Vec::new();
        let mut start = 0;
        for (g, &size) in group_sizes.iter().enumerate() {
            let members = start..start + size;
            dims.push(self.factor_dims[members.clone()].iter().product());
            let transposed = members.clone().filter(|k| self.transpose_set.contains(k)).count();
            if transposed == size {
                set.push(g);
            } else if transposed != 0 {
                return Err(argument("merged factor mixes transposed and untransposed parts"));
            }
            start += size;
        }
        Self::structured(self.state.clone(), dims, set)
    }
}
