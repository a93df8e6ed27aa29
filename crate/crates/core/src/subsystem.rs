//! Tensor-factor bookkeeping: Kronecker products, partial transposes,
//! partial traces, realignment and subsystem permutations.
//!
//! Factors are ordered most-significant first, so for dims `[d0, d1]` the
//! basis index of `|i>|j>` is `i * d1 + j`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{argument, Result};
use crate::matrix::{Capacity, ComplexMatrix};

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<usize> {
    if !m.is_square() {
        return Err(argument("operator must be square"));
    }
    if dims.contains(&0) {
        return Err(argument("factor dimensions must be positive"));
    }
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or_else(|| argument("factor dimensions overflow"))?;
    if total != m.rows() {
        return Err(argument(alloc::format!("factor dimensions multiply to {total}, operator has dimension {}", m.rows())));
    }
    Ok(total)
}

fn check_subset(dims: &[usize], subset: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; dims.len()];
    for &k in subset {
        if k >= dims.len() {
            return Err(argument(alloc::format!("factor index {k} out of range for {} factors", dims.len())));
        }
        mask[k] = true;
    }
    Ok(mask)
}

/// Kronecker product with a capacity check on the result dimension.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix, cap: Capacity) -> Result<ComplexMatrix> {
    cap.checked_product(&[a.rows(), b.rows()])?;
    cap.checked_product(&[a.cols(), b.cols()])?;
    Ok(a.kron(b))
}

/// Transposes the indices of the factors listed in `subset`.
pub fn partial_transpose(m: &ComplexMatrix, dims: &[usize], subset: &[usize]) -> Result<ComplexMatrix> {
    let n = check_dims(m, dims)?;
    let mask = check_subset(dims, subset)?;
    if !mask.iter().any(|&x| x) {
        return Ok(m.clone());
    }
    let st = strides(dims);
    // Offset contributed by the transposed digits of each basis index.
    let moved: Vec<usize> = (0..n)
        .map(|x| dims.iter().zip(&st).zip(&mask).filter(|(_, &sel)| sel).map(|((&d, &s), _)| (x / s) % d * s).sum())
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let nr = r - moved[r] + moved[c];
            let nc = c - moved[c] + moved[r];
            out[(nr, nc)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Traces out the factors listed in `subset`; the result acts on the
/// remaining factors in their original order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], subset: &[usize]) -> Result<ComplexMatrix> {
    let n = check_dims(m, dims)?;
    let mask = check_subset(dims, subset)?;
    let st = strides(dims);
    let kept: Vec<usize> = (0..dims.len()).filter(|&k| !mask[k]).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let kept_st = strides(&kept_dims);
    let out_dim: usize = kept_dims.iter().product();

    let kept_index: Vec<usize> = (0..n).map(|x| kept.iter().zip(&kept_st).map(|(&k, &s)| (x / st[k]) % dims[k] * s).sum()).collect();
    let traced_key: Vec<usize> = (0..n).map(|x| (0..dims.len()).filter(|&k| mask[k]).map(|k| (x / st[k]) % dims[k] * st[k]).sum()).collect();

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for r in 0..n {
        for c in 0..n {
            if traced_key[r] == traced_key[c] {
                out[(kept_index[r], kept_index[c])] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Realignment of an operator on C^d (x) C^d: `<ik|R(A)|jl> = <ij|A|kl>`.
pub fn realign(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(argument("realignment needs a square operator"));
    }
    let n = m.rows();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(argument(alloc::format!("dimension {n} is not of the form d*d")));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    out[(i * d + k, j * d + l)] = m[(i * d + j, k * d + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Reorders tensor factors: output factor `t` is input factor `order[t]`.
pub fn permute_subsystems(m: &ComplexMatrix, dims: &[usize], order: &[usize]) -> Result<ComplexMatrix> {
    let n = check_dims(m, dims)?;
    let mut seen = vec![false; dims.len()];
    if order.len() != dims.len() {
        return Err(argument("permutation length differs from factor count"));
    }
    for &o in order {
        if o >= dims.len() || seen[o] {
            return Err(argument("factor order is not a permutation"));
        }
        seen[o] = true;
    }
    let st = strides(dims);
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let new_st = strides(&new_dims);
    let perm: Vec<usize> = (0..n).map(|x| order.iter().zip(&new_st).map(|(&o, &s)| (x / st[o]) % dims[o] * s).sum()).collect();
    Ok(m.permute_basis(&perm))
}
