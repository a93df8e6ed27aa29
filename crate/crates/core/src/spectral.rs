//! Spectral routines: cyclic Jacobi for Hermitian matrices and one-sided
//! (Hestenes) Jacobi for the singular value decomposition.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::{Float, Zero};

use crate::error::{argument, Error, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator, C64};

/// Off-diagonal Frobenius mass relative to ||A||_2 at which Jacobi stops.
pub const JACOBI_REL_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 60;

/// Eigenvalues whose modulus falls below this fraction of the spectral
/// radius are treated as exact zeros by the matrix functions below.
pub const RELATIVE_ZERO: f64 = 1e-14;

/// Eigen-decomposition `A = V diag(values) V^dagger`, values ascending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
    pub sweeps: usize,
}

impl Eigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// V diag(f(lambda)) V^dagger.
    pub fn reconstruct_with(&self, f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let weights: Vec<f64> = self.values.iter().copied().map(f).collect();
        self.reconstruct_from(&weights)
    }

    /// V diag(weights) V^dagger.
    pub fn reconstruct_from(&self, weights: &[f64]) -> ComplexMatrix {
        let n = self.values.len();
        assert_eq!(weights.len(), n, "one weight per eigenvalue");
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            for r in 0..n {
                let vr = v[r] * w;
                if vr.is_zero() {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += vr * v[c].conj();
                }
            }
        }
        out
    }

    fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Eigenvalues with rounding-level entries flushed to zero.
    pub fn flushed_values(&self) -> Vec<f64> {
        let cut = RELATIVE_ZERO * self.spectral_radius().max(1.0);
        self.values.iter().map(|&v| if v.abs() < cut { 0.0 } else { v }).collect()
    }
}

/// Hermitian eigensolver. Fails with [`Error::NoConvergence`] when the sweep
/// budget runs out.
pub fn eigh(a: &HermitianOperator) -> Result<Eigen> {
    jacobi_eigh(a.matrix())
}

pub(crate) fn jacobi_eigh(a: &ComplexMatrix) -> Result<Eigen> {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let total = m.frobenius_norm();
    let threshold = JACOBI_REL_TOL * total;
    let mut sweeps = 0;

    loop {
        let off = off_diagonal_norm(&m);
        if off <= threshold || total == 0.0 {
            break;
        }
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_diagonal: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Skip rotations that cannot change the diagonal in floating point.
                if sweeps > 3 && mag < 1e-18 * (app.abs() + aqq.abs()) {
                    m[(p, q)] = C64::zero();
                    m[(q, p)] = C64::zero();
                    continue;
                }
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let g00 = C64::new(c, 0.0);
                let g01 = C64::new(s, 0.0);
                let g10 = -phase.conj() * s;
                let g11 = phase.conj() * c;
                rotate_columns(&mut m, p, q, g00, g01, g10, g11);
                rotate_rows_adjoint(&mut m, p, q, g00, g01, g10, g11);
                rotate_columns(&mut v, p, q, g00, g01, g10, g11);
                m[(p, q)] = C64::zero();
                m[(q, p)] = C64::zero();
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap_or(core::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors, sweeps })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += m[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

// A <- A G on columns p, q.
fn rotate_columns(a: &mut ComplexMatrix, p: usize, q: usize, g00: C64, g01: C64, g10: C64, g11: C64) {
    let n = a.cols();
    let data = a.as_mut_slice();
    for row in data.chunks_exact_mut(n) {
        let x = row[p];
        let y = row[q];
        row[p] = x * g00 + y * g10;
        row[q] = x * g01 + y * g11;
    }
}

// A <- G^dagger A on rows p, q.
fn rotate_rows_adjoint(a: &mut ComplexMatrix, p: usize, q: usize, g00: C64, g01: C64, g10: C64, g11: C64) {
    let n = a.cols();
    let (c00, c01, c10, c11) = (g00.conj(), g01.conj(), g10.conj(), g11.conj());
    let data = a.as_mut_slice();
    let (lo, hi) = data.split_at_mut(q * n);
    let row_p = &mut lo[p * n..(p + 1) * n];
    let row_q = &mut hi[..n];
    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c00 * xp + c10 * yq;
        *y = c01 * xp + c11 * yq;
    }
}

/// Singular value decomposition `A = U diag(s) V^dagger` of a square matrix,
/// singular values descending. Both factors are unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    /// Polar unitary U V^dagger.
    pub fn polar_unitary(&self) -> ComplexMatrix {
        self.u.matmul(&self.v.adjoint())
    }

    /// sqrt(A A^dagger) = U diag(s) U^dagger.
    pub fn left_modulus(&self) -> ComplexMatrix {
        weighted_projector_sum(&self.u, &self.singular_values)
    }

    /// sqrt(A^dagger A) = V diag(s) V^dagger.
    pub fn right_modulus(&self) -> ComplexMatrix {
        weighted_projector_sum(&self.v, &self.singular_values)
    }
}

fn weighted_projector_sum(basis: &ComplexMatrix, weights: &[f64]) -> ComplexMatrix {
    let n = basis.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for r in 0..n {
            let br = basis[(r, k)] * w;
            for c in 0..n {
                out[(r, c)] += br * basis[(c, k)].conj();
            }
        }
    }
    out
}

const SVD_MAX_SWEEPS: usize = 80;

/// Runs one-sided Jacobi on the columns of `a`; returns the rotated columns
/// (orthogonal, norms = singular values) and the accumulated right factor.
fn hestenes(a: &ComplexMatrix, track_v: bool) -> Result<(ComplexMatrix, Option<ComplexMatrix>)> {
    let m = a.rows();
    let n = a.cols();
    // Column-major copy so column rotations touch contiguous memory.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| a.column(c)).collect();
    let mut v: Option<Vec<Vec<C64>>> = track_v.then(|| (0..n).map(|c| (0..n).map(|r| if r == c { C64::new(1.0, 0.0) } else { C64::zero() }).collect()).collect());
    let eps = f64::EPSILON;

    let mut sweep = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 { 1.0 / (zeta + (1.0 + zeta * zeta).sqrt()) } else { -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph = phase.conj();
                let (cp, cq) = split_pair(&mut cols, p, q);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (xv, yv) = (*x, ph * *y);
                    *x = xv * c - yv * s;
                    *y = xv * s + yv * c;
                }
                if let Some(vc) = v.as_mut() {
                    let (vp, vq) = split_pair(vc, p, q);
                    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                        let (xv, yv) = (*x, ph * *y);
                        *x = xv * c - yv * s;
                        *y = xv * s + yv * c;
                    }
                }
            }
        }
        sweep += 1;
        if !rotated {
            break;
        }
        if sweep >= SVD_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: sweep, off_diagonal: f64::NAN });
        }
    }

    let w = ComplexMatrix::from_fn(m, n, |r, c| cols[c][r]);
    let vm = v.map(|vc| ComplexMatrix::from_fn(n, n, |r, c| vc[c][r]));
    Ok((w, vm))
}

fn split_pair<T>(v: &mut [Vec<T>], p: usize, q: usize) -> (&mut Vec<T>, &mut Vec<T>) {
    debug_assert!(p < q);
    let (lo, hi) = v.split_at_mut(q);
    (&mut lo[p], &mut hi[0])
}

fn column_norms(w: &ComplexMatrix) -> Vec<f64> {
    (0..w.cols()).map(|c| (0..w.rows()).map(|r| w[(r, c)].norm_sqr()).sum::<f64>().sqrt()).collect()
}

/// Singular values of any matrix, descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    // Work with the orientation that has fewer columns.
    let (w, _) = if a.cols() <= a.rows() { hestenes(a, false)? } else { hestenes(&a.adjoint(), false)? };
    let mut s = column_norms(&w);
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
    Ok(s)
}

/// Full SVD of a square matrix.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if !a.is_square() {
        return Err(argument("svd requires a square matrix"));
    }
    let n = a.rows();
    let (w, v) = hestenes(a, true)?;
    let v = v.expect("right factor tracked");
    let norms = column_norms(&w);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(core::cmp::Ordering::Equal));

    let scale = norms.iter().fold(0.0_f64, |m, &x| m.max(x));
    let cut = scale * (n as f64) * f64::EPSILON;
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut missing = 0;
    for &k in &order {
        if norms[k] > cut && norms[k] > 0.0 {
            u_cols.push((0..n).map(|r| w[(r, k)] / norms[k]).collect());
            s.push(norms[k]);
        } else {
            s.push(0.0);
            missing += 1;
        }
    }
    complete_orthonormal(&mut u_cols, n, missing);
    let u = ComplexMatrix::from_fn(n, n, |r, c| u_cols[c][r]);
    let v = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Svd { u, singular_values: s, v })
}

/// Extends an orthonormal set by `count` vectors via Gram-Schmidt against the
/// standard basis.
fn complete_orthonormal(cols: &mut Vec<Vec<C64>>, n: usize, count: usize) {
    let mut added = 0;
    let mut e = 0;
    while added < count && e < n {
        let mut cand = vec![C64::zero(); n];
        cand[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in cols.iter() {
                let proj: C64 = b.iter().zip(&cand).map(|(x, y)| x.conj() * y).sum();
                for (c, x) in cand.iter_mut().zip(b) {
                    *c -= proj * x;
                }
            }
        }
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(cand.into_iter().map(|z| z / norm).collect());
            added += 1;
        }
        e += 1;
    }
}

/// Principal square root of a PSD operator. Eigenvalues below `-neg_tol`
/// are a domain error; rounding-level ones are treated as zero.
pub fn psd_sqrt(a: &HermitianOperator, neg_tol: f64) -> Result<ComplexMatrix> {
    let eig = eigh(a)?;
    if eig.min() < -neg_tol {
        return Err(crate::error::domain(alloc::format!("operator is not PSD: eigenvalue {:e}", eig.min())));
    }
    let roots: Vec<f64> = eig.flushed_values().iter().map(|v| v.max(0.0).sqrt()).collect();
    Ok(eig.reconstruct_from(&roots))
}

/// Projection onto the PSD cone in Schatten-2 geometry (negative eigenvalues clipped).
pub fn psd_part(a: &HermitianOperator) -> Result<ComplexMatrix> {
    let eig = eigh(a)?;
    Ok(eig.reconstruct_with(|l| l.max(0.0)))
}
