//! Random matrices and states used by the Monte-Carlo experiments and the
//! property tests.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::{ComplexMatrix, HermitianOperator, C64};

pub fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| standard_complex(rng))
}

/// GUE-distributed Hermitian matrix: (G + G^dagger)/2 with G Ginibre.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    HermitianOperator::from_hermitian_part(&ginibre(n, n, rng))
}

/// Density matrix G G^dagger / Tr with G an n x k Ginibre matrix.
pub fn random_state_with_rank<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> HermitianOperator {
    let g = ginibre(n, k, rng);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    HermitianOperator::from_hermitian_part(&w.scale(1.0 / tr))
}

/// Full-rank Wishart density matrix.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    random_state_with_rank(n, n, rng)
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| standard_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v = g.column(c);
        for _ in 0..2 {
            for b in &cols {
                let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

/// Nonnegative unit vector with `d` entries, in descending order.
pub fn random_schmidt<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| standard_complex(rng).norm()).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut a: Vec<f64> = raw.into_iter().map(|x| x / norm).collect();
    a.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
    a
}
