use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{argument, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator, C64};
use crate::norms::hermitian_schatten_norm;

/// A point of the unit Hilbert-Schmidt sphere in the traceless Hermitian
/// operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    u: HermitianOperator,
}

impl Direction {
    /// Takes the traceless part of `m` and normalizes it.
    pub fn from_operator(m: &HermitianOperator) -> Result<Self> {
        let n = m.dim();
        let shift = m.trace() / n as f64;
        let traceless = m.matrix() - &ComplexMatrix::identity(n).scale(shift);
        let norm = traceless.frobenius_norm();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(argument("direction has no traceless part"));
        }
        Ok(Direction { u: HermitianOperator::from_hermitian_part(&traceless.scale(1.0 / norm)) })
    }

    pub fn n(&self) -> usize {
        self.u.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.u
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.u.matrix()
    }

    /// Operator norm `||u||_inf`.
    pub fn opnorm(&self) -> Result<f64> {
        hermitian_schatten_norm(&self.u, f64::INFINITY)
    }

    /// `<rho, u>` in the Hilbert-Schmidt pairing.
    pub fn pair(&self, rho: &ComplexMatrix) -> f64 {
        rho.hs_inner(self.u.matrix())
    }
}

/// GUE-style draw: real Gaussian diagonal, complex Gaussian off-diagonal,
/// then trace removed and HS-normalized. Uniform on the traceless sphere.
pub fn sample_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Direction> {
    if n < 2 {
        return Err(argument("directions need n >= 2"));
    }
    let mut m = ComplexMatrix::zeros(n, n);
    let off = 0.5f64.sqrt();
    for r in 0..n {
        let g: f64 = StandardNormal.sample(rng);
        m[(r, r)] = C64::new(g, 0.0);
        for c in r + 1..n {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            let z = C64::new(re * off, im * off);
            m[(r, c)] = z;
            m[(c, r)] = z.conj();
        }
    }
    Direction::from_operator(&HermitianOperator::from_hermitian_part(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sample_rng;

    #[test]
    fn directions_are_traceless_and_unit() {
        let mut rng = sample_rng(1, 0);
        for n in [2, 3, 4, 9, 16] {
            let u = sample_direction(n, &mut rng).unwrap();
            assert!(u.matrix().trace().norm() < 1e-12);
            assert!((u.matrix().frobenius_norm() - 1.0).abs() < 1e-12);
            assert!(u.matrix().hermitian_deviation() == 0.0);
        }
        assert!(sample_direction(1, &mut rng).is_err());
        assert!(Direction::from_operator(&HermitianOperator::identity(3)).is_err());
    }

    #[test]
    fn mean_direction_vanishes() {
        let mut rng = sample_rng(2, 0);
        let draws = 10_000;
        let mut sum = ComplexMatrix::zeros(3, 3);
        for _ in 0..draws {
            sum += sample_direction(3, &mut rng).unwrap().matrix();
        }
        let mean = sum.scale(1.0 / draws as f64);
        assert!(mean.max_abs() <= 4.0 / (draws as f64).sqrt());
    }

    #[test]
    fn opnorm_near_semicircle_edge() {
        let mut rng = sample_rng(3, 0);
        let samples = 2000;
        let total: f64 = (0..samples).map(|_| sample_direction(16, &mut rng).unwrap().opnorm().unwrap()).sum();
        let mean = total / samples as f64;
        assert!((0.38..=0.62).contains(&mean), "{mean}");
    }
}
