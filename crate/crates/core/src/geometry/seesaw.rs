use alloc::vec::Vec;

use rand::Rng;

use crate::error::{argument, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator, C64};
use crate::random::random_unit_vector;
use crate::spectral::eigh;

/// Best product-state value found by the seesaw; a lower bound on h_SEP.
#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub value: f64,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    /// Final value of each restart, in order.
    pub restart_values: Vec<f64>,
    /// Whether every half-sweep was non-decreasing (up to rounding).
    pub monotone: bool,
}

/// `(I (x) <b|) u (I (x) |b>)`.
fn contract_b(u: &ComplexMatrix, d_a: usize, d_b: usize, b: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(d_a, d_a, |i, k| {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..d_b {
            for l in 0..d_b {
                s += b[j].conj() * u[(i * d_b + j, k * d_b + l)] * b[l];
            }
        }
        s
    })
}

/// `(<a| (x) I) u (|a> (x) I)`.
fn contract_a(u: &ComplexMatrix, d_a: usize, d_b: usize, a: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(d_b, d_b, |j, l| {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..d_a {
            for k in 0..d_a {
                s += a[i].conj() * u[(i * d_b + j, k * d_b + l)] * a[k];
            }
        }
        s
    })
}

fn top(m: &ComplexMatrix) -> Result<(f64, Vec<C64>)> {
    let eig = eigh(&HermitianOperator::from_hermitian_part(m))?;
    Ok((eig.max(), eig.vector(eig.values.len() - 1)))
}

/// Alternating maximization of `<a (x) b| u |a (x) b>`: fix b and take the
/// top eigenvector of the contracted operator for a, then swap roles.
/// Each restart begins from a random b and runs at most `sweeps` sweeps.
pub fn h_sep_seesaw<R: Rng + ?Sized>(u: &HermitianOperator, d_a: usize, d_b: usize, restarts: usize, sweeps: usize, rng: &mut R) -> Result<SeesawResult> {
    if d_a * d_b != u.dim() || d_a == 0 || d_b == 0 {
        return Err(argument(alloc::format!("{d_a} x {d_b} does not match operator dimension {}", u.dim())));
    }
    if restarts == 0 || sweeps == 0 {
        return Err(argument("seesaw needs at least one restart and one sweep"));
    }
    let m = u.matrix();
    let scale = m.max_abs().max(1.0);
    let mut best = SeesawResult { value: f64::NEG_INFINITY, a: Vec::new(), b: Vec::new(), restart_values: Vec::with_capacity(restarts), monotone: true };
    for _ in 0..restarts {
        let mut b = random_unit_vector(d_b, rng);
        let mut a = Vec::new();
        let mut value = f64::NEG_INFINITY;
        for _ in 0..sweeps {
            let (va, new_a) = top(&contract_b(m, d_a, d_b, &b))?;
            let (vb, new_b) = top(&contract_a(m, d_a, d_b, &new_a))?;
            if va < value - 1e-12 * scale || vb < va - 1e-12 * scale {
                best.monotone = false;
            }
            let improvement = vb - value;
            a = new_a;
            b = new_b;
            value = vb;
            if improvement.abs() < 1e-14 * scale {
                break;
            }
        }
        best.restart_values.push(value);
        if value > best.value {
            best.value = value;
            best.a = a;
            best.b = b.clone();
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{h_ppt, sample_direction, Cut, GeometryConfig};
    use crate::rng::sample_rng;

    #[test]
    fn diagonal_direction_finds_largest_entry() {
        let diag = [0.3, -0.1, 0.7, -0.2, 0.05, -0.75];
        let u = HermitianOperator::new(ComplexMatrix::from_real_diagonal(&diag)).unwrap();
        let r = h_sep_seesaw(&u, 2, 3, 16, 100, &mut sample_rng(1, 0)).unwrap();
        assert!((r.value - 0.7).abs() < 1e-12);
        assert!(r.monotone);
    }

    #[test]
    fn matches_product_grid_on_two_qubits() {
        let mut rng = sample_rng(2, 0);
        let u = sample_direction(4, &mut rng).unwrap();
        let r = h_sep_seesaw(u.operator(), 2, 2, 64, 200, &mut rng).unwrap();
        // Bloch-sphere grid over both qubits; one global phase per factor
        // is irrelevant.
        let steps = 48;
        let mut grid = Vec::new();
        for ti in 0..=steps {
            let theta = core::f64::consts::PI * ti as f64 / steps as f64;
            for pi in 0..(2 * steps) {
                let phi = core::f64::consts::PI * pi as f64 / steps as f64;
                grid.push([C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]);
            }
        }
        let mut brute = f64::NEG_INFINITY;
        for a in &grid {
            for b in &grid {
                let v: Vec<C64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
                brute = brute.max(u.matrix().expectation(&v).re);
            }
        }
        assert!(r.value >= brute - 1e-12);
        assert!(r.value - brute < 1e-3, "{} vs {brute}", r.value);
    }

    #[test]
    fn nesting_on_random_directions() {
        let cfg = GeometryConfig::default();
        let mut rng = sample_rng(3, 0);
        for d in [2, 3] {
            let cut = Cut::bipartite(d, d).unwrap();
            for _ in 0..20 {
                let u = sample_direction(d * d, &mut rng).unwrap();
                let sep = h_sep_seesaw(u.operator(), d, d, 16, 100, &mut rng).unwrap();
                assert!(sep.monotone);
                let ppt = h_ppt(&u, &cut, &cfg).unwrap();
                assert!(sep.value <= ppt.value + 1e-6);
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let u = HermitianOperator::identity(4);
        assert!(h_sep_seesaw(&u, 2, 3, 1, 1, &mut sample_rng(0, 0)).is_err());
        assert!(h_sep_seesaw(&u, 2, 2, 0, 1, &mut sample_rng(0, 0)).is_err());
    }
}
