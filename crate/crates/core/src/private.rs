//! Private states and the PPT mixture of two orthogonal private bits.
//!
//! Factor order is always key A, key B, shield A', shield B', and the PPT cut
//! transposes {B, B'} (factor indices 1 and 3).
//!
//! Worked index example for d_s = 2 (dimension 16): basis index
//! `16 = (a*2 + b)*4 + (a'*2 + b')`, so the key block `|ab><a~b~|` occupies rows
//! `4*(2a+b)..4*(2a+b)+4`. Flipping key qubit A (sigma^x on A) maps block row 0
//! (|00>) to 2 (|10>) and 3 (|11>) to 1 (|01>).

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{argument, domain, Result};
use crate::matrix::{Capacity, ComplexMatrix, HermitianOperator, C64};
use crate::norms::trace_norm;
use crate::spectral::svd;
use crate::state::FactoredState;

/// Factor indices transposed by the AA'|BB' cut.
pub const KEY_CUT: [usize; 2] = [1, 3];

const UNITARY_TOL: f64 = 1e-10;
const X_NORM_TOL: f64 = 1e-10;
/// Entrywise tolerance for matching a state against its reconstructed
/// private-state form.
pub const PRIVATE_FORM_TOL: f64 = 1e-9;

/// Weight p = 1/(sqrt(d_s) + 1) of the second private bit in the mixture.
pub fn mixing_weight(d_s: usize) -> f64 {
    1.0 / ((d_s as f64).sqrt() + 1.0)
}

fn require_shield(d_s: usize) -> Result<()> {
    if d_s < 2 {
        return Err(argument(alloc::format!("shield dimension must be at least 2, got {d_s}")));
    }
    Ok(())
}

/// Fourier matrix `U[j][k] = exp(2 pi i jk / d_s) / sqrt(d_s)`, indices from 0.
pub fn fourier_unitary(d_s: usize) -> Result<ComplexMatrix> {
    require_shield(d_s)?;
    let norm = 1.0 / (d_s as f64).sqrt();
    Ok(ComplexMatrix::from_fn(d_s, d_s, |j, k| {
        let phase = 2.0 * core::f64::consts::PI * ((j * k) % d_s) as f64 / d_s as f64;
        C64::from_polar(norm, phase)
    }))
}

/// `X = d_s^{-3/2} sum_ij u_ij |ij><ji|` on the shield.
pub fn build_x(d_s: usize) -> Result<ComplexMatrix> {
    let u = fourier_unitary(d_s)?;
    let scale = (d_s as f64).powf(-1.5);
    let mut x = ComplexMatrix::zeros(d_s * d_s, d_s * d_s);
    for i in 0..d_s {
        for j in 0..d_s {
            x[(i * d_s + j, j * d_s + i)] = u[(i, j)] * scale;
        }
    }
    Ok(x)
}

/// `Y = d_s^{-1} sum_ij u_ij |ii><jj|`, equal to sqrt(d_s) X^Gamma.
pub fn build_y(d_s: usize) -> Result<ComplexMatrix> {
    let u = fourier_unitary(d_s)?;
    let scale = 1.0 / d_s as f64;
    let mut y = ComplexMatrix::zeros(d_s * d_s, d_s * d_s);
    for i in 0..d_s {
        for j in 0..d_s {
            y[(i * d_s + i, j * d_s + j)] = u[(i, j)] * scale;
        }
    }
    Ok(y)
}

/// A private bit in X-form: shield dimension and an operator with unit trace norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PrivateBitSpec {
    d_s: usize,
    x: ComplexMatrix,
}

impl PrivateBitSpec {
    pub fn new(d_s: usize, x: ComplexMatrix) -> Result<Self> {
        if d_s == 0 || x.rows() != d_s * d_s || !x.is_square() {
            return Err(argument(alloc::format!("X must be {0}x{0}", d_s * d_s)));
        }
        let norm = trace_norm(&x)?;
        if (norm - 1.0).abs() > X_NORM_TOL {
            return Err(argument(alloc::format!("X must have unit trace norm, got {norm}")));
        }
        Ok(PrivateBitSpec { d_s, x })
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }
}

/// The X-form private bit
/// `1/2 [[sqrt(XX^dag), 0, 0, X], [0,0,0,0], [0,0,0,0], [X^dag, 0, 0, sqrt(X^dag X)]]`.
pub fn gamma_of_x(spec: &PrivateBitSpec) -> Result<FactoredState> {
    let x = spec.x();
    let n = x.rows();
    let dec = svd(x)?;
    let mut m = ComplexMatrix::zeros(4 * n, 4 * n);
    m.set_block(0, 0, &dec.left_modulus().scale(0.5));
    m.set_block(0, 3 * n, &x.scale(0.5));
    m.set_block(3 * n, 0, &x.adjoint().scale(0.5));
    m.set_block(3 * n, 3 * n, &dec.right_modulus().scale(0.5));
    // PSD with unit trace by construction.
    FactoredState::structured(HermitianOperator::from_hermitian_part(&m), vec![2, 2, spec.d_s(), spec.d_s()], KEY_CUT.to_vec())
}

/// Basis permutation for sigma^x on key qubit A of a (2, 2, d_s, d_s) state.
fn flip_key_a(n_shield: usize) -> Vec<usize> {
    (0..4 * n_shield)
        .map(|idx| {
            let (key, rest) = (idx / n_shield, idx % n_shield);
            let (a, b) = (key / 2, key % 2);
            ((1 - a) * 2 + b) * n_shield + rest
        })
        .collect()
}

/// The PPT mixture `rho = (1-p) gamma + p gamma'` with its two private bits.
#[derive(Debug, Clone)]
pub struct FlowerState {
    pub d_s: usize,
    pub p: f64,
    pub rho: FactoredState,
    pub gamma: FactoredState,
    pub gamma_prime: FactoredState,
}

/// Builds the mixture for shield dimension `d_s`.
///
/// `gamma = gamma(X)` and `gamma' = (sigma^x_A) gamma(Y^dag) (sigma^x_A)`, which puts
/// `p Y / 2` in the |01><10| block so that `rho` is invariant under the
/// {B, B'} partial transpose.
pub fn construct_flower(d_s: usize, cap: Capacity) -> Result<FlowerState> {
    require_shield(d_s)?;
    cap.checked_product(&[4, d_s, d_s])?;
    let p = mixing_weight(d_s);
    let gamma = gamma_of_x(&PrivateBitSpec::new(d_s, build_x(d_s)?)?)?;
    let y_dag = build_y(d_s)?.adjoint();
    let twisted = gamma_of_x(&PrivateBitSpec::new(d_s, y_dag)?)?;
    let flipped = twisted.matrix().permute_basis(&flip_key_a(d_s * d_s));
    let gamma_prime = FactoredState::structured(HermitianOperator::from_hermitian_part(&flipped), vec![2, 2, d_s, d_s], KEY_CUT.to_vec())?;
    let mixed = &gamma.matrix().scale(1.0 - p) + &gamma_prime.matrix().scale(p);
    let rho = FactoredState::structured(HermitianOperator::from_hermitian_part(&mixed), vec![2, 2, d_s, d_s], KEY_CUT.to_vec())?;
    Ok(FlowerState { d_s, p, rho, gamma, gamma_prime })
}

/// Definition-1 data: key dimension, twisting unitaries and shield state.
/// Key bases are computational; see [`rotate_key_basis`] for others.
#[derive(Debug, Clone)]
pub struct PrivateStateSpec {
    d_k: usize,
    twist_unitaries: Vec<ComplexMatrix>,
    shield_state: FactoredState,
}

impl PrivateStateSpec {
    pub fn new(d_k: usize, twist_unitaries: Vec<ComplexMatrix>, shield_state: FactoredState) -> Result<Self> {
        if d_k < 2 {
            return Err(argument("key dimension must be at least 2"));
        }
        if shield_state.factor_dims().len() != 2 {
            return Err(argument("shield state must have exactly two factors (A', B')"));
        }
        if twist_unitaries.len() != d_k {
            return Err(argument(alloc::format!("need {d_k} twisting unitaries, got {}", twist_unitaries.len())));
        }
        let n = shield_state.dim();
        for (i, u) in twist_unitaries.iter().enumerate() {
            if u.rows() != n || u.cols() != n {
                return Err(argument(alloc::format!("twisting unitary {i} must be {n}x{n}")));
            }
            let err = u.matmul(&u.adjoint()).max_abs_diff(&ComplexMatrix::identity(n));
            if err > UNITARY_TOL {
                return Err(argument(alloc::format!("twisting unitary {i} deviates from unitary by {err:e}")));
            }
        }
        Ok(PrivateStateSpec { d_k, twist_unitaries, shield_state })
    }

    /// Identity twists with a maximally mixed shield on `shield_dims`.
    pub fn untwisted(d_k: usize, shield_dims: [usize; 2]) -> Result<Self> {
        let shield = FactoredState::maximally_mixed(shield_dims.to_vec(), vec![1])?;
        let n = shield.dim();
        Self::new(d_k, vec![ComplexMatrix::identity(n); d_k], shield)
    }

    pub fn d_k(&self) -> usize {
        self.d_k
    }

    pub fn twist_unitaries(&self) -> &[ComplexMatrix] {
        &self.twist_unitaries
    }

    pub fn shield_state(&self) -> &FactoredState {
        &self.shield_state
    }
}

/// `sum_ij (1/d_k) |ii><jj| (x) U_i sigma U_j^dag` on A, B, A', B'.
pub fn general_private_state(spec: &PrivateStateSpec) -> Result<FactoredState> {
    let d_k = spec.d_k;
    let sigma = spec.shield_state.matrix();
    let n = sigma.rows();
    let left: Vec<ComplexMatrix> = spec.twist_unitaries.iter().map(|u| u.matmul(sigma)).collect();
    let mut m = ComplexMatrix::zeros(d_k * d_k * n, d_k * d_k * n);
    for (i, li) in left.iter().enumerate() {
        for j in 0..d_k {
            let block = li.matmul(&spec.twist_unitaries[j].adjoint()).scale(1.0 / d_k as f64);
            m.set_block((i * d_k + i) * n, (j * d_k + j) * n, &block);
        }
    }
    let sd = spec.shield_state.factor_dims();
    FactoredState::structured(HermitianOperator::from_hermitian_part(&m), vec![d_k, d_k, sd[0], sd[1]], KEY_CUT.to_vec())
}

/// Conjugates the key part by `E (x) F`, i.e. maps |i>|j> to |e_i>|f_j>
/// where `e_i`, `f_j` are the columns of `e`, `f`.
pub fn rotate_key_basis(state: &FactoredState, e: &ComplexMatrix, f: &ComplexMatrix) -> Result<FactoredState> {
    let dims = state.factor_dims();
    if dims.len() != 4 || e.rows() != dims[0] || f.rows() != dims[1] || !e.is_square() || !f.is_square() {
        return Err(argument("key basis matrices must match the key factor dimensions"));
    }
    let shield = ComplexMatrix::identity(dims[2] * dims[3]);
    let w = e.kron(f).kron(&shield);
    let m = w.matmul(state.matrix()).matmul(&w.adjoint());
    FactoredState::structured(HermitianOperator::from_hermitian_part(&m), dims.to_vec(), state.transpose_set().to_vec())
}

/// Reconstructed Definition-1 data of a state that passed validation.
#[derive(Debug, Clone)]
pub struct PrivateForm {
    pub d_k: usize,
    pub shield_dims: [usize; 2],
    pub sigma: ComplexMatrix,
    pub twist_unitaries: Vec<ComplexMatrix>,
    pub max_deviation: f64,
}

/// Checks that `state` (factors A, B, A', B') is a private state with the
/// given key bases (computational when `None`), by reconstructing sigma and
/// the twisting unitaries and comparing entrywise.
pub fn validate_private_form(state: &FactoredState, key_bases: Option<(&ComplexMatrix, &ComplexMatrix)>) -> Result<PrivateForm> {
    let dims = state.factor_dims();
    if dims.len() != 4 || dims[0] != dims[1] {
        return Err(argument("private states need factors (d_k, d_k, d_A', d_B')"));
    }
    let rotated;
    let canonical = match key_bases {
        Some((e, f)) => {
            rotated = rotate_key_basis(state, &e.adjoint(), &f.adjoint())?;
            &rotated
        }
        None => state,
    };
    let d_k = dims[0];
    let n = dims[2] * dims[3];
    let m = canonical.matrix();
    let key_block = |i: usize, j: usize| m.block((i * d_k + i) * n, (j * d_k + j) * n, n, n);

    let sigma = key_block(0, 0).scale(d_k as f64);
    let mut unitaries = vec![ComplexMatrix::identity(n)];
    for i in 1..d_k {
        let mi = key_block(i, 0).scale(d_k as f64);
        unitaries.push(svd(&mi)?.polar_unitary());
    }
    let spec_shield = FactoredState::structured(HermitianOperator::from_hermitian_part(&sigma), vec![dims[2], dims[3]], vec![1])?;
    let rebuilt = general_private_state(&PrivateStateSpec { d_k, twist_unitaries: unitaries.clone(), shield_state: spec_shield })?;
    let dev = rebuilt.matrix().max_abs_diff(m);
    if dev > PRIVATE_FORM_TOL {
        return Err(domain(alloc::format!("state is not of private form (entrywise deviation {dev:e})")));
    }
    Ok(PrivateForm { d_k, shield_dims: [dims[2], dims[3]], sigma, twist_unitaries: unitaries, max_deviation: dev })
}

/// Regroups `copies` concatenated (A, B, A', B') blocks into a single
/// (A1..Ak, B1..Bk, A'1..A'k, B'1..B'k) four-factor state.
pub fn regroup_private_tensor(state: &FactoredState, copies: usize) -> Result<FactoredState> {
    if copies == 0 || state.factor_dims().len() != 4 * copies {
        return Err(argument("factor count must be four per copy"));
    }
    let order: Vec<usize> = (0..4).flat_map(|role| (0..copies).map(move |c| 4 * c + role)).collect();
    state.permute_factors(&order)?.merge_factors(&[copies; 4])
}

/// `s^{(x) l}` with factor dims and cut replicated per copy.
pub fn tensor_power(s: &FactoredState, l: usize, cap: Capacity) -> Result<FactoredState> {
    if l == 0 {
        return Err(argument("tensor power needs at least one copy"));
    }
    let dims: Vec<usize> = core::iter::repeat_n(s.dim(), l).collect();
    cap.checked_product(&dims)?;
    let mut out = s.clone();
    for _ in 1..l {
        out = out.tensor(s, cap)?;
    }
    Ok(out)
}

/// `||rho^{(x) l} - gamma^{(x) l}||_1 = 2 (1 - (1-p)^l)` for the orthogonal mixture.
pub fn exact_tensor_gap(p: f64, l: u32) -> f64 {
    2.0 * (1.0 - (1.0 - p).powi(l as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{fidelity, is_ppt, schatten_norm, trace_distance};
    use crate::random::{random_state, random_unitary};
    use crate::spectral::singular_values;
    use crate::subsystem::partial_transpose;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |r, c| if r != c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    #[test]
    fn fourier_d2_is_hadamard() {
        let u = fourier_unitary(2).unwrap();
        let h = 1.0 / 2.0_f64.sqrt();
        let want = ComplexMatrix::from_vec(2, 2, vec![C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)]).unwrap();
        assert!(u.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn fourier_is_unitary_with_flat_moduli() {
        for d in 2..=8 {
            let u = fourier_unitary(d).unwrap();
            assert!(u.matmul(&u.adjoint()).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
        }
        let u = fourier_unitary(5).unwrap();
        assert!(u.as_slice().iter().all(|z| (z.norm() - 1.0 / 5.0_f64.sqrt()).abs() < 1e-15));
        assert!(fourier_unitary(1).is_err());
    }

    #[test]
    fn x_and_y_have_flat_singular_values() {
        for d in 2..=4 {
            let x = build_x(d).unwrap();
            let xx = x.matmul(&x.adjoint());
            let want = ComplexMatrix::identity(d * d).scale((d as f64).powi(-4));
            assert!(xx.max_abs_diff(&want) < 1e-15);
            assert!((schatten_norm(&x, 1.0).unwrap() - 1.0).abs() < 1e-10);
            let sv = singular_values(&build_y(d).unwrap()).unwrap();
            assert!(sv[..d].iter().all(|s| (s - 1.0 / d as f64).abs() < 1e-12));
            assert!(sv[d..].iter().all(|&s| s < 1e-14));
            assert!((sv.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn y_is_scaled_partial_transpose_of_x() {
        for d in [2, 3] {
            let x = build_x(d).unwrap();
            let xg = partial_transpose(&x, &[d, d], &[1]).unwrap().scale((d as f64).sqrt());
            assert!(xg.max_abs_diff(&build_y(d).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn gamma_of_basis_projector_is_pure() {
        // X = |00><00| gives the projector onto (|00>|00> + |11>|00>)/sqrt(2).
        let mut x = ComplexMatrix::zeros(4, 4);
        x[(0, 0)] = C64::new(1.0, 0.0);
        let g = gamma_of_x(&PrivateBitSpec::new(2, x).unwrap()).unwrap();
        let mut v = vec![C64::new(0.0, 0.0); 16];
        v[0] = C64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        v[12] = C64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        assert!(g.matrix().max_abs_diff(&ComplexMatrix::outer(&v, &v)) < 1e-15);
    }

    #[test]
    fn non_normalized_x_is_rejected() {
        assert!(PrivateBitSpec::new(2, ComplexMatrix::identity(4)).is_err());
        assert!(PrivateBitSpec::new(2, ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn gamma_has_unit_trace_and_half_norm_corner() {
        for d in 2..=4 {
            let g = gamma_of_x(&PrivateBitSpec::new(d, build_x(d).unwrap()).unwrap()).unwrap();
            assert!((g.operator().trace() - 1.0).abs() < 1e-12);
            let n = d * d;
            let corner = g.matrix().block(0, 3 * n, n, n);
            assert!((schatten_norm(&corner, 1.0).unwrap() - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn flower_invariants() {
        for d in 2..=8 {
            let f = construct_flower(d, Capacity::default()).unwrap();
            let pt = f.rho.partial_transpose();
            assert!(pt.matrix().max_abs_diff(f.rho.matrix()) < 1e-10, "d_s={d}");
            let mixed = &f.gamma.matrix().scale(1.0 - f.p) + &f.gamma_prime.matrix().scale(f.p);
            assert!(mixed.max_abs_diff(f.rho.matrix()) < 1e-12);
            let overlap = f.gamma.matrix().matmul(f.gamma_prime.matrix()).trace().norm();
            assert!(overlap < 1e-12);
            if d <= 4 {
                assert!(crate::norms::min_eigenvalue(f.rho.operator()).unwrap() >= -1e-10);
            }
        }
    }

    #[test]
    fn flower_d2_numbers() {
        let f = construct_flower(2, Capacity::default()).unwrap();
        assert!((f.p - 0.414_213_562_373_095_1).abs() < 1e-15);
        assert!(is_ppt(&f.rho, 1e-10).unwrap().ppt);
        assert!((trace_distance(&f.rho, &f.gamma).unwrap() - 2.0 / (2.0_f64.sqrt() + 1.0)).abs() < 1e-8);
    }

    #[test]
    fn flower_d4_fidelity() {
        let f = construct_flower(4, Capacity::default()).unwrap();
        assert!((f.p - 1.0 / 3.0).abs() < 1e-15);
        assert!((fidelity(&f.rho, &f.gamma).unwrap() - (2.0_f64 / 3.0).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn flower_respects_capacity() {
        assert!(matches!(construct_flower(8, Capacity(255)), Err(crate::Error::Capacity { .. })));
        assert!(construct_flower(1, Capacity::default()).is_err());
    }

    #[test]
    fn both_private_bits_validate() {
        for d in 2..=4 {
            let f = construct_flower(d, Capacity::default()).unwrap();
            validate_private_form(&f.gamma, None).unwrap();
            let id = ComplexMatrix::identity(2);
            validate_private_form(&f.gamma_prime, Some((&sigma_x(), &id))).unwrap();
            assert!(validate_private_form(&f.gamma_prime, None).is_err());
            assert!(validate_private_form(&f.rho, None).is_err());
        }
    }

    #[test]
    fn untwisted_private_state_is_bell_times_shield() {
        let spec = PrivateStateSpec::untwisted(2, [2, 3]).unwrap();
        let s = general_private_state(&spec).unwrap();
        let h = 1.0 / 2.0_f64.sqrt();
        let z = C64::new(0.0, 0.0);
        let bell = [C64::new(h, 0.0), z, z, C64::new(h, 0.0)];
        let want = ComplexMatrix::outer(&bell, &bell).kron(&ComplexMatrix::identity(6).scale(1.0 / 6.0));
        assert!(s.matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn definition_and_x_form_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let sigma = FactoredState::new(random_state(4, &mut rng), vec![2, 2], vec![1]).unwrap();
            let u0 = random_unitary(4, &mut rng);
            let u1 = random_unitary(4, &mut rng);
            let x = u0.matmul(sigma.matrix()).matmul(&u1.adjoint());
            let spec = PrivateStateSpec::new(2, vec![u0, u1], sigma).unwrap();
            let a = general_private_state(&spec).unwrap();
            let b = gamma_of_x(&PrivateBitSpec::new(2, x).unwrap()).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
            let form = validate_private_form(&a, None).unwrap();
            assert!(form.max_deviation < 1e-12);
        }
    }

    #[test]
    fn non_unitary_twist_is_rejected() {
        let shield = FactoredState::maximally_mixed(vec![2, 2], vec![1]).unwrap();
        let bad = ComplexMatrix::identity(4).scale(1.1);
        assert!(PrivateStateSpec::new(2, vec![ComplexMatrix::identity(4), bad], shield).is_err());
    }

    #[test]
    fn tensor_of_private_states_is_private() {
        let f = construct_flower(2, Capacity::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sigma = FactoredState::new(random_state(6, &mut rng), vec![2, 3], vec![1]).unwrap();
        let other = general_private_state(&PrivateStateSpec::new(2, vec![random_unitary(6, &mut rng), random_unitary(6, &mut rng)], sigma).unwrap()).unwrap();
        let joint = regroup_private_tensor(&f.gamma.tensor(&other, Capacity::default()).unwrap(), 2).unwrap();
        assert_eq!(joint.factor_dims(), &[4, 4, 4, 6]);
        assert_eq!(joint.transpose_set(), &[1, 3]);
        let form = validate_private_form(&joint, None).unwrap();
        assert_eq!(form.d_k, 4);
        assert_eq!(form.shield_dims, [4, 6]);
    }

    #[test]
    fn tensor_power_edge_cases() {
        let f = construct_flower(2, Capacity::default()).unwrap();
        assert_eq!(tensor_power(&f.rho, 1, Capacity::default()).unwrap(), f.rho);
        assert!(tensor_power(&f.rho, 0, Capacity::default()).is_err());
        assert!(matches!(tensor_power(&f.rho, 4, Capacity::default()), Err(crate::Error::Capacity { .. })));
        let sq = tensor_power(&f.rho, 2, Capacity::default()).unwrap();
        assert_eq!(sq.factor_dims(), &[2, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(sq.transpose_set(), &[1, 3, 5, 7]);
    }

    #[test]
    fn exact_gap_values() {
        let p = mixing_weight(2);
        assert!((exact_tensor_gap(p, 1) - 2.0 * p).abs() < 1e-15);
        assert_eq!(exact_tensor_gap(0.0, 5), 0.0);
        // Orthogonal-support expansion at l = 2: 2 (1 - (1-p)^2).
        assert!((exact_tensor_gap(p, 2) - 1.313_708_498_984_760_3).abs() < 1e-12);
    }
}
