//! Key-block decomposition of two-qubit-key states and privacy squeezing.
//!
//! A state on (2, 2, d_A', d_B') is written as blocks
//! `A_ijkl = (<ij| (x) I) rho (|kl> (x) I)` acting on the shield. Squeezing
//! twists each key branch by a shield unitary and traces the shield out,
//! leaving a 2-qubit state whose corners are the trace norms of the
//! off-diagonal blocks.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{argument, Error, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator};
use crate::norms::{is_ppt, trace_distance, trace_norm};
use crate::private::{validate_private_form, KEY_CUT};
use crate::random::random_state;
use crate::spectral::svd;
use crate::state::FactoredState;
use crate::subsystem::partial_transpose;

/// PPT tolerance required before the squeeze inequalities are evaluated.
pub const PPT_TOL: f64 = 1e-9;
/// Slack on the Proposition-2 style gap check.
pub const GAP_SLACK: f64 = 1e-9;

/// The sixteen shield operators of a two-qubit-key state.
#[derive(Debug, Clone)]
pub struct KeyBlocks {
    shield_dims: [usize; 2],
    blocks: Vec<ComplexMatrix>,
}

fn key_index(i: usize, j: usize) -> usize {
    2 * i + j
}

pub fn key_blocks(rho: &FactoredState) -> Result<KeyBlocks> {
    let dims = rho.factor_dims();
    if dims.len() != 4 || dims[0] != 2 || dims[1] != 2 {
        return Err(argument("key blocks need factor structure (2, 2, d_A', d_B')"));
    }
    let n = dims[2] * dims[3];
    let m = rho.matrix();
    let blocks = (0..16).map(|idx| m.block((idx / 4) * n, (idx % 4) * n, n, n)).collect();
    Ok(KeyBlocks { shield_dims: [dims[2], dims[3]], blocks })
}

impl KeyBlocks {
    pub fn shield_dims(&self) -> [usize; 2] {
        self.shield_dims
    }

    /// `A_ijkl`.
    pub fn block(&self, i: usize, j: usize, k: usize, l: usize) -> &ComplexMatrix {
        &self.blocks[4 * key_index(i, j) + key_index(k, l)]
    }

    /// Block between key basis states `a = 2i+j` and `b = 2k+l`.
    pub fn pair(&self, a: usize, b: usize) -> &ComplexMatrix {
        &self.blocks[4 * a + b]
    }

    /// `A_ijkl` with the transpose applied on B'.
    pub fn block_transposed(&self, i: usize, j: usize, k: usize, l: usize) -> ComplexMatrix {
        partial_transpose(self.block(i, j, k, l), &self.shield_dims, &[1]).expect("shield dims match block")
    }

    pub fn reassemble(&self) -> ComplexMatrix {
        let n = self.shield_dims[0] * self.shield_dims[1];
        let mut m = ComplexMatrix::zeros(4 * n, 4 * n);
        for (idx, b) in self.blocks.iter().enumerate() {
            m.set_block((idx / 4) * n, (idx % 4) * n, b);
        }
        m
    }
}

/// Result of privacy squeezing.
#[derive(Debug, Clone)]
pub struct SqueezedState {
    /// The squeezed 2-qubit density matrix.
    pub state: ComplexMatrix,
    /// Real 4x4 matrix with `Tr A_ijij` on the diagonal and the trace norms
    /// of `A_0011`, `A_0110` at their corner positions; zero elsewhere.
    pub norm_form: [[f64; 4]; 4],
    /// Shield unitaries `U_00, U_01, U_10, U_11`.
    pub unitaries: [ComplexMatrix; 4],
}

/// Twists branch `|ij>` by `U_ij` and traces out the shield. The unitaries
/// come from the SVDs `A_0011 = W S V^dag` (U_00 = W^dag, U_11 = V^dag) and
/// likewise for `A_0110`, so the corners become singular-value sums.
pub fn privacy_squeeze(rho: &FactoredState) -> Result<SqueezedState> {
    let kb = key_blocks(rho)?;
    let s0011 = svd(kb.block(0, 0, 1, 1))?;
    let s0110 = svd(kb.block(0, 1, 1, 0))?;
    let unitaries = [s0011.u.adjoint(), s0110.u.adjoint(), s0110.v.adjoint(), s0011.v.adjoint()];
    let state = ComplexMatrix::from_fn(4, 4, |a, b| unitaries[a].matmul(kb.pair(a, b)).matmul(&unitaries[b].adjoint()).trace());
    let mut norm_form = [[0.0; 4]; 4];
    for (a, row) in norm_form.iter_mut().enumerate() {
        row[a] = kb.pair(a, a).trace().re;
    }
    let c0 = s0011.singular_values.iter().sum::<f64>();
    let c1 = s0110.singular_values.iter().sum::<f64>();
    norm_form[0][3] = c0;
    norm_form[3][0] = c0;
    norm_form[1][2] = c1;
    norm_form[2][1] = c1;
    Ok(SqueezedState { state, norm_form, unitaries })
}

/// Residuals of the two inequalities that every PPT state satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeResiduals {
    /// `sqrt(||A_0000||_1 ||A_1111||_1) - ||A_0011||_1`.
    pub primal: f64,
    /// `sqrt(||A_0101^G||_1 ||A_1010^G||_1) - ||A_0011^G||_1`, G the transpose on B'.
    pub transposed: f64,
}

/// Both residuals without checking PPT; useful to show the transposed
/// inequality can fail on entangled inputs.
pub fn squeeze_residuals(rho: &FactoredState) -> Result<SqueezeResiduals> {
    let kb = key_blocks(rho)?;
    let n = |m: &ComplexMatrix| trace_norm(m);
    let primal = (n(kb.block(0, 0, 0, 0))? * n(kb.block(1, 1, 1, 1))?).sqrt() - n(kb.block(0, 0, 1, 1))?;
    let transposed = (n(&kb.block_transposed(0, 1, 0, 1))? * n(&kb.block_transposed(1, 0, 1, 0))?).sqrt() - n(&kb.block_transposed(0, 0, 1, 1))?;
    Ok(SqueezeResiduals { primal, transposed })
}

/// The squeeze inequalities for a PPT input; non-PPT input is rejected.
pub fn squeeze_inequalities(rho: &FactoredState) -> Result<SqueezeResiduals> {
    require_key_cut(rho)?;
    let check = is_ppt(rho, PPT_TOL)?;
    if !check.ppt {
        return Err(Error::Precondition(alloc::format!("state is not PPT (minimum eigenvalue of the partial transpose {:e})", check.min_eigenvalue)));
    }
    squeeze_residuals(rho)
}

fn require_key_cut(rho: &FactoredState) -> Result<()> {
    if rho.transpose_set() != KEY_CUT {
        return Err(argument("state must use the {B, B'} cut"));
    }
    Ok(())
}

/// Trace distance between a PPT state and a private state, against `1/(2(d_s+1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCheck {
    pub distance: f64,
    pub lower_bound: f64,
    pub satisfied: bool,
}

pub fn gap_verify(rho: &FactoredState, gamma: &FactoredState) -> Result<GapCheck> {
    let dims = rho.factor_dims();
    if dims != gamma.factor_dims() || dims.len() != 4 || dims[0] != 2 || dims[1] != 2 || dims[2] != dims[3] {
        return Err(argument("gap check needs matching (2, 2, d_s, d_s) structures"));
    }
    require_key_cut(rho)?;
    if !is_ppt(rho, PPT_TOL)?.ppt {
        return Err(argument("first state is not PPT"));
    }
    validate_private_form(gamma, None).map_err(|e| argument(alloc::format!("second state is not private: {e}")))?;
    let distance = trace_distance(rho, gamma)?;
    let lower_bound = crate::bounds::ks_gap_lb(dims[2] as u64)?;
    Ok(GapCheck { distance, lower_bound, satisfied: distance >= lower_bound - GAP_SLACK })
}

/// Numerical check of the two facts used to bound the gap from below: for
/// a PPT rho with `||rho - gamma||_1 = eps < 1`, `||A_0011||_1 >= 1/2 - eps`
/// and `||A_0011^G||_1 <= eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofChain {
    pub epsilon: f64,
    pub corner_norm: f64,
    pub transposed_corner_norm: f64,
    pub corner_holds: bool,
    pub transposed_holds: bool,
}

pub fn proof_chain_check(rho: &FactoredState, gamma: &FactoredState) -> Result<ProofChain> {
    let epsilon = trace_distance(rho, gamma)?;
    if epsilon >= 1.0 {
        return Err(argument(alloc::format!("distance {epsilon} is not below 1")));
    }
    let kb = key_blocks(rho)?;
    let corner_norm = trace_norm(kb.block(0, 0, 1, 1))?;
    let transposed_corner_norm = trace_norm(&kb.block_transposed(0, 0, 1, 1))?;
    Ok(ProofChain {
        epsilon,
        corner_norm,
        transposed_corner_norm,
        corner_holds: corner_norm >= 0.5 - epsilon - GAP_SLACK,
        transposed_holds: transposed_corner_norm <= epsilon + GAP_SLACK,
    })
}

/// `(1-t) rho + t I/n` for the smallest t in {0, 0.1, ..., 1.0} that is PPT.
pub fn mix_to_ppt(rho: &FactoredState, tol: f64) -> Result<(FactoredState, f64)> {
    let n = rho.dim();
    let id = ComplexMatrix::identity(n).scale(1.0 / n as f64);
    for step in 0..=10 {
        let t = step as f64 / 10.0;
        let m = &rho.matrix().scale(1.0 - t) + &id.scale(t);
        let mixed = FactoredState::new(HermitianOperator::from_hermitian_part(&m), rho.factor_dims().to_vec(), rho.transpose_set().to_vec())?;
        if is_ppt(&mixed, tol)?.ppt {
            return Ok((mixed, t));
        }
    }
    Err(Error::Domain("no PPT mixture found".into()))
}

/// A random PPT state on (2, 2, d_s, d_s): a Wishart sample, kept if PPT,
/// otherwise mixed toward the identity by [`mix_to_ppt`].
pub fn random_ppt_state<R: Rng + ?Sized>(d_s: usize, rng: &mut R) -> Result<FactoredState> {
    let n = 4 * d_s * d_s;
    let raw = FactoredState::new(random_state(n, rng), alloc::vec![2, 2, d_s, d_s], KEY_CUT.to_vec())?;
    Ok(mix_to_ppt(&raw, PPT_TOL)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{Capacity, C64};
    use crate::private::{construct_flower, mixing_weight};
    use crate::random::random_unitary;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn double_bell() -> FactoredState {
        // |Phi+>_AB (x) |Phi+>_A'B' in A, B, A', B' order.
        let h = 0.5;
        let mut v = alloc::vec![C64::new(0.0, 0.0); 16];
        for (ab, sh) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            v[4 * ab + sh] = C64::new(h, 0.0);
        }
        FactoredState::new(HermitianOperator::new(ComplexMatrix::outer(&v, &v)).unwrap(), alloc::vec![2, 2, 2, 2], KEY_CUT.to_vec()).unwrap()
    }

    #[test]
    fn blocks_of_private_bit_and_flower() {
        let f = construct_flower(2, Capacity::default()).unwrap();
        let kb = key_blocks(&f.gamma).unwrap();
        let x = crate::private::build_x(2).unwrap();
        assert!(kb.block(0, 0, 1, 1).max_abs_diff(&x.scale(0.5)) < 1e-15);
        assert!((trace_norm(kb.block(0, 0, 1, 1)).unwrap() - 0.5).abs() < 1e-10);

        let kb = key_blocks(&f.rho).unwrap();
        let p = f.p;
        let y = crate::private::build_y(2).unwrap();
        let want = crate::spectral::svd(&y).unwrap().left_modulus().scale(p / 2.0);
        assert!(kb.block(0, 1, 0, 1).max_abs_diff(&want) < 1e-12);
        assert!((kb.block(0, 1, 0, 1).trace().re - p / 2.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_has_no_off_diagonal_blocks() {
        let mm = FactoredState::maximally_mixed(alloc::vec![2, 2, 2, 2], KEY_CUT.to_vec()).unwrap();
        let kb = key_blocks(&mm).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    assert_eq!(kb.pair(a, b).max_abs(), 0.0);
                }
            }
        }
        let r = squeeze_inequalities(&mm).unwrap();
        assert!((r.primal - 0.25).abs() < 1e-14);
    }

    #[test]
    fn wrong_structure_is_rejected() {
        let s = FactoredState::maximally_mixed(alloc::vec![4, 4], alloc::vec![1]).unwrap();
        assert!(key_blocks(&s).is_err());
    }

    #[test]
    fn squeezing_private_bit_gives_bell_state() {
        for d in 2..=4 {
            let f = construct_flower(d, Capacity::default()).unwrap();
            let sq = privacy_squeeze(&f.gamma).unwrap();
            let mut bell = ComplexMatrix::zeros(4, 4);
            for (a, b) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
                bell[(a, b)] = C64::new(0.5, 0.0);
            }
            assert!(sq.state.max_abs_diff(&bell) < 1e-10, "d_s={d}");
        }
    }

    #[test]
    fn squeezing_flower_gives_block_norms() {
        let f = construct_flower(2, Capacity::default()).unwrap();
        let sq = privacy_squeeze(&f.rho).unwrap();
        let p = mixing_weight(2);
        assert!((sq.state[(0, 3)].re - (1.0 - p) / 2.0).abs() < 1e-10);
        assert!((sq.state[(1, 2)].re - p / 2.0).abs() < 1e-10);
        assert!((sq.norm_form[0][3] - (1.0 - p) / 2.0).abs() < 1e-10);
        assert!((sq.norm_form[2][1] - p / 2.0).abs() < 1e-10);
    }

    #[test]
    fn flower_satisfies_inequalities_and_gap() {
        for d in 2..=4 {
            let f = construct_flower(d, Capacity::default()).unwrap();
            let r = squeeze_inequalities(&f.rho).unwrap();
            assert!(r.primal >= -1e-8 && r.transposed >= -1e-8, "{r:?}");
            let g = gap_verify(&f.rho, &f.gamma).unwrap();
            assert!(g.satisfied);
            assert!((g.distance - 2.0 * f.p).abs() < 1e-8);
            assert!((g.lower_bound - 1.0 / (2.0 * (d as f64 + 1.0))).abs() < 1e-15);
        }
    }

    #[test]
    fn entangled_input_breaks_transposed_inequality() {
        let s = double_bell();
        assert!(matches!(squeeze_inequalities(&s), Err(Error::Precondition(_))));
        let r = squeeze_residuals(&s).unwrap();
        assert!(r.transposed < -0.1, "{r:?}");
    }

    #[test]
    fn gap_rejects_bad_pairs() {
        let f = construct_flower(2, Capacity::default()).unwrap();
        assert!(gap_verify(&f.gamma, &f.gamma).is_err());
        assert!(gap_verify(&f.rho, &f.rho).is_err());
    }

    #[test]
    fn mixed_private_bit_respects_gap() {
        let f = construct_flower(2, Capacity::default()).unwrap();
        let mm = ComplexMatrix::identity(16).scale(1.0 / 16.0);
        let half = &f.gamma.matrix().scale(0.5) + &mm.scale(0.5);
        let half = FactoredState::new(HermitianOperator::new(half).unwrap(), alloc::vec![2, 2, 2, 2], KEY_CUT.to_vec()).unwrap();
        let (ppt, t) = mix_to_ppt(&half, PPT_TOL).unwrap();
        assert!(t > 0.0);
        let g = gap_verify(&ppt, &f.gamma).unwrap();
        assert!(g.satisfied && g.distance >= 1.0 / 6.0);
    }

    #[test]
    fn proof_chain_on_flower_states() {
        for d in [2, 4, 9, 16] {
            let f = construct_flower(d, Capacity::default()).unwrap();
            let pc = proof_chain_check(&f.rho, &f.gamma).unwrap();
            assert!(pc.corner_holds && pc.transposed_holds, "d_s={d}: {pc:?}");
            assert!((pc.corner_norm - (1.0 - f.p) / 2.0).abs() < 1e-10);
            assert!((pc.transposed_corner_norm - (1.0 - f.p) / (2.0 * (d as f64).sqrt())).abs() < 1e-10);
        }
        let mm = FactoredState::maximally_mixed(alloc::vec![2, 2, 2, 2], KEY_CUT.to_vec()).unwrap();
        let f = construct_flower(2, Capacity::default()).unwrap();
        assert!(proof_chain_check(&mm, &f.gamma).is_err());
    }

    #[test]
    fn random_ppt_states_satisfy_everything() {
        let f = construct_flower(2, Capacity::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        for _ in 0..100 {
            let s = random_ppt_state(2, &mut rng).unwrap();
            let r = squeeze_inequalities(&s).unwrap();
            assert!(r.primal >= -1e-8 && r.transposed >= -1e-8, "{r:?}");
            assert!(gap_verify(&s, &f.gamma).unwrap().satisfied);
        }
    }

    #[test]
    fn twisted_private_bits_squeeze_to_half_corner() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sigma = FactoredState::new(random_state(4, &mut rng), alloc::vec![2, 2], alloc::vec![1]).unwrap();
        let spec = crate::private::PrivateStateSpec::new(2, alloc::vec![random_unitary(4, &mut rng), random_unitary(4, &mut rng)], sigma).unwrap();
        let g = crate::private::general_private_state(&spec).unwrap();
        let sq = privacy_squeeze(&g).unwrap();
        assert!((sq.state[(0, 3)].norm() - 0.5).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn blocks_round_trip_and_squeeze_keeps_diagonal(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = FactoredState::new(random_state(16, &mut rng), alloc::vec![2, 2, 2, 2], KEY_CUT.to_vec()).unwrap();
            let kb = key_blocks(&s).unwrap();
            prop_assert!(kb.reassemble().max_abs_diff(s.matrix()) <= 1e-13);
            let total: f64 = (0..4).map(|a| kb.pair(a, a).trace().re).sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
            for a in 0..4 {
                for b in 0..4 {
                    prop_assert!(kb.pair(b, a).max_abs_diff(&kb.pair(a, b).adjoint()) < 1e-12);
                }
            }
            let sq = privacy_squeeze(&s).unwrap();
            for a in 0..4 {
                prop_assert!((sq.state[(a, a)].re - kb.pair(a, a).trace().re).abs() < 1e-10);
            }
            let h = HermitianOperator::new(sq.state.clone()).unwrap();
            prop_assert!(crate::norms::min_eigenvalue(&h).unwrap() >= -1e-9);
            prop_assert!((h.trace() - 1.0).abs() < 1e-9);
            prop_assert!((sq.state[(0, 3)].re - trace_norm(kb.block(0, 0, 1, 1)).unwrap()).abs() < 1e-10);
        }
    }
}
