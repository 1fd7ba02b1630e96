use num_complex::Complex64 as C64;

use super::povm::binomial_f64;
use super::BellError;
use crate::fock::{FockState, StateVector};
use crate::linalg::{fourier_matrix, pauli_x, pauli_z, tensor, MonomialMatrix, TransferMatrix};
use crate::stabilizer::{StabilizerGroup, DEFAULT_MAX_ORDER};

/// Placement of `m` two-mode copies on `2m` modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairLayout {
    /// Copy `j` on modes `2j, 2j+1`.
    CopyMajor,
    /// Copy `j` on modes `j, m+j`, the ordering of `I₂ ⊗ X_m`.
    RailMajor,
}

impl PairLayout {
    pub fn mode(self, m: usize, copy: usize, rail: usize) -> usize {
        match self {
            PairLayout::CopyMajor => 2 * copy + rail,
            PairLayout::RailMajor => rail * m + copy,
        }
    }
}

/// `⊗_j |β^{s_j}⟩`, `|β^±⟩ = (|20⟩ ± |02⟩)/√2`, with `plus[j]` choosing the sign.
pub fn beta_product(plus: &[bool], layout: PairLayout) -> StateVector {
    let m = plus.len();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let terms = (0u64..1 << m).map(|bits| {
        let mut occ = vec![0u32; 2 * m];
        let mut c = C64::new(1.0, 0.0);
        for (j, &p) in plus.iter().enumerate() {
            let rail = ((bits >> j) & 1) as usize;
            occ[layout.mode(m, j, rail)] = 2;
            c *= if rail == 1 && !p { -h } else { h };
        }
        (FockState::new(occ), c)
    });
    StateVector::from_terms(2 * m, terms).expect("2m-photon terms")
}

/// `|D^m_k⟩` in the copy encoding `|0̄⟩ = |20⟩`, `|1̄⟩ = −|02⟩`, copy-major.
pub fn dicke_state(m: usize, k: usize) -> StateVector {
    assert!(k <= m, "Dicke weight {k} exceeds {m} copies");
    let amp = (if k % 2 == 1 { -1.0 } else { 1.0 }) / binomial_f64(m, k).sqrt();
    let terms = (0u64..1 << m).filter(|b| b.count_ones() as usize == k).map(|bits| {
        let occ = (0..2 * m).map(|i| if ((bits >> (i / 2)) & 1) as usize == i % 2 { 2 } else { 0 }).collect();
        (FockState::new(occ), C64::new(amp, 0.0))
    });
    StateVector::from_terms(2 * m, terms).expect("2m-photon terms")
}

/// `P̄_0(θ)`: phase `e^{iθ}` on the `|1̄⟩` component of copy 0 (copy-major).
pub fn apply_first_copy_phase(state: &StateVector, theta: f64) -> StateVector {
    let z = C64::from_polar(1.0, theta);
    state
        .map_basis(state.modes(), |s| (s.clone(), if s.get(1) > 0 { z } else { C64::new(1.0, 0.0) }))
        .expect("relabelling keeps the sector")
}

/// `⟨Z₂⊗I_m, I₂⊗X_m⟩` (or just `⟨I₂⊗X_m⟩` without the parity generator) on
/// `2m` rail-major modes.
pub fn half_scheme_group(m: usize, with_parity: bool) -> Result<StabilizerGroup, BellError> {
    let mut gens = Vec::new();
    if with_parity {
        gens.push(MonomialMatrix::tensor(&pauli_z(2), &MonomialMatrix::identity(m)));
    }
    gens.push(MonomialMatrix::tensor(&MonomialMatrix::identity(2), &pauli_x(m)));
    Ok(StabilizerGroup::closure(2 * m, gens, DEFAULT_MAX_ORDER)?)
}

/// `I₂ ⊗ F_m`, which diagonalizes [`half_scheme_group`].
pub fn half_scheme_circuit(m: usize) -> Result<TransferMatrix, BellError> {
    Ok(tensor(&TransferMatrix::identity(2), &fourier_matrix(m)?))
}
