//! Dual-rail Bell-state discrimination with single-photon ancillas.
//!
//! Two dual-rail qubits sit on copy 0 of four rail groups; copies `1..m` of
//! every group carry one ancilla photon each. Beam splitters pair the modes
//! across the two halves for the signal and within a half for the ancillas,
//! then an `F_m` across copies in every rail group turns the copy-shift
//! stabilizer into a photon-count phase.

mod dicke;
mod entropy;
mod povm;

pub use dicke::{
    apply_first_copy_phase, beta_product, dicke_state, half_scheme_circuit, half_scheme_group, PairLayout,
};
pub use entropy::{
    entanglement_entropy, entanglement_measure, scheme_table, relative_entropy_of_measurement, SchemeRow,
};
pub use povm::{
    bell_success, kraus_operators, reconstruct_povm, success_probability, BqiResult, KrausOperator, SuccessProbability,
    ORACLE_MAX_COPIES,
};

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::fock::{FockError, FockState, StateVector};
use crate::linalg::{embed, fourier_matrix, LinalgError, TransferMatrix};
use crate::stabilizer::StabilizerError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BellError {
    #[error("the scheme needs at least 2 copies per rail group, got {0}")]
    TooFewCopies(usize),

    #[error("expected {expected} photons, found {found}")]
    InvalidPhotonCount { expected: usize, found: usize },

    #[error("expected {expected} modes, found {found}")]
    ModeCountMismatch { expected: usize, found: usize },

    #[error("brute-force reconstruction is limited to m <= {limit} without force (requested m = {m})")]
    OracleGuard { m: usize, limit: usize },

    #[error("POVM element for {label} is not rank one (residual {residual:.3e})")]
    NotRankOne { label: OutcomeLabel, residual: f64 },

    #[error("table range must satisfy 2 <= m_max <= 64, got {0}")]
    TableRange(usize),

    #[error("invalid Bell state name {0:?}")]
    UnknownState(String),

    #[error(transparent)]
    Fock(#[from] FockError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
}

/// Mode `(c, j) → c·m + j` for rail group `c ∈ 0..4` and copy `j ∈ 0..m`.
///
/// Groups 0 and 1 are the rails of qubit A, groups 2 and 3 those of qubit B;
/// copy 0 carries the qubits, copies `1..m` the ancillas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualRailLayout {
    m: usize,
}

impl DualRailLayout {
    pub fn new(m: usize) -> Result<Self, BellError> {
        if m < 2 {
            return Err(BellError::TooFewCopies(m));
        }
        Ok(Self { m })
    }

    pub fn copies(&self) -> usize {
        self.m
    }

    pub fn modes(&self) -> usize {
        4 * self.m
    }

    pub fn mode(&self, group: usize, copy: usize) -> usize {
        debug_assert!(group < 4 && copy < self.m);
        group * self.m + copy
    }

    /// `(A rail 0, A rail 1, B rail 0, B rail 1)`.
    pub fn signal_modes(&self) -> [usize; 4] {
        [self.mode(0, 0), self.mode(1, 0), self.mode(2, 0), self.mode(3, 0)]
    }

    pub fn ancilla_photons(&self) -> usize {
        4 * (self.m - 1)
    }

    pub fn total_photons(&self) -> usize {
        2 + self.ancilla_photons()
    }

    /// One photon on every `(c, j)` with `j >= 1`.
    pub fn ancilla_occupation(&self) -> FockState {
        let mut occ = vec![0u32; self.modes()];
        for c in 0..4 {
            for j in 1..self.m {
                occ[self.mode(c, j)] = 1;
            }
        }
        FockState::new(occ)
    }

    /// Places a 4-mode signal state on copy 0 next to the ancillas.
    pub fn with_ancillas(&self, signal: &StateVector) -> Result<StateVector, BellError> {
        if signal.modes() != 4 {
            return Err(BellError::ModeCountMismatch { expected: 4, found: signal.modes() });
        }
        let anc = self.ancilla_occupation();
        let modes = self.signal_modes();
        Ok(signal.map_basis(self.modes(), |s| {
            let mut occ = anc.occupations().to_vec();
            for (k, &md) in modes.iter().enumerate() {
                occ[md] = s.get(k);
            }
            (FockState::new(occ), C64::new(1.0, 0.0))
        })?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PsiPlus, BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus];

    /// Coefficients over the logical basis `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn logical(self) -> [C64; 4] {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        match self {
            BellState::PsiPlus => [z, h, h, z],
            BellState::PsiMinus => [z, h, -h, z],
            BellState::PhiPlus => [h, z, z, h],
            BellState::PhiMinus => [h, z, z, -h],
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
        })
    }
}

impl FromStr for BellState {
    type Err = BellError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "psi+" => Ok(BellState::PsiPlus),
            "psi-" => Ok(BellState::PsiMinus),
            "phi+" => Ok(BellState::PhiPlus),
            "phi-" => Ok(BellState::PhiMinus),
            other => Err(BellError::UnknownState(other.to_string())),
        }
    }
}

/// Dual-rail Fock images of `|00⟩, |01⟩, |10⟩, |11⟩` on
/// `(A rail 0, A rail 1, B rail 0, B rail 1)`; rail 0 is logical 0.
pub fn logical_basis() -> [FockState; 4] {
    [
        FockState::new(vec![1, 0, 1, 0]),
        FockState::new(vec![1, 0, 0, 1]),
        FockState::new(vec![0, 1, 1, 0]),
        FockState::new(vec![0, 1, 0, 1]),
    ]
}

/// A logical two-qubit vector as a 4-mode Fock state.
pub fn encode_logical(coeffs: &[C64; 4]) -> StateVector {
    let terms = logical_basis().into_iter().zip(coeffs.iter().copied()).filter(|(_, c)| c.norm() > 0.0);
    StateVector::from_terms(4, terms).expect("logical basis states share one sector")
}

pub fn bell_state(kind: BellState) -> StateVector {
    encode_logical(&kind.logical())
}

/// `|α⟩ = |11⟩`.
pub fn alpha() -> StateVector {
    StateVector::basis(FockState::new(vec![1, 1]))
}

/// `|β^±⟩ = (|20⟩ ± |02⟩)/√2`.
pub fn beta(plus: bool) -> StateVector {
    let s = if plus { 1.0 } else { -1.0 };
    StateVector::from_terms(
        2,
        [
            (FockState::new(vec![2, 0]), C64::new(FRAC_1_SQRT_2, 0.0)),
            (FockState::new(vec![0, 2]), C64::new(s * FRAC_1_SQRT_2, 0.0)),
        ],
    )
    .expect("two-photon terms")
}

/// Beam splitters: `F₂` on `(A rail r, B rail r)` for the signal, and on
/// `((2h, j), (2h+1, j))` for every ancilla copy `j >= 1` of half `h`.
pub fn layer_one(layout: &DualRailLayout) -> Result<TransferMatrix, BellError> {
    let f2 = fourier_matrix(2)?;
    let mut pairs = vec![[layout.mode(0, 0), layout.mode(2, 0)], [layout.mode(1, 0), layout.mode(3, 0)]];
    for h in 0..2 {
        for j in 1..layout.copies() {
            pairs.push([layout.mode(2 * h, j), layout.mode(2 * h + 1, j)]);
        }
    }
    let mut u = TransferMatrix::identity(layout.modes());
    for p in pairs {
        u = embed(&f2, &p, layout.modes())?.compose(&u)?;
    }
    Ok(u)
}

/// `F_m` across the copies of each rail group.
pub fn layer_two(layout: &DualRailLayout) -> Result<TransferMatrix, BellError> {
    let fm = fourier_matrix(layout.copies())?;
    let mut u = TransferMatrix::identity(layout.modes());
    for c in 0..4 {
        let modes: Vec<usize> = (0..layout.copies()).map(|j| layout.mode(c, j)).collect();
        u = embed(&fm, &modes, layout.modes())?.compose(&u)?;
    }
    Ok(u)
}

pub fn build_circuit(m: usize) -> Result<TransferMatrix, BellError> {
    let layout = DualRailLayout::new(m)?;
    Ok(layer_two(&layout)?.compose(&layer_one(&layout)?)?)
}

/// Outcome classes of the detection pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeLabel {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    /// `t = 0` with `2k` photons on rail 1 of the occupied half.
    Failure(usize),
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeLabel::PsiPlus => f.write_str("psi+"),
            OutcomeLabel::PsiMinus => f.write_str("psi-"),
            OutcomeLabel::PhiPlus => f.write_str("phi+"),
            OutcomeLabel::Failure(k) => write!(f, "K{k}"),
        }
    }
}

/// Reads the stabilizer eigenvalues off a detection pattern.
///
/// Odd counts in both halves mean `ψ⁻`. Otherwise the half holding both
/// signal photons decides: an odd rail-1 count is `Z₂⊗I_m = −1` (`ψ⁺`);
/// else `t = Σ_j j·(n_{2h,j} + n_{2h+1,j}) mod m` is the exponent of the
/// transported `I₂⊗X_m` eigenvalue, `t ≠ 0` meaning `φ⁺`.
pub fn classify_outcome(m: usize, outcome: &FockState) -> Result<OutcomeLabel, BellError> {
    let layout = DualRailLayout::new(m)?;
    if outcome.modes() != layout.modes() {
        return Err(BellError::ModeCountMismatch { expected: layout.modes(), found: outcome.modes() });
    }
    if outcome.photons() != layout.total_photons() {
        return Err(BellError::InvalidPhotonCount { expected: layout.total_photons(), found: outcome.photons() });
    }
    let group_count = |c: usize| -> usize { (0..m).map(|j| outcome.get(layout.mode(c, j)) as usize).sum() };
    let half = [group_count(0) + group_count(1), group_count(2) + group_count(3)];
    if half[0] % 2 == 1 && half[1] % 2 == 1 {
        return Ok(OutcomeLabel::PsiMinus);
    }
    let h = if half[0] >= half[1] { 0 } else { 1 };
    let rail1 = group_count(2 * h + 1);
    if rail1 % 2 == 1 {
        return Ok(OutcomeLabel::PsiPlus);
    }
    let t: usize = (0..m)
        .map(|j| j * (outcome.get(layout.mode(2 * h, j)) + outcome.get(layout.mode(2 * h + 1, j))) as usize)
        .sum::<usize>()
        % m;
    if t != 0 {
        Ok(OutcomeLabel::PhiPlus)
    } else {
        Ok(OutcomeLabel::Failure(rail1 / 2))
    }
}
