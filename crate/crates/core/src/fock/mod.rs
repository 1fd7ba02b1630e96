//! Fixed photon-number Fock spaces and the n-boson representation.
//!
//! `⟨n'|B(S)|n⟩ = Per(S[n', n]) / √(Π n'_i!·n_i!)` where `S[n', n]` repeats
//! row `i` of `S` `n'_i` times and column `j` `n_j` times. Columns index the
//! input state throughout.

mod basis;
mod state;

pub use basis::{
    basis_size, enumerate_basis, max_basis_size, FockBasis, FockState, BASIS_LIMIT_ENV, DEFAULT_MAX_BASIS,
};
pub use state::StateVector;

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{permanent_repeated_rows, LinalgError, TransferMatrix};

/// Amplitudes below this magnitude are dropped from evolved states.
pub const AMPLITUDE_FLOOR: f64 = 1e-15;
/// Probabilities below this are omitted from outcome tables.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("photon numbers differ: {left} vs {right}")]
    PhotonNumberMismatch { left: usize, right: usize },

    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeCountMismatch { expected: usize, found: usize },

    #[error("Fock basis of {size} states exceeds the limit of {limit} (set {env} to raise it)", env = BASIS_LIMIT_ENV)]
    SizeLimit { size: u128, limit: u128 },

    #[error("invalid Fock state: {0}")]
    InvalidState(String),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `S^{(rows, cols)}`: row `i` of `s` repeated `rows[i]` times, column `j`
/// repeated `cols[j]` times.
pub fn expanded_matrix(s: &TransferMatrix, rows: &FockState, cols: &FockState) -> Result<Array2<C64>, FockError> {
    check_pair(s, rows, cols)?;
    let r = rows.mode_list();
    let c = cols.mode_list();
    Ok(Array2::from_shape_fn((r.len(), c.len()), |(i, j)| s.get(r[i], c[j])))
}

/// `⟨out|B(S)|input⟩`.
pub fn boson_amplitude(s: &TransferMatrix, out: &FockState, input: &FockState) -> Result<C64, FockError> {
    check_pair(s, out, input)?;
    Ok(transition_amplitude(s.entries(), out.occupations(), input.occupations())?)
}

fn check_pair(s: &TransferMatrix, a: &FockState, b: &FockState) -> Result<(), FockError> {
    for st in [a, b] {
        if st.modes() != s.modes() {
            return Err(FockError::ModeCountMismatch { expected: s.modes(), found: st.modes() });
        }
    }
    if a.photons() != b.photons() {
        return Err(FockError::PhotonNumberMismatch { left: a.photons(), right: b.photons() });
    }
    Ok(())
}

fn sqrt_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).sqrt()).product()
}

/// Grouping side for the multiplicity-aware permanent: whichever of the two
/// occupation patterns yields fewer count vectors `Π (n_i + 1)`.
fn transition_amplitude(s: ArrayView2<C64>, out: &[u32], input: &[u32]) -> Result<C64, LinalgError> {
    let k: u32 = out.iter().sum();
    if k == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let cost = |occ: &[u32]| occ.iter().map(|&n| n as f64 + 1.0).product::<f64>();
    let norm: f64 = out.iter().chain(input).map(|&n| sqrt_factorial(n)).product();
    let per = if cost(out) <= cost(input) {
        grouped_permanent(out, input, |i, j| s[[i, j]])?
    } else {
        grouped_permanent(input, out, |i, j| s[[j, i]])?
    };
    Ok(per / norm)
}

/// Permanent with `grouped` occupations as repeated rows and `expanded`
/// occupations listed explicitly as columns; `entry(row_mode, col_mode)`.
fn grouped_permanent(
    grouped: &[u32],
    expanded: &[u32],
    entry: impl Fn(usize, usize) -> C64,
) -> Result<C64, LinalgError> {
    let row_modes: Vec<usize> = (0..grouped.len()).filter(|&i| grouped[i] > 0).collect();
    let mult: Vec<usize> = row_modes.iter().map(|&i| grouped[i] as usize).collect();
    let cols: Vec<usize> =
        expanded.iter().enumerate().flat_map(|(j, &n)| std::iter::repeat_n(j, n as usize)).collect();
    let distinct = Array2::from_shape_fn((row_modes.len(), cols.len()), |(r, c)| entry(row_modes[r], cols[c]));
    permanent_repeated_rows(distinct.view(), &mult)
}

/// Dense `B_n(S)` over [`enumerate_basis`] ordering; entry `[out, in]`.
pub fn boson_matrix(s: &TransferMatrix, n: usize) -> Result<Array2<C64>, FockError> {
    let basis = enumerate_basis(s.modes(), n)?;
    let dim = basis.len();
    let entries = s.entries();
    let rows: Vec<Vec<C64>> = basis
        .states()
        .par_iter()
        .map(|out| {
            basis
                .states()
                .iter()
                .map(|inp| transition_amplitude(entries, out.occupations(), inp.occupations()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut b = Array2::zeros((dim, dim));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, z) in row.into_iter().enumerate() {
            b[[i, j]] = z;
        }
    }
    Ok(b)
}

/// `B(S)|state⟩`, one multiplicity-grouped permanent per (input support
/// element, output basis state).
pub fn evolve(state: &StateVector, s: &TransferMatrix) -> Result<StateVector, FockError> {
    if state.modes() != s.modes() {
        return Err(FockError::ModeCountMismatch { expected: s.modes(), found: state.modes() });
    }
    let basis = enumerate_basis(s.modes(), state.photons())?;
    let support: Vec<(&FockState, C64)> = state.iter().map(|(k, &c)| (k, c)).collect();
    let entries = s.entries();
    let amps: Vec<C64> = basis
        .states()
        .par_iter()
        .map(|out| {
            support.iter().try_fold(C64::new(0.0, 0.0), |acc, (inp, c)| {
                Ok::<_, LinalgError>(acc + c * transition_amplitude(entries, out.occupations(), inp.occupations())?)
            })
        })
        .collect::<Result<_, _>>()?;
    let terms = basis.into_states().into_iter().zip(amps).filter(|(_, c)| c.norm() > AMPLITUDE_FLOOR);
    StateVector::from_terms(s.modes(), terms)
}

/// Detection probabilities `|c_n|²` above [`PROBABILITY_FLOOR`], most likely
/// first (ties broken by basis order).
pub fn outcome_distribution(state: &StateVector) -> Vec<(FockState, f64)> {
    let mut out: Vec<(FockState, f64)> =
        state.iter().map(|(k, c)| (k.clone(), c.norm_sqr())).filter(|(_, p)| *p > PROBABILITY_FLOOR).collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}
