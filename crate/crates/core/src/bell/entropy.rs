use num_complex::Complex64 as C64;
use num_rational::BigRational;

use super::povm::{binomial_f64, rank_one_factor};
use super::{success_probability, BellError, BqiResult};

/// Rank-one tolerance for the relative-entropy formula.
const RANK_ONE_TOL: f64 = 1e-8;

fn shannon_bits(ps: &[f64]) -> f64 {
    ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// Entropy of entanglement across A:B, in bits, for coefficients over
/// `|00⟩, |01⟩, |10⟩, |11⟩` (A is the first qubit).
///
/// Squared Schmidt coefficients are the eigenvalues of `ρ_A = C·C†`, i.e.
/// `(1 ± √(1 − 4|det C|²))/2` for the 2×2 coefficient matrix `C`.
pub fn entanglement_entropy(psi: &[C64; 4]) -> f64 {
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let det = (psi[0] * psi[3] - psi[1] * psi[2]).norm_sqr() / (norm * norm);
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    shannon_bits(&[(1.0 + disc) / 2.0, (1.0 - disc) / 2.0])
}

/// `E(M) = (1/4) Σ_x tr(M_x)·E_s(M_x / tr M_x)`, valid when every element
/// is rank one.
pub fn relative_entropy_of_measurement(bqi: &BqiResult) -> Result<f64, BellError> {
    let mut total = 0.0;
    for (label, e) in &bqi.classes {
        let (v, residual) = rank_one_factor(e);
        if residual > RANK_ONE_TOL {
            return Err(BellError::NotRankOne { label: *label, residual });
        }
        let tr: f64 = (0..4).map(|i| e[[i, i]].re).sum();
        if tr > 0.0 {
            total += tr * entanglement_entropy(&v);
        }
    }
    Ok(total / 4.0)
}

/// `F(x) = Σ_{p ∈ {x, 1−x}} −p²·log₂(p² / (x² + (1−x)²))`.
fn f_weight(x: f64) -> f64 {
    let s = x * x + (1.0 - x) * (1.0 - x);
    [x, 1.0 - x].iter().filter(|&&p| p > 0.0).map(|&p| -p * p * (p * p / s).log2()).sum()
}

/// `E_m = (1/4)[3 − 1/m + Σ_k C(m,k)·2^{1−m}·F(k/m)]`.
pub fn entanglement_measure(m: usize) -> Result<f64, BellError> {
    super::DualRailLayout::new(m)?;
    let mf = m as f64;
    let sum: f64 = (0..=m).map(|k| binomial_f64(m, k) * 0.5f64.powi(m as i32 - 1) * f_weight(k as f64 / mf)).sum();
    Ok((3.0 - 1.0 / mf + sum) / 4.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeRow {
    pub m: usize,
    pub p_exact: BigRational,
    pub p: f64,
    pub e: f64,
    pub odd_extension: bool,
}

/// `(m, P_m, E_m)` for `m = 2..=m_max`.
pub fn scheme_table(m_max: usize) -> Result<Vec<SchemeRow>, BellError> {
    if !(2..=64).contains(&m_max) {
        return Err(BellError::TableRange(m_max));
    }
    (2..=m_max)
        .map(|m| {
            let p = success_probability(m)?;
            Ok(SchemeRow {
                m,
                p_exact: p.exact,
                p: p.value,
                e: entanglement_measure(m)?,
                odd_extension: p.odd_extension,
            })
        })
        .collect()
}
