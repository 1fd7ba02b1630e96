use std::collections::BTreeMap;

use ndarray::Array2;
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{build_circuit, classify_outcome, encode_logical, BellError, BellState, DualRailLayout, OutcomeLabel};
use crate::fock::{boson_amplitude, enumerate_basis, FockState};

/// Largest `m` the brute-force oracle runs without `force`.
pub const ORACLE_MAX_COPIES: usize = 3;

/// A rank-one Kraus operator `⟨v|`, stored as the row `v†` over the logical
/// basis `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausOperator {
    pub label: OutcomeLabel,
    pub row: [C64; 4],
}

impl KrausOperator {
    /// `K†K`, i.e. `M_ij = conj(r_i)·r_j`.
    pub fn povm(&self) -> Array2<C64> {
        outer(&self.row)
    }
}

fn outer(row: &[C64; 4]) -> Array2<C64> {
    Array2::from_shape_fn((4, 4), |(i, j)| row[i].conj() * row[j])
}

/// A qubit-level instrument: Kraus list, aggregated class elements and the
/// quality checks that make it usable.
#[derive(Clone, Debug)]
pub struct BqiResult {
    pub m: usize,
    pub kraus: Vec<KrausOperator>,
    pub classes: BTreeMap<OutcomeLabel, Array2<C64>>,
    /// `‖Σ_x M_x − I‖_F`.
    pub completeness_defect: f64,
    /// Largest `max |M_x − v v†|` over classes, `v` the best rank-one factor.
    pub rank_one_residual: f64,
}

impl BqiResult {
    fn from_classes(m: usize, kraus: Vec<KrausOperator>, classes: BTreeMap<OutcomeLabel, Array2<C64>>) -> Self {
        let mut total = Array2::<C64>::zeros((4, 4));
        for e in classes.values() {
            total += e;
        }
        let completeness_defect = total
            .indexed_iter()
            .map(|((i, j), z)| (z - if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let rank_one_residual = classes.values().map(|e| rank_one_factor(e).1).fold(0.0, f64::max);
        Self { m, kraus, classes, completeness_defect, rank_one_residual }
    }

    /// `tr(M_x ρ)` for every class, `ρ = |ψ⟩⟨ψ|`.
    pub fn outcome_probabilities(&self, psi: &[C64; 4]) -> BTreeMap<OutcomeLabel, f64> {
        self.classes.iter().map(|(l, e)| (*l, expectation(e, psi))).collect()
    }
}

fn expectation(e: &Array2<C64>, psi: &[C64; 4]) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            s += psi[i].conj() * e[[i, j]] * psi[j];
        }
    }
    s.re
}

/// `(v, residual)` with `v v†` the rank-one matrix through `e`'s largest
/// diagonal column and `residual = max |e − v v†|`.
pub(super) fn rank_one_factor(e: &Array2<C64>) -> ([C64; 4], f64) {
    let p = (0..4).max_by(|&a, &b| e[[a, a]].re.total_cmp(&e[[b, b]].re)).expect("4×4");
    let d = e[[p, p]].re;
    if d <= 0.0 {
        let residual = e.iter().map(|z| z.norm()).fold(0.0, f64::max);
        return ([C64::new(0.0, 0.0); 4], residual);
    }
    let s = d.sqrt();
    let v = [e[[0, p]] / s, e[[1, p]] / s, e[[2, p]] / s, e[[3, p]] / s];
    let mut residual: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            residual = residual.max((e[[i, j]] - v[i] * v[j].conj()).norm());
        }
    }
    (v, residual)
}

/// The closed-form instrument `{⟨ψ⁺|, ⟨ψ⁻|, √(1−1/m)⟨φ⁺|, K_0, …, K_m}` with
/// `K_k = √C(m,k)·2^{−m/2}·(⟨φ⁻| + ((m−2k)/m)⟨φ⁺|)`.
pub fn kraus_operators(m: usize) -> Result<BqiResult, BellError> {
    DualRailLayout::new(m)?;
    let bra = |b: BellState| b.logical().map(|z| z.conj());
    let phi_p = bra(BellState::PhiPlus);
    let phi_m = bra(BellState::PhiMinus);
    let mf = m as f64;
    let mut kraus = vec![
        KrausOperator { label: OutcomeLabel::PsiPlus, row: bra(BellState::PsiPlus) },
        KrausOperator { label: OutcomeLabel::PsiMinus, row: bra(BellState::PsiMinus) },
        KrausOperator { label: OutcomeLabel::PhiPlus, row: phi_p.map(|z| z * (1.0 - 1.0 / mf).sqrt()) },
    ];
    let scale = 0.5f64.powf(mf / 2.0);
    for k in 0..=m {
        let w = binomial_f64(m, k).sqrt() * scale;
        let tilt = (mf - 2.0 * k as f64) / mf;
        let row = [0, 1, 2, 3].map(|i| (phi_m[i] + phi_p[i] * tilt) * w);
        kraus.push(KrausOperator { label: OutcomeLabel::Failure(k), row });
    }
    let mut classes = BTreeMap::new();
    for k in &kraus {
        classes.insert(k.label, k.povm());
    }
    Ok(BqiResult::from_classes(m, kraus, classes))
}

/// Measurement tomography by brute force: run the full circuit on the four
/// logical inputs with ancillas attached, read each outcome's Kraus row
/// `r_i = ⟨o|B(U)|i⟩`, and sum `r†r` per outcome class.
///
/// One Kraus operator per class is reported, factored from the aggregated
/// element, so the rank-one residual measures how far the class is from a
/// single rank-one operator.
pub fn reconstruct_povm(m: usize, force: bool) -> Result<BqiResult, BellError> {
    let layout = DualRailLayout::new(m)?;
    if m > ORACLE_MAX_COPIES && !force {
        return Err(BellError::OracleGuard { m, limit: ORACLE_MAX_COPIES });
    }
    let u = build_circuit(m)?;
    let basis = enumerate_basis(layout.modes(), layout.total_photons())?;
    let inputs: Vec<FockState> = (0..4)
        .map(|i| {
            let mut e = [C64::new(0.0, 0.0); 4];
            e[i] = C64::new(1.0, 0.0);
            let s = layout.with_ancillas(&encode_logical(&e))?;
            let state = s.iter().next().expect("basis input").0.clone();
            Ok(state)
        })
        .collect::<Result<_, BellError>>()?;

    let rows: Vec<(OutcomeLabel, [C64; 4])> = basis
        .states()
        .par_iter()
        .map(|out| -> Result<Option<(OutcomeLabel, [C64; 4])>, BellError> {
            let mut row = [C64::new(0.0, 0.0); 4];
            for (r, inp) in row.iter_mut().zip(&inputs) {
                *r = boson_amplitude(&u, out, inp)?;
            }
            if row.iter().all(|z| z.norm_sqr() < 1e-30) {
                return Ok(None);
            }
            Ok(Some((classify_outcome(m, out)?, row)))
        })
        .filter_map(|r| r.transpose())
        .collect::<Result<_, _>>()?;

    // sequential in basis order so the sums are reproducible
    let mut classes: BTreeMap<OutcomeLabel, Array2<C64>> = BTreeMap::new();
    for (label, row) in &rows {
        *classes.entry(*label).or_insert_with(|| Array2::zeros((4, 4))) += &outer(row);
    }
    let kraus = classes
        .iter()
        .map(|(label, e)| {
            let (v, _) = rank_one_factor(e);
            KrausOperator { label: *label, row: v.map(|z| z.conj()) }
        })
        .collect();
    Ok(BqiResult::from_classes(m, kraus, classes))
}

/// Probability of naming each Bell state correctly: the weight of classes
/// whose element vanishes on the other three Bell states.
pub fn bell_success(bqi: &BqiResult) -> BTreeMap<BellState, f64> {
    const ZERO: f64 = 1e-10;
    let mut out: BTreeMap<BellState, f64> = BellState::ALL.iter().map(|&b| (b, 0.0)).collect();
    for e in bqi.classes.values() {
        let probs: Vec<f64> = BellState::ALL.iter().map(|b| expectation(e, &b.logical())).collect();
        let nonzero: Vec<usize> = (0..4).filter(|&i| probs[i] > ZERO).collect();
        if let [only] = nonzero[..] {
            *out.get_mut(&BellState::ALL[only]).expect("all Bell states present") += probs[only];
        }
    }
    out
}

/// `P_m` as an exact rational together with its float value.
#[derive(Clone, Debug, PartialEq)]
pub struct SuccessProbability {
    pub m: usize,
    pub exact: BigRational,
    pub value: f64,
    /// Odd `m` uses `(3 − 1/m)/4`: no `K_k` is a pure `⟨φ⁻|` projection.
    pub odd_extension: bool,
}

/// `P_m = (3 − 1/m + C(m, m/2)/2^m)/4` for even `m`, `(3 − 1/m)/4` for odd.
pub fn success_probability(m: usize) -> Result<SuccessProbability, BellError> {
    DualRailLayout::new(m)?;
    let big = |n: usize| BigInt::from(n);
    let mut p = BigRational::from_integer(big(3)) - BigRational::new(big(1), big(m));
    let odd = m % 2 == 1;
    if !odd {
        p += BigRational::new(binomial_big(m, m / 2), BigInt::from(1) << m);
    }
    p /= BigRational::from_integer(big(4));
    let value = rational_to_f64(&p);
    Ok(SuccessProbability { m, exact: p, value, odd_extension: odd })
}

pub(super) fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("bounded rational")
}
