use std::collections::BTreeSet;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{apply_monomial, conjugate_group, Character, StabilizerError, StabilizerGroup, DEFAULT_MAX_ORDER};
use crate::fock::{FockBasis, FockState, StateVector};
use crate::linalg::{cyclotomic, ExactPhase, MonomialMatrix, TransferMatrix};

fn check_modes(group: &StabilizerGroup, modes: usize) -> Result<(), StabilizerError> {
    if group.modes() != modes {
        return Err(StabilizerError::ModeCountMismatch { expected: group.modes(), found: modes });
    }
    Ok(())
}

/// `‖ρ_λ|Ψ⟩‖² = (1/|G|) Σ_g λ(g)⁻¹ ⟨Ψ|B(g)|Ψ⟩`, each expectation taken over
/// the support of `state` through [`apply_monomial`].
pub fn projector_norm(
    group: &StabilizerGroup,
    lambda: &Character,
    state: &StateVector,
) -> Result<f64, StabilizerError> {
    group.require_abelian()?;
    check_modes(group, state.modes())?;
    let total: C64 = group
        .elements()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let expect: C64 = state
                .iter()
                .map(|(n, c)| {
                    let (image, phase) = apply_monomial(g, n);
                    state.amplitude(&image).conj() * c * phase.to_complex()
                })
                .sum();
            lambda.value(i).inverse().to_complex() * expect
        })
        .sum();
    Ok(total.re / group.order() as f64)
}

/// Basis states whose character sum `Σ_{g∈G'} λ'(g)⁻¹ Π_i D(g)_ii^{n_i}`
/// vanishes exactly; these outcomes have zero amplitude for every input in
/// the `λ` eigenspace of the unconjugated group.
pub fn suppressed_outcomes(
    group: &StabilizerGroup,
    lambda: &Character,
    basis: &FockBasis,
) -> Result<Vec<FockState>, StabilizerError> {
    if let Some(g) = group.elements().iter().find(|g| !g.is_diagonal()) {
        return Err(StabilizerError::NotDiagonalGroup(g.to_string()));
    }
    check_modes(group, basis.modes())?;
    let out = basis
        .states()
        .par_iter()
        .filter(|n| {
            let terms: Vec<ExactPhase> = group
                .elements()
                .iter()
                .enumerate()
                .map(|(i, g)| lambda.value(i).inverse() * apply_monomial(g, n).1)
                .collect();
            cyclotomic::sum_is_zero(&terms)
        })
        .cloned()
        .collect();
    Ok(out)
}

/// `𝒪_n = {σ_g(n) | g ∈ G}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSet {
    pub representative: FockState,
    pub members: BTreeSet<FockState>,
}

pub fn orbit(group: &StabilizerGroup, n: &FockState) -> OrbitSet {
    let occ = n.occupations();
    let members =
        group.elements().iter().map(|g| FockState::new(g.permutation().iter().map(|&p| occ[p]).collect())).collect();
    OrbitSet { representative: n.clone(), members }
}

/// Outcome statistics of measuring `G` by detecting photons after `U`: one
/// entry per character, in [`Character::all`] order.
///
/// `U·G·U†` must be diagonal so that the eigenvalues are read off detector
/// counts; the probabilities themselves are projector norms of the input.
pub fn measure_stabilizers(
    group: &StabilizerGroup,
    u: &TransferMatrix,
    state: &StateVector,
) -> Result<Vec<(Character, f64)>, StabilizerError> {
    group.require_abelian()?;
    check_modes(group, state.modes())?;
    let conj = conjugate_group(u, group)?;
    if let Some(g) = conj.group.elements().iter().find(|g| !g.is_diagonal()) {
        return Err(StabilizerError::NotDiagonalGroup(g.to_string()));
    }
    Character::all(group)?
        .into_par_iter()
        .map(|lambda| {
            let p = projector_norm(group, &lambda, state)?;
            Ok((lambda, p))
        })
        .collect()
}

/// Both sides of `‖ρ^Σ_1 P_0(θ)|D^m_k⟩‖² = |((m−k) + e^{iθ}k)/m|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitiveProjection {
    pub closed_form: f64,
    pub projected: f64,
}

/// Cyclic `Σ = ⟨(0 1 … m−1)⟩` acting on `m` two-level sites.
pub fn transitive_phase_projection(m: usize, k: usize, theta: f64) -> TransitiveProjection {
    let shift: Vec<usize> = (0..m).map(|j| (j + 1) % m).collect();
    transitive_phase_projection_with(&[shift], m, k, theta).expect("the cyclic shift is a valid site permutation")
}

/// As [`transitive_phase_projection`] for the group generated by the given
/// site permutations. Sites are encoded as single photons in dual rail:
/// site `j` in state `b` puts its photon in mode `2j + b`.
pub fn transitive_phase_projection_with(
    site_perms: &[Vec<usize>],
    m: usize,
    k: usize,
    theta: f64,
) -> Result<TransitiveProjection, StabilizerError> {
    assert!(k <= m, "Dicke weight {k} exceeds {m} sites");
    let gens = site_perms
        .iter()
        .map(|p| {
            if p.len() != m {
                return Err(StabilizerError::ModeCountMismatch { expected: m, found: p.len() });
            }
            let modes: Vec<usize> = (0..2 * m).map(|i| 2 * p[i / 2] + i % 2).collect();
            Ok(MonomialMatrix::from_permutation(modes)?)
        })
        .collect::<Result<Vec<_>, StabilizerError>>()?;
    let group = StabilizerGroup::closure(2 * m, gens, DEFAULT_MAX_ORDER)?;

    let strings: Vec<u64> = (0u64..1 << m).filter(|b| b.count_ones() as usize == k).collect();
    let amp = 1.0 / (strings.len() as f64).sqrt();
    let tilt = C64::from_polar(1.0, theta);
    let terms = strings.iter().map(|&b| {
        let occ: Vec<u32> = (0..2 * m).map(|i| u32::from((b >> (i / 2)) & 1 == (i % 2) as u64)).collect();
        let c = if b & 1 == 1 { tilt * amp } else { C64::new(amp, 0.0) };
        (FockState::new(occ), c)
    });
    let state = StateVector::from_terms(2 * m, terms)?;
    let projected = projector_norm(&group, &Character::trivial(&group), &state)?;

    let (mf, kf) = (m as f64, k as f64);
    let closed_form = ((mf - kf) + tilt * kf).norm_sqr() / (mf * mf);
    Ok(TransitiveProjection { closed_form, projected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::enumerate_basis;
    use crate::linalg::{fourier_matrix, pauli_x, pauli_z, tensor};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn fs(v: &[u32]) -> FockState {
        FockState::new(v.to_vec())
    }

    /// `⊗_j |β^{s_j}⟩` with copy `j` on modes `j` and `m + j`, where
    /// `|β^±⟩ = (|20⟩ ± |02⟩)/√2`.
    fn rail_major_betas(signs: &[f64]) -> StateVector {
        let m = signs.len();
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let mut terms: Vec<(Vec<u32>, C64)> = vec![(vec![0u32; 2 * m], C64::new(1.0, 0.0))];
        for (j, &sign) in signs.iter().enumerate() {
            terms = terms
                .into_iter()
                .flat_map(|(occ, c)| {
                    let mut top = occ.clone();
                    top[j] += 2;
                    let mut bottom = occ;
                    bottom[m + j] += 2;
                    [(top, c * h), (bottom, c * h * sign)]
                })
                .collect();
        }
        StateVector::from_terms(2 * m, terms.into_iter().map(|(o, c)| (FockState::new(o), c))).unwrap()
    }

    fn half_scheme_state(m: usize) -> StateVector {
        let signs: Vec<f64> = (0..m).map(|j| if j == 0 { 1.0 } else { -1.0 }).collect();
        rail_major_betas(&signs)
    }

    #[test]
    fn projector_norm_examples() {
        let g = StabilizerGroup::closure(2, vec![pauli_z(2)], 64).unwrap();
        let s = StateVector::basis(fs(&[1, 1]));
        let minus = Character::from_generators(&g, &[ExactPhase::MINUS_ONE]).unwrap();
        let plus = Character::trivial(&g);
        assert!((projector_norm(&g, &minus, &s).unwrap() - 1.0).abs() < 1e-15);
        assert!(projector_norm(&g, &plus, &s).unwrap().abs() < 1e-15);

        let x = MonomialMatrix::tensor(&MonomialMatrix::identity(2), &pauli_x(2));
        let g = StabilizerGroup::closure(4, vec![x], 64).unwrap();
        let p = projector_norm(&g, &Character::trivial(&g), &half_scheme_state(2)).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn half_scheme_measurement_gives_one_over_m() {
        for m in 2..=6 {
            let x = MonomialMatrix::tensor(&MonomialMatrix::identity(2), &pauli_x(m));
            let g = StabilizerGroup::closure(2 * m, vec![x], 64).unwrap();
            let u = tensor(&TransferMatrix::identity(2), &fourier_matrix(m).unwrap());
            let dist = measure_stabilizers(&g, &u, &half_scheme_state(m)).unwrap();
            assert_eq!(dist.len(), m);
            let trivial = dist.iter().find(|(c, _)| c.is_trivial()).unwrap().1;
            assert!((trivial - 1.0 / m as f64).abs() < 1e-12, "m = {m}");
            let total: f64 = dist.iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn beta_minus_product_is_shift_invariant() {
        let m = 3;
        let state = rail_major_betas(&[-1.0; 3]);
        let x = MonomialMatrix::tensor(&MonomialMatrix::identity(2), &pauli_x(m));
        let g = StabilizerGroup::closure(2 * m, vec![x], 64).unwrap();
        let u = tensor(&TransferMatrix::identity(2), &fourier_matrix(m).unwrap());
        let dist = measure_stabilizers(&g, &u, &state).unwrap();
        for (c, p) in dist {
            let expected = if c.is_trivial() { 1.0 } else { 0.0 };
            assert!((p - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn measurement_requires_diagonalizing_circuit() {
        let g = StabilizerGroup::closure(2, vec![pauli_x(2)], 64).unwrap();
        let s = StateVector::basis(fs(&[1, 1]));
        assert!(matches!(
            measure_stabilizers(&g, &TransferMatrix::identity(2), &s),
            Err(StabilizerError::NotDiagonalGroup(_))
        ));
        let ok = measure_stabilizers(&g, &fourier_matrix(2).unwrap(), &s).unwrap();
        assert!(ok.iter().any(|(c, p)| c.is_trivial() && (p - 1.0).abs() < 1e-12));
    }

    #[test]
    fn suppression_examples() {
        let gz = StabilizerGroup::closure(2, vec![pauli_z(2)], 64).unwrap();
        let basis = enumerate_basis(2, 2).unwrap();
        let sup = suppressed_outcomes(&gz, &Character::trivial(&gz), &basis).unwrap();
        assert_eq!(sup, vec![fs(&[1, 1])]);

        let trivial = StabilizerGroup::closure(3, vec![], 64).unwrap();
        let b3 = enumerate_basis(3, 3).unwrap();
        assert!(suppressed_outcomes(&trivial, &Character::trivial(&trivial), &b3).unwrap().is_empty());

        let gx = StabilizerGroup::closure(2, vec![pauli_x(2)], 64).unwrap();
        assert!(matches!(
            suppressed_outcomes(&gx, &Character::trivial(&gx), &basis),
            Err(StabilizerError::NotDiagonalGroup(_))
        ));
    }

    #[test]
    fn cyclic_suppression_law() {
        for m in 2..=6 {
            let g = StabilizerGroup::closure(m, vec![pauli_z(m)], 64).unwrap();
            let basis = enumerate_basis(m, m).unwrap();
            let sup: BTreeSet<_> =
                suppressed_outcomes(&g, &Character::trivial(&g), &basis).unwrap().into_iter().collect();
            let expected: BTreeSet<_> = basis
                .states()
                .iter()
                .filter(|n| n.occupations().iter().enumerate().map(|(j, &c)| j * c as usize).sum::<usize>() % m != 0)
                .cloned()
                .collect();
            assert_eq!(sup, expected, "m = {m}");
        }
    }

    #[test]
    fn orbit_examples() {
        let gx = StabilizerGroup::closure(2, vec![pauli_x(2)], 64).unwrap();
        assert_eq!(orbit(&gx, &fs(&[2, 0])).members, BTreeSet::from([fs(&[2, 0]), fs(&[0, 2])]));
        let gz = StabilizerGroup::closure(3, vec![pauli_z(3)], 64).unwrap();
        assert_eq!(orbit(&gz, &fs(&[1, 0, 2])).members.len(), 1);
        let g4 = StabilizerGroup::closure(4, vec![pauli_x(4)], 64).unwrap();
        let o = orbit(&g4, &fs(&[1, 0, 2, 0]));
        assert_eq!(
            o.members,
            BTreeSet::from([fs(&[1, 0, 2, 0]), fs(&[0, 1, 0, 2]), fs(&[2, 0, 1, 0]), fs(&[0, 2, 0, 1])])
        );
    }

    #[test]
    fn transitive_projection_examples() {
        for m in 1..=5 {
            for k in 0..=m {
                let t = transitive_phase_projection(m, k, 0.0);
                assert!((t.closed_form - 1.0).abs() < 1e-12 && (t.projected - 1.0).abs() < 1e-12);
                let t = transitive_phase_projection(m, k, PI);
                let expected = ((m as f64 - 2.0 * k as f64) / m as f64).powi(2);
                assert!((t.closed_form - expected).abs() < 1e-12);
                assert!((t.projected - expected).abs() < 1e-10, "m = {m}, k = {k}");
            }
        }
        assert!(transitive_phase_projection(2, 1, PI).projected.abs() < 1e-12);
    }

    #[test]
    fn klein_group_is_also_transitive() {
        let klein = [vec![1, 0, 3, 2], vec![2, 3, 0, 1]];
        for k in 0..=4 {
            let t = transitive_phase_projection_with(&klein, 4, k, PI / 2.0).unwrap();
            assert!((t.closed_form - t.projected).abs() < 1e-10);
        }
    }
}
