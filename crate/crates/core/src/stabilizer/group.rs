use std::collections::HashMap;

use num_complex::Complex64 as C64;

use super::{StabilizerError, MAX_PHASE_DENOMINATOR, MONOMIAL_TOL};
use crate::fock::FockState;
use crate::linalg::{ExactPhase, MonomialMatrix, TransferMatrix};

/// Result of reading a dense matrix as a monomial: the permutation, the raw
/// phases and, when every phase snapped to a root of unity, the exact form.
#[derive(Clone, Debug)]
pub struct ExtractedMonomial {
    pub perm: Vec<usize>,
    pub phases: Vec<C64>,
    pub exact: Option<MonomialMatrix>,
}

impl ExtractedMonomial {
    pub fn into_exact(self) -> Result<MonomialMatrix, StabilizerError> {
        if let Some(g) = self.exact {
            return Ok(g);
        }
        let (mode, z) = self
            .phases
            .iter()
            .enumerate()
            .find(|(_, z)| ExactPhase::snap(**z, MAX_PHASE_DENOMINATOR, MONOMIAL_TOL).is_none())
            .map(|(i, z)| (i, *z))
            .expect("an unsnapped phase exists");
        Err(StabilizerError::InexactPhase { mode, value: format!("{z}"), max_den: MAX_PHASE_DENOMINATOR })
    }
}

/// Reads `m` as `P_σ·D`: exactly one entry per column above `tol`, forming a
/// permutation, with unit modulus.
#[allow(clippy::needless_range_loop)]
pub fn monomial_from_matrix(m: &TransferMatrix, tol: f64) -> Result<ExtractedMonomial, StabilizerError> {
    let n = m.modes();
    let mut perm = vec![usize::MAX; n];
    let mut phases = vec![C64::new(0.0, 0.0); n];
    let mut row_used = vec![false; n];
    for col in 0..n {
        for row in 0..n {
            let z = m.get(row, col);
            if z.norm() <= tol {
                continue;
            }
            if perm[col] != usize::MAX {
                return Err(StabilizerError::NotMonomial(format!("column {col} has several non-zero entries")));
            }
            if std::mem::replace(&mut row_used[row], true) {
                return Err(StabilizerError::NotMonomial(format!("row {row} has several non-zero entries")));
            }
            perm[col] = row;
            phases[col] = z;
        }
        if perm[col] == usize::MAX {
            return Err(StabilizerError::NotMonomial(format!("column {col} is zero")));
        }
    }
    let exact = phases
        .iter()
        .map(|&z| ExactPhase::snap(z, MAX_PHASE_DENOMINATOR, tol))
        .collect::<Option<Vec<_>>>()
        .map(|ph| MonomialMatrix::new(perm.clone(), ph).expect("columns map to distinct rows"));
    Ok(ExtractedMonomial { perm, phases, exact })
}

/// `B(g)|n⟩ = phase·|σ⁻¹(n)⟩`, returned as `(σ⁻¹(n), phase)`.
pub fn apply_monomial(g: &MonomialMatrix, n: &FockState) -> (FockState, ExactPhase) {
    let occ = n.occupations();
    let mut out = vec![0u32; occ.len()];
    let mut phase = ExactPhase::ONE;
    for (i, (&p, d)) in g.permutation().iter().zip(g.phases()).enumerate() {
        out[p] = occ[i];
        if occ[i] > 0 {
            phase *= d.pow(occ[i] as i64);
        }
    }
    (FockState::new(out), phase)
}

/// A finite group of exact monomial matrices, closed from its generators.
///
/// Element 0 is the identity. `table[e][k]` is the index of
/// `elements[e]·generators[k]`.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    modes: usize,
    generators: Vec<MonomialMatrix>,
    generator_index: Vec<usize>,
    elements: Vec<MonomialMatrix>,
    index: HashMap<MonomialMatrix, usize>,
    table: Vec<Vec<usize>>,
    abelian: bool,
}

impl StabilizerGroup {
    /// Breadth-first closure. `modes` fixes the dimension of the trivial group
    /// when `generators` is empty.
    pub fn closure(modes: usize, generators: Vec<MonomialMatrix>, max_order: usize) -> Result<Self, StabilizerError> {
        for g in &generators {
            if g.modes() != modes {
                return Err(StabilizerError::ModeCountMismatch { expected: modes, found: g.modes() });
            }
        }
        let identity = MonomialMatrix::identity(modes);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut table: Vec<Vec<usize>> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            let mut row = Vec::with_capacity(generators.len());
            for g in &generators {
                let prod = elements[head].compose(g);
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= max_order {
                            return Err(StabilizerError::GroupTooLarge { limit: max_order });
                        }
                        index.insert(prod.clone(), elements.len());
                        elements.push(prod);
                        elements.len() - 1
                    }
                };
                row.push(idx);
            }
            table.push(row);
            head += 1;
        }
        let generator_index = (0..generators.len()).map(|k| table[0][k]).collect();
        let abelian =
            generators.iter().enumerate().all(|(i, a)| generators[i + 1..].iter().all(|b| a.commutes_with(b)));
        Ok(Self { modes, generators, generator_index, elements, index, table, abelian })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[MonomialMatrix] {
        &self.generators
    }

    /// Element index of generator `k`.
    pub fn generator_index(&self, k: usize) -> usize {
        self.generator_index[k]
    }

    pub fn elements(&self) -> &[MonomialMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &MonomialMatrix {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &MonomialMatrix) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &MonomialMatrix) -> bool {
        self.index.contains_key(g)
    }

    /// Index of `elements[e]·generators[k]`.
    pub fn times_generator(&self, e: usize, k: usize) -> usize {
        self.table[e][k]
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn is_diagonal(&self) -> bool {
        self.elements.iter().all(MonomialMatrix::is_diagonal)
    }

    /// Multiplicative order of generator `k`.
    pub fn generator_order(&self, k: usize) -> usize {
        let mut e = self.table[0][k];
        let mut r = 1;
        while e != 0 {
            e = self.table[e][k];
            r += 1;
        }
        r
    }

    pub(super) fn require_abelian(&self) -> Result<(), StabilizerError> {
        if self.abelian {
            Ok(())
        } else {
            Err(StabilizerError::NonAbelianGroup)
        }
    }
}

/// `G' = U·G·U†`. The conjugated group keeps the source indexing, so
/// `correspondence[i]` (the index of `U·g_i·U†`) is `i` and characters
/// transport unchanged: `λ'(U g U†) = λ(g)`.
#[derive(Clone, Debug)]
pub struct Conjugated {
    pub group: StabilizerGroup,
    pub correspondence: Vec<usize>,
}

impl Conjugated {
    pub fn transport(&self, lambda: &super::Character) -> super::Character {
        lambda.clone()
    }
}

pub fn conjugate_group(u: &TransferMatrix, g: &StabilizerGroup) -> Result<Conjugated, StabilizerError> {
    if u.modes() != g.modes() {
        return Err(StabilizerError::ModeCountMismatch { expected: g.modes(), found: u.modes() });
    }
    let conj = |h: &MonomialMatrix| -> Result<MonomialMatrix, StabilizerError> {
        let dense = u.conjugate(&h.to_transfer())?;
        monomial_from_matrix(&dense, MONOMIAL_TOL)
            .map_err(|e| match e {
                StabilizerError::NotMonomial(why) => StabilizerError::NotMonomial(format!("U·g·U† for g = {h}: {why}")),
                other => other,
            })?
            .into_exact()
    };
    let elements = g.elements.iter().map(conj).collect::<Result<Vec<_>, _>>()?;
    let generators = g.generators.iter().map(conj).collect::<Result<Vec<_>, _>>()?;
    // snapping is per entry; make sure it kept the multiplication table intact
    let broken = || StabilizerError::NotMonomial("snapped conjugates no longer form the same group".into());
    let index: HashMap<MonomialMatrix, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    if index.len() != elements.len() {
        return Err(broken());
    }
    for (e, row) in g.table.iter().enumerate() {
        for (k, &target) in row.iter().enumerate() {
            if elements[e].compose(&generators[k]) != elements[target] {
                return Err(broken());
            }
        }
    }
    Ok(Conjugated {
        group: StabilizerGroup {
            modes: g.modes,
            generators,
            generator_index: g.generator_index.clone(),
            elements,
            index,
            table: g.table.clone(),
            abelian: g.abelian,
        },
        correspondence: (0..g.order()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fourier_matrix, pauli_x, pauli_z, tensor};

    fn fs(v: &[u32]) -> FockState {
        FockState::new(v.to_vec())
    }

    #[test]
    fn extraction_examples() {
        let f2 = fourier_matrix(2).unwrap();
        let z = monomial_from_matrix(&f2.conjugate(&pauli_x(2).to_transfer()).unwrap(), MONOMIAL_TOL)
            .unwrap()
            .into_exact()
            .unwrap();
        assert_eq!(z, pauli_z(2));

        let x3 = monomial_from_matrix(&pauli_x(3).to_transfer(), MONOMIAL_TOL).unwrap().into_exact().unwrap();
        assert_eq!(x3.permutation(), &[1, 2, 0]);
        assert!(x3.phases().iter().all(ExactPhase::is_one));

        assert!(matches!(monomial_from_matrix(&f2, MONOMIAL_TOL), Err(StabilizerError::NotMonomial(_))));
    }

    #[test]
    fn irrational_phase_is_flagged() {
        let theta = 1.0f64;
        let d = ndarray::array![
            [C64::new(theta.cos(), theta.sin()), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        ];
        let e = monomial_from_matrix(&TransferMatrix::new(d).unwrap(), MONOMIAL_TOL).unwrap();
        assert!(e.exact.is_none());
        assert!(matches!(e.into_exact(), Err(StabilizerError::InexactPhase { mode: 0, .. })));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(apply_monomial(&pauli_x(2), &fs(&[2, 0])), (fs(&[0, 2]), ExactPhase::ONE));
        assert_eq!(apply_monomial(&pauli_z(2), &fs(&[1, 1])), (fs(&[1, 1]), ExactPhase::MINUS_ONE));
        assert_eq!(apply_monomial(&pauli_z(4), &fs(&[0, 1, 2, 0])), (fs(&[0, 1, 2, 0]), ExactPhase::I));
    }

    #[test]
    fn closure_examples() {
        let g = StabilizerGroup::closure(2, vec![pauli_x(2)], 64).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.is_abelian());

        let pauli = StabilizerGroup::closure(2, vec![pauli_x(2), pauli_z(2)], 64).unwrap();
        assert_eq!(pauli.order(), 8);
        assert!(!pauli.is_abelian());

        for m in 2..=6 {
            let a = MonomialMatrix::tensor(&pauli_z(2), &MonomialMatrix::identity(m));
            let b = MonomialMatrix::tensor(&MonomialMatrix::identity(2), &pauli_x(m));
            let g = StabilizerGroup::closure(2 * m, vec![a, b], 64).unwrap();
            assert_eq!(g.order(), 2 * m);
            assert!(g.is_abelian());
            assert_eq!(g.generator_order(0), 2);
            assert_eq!(g.generator_order(1), m);
        }

        let trivial = StabilizerGroup::closure(3, vec![], 64).unwrap();
        assert_eq!(trivial.order(), 1);
        assert!(matches!(
            StabilizerGroup::closure(5, vec![pauli_x(5)], 4),
            Err(StabilizerError::GroupTooLarge { limit: 4 })
        ));
    }

    #[test]
    fn closure_is_closed_under_products_and_inverses() {
        let g = StabilizerGroup::closure(3, vec![pauli_x(3), pauli_z(3)], 4096).unwrap();
        assert_eq!(g.order(), 27);
        for a in g.elements() {
            assert!(g.contains(&a.inverse()));
            for b in g.elements() {
                assert!(g.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let f2 = fourier_matrix(2).unwrap();
        let gx = StabilizerGroup::closure(2, vec![pauli_x(2)], 64).unwrap();
        let c = conjugate_group(&f2, &gx).unwrap();
        assert_eq!(c.group.generators(), &[pauli_z(2)]);
        assert!(c.group.is_diagonal());

        let id = conjugate_group(&TransferMatrix::identity(2), &gx).unwrap();
        assert_eq!(id.group.elements(), gx.elements());

        let pauli = StabilizerGroup::closure(2, vec![pauli_x(2), pauli_z(2)], 64).unwrap();
        let c = conjugate_group(&f2, &pauli).unwrap();
        assert_eq!(c.group.generators(), &[pauli_z(2), pauli_x(2)]);
        let mut a: Vec<_> = c.group.elements().to_vec();
        let mut b: Vec<_> = pauli.elements().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);

        // F₂·diag(1, i)·F₂† has four entries of modulus 1/√2
        let s = MonomialMatrix::diagonal(vec![ExactPhase::ONE, ExactPhase::I]);
        let g = StabilizerGroup::closure(2, vec![s], 64).unwrap();
        assert!(matches!(conjugate_group(&f2, &g), Err(StabilizerError::NotMonomial(_))));
    }

    #[test]
    fn conjugation_by_fourier_tensor_diagonalizes_copy_shift() {
        for m in 2..=5 {
            let u = tensor(&TransferMatrix::identity(2), &fourier_matrix(m).unwrap());
            let x = MonomialMatrix::tensor(&MonomialMatrix::identity(2), &pauli_x(m));
            let g = StabilizerGroup::closure(2 * m, vec![x], 64).unwrap();
            let c = conjugate_group(&u, &g).unwrap();
            let expected = MonomialMatrix::tensor(&MonomialMatrix::identity(2), &pauli_z(m));
            assert_eq!(c.group.generators()[0], expected);
        }
    }
}
