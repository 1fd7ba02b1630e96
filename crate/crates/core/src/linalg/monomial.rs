use std::fmt;

use super::{ExactPhase, LinalgError, TransferMatrix};

/// Unitary monomial matrix `g = P_σ·D` with exact unit phases.
///
/// `perm[i] = σ(i)` is the output mode that input mode `i` is routed to and
/// `phases[i] = D_ii` is applied before routing, so `g[σ(i)][i] = D_ii`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialMatrix {
    perm: Vec<usize>,
    phases: Vec<ExactPhase>,
}

impl MonomialMatrix {
    pub fn new(perm: Vec<usize>, phases: Vec<ExactPhase>) -> Result<Self, LinalgError> {
        if perm.len() != phases.len() {
            return Err(LinalgError::DimensionMismatch { expected: perm.len(), found: phases.len() });
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() {
                return Err(LinalgError::IndexOutOfRange { index: p, modes: perm.len() });
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(LinalgError::DuplicateMode(p));
            }
        }
        Ok(Self { perm, phases })
    }

    pub fn identity(m: usize) -> Self {
        Self { perm: (0..m).collect(), phases: vec![ExactPhase::ONE; m] }
    }

    pub fn from_permutation(perm: Vec<usize>) -> Result<Self, LinalgError> {
        let m = perm.len();
        Self::new(perm, vec![ExactPhase::ONE; m])
    }

    pub fn diagonal(phases: Vec<ExactPhase>) -> Self {
        Self { perm: (0..phases.len()).collect(), phases }
    }

    pub fn modes(&self) -> usize {
        self.perm.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[ExactPhase] {
        &self.phases
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && self.phases.iter().all(ExactPhase::is_one)
    }

    /// Matrix product `self · rhs` (`rhs` acts first).
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.modes(), rhs.modes(), "monomial dimensions must agree");
        let perm = rhs.perm.iter().map(|&j| self.perm[j]).collect();
        let phases = rhs.perm.iter().zip(&rhs.phases).map(|(&j, &d)| d * self.phases[j]).collect();
        Self { perm, phases }
    }

    pub fn inverse(&self) -> Self {
        let m = self.modes();
        let mut perm = vec![0; m];
        let mut phases = vec![ExactPhase::ONE; m];
        for i in 0..m {
            perm[self.perm[i]] = i;
            phases[self.perm[i]] = self.phases[i].inverse();
        }
        Self { perm, phases }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::identity(self.modes());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.compose(other) == other.compose(self)
    }

    pub fn to_transfer(&self) -> TransferMatrix {
        let base = TransferMatrix::phases(&self.phases);
        let p = TransferMatrix::permutation(&self.perm).expect("validated permutation");
        &p * &base
    }

    /// `a ⊗ b` under the same row-major convention as [`super::tensor`].
    pub fn tensor(a: &Self, b: &Self) -> Self {
        let mb = b.modes();
        let m = a.modes() * mb;
        let mut perm = vec![0; m];
        let mut phases = vec![ExactPhase::ONE; m];
        for i in 0..a.modes() {
            for j in 0..mb {
                perm[i * mb + j] = a.perm[i] * mb + b.perm[j];
                phases[i * mb + j] = a.phases[i] * b.phases[j];
            }
        }
        Self { perm, phases }
    }

    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let shift = a.modes();
        let perm = a.perm.iter().copied().chain(b.perm.iter().map(|p| p + shift)).collect();
        let phases = a.phases.iter().chain(&b.phases).copied().collect();
        Self { perm, phases }
    }

    /// Places `g` on the listed global modes of an `m`-mode identity.
    pub fn embed(g: &Self, modes: &[usize], m: usize) -> Result<Self, LinalgError> {
        if modes.len() != g.modes() {
            return Err(LinalgError::DimensionMismatch { expected: g.modes(), found: modes.len() });
        }
        let mut out = Self::identity(m);
        let mut seen = vec![false; m];
        for &k in modes {
            if k >= m {
                return Err(LinalgError::IndexOutOfRange { index: k, modes: m });
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(LinalgError::DuplicateMode(k));
            }
        }
        for (i, &k) in modes.iter().enumerate() {
            out.perm[k] = modes[g.perm[i]];
            out.phases[k] = g.phases[i];
        }
        Ok(out)
    }
}

impl fmt::Display for MonomialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (p, d)) in self.perm.iter().zip(&self.phases).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if d.is_one() {
                write!(f, "{i}->{p}")?;
            } else {
                write!(f, "{i}->{p}·{d}")?;
            }
        }
        write!(f, "]")
    }
}

/// Cyclic shift `X_d`, routing mode `j` to `j + 1 mod d`.
pub fn pauli_x(d: usize) -> MonomialMatrix {
    MonomialMatrix { perm: (0..d).map(|j| (j + 1) % d).collect(), phases: vec![ExactPhase::ONE; d] }
}

/// Clock matrix `Z_d = diag(ω^j)`.
pub fn pauli_z(d: usize) -> MonomialMatrix {
    MonomialMatrix::diagonal((0..d).map(|j| ExactPhase::root_of_unity(j as i64, d as u64)).collect())
}
