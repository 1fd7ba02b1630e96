use std::collections::HashSet;
use std::ops::Mul;

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64 as C64;

use super::{ExactPhase, LinalgError};

/// Entrywise tolerance for `U·U† = I` on user-supplied matrices.
pub const UNITARY_TOL: f64 = 1e-9;
/// Tolerance for matrices assembled inside the crate.
pub const INTERNAL_UNITARY_TOL: f64 = 1e-12;

pub fn dagger(a: ArrayView2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

/// Largest entrywise deviation of `a·a†` from the identity.
pub fn unitarity_defect(a: ArrayView2<C64>) -> f64 {
    let prod = a.dot(&dagger(a));
    prod.indexed_iter()
        .map(|((i, j), z)| {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            (z - target).norm()
        })
        .fold(0.0, f64::max)
}

/// Largest entrywise distance between two equally shaped matrices.
pub fn max_abs_diff(a: ArrayView2<C64>, b: ArrayView2<C64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// The transfer matrix of an `m`-mode passive linear optical circuit.
///
/// Creation operators map as `a_i† -> Σ_j a_j† U[j][i]`, so column `i` is the
/// image of input mode `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    entries: Array2<C64>,
}

impl TransferMatrix {
    /// Wraps a square matrix after checking unitarity at [`UNITARY_TOL`].
    pub fn new(entries: Array2<C64>) -> Result<Self, LinalgError> {
        Self::with_tolerance(entries, UNITARY_TOL)
    }

    pub fn with_tolerance(entries: Array2<C64>, tol: f64) -> Result<Self, LinalgError> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(LinalgError::NonSquareMatrix { rows: r, cols: c });
        }
        if r == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        let deviation = unitarity_defect(entries.view());
        if deviation > tol {
            return Err(LinalgError::NotUnitary { deviation, tol });
        }
        Ok(Self { entries })
    }

    fn internal(entries: Array2<C64>) -> Self {
        Self { entries }
    }

    pub fn identity(m: usize) -> Self {
        Self::internal(Array2::eye(m))
    }

    /// Permutation matrix sending input mode `i` to output mode `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Result<Self, LinalgError> {
        check_permutation(perm)?;
        let m = perm.len();
        let mut a = Array2::zeros((m, m));
        for (i, &p) in perm.iter().enumerate() {
            a[[p, i]] = C64::new(1.0, 0.0);
        }
        Ok(Self::internal(a))
    }

    /// Diagonal matrix of exact phases.
    pub fn phases(phases: &[ExactPhase]) -> Self {
        let m = phases.len();
        let mut a = Array2::zeros((m, m));
        for (i, p) in phases.iter().enumerate() {
            a[[i, i]] = p.to_complex();
        }
        Self::internal(a)
    }

    pub fn modes(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> ArrayView2<'_, C64> {
        self.entries.view()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[[row, col]]
    }

    pub fn into_inner(self) -> Array2<C64> {
        self.entries
    }

    pub fn dagger(&self) -> Self {
        Self::internal(dagger(self.entries.view()))
    }

    /// `self · rhs`, i.e. `rhs` acts first.
    pub fn compose(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.modes() != rhs.modes() {
            return Err(LinalgError::DimensionMismatch { expected: self.modes(), found: rhs.modes() });
        }
        Ok(Self::internal(self.entries.dot(&rhs.entries)))
    }

    /// `self · g · self†`.
    pub fn conjugate(&self, g: &Self) -> Result<Self, LinalgError> {
        self.compose(g)?.compose(&self.dagger())
    }
}

impl Mul for &TransferMatrix {
    type Output = TransferMatrix;

    /// Panics on a dimension mismatch; use [`TransferMatrix::compose`] to handle it.
    fn mul(self, rhs: Self) -> TransferMatrix {
        self.compose(rhs).expect("transfer matrix dimensions must agree")
    }
}

fn check_permutation(perm: &[usize]) -> Result<(), LinalgError> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() {
            return Err(LinalgError::IndexOutOfRange { index: p, modes: perm.len() });
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(LinalgError::DuplicateMode(p));
        }
    }
    Ok(())
}

/// Discrete Fourier matrix, `F[j][k] = ω^{jk}/√d` with `ω = e^{2πi/d}`.
pub fn fourier_matrix(d: usize) -> Result<TransferMatrix, LinalgError> {
    if d == 0 {
        return Err(LinalgError::EmptyMatrix);
    }
    let scale = 1.0 / (d as f64).sqrt();
    let a = Array2::from_shape_fn((d, d), |(j, k)| {
        ExactPhase::root_of_unity((j * k % d) as i64, d as u64).to_complex() * scale
    });
    Ok(TransferMatrix::internal(a))
}

/// Kronecker product; the pair `(i, j)` lands on index `i·dim(b) + j`.
pub fn tensor(a: &TransferMatrix, b: &TransferMatrix) -> TransferMatrix {
    let (ma, mb) = (a.modes(), b.modes());
    let out = Array2::from_shape_fn((ma * mb, ma * mb), |(r, c)| a.get(r / mb, c / mb) * b.get(r % mb, c % mb));
    TransferMatrix::internal(out)
}

/// Block-diagonal `a ⊕ b` with `a` in the top-left block.
pub fn direct_sum(a: &TransferMatrix, b: &TransferMatrix) -> TransferMatrix {
    let (ma, mb) = (a.modes(), b.modes());
    let mut out = Array2::zeros((ma + mb, ma + mb));
    out.slice_mut(ndarray::s![..ma, ..ma]).assign(&a.entries);
    out.slice_mut(ndarray::s![ma.., ma..]).assign(&b.entries);
    TransferMatrix::internal(out)
}

/// Places `a` on the global modes `modes` (in order) of an `m`-mode circuit,
/// acting as the identity elsewhere.
pub fn embed(a: &TransferMatrix, modes: &[usize], m: usize) -> Result<TransferMatrix, LinalgError> {
    if modes.len() != a.modes() {
        return Err(LinalgError::DimensionMismatch { expected: a.modes(), found: modes.len() });
    }
    let mut seen = HashSet::new();
    for &k in modes {
        if k >= m {
            return Err(LinalgError::IndexOutOfRange { index: k, modes: m });
        }
        if !seen.insert(k) {
            return Err(LinalgError::DuplicateMode(k));
        }
    }
    let mut out: Array2<C64> = Array2::eye(m);
    for &k in modes {
        out[[k, k]] = C64::new(0.0, 0.0);
    }
    for (i, &r) in modes.iter().enumerate() {
        for (j, &c) in modes.iter().enumerate() {
            out[[r, c]] = a.get(i, j);
        }
    }
    Ok(TransferMatrix::internal(out))
}
