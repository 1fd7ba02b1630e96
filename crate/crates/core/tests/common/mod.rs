#![allow(dead_code)]

use bsf_core::fock::{enumerate_basis, FockState, StateVector};
use bsf_core::linalg::{ExactPhase, MonomialMatrix, TransferMatrix};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    // Box-Muller, both components
    let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let v: f64 = rng.gen();
    let r = (-2.0 * u.ln()).sqrt();
    let t = std::f64::consts::TAU * v;
    C64::new(r * t.cos(), r * t.sin())
}

/// Haar-ish unitary by Gram-Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, m: usize) -> TransferMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut v: Vec<C64> = (0..m).map(|_| gaussian(rng)).collect();
        for c in &cols {
            let ov: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= ov * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    let a = Array2::from_shape_fn((m, m), |(i, j)| cols[j][i]);
    TransferMatrix::new(a).expect("orthonormal columns")
}

pub fn random_state(rng: &mut ChaCha8Rng, m: usize, n: usize) -> StateVector {
    let basis = enumerate_basis(m, n).unwrap();
    let terms: Vec<(FockState, C64)> = basis.states().iter().map(|s| (s.clone(), gaussian(rng))).collect();
    StateVector::from_terms(m, terms).unwrap().normalized()
}

pub fn dense(state: &StateVector) -> Vec<C64> {
    let basis = enumerate_basis(state.modes(), state.photons()).unwrap();
    basis.states().iter().map(|s| state.amplitude(s)).collect()
}

pub fn apply_dense(a: &Array2<C64>, v: &[C64]) -> Vec<C64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[[i, j]] * v[j]).sum()).collect()
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn phase(num: i64, den: u64) -> ExactPhase {
    ExactPhase::from_turns(num, den)
}

/// A random monomial with phases of denominator `den`.
pub fn random_monomial(rng: &mut ChaCha8Rng, m: usize, den: u64) -> MonomialMatrix {
    let mut perm: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let phases = (0..m).map(|_| phase(rng.gen_range(0..den as i64), den)).collect();
    MonomialMatrix::new(perm, phases).unwrap()
}

pub fn diagonal_monomial(rng: &mut ChaCha8Rng, m: usize, den: u64) -> MonomialMatrix {
    let phases = (0..m).map(|_| phase(rng.gen_range(0..den as i64), den)).collect();
    MonomialMatrix::diagonal(phases)
}

pub fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}
