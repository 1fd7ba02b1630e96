use std::collections::BTreeMap;

use ndarray::Array1;
use num_complex::Complex64 as C64;

use super::{FockBasis, FockError, FockState};

/// A fixed photon-number state stored by its support.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    modes: usize,
    photons: usize,
    amps: BTreeMap<FockState, C64>,
}

impl StateVector {
    pub fn basis(state: FockState) -> Self {
        let (modes, photons) = (state.modes(), state.photons());
        Self { modes, photons, amps: BTreeMap::from([(state, C64::new(1.0, 0.0))]) }
    }

    /// Sums repeated keys. Every key must have `modes` modes and the same
    /// photon number; an empty iterator gives the zero vector with 0 photons.
    pub fn from_terms(modes: usize, terms: impl IntoIterator<Item = (FockState, C64)>) -> Result<Self, FockError> {
        let mut amps = BTreeMap::new();
        let mut photons = None;
        for (k, c) in terms {
            if k.modes() != modes {
                return Err(FockError::ModeCountMismatch { expected: modes, found: k.modes() });
            }
            match photons {
                None => photons = Some(k.photons()),
                Some(n) if n != k.photons() => {
                    return Err(FockError::PhotonNumberMismatch { left: n, right: k.photons() })
                }
                _ => {}
            }
            *amps.entry(k).or_insert(C64::new(0.0, 0.0)) += c;
        }
        Ok(Self { modes, photons: photons.unwrap_or(0), amps })
    }

    /// Dense coefficients over `basis`; zero entries are skipped.
    pub fn from_dense(basis: &FockBasis, coeffs: &[C64]) -> Result<Self, FockError> {
        if coeffs.len() != basis.len() {
            return Err(FockError::Linalg(crate::linalg::LinalgError::DimensionMismatch {
                expected: basis.len(),
                found: coeffs.len(),
            }));
        }
        let amps =
            basis.states().iter().zip(coeffs).filter(|(_, c)| c.norm() > 0.0).map(|(k, &c)| (k.clone(), c)).collect();
        Ok(Self { modes: basis.modes(), photons: basis.photons(), amps })
    }

    pub fn to_dense(&self, basis: &FockBasis) -> Result<Array1<C64>, FockError> {
        if basis.modes() != self.modes {
            return Err(FockError::ModeCountMismatch { expected: basis.modes(), found: self.modes });
        }
        if !self.amps.is_empty() && basis.photons() != self.photons {
            return Err(FockError::PhotonNumberMismatch { left: basis.photons(), right: self.photons });
        }
        let mut v = Array1::zeros(basis.len());
        for (k, c) in &self.amps {
            let i = basis.index_of(k).expect("state lies in its own photon-number sector");
            v[i] = *c;
        }
        Ok(v)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, state: &FockState) -> C64 {
        self.amps.get(state).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &C64)> {
        self.amps.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Panics on the zero vector.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        self.scaled(C64::new(1.0 / n, 0.0))
    }

    pub fn scaled(&self, z: C64) -> Self {
        Self { amps: self.amps.iter().map(|(k, c)| (k.clone(), c * z)).collect(), ..self.clone() }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        let (small, big, flip) =
            if self.amps.len() <= other.amps.len() { (self, other, false) } else { (other, self, true) };
        let s: C64 = small.amps.iter().filter_map(|(k, a)| big.amps.get(k).map(|b| a.conj() * b)).sum();
        if flip {
            s.conj()
        } else {
            s
        }
    }

    /// `min_φ ‖self − e^{iφ} other‖`.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let ov = self.inner(other);
        let phase = if ov.norm() > 0.0 { ov.conj() / ov.norm() } else { C64::new(1.0, 0.0) };
        self.diff_norm(other, phase)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.diff_norm(other, C64::new(1.0, 0.0))
    }

    // summed term by term; the `‖a‖² + ‖b‖² − 2Re⟨a,b⟩` shortcut loses half the digits
    fn diff_norm(&self, other: &Self, phase: C64) -> f64 {
        let mut d2: f64 = self.amps.iter().map(|(k, a)| (a - phase * other.amplitude(k)).norm_sqr()).sum();
        d2 += other.amps.iter().filter(|(k, _)| !self.amps.contains_key(*k)).map(|(_, b)| b.norm_sqr()).sum::<f64>();
        d2.sqrt()
    }

    /// `|self⟩ ⊗ |other⟩`, with `other` on the trailing modes.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = BTreeMap::new();
        for (a, x) in &self.amps {
            for (b, y) in &other.amps {
                amps.insert(a.concat(b), x * y);
            }
        }
        Self { modes: self.modes + other.modes, photons: self.photons + other.photons, amps }
    }

    /// Entrywise sum; photon numbers must agree unless one side is zero.
    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        Self::from_terms(self.modes, self.amps.iter().chain(&other.amps).map(|(k, c)| (k.clone(), *c)))
    }

    /// New state with each basis key relabelled by `f` and its amplitude
    /// multiplied by the returned factor.
    pub fn map_basis(&self, modes: usize, f: impl Fn(&FockState) -> (FockState, C64)) -> Result<Self, FockError> {
        Self::from_terms(
            modes,
            self.amps.iter().map(|(k, c)| {
                let (k2, z) = f(k);
                (k2, c * z)
            }),
        )
    }
}
