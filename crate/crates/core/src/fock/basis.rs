use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::FockError;

/// Default cap on the number of basis states a single computation may touch.
pub const DEFAULT_MAX_BASIS: u128 = 10_000_000;
/// Environment variable overriding [`DEFAULT_MAX_BASIS`].
pub const BASIS_LIMIT_ENV: &str = "BSF_MAX_BASIS";

pub fn max_basis_size() -> u128 {
    std::env::var(BASIS_LIMIT_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_BASIS)
}

/// `C(m + n - 1, n)`, saturating at `u128::MAX`.
pub fn basis_size(modes: usize, photons: usize) -> u128 {
    if modes == 0 {
        return u128::from(photons == 0);
    }
    let mut acc: u128 = 1;
    for k in 1..=photons as u128 {
        // exact at every step: acc·(m-1+k)/k = C(m-1+k, k)
        acc = match acc.checked_mul(modes as u128 - 1 + k) {
            Some(v) => v / k,
            None => return u128::MAX,
        };
    }
    acc
}

/// Occupation numbers `(n_0, …, n_{m-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState(Vec<u32>);

impl FockState {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    /// One photon in `mode`.
    pub fn single(modes: usize, mode: usize) -> Self {
        let mut v = vec![0; modes];
        v[mode] = 1;
        Self(v)
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn photons(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    /// Each mode index repeated by its occupation, ascending.
    pub fn mode_list(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &n)| std::iter::repeat_n(i, n as usize)).collect()
    }

    /// `|self⟩ ⊗ |other⟩` on `self.modes() + other.modes()` modes.
    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl From<Vec<u32>> for FockState {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Parses `1,0,2`, optionally wrapped as `|1,0,2⟩` or `|1,0,2>`.
impl FromStr for FockState {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('|').trim_end_matches(['⟩', '>']);
        if body.trim().is_empty() {
            return Err(FockError::InvalidState(format!("empty occupation list in {s:?}")));
        }
        body.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| FockError::InvalidState(format!("bad occupation {:?} in {s:?}", t.trim())))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

/// All `n`-photon states on `m` modes in ascending lexicographic order.
#[derive(Clone, Debug)]
pub struct FockBasis {
    modes: usize,
    photons: usize,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl FockBasis {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn into_states(self) -> Vec<FockState> {
        self.states
    }

    pub fn index_of(&self, state: &FockState) -> Option<usize> {
        self.index.get(state).copied()
    }
}

pub fn enumerate_basis(modes: usize, photons: usize) -> Result<FockBasis, FockError> {
    let size = basis_size(modes, photons);
    let limit = max_basis_size();
    if size > limit {
        return Err(FockError::SizeLimit { size, limit });
    }
    let mut states = Vec::with_capacity(size as usize);
    let mut cur = vec![0u32; modes];
    fill(&mut cur, 0, photons as u32, &mut states);
    let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(FockBasis { modes, photons, states, index })
}

fn fill(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<FockState>) {
    if pos + 1 >= cur.len() {
        if let Some(last) = cur.last_mut() {
            *last = left;
            out.push(FockState(cur.clone()));
        } else if left == 0 {
            out.push(FockState(Vec::new()));
        }
        return;
    }
    for k in 0..=left {
        cur[pos] = k;
        fill(cur, pos + 1, left - k, out);
    }
    cur[pos] = 0;
}
