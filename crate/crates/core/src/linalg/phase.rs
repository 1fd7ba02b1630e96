//! Unit phases stored exactly as rational fractions of a full turn.

use std::fmt;
use std::ops::{Mul, MulAssign};

use num_complex::Complex64 as C64;
use num_integer::Integer;

/// The phase `e^{2πi·num/den}`, kept in lowest terms with `0 <= num < den`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactPhase {
    num: u64,
    den: u64,
}

impl Default for ExactPhase {
    fn default() -> Self {
        Self::ONE
    }
}

impl ExactPhase {
    pub const ONE: Self = Self { num: 0, den: 1 };
    pub const MINUS_ONE: Self = Self { num: 1, den: 2 };
    pub const I: Self = Self { num: 1, den: 4 };
    pub const MINUS_I: Self = Self { num: 3, den: 4 };

    /// `e^{2πi·p/q}`. Panics if `q == 0`.
    pub fn from_turns(p: i64, q: u64) -> Self {
        assert!(q > 0, "phase denominator must be positive");
        let q_i = q as i128;
        let p = (p as i128).rem_euclid(q_i) as u64;
        Self::reduced(p, q)
    }

    /// `ω_d^k` with `ω_d = e^{2πi/d}`.
    pub fn root_of_unity(k: i64, d: u64) -> Self {
        Self::from_turns(k, d)
    }

    fn reduced(num: u64, den: u64) -> Self {
        let g = num.gcd(&den);
        if num == 0 {
            Self::ONE
        } else {
            Self { num: num / g, den: den / g }
        }
    }

    /// `(numerator, denominator)` of the turn fraction.
    pub fn turns(&self) -> (u64, u64) {
        (self.num, self.den)
    }

    pub fn turns_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Multiplicative order, i.e. the smallest `k >= 1` with `self^k = 1`.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn inverse(self) -> Self {
        if self.num == 0 {
            self
        } else {
            Self { num: self.den - self.num, den: self.den }
        }
    }

    pub fn pow(self, k: i64) -> Self {
        let den = self.den as i128;
        let num = (self.num as i128 * (k as i128).rem_euclid(den)).rem_euclid(den);
        Self::reduced(num as u64, self.den)
    }

    pub fn to_complex(self) -> C64 {
        match (self.num, self.den) {
            (0, _) => C64::new(1.0, 0.0),
            (1, 2) => C64::new(-1.0, 0.0),
            (1, 4) => C64::new(0.0, 1.0),
            (3, 4) => C64::new(0.0, -1.0),
            (n, d) => {
                let theta = std::f64::consts::TAU * n as f64 / d as f64;
                C64::new(theta.cos(), theta.sin())
            }
        }
    }

    /// Snaps a unit complex number to the nearest phase whose turn denominator
    /// is at most `max_den`, provided it lies within `tol` of `z`.
    ///
    /// Candidates are the continued-fraction convergents of `arg(z)/2π`; for
    /// `tol` well below `1/max_den²` any admissible fraction is one of them.
    pub fn snap(z: C64, max_den: u64, tol: f64) -> Option<Self> {
        if (z.norm() - 1.0).abs() > tol {
            return None;
        }
        let t = (z.arg() / std::f64::consts::TAU).rem_euclid(1.0);
        let (mut h0, mut h1) = (0i128, 1i128);
        let (mut k0, mut k1) = (1i128, 0i128);
        let mut x = t;
        for _ in 0..64 {
            let a = x.floor();
            let ai = a as i128;
            let h2 = ai * h1 + h0;
            let k2 = ai * k1 + k0;
            if k2 > max_den as i128 {
                break;
            }
            let cand = Self::from_turns(h2 as i64, k2 as u64);
            if (cand.to_complex() - z).norm() <= tol {
                return Some(cand);
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            let frac = x - a;
            if frac < 1e-15 {
                break;
            }
            x = 1.0 / frac;
        }
        None
    }
}

impl Mul for ExactPhase {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let l = self.den.lcm(&rhs.den);
        let a = self.num as u128 * (l / self.den) as u128;
        let b = rhs.num as u128 * (l / rhs.den) as u128;
        Self::reduced(((a + b) % l as u128) as u64, l)
    }
}

impl MulAssign for ExactPhase {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl std::iter::Product for ExactPhase {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, |acc, x| acc * x)
    }
}

impl fmt::Display for ExactPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (1, 4) => write!(f, "i"),
            (3, 4) => write!(f, "-i"),
            (n, d) => write!(f, "e^(2πi·{n}/{d})"),
        }
    }
}
