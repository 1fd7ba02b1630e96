//! Exact vanishing test for sums of roots of unity.
//!
//! A multiset of phases `ζ_N^{k_1}, …, ζ_N^{k_r}` sums to zero iff the integer
//! polynomial `Σ_j x^{k_j}` is divisible by the cyclotomic polynomial `Φ_N`,
//! where `N` is the common denominator of the turn fractions.

use std::collections::HashMap;

use num_integer::Integer;

use super::ExactPhase;

/// Largest common denominator handled exactly. Above this the test falls back
/// to a floating-point comparison.
pub const MAX_EXACT_ORDER: u64 = 1 << 14;

/// Floating-point zero threshold used past [`MAX_EXACT_ORDER`].
pub const FLOAT_ZERO_TOL: f64 = 1e-12;

/// Dense integer polynomial, coefficient `i` multiplies `x^i`.
type Poly = Vec<i128>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

/// Exact division by a monic polynomial; returns (quotient, remainder).
fn div_rem_monic(num: &[i128], den: &[i128]) -> (Poly, Poly) {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem: Poly = num.to_vec();
    trim(&mut rem);
    if rem.len() <= dn {
        return (vec![0], rem);
    }
    let mut quot = vec![0i128; rem.len() - dn];
    for shift in (0..quot.len()).rev() {
        let c = rem[shift + dn];
        if c == 0 {
            continue;
        }
        quot[shift] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[shift + i] -= c * d;
        }
    }
    rem.truncate(dn.max(1));
    trim(&mut rem);
    (quot, rem)
}

/// Φ_n computed as `(x^n - 1) / Π_{d | n, d < n} Φ_d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i128> {
    let mut cache = HashMap::new();
    cyclotomic_cached(n, &mut cache)
}

fn cyclotomic_cached(n: u64, cache: &mut HashMap<u64, Poly>) -> Poly {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_cached(d, cache);
            let (q, r) = div_rem_monic(&p, &phi_d);
            debug_assert!(r.iter().all(|&c| c == 0));
            p = q;
        }
    }
    cache.insert(n, p.clone());
    p
}

/// True iff the phases sum to exactly zero.
pub fn sum_is_zero(terms: &[ExactPhase]) -> bool {
    if terms.is_empty() {
        return true;
    }
    let order = terms.iter().fold(1u64, |acc, t| acc.lcm(&t.order()));
    if order > MAX_EXACT_ORDER {
        let s: num_complex::Complex64 = terms.iter().map(|t| t.to_complex()).sum();
        return s.norm() < FLOAT_ZERO_TOL * terms.len() as f64;
    }
    let mut coeffs = vec![0i128; order as usize];
    for t in terms {
        let (num, den) = t.turns();
        coeffs[(num * (order / den)) as usize] += 1;
    }
    let phi = cyclotomic_polynomial(order);
    let (_, rem) = div_rem_monic(&coeffs, &phi);
    rem.iter().all(|&c| c == 0)
}
