//! Matrix permanents via Ryser's inclusion–exclusion formula.
//!
//! `Per(A) = (-1)^k Σ_{S ⊆ cols} (-1)^{|S|} Π_i Σ_{j∈S} a_ij`
//!
//! Subsets are visited in Gray-code order so each step adds or removes one
//! column from the running row sums, giving `O(2^k·k)` work.

use ndarray::ArrayView2;
use num_complex::Complex64 as C64;

use super::LinalgError;

/// Largest order accepted by the permanent kernels.
pub const MAX_PERMANENT_ORDER: usize = 30;

pub fn permanent(a: ArrayView2<C64>) -> Result<C64, LinalgError> {
    let (k, cols) = a.dim();
    if k != cols {
        return Err(LinalgError::NonSquareMatrix { rows: k, cols });
    }
    if k > MAX_PERMANENT_ORDER {
        return Err(LinalgError::SizeLimit { size: k, limit: MAX_PERMANENT_ORDER });
    }
    Ok(ryser_gray(a))
}

fn ryser_gray(a: ArrayView2<C64>) -> C64 {
    let k = a.nrows();
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); k];
    let mut total = C64::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for step in 1u64..(1u64 << k) {
        let col = step.trailing_zeros() as usize;
        let bit = 1u64 << col;
        gray ^= bit;
        if gray & bit != 0 {
            for (s, x) in row_sums.iter_mut().zip(a.column(col)) {
                *s += x;
            }
        } else {
            for (s, x) in row_sums.iter_mut().zip(a.column(col)) {
                *s -= x;
            }
        }
        let prod: C64 = row_sums.iter().product();
        if gray.count_ones().is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if k % 2 == 1 {
        -total
    } else {
        total
    }
}

/// Permanent of the `k×k` matrix whose row `r` of `distinct` is repeated
/// `mult[r]` times (`Σ mult = k`).
///
/// Grouping equal rows turns the subset sum into a sum over occupation counts
/// `0 <= x_r <= mult[r]` weighted by `Π_r C(mult[r], x_r)`, so the work is
/// `Π_r (mult[r] + 1)·k` rather than `2^k·k`. Counts are walked in reflected
/// mixed-radix Gray order, changing one `x_r` by ±1 per step.
pub fn permanent_repeated_rows(distinct: ArrayView2<C64>, mult: &[usize]) -> Result<C64, LinalgError> {
    let (groups, k) = distinct.dim();
    if groups != mult.len() {
        return Err(LinalgError::DimensionMismatch { expected: groups, found: mult.len() });
    }
    let total_rows: usize = mult.iter().sum();
    if total_rows != k {
        return Err(LinalgError::NonSquareMatrix { rows: total_rows, cols: k });
    }
    if k > MAX_PERMANENT_ORDER {
        return Err(LinalgError::SizeLimit { size: k, limit: MAX_PERMANENT_ORDER });
    }
    if k == 0 {
        return Ok(C64::new(1.0, 0.0));
    }

    // binom[r][x] = C(mult[r], x)
    let binom: Vec<Vec<f64>> = mult
        .iter()
        .map(|&n| {
            let mut row = vec![1.0; n + 1];
            for x in 1..=n {
                row[x] = row[x - 1] * (n + 1 - x) as f64 / x as f64;
            }
            row
        })
        .collect();

    let mut x = vec![0usize; groups];
    let mut dir = vec![1isize; groups];
    let mut col_sums = vec![C64::new(0.0, 0.0); k];
    let mut picked = 0usize;
    let mut total = C64::new(0.0, 0.0);
    loop {
        let mut j = 0;
        while j < groups {
            let next = x[j] as isize + dir[j];
            if next >= 0 && next <= mult[j] as isize {
                break;
            }
            dir[j] = -dir[j];
            j += 1;
        }
        if j == groups {
            break;
        }
        let row = distinct.row(j);
        if dir[j] > 0 {
            x[j] += 1;
            picked += 1;
            for (s, v) in col_sums.iter_mut().zip(row) {
                *s += v;
            }
        } else {
            x[j] -= 1;
            picked -= 1;
            for (s, v) in col_sums.iter_mut().zip(row) {
                *s -= v;
            }
        }
        let weight: f64 = x.iter().zip(&binom).map(|(&xr, b)| b[xr]).product();
        let prod: C64 = col_sums.iter().product::<C64>() * weight;
        if (k - picked).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Heap's algorithm; kept local so the oracle shares nothing with Ryser.
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut a: Vec<usize> = (0..n).collect();
        let mut c = vec![0usize; n];
        out.push(a.clone());
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                out.push(a.clone());
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }

    fn naive(a: &Array2<C64>) -> C64 {
        let n = a.nrows();
        permutations(n).iter().map(|p| (0..n).map(|i| a[[i, p[i]]]).product::<C64>()).sum()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Array2<C64> {
        Array2::from_shape_fn((r, c), |_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(permanent(Array2::<C64>::eye(2).view()).unwrap(), c(1.0));
        assert_eq!(permanent(array![[c(1.0), c(1.0)], [c(1.0), c(1.0)]].view()).unwrap(), c(2.0));
        assert_eq!(permanent(array![[c(1.0), c(1.0)], [c(1.0), c(-1.0)]].view()).unwrap(), c(0.0));
        assert_eq!(permanent(Array2::<C64>::zeros((0, 0)).view()).unwrap(), c(1.0));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            permanent(Array2::<C64>::zeros((2, 3)).view()),
            Err(LinalgError::NonSquareMatrix { rows: 2, cols: 3 })
        ));
        assert!(matches!(
            permanent(Array2::<C64>::zeros((31, 31)).view()),
            Err(LinalgError::SizeLimit { size: 31, limit: 30 })
        ));
    }

    #[test]
    fn heap_enumerates_factorial_many() {
        assert_eq!(permutations(5).len(), 120);
        let mut all = permutations(4);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn ryser_matches_naive_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=6 {
            for _ in 0..20 {
                let a = random_matrix(&mut rng, k, k);
                let diff = (permanent(a.view()).unwrap() - naive(&a)).norm();
                assert!(diff < 1e-10, "k = {k}, diff = {diff}");
            }
        }
    }

    #[test]
    fn repeated_rows_match_expanded_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cases: &[&[usize]] = &[&[1], &[2], &[3, 0, 1], &[1, 1, 1, 1], &[2, 2, 1], &[0, 4, 0, 2], &[5]];
        for mult in cases {
            let k: usize = mult.iter().sum();
            let distinct = random_matrix(&mut rng, mult.len(), k);
            let rows: Vec<usize> = mult.iter().enumerate().flat_map(|(r, &n)| std::iter::repeat_n(r, n)).collect();
            let expanded = Array2::from_shape_fn((k, k), |(i, j)| distinct[[rows[i], j]]);
            let fast = permanent_repeated_rows(distinct.view(), mult).unwrap();
            let reference = naive(&expanded);
            assert!((fast - reference).norm() < 1e-10, "mult = {mult:?}");
        }
    }

    #[test]
    fn gray_ryser_handles_moderate_order() {
        // Per(J_k) = k!
        let k = 12;
        let j = Array2::from_elem((k, k), c(1.0));
        let p = permanent(j.view()).unwrap();
        assert!((p.re - 479001600.0).abs() < 1e-3 && p.im.abs() < 1e-6);
    }
}
