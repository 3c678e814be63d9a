//! Exact linear algebra over the rationals, plus a division-free symbolic
//! determinant for small polynomial matrices.

use num_traits::Zero;

use crate::poly::{Poly, Rat};

/// Rank of a dense rational matrix by Gaussian elimination; exact.
pub fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    let mut col = 0;
    while col < ncols && rank < rows.len() {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pivot) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &inv;
            for c in col..ncols {
                let delta = &factor * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Determinant of a square matrix of polynomials, computed by the
/// division-free subset expansion (fine for the small spans we check).
pub fn det_poly(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    // dp over column subsets: after processing r rows, dp[mask] with
    // popcount(mask) = r holds the signed minor determinant
    let mut dp = vec![Poly::zero(); 1 << n];
    dp[0] = Poly::one();
    for row in 0..n {
        let mut next = vec![Poly::zero(); 1 << n];
        for (mask, minor) in dp.iter().enumerate() {
            if minor.is_zero() || (mask as u32).count_ones() as usize != row {
                continue;
            }
            let mut used_below = 0u32;
            for col in 0..n {
                let bit = 1usize << col;
                if mask & bit != 0 {
                    used_below += 1;
                    continue;
                }
                if m[row][col].is_zero() {
                    continue;
                }
                // inversions added: used columns to the right of `col`
                let used_above = row as u32 - used_below;
                let term = minor * &m[row][col];
                let signed = if used_above % 2 == 0 { term } else { -&term };
                next[mask | bit] = &next[mask | bit] + &signed;
            }
        }
        dp = next;
    }
    dp[(1 << n) - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;
    use crate::var::VarId;

    #[test]
    fn rank_small() {
        let m = vec![
            vec![rat_int(1), rat_int(2), rat_int(3)],
            vec![rat_int(2), rat_int(4), rat_int(6)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
        ];
        assert_eq!(rank(m), 2);
        assert_eq!(rank(vec![vec![rat_int(0); 3]; 2]), 0);
    }

    #[test]
    fn det_triangular() {
        let x = Poly::var(VarId::z(1));
        let m = vec![
            vec![x.clone(), Poly::zero()],
            vec![Poly::one(), &x * &x],
        ];
        assert_eq!(det_poly(&m), &(&x * &x) * &x);
    }

    #[test]
    fn det_antidiagonal_sign() {
        let m = vec![
            vec![Poly::zero(), Poly::one()],
            vec![Poly::one(), Poly::zero()],
        ];
        assert_eq!(det_poly(&m), -&Poly::one());
    }
}
