//! Exact linear algebra over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A matrix in row echelon form produced by fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    /// Column of the leading entry of each row in `rows`.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss elimination. Every entry stays an integer minor of the input, so
/// all divisions are exact.
pub fn bareiss(matrix: &[Vec<BigInt>], ncols: usize) -> Echelon {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    for row in &a {
        assert_eq!(row.len(), ncols, "ragged matrix");
    }
    let m = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let t = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                debug_assert!(t.is_multiple_of(&prev), "inexact Bareiss step");
                row[j] = t / &prev;
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        rows: a,
        pivots,
        ncols,
    }
}

/// A basis of the rational nullspace, each vector scaled to a primitive
/// integer vector whose last nonzero entry is positive. One vector per free
/// column, in column order.
pub fn integer_nullspace(matrix: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let e = bareiss(matrix, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); ncols];
            x[f] = BigRational::one();
            for (row, &pc) in e.rows.iter().zip(&e.pivots).rev() {
                let mut s = BigRational::zero();
                for j in pc + 1..ncols {
                    if !row[j].is_zero() && !x[j].is_zero() {
                        s += &x[j] * BigRational::from_integer(row[j].clone());
                    }
                }
                x[pc] = -s / BigRational::from_integer(row[pc].clone());
            }
            primitive(&x)
        })
        .collect()
}

/// Clears denominators and divides by the content; the last nonzero entry
/// becomes positive.
pub fn primitive(x: &[BigRational]) -> Vec<BigInt> {
    let lcm = x.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let mut v: Vec<BigInt> = x.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() {
        for c in &mut v {
            *c /= &g;
        }
    }
    if v.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        for c in &mut v {
            *c = -&*c;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn times(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
        m.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reduced row echelon form over the rationals.
    fn rref_nullity(m: &[Vec<BigInt>], ncols: usize) -> usize {
        let mut a: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
            .collect();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for v in &mut a[r] {
                *v *= &inv;
            }
            for i in 0..a.len() {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..ncols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        ncols - r
    }

    #[test]
    fn small_nullspaces() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = integer_nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(times(&m, v).iter().all(Zero::is_zero));
        }
        let m = mat(&[&[2, -4], &[3, -6]]);
        assert_eq!(integer_nullspace(&m, 2), vec![vec![BigInt::from(2), BigInt::from(1)]]);
        assert!(integer_nullspace(&mat(&[&[1, 0], &[0, 1]]), 2).is_empty());
        assert_eq!(integer_nullspace(&[], 2).len(), 2);
    }

    #[test]
    fn rank_of_singular_square() {
        let m = mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(bareiss(&m, 3).rank(), 2);
        // last Bareiss pivot of a full-rank square matrix is its determinant
        let m = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let e = bareiss(&m, 3);
        assert_eq!(e.rows[2][2], BigInt::from(18));
    }

    #[test]
    fn agrees_with_rational_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            // low-rank products hit the rank-deficient paths
            let inner = rng.gen_range(1..=cols);
            let a: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..inner).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            let b: Vec<Vec<i64>> = (0..inner)
                .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            let m: Vec<Vec<BigInt>> = (0..rows)
                .map(|i| {
                    (0..cols)
                        .map(|j| BigInt::from((0..inner).map(|t| a[i][t] * b[t][j]).sum::<i64>()))
                        .collect()
                })
                .collect();
            let ns = integer_nullspace(&m, cols);
            assert_eq!(ns.len(), rref_nullity(&m, cols));
            for v in &ns {
                assert!(times(&m, v).iter().all(Zero::is_zero));
                assert!(v.iter().any(|c| !c.is_zero()));
                let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
                assert!(g.is_one());
            }
        }
    }
}
