//! Exact integer linear algebra: fraction-free (Bareiss) elimination over
//! checked `i128`, retried over arbitrary precision integers on overflow.

use num_bigint::BigInt;
use num_traits::{One, Zero};

trait Ring: Clone {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn one() -> Self;
    /// `(a * b - c * d) / e`, where the division is known to be exact.
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self>;
}

impl Ring for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn one() -> Self {
        1
    }
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        let num = a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?;
        debug_assert_eq!(num % e, 0);
        Some(num / e)
    }
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one() -> Self {
        One::one()
    }
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        Some((a * b - c * d) / e)
    }
}

struct Echelon<T> {
    rank: usize,
    last_pivot: T,
    swaps: usize,
}

/// Fraction-free row echelon form. Returns `None` on overflow.
fn bareiss<T: Ring>(rows: &[Vec<i64>], ncols: usize) -> Option<Echelon<T>> {
    let mut m: Vec<Vec<T>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| T::from_i64(v)).collect())
        .collect();
    let nrows = m.len();
    let mut prev = T::one();
    let mut rank = 0;
    let mut swaps = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            swaps += 1;
        }
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..ncols {
                if row[j].is_zero() && (lead.is_zero() || pivot_row[j].is_zero()) {
                    continue;
                }
                row[j] = T::cross(&pivot, &row[j], &lead, &pivot_row[j], &prev)?;
            }
            row[col] = T::from_i64(0);
        }
        prev = pivot;
        rank += 1;
    }
    Some(Echelon {
        rank,
        last_pivot: prev,
        swaps,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Divides each row by the gcd of its entries with a positive leading
/// entry, and drops zero and repeated rows. The row space is unchanged.
pub fn normalized_rows(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for r in rows {
        let g = r.iter().fold(0, |g, &v| gcd(g, v));
        if g == 0 {
            continue;
        }
        let lead = r.iter().find(|&&v| v != 0).copied().unwrap_or(1);
        let s = if lead < 0 { -g } else { g };
        let n: Vec<i64> = r.iter().map(|&v| v / s).collect();
        if seen.insert(n.clone()) {
            out.push(n);
        }
    }
    out
}

/// Exact rank of an integer matrix given by rows of length `ncols`.
pub fn rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    let rows = normalized_rows(rows);
    match bareiss::<i128>(&rows, ncols) {
        Some(e) => e.rank,
        None => {
            bareiss::<BigInt>(&rows, ncols)
                .expect("arbitrary precision never overflows")
                .rank
        }
    }
}

/// Exact determinant of a square integer matrix.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return <BigInt as One>::one();
    }
    let e = match bareiss::<i128>(rows, n) {
        Some(e) => Echelon {
            rank: e.rank,
            last_pivot: BigInt::from(e.last_pivot),
            swaps: e.swaps,
        },
        None => bareiss::<BigInt>(rows, n).expect("arbitrary precision never overflows"),
    };
    if e.rank < n {
        return BigInt::zero();
    }
    if e.swaps % 2 == 1 {
        -e.last_pivot
    } else {
        e.last_pivot
    }
}

/// Integer product `a · b`, where each row of `b` has `ncols` entries.
pub fn matmul(a: &[Vec<i64>], b: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| {
            let mut out = vec![0i128; ncols];
            for (k, &v) in row.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                for (o, &w) in out.iter_mut().zip(&b[k]) {
                    *o += v as i128 * w as i128;
                }
            }
            out.into_iter()
                .map(|v| i64::try_from(v).expect("product entry fits in i64"))
                .collect()
        })
        .collect()
}

/// True when every entry is zero.
pub fn is_zero_matrix(m: &[Vec<i64>]) -> bool {
    m.iter().all(|r| r.iter().all(|&v| v == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]], 2), 1);
        assert_eq!(rank(&[vec![0, 0], vec![0, 0]], 2), 0);
        assert_eq!(rank(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 1, 1]], 3), 2);
        assert_eq!(rank(&[], 4), 0);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![2, 1], vec![1, 3]]), BigInt::from(5));
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(
            determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]),
            BigInt::from(-3)
        );
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), BigInt::zero());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        // Hilbert-like integer matrix with huge minors
        let big = 1i64 << 40;
        let rows: Vec<Vec<i64>> = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| big / (i + j + 1) as i64 + (i * j) as i64)
                    .collect()
            })
            .collect();
        assert!(bareiss::<i128>(&rows, 6).is_none());
        assert_eq!(rank(&rows, 6), 6);
    }

    #[test]
    fn normalization_merges_multiples() {
        let rows = normalized_rows(&[vec![2, -4], vec![-1, 2], vec![0, 0]]);
        assert_eq!(rows, vec![vec![1, -2]]);
    }
}
