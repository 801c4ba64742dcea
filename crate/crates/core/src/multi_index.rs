//! Sorted multi-index enumeration shared by the jet engine and the symbol
//! calculus. A sorted multi-index of length `k` over `dim` letters is a
//! non-decreasing tuple `a_1 <= ... <= a_k`; it labels one component of a
//! symmetric `k`-tensor (or one `k`-th order mixed partial derivative).

/// Binomial coefficient, exact for the small arguments used here.
pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of sorted multi-indices of length `k` over `dim` letters.
pub fn count_sorted(k: usize, dim: usize) -> usize {
    if dim == 0 {
        return usize::from(k == 0);
    }
    binom(dim + k - 1, k)
}

/// Lexicographic rank of a sorted multi-index among all sorted multi-indices
/// of the same length over `dim` letters.
///
/// The input must be non-decreasing with every entry `< dim`.
pub fn sorted_rank(idx: &[usize], dim: usize) -> usize {
    let k = idx.len();
    let mut rank = 0;
    let mut lo = 0;
    for (t, &a) in idx.iter().enumerate() {
        debug_assert!(a >= lo && a < dim, "multi-index not sorted or out of range");
        let rest = k - t - 1;
        for v in lo..a {
            rank += count_sorted(rest, dim - v);
        }
        lo = a;
    }
    rank
}

/// All sorted multi-indices of length `k` over `dim` letters, in lexicographic
/// order (so that `sorted_rank(&out[r], dim) == r`).
pub fn enumerate_sorted(k: usize, dim: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(count_sorted(k, dim));
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, dim: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in lo..dim {
            cur.push(v);
            rec(k, dim, v, cur, out);
            cur.pop();
        }
    }
    rec(k, dim, 0, &mut cur, &mut out);
    out
}

/// Converts an exponent vector `alpha` (one count per variable) into the
/// equivalent sorted list of variable indices.
pub fn exponents_to_sorted(alpha: &[usize]) -> Vec<usize> {
    alpha
        .iter()
        .enumerate()
        .flat_map(|(var, &count)| std::iter::repeat_n(var, count))
        .collect()
}
