//! Symmetric tensor bases over the abstract adapted frame
//! `(h_1..h_n, v_1..v_n)` and the flag bases used for involutivity.

use num_bigint::BigInt;
use serde::Serialize;

use super::exact::determinant;
use super::SymbolError;
use crate::multi_index::{count_sorted, enumerate_sorted, sorted_rank};

/// Integer vector in frame coordinates: entries `0..n` along `h_i`,
/// `n..2n` along `v_i`.
pub type FrameVec = Vec<i64>;

/// Label of frame index `a`: `h1..hn`, then `v1..vn`.
pub fn frame_label(a: usize, n: usize) -> String {
    if a < n {
        format!("h{}", a + 1)
    } else {
        format!("v{}", a - n + 1)
    }
}

/// The frame maps. In the adapted frame `h`, `J`, `S` and `C` have constant
/// integer action: `h(h_i) = h_i`, `h(v_i) = 0`, `J(h_i) = v_i`, `J(v_i) = 0`,
/// `S = h_n`, `C = v_n`.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub n: usize,
}

impl Frame {
    pub fn new(n: usize) -> Self {
        Frame { n }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn e(&self, a: usize) -> FrameVec {
        let mut v = vec![0; self.dim()];
        v[a] = 1;
        v
    }

    pub fn s(&self) -> FrameVec {
        self.e(self.n - 1)
    }

    pub fn c(&self) -> FrameVec {
        self.e(2 * self.n - 1)
    }

    pub fn h(&self, x: &[i64]) -> FrameVec {
        (0..self.dim())
            .map(|a| if a < self.n { x[a] } else { 0 })
            .collect()
    }

    pub fn j(&self, x: &[i64]) -> FrameVec {
        (0..self.dim())
            .map(|a| if a < self.n { 0 } else { x[a - self.n] })
            .collect()
    }
}

/// Basis of `S^k T*` given by sorted multi-indices in lexicographic order.
#[derive(Debug, Clone, Serialize)]
pub struct SymTensorBasis {
    pub k: usize,
    pub dim: usize,
    pub indices: Vec<Vec<usize>>,
}

impl SymTensorBasis {
    pub fn new(k: usize, n: usize) -> Result<Self, SymbolError> {
        if !(1..=3).contains(&k) {
            return Err(SymbolError::UnsupportedOrder(k));
        }
        if n == 0 {
            return Err(SymbolError::ZeroDimension);
        }
        let dim = 2 * n;
        Ok(SymTensorBasis {
            k,
            dim,
            indices: enumerate_sorted(k, dim),
        })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        let n = self.dim / 2;
        self.indices
            .iter()
            .map(|idx| idx.iter().map(|&a| frame_label(a, n)).collect())
            .collect()
    }
}

/// Row of the functional `A ↦ A(X_1, .., X_k)` on `S^k T*`, by multilinear
/// expansion in the frame.
pub fn eval_row(dim: usize, args: &[&[i64]]) -> Vec<i64> {
    let k = args.len();
    let mut row = vec![0; count_sorted(k, dim)];
    let mut idx = Vec::with_capacity(k);
    fn rec(args: &[&[i64]], dim: usize, coef: i64, idx: &mut Vec<usize>, row: &mut [i64]) {
        if idx.len() == args.len() {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            row[sorted_rank(&sorted, dim)] += coef;
            return;
        }
        let x = args[idx.len()];
        for (a, &c) in x.iter().enumerate() {
            if c != 0 {
                idx.push(a);
                rec(args, dim, coef * c, idx, row);
                idx.pop();
            }
        }
    }
    rec(args, dim, 1, &mut idx, &mut row);
    row
}

pub fn add_rows(a: &mut [i64], b: &[i64], s: i64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += s * y;
    }
}

/// An ordered basis `e_1..e_2n` of the frame space.
#[derive(Debug, Clone, Serialize)]
pub struct FlagBasis {
    pub name: String,
    pub vectors: Vec<FrameVec>,
}

impl FlagBasis {
    /// Builds a flag basis, rejecting singular ones.
    pub fn new(name: impl Into<String>, vectors: Vec<FrameVec>) -> Result<Self, SymbolError> {
        let d = vectors.len();
        if d == 0 || d % 2 == 1 || vectors.iter().any(|v| v.len() != d) {
            return Err(SymbolError::Shape(format!(
                "a flag basis needs 2n vectors of length 2n, got {d}"
            )));
        }
        if determinant(&vectors) == BigInt::from(0) {
            return Err(SymbolError::SingularBasis(name.into()));
        }
        Ok(FlagBasis {
            name: name.into(),
            vectors,
        })
    }

    pub fn n(&self) -> usize {
        self.vectors.len() / 2
    }

    /// `e_i = h_i` for `i < n`, `e_n = h_n + v_1 + .. + v_n`, `e_{n+i} = v_i`.
    pub fn product_adapted(n: usize) -> Self {
        Self::with_weights(n, "h_n + Σv", |_| 0)
    }

    /// `ê_i = h_i + i v_i` for `i < n`, `ê_n = h_n + v_1 + .. + v_n`,
    /// `ê_{n+i} = v_i`.
    pub fn weighted(n: usize) -> Self {
        Self::with_weights(n, "h_i + i v_i", |i| i as i64 + 1)
    }

    /// The frame itself, `h_1..h_n, v_1..v_n`.
    pub fn frame(n: usize) -> Self {
        let f = Frame::new(n);
        FlagBasis {
            name: "frame".into(),
            vectors: (0..2 * n).map(|a| f.e(a)).collect(),
        }
    }

    fn with_weights(n: usize, name: &str, w: impl Fn(usize) -> i64) -> Self {
        let f = Frame::new(n);
        let mut vectors = Vec::with_capacity(2 * n);
        for i in 0..n - 1 {
            let mut v = f.e(i);
            v[n + i] = w(i);
            vectors.push(v);
        }
        let mut en = f.e(n - 1);
        for i in 0..n {
            en[n + i] = 1;
        }
        vectors.push(en);
        for i in 0..n {
            vectors.push(f.e(n + i));
        }
        FlagBasis {
            name: name.into(),
            vectors,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(SymTensorBasis::new(2, 2).unwrap().len(), 10);
        assert_eq!(SymTensorBasis::new(3, 2).unwrap().len(), 20);
        assert_eq!(SymTensorBasis::new(3, 3).unwrap().len(), 56);
        assert!(matches!(
            SymTensorBasis::new(4, 2),
            Err(SymbolError::UnsupportedOrder(4))
        ));
    }

    #[test]
    fn multilinear_row() {
        // A(h1 + v1, h1) = A(h1,h1) + A(h1,v1) over n = 1
        let row = eval_row(2, &[&[1, 1], &[1, 0]]);
        assert_eq!(row, vec![1, 1, 0]);
        let row = eval_row(2, &[&[1, 1], &[1, 1]]);
        assert_eq!(row, vec![1, 2, 1]);
    }

    #[test]
    fn flag_bases_are_nonsingular() {
        for n in 1..=5 {
            for b in [FlagBasis::product_adapted(n), FlagBasis::weighted(n)] {
                assert!(FlagBasis::new(b.name.clone(), b.vectors.clone()).is_ok());
            }
        }
        assert!(FlagBasis::new("bad", vec![vec![1, 0], vec![2, 0]]).is_err());
    }

    #[test]
    fn frame_maps() {
        let f = Frame::new(2);
        assert_eq!(f.j(&f.s()), f.c());
        assert_eq!(f.h(&f.c()), vec![0; 4]);
        assert_eq!(f.j(&f.j(&[1, 2, 3, 4])), vec![0; 4]);
    }
}
