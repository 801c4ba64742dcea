//! Symbol maps `σ_k` of `P_C`, `P_S`, `P_Γ`, the stacked systems and the
//! maps `τ_1`, `τ_2`, as exact integer matrices over the adapted frame.

use serde::Serialize;

use super::basis::{add_rows, eval_row, frame_label, Frame, FrameVec, SymTensorBasis};
use super::exact::rank;
use super::SymbolError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Operator {
    PC,
    PS,
    PGamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum System {
    P1,
    P2,
}

impl std::fmt::Display for Operator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Operator::PC => "PC",
            Operator::PS => "PS",
            Operator::PGamma => "PGamma",
        })
    }
}

impl std::fmt::Display for System {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            System::P1 => "P1",
            System::P2 => "P2",
        })
    }
}

/// An integer matrix with labelled rows and columns. Rows may repeat or
/// vanish; ranks are unaffected.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolMatrix {
    pub rows: Vec<Vec<i64>>,
    pub ncols: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl SymbolMatrix {
    fn new(ncols: usize, col_labels: Vec<String>) -> Self {
        SymbolMatrix {
            rows: Vec::new(),
            ncols,
            row_labels: Vec::new(),
            col_labels,
        }
    }

    fn push(&mut self, label: String, row: Vec<i64>) {
        debug_assert_eq!(row.len(), self.ncols);
        self.rows.push(row);
        self.row_labels.push(label);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows, self.ncols)
    }

    pub fn kernel_dim(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Vertical concatenation; all parts must share the column space.
    pub fn stack(parts: Vec<SymbolMatrix>) -> SymbolMatrix {
        let mut it = parts.into_iter();
        let mut out = it.next().expect("at least one block");
        for p in it {
            assert_eq!(p.ncols, out.ncols, "stacked blocks must share columns");
            out.rows.extend(p.rows);
            out.row_labels.extend(p.row_labels);
        }
        out
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.rows[r][c]
    }
}

/// Index of the pair `i < j` among `n(n-1)/2` pairs, lexicographic.
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn label(name: &str, args: &[String]) -> String {
    format!("{name}({})", args.join(","))
}

/// `σ_k` of a single operator over `S^k T*` in the adapted frame.
pub fn symbol_matrix(op: Operator, k: usize, n: usize) -> Result<SymbolMatrix, SymbolError> {
    let basis = SymTensorBasis::new(k, n)?;
    let f = Frame::new(n);
    let d = f.dim();
    let (s, c) = (f.s(), f.c());
    let mut m = SymbolMatrix::new(basis.len(), basis.labels());
    let name = format!("σ{k}({op})");
    let fl = |a: usize| frame_label(a, n);
    match (op, k) {
        (Operator::PC, 1) => m.push(label(&name, &[]), eval_row(d, &[&c])),
        (Operator::PC, 2) => {
            for a in 0..d {
                m.push(label(&name, &[fl(a)]), eval_row(d, &[&f.e(a), &c]));
            }
        }
        (Operator::PS, 2) => {
            for a in 0..d {
                let x = f.e(a);
                let mut row = eval_row(d, &[&s, &f.j(&x)]);
                add_rows(&mut row, &eval_row(d, &[&x, &c]), -1);
                m.push(label(&name, &[fl(a)]), row);
            }
        }
        (Operator::PC, 3) => {
            // full T*⊗T* codomain; the (X, Y) symmetry only duplicates rows
            for a in 0..d {
                for b in 0..d {
                    let row = eval_row(d, &[&f.e(a), &f.e(b), &c]);
                    m.push(label(&name, &[fl(a), fl(b)]), row);
                }
            }
        }
        (Operator::PS, 3) => {
            for a in 0..d {
                for b in 0..d {
                    let (x, y) = (f.e(a), f.e(b));
                    let mut row = eval_row(d, &[&x, &s, &f.j(&y)]);
                    add_rows(&mut row, &eval_row(d, &[&x, &y, &c]), -1);
                    m.push(label(&name, &[fl(a), fl(b)]), row);
                }
            }
        }
        (Operator::PGamma, 2) => {
            for (i, j) in pairs(n) {
                m.push(label(&name, &[fl(i), fl(j)]), pgamma_row(&f, None, i, j));
            }
        }
        (Operator::PGamma, 3) => {
            for a in 0..d {
                for (i, j) in pairs(n) {
                    let x = f.e(a);
                    m.push(
                        label(&name, &[fl(a), fl(i), fl(j)]),
                        pgamma_row(&f, Some(&x), i, j),
                    );
                }
            }
        }
        _ => return Err(SymbolError::Undefined { op, k }),
    }
    Ok(m)
}

/// `2 (A(.., h_i, v_j) - A(.., h_j, v_i))`.
fn pgamma_row(f: &Frame, x: Option<&FrameVec>, i: usize, j: usize) -> Vec<i64> {
    let d = f.dim();
    let n = f.n;
    let (hi, hj, vi, vj) = (f.e(i), f.e(j), f.e(n + i), f.e(n + j));
    let args = |a: &FrameVec, b: &FrameVec| -> Vec<i64> {
        match x {
            Some(x) => eval_row(d, &[x, a, b]),
            None => eval_row(d, &[a, b]),
        }
    };
    let mut row = args(&hi, &vj);
    add_rows(&mut row, &args(&hj, &vi), -1);
    row.iter_mut().for_each(|v| *v *= 2);
    row
}

/// `σ_k` of `P_1 = (P_S, P_C)` or `P_2 = (P_Γ, P_C)`, stacked in that order.
pub fn system_symbol(sys: System, k: usize, n: usize) -> Result<SymbolMatrix, SymbolError> {
    if !(2..=3).contains(&k) {
        return Err(SymbolError::UnsupportedOrder(k));
    }
    let first = match sys {
        System::P1 => Operator::PS,
        System::P2 => Operator::PGamma,
    };
    Ok(SymbolMatrix::stack(vec![
        symbol_matrix(first, k, n)?,
        symbol_matrix(Operator::PC, k, n)?,
    ]))
}

/// Coordinates on `(T* ⊗ T*) × (T* ⊗ T*)` (for `P_1`) or
/// `(T* ⊗ Λ²T*_v) × (T* ⊗ T*)` (for `P_2`), matching the row order of
/// `system_symbol(sys, 3, n)`. The last block holds `B_C`, which is cut
/// down to `S²T*` by the symmetry rows of `tau_matrix`.
struct TauDomain {
    frame: Frame,
    first: usize,
    sys: System,
}

impl TauDomain {
    fn new(sys: System, n: usize) -> Self {
        let d = 2 * n;
        let first = match sys {
            System::P1 => d * d,
            System::P2 => d * n * (n - 1) / 2,
        };
        TauDomain {
            frame: Frame::new(n),
            first,
            sys,
        }
    }

    fn len(&self) -> usize {
        let d = self.frame.dim();
        self.first + d * d
    }

    fn labels(&self) -> Vec<String> {
        let n = self.frame.n;
        let d = self.frame.dim();
        let fl = |a: usize| frame_label(a, n);
        let mut out = Vec::with_capacity(self.len());
        match self.sys {
            System::P1 => {
                for a in 0..d {
                    for b in 0..d {
                        out.push(format!("B_S({},{})", fl(a), fl(b)));
                    }
                }
            }
            System::P2 => {
                for a in 0..d {
                    for (i, j) in pairs(n) {
                        out.push(format!("B_Γ({},{},{})", fl(a), fl(i), fl(j)));
                    }
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                out.push(format!("B_C({},{})", fl(a), fl(b)));
            }
        }
        out
    }

    fn zero(&self) -> Vec<i64> {
        vec![0; self.len()]
    }

    /// `row += s · B_S(u, w)`.
    fn b_s(&self, row: &mut [i64], u: &[i64], w: &[i64], s: i64) {
        let d = self.frame.dim();
        for (a, &ua) in u.iter().enumerate() {
            for (b, &wb) in w.iter().enumerate() {
                row[a * d + b] += s * ua * wb;
            }
        }
    }

    /// `row += s · B_C(u, w)`.
    fn b_c(&self, row: &mut [i64], u: &[i64], w: &[i64], s: i64) {
        let d = self.frame.dim();
        for (a, &ua) in u.iter().enumerate() {
            for (b, &wb) in w.iter().enumerate() {
                row[self.first + a * d + b] += s * ua * wb;
            }
        }
    }

    /// `row += s · B_Γ(x, u, w)`; the last two slots are semi-basic, so only
    /// horizontal components of `u` and `w` contribute.
    fn b_gamma(&self, row: &mut [i64], x: &[i64], u: &[i64], w: &[i64], s: i64) {
        let n = self.frame.n;
        let np = n * (n - 1) / 2;
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (i, j) in pairs(n) {
                let wedge = u[i] * w[j] - u[j] * w[i];
                row[a * np + pair_index(i, j, n)] += s * xa * wedge;
            }
        }
    }
}

/// `τ_1` (for `P_1`) or `τ_2` (for `P_2`) as an integer matrix, rows over
/// all frame tuples. The `½` in `τ_ΓC` is cleared by doubling its rows.
pub fn tau_matrix(sys: System, n: usize) -> Result<SymbolMatrix, SymbolError> {
    if n == 0 {
        return Err(SymbolError::ZeroDimension);
    }
    let dom = TauDomain::new(sys, n);
    let f = dom.frame;
    let d = f.dim();
    let (s, c) = (f.s(), f.c());
    let fl = |a: usize| frame_label(a, n);
    let mut m = SymbolMatrix::new(dom.len(), dom.labels());
    for (a, b) in (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))) {
        let mut row = dom.zero();
        row[dom.first + a * d + b] = 1;
        row[dom.first + b * d + a] = -1;
        m.push(label("sym_C", &[fl(a), fl(b)]), row);
    }
    match sys {
        System::P1 => {
            for a in 0..d {
                for b in 0..d {
                    let (x, y) = (f.e(a), f.e(b));
                    let mut row = dom.zero();
                    dom.b_s(&mut row, &f.j(&x), &f.h(&y), 1);
                    dom.b_s(&mut row, &f.h(&y), &f.j(&x), -1);
                    dom.b_s(&mut row, &f.j(&y), &f.h(&x), -1);
                    dom.b_s(&mut row, &f.h(&x), &f.j(&y), 1);
                    m.push(label("τ1_S", &[fl(a), fl(b)]), row);
                }
            }
            for a in 0..d {
                let mut row = dom.zero();
                dom.b_s(&mut row, &f.e(a), &s, 1);
                m.push(label("τ2_S", &[fl(a)]), row);
            }
            for a in 0..d {
                for b in 0..d {
                    let (x, jy) = (f.e(a), f.j(&f.e(b)));
                    let mut row = dom.zero();
                    dom.b_s(&mut row, &x, &jy, 1);
                    dom.b_c(&mut row, &x, &jy, 1);
                    m.push(label("τ1_SC", &[fl(a), fl(b)]), row);
                }
            }
            for a in 0..d {
                let x = f.e(a);
                let mut row = dom.zero();
                dom.b_s(&mut row, &c, &f.h(&x), 1);
                dom.b_c(&mut row, &s, &f.j(&x), -1);
                dom.b_c(&mut row, &f.h(&x), &c, 1);
                m.push(label("τ2_SC", &[fl(a)]), row);
            }
        }
        System::P2 => {
            for a in 0..d {
                for b in 0..d {
                    for e in 0..d {
                        let (x, y, z) = (f.e(a), f.e(b), f.e(e));
                        let mut r1 = dom.zero();
                        let mut r2 = dom.zero();
                        for (p, q, r) in [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)] {
                            dom.b_gamma(&mut r1, &f.h(p), q, r, 1);
                            dom.b_gamma(&mut r2, &f.j(p), q, r, 1);
                        }
                        m.push(label("τ1_Γ", &[fl(a), fl(b), fl(e)]), r1);
                        m.push(label("τ2_Γ", &[fl(a), fl(b), fl(e)]), r2);
                    }
                }
            }
            for a in 0..d {
                for b in 0..d {
                    let (x, y) = (f.e(a), f.e(b));
                    let mut row = dom.zero();
                    dom.b_gamma(&mut row, &c, &x, &y, 1);
                    dom.b_c(&mut row, &f.h(&x), &f.j(&y), -2);
                    dom.b_c(&mut row, &f.h(&y), &f.j(&x), 2);
                    m.push(label("2τ_ΓC", &[fl(a), fl(b)]), row);
                }
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_operator_ranks() {
        let pg = symbol_matrix(Operator::PGamma, 2, 2).unwrap();
        assert_eq!((pg.nrows(), pg.ncols), (1, 10));
        assert_eq!(pg.rank(), 1);
        assert_eq!(pg.kernel_dim(), 9);
        assert_eq!(symbol_matrix(Operator::PC, 2, 2).unwrap().rank(), 4);
        assert_eq!(symbol_matrix(Operator::PGamma, 3, 2).unwrap().nrows(), 4);
    }

    #[test]
    fn undefined_combinations() {
        assert!(matches!(
            symbol_matrix(Operator::PS, 1, 2),
            Err(SymbolError::Undefined { .. })
        ));
        assert!(symbol_matrix(Operator::PGamma, 1, 2).is_err());
    }

    #[test]
    fn small_system_kernels() {
        assert_eq!(system_symbol(System::P1, 2, 2).unwrap().kernel_dim(), 5);
        assert_eq!(system_symbol(System::P1, 3, 2).unwrap().kernel_dim(), 7);
        assert_eq!(system_symbol(System::P2, 3, 3).unwrap().kernel_dim(), 22);
    }

    #[test]
    fn small_tau_kernels() {
        assert_eq!(tau_matrix(System::P1, 2).unwrap().kernel_dim(), 13);
        assert_eq!(tau_matrix(System::P2, 2).unwrap().kernel_dim(), 13);
        assert_eq!(tau_matrix(System::P1, 3).unwrap().kernel_dim(), 30);
    }

    #[test]
    fn pair_indices_are_lexicographic() {
        let n = 5;
        for (r, (i, j)) in pairs(n).into_iter().enumerate() {
            assert_eq!(pair_index(i, j, n), r);
        }
    }
}
