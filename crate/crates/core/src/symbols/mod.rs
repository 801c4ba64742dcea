//! Symbol calculus of the Rapcsák systems as exact integer linear algebra.
//!
//! Everything lives in the abstract adapted frame `(h_1..h_n, v_1..v_n)`
//! with `h_n = S` and `v_n = C`, where `h`, `J`, `S` and `C` act by fixed
//! integer matrices. The resulting dimensions therefore do not depend on a
//! particular spray.

mod audit;
mod basis;
pub mod exact;
mod maps;

use thiserror::Error;

pub use audit::{
    closed_form, exactness_check, involutivity_audit, restricted_kernel_dims, symbol_audit,
    DimensionCheck, ExactnessReport, FormulaDiscrepancy, SymbolAudit, SystemAudit, MAX_AUDIT_N,
};
pub use basis::{eval_row, frame_label, FlagBasis, Frame, FrameVec, SymTensorBasis};
pub use maps::{
    pair_index, symbol_matrix, system_symbol, tau_matrix, Operator, SymbolMatrix, System,
};

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("symbol order {0} is not supported (expected 1, 2 or 3)")]
    UnsupportedOrder(usize),
    #[error("σ{k}({op}) is not defined")]
    Undefined { op: Operator, k: usize },
    #[error("dimension n must be at least 1")]
    ZeroDimension,
    #[error("flag basis {0} is singular")]
    SingularBasis(String),
    #[error("{0}")]
    Shape(String),
    #[error("n range {n_min}..={n_max} is invalid (need 1 <= n_min <= n_max <= {max})")]
    Range {
        n_min: usize,
        n_max: usize,
        max: usize,
    },
}

/// `binom(2n + k - 1, k)`.
pub fn sym_dim(k: usize, n: usize) -> usize {
    crate::multi_index::count_sorted(k, 2 * n)
}
