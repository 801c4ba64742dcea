use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointError {
    #[error("x has {x} coordinates but y has {y}")]
    LengthMismatch { x: usize, y: usize },
    #[error("point lies on the zero section (y = 0)")]
    ZeroFiber,
    #[error("point has dimension {got}, expected {expected}")]
    WrongDimension { got: usize, expected: usize },
}

/// A point `(x, y)` of the slit tangent bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl TangentPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, PointError> {
        if x.len() != y.len() {
            return Err(PointError::LengthMismatch {
                x: x.len(),
                y: y.len(),
            });
        }
        if y.iter().all(|v| *v == 0.0) {
            return Err(PointError::ZeroFiber);
        }
        Ok(TangentPoint { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Coordinates in the order `(x1..xn, y1..yn)`.
    pub fn coords(&self) -> Vec<f64> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    pub fn check_dim(&self, n: usize) -> Result<(), PointError> {
        if self.dim() != n {
            return Err(PointError::WrongDimension {
                got: self.dim(),
                expected: n,
            });
        }
        Ok(())
    }
}
