//! Deterministic sampling of points of the slit tangent bundle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::point::TangentPoint;

/// Sampling region: `x` uniform in a box, `y` uniform in direction with
/// `|y|` uniform in `[y_min, y_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub x_lo: Vec<f64>,
    pub x_hi: Vec<f64>,
    pub y_min: f64,
    pub y_max: f64,
}

impl SampleBox {
    /// `[-1, 1]^n` with the annulus `0.5 <= |y| <= 2`.
    pub fn unit(n: usize) -> Self {
        SampleBox {
            x_lo: vec![-1.0; n],
            x_hi: vec![1.0; n],
            y_min: 0.5,
            y_max: 2.0,
        }
    }

    pub fn with_x(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        SampleBox {
            x_lo: lo,
            x_hi: hi,
            y_min: 0.5,
            y_max: 2.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.x_lo.len()
    }
}

pub fn sample_points(region: &SampleBox, count: usize, seed: u64) -> Vec<TangentPoint> {
    let n = region.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x: Vec<f64> = (0..n)
                .map(|i| rng.gen_range(region.x_lo[i]..=region.x_hi[i]))
                .collect();
            let y = loop {
                let dir: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1e-6 {
                    let r = rng.gen_range(region.y_min..=region.y_max);
                    break dir.into_iter().map(|v| v * r / norm).collect::<Vec<f64>>();
                }
            };
            TangentPoint { x, y }
        })
        .collect()
}
