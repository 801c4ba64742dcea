//! Spray geometry, projective Finsler metrizability operators and exact
//! symbol computations.

pub mod cli;
pub mod config;
pub mod expr;
pub mod fixtures;
pub mod geometry;
pub mod jets;
pub mod multi_index;
pub mod operators;
pub mod point;
pub mod sampling;
pub mod symbols;
