//! Ideal admissible domains for Scherk-type graphs of constant mean curvature
//! `H < 1/2` in the hyperbolic plane: explicit curved quadrilaterals, their
//! perturbed extensions along side pairs, and iterated exhaustions.
//!
//! Geometry lives in the upper half-plane model. Truncated side lengths have
//! a closed form; areas come from adaptive quadrature in each cell's
//! standard chart.

pub mod arcs;
pub mod cli;
pub mod compare;
pub mod domain;
pub mod error;
pub mod exhaust;
pub mod extend;
pub mod hyp2;
pub mod numerics;
pub mod regions;
pub mod render;
pub mod report;

pub use error::{Error, Result};
