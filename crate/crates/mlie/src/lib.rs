//! Exact computations in graded truncations of the Monster Lie algebra 𝔪,
//! its pro-unipotent completions, and the group G(𝔪) given by generators and relations.
//!
//! Everything is exact: coefficients are [`scalar::Q`] rationals, and the infinite
//! objects are replaced by truncations to a finite window of grades.

pub mod freelie;
pub mod jfun;
pub mod monster;
pub mod operators;
pub mod presentation;
pub mod gl2groups;
pub mod roots;
pub mod scalar;
