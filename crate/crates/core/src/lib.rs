//! Exact computations on plane curves over finite fields, aimed at plane
//! maximal curves of degree `(sqrt(q)+1)/2` and the Fermat curve.

pub mod catalog;
pub mod cli;
pub mod curve;
pub mod field;
pub mod invariants;
pub mod linalg;
pub mod linear_series;
pub mod local;
pub mod normalizer;
pub mod series;
pub mod specfile;
pub mod upoly;
