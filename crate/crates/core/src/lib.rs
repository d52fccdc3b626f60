//! Exact minimum-weight parity bases of linearly represented matroids.
//!
//! Given an `m × n` matrix over a prime field whose columns are paired into
//! weighted lines, a *parity base* is a column base made of whole lines. This
//! crate finds one of minimum weight with a deterministic primal–dual
//! augmenting-path algorithm that maintains blossoms, bud/tip vertices and
//! exact rational dual variables, and emits a certificate of optimality that
//! can be checked independently.
//!
//! Module map:
//! - [`field`]: GF(p) arithmetic and exact rationals;
//! - [`linalg`]: labeled dense matrices, cocircuit matrices and pivoting;
//! - [`instance`]: the problem model, file format and generators;
//! - [`solver`]: the primal–dual algorithm;
//! - [`certificate`]: optimality certificates and their verifier;
//! - [`oracle`]: enumeration and Pfaffian-degree ground truth;
//! - [`rational`]: the multi-prime driver for integer matrices.

pub mod certificate;
pub mod field;
pub mod instance;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod solver;
