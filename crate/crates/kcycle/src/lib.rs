//! Decides whether a graph contains a simple cycle through a given set of
//! terminal vertices, and compresses such questions to small algebraic
//! certificates.
//!
//! The decision procedure works over GF(2^64): the instance is rewritten so
//! that the cycle question becomes a question about determinants of a
//! symbolic matrix, the determinants are evaluated at random points, and a
//! nonzero value is exact proof that the cycle exists. Zero answers are
//! wrong with probability at most `n / 2^64` per determinant.

pub mod compress;
pub mod encode;
pub mod field;
pub mod gen;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod solver;
