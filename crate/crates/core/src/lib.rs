//! Exact computation of shards of reflection arrangements, bricks of
//! finite-type preprojective algebras, and King semistability regions, with
//! exhaustive verification suites for small simply-laced Dynkin types.
//!
//! All arithmetic is exact: group elements are integer matrices, chambers and
//! witnesses are rational points, modules are rational matrix tuples, and
//! every stability verdict is a finite list of exact sign tests.

pub mod algebra;
pub mod arrangement;
pub mod coxeter;
pub mod error;
pub mod rep;
pub mod linalg;
pub mod model;
pub mod poset;
pub mod shards;
pub mod stability;

pub use error::{Error, Result};
