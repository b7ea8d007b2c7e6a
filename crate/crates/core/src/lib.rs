//! Exact reflective-lattice tools: root enumeration, Vinberg's algorithm and
//! edge walking on the fundamental polyhedron of a Lorentzian lattice.

pub mod arith;
pub mod batch0;
pub mod dynkin;
pub mod edgewalk;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod shortvec2d;
pub mod vinberg;

pub use error::{Error, Result};
