//! Integer invariants of discretized Lagrangian surfaces.
//!
//! The crate works on a triangulated closed oriented surface carrying
//! per-vertex tangent frames and computes two kinds of invariants:
//!
//! * the winding multiplicity of the relative fiber automorphism between two
//!   symplectic forms along the zero section of the cotangent bundle
//!   ([`lambda`]), and
//! * the homotopy class `(c, d mod n)` of a map from the identified double
//!   cone `X = L×[0,1]/L×{0,1}` to the 2-sphere ([`classifier`]), which is the
//!   invariant attached to a discretized surface isotopy.
//!
//! All combinatorial topology (cycles, boundaries, Smith normal forms,
//! preimage crossings) is exact; floating point only enters through angle
//! extraction and the construction of complex structures.

pub mod classifier;
pub mod digest;
pub mod error;
pub mod exact;
pub mod forms;
pub mod homology;
pub mod io;
pub mod lambda;
pub mod mesh;
pub mod snf;
pub mod suspension;
pub mod winding;

pub use error::{Error, Result};
