//! Exact computations for syzygy and extension bundles on K3 surfaces.
//!
//! * [`lattice`]: Euler characteristics, moduli dimensions, the syzygy and
//!   extension transforms of numerical invariants and the dimension-doubling
//!   identities between them.
//! * [`ring`]: graded pieces of `k[x0..x3] / (f)` with normal forms and
//!   multiplication matrices, over the rationals or a prime field.
//! * [`koszul`]: Koszul differentials of a space of forms and the kernel
//!   dimensions that compute sections of exterior powers of its syzygy bundle.
//! * [`stability`]: the cohomological stability criterion and a search for
//!   destabilizing line subbundles.

pub mod error;
pub mod field;
pub mod form;
pub mod io;
pub mod koszul;
pub mod lattice;
pub mod linalg;
pub mod monomial;
pub mod random;
pub mod ring;
pub mod stability;

pub use error::{Error, Result};
