//! Grothendieck topologies on the path category of a finite acyclic quiver,
//! and sheaf conditions for presheaves of vector spaces, decided by exact
//! rational linear algebra.
//!
//! ```
//! use quiver_sheaves::presheaf::Presheaf;
//! use quiver_sheaves::quiver::Quiver;
//! use quiver_sheaves::sheaf::is_sheaf;
//! use quiver_sheaves::sieve::{TopologySpec, DEFAULT_SIEVE_LIMIT};
//!
//! let q = Quiver::build(&["a", "b", "c"], &[("e1", "a", "b"), ("e2", "b", "c")]);
//! let f = Presheaf::constant(&q, 2);
//! let verdict = is_sheaf(&f, &TopologySpec::Discrete { include_empty: false }, DEFAULT_SIEVE_LIMIT).unwrap();
//! assert!(verdict.holds);
//! ```

mod error;
pub mod functors;
pub mod io;
pub mod linalg;
pub mod presheaf;
pub mod quiver;
pub mod report;
pub mod sheaf;
pub mod sieve;

pub use error::{FunctorError, LinalgError, ParseError, PresheafError, QuiverError, SieveError};
