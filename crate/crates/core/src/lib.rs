//! Identifying, locating-dominating and self-identifying codes in circulant
//! graphs: verification, explicit constructions, lower bounds, transport to
//! infinite grids and an exact solver.
//!
//! ```
//! use circulant_codes::{CirculantGraph, Code, CodeKind, verify};
//!
//! let g = CirculantGraph::new(40, &[1, 4]).unwrap();
//! let c = Code::from_vertices(40, &[0, 1, 2, 8, 10, 12, 16, 18, 22, 24, 26, 32, 33, 34]).unwrap();
//! assert!(verify(&g, &c, CodeKind::Id).pass);
//! ```

pub mod bitset;
pub mod bounds;
pub mod circulant;
pub mod constructions;
pub mod error;
pub mod grid;
pub mod io;
pub mod solver;
pub mod sweep;
pub mod verifier;

pub use bitset::VertexSet;
pub use bounds::{best_lower_bound, exact_sid_value, exact_value, BoundReport};
pub use circulant::{CirculantGraph, Code, IdentifierSet, Shape, Vertex};
pub use constructions::{construct, constructions_for, ConstructionResult, FamilyId, FamilyParams};
pub use error::{Error, Result};
pub use grid::{grid_density, grid_verify, lift, Density, GridKind, PeriodicGridCode};
pub use io::CodeDocument;
pub use solver::{is_optimal, min_code_size, Optimality, SolveRequest, SolveResult, SolveStatus};
pub use verifier::{verify, CodeKind, VerificationReport, Witness};
