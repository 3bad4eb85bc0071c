//! String and graph-map calculus for special biserial algebras.
//!
//! Presentations `kQ/(ρ)` are parsed and validated in [`presentation`];
//! [`strings`] implements the word calculus, [`modules`] builds explicit
//! matrix representations, [`graph_maps`] the homomorphism bases,
//! [`stable`] and [`ext`] the stable category and first extension groups,
//! and [`scan`] a seeded random search over instances.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod ext;
pub mod field;
pub mod graph_maps;
pub mod linalg;
pub mod modules;
pub mod presentation;
pub mod scan;
pub mod stable;
pub mod strings;

pub use algebra::Algebra;
pub use error::{Error, Result};
pub use field::{Field, Fp, Rational};
