//! Constant-dimension subspace codes over finite fields.
//!
//! The crate builds subspace codes in the Grassmannian G_q(n, k) from three
//! ingredients: lifted maximum-rank-distance codes, Echelon-Ferrers classes,
//! and a two-block coset construction that combines small codes on a prefix
//! and a suffix of the coordinates. On top of those sit packing optimizers
//! (spreads, parallelisms, greedy and exact decompositions), closed-form
//! cardinality bounds, and an independent brute-force verifier that certifies
//! minimum distances from the definition.
//!
//! All arithmetic is exact: field elements are table-driven, counts use
//! big integers, and nothing in the core path touches floating point.

pub mod gf;
pub mod matrix;
pub mod subspace;
pub mod metrics;
pub mod verify;
pub mod rank;
pub mod coset;
pub mod packing;
pub mod construct;
pub mod io;

pub use gf::{Field, FieldElement, FieldTower};
pub use matrix::{FerrersDiagram, FqMatrix, PivotVector};
pub use subspace::{Code, Subspace};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("mismatched fields: {0}")]
    FieldMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("missing A_q value: A_{q}({n},{d};{k}) not derivable and not in the table")]
    OracleGap { q: u32, n: usize, d: usize, k: usize },
    #[error("blueprint violation: {0}")]
    Blueprint(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
