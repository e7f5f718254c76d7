//! Construction and analysis of CSS quantum LDPC codes.
//!
//! The crate covers the full pipeline used by the `qtrap` CLI:
//!
//! - [`gf2`]: dense bit-packed linear algebra over GF(2) (rank, kernels,
//!   row-space membership)
//! - [`codes`]: code constructions — generalized bicycle from circulant
//!   polynomials, hypergraph products, quasi-cyclic matrices from exponent
//!   tables — plus logical-operator extraction
//! - [`alist`]: reading and writing sparse parity-check matrices in the
//!   conventional alist text format
//! - [`tanner`]: Tanner graphs, girth, exact simple-cycle censuses, induced
//!   subgraphs
//! - [`trapping`]: enumeration and classification of trapping sets, both
//!   classical-type (cycle-bearing subsets with few odd-degree checks) and
//!   symmetric-stabilizer type, and per-pattern decoder probing
//! - [`decoder`]: syndrome-based iterative decoders (Gallager-B, min-sum,
//!   sum-product) under flooding or column-layered schedules
//! - [`sim`]: Monte-Carlo harness — error sampling, residual classification,
//!   frame-error-rate sweeps with worker-count-independent reproducibility

pub mod alist;
pub mod codes;
pub mod decoder;
pub mod gf2;
pub mod sim;
pub mod tanner;
pub mod trapping;

pub use codes::CssCode;
pub use gf2::{BitMatrix, BitVec};
pub use tanner::TannerGraph;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Matrix/vector shapes do not line up for the requested operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An argument is outside the supported range or otherwise malformed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A text input (alist, code spec, decoder spec) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The X and Z checks fail the symplectic inner product constraint;
    /// the offending row pair is reported.
    #[error("checks do not commute: h_x row {row_x} anticommutes with h_z row {row_z}")]
    SipViolation { row_x: usize, row_z: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
