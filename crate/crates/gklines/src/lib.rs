//! Exact verification toolkit for the Galois-line arrangement of the
//! Giulietti–Korchmáros (GK) curve in projective 3-space over small
//! finite fields.
//!
//! The toolkit constructs the curve over `F_{q^6}` for `q = 2, 3`,
//! classifies every `F_{q^2}`-rational line of `P^3` as Galois or
//! non-Galois for the projection of the curve from that line, and
//! cross-checks the arrangement (and the corresponding census of
//! Galois points on the degree-`q^3+1` plane model) against the
//! expected closed-form description. Everything is computed with exact
//! finite-field arithmetic: no floats, no probabilistic shortcuts in
//! any verdict.
//!
//! The narrative guide lives in `book/`; build it with `mdbook build
//! book`. Its code snippets compile and run as doc-tests through the
//! `guide` crate.

pub mod autgroup;
pub mod cli;
pub mod ff;
pub mod galois;
pub mod gkcurve;
pub mod localmult;
pub mod polyseries;
pub mod projgeom;
pub mod report;
pub mod session;

pub use session::Session;

/// Crate-wide error type. Invariant violations that can only come from
/// internal bugs panic instead; these variants are for conditions a
/// caller can trigger or must react to.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field F_{{{p}^{k}}} exceeds the supported size")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("no irreducible modulus found for ({p},{k}); internal bug")]
    NoIrreducible { p: u64, k: u32 },
    #[error("{q} is not a power of the characteristic {p}")]
    NotPPower { q: u64, p: u64 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("no tower embedding from degree {src} to degree {dst}")]
    NoTowerPath { src: u16, dst: u16 },
    #[error("unsupported q = {0}; supported: 2, 3, 4, 5")]
    UnsupportedQ(u64),
    #[error("enumeration guard tripped: {0}")]
    EnumerationGuard(String),
    #[error("group closure exceeded the cap of {0} elements")]
    ClosureCap(usize),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("series precision exhausted (valuation >= {0})")]
    PrecisionExhausted(usize),
    #[error("cross-check mismatch: {0}")]
    CrossCheck(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
