//! Exact computations in the mod-p (p an odd prime) opposite Lambda algebra,
//! the Dyer-Lashof algebra and the Dickson-Mui invariant algebras.
//!
//! The crate computes `Ext_A^{s,s+t}(F_p, F_p)` in bounded bidegree ranges as
//! the cohomology of the opposite Lambda algebra, realizes the chain-level
//! Lannes-Zarati projection onto the length-`s` part of the Dyer-Lashof
//! algebra, and cross-checks everything against the invariant-theoretic side
//! (`B[s]` inside `E(x_1..x_s) ⊗ F_p[y_1..y_s]`) through the kappa duality.
//!
//! All arithmetic is exact over F_p; there is no floating point anywhere.
//! Scalars are least nonnegative residues and every sign is realized as
//! multiplication by `p - 1`.

pub mod driver;
pub mod dyer_lashof;
pub mod ext;
pub mod fp;
pub mod invariants;
pub mod lambda;
pub mod lz;

mod memo;

use std::sync::Arc;

pub use fp::PrimeContext;
use memo::Memo;

/// Errors surfaced by the library. Falsification-style variants (duality
/// breaking down, an image escaping the annihilator) are kept distinct so the
/// CLI can map them to a dedicated exit code.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("p must be an odd prime, got {0}")]
    InvalidPrime(u32),
    #[error("dimension mismatch: vector has {found} columns, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("pair {0} {1} is already admissible")]
    AdmissiblePair(String, String),
    #[error("element mixes homological lengths")]
    MixedLength,
    #[error("element is not a cycle; its differential is {0}")]
    NotACycle(String),
    #[error("exterior row count {k} must satisfy k < p (p = {p})")]
    TooManyExteriorRows { k: usize, p: u32 },
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("uv monomial {0} does not admit the (eps, i >= 0) parametrization")]
    Unparametrizable(String),
    #[error("duality pairing at s={s}, t={t} failed: dim B[s] = {dim_b}, dim R_s = {dim_r}, invertible = {invertible}")]
    DualityFalsified {
        s: usize,
        t: i64,
        dim_b: usize,
        dim_r: usize,
        invertible: bool,
    },
    #[error("image at s={s}, t={t} lies outside Ann(R_s): {element}")]
    ImageOutsideAnn { s: usize, t: i64, element: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported configuration: {0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shared state for one prime: the arithmetic tables plus every compute-once
/// cache. All caches are concurrent get-or-compute with at-most-once
/// evaluation per key, so a `Context` can be shared freely across threads.
pub struct Context {
    pc: PrimeContext,
    adem: Memo<lambda::PairKey, lambda::LambdaElem>,
    gen_polys: Memo<invariants::GenKey, invariants::Poly>,
    gen_uv: Memo<invariants::GenKey, invariants::uv::UvElem>,
    bs_bases: Memo<(usize, i64), Arc<invariants::BsBasis>>,
    pairings: Memo<(usize, i64), std::result::Result<Arc<dyer_lashof::Pairing>, Error>>,
}

impl Context {
    pub fn new(p: u32) -> Result<Self> {
        Ok(Context {
            pc: PrimeContext::new(p)?,
            adem: Memo::new(),
            gen_polys: Memo::new(),
            gen_uv: Memo::new(),
            bs_bases: Memo::new(),
            pairings: Memo::new(),
        })
    }

    #[inline]
    pub fn pc(&self) -> &PrimeContext {
        &self.pc
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.pc.p()
    }
}
