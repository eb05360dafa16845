//! Quiver mutation engine.
//!
//! * [`quiver`]: exchange-matrix quivers and mutation.
//! * [`canon`]: canonical forms, isomorphism and induced-subquiver search.
//! * [`class`]: mutation-class enumeration and seeded mutation walks.
//! * [`surface`]: triangulated marked surfaces, flips and the quivers they
//!   define, neighborhood cases of an arc, and the point-adding constructions.
//! * [`generators`]: named quiver and triangulation families.
//! * [`verify`]: executable checks producing a pass/fail report per claim.
//! * [`session`]: bounded in-memory session store backing the HTTP service.

pub mod canon;
pub mod class;
pub mod generators;
pub mod quiver;
pub mod rng;
pub mod session;
pub mod surface;
pub mod verify;

pub use canon::{are_isomorphic, canonical_form, canonical_key, embeds_as_full_subquiver, CanonicalKey};
pub use class::{
    constant_arrow_verdict, enumerate_class, random_mutation_walk, ClassError, ClassReport, Verdict, WalkReport,
};
pub use generators::{ExceptionalName, GeneratorError, Witness};
pub use quiver::{DegreePair, Quiver, QuiverError};
pub use surface::{CaseLabel, EdgeKind, MarkedSurface, SurfaceError, Triangulation};
pub use verify::{ClaimResult, ClaimStatus, VerifyError};

/// Any error raised by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Session(#[from] session::SessionError),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}
