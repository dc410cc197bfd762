//! Exact inference for coherent choice functions represented as sets of
//! desirable gamble sets.
//!
//! Given a finite assessment (a collection of gamble sets, each asserted to
//! contain at least one desirable gamble) the [`choice::Engine`] decides
//! consistency, decides membership in the natural extension, and evaluates
//! the induced choice and rejection functions. Every answer carries evidence
//! that [`operators`] can re-check independently.

pub mod choice;
pub mod desirability;
pub mod gambles;
pub mod laws;
pub mod operators;
pub mod query;
pub mod ratlp;
pub mod sampling;
pub mod selftest;

pub use choice::{
    BinarityReport, BinaryWitness, ChoiceOutcome, Engine, EngineConfig, EngineError, Evidence,
    ExecMode, NaturalExtension, Verdict,
};
pub use desirability::DesirGenerators;
pub use gambles::{Assessment, Gamble, GambleError, GambleSet, PossibilitySpace, Rational};
pub use operators::{CertificateDefect, InconsistencyCertificate, PosiCertificate};
pub use query::{Answer, Query, QueryFile};
