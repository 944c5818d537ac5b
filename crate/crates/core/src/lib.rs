//! Object life cycle (OLC) driven process variant generation.
//!
//! The crate covers the whole flow from single-object life cycles to
//! verified process variants:
//!
//! - [`olc`]: object life cycles and their synchronized composition.
//! - [`model`]: a BPMN subset with object-state effects on tasks, its
//!   JSON and BPMN-XML forms, trace enumeration and DOT export.
//! - [`compliance`]: OLC conformance and coverage of process models.
//! - [`sequence`]: sequence diagrams and their break combined fragments.
//! - [`adaptation`]: inserting break fragments into an OLC.
//! - [`variant`]: inserting exception patterns into a base model and
//!   verifying the result against the adapted OLC.
//! - [`pipeline`]: adapt, generate and verify in one call.

pub mod adaptation;
pub mod compliance;
mod effect;
pub mod fixtures;
pub mod model;
pub mod olc;
pub mod pipeline;
mod report;
pub mod sequence;
pub mod variant;

pub use adaptation::{adapt_olc, get_position, insert_bcf, AdaptError, AdaptedOlc, Position, Selection};
pub use compliance::{check_compliance, check_conformance, check_coverage, ComplianceReport, ConformanceMode};
pub use effect::Effect;
pub use model::{enumerate_traces, parse_model, serialize_model, ModelFormat, ProcessModel};
pub use olc::{compose, olc_paths, CompositeOlc, Initiator, ObjectLifeCycle, SyncSpec};
pub use report::{Report, ValidationReport, Verdict, Violation, ViolationKind};
pub use sequence::{context_of, extract_bcfs, parse_sd, BreakCombinedFragment, SequenceDiagram};
pub use variant::{generate_variant, insert_pattern, verify_variant, ExceptionPattern, PatternKind};

/// Raised when trace or state-space exploration exceeds its cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("exploration exceeded the cap of {cap} traces/states")]
pub struct Explosion {
    pub cap: usize,
}
