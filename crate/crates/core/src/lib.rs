//! Verification toolkit for a non-minimal, pointwise recurrent, transitive
//! binary subshift and the shift-metric machinery around expansivity.
//!
//! * [`omega`] builds the words `ω_n`, evaluates ξ lazily and describes points.
//! * [`language`] computes factor sets, occurrences and gaps.
//! * [`recurrence`] runs claim sweeps and classifies points by return times.
//! * [`metric`] implements the first-disagreement metric and its probes.
//! * [`report`] holds the JSON envelope shared with the command line.

pub mod error;
pub mod exact;
pub mod language;
pub mod limits;
pub mod metric;
pub mod omega;
pub mod recurrence;
pub mod report;
pub mod word;

pub use error::{Error, Result};
pub use limits::Limits;
pub use omega::{omega_length, omega_word, point_at, reflect, xi_at, xi_segment, PointDescriptor};
pub use word::Word;
