//! Convex plane curves through their support functions: geometry, nonlocal
//! curvature flows, geometric inequalities and mixed areas.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod flows;
pub mod geometry;
pub mod inequalities;
pub mod io;
pub mod mixed;
pub mod random;
pub mod support;

pub use error::{Error, Result};
pub use flows::{run, FlowSpec, FlowTrace, StepControl, Termination};
pub use geometry::{summarize, CurveSummary};
pub use random::random_convex;
pub use support::{analyze, synthesize, FourierSupport, SampledField};
