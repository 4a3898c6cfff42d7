//! Interpretability logic over Veltman semantics.
//!
//! The crate covers formulas and their surface syntax, frames and forcing,
//! the frame conditions for the logics IL, ILM0, ILW and ILW*, the closure
//! operators that repair quasi-frames, bounded countermodel search, and a
//! step-by-step model construction driven by a label oracle.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod closure;
pub mod conditions;
pub mod construct;
pub mod formula;
pub mod model;
pub mod relations;
pub mod report;
pub mod search;

pub use formula::{parse, print, Formula};
pub use model::{Frame, Label, LabeledFrame, Model};
pub use report::Report;
