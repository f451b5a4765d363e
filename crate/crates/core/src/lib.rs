//! Relative Heffter arrays, Archdeacon arrays, the Crazy Knight's Tour and
//! the cyclic cycle decompositions and biembeddings they induce.

pub mod constructions;
pub mod error;
mod format;
pub mod group;
pub mod heffter;
pub mod knight;
pub mod orderings;
pub mod pfarray;
pub mod topology;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec};
pub use heffter::{HeffterParams, VerificationReport, Violation, ViolationKind};
pub use knight::{Orientation, SearchOptions};
pub use orderings::Ordering;
pub use pfarray::{Cell, DiagSpec, PFArray};
