//! Executable finite truncations of rank computations on non-archimedean
//! CLI Polish groups: ordinals in Cantor normal form, well-founded tree
//! ranks, orbit trees of subgroup chains, balanced ranks, group
//! constructions and the block unitriangular matrix group.

pub mod constructions;
pub mod extension;
pub mod groups;
pub mod ordinal;
pub mod random;
pub mod report;
pub mod trees;
pub mod ugroup;
pub mod verify;

pub use ordinal::{Ordinal, OrdinalKind};
pub use report::{Case, Report, Status};

/// Outcome of a computation that may not close inside a finite truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Truncated<T> {
    Closed(T),
    ExceedsTruncation,
}

impl<T> Truncated<T> {
    pub fn closed(self) -> Option<T> {
        match self {
            Truncated::Closed(v) => Some(v),
            Truncated::ExceedsTruncation => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Truncated::Closed(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Truncated<U> {
        match self {
            Truncated::Closed(v) => Truncated::Closed(f(v)),
            Truncated::ExceedsTruncation => Truncated::ExceedsTruncation,
        }
    }
}

impl<T: std::fmt::Display> std::fmt::Display for Truncated<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Truncated::Closed(v) => v.fmt(f),
            Truncated::ExceedsTruncation => f.write_str("exceeds truncation"),
        }
    }
}
