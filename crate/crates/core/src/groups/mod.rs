//! Enumerated permutation groups, subgroup chains, orbit trees and balanced
//! ranks.

pub mod balanced;
pub mod chain;
pub mod gset;
pub mod orbit;
pub mod perm;
pub mod reduction;
pub mod table;

use thiserror::Error;

pub use balanced::{balanced_rank_group, balanced_rank_open, finite_case_check, FiniteCaseReport, OpenRank};
pub use chain::{ChainSpec, LevelSpec, PermGroupChain, DEFAULT_CAP};
pub use gset::{ClassSet, CosetSpace, ExplicitGSet, GSet, Points};
pub use orbit::{build_orbit_tree, orbit_partition, orbit_tree_of, EqChain, OrbitTree, Partition};
pub use perm::{Elem, Perm, PermGroup, Subgroup};
pub use reduction::{reduction_transfer, ReductionReport};
pub use table::CayleyTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<u32>),
    #[error("permutation has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group has more than {cap} elements")]
    CapExceeded { cap: usize },
    #[error("chain has no levels")]
    EmptyChain,
    #[error("level {level} generator {generator} is not in the previous level")]
    NotDecreasing { level: usize, generator: String },
    #[error("{0} is not an element of the group")]
    NotInGroup(String),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("level {level} is past the truncation depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("invalid action: {0}")]
    BadAction(String),
    #[error("invalid partition chain: {0}")]
    BadPartition(String),
    #[error("invalid map: {0}")]
    BadMap(String),
    #[error("map is not injective: {point} maps to {image}, which is already taken")]
    NotInjective { point: usize, image: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// Orbits of level `n` of a chain on its points.
pub fn chain_orbit_partition(chain: &PermGroupChain, level: usize) -> Result<Partition, GroupError> {
    let h = chain.levels().get(level).ok_or(GroupError::LevelOutOfRange {
        level,
        depth: chain.depth(),
    })?;
    Ok(orbit_partition(&Points::new(chain.group().clone()), h))
}

/// Which G-set an orbit tree is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitSet {
    Points,
    /// `X(𝒢) = ⋃_{n≤d} G/G_n`.
    Cosets,
}

/// `X(𝒢)` truncated at the chain's depth.
pub fn coset_space(chain: &PermGroupChain, cap: usize) -> Result<CosetSpace, GroupError> {
    let blocks: Vec<(usize, &Subgroup)> = chain.levels().iter().enumerate().collect();
    CosetSpace::new(chain.group().clone(), &blocks, cap)
}

/// `T_𝒢^X` for the chain's own levels.
pub fn chain_orbit_tree(chain: &PermGroupChain, set: OrbitSet, plus: bool, cap: usize) -> Result<OrbitTree, GroupError> {
    Ok(match set {
        OrbitSet::Points => orbit_tree_of(&Points::new(chain.group().clone()), chain.levels(), plus),
        OrbitSet::Cosets => orbit_tree_of(&coset_space(chain, cap)?, chain.levels(), plus),
    })
}
