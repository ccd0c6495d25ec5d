//! Balanced rank `rk(V, U)` with `U` ranging over chain members.
//!
//! The recursion used throughout: `rk(V, G_n) = 0` iff `G_n ⊆ V`, and
//! otherwise `rk(V, G_n) = 1 + min_{m>n} max_{g∈G_n} rk(g⁻¹Vg, G_m)`.
//! For `V = G_a` the conjugates are the stabilizers of the points in the
//! orbit `G_n·a`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::chain::PermGroupChain;
use super::gset::Points;
use super::orbit::{orbit_of, orbit_tree_of};
use super::perm::{Elem, Subgroup};
use super::GroupError;
use crate::Truncated;

/// `rk(G_a, G_n)` together with the least level closing the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpenRank {
    pub rank: Truncated<usize>,
    /// Least `m` realising the rank when it is positive.
    pub witness: Option<usize>,
}

pub struct BalancedRank<'a> {
    chain: &'a PermGroupChain,
    points: Points,
    memo: HashMap<(usize, usize), OpenRank>,
}

impl<'a> BalancedRank<'a> {
    pub fn new(chain: &'a PermGroupChain) -> Self {
        BalancedRank {
            chain,
            points: Points::new(chain.group().clone()),
            memo: HashMap::new(),
        }
    }

    fn last_level(&self) -> usize {
        self.chain.depth()
    }

    /// `rk(G_a, G_n)`.
    pub fn open_rank(&mut self, a: usize, n: usize) -> Result<OpenRank, GroupError> {
        if a >= self.chain.degree() {
            return Err(GroupError::PointOutOfRange {
                point: a,
                degree: self.chain.degree(),
            });
        }
        Ok(self.open_rank_inner(a, n))
    }

    fn open_rank_inner(&mut self, a: usize, n: usize) -> OpenRank {
        if let Some(r) = self.memo.get(&(a, n)) {
            return *r;
        }
        let r = self.compute(a, n);
        self.memo.insert((a, n), r);
        r
    }

    fn compute(&mut self, a: usize, n: usize) -> OpenRank {
        let Some(level) = self.chain.level(n) else {
            return OpenRank {
                rank: Truncated::ExceedsTruncation,
                witness: None,
            };
        };
        let gens: Vec<Elem> = level.generators().to_vec();
        if gens.iter().all(|&g| self.chain.group().act(g, a) == a) {
            return OpenRank {
                rank: Truncated::Closed(0),
                witness: None,
            };
        }
        let orbit = orbit_of(&self.points, &gens, a);
        let mut best: Option<(usize, usize)> = None;
        for m in n + 1..=self.last_level().max(n + 1) {
            if self.chain.level(m).is_none() {
                break;
            }
            let mut worst = Some(0);
            for &b in &orbit {
                match self.open_rank_inner(b, m).rank {
                    Truncated::Closed(v) => worst = worst.map(|w: usize| w.max(v)),
                    Truncated::ExceedsTruncation => {
                        worst = None;
                        break;
                    }
                }
            }
            if let Some(w) = worst {
                if best.is_none_or(|(v, _)| w + 1 < v) {
                    best = Some((w + 1, m));
                }
            }
        }
        match best {
            Some((v, m)) => OpenRank {
                rank: Truncated::Closed(v),
                witness: Some(m),
            },
            None => OpenRank {
                rank: Truncated::ExceedsTruncation,
                witness: None,
            },
        }
    }

    /// `rk(G) = sup{rk(G_a, G₀) + 1}`; zero on the empty point set.
    pub fn group_rank(&mut self) -> Truncated<usize> {
        let mut best = 0;
        for a in 0..self.chain.degree() {
            match self.open_rank_inner(a, 0).rank {
                Truncated::Closed(v) => best = best.max(v + 1),
                Truncated::ExceedsTruncation => return Truncated::ExceedsTruncation,
            }
        }
        Truncated::Closed(best)
    }
}

pub fn balanced_rank_open(chain: &PermGroupChain, a: usize, n: usize) -> Result<OpenRank, GroupError> {
    BalancedRank::new(chain).open_rank(a, n)
}

pub fn balanced_rank_group(chain: &PermGroupChain) -> Truncated<usize> {
    BalancedRank::new(chain).group_rank()
}

/// `rk(V, G_n)` for an arbitrary subgroup `V`, by the conjugate recursion.
pub struct SubgroupRank<'a> {
    chain: &'a PermGroupChain,
    memo: HashMap<(Vec<Elem>, usize), Truncated<usize>>,
}

impl<'a> SubgroupRank<'a> {
    pub fn new(chain: &'a PermGroupChain) -> Self {
        SubgroupRank {
            chain,
            memo: HashMap::new(),
        }
    }

    pub fn rank(&mut self, v: &Subgroup, n: usize) -> Truncated<usize> {
        let key = (v.elements().to_vec(), n);
        if let Some(r) = self.memo.get(&key) {
            return *r;
        }
        let r = self.compute(v, n);
        self.memo.insert(key, r);
        r
    }

    fn compute(&mut self, v: &Subgroup, n: usize) -> Truncated<usize> {
        let Some(level) = self.chain.level(n).cloned() else {
            return Truncated::ExceedsTruncation;
        };
        if level.is_subset(v) {
            return Truncated::Closed(0);
        }
        let mut conjugates: Vec<Subgroup> = Vec::new();
        let mut seen = BTreeSet::new();
        for &g in level.elements() {
            let c = v.conjugate_by_inverse(g);
            if seen.insert(c.elements().to_vec()) {
                conjugates.push(c);
            }
        }
        let mut best: Option<usize> = None;
        for m in n + 1..=self.chain.depth().max(n + 1) {
            if self.chain.level(m).is_none() {
                break;
            }
            let mut worst = Some(0usize);
            for c in &conjugates {
                match self.rank(c, m) {
                    Truncated::Closed(x) => worst = worst.map(|w| w.max(x)),
                    Truncated::ExceedsTruncation => {
                        worst = None;
                        break;
                    }
                }
            }
            if let Some(w) = worst {
                best = Some(best.map_or(w + 1, |b| b.min(w + 1)));
            }
        }
        best.map_or(Truncated::ExceedsTruncation, Truncated::Closed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteCaseReport {
    pub point: usize,
    pub level: usize,
    pub rank: Truncated<usize>,
    pub witness: Option<usize>,
    /// `ρ_T(n, G_n·a)`, absent when the orbit is a singleton.
    pub node_rank: Option<usize>,
    /// `max{0, m−n−1}` when the rank is 1.
    pub bound: Option<usize>,
    /// The node's subtree stops before the last level (or the chain closes).
    pub stabilizes: bool,
    pub holds: bool,
}

/// Compares `rk(G_a, G_n)` with the node `(n, G_n·a)` of the orbit tree of
/// the chain on points: rank 0 iff the node is absent, rank 1 with least
/// witness `m` iff the node has rank `m−n−1 ≤ max{0, m−n−1}`, and rank at
/// most 1 iff the node's subtree stabilizes inside the truncation.
pub fn finite_case_check(chain: &PermGroupChain, a: usize, n: usize) -> Result<FiniteCaseReport, GroupError> {
    let mut br = BalancedRank::new(chain);
    let r = br.open_rank(a, n)?;
    let points = Points::new(chain.group().clone());
    let tree = orbit_tree_of(&points, chain.levels(), false);
    finite_case_against(chain, &tree, a, n, r)
}

pub(crate) fn finite_case_against(
    chain: &PermGroupChain,
    tree: &super::orbit::OrbitTree,
    a: usize,
    n: usize,
    r: OpenRank,
) -> Result<FiniteCaseReport, GroupError> {
    let node_rank = match tree.node_of(n, a) {
        Some(id) => Some(tree.tree().rank_node(id).map_err(|e| GroupError::BadPartition(e.to_string()))?),
        None => None,
    };
    let stabilizes = chain.closes() || node_rank.is_none_or(|k| n + k < chain.depth());
    let bound = match (r.rank, r.witness) {
        (Truncated::Closed(1), Some(m)) => Some((m as isize - n as isize - 1).max(0) as usize),
        _ => None,
    };
    let within_depth = n <= chain.depth();
    let holds = match r.rank {
        Truncated::Closed(0) => node_rank.is_none() && stabilizes,
        Truncated::Closed(1) => {
            let m = r.witness.unwrap_or(0);
            node_rank == Some(m - n - 1) && bound.is_some_and(|b| node_rank.unwrap_or(0) <= b) && stabilizes
        }
        Truncated::Closed(_) => false,
        Truncated::ExceedsTruncation => !within_depth || !stabilizes,
    };
    Ok(FiniteCaseReport {
        point: a,
        level: n,
        rank: r.rank,
        witness: r.witness,
        node_rank,
        bound,
        stabilizes,
        holds,
    })
}

/// Runs [`finite_case_check`] on every point and every level.
pub fn finite_case_sweep(chain: &PermGroupChain) -> Vec<FiniteCaseReport> {
    let mut br = BalancedRank::new(chain);
    let points = Points::new(chain.group().clone());
    let tree = orbit_tree_of(&points, chain.levels(), false);
    let mut out = Vec::new();
    for n in 0..=chain.depth() {
        for a in 0..chain.degree() {
            let r = br.open_rank(a, n).expect("point in range");
            out.push(finite_case_against(chain, &tree, a, n, r).expect("tree node"));
        }
    }
    out
}
