//! Finite well-founded trees and relations with exact rank functions.
//!
//! A [`WfTree`] is a finite forest. Node order is ancestry: `s < t` when `s`
//! is a strict ancestor of `t`, so roots are the minimal elements and the
//! rank of a node is the height of the subtree hanging from it.

mod export;
mod relation;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use export::to_dot;
pub use relation::{build_lex_relation, LexRelationReport, WfRelation};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub level: usize,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("duplicate node id {0}")]
    DuplicateId(NodeId),
    #[error("node {node} refers to unknown parent {parent}")]
    UnknownParent { node: NodeId, parent: NodeId },
    #[error("node {node} has level {found}, expected {expected}")]
    BadLevel {
        node: NodeId,
        expected: usize,
        found: usize,
    },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("level bound needs m > k (got k={k}, m={m})")]
    LevelOrder { k: usize, m: usize },
    #[error("map is undefined on node {0}")]
    MapNotTotal(NodeId),
    #[error("map sends node {node} to {target}, which is not in the target tree")]
    MapOutOfRange { node: NodeId, target: NodeId },
    #[error("relation contains a cycle through {0}")]
    NotWellFounded(String),
    #[error("relation refers to element {0} outside its carrier")]
    UnknownElement(String),
}

/// A finite forest with level-graded nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WfTree {
    nodes: Vec<Node>,
    index: HashMap<NodeId, usize>,
    children: Vec<Vec<usize>>,
    parent_idx: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    nodes: Vec<Node>,
}

impl Serialize for WfTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WfTree", 1)?;
        st.serialize_field("nodes", &self.nodes)?;
        st.end()
    }
}

impl WfTree {
    pub fn empty() -> Self {
        WfTree {
            nodes: Vec::new(),
            index: HashMap::new(),
            children: Vec::new(),
            parent_idx: Vec::new(),
        }
    }

    /// Validates and indexes a node list. Nodes may come in any order.
    pub fn from_nodes(nodes: Vec<Node>) -> Result<Self, TreeError> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.id, i).is_some() {
                return Err(TreeError::DuplicateId(n.id));
            }
        }
        let mut parent_idx = Vec::with_capacity(nodes.len());
        let mut children = vec![Vec::new(); nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            match n.parent {
                None => {
                    if n.level != 0 {
                        return Err(TreeError::BadLevel {
                            node: n.id,
                            expected: 0,
                            found: n.level,
                        });
                    }
                    parent_idx.push(None);
                }
                Some(p) => {
                    let pi = *index.get(&p).ok_or(TreeError::UnknownParent {
                        node: n.id,
                        parent: p,
                    })?;
                    let expected = nodes[pi].level + 1;
                    if n.level != expected {
                        return Err(TreeError::BadLevel {
                            node: n.id,
                            expected,
                            found: n.level,
                        });
                    }
                    children[pi].push(i);
                    parent_idx.push(Some(pi));
                }
            }
        }
        // levels strictly increase along parent links, so there is no cycle
        Ok(WfTree {
            nodes,
            index,
            children,
            parent_idx,
        })
    }

    pub fn from_json(s: &str) -> Result<Self, TreeJsonError> {
        let file: TreeFile = serde_json::from_str(s)?;
        Ok(WfTree::from_nodes(file.nodes)?)
    }

    pub fn to_json(&self) -> String {
        let file = TreeFile {
            nodes: self.nodes.clone(),
        };
        serde_json::to_string_pretty(&file).expect("tree serialization")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.index.get(&id).map(|&i| &self.nodes[i])
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().map(|n| n.id)
    }

    pub fn roots(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(|n| n.parent.is_none()).map(|n| n.id)
    }

    pub fn children(&self, id: NodeId) -> Result<Vec<NodeId>, TreeError> {
        let i = self.idx(id)?;
        Ok(self.children[i].iter().map(|&c| self.nodes[c].id).collect())
    }

    /// `L_n(T)`.
    pub fn level_set(&self, n: usize) -> Vec<NodeId> {
        self.nodes.iter().filter(|s| s.level == n).map(|s| s.id).collect()
    }

    pub fn max_level(&self) -> Option<usize> {
        self.nodes.iter().map(|n| n.level).max()
    }

    fn idx(&self, id: NodeId) -> Result<usize, TreeError> {
        self.index.get(&id).copied().ok_or(TreeError::UnknownNode(id))
    }

    /// `s < t`: `s` is a strict ancestor of `t`.
    pub fn precedes(&self, s: NodeId, t: NodeId) -> Result<bool, TreeError> {
        let si = self.idx(s)?;
        let mut cur = self.parent_idx[self.idx(t)?];
        while let Some(c) = cur {
            if c == si {
                return Ok(true);
            }
            cur = self.parent_idx[c];
        }
        Ok(false)
    }

    /// Strict ancestors of `id`, nearest first.
    pub fn ancestors(&self, id: NodeId) -> Result<Vec<NodeId>, TreeError> {
        let mut out = Vec::new();
        let mut cur = self.parent_idx[self.idx(id)?];
        while let Some(c) = cur {
            out.push(self.nodes[c].id);
            cur = self.parent_idx[c];
        }
        Ok(out)
    }

    /// Ranks of all nodes, keyed by id, computed bottom-up through immediate
    /// children only.
    pub fn ranks(&self) -> BTreeMap<NodeId, usize> {
        let ranks = self.rank_vec();
        self.nodes.iter().zip(ranks).map(|(n, r)| (n.id, r)).collect()
    }

    fn rank_vec(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.nodes[i].level));
        let mut rank = vec![0usize; self.nodes.len()];
        for i in order {
            rank[i] = self.children[i].iter().map(|&c| rank[c] + 1).max().unwrap_or(0);
        }
        rank
    }

    /// `ρ_T(s)`.
    pub fn rank_node(&self, id: NodeId) -> Result<usize, TreeError> {
        let i = self.idx(id)?;
        // single-node query: walk only the subtree below `id`
        fn height(t: &WfTree, i: usize) -> usize {
            t.children[i].iter().map(|&c| height(t, c) + 1).max().unwrap_or(0)
        }
        Ok(height(self, i))
    }

    /// `ρ(T)`; zero exactly for the empty tree.
    pub fn rank(&self) -> usize {
        self.rank_vec().iter().map(|r| r + 1).max().unwrap_or(0)
    }

    /// `T_s`: `s` and everything above it, re-levelled so `s` is the root.
    /// Empty when `s` is not a node.
    pub fn subtree(&self, id: NodeId) -> WfTree {
        let Ok(root) = self.idx(id) else {
            return WfTree::empty();
        };
        let base = self.nodes[root].level;
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let n = &self.nodes[i];
            out.push(Node {
                id: n.id,
                parent: if i == root { None } else { n.parent },
                level: n.level - base,
                label: n.label.clone(),
            });
            stack.extend(self.children[i].iter().rev());
        }
        WfTree::from_nodes(out).expect("subtree of a valid tree is valid")
    }

    /// Restriction to a downward closed subset (the induced subforest).
    pub fn restrict(&self, keep: &BTreeSet<NodeId>) -> Result<WfTree, TreeError> {
        let mut out = Vec::new();
        for n in &self.nodes {
            if keep.contains(&n.id) {
                if let Some(p) = n.parent {
                    if !keep.contains(&p) {
                        return Err(TreeError::UnknownParent { node: n.id, parent: p });
                    }
                }
                out.push(n.clone());
            }
        }
        WfTree::from_nodes(out)
    }

    /// Checks the level bound: for `s ∈ L_k(T)` and `m > k`,
    /// `ρ_T(s) ≤ sup{ρ_T(t)+1 : t ∈ L_m(T)} + (m−k−1)`.
    pub fn check_level_bound(&self, k: usize, m: usize) -> Result<LevelBoundReport, TreeError> {
        if m <= k {
            return Err(TreeError::LevelOrder { k, m });
        }
        let ranks = self.rank_vec();
        let top = self
            .nodes
            .iter()
            .zip(&ranks)
            .filter(|(n, _)| n.level == m)
            .map(|(_, r)| r + 1)
            .max()
            .unwrap_or(0);
        let bound = top + (m - k - 1);
        let violations = self
            .nodes
            .iter()
            .zip(&ranks)
            .filter(|(n, r)| n.level == k && **r > bound)
            .map(|(n, r)| (n.id, *r))
            .collect();
        Ok(LevelBoundReport {
            k,
            m,
            bound,
            violations,
        })
    }

    /// Classifies `f: self → target`. When `f` is order-preserving the rank
    /// inequality `ρ(self) ≤ ρ(target)` is checked as well.
    pub fn check_map(&self, target: &WfTree, f: &BTreeMap<NodeId, NodeId>) -> Result<MapCheck, TreeError> {
        for n in &self.nodes {
            let img = *f.get(&n.id).ok_or(TreeError::MapNotTotal(n.id))?;
            if !target.contains(img) {
                return Err(TreeError::MapOutOfRange { node: n.id, target: img });
            }
        }
        let mut order_preserving = true;
        let mut reflects = true;
        for s in &self.nodes {
            for t in &self.nodes {
                if s.id == t.id {
                    continue;
                }
                let before = self.precedes(s.id, t.id)?;
                let after = target.precedes(f[&s.id], f[&t.id])?;
                if before && !after {
                    order_preserving = false;
                }
                if after && !before {
                    reflects = false;
                }
            }
        }
        let lipschitz = order_preserving
            && self
                .nodes
                .iter()
                .all(|n| target.node(f[&n.id]).map(|m| m.level) == Some(n.level));
        let image: BTreeSet<NodeId> = f.values().copied().collect();
        let injective = image.len() == self.len();
        let embedding = order_preserving && reflects && injective;
        let isomorphism = embedding && image.len() == target.len();
        let rank_bound = order_preserving.then(|| self.rank() <= target.rank());
        Ok(MapCheck {
            order_preserving,
            lipschitz,
            embedding,
            isomorphism,
            rank_bound_holds: rank_bound,
        })
    }

    /// Checks the concatenation bound for a downward closed `t1 ⊆ T` whose
    /// complement has ranks `< alpha`: `ρ_T(x) ≤ alpha + ρ_{T₁}(x)` on `t1`
    /// and `ρ(T) ≤ alpha + ρ(T₁)`.
    pub fn concat_bound(&self, t1: &BTreeSet<NodeId>, alpha: usize) -> Result<ConcatReport, ConcatError> {
        for &x in t1 {
            let n = self.node(x).ok_or(TreeError::UnknownNode(x))?;
            if let Some(p) = n.parent {
                if !t1.contains(&p) {
                    return Err(ConcatError::NotDownwardClosed { node: x, parent: p });
                }
            }
        }
        let ranks = self.ranks();
        if let Some((&y, &r)) = ranks.iter().find(|(id, r)| !t1.contains(id) && **r >= alpha) {
            return Err(ConcatError::OutsideRankTooLarge { node: y, rank: r, alpha });
        }
        let sub = self.restrict(t1)?;
        let sub_ranks = sub.ranks();
        let violations: Vec<(NodeId, usize, usize)> = sub_ranks
            .iter()
            .filter(|(id, r1)| ranks[id] > alpha + **r1)
            .map(|(id, r1)| (*id, ranks[id], *r1))
            .collect();
        let rank_t = self.rank();
        let rank_t1 = sub.rank();
        Ok(ConcatReport {
            alpha,
            rank_t,
            rank_t1,
            node_violations: violations,
            tree_bound_holds: rank_t <= alpha + rank_t1,
        })
    }
}

#[derive(Debug, Error)]
pub enum TreeJsonError {
    #[error("malformed tree JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Incremental construction with automatically assigned ids and levels.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn root(&mut self, label: impl Into<String>) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node {
            id,
            parent: None,
            level: 0,
            label: label.into(),
        });
        id
    }

    /// Panics if `parent` was not returned by this builder.
    pub fn child(&mut self, parent: NodeId, label: impl Into<String>) -> NodeId {
        let id = self.nodes.len();
        let level = self.nodes[parent].level + 1;
        self.nodes.push(Node {
            id,
            parent: Some(parent),
            level,
            label: label.into(),
        });
        id
    }

    pub fn build(self) -> WfTree {
        WfTree::from_nodes(self.nodes).expect("builder produces valid trees")
    }
}

/// A chain of `len` nodes (ids 0..len, node i at level i).
pub fn chain(len: usize) -> WfTree {
    let mut b = TreeBuilder::new();
    let mut prev = None;
    for i in 0..len {
        prev = Some(match prev {
            None => b.root(i.to_string()),
            Some(p) => b.child(p, i.to_string()),
        });
    }
    b.build()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelBoundReport {
    pub k: usize,
    pub m: usize,
    pub bound: usize,
    /// (node, rank) pairs on level `k` exceeding the bound.
    pub violations: Vec<(NodeId, usize)>,
}

impl LevelBoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MapCheck {
    pub order_preserving: bool,
    pub lipschitz: bool,
    pub embedding: bool,
    pub isomorphism: bool,
    /// `Some(ρ(S) ≤ ρ(T))` when the map is order-preserving.
    pub rank_bound_holds: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum MapClass {
    None,
    OrderPreserving,
    Lipschitz,
    Embedding,
    Isomorphism,
}

impl MapCheck {
    /// The strongest class the map belongs to.
    pub fn class(&self) -> MapClass {
        if self.isomorphism {
            MapClass::Isomorphism
        } else if self.embedding {
            MapClass::Embedding
        } else if self.lipschitz {
            MapClass::Lipschitz
        } else if self.order_preserving {
            MapClass::OrderPreserving
        } else {
            MapClass::None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConcatReport {
    pub alpha: usize,
    pub rank_t: usize,
    pub rank_t1: usize,
    /// (node, ρ_T, ρ_{T₁}) where the node bound fails.
    pub node_violations: Vec<(NodeId, usize, usize)>,
    pub tree_bound_holds: bool,
}

impl ConcatReport {
    pub fn holds(&self) -> bool {
        self.node_violations.is_empty() && self.tree_bound_holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConcatError {
    #[error("subset is not downward closed: {node} is kept but its parent {parent} is not")]
    NotDownwardClosed { node: NodeId, parent: NodeId },
    #[error("node {node} outside the subset has rank {rank} >= alpha = {alpha}")]
    OutsideRankTooLarge { node: NodeId, rank: usize, alpha: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}
