use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::gset::GSet;
use super::perm::{Elem, Subgroup};
use super::GroupError;
use crate::trees::{Node, NodeId, WfTree};

/// A partition of `{0,…,len−1}` with classes numbered by least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut renumber = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = Vec::with_capacity(labels.len());
        for (x, l) in labels.iter().enumerate() {
            let c = *renumber.entry(*l).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(x);
            class_of.push(c);
        }
        Partition { class_of, classes }
    }

    pub fn discrete(len: usize) -> Self {
        Self::from_labels(&(0..len).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_index(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_of(&self, x: usize) -> &[usize] {
        &self.classes[self.class_of[x]]
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.len() == coarser.len()
            && self
                .classes
                .iter()
                .all(|c| c.iter().all(|&x| coarser.related(x, c[0])))
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.len()
    }
}

/// Orbits of the group generated by `gens` on `set`.
pub fn orbits_of_gens(set: &dyn GSet, gens: &[Elem]) -> Partition {
    let n = set.len();
    let mut uf = UnionFind::<usize>::new(n);
    for &g in gens {
        for x in 0..n {
            uf.union(x, set.act(g, x));
        }
    }
    Partition::from_labels(&uf.into_labeling())
}

/// `E_H^X`: orbits of a subgroup.
pub fn orbit_partition(set: &dyn GSet, h: &Subgroup) -> Partition {
    orbits_of_gens(set, h.generators())
}

/// The orbit `⟨gens⟩·x`, sorted.
pub fn orbit_of(set: &dyn GSet, gens: &[Elem], x: usize) -> Vec<usize> {
    let mut seen = vec![false; set.len()];
    seen[x] = true;
    let mut stack = vec![x];
    let mut out = vec![x];
    while let Some(y) = stack.pop() {
        for &g in gens {
            let z = set.act(g, y);
            if !seen[z] {
                seen[z] = true;
                out.push(z);
                stack.push(z);
            }
        }
    }
    out.sort_unstable();
    out
}

/// A decreasing sequence `E₀ ⊇ E₁ ⊇ …` of equivalence relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqChain {
    partitions: Vec<Partition>,
    size: usize,
}

impl EqChain {
    pub fn new(size: usize, partitions: Vec<Partition>) -> Result<Self, GroupError> {
        for (n, p) in partitions.iter().enumerate() {
            if p.len() != size {
                return Err(GroupError::BadPartition(format!("level {n} has {} points, expected {size}", p.len())));
            }
            if n > 0 && !p.refines(&partitions[n - 1]) {
                return Err(GroupError::BadPartition(format!("level {n} does not refine level {}", n - 1)));
            }
        }
        Ok(EqChain { partitions, size })
    }

    /// Orbit relations of a sequence of subgroups.
    pub fn of_subgroups<'a>(set: &dyn GSet, levels: impl IntoIterator<Item = &'a Subgroup>) -> Self {
        let partitions = levels.into_iter().map(|h| orbit_partition(set, h)).collect();
        EqChain::new(set.len(), partitions).expect("orbits of a decreasing chain refine")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn depth(&self) -> usize {
        self.partitions.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitNode {
    pub level: usize,
    pub class: Vec<usize>,
}

/// An orbit tree together with the class behind every node.
#[derive(Debug, Clone)]
pub struct OrbitTree {
    tree: WfTree,
    nodes: Vec<OrbitNode>,
    lookup: HashMap<(usize, usize), NodeId>,
}

impl OrbitTree {
    pub fn tree(&self) -> &WfTree {
        &self.tree
    }

    pub fn node_info(&self, id: NodeId) -> &OrbitNode {
        &self.nodes[id]
    }

    pub fn infos(&self) -> &[OrbitNode] {
        &self.nodes
    }

    /// The node `(level, [x])`, if the class of `x` at that level is a node.
    pub fn node_of(&self, level: usize, x: usize) -> Option<NodeId> {
        self.lookup.get(&(level, x)).copied()
    }

    pub fn rank(&self) -> usize {
        self.tree.rank()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Nodes `(n, C)` for nonsingleton classes `C` of `E_n`, ordered by level
/// and reverse inclusion. With `plus`, singleton classes of `E₀` are nodes
/// too. Node ids follow (level, least point).
pub fn build_orbit_tree(chain: &EqChain, plus: bool, label: &dyn Fn(usize) -> String) -> OrbitTree {
    let mut nodes: Vec<OrbitNode> = Vec::new();
    let mut lookup = HashMap::new();
    let mut tree_nodes = Vec::new();
    for (n, p) in chain.partitions().iter().enumerate() {
        for class in p.classes() {
            if class.len() < 2 && !(plus && n == 0) {
                continue;
            }
            let id = nodes.len();
            let parent = (n > 0).then(|| lookup[&(n - 1, class[0])]);
            let shown: Vec<String> = class.iter().take(6).map(|&x| label(x)).collect();
            let more = if class.len() > 6 { " …" } else { "" };
            tree_nodes.push(Node {
                id,
                parent,
                level: n,
                label: format!("({n}, {{{}{more}}})", shown.join(", ")),
            });
            for &x in class {
                lookup.insert((n, x), id);
            }
            nodes.push(OrbitNode {
                level: n,
                class: class.clone(),
            });
        }
    }
    let tree = WfTree::from_nodes(tree_nodes).expect("orbit tree is a valid forest");
    OrbitTree { tree, nodes, lookup }
}

/// Orbit tree of a sequence of subgroups acting on a G-set.
pub fn orbit_tree_of<'a>(set: &dyn GSet, levels: impl IntoIterator<Item = &'a Subgroup>, plus: bool) -> OrbitTree {
    let chain = EqChain::of_subgroups(set, levels);
    build_orbit_tree(&chain, plus, &|x| set.label(x))
}
