use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use super::{NodeId, TreeError, WfTree};

/// A finite well-founded binary relation. An edge `(y, x)` records `y R x`;
/// the rank of `x` is `sup{ρ(y)+1 : y R x}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WfRelation {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    below: Vec<Vec<usize>>,
    edges: usize,
    ranks: Vec<usize>,
}

impl WfRelation {
    /// Builds the relation and rejects it if it has a cycle.
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(TreeError::UnknownElement(format!("duplicate element {l}")));
            }
        }
        let mut below = vec![Vec::new(); n];
        let mut above = vec![Vec::new(); n];
        for &(y, x) in edges {
            if y >= n || x >= n {
                return Err(TreeError::UnknownElement(format!("{}", y.max(x))));
            }
            below[x].push(y);
            above[y].push(x);
        }
        for v in &mut below {
            v.sort_unstable();
            v.dedup();
        }
        let edge_count = below.iter().map(Vec::len).sum();

        // Kahn's algorithm along y -> x; every y R x is settled before x
        let mut pending: Vec<usize> = below.iter().map(Vec::len).collect();
        let mut ranks = vec![0usize; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
        let mut done = 0;
        let mut above_dedup: Vec<Vec<usize>> = above;
        for v in &mut above_dedup {
            v.sort_unstable();
            v.dedup();
        }
        while let Some(y) = queue.pop_front() {
            done += 1;
            for &x in &above_dedup[y] {
                ranks[x] = ranks[x].max(ranks[y] + 1);
                pending[x] -= 1;
                if pending[x] == 0 {
                    queue.push_back(x);
                }
            }
        }
        if done < n {
            let stuck = (0..n).find(|&i| pending[i] > 0).unwrap_or(0);
            return Err(TreeError::NotWellFounded(labels[stuck].clone()));
        }
        Ok(WfRelation {
            labels,
            index,
            below,
            edges: edge_count,
            ranks,
        })
    }

    /// `(T, >)`: `y R x` iff `x` is a strict ancestor of `y`. Element `i`
    /// is the `i`-th node of `t.nodes()`.
    pub fn from_tree(t: &WfTree) -> Self {
        let labels: Vec<String> = t.nodes().iter().map(|n| n.id.to_string()).collect();
        let pos: HashMap<NodeId, usize> = t.nodes().iter().enumerate().map(|(i, n)| (n.id, i)).collect();
        let mut edges = Vec::new();
        for (yi, y) in t.nodes().iter().enumerate() {
            for a in t.ancestors(y.id).expect("own node") {
                edges.push((yi, pos[&a]));
            }
        }
        WfRelation::new(labels, &edges).expect("tree order is well-founded")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// `y R x`.
    pub fn related(&self, y: usize, x: usize) -> bool {
        self.below.get(x).is_some_and(|v| v.binary_search(&y).is_ok())
    }

    /// `ρ_R(x)`.
    pub fn rank_of(&self, x: usize) -> Result<usize, TreeError> {
        self.ranks
            .get(x)
            .copied()
            .ok_or_else(|| TreeError::UnknownElement(x.to_string()))
    }

    /// `ρ_R(x)` straight from the recursive definition, memoised.
    pub fn rank_of_recursive(&self, x: usize) -> Result<usize, TreeError> {
        if x >= self.len() {
            return Err(TreeError::UnknownElement(x.to_string()));
        }
        fn go(r: &WfRelation, x: usize, memo: &mut Vec<Option<usize>>) -> usize {
            if let Some(v) = memo[x] {
                return v;
            }
            let v = r.below[x].iter().map(|&y| go(r, y, memo) + 1).max().unwrap_or(0);
            memo[x] = Some(v);
            v
        }
        Ok(go(self, x, &mut vec![None; self.len()]))
    }

    /// `ρ(R) = sup{ρ_R(x)+1}`, zero on the empty carrier.
    pub fn rank(&self) -> usize {
        self.ranks.iter().map(|r| r + 1).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexRelationReport {
    pub elements: usize,
    pub edges: usize,
    pub rank_r: usize,
    pub sup_phi_rank: usize,
    pub rank_tb: usize,
    pub bound: usize,
    pub holds: bool,
}

/// The relation on `A = ⋃_s {s}×Φ(s)` given by
/// `(t,D) R (s,C) ⟺ s <_{tb} t ∨ (s = t ∧ C <_{Φ(t)} D)`.
///
/// Element labels are `"s:C"` with tree node ids. The report compares
/// `ρ(R)` with `sup ρ(Φ(s)) · ρ(tb)`.
pub fn build_lex_relation(
    tb: &WfTree,
    phi: &BTreeMap<NodeId, WfTree>,
) -> Result<(WfRelation, LexRelationReport), TreeError> {
    let mut labels = Vec::new();
    let mut owner = Vec::new();
    for s in tb.nodes() {
        let fib = phi.get(&s.id).ok_or(TreeError::MapNotTotal(s.id))?;
        for c in fib.nodes() {
            labels.push(format!("{}:{}", s.id, c.id));
            owner.push((s.id, c.id));
        }
    }
    let mut edges = Vec::new();
    for (xi, &(s, c)) in owner.iter().enumerate() {
        for (yi, &(t, d)) in owner.iter().enumerate() {
            let related = if s == t {
                phi[&t].precedes(c, d)?
            } else {
                tb.precedes(s, t)?
            };
            if related {
                edges.push((yi, xi));
            }
        }
    }
    let rel = WfRelation::new(labels, &edges)?;
    let sup_phi = phi
        .iter()
        .filter(|(s, _)| tb.contains(**s))
        .map(|(_, t)| t.rank())
        .max()
        .unwrap_or(0);
    let rank_tb = tb.rank();
    let bound = sup_phi * rank_tb;
    let report = LexRelationReport {
        elements: rel.len(),
        edges: rel.edge_count(),
        rank_r: rel.rank(),
        sup_phi_rank: sup_phi,
        rank_tb,
        bound,
        holds: rel.rank() <= bound,
    };
    Ok((rel, report))
}
