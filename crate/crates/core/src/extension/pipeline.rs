use std::collections::BTreeMap;

use serde::Serialize;

use super::checks::{orbit_sequence_checks, induced_action_sweep, quotient_iso_check};
use super::{ExtensionError, ExtensionInstance};
use crate::groups::{orbit_tree_of, ClassSet, CosetSpace, OrbitTree, Subgroup, DEFAULT_CAP};
use crate::trees::{build_lex_relation, Node, NodeId, WfTree};
use crate::Truncated;

/// `T_B` with its artificial root `∅` as node 0. The other nodes are the
/// selected `N`-orbit nodes `(q_{x,n}, N_{q_{x,n}}·x)`, each at its depth
/// below the root.
#[derive(Debug, Clone)]
pub struct TbTree {
    pub tree: WfTree,
    /// Orbit tree of the `N`-chain on `X`.
    pub n_tree: OrbitTree,
    pub from_n_tree: BTreeMap<NodeId, NodeId>,
    /// Per node: `(q, orbit, next q)`; `None` at the root.
    pub info: Vec<Option<(usize, Vec<usize>, usize)>>,
    /// Nodes reached with two different next values.
    pub ill_defined: Vec<String>,
}

pub fn build_tb(inst: &ExtensionInstance, qs: &[Vec<usize>]) -> TbTree {
    let n_tree = orbit_tree_of(inst.x_set(), inst.n_levels_to_depth(), false);
    let mut next: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut ill_defined = Vec::new();
    for (x, q) in qs.iter().enumerate() {
        for w in q.windows(2) {
            if w[0] > inst.depth() {
                break;
            }
            if let Some(id) = n_tree.node_of(w[0], x) {
                let prev = *next.entry(id).or_insert(w[1]);
                if prev != w[1] {
                    ill_defined.push(format!("node {id} from point {x}: next {prev} vs {}", w[1]));
                }
            }
        }
    }
    let mut from_n_tree = BTreeMap::new();
    let mut nodes = vec![Node {
        id: 0,
        parent: None,
        level: 0,
        label: "∅".into(),
    }];
    let mut info = vec![None];
    // n-tree ids follow level order, so parents are placed first
    for (&id, &q_next) in &next {
        let mut up = n_tree.tree().node(id).and_then(|n| n.parent);
        while let Some(p) = up.filter(|p| !from_n_tree.contains_key(p)) {
            up = n_tree.tree().node(p).and_then(|n| n.parent);
        }
        let parent = up.map_or(0, |p| from_n_tree[&p]);
        let tb_id = nodes.len();
        let orbit = n_tree.node_info(id);
        nodes.push(Node {
            id: tb_id,
            parent: Some(parent),
            level: nodes[parent].level + 1,
            label: n_tree.tree().node(id).map(|n| n.label.clone()).unwrap_or_default(),
        });
        info.push(Some((orbit.level, orbit.class.clone(), q_next)));
        from_n_tree.insert(id, tb_id);
    }
    TbTree {
        tree: WfTree::from_nodes(nodes).expect("parents precede children"),
        n_tree,
        from_n_tree,
        info,
        ill_defined,
    }
}

/// A fibre tree `Φ(s)`: the plus orbit tree of the levels from `offset` on,
/// acting on classes of points.
#[derive(Debug, Clone)]
pub struct PhiFibre {
    pub tree: OrbitTree,
    pub offset: usize,
    /// Class index of each point of `X`, where the fibre covers it.
    pub class_of: Vec<Option<usize>>,
}

fn fibre(inst: &ExtensionInstance, classes: Vec<Vec<usize>>, offset: usize) -> Truncated<PhiFibre> {
    let last = inst.depth().max(offset);
    let mut levels: Vec<Subgroup> = Vec::with_capacity(last - offset + 1);
    for j in offset..=last {
        match inst.g_level(j) {
            Some(l) => levels.push(l),
            None => return Truncated::ExceedsTruncation,
        }
    }
    let set = ClassSet::new(inst.x_set(), classes);
    let class_of = (0..inst.x_set().len()).map(|x| set.class_of(x)).collect();
    let tree = orbit_tree_of(&set, &levels, true);
    Truncated::Closed(PhiFibre { tree, offset, class_of })
}

/// `Φ(∅)` on `X/N` and `Φ(q, N_q·x)` on `N_q·x / N_{q′}` with `q′` the next
/// value of the sequence.
pub fn build_phi(inst: &ExtensionInstance, tb: &TbTree) -> Truncated<BTreeMap<NodeId, PhiFibre>> {
    let mut out = BTreeMap::new();
    let root = fibre(inst, inst.n_partition(0).classes().to_vec(), 0);
    let Truncated::Closed(root) = root else {
        return Truncated::ExceedsTruncation;
    };
    out.insert(0, root);
    for (id, info) in tb.info.iter().enumerate() {
        let Some((_, orbit, q_next)) = info else { continue };
        let classes: Vec<Vec<usize>> = inst
            .n_partition(*q_next)
            .classes()
            .iter()
            .filter(|c| orbit.binary_search(&c[0]).is_ok())
            .cloned()
            .collect();
        match fibre(inst, classes, *q_next) {
            Truncated::Closed(f) => {
                out.insert(id, f);
            }
            Truncated::ExceedsTruncation => return Truncated::ExceedsTruncation,
        }
    }
    Truncated::Closed(out)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct PsiReport {
    /// Orbit-tree node to `(T_B node, Φ node)`.
    pub map: BTreeMap<NodeId, (NodeId, NodeId)>,
    pub containment_failures: Vec<String>,
    pub compatibility_failures: Vec<String>,
    pub order_failures: Vec<String>,
    pub pairs_checked: usize,
}

impl PsiReport {
    pub fn holds(&self) -> bool {
        self.containment_failures.is_empty() && self.compatibility_failures.is_empty() && self.order_failures.is_empty()
    }
}

fn psi_point(
    q: &[usize],
    tb: &TbTree,
    phi: &BTreeMap<NodeId, PhiFibre>,
    n: usize,
    x: usize,
) -> Result<(NodeId, NodeId), String> {
    let i = q.iter().rposition(|&v| v <= n).expect("q starts at 0");
    let s = if i == 0 {
        0
    } else {
        let id = tb
            .n_tree
            .node_of(q[i - 1], x)
            .ok_or_else(|| format!("({}, N·{x}) is a singleton", q[i - 1]))?;
        *tb.from_n_tree.get(&id).ok_or_else(|| format!("({}, N·{x}) is not in T_B", q[i - 1]))?
    };
    let fib = &phi[&s];
    let class = fib.class_of[x].ok_or_else(|| format!("{x} is outside Φ({s})"))?;
    let level = n - if i == 0 { 0 } else { q[i] };
    let c = fib
        .tree
        .node_of(level, class)
        .ok_or_else(|| format!("({level}, class {class}) is not a node of Φ({s})"))?;
    Ok((s, c))
}

/// `(t,D) R (s,C) ⟺ s <_{T_B} t ∨ (s = t ∧ C <_{Φ(t)} D)`.
fn lex_related(tb: &TbTree, phi: &BTreeMap<NodeId, PhiFibre>, lower: (NodeId, NodeId), upper: (NodeId, NodeId)) -> bool {
    let ((t, d), (s, c)) = (lower, upper);
    if s == t {
        phi[&t].tree.tree().precedes(c, d).unwrap_or(false)
    } else {
        tb.tree.precedes(s, t).unwrap_or(false)
    }
}

/// `Ψ = ⋃ ψ_x` on the orbit tree of `G` on `X`, with image containment,
/// agreement across points and order reversal into `R` checked.
pub fn build_psi(
    qs: &[Vec<usize>],
    t: &OrbitTree,
    tb: &TbTree,
    phi: &BTreeMap<NodeId, PhiFibre>,
) -> PsiReport {
    let mut r = PsiReport::default();
    for (v, info) in t.infos().iter().enumerate() {
        for &x in &info.class {
            match psi_point(&qs[x], tb, phi, info.level, x) {
                Err(w) => r.containment_failures.push(format!("node {v} via {x}: {w}")),
                Ok(img) => match r.map.get(&v) {
                    Some(&prev) if prev != img => r
                        .compatibility_failures
                        .push(format!("node {v}: {prev:?} vs {img:?} via {x}")),
                    Some(_) => {}
                    None => {
                        r.map.insert(v, img);
                    }
                },
            }
        }
    }
    for (&v, &img) in &r.map {
        for u in t.tree().ancestors(v).expect("own node") {
            if let Some(&up) = r.map.get(&u) {
                r.pairs_checked += 1;
                if !lex_related(tb, phi, img, up) {
                    r.order_failures.push(format!("{u} < {v} but Ψ({v})={img:?} not R Ψ({u})={up:?}"));
                }
            }
        }
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: &str, holds: bool, witness: Option<String>) -> Self {
        Check {
            name: name.into(),
            holds,
            witness: if holds { None } else { witness },
        }
    }

    fn from_list(name: &str, failures: &[String]) -> Self {
        Check::new(name, failures.is_empty(), failures.first().cloned())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionReport {
    pub x_size: usize,
    pub depth: usize,
    pub g_order: usize,
    pub n_order: usize,
    pub truncated: bool,
    pub rank_t: usize,
    pub rank_n_tree: usize,
    pub rank_tb: usize,
    pub sup_phi: usize,
    pub rank_r: usize,
    pub relation_size: usize,
    pub relation_edges: usize,
    pub rank_quotient_chain: usize,
    /// `T_B` has only its root.
    pub degenerate: bool,
    pub tb: Option<WfTree>,
    pub phi: BTreeMap<NodeId, WfTree>,
    pub checks: Vec<Check>,
}

impl ExtensionReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

/// The full pipeline: `ρ(T) ≤ ρ(R) ≤ sup ρ(Φ)·ρ(T_B)`, `ρ(T_B) ≤ ρ(T_N^X)+1`
/// and `ρ(T) ≤ ρ(π(𝒢))·(ρ(T_N^X)+1)`, together with the checks on `s` and the `q` sequences.
pub fn extension_bound_check(inst: &ExtensionInstance) -> Result<ExtensionReport, ExtensionError> {
    let group = inst.chain().group().clone();
    if inst.normal().order() == group.order() {
        return Err(ExtensionError::NormalIsWhole);
    }
    let depth = inst.depth();
    let g_levels: Vec<Subgroup> = inst.chain().levels().to_vec();
    let t = orbit_tree_of(inst.x_set(), &g_levels, false);

    let mut checks = Vec::new();
    for h in 0..=depth {
        let q = quotient_iso_check(inst.chain(), inst.normal(), h)?;
        checks.push(Check::new(
            &format!("quotient_iso[{h}]"),
            q.isomorphic,
            Some(format!("|HN/N|={} |H/H∩N|={}", q.order_hn_mod_n, q.order_h_mod_hn)),
        ));
    }
    let induced = induced_action_sweep(inst);
    checks.push(Check::from_list("induced_action_union", &induced.union_failures));
    checks.push(Check::from_list("induced_action_quotient", &induced.quotient_failures));

    let joined: Vec<Subgroup> = g_levels.iter().map(|l| l.join(inst.normal())).collect();
    let tagged: Vec<(usize, &Subgroup)> = joined.iter().enumerate().collect();
    let quotient_space = CosetSpace::new(group.clone(), &tagged, DEFAULT_CAP.max(group.order() * joined.len()))?;
    let rank_quotient_chain = orbit_tree_of(&quotient_space, &g_levels, false).rank();

    let mut report = ExtensionReport {
        x_size: inst.x_set().len(),
        depth,
        g_order: group.order(),
        n_order: inst.normal().order(),
        truncated: false,
        rank_t: t.rank(),
        rank_n_tree: 0,
        rank_tb: 0,
        sup_phi: 0,
        rank_r: 0,
        relation_size: 0,
        relation_edges: 0,
        rank_quotient_chain,
        degenerate: false,
        tb: None,
        phi: BTreeMap::new(),
        checks,
    };

    let qs = match inst.q_sequences() {
        Truncated::Closed(qs) => qs,
        Truncated::ExceedsTruncation => {
            report.truncated = true;
            return Ok(report);
        }
    };
    let seq = orbit_sequence_checks(inst, &qs);
    report.checks.push(Check::from_list("s_invariant_on_classes", &seq.s_invariance));
    report.checks.push(Check::from_list("q_increasing", &seq.q_increasing));
    report.checks.push(Check::from_list("q_step_absorbs", &seq.q_step));
    report.checks.push(Check::from_list("q_least_singleton", &seq.q_least));
    report.checks.push(Check::from_list("q_invariant_on_orbits", &seq.q_invariance));

    let tb = build_tb(inst, &qs);
    report.checks.push(Check::from_list("phi_well_defined", &tb.ill_defined));
    let phi = match build_phi(inst, &tb) {
        Truncated::Closed(p) => p,
        Truncated::ExceedsTruncation => {
            report.truncated = true;
            return Ok(report);
        }
    };
    let psi = build_psi(&qs, &t, &tb, &phi);
    report.checks.push(Check::from_list("psi_image_in_a", &psi.containment_failures));
    report.checks.push(Check::from_list("psi_compatible", &psi.compatibility_failures));
    report.checks.push(Check::from_list("psi_order_reversing", &psi.order_failures));

    let phi_trees: BTreeMap<NodeId, WfTree> = phi.iter().map(|(&k, f)| (k, f.tree.tree().clone())).collect();
    let (relation, lex) = build_lex_relation(&tb.tree, &phi_trees).map_err(|e| ExtensionError::Invalid(e.to_string()))?;
    let mut missing = Vec::new();
    for (&v, &(s, c)) in &psi.map {
        for u in t.tree().ancestors(v).expect("own node") {
            let Some(&(s2, c2)) = psi.map.get(&u) else { continue };
            let lo = relation.index_of(&format!("{s}:{c}"));
            let hi = relation.index_of(&format!("{s2}:{c2}"));
            if !matches!((lo, hi), (Some(a), Some(b)) if relation.related(a, b)) {
                missing.push(format!("edge {s}:{c} R {s2}:{c2}"));
            }
        }
    }
    report.checks.push(Check::from_list("psi_homomorphism", &missing));

    report.rank_n_tree = tb.n_tree.rank();
    report.rank_tb = tb.tree.rank();
    report.sup_phi = lex.sup_phi_rank;
    report.rank_r = lex.rank_r;
    report.relation_size = lex.elements;
    report.relation_edges = lex.edges;
    report.degenerate = tb.tree.len() == 1;
    let (rt, rr) = (report.rank_t, report.rank_r);
    report.checks.push(Check::new("tree_below_relation", rt <= rr, Some(format!("{rt} > {rr}"))));
    report.checks.push(Check::new("relation_bound", lex.holds, Some(format!("{rr} > {}", lex.bound))));
    report.checks.push(Check::new(
        "tb_bound",
        report.rank_tb <= report.rank_n_tree + 1,
        Some(format!("{} > {}+1", report.rank_tb, report.rank_n_tree)),
    ));
    let rhs = rank_quotient_chain * (report.rank_n_tree + 1);
    report.checks.push(Check::new(
        "orbit_tree_bound",
        rt <= rhs,
        Some(format!("{rt} > {rank_quotient_chain}·({}+1)", report.rank_n_tree)),
    ));
    report.tb = Some(tb.tree);
    report.phi = phi_trees;
    Ok(report)
}
