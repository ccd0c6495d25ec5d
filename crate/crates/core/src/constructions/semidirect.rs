use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::action::ActionTable;
use super::ConstructionError;
use crate::groups::{orbit_tree_of, CosetSpace, Elem, OrbitTree, Perm, PermGroup, PermGroupChain, Subgroup};
use crate::trees::ConcatReport;

/// `A = G ⋉_ρ H` realised as a permutation group through its left regular
/// action, with the chain `A_n = G_n × H_n`.
#[derive(Debug, Clone)]
pub struct SemidirectProduct {
    g: PermGroupChain,
    h: PermGroupChain,
    g_levels: Vec<Subgroup>,
    h_levels: Vec<Subgroup>,
    rho: ActionTable,
    chain: PermGroupChain,
    /// pair index `x·|H| + y` to element of the regular representation
    pair_elem: Vec<Elem>,
    elem_pair: Vec<(u32, u32)>,
}

impl SemidirectProduct {
    pub fn chain(&self) -> &PermGroupChain {
        &self.chain
    }

    pub fn order(&self) -> usize {
        self.pair_elem.len()
    }

    pub fn g_chain(&self) -> &PermGroupChain {
        &self.g
    }

    pub fn h_chain(&self) -> &PermGroupChain {
        &self.h
    }

    pub fn rho(&self) -> &ActionTable {
        &self.rho
    }

    /// `G_n` padded to the product's depth.
    pub fn g_level(&self, n: usize) -> &Subgroup {
        &self.g_levels[n.min(self.g_levels.len() - 1)]
    }

    pub fn h_level(&self, n: usize) -> &Subgroup {
        &self.h_levels[n.min(self.h_levels.len() - 1)]
    }

    pub fn depth(&self) -> usize {
        self.chain.depth()
    }

    pub fn element(&self, x: u32, y: u32) -> Elem {
        self.pair_elem[x as usize * self.h.group().order() + y as usize]
    }

    pub fn pair(&self, e: Elem) -> (u32, u32) {
        self.elem_pair[e as usize]
    }

    /// `(x₁,y₁)(x₂,y₂) = (x₁x₂, y₁ρ(x₁)(y₂))`.
    pub fn mul_pairs(&self, a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
        let (g, h) = (self.g.group(), self.h.group());
        (g.mul(a.0, b.0), h.mul(a.1, self.rho.apply(a.0, b.1)))
    }

    /// Multiplication table in pair order.
    pub fn pair_table(&self) -> crate::groups::CayleyTable {
        let nh = self.h.group().order() as u32;
        let n = self.order() as u32;
        let table = (0..n)
            .map(|p| {
                (0..n)
                    .map(|q| {
                        let (x, y) = self.mul_pairs((p / nh, p % nh), (q / nh, q % nh));
                        x * nh + y
                    })
                    .collect()
            })
            .collect();
        crate::groups::CayleyTable {
            order: n as usize,
            table,
        }
    }

    /// `H_n′`, the subgroup generated by `ρ(G_n)(H_n)`, per level.
    pub fn twisted_levels(&self) -> Vec<usize> {
        (0..=self.depth())
            .map(|n| {
                let mut gens = BTreeSet::new();
                for &x in self.g_level(n).elements() {
                    for &y in self.h_level(n).generators() {
                        gens.insert(self.rho.apply(x, y));
                    }
                }
                self.h.group().subgroup(&gens.into_iter().collect::<Vec<_>>()).order()
            })
            .collect()
    }
}

/// Builds `G ⋉_ρ H`. The two chains are padded with their last level to a
/// common depth, and each `G_n × H_n` must be a subgroup.
pub fn semidirect(
    g: &PermGroupChain,
    h: &PermGroupChain,
    rho: &ActionTable,
    cap: usize,
) -> Result<SemidirectProduct, ConstructionError> {
    let (gg, hg) = (g.group(), h.group());
    rho.validate(gg, hg)?;
    let (ng, nh) = (gg.order(), hg.order());
    let n = ng * nh;
    if n > cap {
        return Err(ConstructionError::CapExceeded { cap, needed: n });
    }
    let mul = |a: usize, b: usize| -> usize {
        let (x1, y1) = ((a / nh) as u32, (a % nh) as u32);
        let (x2, y2) = ((b / nh) as u32, (b % nh) as u32);
        gg.mul(x1, x2) as usize * nh + hg.mul(y1, rho.apply(x1, y2)) as usize
    };
    let perms: Vec<Perm> = (0..n)
        .map(|a| Perm::from_images((0..n).map(|b| mul(a, b) as u32).collect()).expect("left multiplication is bijective"))
        .collect();
    let group = Arc::new(PermGroup::from_closed_set(n, perms.clone()));
    let pair_elem: Vec<Elem> = perms.iter().map(|p| group.index_of(p).expect("own element")).collect();
    let mut elem_pair = vec![(0, 0); n];
    for (p, &e) in pair_elem.iter().enumerate() {
        elem_pair[e as usize] = ((p / nh) as u32, (p % nh) as u32);
    }
    let depth = g.depth().max(h.depth());
    let g_levels: Vec<Subgroup> = (0..=depth).map(|i| g.level_or_last(i).clone()).collect();
    let h_levels: Vec<Subgroup> = (0..=depth).map(|i| h.level_or_last(i).clone()).collect();
    let mut levels = Vec::with_capacity(depth + 1);
    for i in 0..=depth {
        let (gl, hl) = (&g_levels[i], &h_levels[i]);
        // G_i × H_i is closed iff ρ(G_i) preserves H_i
        for &x in gl.elements() {
            for &y in hl.generators() {
                if !hl.contains(rho.apply(x, y)) {
                    return Err(ConstructionError::ClosureFailure {
                        level: i,
                        left: format!("({}, {})", gg.perm(x), hg.perm(0)),
                        right: format!("({}, {})", gg.perm(0), hg.perm(y)),
                    });
                }
            }
        }
        let mut mask = vec![false; n];
        for &x in gl.elements() {
            for &y in hl.elements() {
                mask[pair_elem[x as usize * nh + y as usize] as usize] = true;
            }
        }
        levels.push(Subgroup::from_mask(&group, mask));
    }
    Ok(SemidirectProduct {
        g: g.clone(),
        h: h.clone(),
        g_levels,
        h_levels,
        rho: rho.clone(),
        chain: PermGroupChain::from_subgroups(levels),
        pair_elem,
        elem_pair,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetInvarianceReport {
    pub level: usize,
    pub checked: usize,
    /// `(x, y)` with `ρ(x)(yH_n) ≠ yH_n`, as element strings.
    pub violations: Vec<(String, String)>,
}

impl CosetInvarianceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `∀x∈G_n ∀y∈H: ρ(x)(yH_n) = yH_n`.
pub fn check_coset_invariance(
    g: &PermGroupChain,
    h: &PermGroupChain,
    rho: &ActionTable,
    n: usize,
) -> CosetInvarianceReport {
    let (gg, hg) = (g.group(), h.group());
    let gn = g.level_or_last(n);
    let hn = h.level_or_last(n);
    let mut violations = Vec::new();
    let mut checked = 0;
    for &x in gn.elements() {
        for y in 0..hg.order() as u32 {
            checked += 1;
            let coset: BTreeSet<u32> = hn.elements().iter().map(|&k| hg.mul(y, k)).collect();
            let image: BTreeSet<u32> = coset.iter().map(|&z| rho.apply(x, z)).collect();
            if image != coset {
                violations.push((gg.perm(x).to_string(), hg.perm(y).to_string()));
            }
        }
    }
    CosetInvarianceReport {
        level: n,
        checked,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct T1Report {
    pub level: usize,
    pub rank_t: usize,
    pub rank_t1: usize,
    pub rank_s: usize,
    pub t1_nodes: usize,
    /// `(node of T₁, ρ_{T₁}, ρ_S)` where the two ranks differ.
    pub mismatches: Vec<(usize, usize, usize)>,
    /// `ρ(T) ≤ α + ρ(T₁)` with `α` one more than the largest rank outside `T₁`.
    pub concat: ConcatReport,
    pub twisted_orders: Vec<usize>,
}

impl T1Report {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.concat.holds() && self.rank_t1 == self.rank_s
    }
}

/// Builds `T` on `A/A_n`, the part `T₁` whose `G`-component orbit
/// `G_p·xG_n` is not a singleton, and `S` on `G/G_n`, and compares ranks
/// node for node.
pub fn check_t1_rank_equality(a: &SemidirectProduct, n: usize, cap: usize) -> Result<T1Report, ConstructionError> {
    let cond = check_coset_invariance(&a.g, &a.h, &a.rho, n);
    if !cond.holds() {
        return Err(ConstructionError::CosetInvariance {
            level: n,
            violations: cond.violations.len(),
        });
    }
    let depth = a.depth();
    let an = a.chain.level_or_last(n);
    let a_set = CosetSpace::new(a.chain.group().clone(), &[(n, an)], cap)?;
    let t: OrbitTree = orbit_tree_of(&a_set, a.chain.levels(), false);

    let g_group = a.g.group().clone();
    let g_levels: Vec<Subgroup> = (0..=depth).map(|i| a.g_level(i).clone()).collect();
    let s_set = CosetSpace::new(g_group.clone(), &[(n, a.g_level(n))], cap)?;
    let s: OrbitTree = orbit_tree_of(&s_set, &g_levels, false);

    let mut t1 = BTreeSet::new();
    let mut image = BTreeMap::new();
    for (id, info) in t.infos().iter().enumerate() {
        let rep = a_set.representative(info.class[0]);
        let (x, _) = a.pair(rep);
        let xg = s_set.point_of(0, x);
        if let Some(sid) = s.node_of(info.level, xg) {
            t1.insert(id);
            image.insert(id, sid);
        }
    }
    let tree_t1 = t.tree().restrict(&t1).map_err(|e| ConstructionError::Internal(e.to_string()))?;
    let r1 = tree_t1.ranks();
    let rs = s.tree().ranks();
    let mismatches: Vec<(usize, usize, usize)> = image
        .iter()
        .filter(|(id, sid)| r1[id] != rs[sid])
        .map(|(id, sid)| (*id, r1[id], rs[sid]))
        .collect();
    let rt = t.tree().ranks();
    let alpha = rt.iter().filter(|(id, _)| !t1.contains(id)).map(|(_, r)| r + 1).max().unwrap_or(0);
    let concat = t
        .tree()
        .concat_bound(&t1, alpha)
        .map_err(|e| ConstructionError::Internal(e.to_string()))?;
    Ok(T1Report {
        level: n,
        rank_t: t.rank(),
        rank_t1: tree_t1.rank(),
        rank_s: s.rank(),
        t1_nodes: t1.len(),
        mismatches,
        concat,
        twisted_orders: a.twisted_levels(),
    })
}
