use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::orbit::{build_orbit_tree, EqChain};
use super::GroupError;
use crate::trees::{MapCheck, MapClass};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub levels: usize,
    /// `x E_n y ⟹ θx F_n θy`, per level.
    pub homomorphism: Vec<bool>,
    /// `x E_n y ⟺ θx F_n θy`, per level.
    pub reduction: Vec<bool>,
    pub bijective: bool,
    /// The induced map `(n, C) ↦ (n, [θC])` when θ is a homomorphism on
    /// every level.
    pub tree_map: Option<MapCheck>,
    pub class: MapClass,
    pub holds: bool,
}

/// Classifies `θ: X → Y` between two equivalence chains and checks the
/// induced map of orbit trees: order-preserving for homomorphisms, a
/// Lipschitz embedding for reductions, an isomorphism for bijective
/// reductions. Levels past the shorter chain are ignored.
pub fn reduction_transfer(e1: &EqChain, e2: &EqChain, theta: &[usize]) -> Result<ReductionReport, GroupError> {
    if theta.len() != e1.size() {
        return Err(GroupError::BadMap(format!(
            "map has {} entries for {} points",
            theta.len(),
            e1.size()
        )));
    }
    let mut seen = HashSet::new();
    for (x, &y) in theta.iter().enumerate() {
        if y >= e2.size() {
            return Err(GroupError::BadMap(format!("{x} maps outside the target")));
        }
        if !seen.insert(y) {
            return Err(GroupError::NotInjective { point: x, image: y });
        }
    }
    let levels = e1.partitions().len().min(e2.partitions().len());
    let mut homomorphism = Vec::with_capacity(levels);
    let mut reduction = Vec::with_capacity(levels);
    for n in 0..levels {
        let (p, q) = (&e1.partitions()[n], &e2.partitions()[n]);
        let mut hom = true;
        let mut red = true;
        for x in 0..e1.size() {
            for y in x + 1..e1.size() {
                let before = p.related(x, y);
                let after = q.related(theta[x], theta[y]);
                hom &= !before || after;
                red &= before == after;
            }
        }
        homomorphism.push(hom);
        reduction.push(red);
    }
    let bijective = e1.size() == e2.size();
    let t1 = EqChain::new(e1.size(), e1.partitions()[..levels].to_vec())?;
    let t2 = EqChain::new(e2.size(), e2.partitions()[..levels].to_vec())?;
    let s = build_orbit_tree(&t1, false, &|x| x.to_string());
    let t = build_orbit_tree(&t2, false, &|x| x.to_string());

    let all_hom = homomorphism.iter().all(|&h| h);
    let all_red = reduction.iter().all(|&r| r);
    let mut tree_map = None;
    if all_hom {
        let mut f = BTreeMap::new();
        for (id, info) in s.infos().iter().enumerate() {
            let target = t
                .node_of(info.level, theta[info.class[0]])
                .expect("image of a nonsingleton class under an injective homomorphism is nonsingleton");
            f.insert(id, target);
        }
        tree_map = Some(
            s.tree()
                .check_map(t.tree(), &f)
                .map_err(|e| GroupError::BadMap(e.to_string()))?,
        );
    }
    let class = tree_map.map_or(MapClass::None, |m| m.class());
    let holds = match tree_map {
        None => true,
        Some(m) => {
            m.order_preserving
                && m.lipschitz
                && m.rank_bound_holds == Some(true)
                && (!all_red || m.embedding)
                && (!(all_red && bijective) || m.isomorphism)
        }
    };
    Ok(ReductionReport {
        levels,
        homomorphism,
        reduction,
        bijective,
        tree_map,
        class,
        holds,
    })
}
