use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::ConstructionError;
use crate::trees::MapClass;
use crate::groups::{
    orbit_tree_of, reduction_transfer, CayleyTable, EqChain, Perm, PermGroup, PermGroupChain, Points, Subgroup,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountableReport {
    pub gamma_order: usize,
    pub g_order: usize,
    pub a_order: usize,
    pub embedding_injective: bool,
    pub embedding_homomorphism: bool,
    pub rank_a: usize,
    pub rank_g: usize,
    /// Levels `≥ 1` of the `A` tree against the `G` tree, node for node.
    pub upper_part_isomorphic: bool,
    /// `None` when the `G` tree is empty and the identity is vacuous.
    pub rank_shift_holds: Option<bool>,
}

impl CountableReport {
    pub fn holds(&self) -> bool {
        self.embedding_injective
            && self.embedding_homomorphism
            && self.upper_part_isomorphic
            && self.rank_shift_holds != Some(false)
    }
}

pub struct CountableSemidirect {
    pub chain: PermGroupChain,
    pub g_chain: PermGroupChain,
    pub report: CountableReport,
}

/// `A = G ⋉ Γ` for `G ≤ Aut(Γ)`, embedded in `Sym(Γ)` by `φ(g,γ)(λ) = γ·g(λ)`.
/// `G_n` fixes `γ₀,…,γ_{n−1}` (element order, `γ₀` the identity) and the
/// chain on `A` is `A₀ = A`, `A_{n+1} = G_n × {1}`.
pub fn countable_semidirect(gamma: &CayleyTable, generators: &[Perm], cap: usize) -> Result<CountableSemidirect, ConstructionError> {
    gamma.validate()?;
    let n = gamma.order;
    for p in generators {
        if p.degree() != n {
            return Err(ConstructionError::BadAction(format!("automorphism {p} has wrong degree")));
        }
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if p.apply(gamma.mul(a, b) as usize) as u32 != gamma.mul(p.apply(a as usize) as u32, p.apply(b as usize) as u32) {
                    return Err(ConstructionError::BadAction(format!("{p} is not an automorphism")));
                }
            }
        }
    }
    let g = Arc::new(PermGroup::generate(n, generators, cap)?);
    let g_chain = PermGroupChain::stabilizer_chain(g.clone());
    let phi = |x: u32, y: u32| -> Perm {
        let gp = g.perm(x);
        Perm::from_images((0..n).map(|l| gamma.mul(y, gp.apply(l) as u32)).collect()).expect("bijective")
    };
    let mut images = Vec::with_capacity(g.order() * n);
    for x in 0..g.order() as u32 {
        for y in 0..n as u32 {
            images.push(phi(x, y));
        }
    }
    if images.len() > cap {
        return Err(ConstructionError::CapExceeded {
            cap,
            needed: images.len(),
        });
    }
    let distinct: BTreeSet<&Perm> = images.iter().collect();
    let embedding_injective = distinct.len() == images.len();
    let mut embedding_homomorphism = true;
    'outer: for x1 in 0..g.order() as u32 {
        for y1 in 0..n as u32 {
            for x2 in 0..g.order() as u32 {
                for y2 in 0..n as u32 {
                    // (g,γ)(h,δ) = (gh, γ·g(δ))
                    let prod = phi(g.mul(x1, x2), gamma.mul(y1, g.perm(x1).apply(y2 as usize) as u32));
                    if prod != phi(x1, y1).compose(&phi(x2, y2)) {
                        embedding_homomorphism = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    let a = Arc::new(PermGroup::generate(n, &images, cap)?);
    let mut levels: Vec<Subgroup> = vec![a.full()];
    for gl in g_chain.levels() {
        levels.push(a.subgroup_of_perms(&gl.elements().iter().map(|&e| g.perm(e).clone()).collect::<Vec<_>>())?);
    }
    let chain = PermGroupChain::from_subgroups(levels);

    let points = Points::new(a.clone());
    let ta = orbit_tree_of(&points, chain.levels(), false);
    let g_points = Points::new(g.clone());
    let tg = orbit_tree_of(&g_points, g_chain.levels(), false);

    let upper = EqChain::of_subgroups(&points, &chain.levels()[1..]);
    let lower = EqChain::of_subgroups(&g_points, g_chain.levels());
    let identity: Vec<usize> = (0..n).collect();
    let red = reduction_transfer(&upper, &lower, &identity)?;
    let upper_part_isomorphic = red.class == MapClass::Isomorphism;

    let rank_shift_holds = (!tg.is_empty()).then(|| ta.rank() == tg.rank() + 1);
    let report = CountableReport {
        gamma_order: n,
        g_order: g.order(),
        a_order: a.order(),
        embedding_injective,
        embedding_homomorphism,
        rank_a: ta.rank(),
        rank_g: tg.rank(),
        upper_part_isomorphic,
        rank_shift_holds,
    };
    Ok(CountableSemidirect {
        chain,
        g_chain,
        report,
    })
}
